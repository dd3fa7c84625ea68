use proptest::prelude::*;

use sinrcap::generators::{gen_gadget, gen_random_euclidean, EuclideanParams, GadgetParams, Graph};
use sinrcap::oracle::{min_schedule, opt_fixed, opt_pc};
use sinrcap::{
    algorithm_c, algorithm_pc, is_feasible, schedule_first_fit, schedule_repeated_capacity, AlgCConfig, Instance,
    Instance64, Mode, PowerAssignment, PowerAssignment64, Regime, SignalStrength,
};

fn small(n: usize, spread: f64, alpha: f64, mode: Mode, seed: u64) -> Instance64 {
    let region = (n as f64).sqrt() * spread;
    gen_random_euclidean(&EuclideanParams::new(n, region, 1.0, 6.0, alpha, seed).with_mode(mode)).unwrap()
}

fn power(i: usize) -> PowerAssignment64 {
    [PowerAssignment64::uniform(), PowerAssignment64::mean(), PowerAssignment64::linear()][i % 3].clone()
}

fn mode(bi: bool) -> Mode {
    if bi {
        Mode::Bidirectional
    } else {
        Mode::Unidirectional
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracles_bound_the_algorithms(
        n in 1usize..=9, spread in 2.0f64..12.0, alpha in 1.5f64..5.0, bi: bool, p in 0usize..3, seed: u64,
    ) {
        let inst = small(n, spread, alpha, mode(bi), seed);
        let ids = inst.ids();
        let pw = power(p);
        let one = SignalStrength::feasible();
        let x = algorithm_c(&inst, &ids, &pw, &AlgCConfig::default()).unwrap();
        let fixed = opt_fixed(&inst, &ids, &pw, one).unwrap();
        prop_assert!(fixed.opt_size >= x.size());
        prop_assert!(is_feasible(&fixed.witness, &pw, &inst, one).unwrap().feasible);
        // a set feasible under some fixed power is feasible under power control
        let pc = opt_pc(&inst, &ids).unwrap();
        prop_assert!(pc.opt_size >= fixed.opt_size);
        if !bi {
            prop_assert!(pc.opt_size >= algorithm_pc(&inst, &ids, &AlgCConfig::default()).unwrap().size());
        }
    }

    #[test]
    fn min_schedule_is_a_lower_bound(
        n in 1usize..=8, spread in 1.0f64..8.0, alpha in 1.5f64..5.0, bi: bool, p in 0usize..3, seed: u64,
    ) {
        let inst = small(n, spread, alpha, mode(bi), seed);
        let ids = inst.ids();
        let pw = power(p);
        let m = min_schedule(&inst, &ids, &pw).unwrap();
        let ff = schedule_first_fit(&inst, &ids, &pw).unwrap();
        let rc = schedule_repeated_capacity(&inst, &ids, &Regime::Fixed(pw.clone())).unwrap();
        prop_assert!(m >= 1);
        prop_assert!(m <= ff.len(), "min {} first-fit {}", m, ff.len());
        prop_assert!(m <= rc.len(), "min {} repeated {}", m, rc.len());
    }

    #[test]
    fn schedules_partition_the_links(
        n in 1usize..=40, spread in 1.0f64..10.0, alpha in 1.5f64..5.0, bi: bool, p in 0usize..3, seed: u64,
    ) {
        let inst = small(n, spread, alpha, mode(bi), seed);
        let ids = inst.ids();
        let regime = if bi { Regime::PcBi } else { Regime::PcUni };
        for s in [
            schedule_first_fit(&inst, &ids, &power(p)).unwrap(),
            schedule_repeated_capacity(&inst, &ids, &Regime::Fixed(power(p))).unwrap(),
            schedule_repeated_capacity(&inst, &ids, &regime).unwrap(),
        ] {
            let mut seen: Vec<usize> = s.slots.iter().flat_map(|t| t.links.iter().copied()).chain(s.weak.iter().copied()).collect();
            seen.sort_unstable();
            prop_assert_eq!(&seen, &ids);
            prop_assert!(s.slots.iter().all(|t| !t.links.is_empty()));
            prop_assert!(s.verify(&inst).unwrap());
        }
    }

    #[test]
    fn runs_are_reproducible(n in 1usize..=30, alpha in 1.5f64..5.0, seed: u64) {
        let a = small(n, 5.0, alpha, Mode::Unidirectional, seed);
        let b = small(n, 5.0, alpha, Mode::Unidirectional, seed);
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let cfg = AlgCConfig::default();
        prop_assert_eq!(
            algorithm_pc(&a, &a.ids(), &cfg).unwrap().output,
            algorithm_pc(&b, &b.ids(), &cfg).unwrap().output
        );
        let sa = schedule_first_fit(&a, &a.ids(), &PowerAssignment64::mean()).unwrap();
        let sb = schedule_first_fit(&b, &b.ids(), &PowerAssignment64::mean()).unwrap();
        prop_assert_eq!(serde_json::to_string(&sa).unwrap(), serde_json::to_string(&sb).unwrap());
    }

    #[test]
    fn single_precision_outputs_are_feasible(n in 1usize..=30, alpha in 1.5f32..5.0, bi: bool, seed: u64) {
        let region = (n as f32).sqrt() * 6.0;
        let inst: Instance<f32> =
            gen_random_euclidean(&EuclideanParams::new(n, region, 1.0, 6.0, alpha, seed).with_mode(mode(bi))).unwrap();
        let ids = inst.ids();
        let one = SignalStrength::feasible();
        let pw = PowerAssignment::<f32>::mean();
        let r = algorithm_c(&inst, &ids, &pw, &AlgCConfig::default()).unwrap();
        prop_assert!(is_feasible(&r.output, &r.power, &inst, one).unwrap().feasible);
        let s = schedule_first_fit(&inst, &ids, &pw).unwrap();
        prop_assert!(s.verify(&inst).unwrap());
    }
}

#[test]
fn five_cycle_gadget_optimum_is_two() {
    let graph = Graph::cycle(5);
    let alpha = 5f64.log2() + 1.0;
    let inst = gen_gadget(&GadgetParams { graph, alpha }).unwrap();
    let r = opt_fixed(&inst, &inst.ids(), &PowerAssignment64::uniform(), SignalStrength::feasible()).unwrap();
    assert_eq!(r.opt_size, 2);
    let w = &r.witness;
    assert!(w[1] - w[0] != 1 && w[1] - w[0] != 4, "{w:?} is not independent in C5");
}

#[test]
fn single_and_double_precision_agree() {
    let p64 = EuclideanParams::new(25, 25.0, 1.0, 5.0, 3.0, 11);
    let p32 = EuclideanParams::new(25, 25.0f32, 1.0, 5.0, 3.0, 11);
    let a = gen_random_euclidean(&p64).unwrap();
    let b: Instance<f32> = gen_random_euclidean(&p32).unwrap();
    let x64 = algorithm_c(&a, &a.ids(), &PowerAssignment64::uniform(), &AlgCConfig::default()).unwrap();
    let x32 = algorithm_c(&b, &b.ids(), &PowerAssignment::<f32>::uniform(), &AlgCConfig::default()).unwrap();
    // rounding can flip a comparison at the margin, never by much
    let diff = x64.output.iter().filter(|v| !x32.output.contains(v)).count();
    assert!(diff <= 2, "{:?} vs {:?}", x64.output, x32.output);
}

#[test]
fn weak_links_never_enter_a_slot() {
    // enough noise that the longer links cannot beat it at unit power
    let inst: Instance64 = gen_random_euclidean(
        &EuclideanParams::new(12, 60.0, 1.0, 8.0, 3.0, 4).with_physics(1.0, 5e-3),
    )
    .unwrap();
    let s = schedule_first_fit(&inst, &inst.ids(), &PowerAssignment64::uniform()).unwrap();
    assert!(!s.weak.is_empty());
    for slot in &s.slots {
        assert!(slot.links.iter().all(|l| !s.weak.contains(l)));
    }
    assert!(s.verify(&inst).unwrap());
}
