//! Instance generators: random Euclidean and random-metric instances, the
//! scheduling lower-bound family, the independent-set gadget, and red/blue
//! fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affectance::{AffectanceModel, SignalStrength};
use crate::error::{invalid, Error, Result};
use crate::instance::{Instance, Mode, PhysicalParams};
use crate::matrix::PowerCertificate;
use crate::metric::MetricSpace;
use crate::power::PowerAssignment;
use crate::scalar::{within, Scalar};

/// Parameters of the lower-bound family: one long-range link followed by
/// groups `S_1..S_K` with `|S_k| = 4^(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundParams<T> {
    pub k: usize,
    pub gamma_lb: T,
    pub alpha: T,
}

impl<T: Scalar> LowerBoundParams<T> {
    pub fn new(k: usize, alpha: T) -> Self {
        LowerBoundParams {
            k,
            gamma_lb: T::lit(14.0),
            alpha,
        }
    }
}

/// Link ids of `S_1..S_K`; link 0 is the distinguished link.
pub fn lower_bound_groups(k: usize) -> Vec<Vec<usize>> {
    let mut next = 1;
    (1..=k)
        .map(|j| {
            let size = 1usize << (2 * (j - 1));
            let g: Vec<usize> = (next..next + size).collect();
            next += size;
            g
        })
        .collect()
}

struct LowerBoundLayout<T> {
    /// Group index per link, 0 for the distinguished link.
    class: Vec<usize>,
    /// `h` per link; unused for link 0.
    h: Vec<T>,
    /// First link of each class.
    rep: Vec<usize>,
}

impl<T: Scalar> LowerBoundLayout<T> {
    fn new(p: &LowerBoundParams<T>) -> Result<Self> {
        if p.k == 0 {
            return Err(invalid("lower-bound family needs K >= 1"));
        }
        if !(p.gamma_lb > T::zero() && p.alpha > T::zero()) {
            return Err(invalid("gamma and alpha must be positive"));
        }
        let groups = lower_bound_groups(p.k);
        let n = 1 + groups.iter().map(Vec::len).sum::<usize>();
        let mut class = vec![0; n];
        let mut h = vec![T::zero(); n];
        let mut rep = vec![0];
        for (j, g) in groups.iter().enumerate() {
            let hk = (p.gamma_lb * T::from_usize(g.len()).unwrap()).powf(T::one() / p.alpha);
            rep.push(g[0]);
            for &i in g {
                class[i] = j + 1;
                h[i] = hk;
            }
        }
        Ok(LowerBoundLayout { class, h, rep })
    }

    fn n(&self) -> usize {
        self.class.len()
    }

    /// Stated distance between points `x` and `y` (sender of link `i` is
    /// point `2i`, receiver `2i+1`), if the construction fixes one.
    fn stated(&self, x: usize, y: usize) -> Option<T> {
        let (a, b) = (x / 2, y / 2);
        if x % 2 == y % 2 {
            return None;
        }
        if a == b {
            return Some(T::one());
        }
        Some(match (a, b) {
            (0, o) | (o, 0) => self.h[o],
            _ => self.h[a] + self.h[b],
        })
    }

    fn constraints(&self) -> Vec<(usize, usize, T)> {
        let v = 2 * self.n();
        let mut out = Vec::new();
        for x in 0..v {
            for y in x + 1..v {
                if let Some(w) = self.stated(x, y) {
                    out.push((x, y, w));
                }
            }
        }
        out
    }

    /// Shortest-path distances from `src` over the stated edges, by dense
    /// Dijkstra.
    fn dijkstra(&self, src: usize) -> Vec<T> {
        let v = 2 * self.n();
        let mut dist = vec![T::infinity(); v];
        let mut done = vec![false; v];
        dist[src] = T::zero();
        for _ in 0..v {
            let mut u = usize::MAX;
            for x in 0..v {
                if !done[x] && (u == usize::MAX || dist[x] < dist[u]) {
                    u = x;
                }
            }
            done[u] = true;
            for y in 0..v {
                if !done[y] {
                    if let Some(w) = self.stated(u, y) {
                        let cand = dist[u] + w;
                        if cand < dist[y] {
                            dist[y] = cand;
                        }
                    }
                }
            }
        }
        dist
    }

    /// Full closure. The constraints are invariant under permuting links
    /// inside one group, so one Dijkstra run per (group, endpoint type)
    /// suffices; other rows are read through the swap of the link with its
    /// group representative.
    fn closure(&self) -> Vec<T> {
        let n = self.n();
        let v = 2 * n;
        let from_rep: Vec<[Vec<T>; 2]> = self
            .rep
            .iter()
            .map(|&r| [self.dijkstra(2 * r), self.dijkstra(2 * r + 1)])
            .collect();
        let mut flat = vec![T::zero(); v * v];
        for x in 0..v {
            let (i, t) = (x / 2, x % 2);
            let c = self.class[i];
            let r = self.rep[c];
            let base = &from_rep[c][t];
            let row = &mut flat[x * v..(x + 1) * v];
            for (y, cell) in row.iter_mut().enumerate() {
                let j = y / 2;
                let j = if j == i {
                    r
                } else if j == r {
                    i
                } else {
                    j
                };
                *cell = base[2 * j + y % 2];
            }
        }
        flat
    }
}

/// All distance constraints of the lower-bound family as point pairs.
pub fn lower_bound_constraints<T: Scalar>(params: &LowerBoundParams<T>) -> Result<Vec<(usize, usize, T)>> {
    Ok(LowerBoundLayout::new(params)?.constraints())
}

/// Builds the lower-bound instance (unit links, `beta = 1`, `N = 0`) and its
/// power certificate `p = 1` for link 0 and `2^-k` on `S_k`.
///
/// Link-to-link distances are `h_i = (gamma |S_k|)^(1/alpha)` between a link
/// of `S_k` and link 0, and `h_i + h_j` between two other links; the point
/// metric is their shortest-path closure.
pub fn gen_lower_bound<T: Scalar>(params: &LowerBoundParams<T>) -> Result<(Instance<T>, PowerCertificate<T>)> {
    let layout = LowerBoundLayout::new(params)?;
    let n = layout.n();
    let v = 2 * n;
    let flat = layout.closure();
    for x in 0..v {
        for y in 0..v {
            if let Some(w) = layout.stated(x, y) {
                if flat[x * v + y] != w {
                    return Err(Error::InvalidMetric(format!(
                        "closure changed d({x},{y}) from {w} to {}",
                        flat[x * v + y]
                    )));
                }
            }
        }
    }
    let metric = MetricSpace::from_flat(v, flat)?;
    let ends: Vec<(usize, usize)> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
    let inst = Instance::new(
        metric,
        &ends,
        PhysicalParams::new(params.alpha, T::one(), T::zero())?,
        Mode::Unidirectional,
    )?;
    let half = T::lit(0.5);
    let p = layout.class.iter().map(|&c| half.powi(c as i32)).collect();
    Ok((inst, PowerCertificate::new(p)?))
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(invalid(format!("bad edge ({a}, {b}) for {n} vertices")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(invalid(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn cycle(n: usize) -> Self {
        Graph {
            n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    /// Erdős–Rényi graph with edge probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        Graph { n, edges }
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n]; self.n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        let adj = self.adjacency();
        set.iter().all(|&a| set.iter().all(|&b| !adj[a][b]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetParams<T> {
    pub graph: Graph,
    pub alpha: T,
}

/// Threshold of the gadget; noise is zero.
pub const GADGET_BETA: f64 = 1.5;

/// One unit link per vertex. Points of different links are at distance 1
/// when the vertices are adjacent and 2 otherwise, so under uniform power
/// a link set is feasible exactly when its vertices are independent.
/// Requires `alpha >= lg n + 1`.
pub fn gen_gadget<T: Scalar>(params: &GadgetParams<T>) -> Result<Instance<T>> {
    let n = params.graph.n;
    if n == 0 {
        return Err(invalid("gadget needs at least one vertex"));
    }
    let need = (n as f64).log2() + 1.0;
    if params.alpha.as_f64() < need * (1.0 - T::feasibility_tol().as_f64()) {
        return Err(invalid(format!("gadget on {n} vertices needs alpha >= {need}")));
    }
    let adj = params.graph.adjacency();
    let rows = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let (a, b) = (x / 2, y / 2);
                    if x == y {
                        T::zero()
                    } else if a == b || adj[a][b] {
                        T::one()
                    } else {
                        T::lit(2.0)
                    }
                })
                .collect()
        })
        .collect();
    let ends: Vec<_> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
    Instance::new(
        MetricSpace::explicit(rows)?,
        &ends,
        PhysicalParams::new(params.alpha, T::lit(GADGET_BETA), T::zero())?,
        Mode::Unidirectional,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanParams<T> {
    pub n: usize,
    /// Side of the square holding the senders.
    pub region: T,
    pub min_length: T,
    pub max_length: T,
    pub alpha: T,
    pub beta: T,
    pub noise: T,
    pub mode: Mode,
    pub seed: u64,
}

impl<T: Scalar> EuclideanParams<T> {
    pub fn new(n: usize, region: T, min_length: T, max_length: T, alpha: T, seed: u64) -> Self {
        EuclideanParams {
            n,
            region,
            min_length,
            max_length,
            alpha,
            beta: T::one(),
            noise: T::zero(),
            mode: Mode::Unidirectional,
            seed,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_physics(mut self, beta: T, noise: T) -> Self {
        self.beta = beta;
        self.noise = noise;
        self
    }
}

fn sample_link<T: Scalar>(rng: &mut ChaCha8Rng, region: f64, min: f64, max: f64) -> [Vec<T>; 2] {
    let sx = rng.gen_range(0.0..=region);
    let sy = rng.gen_range(0.0..=region);
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let len = if max > min { rng.gen_range(min..=max) } else { min };
    [
        vec![T::lit(sx), T::lit(sy)],
        vec![T::lit(sx + len * theta.cos()), T::lit(sy + len * theta.sin())],
    ]
}

/// Senders uniform in the square `[0, region]^2`; each receiver at a
/// uniform direction and a length uniform in `[min_length, max_length]`.
pub fn gen_random_euclidean<T: Scalar>(p: &EuclideanParams<T>) -> Result<Instance<T>> {
    if !(p.region > T::zero() && p.min_length > T::zero() && p.max_length >= p.min_length) {
        return Err(invalid("region and length range must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (region, min, max) = (p.region.as_f64(), p.min_length.as_f64(), p.max_length.as_f64());
    let coords: Vec<Vec<T>> = (0..p.n).flat_map(|_| sample_link(&mut rng, region, min, max)).collect();
    let ends: Vec<_> = (0..p.n).map(|i| (2 * i, 2 * i + 1)).collect();
    Instance::new(
        MetricSpace::euclidean(2, coords)?,
        &ends,
        PhysicalParams::new(p.alpha, p.beta, p.noise)?,
        p.mode,
    )
}

/// Random metric on `2n` points: independent edge weights uniform in
/// `[1, max_weight]`, closed under shortest paths. Link `i` joins points
/// `2i` and `2i+1`.
pub fn gen_random_metric<T: Scalar>(n: usize, max_weight: T, alpha: T, mode: Mode, seed: u64) -> Result<Instance<T>> {
    if n == 0 || max_weight < T::one() {
        return Err(invalid("random metric needs n >= 1 and max_weight >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = 2 * n;
    let hi = max_weight.as_f64();
    let mut edges = Vec::new();
    for a in 0..pts {
        for b in a + 1..pts {
            let w = if hi > 1.0 { rng.gen_range(1.0..=hi) } else { 1.0 };
            edges.push((a, b, T::lit(w)));
        }
    }
    let metric = MetricSpace::shortest_path_closure(pts, &edges)?;
    let ends: Vec<_> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
    Instance::new(metric, &ends, PhysicalParams::new(alpha, T::one(), T::zero())?, mode)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RedBlueParams<T> {
    pub red: usize,
    pub blue: usize,
    pub alpha: T,
    pub power: PowerAssignment<T>,
    pub seed: u64,
    /// Candidate draws allowed per blue link.
    pub attempts: usize,
}

impl<T: Scalar> RedBlueParams<T> {
    pub fn new(red: usize, blue: usize, alpha: T, seed: u64) -> Self {
        RedBlueParams {
            red,
            blue,
            alpha,
            power: PowerAssignment::mean(),
            seed,
            attempts: 10_000,
        }
    }
}

/// Disjoint red and blue links in one Euclidean instance (`beta = 1`,
/// `N = 0`); the blue set is a `3^alpha`-signal set under `power`.
#[derive(Debug, Clone, PartialEq)]
pub struct RedBlueFixture<T> {
    pub instance: Instance<T>,
    pub power: PowerAssignment<T>,
    pub red: Vec<usize>,
    pub blue: Vec<usize>,
}

/// Per-blue-link comparisons of red affectance against blue affectance,
/// with red links restricted to those no longer than the blue link.
#[derive(Debug, Clone, PartialEq)]
pub struct RedBlueReport {
    /// Blue links meeting the combined in+out bound.
    pub combined: Vec<usize>,
    /// Blue links meeting the incoming bound.
    pub incoming: Vec<usize>,
    /// Blue links meeting the outgoing bound.
    pub outgoing: Vec<usize>,
}

impl<T: Scalar> RedBlueFixture<T> {
    pub fn report(&self) -> Result<RedBlueReport> {
        let model = AffectanceModel::new(&self.instance, &self.power)?;
        let k = T::lit(3.0).powf(self.instance.alpha());
        let mut rep = RedBlueReport {
            combined: Vec::new(),
            incoming: Vec::new(),
            outgoing: Vec::new(),
        };
        for &b in &self.blue {
            let lb = self.instance.length(b);
            let shorter: Vec<usize> = self.red.iter().copied().filter(|&r| self.instance.length(r) <= lb).collect();
            let (rin, rout) = (model.in_sum(b, &shorter)?, model.out_sum(b, &shorter)?);
            let (bin, bout) = (model.in_sum(b, &self.blue)?, model.out_sum(b, &self.blue)?);
            if within(rin + rout, k * (bin + bout)) {
                rep.combined.push(b);
            }
            if within(rin, k * bin) {
                rep.incoming.push(b);
            }
            if within(rout, k * bout) {
                rep.outgoing.push(b);
            }
        }
        Ok(rep)
    }
}

/// Draws blue links one at a time, redrawing each until the blue set stays
/// `3^alpha`-signal, then adds arbitrary red links. Fails with
/// [`Error::FixtureFailure`] when a blue link exhausts its attempts.
const REGION_RETRIES: usize = 4;

fn place_blue<T: Scalar>(
    rng: &mut ChaCha8Rng,
    p: &RedBlueParams<T>,
    region: f64,
    (min, max): (f64, f64),
    build: impl Fn(Vec<Vec<T>>) -> Result<Instance<T>>,
    strength: SignalStrength<T>,
) -> std::result::Result<Vec<Vec<T>>, String> {
    let mut coords: Vec<Vec<T>> = Vec::new();
    for b in 0..p.blue {
        let mut placed = false;
        for _ in 0..p.attempts {
            let mut trial = coords.clone();
            trial.extend(sample_link(rng, region, min, max));
            let feasible = build(trial.clone())
                .and_then(|inst| {
                    let ids: Vec<usize> = (0..=b).collect();
                    AffectanceModel::new(&inst, &p.power)?.feasibility(&ids, strength)
                })
                .map_err(|e| e.to_string())?
                .feasible;
            if feasible {
                coords = trial;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(format!("blue link {b} not placed after {} attempts", p.attempts));
        }
    }
    Ok(coords)
}

pub fn gen_red_blue_fixture<T: Scalar>(p: &RedBlueParams<T>) -> Result<RedBlueFixture<T>> {
    if p.blue == 0 {
        return Err(invalid("red-blue fixture needs blue links"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let total = p.red + p.blue;
    let region = 6.0 * (total as f64).sqrt() * 3f64.powf(p.alpha.as_f64() / 2.0).max(1.0);
    let (min, max) = (1.0, 4.0);
    let physics = PhysicalParams::new(p.alpha, T::one(), T::zero())?;
    let strength = SignalStrength::new(T::lit(3.0).powf(p.alpha))?;
    let build = |coords: Vec<Vec<T>>| -> Result<Instance<T>> {
        let ends: Vec<_> = (0..coords.len() / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        Instance::new(MetricSpace::euclidean(2, coords)?, &ends, physics, Mode::Unidirectional)
    };

    // at small alpha interference decays slowly, so a crowded region may not
    // admit the blue set; restart in a region twice as wide
    let mut region = region;
    let mut coords: Vec<Vec<T>> = Vec::new();
    let mut failure = String::new();
    for _ in 0..REGION_RETRIES {
        match place_blue(&mut rng, p, region, (min, max), build, strength) {
            Ok(c) => {
                coords = c;
                failure.clear();
                break;
            }
            Err(msg) => {
                failure = msg;
                region *= 2.0;
            }
        }
    }
    if !failure.is_empty() {
        return Err(Error::FixtureFailure(failure));
    }
    for _ in 0..p.red {
        coords.extend(sample_link(&mut rng, region, min, max));
    }
    let instance = build(coords)?;
    let blue: Vec<usize> = (0..p.blue).collect();
    let red: Vec<usize> = (p.blue..total).collect();
    let model = AffectanceModel::new(&instance, &p.power)?;
    if !model.feasibility(&blue, strength)?.feasible {
        return Err(Error::FixtureFailure("blue set lost its signal strength".into()));
    }
    Ok(RedBlueFixture {
        instance,
        power: p.power.clone(),
        red,
        blue,
    })
}
