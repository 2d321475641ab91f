//! The multi-round construction algorithm for the supercritical regime.
//!
//! Each round grows a percolating set `X` from a single vertex of the pool.
//! At step `t` the red neighbours `Q` of `x_t` outside `X ∪ R` are revealed;
//! those with a blue edge back to `x_1..x_t` join `X` (set `B`), the rest
//! join the frontier `R`. Frontier vertices with a blue edge to `x_t` also
//! move into `X` (set `C`). A round stops once the step index overtakes
//! `|X|` or `|X|` reaches `k1`; its `X` is then removed from the pool so that
//! later rounds never look at the same vertex pairs again.

use crate::error::{param, Error, Result};
use crate::graph::{generate_double_graph, induced_double_graph, Colour, DoubleGraph, GenParams, Vertex};
use crate::jigsaw::{percolates, run_jigsaw};
use crate::rng::derive_seed;
use serde::Serialize;

const CONSTRUCTION_STREAM: u64 = 101;
const WHOLE_GRAPH_STREAM: u64 = 102;

/// Largest `n` for which the pair-query audit may be enabled.
pub const AUDIT_CAP: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupercriticalParams {
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub epsilon: f64,
    /// `ln ln n`.
    pub omega: f64,
    pub delta: f64,
    pub eps_star: f64,
    /// `⌈2 ln n⌉`.
    pub k0: usize,
    /// `⌈1 / (ω p1_1)⌉`, saturating when `p1 = 0`.
    pub k1: usize,
    /// `⌊n p1_1 / ω⌋`.
    pub rho: usize,
    pub p1_1: f64,
    pub p1_2: f64,
    pub p2_1: f64,
    pub p2_2: f64,
    /// `n - ⌈n^(1-δ)⌉`, the size of every round's pool.
    pub pool_size: usize,
    /// `⌊n^(1-δ)⌋`: rounds continue while fewer vertices than this have
    /// been removed.
    pub removal_budget: usize,
}

impl SupercriticalParams {
    /// `n p1_1`, the expected red degree inside the pool.
    pub fn mean_red_degree(&self) -> f64 {
        self.n as f64 * self.p1_1
    }
}

pub fn derive_params(n: usize, p1: f64, p2: f64, epsilon: f64) -> Result<SupercriticalParams> {
    if n < 16 {
        return Err(param(format!("need n >= 16 so that ln ln n > 0, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(param(format!("need 0 < epsilon < 2, got {epsilon}")));
    }
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(param(format!("{name} = {p} outside [0, 1]")));
        }
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let omega = ln_n.ln();
    let delta = epsilon / 20.0;
    let p1_1 = (1.0 - epsilon / 2.0) * p1;
    let p1_2 = epsilon / 2.0 * p1;
    if omega * p1_1 * 2.0 * ln_n >= 1.0 {
        return Err(param(format!(
            "k0 < k1 needs ω p1_1 2 ln n < 1, got {:.4}",
            omega * p1_1 * 2.0 * ln_n
        )));
    }
    let k1_real = 1.0 / (omega * p1_1);
    let k1 = if k1_real.is_finite() && k1_real < usize::MAX as f64 {
        k1_real.ceil() as usize
    } else {
        usize::MAX
    };
    let excluded = nf.powf(1.0 - delta);
    Ok(SupercriticalParams {
        n,
        p1,
        p2,
        epsilon,
        omega,
        delta,
        eps_star: epsilon / 10.0,
        k0: (2.0 * ln_n).ceil() as usize,
        k1,
        rho: (nf * p1_1 / omega).floor() as usize,
        p1_1,
        p1_2,
        p2_1: p2,
        p2_2: 0.0,
        pool_size: n - excluded.ceil() as usize,
        removal_budget: excluded.floor() as usize,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub t: usize,
    pub x: Vertex,
    pub q: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub c: Vec<Vertex>,
    pub frontier_before: usize,
    pub frontier_after: usize,
    /// `s_t = |X_t|`.
    pub size_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionRound {
    /// 1-based round index.
    pub index: usize,
    /// The pool is every surviving vertex with label at most this.
    pub pool_threshold: Vertex,
    pub pool_size: usize,
    /// `x_1, x_2, ...` in the order they joined `X`.
    pub order: Vec<Vertex>,
    /// `R_T`, ascending.
    pub frontier: Vec<Vertex>,
    pub steps: Vec<StepRecord>,
    pub survived_to_k1: bool,
}

impl ConstructionRound {
    /// `T`, the number of steps run.
    pub fn steps_run(&self) -> usize {
        self.steps.len()
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }
}

/// Tally of revealed vertex pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryAudit {
    pub red_queries: u64,
    pub blue_queries: u64,
    pub red_repeats: u64,
    pub blue_repeats: u64,
}

impl QueryAudit {
    pub fn query_once(&self) -> bool {
        self.red_repeats == 0 && self.blue_repeats == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionRun {
    pub rounds: Vec<ConstructionRound>,
    pub audit: Option<QueryAudit>,
}

impl ConstructionRun {
    pub fn total_steps(&self) -> usize {
        self.rounds.iter().map(ConstructionRound::steps_run).sum()
    }
}

struct PairSet {
    bits: Vec<u64>,
}

impl PairSet {
    fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        PairSet {
            bits: vec![0; pairs.div_ceil(64)],
        }
    }

    /// Marks `{u, v}`; returns false if it was already marked.
    fn insert(&mut self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = (u.min(v) as usize - 1, u.max(v) as usize - 1);
        let idx = b * (b - 1) / 2 + a;
        let (word, bit) = (idx / 64, idx % 64);
        let fresh = self.bits[word] >> bit & 1 == 0;
        self.bits[word] |= 1 << bit;
        fresh
    }
}

struct Auditor {
    red: PairSet,
    blue: PairSet,
    tally: QueryAudit,
}

impl Auditor {
    fn red(&mut self, u: Vertex, v: Vertex) {
        self.tally.red_queries += 1;
        if !self.red.insert(u, v) {
            self.tally.red_repeats += 1;
        }
    }

    fn blue(&mut self, u: Vertex, v: Vertex) {
        self.tally.blue_queries += 1;
        if !self.blue.insert(u, v) {
            self.tally.blue_repeats += 1;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Free,
    InX,
    InR,
}

/// Runs every round on `g`, which should be sampled with red probability
/// `p1_1`. With `audit` set, every revealed pair is recorded in per-colour
/// bitmaps (`n <= AUDIT_CAP`).
pub fn run_construction(g: &DoubleGraph, params: &SupercriticalParams, audit: bool) -> Result<ConstructionRun> {
    let n = g.n();
    if n != params.n {
        return Err(Error::Input(format!(
            "graph has {n} vertices but the parameters are for {}",
            params.n
        )));
    }
    if audit && n > AUDIT_CAP {
        return Err(Error::Capacity {
            what: "n (query audit)",
            value: n,
            cap: AUDIT_CAP,
        });
    }
    let mut auditor = audit.then(|| Auditor {
        red: PairSet::new(n),
        blue: PairSet::new(n),
        tally: QueryAudit::default(),
    });

    let mut alive = vec![true; n + 1];
    let mut mark = vec![Mark::Free; n + 1];
    // Position of a vertex in the current round's order.
    let mut pos = vec![usize::MAX; n + 1];
    let mut threshold = params.pool_size as Vertex;
    let mut removed = 0usize;
    let mut rounds = Vec::new();

    while removed < params.removal_budget && params.pool_size > 0 {
        let x1 = (1..=threshold).find(|&v| alive[v as usize]).expect("pool is non-empty");
        let in_pool = |v: Vertex, alive: &[bool]| v <= threshold && alive[v as usize];
        let mut order = vec![x1];
        let mut frontier: Vec<Vertex> = Vec::new();
        mark[x1 as usize] = Mark::InX;
        pos[x1 as usize] = 0;
        let mut steps = Vec::new();
        let mut t = 1;
        while t <= order.len() && order.len() < params.k1 {
            let xt = order[t - 1];
            if let Some(a) = auditor.as_mut() {
                for v in 1..=threshold {
                    if alive[v as usize] && mark[v as usize] == Mark::Free {
                        a.red(xt, v);
                    }
                }
            }
            let q: Vec<Vertex> = g
                .neighbours(Colour::Red, xt)
                .iter()
                .copied()
                .filter(|&v| in_pool(v, &alive) && mark[v as usize] == Mark::Free)
                .collect();
            let mut b = Vec::new();
            for &v in &q {
                if let Some(a) = auditor.as_mut() {
                    for &x in &order[..t] {
                        a.blue(v, x);
                    }
                }
                if g.neighbours(Colour::Blue, v).iter().any(|&w| pos[w as usize] < t) {
                    b.push(v);
                }
            }
            let mut c = Vec::new();
            for &r in &frontier {
                if let Some(a) = auditor.as_mut() {
                    a.blue(xt, r);
                }
                if g.has_edge(Colour::Blue, xt, r) {
                    c.push(r);
                }
            }
            let frontier_before = frontier.len();
            frontier.retain(|&r| !c.contains(&r));
            for &v in &q {
                if b.binary_search(&v).is_err() {
                    frontier.push(v);
                    mark[v as usize] = Mark::InR;
                }
            }
            frontier.sort_unstable();
            for &v in b.iter().chain(c.iter()) {
                mark[v as usize] = Mark::InX;
                pos[v as usize] = order.len();
                order.push(v);
            }
            steps.push(StepRecord {
                t,
                x: xt,
                q,
                b,
                c,
                frontier_before,
                frontier_after: frontier.len(),
                size_after: order.len(),
            });
            t += 1;
        }
        for &v in order.iter().chain(frontier.iter()) {
            mark[v as usize] = Mark::Free;
            pos[v as usize] = usize::MAX;
        }
        for &v in &order {
            alive[v as usize] = false;
        }
        removed += order.len();
        let survived_to_k1 = order.len() >= params.k1;
        rounds.push(ConstructionRound {
            index: rounds.len() + 1,
            pool_threshold: threshold,
            pool_size: params.pool_size,
            order,
            frontier,
            steps,
            survived_to_k1,
        });
        // Every removed vertex had label <= threshold, so the pool keeps its
        // size by extending past the old threshold.
        threshold = (threshold as usize + rounds.last().unwrap().size()).min(n) as Vertex;
    }
    Ok(ConstructionRun {
        rounds,
        audit: auditor.map(|a| a.tally),
    })
}

/// Whether the set grown in `round` percolates on its own.
pub fn round_percolates(g: &DoubleGraph, round: &ConstructionRound) -> Result<bool> {
    Ok(percolates(&induced_double_graph(g, &round.order)?.graph))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepFlags {
    pub q: bool,
    pub b: bool,
    pub c: bool,
    pub r: bool,
}

impl StepFlags {
    pub fn all(&self) -> bool {
        self.q && self.b && self.c && self.r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventHReport {
    pub steps: Vec<StepFlags>,
    pub holds: bool,
}

/// Evaluates the concentration events for every step of a round:
/// `|Q_t| = (1 ± ε*/2) n p1_1`, `|B_t|, |C_t| < (ε*/4) n p1_1` and
/// `|R_t| = (1 ± ε*) t n p1_1`.
pub fn check_event_h(round: &ConstructionRound, params: &SupercriticalParams) -> EventHReport {
    let mean = params.mean_red_degree();
    let e = params.eps_star;
    let within = |x: usize, centre: f64, rel: f64| {
        let x = x as f64;
        (1.0 - rel) * centre <= x && x <= (1.0 + rel) * centre
    };
    let steps: Vec<StepFlags> = round
        .steps
        .iter()
        .map(|s| StepFlags {
            q: within(s.q.len(), mean, e / 2.0),
            b: (s.b.len() as f64) < e / 4.0 * mean,
            c: (s.c.len() as f64) < e / 4.0 * mean,
            r: within(s.frontier_after, s.t as f64 * mean, e),
        })
        .collect();
    let holds = steps.iter().all(StepFlags::all);
    EventHReport { steps, holds }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub params: SupercriticalParams,
    pub seed: u64,
    pub rounds: usize,
    pub reached_k1: bool,
    /// Some round reached `k1` with `|R_T| >= T n p1_1 / 2`.
    pub main_event: bool,
    pub largest_round: usize,
    pub event_h_rounds: usize,
    pub percolated: bool,
    pub warnings: Vec<String>,
}

/// The `G(n, p1_1, p2)` sample the pipeline runs the construction on.
pub fn construction_graph(params: &SupercriticalParams, seed: u64) -> Result<DoubleGraph> {
    generate_double_graph(&GenParams::new(
        params.n,
        params.p1_1,
        params.p2_1,
        derive_seed(&[seed, CONSTRUCTION_STREAM]),
    ))
}

/// Checks `p1 p2 >= (1+ε)/(4 n ln n)` and `p1, p2 >= ln n / n`.
pub fn supercritical_preconditions(n: usize, p1: f64, p2: f64, epsilon: f64) -> Vec<String> {
    let nf = n as f64;
    let ln_n = nf.ln();
    let mut problems = Vec::new();
    let need = (1.0 + epsilon) / (4.0 * nf * ln_n);
    // Relative slack so that p1 = p2 = sqrt(need) passes.
    if p1 * p2 < need * (1.0 - 1e-12) {
        problems.push(format!("p1 p2 = {:.3e} is below (1+ε)/(4 n ln n) = {need:.3e}", p1 * p2));
    }
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if p < ln_n / nf * (1.0 - 1e-12) {
            problems.push(format!("{name} = {p:.3e} is below ln n / n = {:.3e}", ln_n / nf));
        }
    }
    problems
}

/// Samples `G(n, p1_1, p2)` and runs the construction, then runs the jigsaw
/// process on an independent `G(n, p1, p2)` from the same seed lineage.
/// With `force`, violated preconditions become warnings.
pub fn supercritical_pipeline(
    n: usize,
    p1: f64,
    p2: f64,
    epsilon: f64,
    seed: u64,
    force: bool,
) -> Result<PipelineReport> {
    let warnings = supercritical_preconditions(n, p1, p2, epsilon);
    if !warnings.is_empty() && !force {
        return Err(param(warnings.join("; ")));
    }
    let params = derive_params(n, p1, p2, epsilon)?;
    let g = construction_graph(&params, seed)?;
    let run = run_construction(&g, &params, false)?;
    let mean = params.mean_red_degree();
    let main_event = run.rounds.iter().any(|r| {
        r.survived_to_k1 && r.frontier.len() as f64 >= r.steps_run() as f64 * mean / 2.0
    });
    let whole = generate_double_graph(&GenParams::new(
        n,
        p1,
        p2,
        derive_seed(&[seed, WHOLE_GRAPH_STREAM]),
    ))?;
    Ok(PipelineReport {
        seed,
        rounds: run.rounds.len(),
        reached_k1: run.rounds.iter().any(|r| r.survived_to_k1),
        main_event,
        largest_round: run.rounds.iter().map(ConstructionRound::size).max().unwrap_or(0),
        event_h_rounds: run.rounds.iter().filter(|r| check_event_h(r, &params).holds).count(),
        percolated: run_jigsaw(&whole).percolated,
        params,
        warnings,
    })
}
