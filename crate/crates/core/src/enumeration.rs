//! Exhaustive enumeration of minimal percolating configurations.
//!
//! A minimal configuration on `[k]` is a pair of spanning trees (red, blue)
//! whose double graph percolates. Trees come from Prüfer sequences, so every
//! ordered pair is visited exactly once. For each vertex count the sweep is
//! done once and cached in a [`ConfigTable`]; every count below is read from
//! it.
//!
//! Counting bounds are evaluated in [`HiFloat`] because the constants
//! `e^291` and `e^582` are far outside `f64` range.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

use crate::absorption::SmallDoubleGraph;
use crate::error::{param, Error, Result};
use crate::graph::{DoubleGraph, Edge, Vertex};
use crate::hifloat::HiFloat;
use crate::jigsaw::percolates;

/// Decodes a Prüfer sequence over `1..=k` (length `k - 2`) into the edges of
/// a labelled tree on `[k]`, each edge as `(smaller, larger)`, sorted.
pub fn prufer_decode(seq: &[Vertex], k: usize) -> Result<Vec<Edge>> {
    if k < 2 {
        return Err(param(format!("Prüfer decoding needs k >= 2, got {k}")));
    }
    if seq.len() != k - 2 {
        return Err(param(format!(
            "Prüfer sequence for k={k} must have length {}, got {}",
            k - 2,
            seq.len()
        )));
    }
    if let Some(&bad) = seq.iter().find(|&&x| x == 0 || x as usize > k) {
        return Err(param(format!("Prüfer entry {bad} outside 1..={k}")));
    }
    let mut degree = vec![1usize; k + 1];
    for &x in seq {
        degree[x as usize] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &x in seq {
        let leaf = (1..=k).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push(ordered(leaf as Vertex, x));
        degree[leaf] -= 1;
        degree[x as usize] -= 1;
    }
    let rest: Vec<usize> = (1..=k).filter(|&v| degree[v] == 1).collect();
    edges.push(ordered(rest[0] as Vertex, rest[1] as Vertex));
    edges.sort_unstable();
    Ok(edges)
}

/// Inverse of [`prufer_decode`]. Fails unless `edges` is a spanning tree of
/// `[k]`.
pub fn prufer_encode(edges: &[Edge], k: usize) -> Result<Vec<Vertex>> {
    if k < 2 || edges.len() != k - 1 {
        return Err(param(format!("{} edges do not form a tree on {k} vertices", edges.len())));
    }
    let mut adj = vec![Vec::new(); k + 1];
    for &(u, v) in edges {
        if u == v || u == 0 || v == 0 || u as usize > k || v as usize > k {
            return Err(param(format!("bad tree edge ({u}, {v})")));
        }
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    let mut removed = vec![false; k + 1];
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut seq = Vec::with_capacity(k - 2);
    for _ in 0..k - 2 {
        let leaf = (1..=k)
            .find(|&v| !removed[v] && degree[v] == 1)
            .ok_or_else(|| param("edge set is not a tree"))?;
        removed[leaf] = true;
        let nb = adj[leaf]
            .iter()
            .copied()
            .find(|&u| !removed[u])
            .ok_or_else(|| param("edge set is not a tree"))?;
        degree[nb] -= 1;
        seq.push(nb as Vertex);
    }
    let left: Vec<usize> = (1..=k).filter(|&v| !removed[v]).collect();
    if left.len() != 2 || !adj[left[0]].contains(&left[1]) {
        return Err(param("edge set is not a tree"));
    }
    Ok(seq)
}

/// All labelled trees on `[k]` in Prüfer-sequence lexicographic order. For
/// `k = 1` this is the single empty tree.
pub fn all_trees(k: usize) -> Result<Vec<Vec<Edge>>> {
    if k == 0 {
        return Err(param("trees need at least one vertex"));
    }
    if k == 1 {
        return Ok(vec![Vec::new()]);
    }
    let len = k - 2;
    let total = k.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![1 as Vertex; len];
    for _ in 0..total {
        out.push(prufer_decode(&seq, k)?);
        for slot in seq.iter_mut().rev() {
            if (*slot as usize) < k {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    Ok(out)
}

fn ordered(a: Vertex, b: Vertex) -> Edge {
    (a.min(b), a.max(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalConfig {
    pub k: usize,
    pub red_tree: Vec<Edge>,
    pub blue_tree: Vec<Edge>,
}

impl MinimalConfig {
    pub fn to_double_graph(&self) -> DoubleGraph {
        DoubleGraph::new(
            self.k,
            self.red_tree.iter().copied(),
            self.blue_tree.iter().copied(),
        )
        .expect("trees on [k] are valid edge sets")
    }
}

/// Summary of one percolating tree pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfigEntry {
    pub red: u32,
    pub blue: u32,
    /// Fewest absorption steps over all percolating inputs, if input search
    /// was run.
    pub min_steps: Option<u8>,
    /// Bit `8 * l + r` set iff some percolating input takes exactly `l`
    /// steps and absorbs a cluster of size `r` at step `l`.
    pub signature: u64,
}

impl ConfigEntry {
    pub fn has_step_size(&self, l: usize, r: usize) -> bool {
        l < 8 && r < 8 && self.signature >> (8 * l + r) & 1 == 1
    }
}

/// Every percolating ordered tree pair on `[m]`, with sweep statistics.
#[derive(Clone, Debug)]
pub struct ConfigTable {
    pub m: usize,
    pub trees: Vec<Vec<Edge>>,
    pub entries: Vec<ConfigEntry>,
    pub total_pairs: u64,
    /// Pairs with identical red and blue trees.
    pub self_symmetric: u64,
    /// Whether each percolating pair was also run through input search.
    pub with_inputs: bool,
    /// Pairs where the jigsaw engine and the existence of a percolating
    /// absorption input disagree. Zero is the expected value.
    pub oracle_mismatches: u64,
    /// Pairs where the jigsaw engine and the bitmask merge disagree.
    pub engine_mismatches: u64,
    /// Percolating pairs whose colour swap does not percolate.
    pub swap_asymmetries: u64,
}

impl ConfigTable {
    pub fn build(m: usize, with_inputs: bool) -> Result<Self> {
        if m == 0 || m > 8 {
            return Err(param(format!("configuration tables cover 1..=8 vertices, got {m}")));
        }
        let trees = all_trees(m)?;
        let t = trees.len();
        let rows: Vec<(Vec<ConfigEntry>, u64, u64)> = (0..t)
            .into_par_iter()
            .map(|a| {
                let mut row = Vec::new();
                let (mut oracle_bad, mut engine_bad) = (0, 0);
                for (b, blue) in trees.iter().enumerate() {
                    let red = &trees[a];
                    let g = DoubleGraph::new(m, red.iter().copied(), blue.iter().copied())
                        .expect("trees are valid");
                    let perc = percolates(&g);
                    let small = SmallDoubleGraph::from_edges(m, red, blue);
                    if small.percolates_subset(small.full_mask()) != perc {
                        engine_bad += 1;
                    }
                    let mut entry = ConfigEntry {
                        red: a as u32,
                        blue: b as u32,
                        min_steps: None,
                        signature: 0,
                    };
                    if with_inputs {
                        small.for_each_input(|v1, clusters| {
                            let out = small.absorb(v1, clusters);
                            if out.percolated {
                                let s = out.steps as u8;
                                entry.min_steps = Some(entry.min_steps.map_or(s, |x| x.min(s)));
                                if out.steps < 8 {
                                    entry.signature |= (out.last_step_sizes & 0xff) << (8 * out.steps);
                                }
                            }
                        });
                        if entry.min_steps.is_some() != perc {
                            oracle_bad += 1;
                        }
                    }
                    if perc {
                        row.push(entry);
                    }
                }
                (row, oracle_bad, engine_bad)
            })
            .collect();
        let mut entries = Vec::new();
        let (mut oracle_mismatches, mut engine_mismatches) = (0, 0);
        for (row, o, e) in rows {
            entries.extend(row);
            oracle_mismatches += o;
            engine_mismatches += e;
        }
        let percolating: std::collections::HashSet<(u32, u32)> =
            entries.iter().map(|e| (e.red, e.blue)).collect();
        let swap_asymmetries = entries
            .iter()
            .filter(|e| !percolating.contains(&(e.blue, e.red)))
            .count() as u64;
        Ok(ConfigTable {
            m,
            total_pairs: (t * t) as u64,
            self_symmetric: t as u64,
            trees,
            entries,
            with_inputs,
            oracle_mismatches,
            engine_mismatches,
            swap_asymmetries,
        })
    }

    /// Number of percolating ordered pairs, `P_m`.
    pub fn percolating_pairs(&self) -> u64 {
        self.entries.len() as u64
    }

    /// Percolating pairs up to colour swap: `(P_m + D_m) / 2`.
    pub fn unordered_pairs(&self) -> u64 {
        (self.percolating_pairs() + self.self_symmetric) / 2
    }

    pub fn configs(&self) -> impl Iterator<Item = MinimalConfig> + '_ {
        self.entries.iter().map(|e| MinimalConfig {
            k: self.m,
            red_tree: self.trees[e.red as usize].clone(),
            blue_tree: self.trees[e.blue as usize].clone(),
        })
    }

    fn count_min_steps_at_most(&self, l: usize) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.min_steps.is_some_and(|s| s as usize <= l))
            .count() as u64
    }

    fn count_signature(&self, l: usize, r: usize) -> u64 {
        self.entries.iter().filter(|e| e.has_step_size(l, r)).count() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCaps {
    /// Largest `k` for the plain tree-pair sweep.
    pub trees: usize,
    /// Largest `k` for `M'_{k,l}`.
    pub mprime: usize,
    /// Largest `k + r` for `M_{k,l,r}`.
    pub mklr: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            trees: 6,
            mprime: 5,
            mklr: 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `k^(2k-4)`.
    Cayley,
    /// `(k!)^2 2^k e^l * k e^291 / 2`.
    LemmaMprime,
    /// `C(k+r, r) (k!)^2 (r!)^2 2^(k+r) e^(r+l) * k l r^3 e^582 / 2`.
    TheoremMklr,
    /// `C(k+r, r) M'_{k,l} 2 r^2 l M'_{r,r}` with exact `M'` counts.
    Ineq31,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Cayley => "cayley",
            BoundKind::LemmaMprime => "lemma_Mprime",
            BoundKind::TheoremMklr => "theorem_Mklr",
            BoundKind::Ineq31 => "ineq31",
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cayley" => Ok(BoundKind::Cayley),
            "lemma_Mprime" | "lemma" => Ok(BoundKind::LemmaMprime),
            "theorem_Mklr" | "theorem" => Ok(BoundKind::TheoremMklr),
            "ineq31" => Ok(BoundKind::Ineq31),
            other => Err(param(format!("unknown bound '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub value: HiFloat,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub k: usize,
    pub l: Option<usize>,
    pub r: Option<usize>,
    pub exact_count: u64,
    pub paper_bound: HiFloat,
    pub bound_satisfied: bool,
    /// Count equals the bound exactly.
    pub tight: bool,
    /// Further bounds checked for the same count.
    pub extra_bounds: Vec<BoundCheck>,
}

impl CountReport {
    fn new(k: usize, l: Option<usize>, r: Option<usize>, count: u64, bound: HiFloat) -> Self {
        let c = HiFloat::from_u64(count);
        CountReport {
            k,
            l,
            r,
            exact_count: count,
            bound_satisfied: c <= bound,
            tight: c == bound,
            paper_bound: bound,
            extra_bounds: Vec::new(),
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.bound_satisfied && self.extra_bounds.iter().all(|b| b.satisfied)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.k,
            "l": self.l,
            "r": self.r,
            "exact_count": self.exact_count,
            "paper_bound": self.paper_bound.to_string(),
            "bound_satisfied": self.bound_satisfied,
            "tight": self.tight,
            "extra_bounds": self.extra_bounds.iter().map(|b| json!({
                "kind": b.kind.name(),
                "value": b.value.to_string(),
                "satisfied": b.satisfied,
            })).collect::<Vec<_>>(),
        })
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k as u64).fold(BigUint::one(), |acc, i| acc * (n as u64 - i) / (i + 1))
}

fn check_range(k: usize, l: usize, r: Option<usize>) -> Result<()> {
    if !(1..=k).contains(&l) {
        return Err(param(format!("need 1 <= l <= k, got l={l}, k={k}")));
    }
    if let Some(r) = r {
        if !(1..=k).contains(&r) {
            return Err(param(format!("need 1 <= r <= k, got r={r}, k={k}")));
        }
    }
    Ok(())
}

pub fn cayley_bound(k: usize) -> Result<HiFloat> {
    if k == 0 {
        return Err(param("Cayley bound needs k >= 1"));
    }
    if k == 1 {
        return Ok(HiFloat::from_u64(1));
    }
    Ok(HiFloat::from_biguint(&BigUint::from(k).pow(2 * k as u32 - 4)))
}

pub fn lemma_mprime_bound(k: usize, l: usize) -> Result<HiFloat> {
    check_range(k, l, None)?;
    let f = factorial(k);
    let int = &f * &f * (BigUint::one() << (k - 1)) * k;
    Ok(HiFloat::from_biguint(&int) * HiFloat::exp_int(l as i64 + 291))
}

pub fn theorem_mklr_bound(k: usize, l: usize, r: usize) -> Result<HiFloat> {
    check_range(k, l, Some(r))?;
    let (fk, fr) = (factorial(k), factorial(r));
    let int = binomial(k + r, r)
        * &fk
        * &fk
        * &fr
        * &fr
        * (BigUint::one() << (k + r - 1))
        * (k * l * r * r * r);
    Ok(HiFloat::from_biguint(&int) * HiFloat::exp_int((r + l) as i64 + 582))
}

/// Right-hand side of the partition inequality for given `M'` values.
pub fn ineq31_bound(k: usize, l: usize, r: usize, mprime_kl: u64, mprime_rr: u64) -> Result<HiFloat> {
    check_range(k, l, Some(r))?;
    let int = binomial(k + r, r) * mprime_kl * (2 * r * r * l) * mprime_rr;
    Ok(HiFloat::from_biguint(&int))
}

/// Caching front end to the sweeps.
pub struct Enumerator {
    caps: EnumerationCaps,
    tables: Mutex<HashMap<(usize, bool), Arc<ConfigTable>>>,
}

impl Enumerator {
    pub fn new(caps: EnumerationCaps) -> Self {
        Enumerator {
            caps,
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn caps(&self) -> EnumerationCaps {
        self.caps
    }

    /// Table for `[m]`. A table built with input search also serves requests
    /// that do not need it.
    pub fn table(&self, m: usize, with_inputs: bool) -> Result<Arc<ConfigTable>> {
        {
            let cache = self.tables.lock().expect("table cache poisoned");
            if let Some(t) = cache.get(&(m, true)) {
                return Ok(t.clone());
            }
            if !with_inputs {
                if let Some(t) = cache.get(&(m, false)) {
                    return Ok(t.clone());
                }
            }
        }
        let t = Arc::new(ConfigTable::build(m, with_inputs)?);
        self.tables
            .lock()
            .expect("table cache poisoned")
            .insert((m, with_inputs), t.clone());
        Ok(t)
    }

    fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
        if value > cap {
            Err(Error::Capacity { what, value, cap })
        } else {
            Ok(())
        }
    }

    /// `P_k`, checked against the Cayley bound `k^(2k-4)`.
    pub fn count_minimal_configs(&self, k: usize) -> Result<CountReport> {
        if k < 2 {
            return Err(param(format!("need k >= 2, got {k}")));
        }
        Self::cap("k (tree pairs)", k, self.caps.trees)?;
        let t = self.table(k, false)?;
        Ok(CountReport::new(k, None, None, t.percolating_pairs(), cayley_bound(k)?))
    }

    /// Exact `M'_{k,l}` without any bound attached.
    pub fn mprime(&self, k: usize, l: usize) -> Result<u64> {
        if k == 0 {
            return Err(param("need k >= 1"));
        }
        Self::cap("k (M')", k, self.caps.mprime)?;
        if k == 1 {
            return Ok(1);
        }
        Ok(self.table(k, true)?.count_min_steps_at_most(l))
    }

    pub fn count_mprime(&self, k: usize, l: usize) -> Result<CountReport> {
        check_range(k, l, None)?;
        let count = self.mprime(k, l)?;
        Ok(CountReport::new(k, Some(l), None, count, lemma_mprime_bound(k, l)?))
    }

    pub fn count_mklr(&self, k: usize, l: usize, r: usize) -> Result<CountReport> {
        check_range(k, l, Some(r))?;
        Self::cap("k + r (M_klr)", k + r, self.caps.mklr)?;
        let count = self.table(k + r, true)?.count_signature(l, r);
        let mut report = CountReport::new(k, Some(l), Some(r), count, theorem_mklr_bound(k, l, r)?);
        let ineq = ineq31_bound(k, l, r, self.mprime(k, l)?, self.mprime(r, r)?)?;
        report.extra_bounds.push(BoundCheck {
            kind: BoundKind::Ineq31,
            satisfied: HiFloat::from_u64(count) <= ineq,
            value: ineq,
        });
        Ok(report)
    }

    pub fn paper_bound_value(&self, which: BoundKind, k: usize, l: usize, r: usize) -> Result<HiFloat> {
        match which {
            BoundKind::Cayley => cayley_bound(k),
            BoundKind::LemmaMprime => lemma_mprime_bound(k, l),
            BoundKind::TheoremMklr => theorem_mklr_bound(k, l, r),
            BoundKind::Ineq31 => {
                check_range(k, l, Some(r))?;
                ineq31_bound(k, l, r, self.mprime(k, l)?, self.mprime(r, r)?)
            }
        }
    }
}

fn shared() -> &'static Enumerator {
    static SHARED: OnceLock<Enumerator> = OnceLock::new();
    SHARED.get_or_init(|| Enumerator::new(EnumerationCaps::default()))
}

/// [`Enumerator::count_minimal_configs`] with default caps and a
/// process-wide cache.
pub fn count_minimal_configs(k: usize) -> Result<CountReport> {
    shared().count_minimal_configs(k)
}

pub fn count_mprime(k: usize, l: usize) -> Result<CountReport> {
    shared().count_mprime(k, l)
}

pub fn count_mklr(k: usize, l: usize, r: usize) -> Result<CountReport> {
    shared().count_mklr(k, l, r)
}

pub fn paper_bound_value(which: BoundKind, k: usize, l: usize, r: usize) -> Result<HiFloat> {
    shared().paper_bound_value(which, k, l, r)
}

/// All minimal configurations on `[k]`, in tree-pair order.
pub fn minimal_configs(k: usize) -> Result<Vec<MinimalConfig>> {
    Ok(shared().table(k, false)?.configs().collect())
}
