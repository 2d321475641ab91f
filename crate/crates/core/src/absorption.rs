//! The absorption process and exhaustive search for percolating inputs.
//!
//! An input is a start vertex `v1` and a partition of the remaining vertices
//! into clusters, each of which must percolate on its own. Step `i` absorbs
//! every remaining cluster of size at most `t(i) = |S_i|` that touches `v_i`
//! in one colour and `{v_1, ..., v_i}` in the other. The loop runs while
//! `t(i) >= i`.
//!
//! Clusters absorbed in one step are appended in order of their smallest
//! vertex, each cluster's vertices ascending. The reported step count is the
//! last step that absorbed anything (0 when nothing was absorbed).
//!
//! [`SmallDoubleGraph`] is a bitmask form of the same process for graphs with
//! at most 64 vertices; [`find_percolating_input`] and the enumeration code
//! are built on it.

use crate::error::{Error, Result};
use crate::graph::{induced_double_graph, Colour, DoubleGraph, Vertex};
use crate::jigsaw::percolates;
use serde::Serialize;

/// Default vertex cap for [`find_percolating_input`].
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorptionInput {
    pub v1: Vertex,
    pub clusters: Vec<Vec<Vertex>>,
}

impl AbsorptionInput {
    pub fn new(v1: Vertex, clusters: Vec<Vec<Vertex>>) -> Self {
        AbsorptionInput { v1, clusters }
    }

    /// `v1` with every other vertex as its own cluster.
    pub fn singletons(g: &DoubleGraph, v1: Vertex) -> Self {
        let clusters = g.vertices().filter(|&v| v != v1).map(|v| vec![v]).collect();
        AbsorptionInput { v1, clusters }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorptionTrace {
    pub percolated: bool,
    /// Last step at which some cluster was absorbed.
    pub steps: usize,
    pub vertex_order: Vec<Vertex>,
    /// `per_step_added[i - 1]` lists the clusters absorbed at step `i`, one
    /// entry per executed loop iteration.
    pub per_step_added: Vec<Vec<Vec<Vertex>>>,
}

impl AbsorptionTrace {
    /// `|S_i|` for every executed step `i`, i.e. `t(i)`.
    pub fn sizes_before_steps(&self) -> Vec<usize> {
        let mut t = 1;
        self.per_step_added
            .iter()
            .map(|added| {
                let before = t;
                t += added.iter().map(Vec::len).sum::<usize>();
                before
            })
            .collect()
    }
}

fn check_partition(g: &DoubleGraph, input: &AbsorptionInput) -> Result<()> {
    let n = g.n();
    if input.v1 == 0 || input.v1 as usize > n {
        return Err(Error::Input(format!("start vertex {} outside 1..={n}", input.v1)));
    }
    let mut seen = vec![false; n + 1];
    seen[input.v1 as usize] = true;
    for c in &input.clusters {
        if c.is_empty() {
            return Err(Error::Input("empty cluster".into()));
        }
        for &v in c {
            if v == 0 || v as usize > n {
                return Err(Error::Input(format!("cluster vertex {v} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::Input(format!("vertex {v} appears twice")));
            }
        }
    }
    if let Some(v) = (1..=n).find(|&v| !seen[v]) {
        return Err(Error::Input(format!("vertex {v} is not covered")));
    }
    for c in &input.clusters {
        let sub = induced_double_graph(g, c)?;
        if !percolates(&sub.graph) {
            return Err(Error::Input(format!("cluster {c:?} does not percolate")));
        }
    }
    Ok(())
}

/// Partition invariants hold and every cluster percolates on its own.
pub fn is_valid_input(g: &DoubleGraph, input: &AbsorptionInput) -> bool {
    check_partition(g, input).is_ok()
}

pub fn run_absorption(g: &DoubleGraph, input: &AbsorptionInput) -> Result<AbsorptionTrace> {
    check_partition(g, input)?;
    let n = g.n();
    let mut pool: Vec<Vec<Vertex>> = input
        .clusters
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    pool.sort_unstable_by_key(|c| c[0]);

    let mut order = vec![input.v1];
    let mut in_prefix = vec![false; n + 1];
    let mut per_step_added = Vec::new();
    let mut steps = 0;
    let mut i = 1;
    while order.len() >= i {
        let vi = order[i - 1];
        in_prefix[vi as usize] = true;
        let t = order.len();
        let touches = |c: &[Vertex], colour: Colour| {
            c.iter().any(|&u| g.has_edge(colour, u, vi))
        };
        let reaches_prefix = |c: &[Vertex], colour: Colour| {
            c.iter()
                .any(|&u| g.neighbours(colour, u).iter().any(|&w| in_prefix[w as usize]))
        };
        let (added, kept): (Vec<_>, Vec<_>) = pool.into_iter().partition(|c| {
            c.len() <= t
                && ((touches(c, Colour::Red) && reaches_prefix(c, Colour::Blue))
                    || (touches(c, Colour::Blue) && reaches_prefix(c, Colour::Red)))
        });
        pool = kept;
        for c in &added {
            order.extend_from_slice(c);
        }
        if !added.is_empty() {
            steps = i;
        }
        per_step_added.push(added);
        i += 1;
    }
    Ok(AbsorptionTrace {
        percolated: order.len() == n,
        steps,
        vertex_order: order,
        per_step_added,
    })
}

/// A percolating input and the step count of its run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundInput {
    pub input: AbsorptionInput,
    pub steps: usize,
}

/// Searches all inputs for one whose absorption run percolates, returning
/// one with the fewest steps (first in `(v1, partition)` enumeration order on
/// ties).
pub fn find_percolating_input(g: &DoubleGraph) -> Result<Option<FoundInput>> {
    find_percolating_input_with_cap(g, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn find_percolating_input_with_cap(g: &DoubleGraph, cap: usize) -> Result<Option<FoundInput>> {
    if g.n() > cap {
        return Err(Error::Capacity {
            what: "vertex count",
            value: g.n(),
            cap,
        });
    }
    let small = SmallDoubleGraph::from_graph(g)?;
    let mut best: Option<(usize, usize, Vec<u64>)> = None;
    small.for_each_input(|v1, clusters| {
        let out = small.absorb(v1, clusters);
        if out.percolated && best.as_ref().is_none_or(|b| out.steps < b.0) {
            best = Some((out.steps, v1, clusters.to_vec()));
        }
    });
    Ok(best.map(|(steps, v1, masks)| FoundInput {
        input: AbsorptionInput {
            v1: v1 as Vertex + 1,
            clusters: masks.iter().map(|&m| mask_vertices(m)).collect(),
        },
        steps,
    }))
}

/// 1-based labels of the bits in `mask`, ascending.
pub fn mask_vertices(mut mask: u64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

/// Outcome of a bitmask absorption run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallOutcome {
    pub percolated: bool,
    pub steps: usize,
    /// Bit `r` is set iff a cluster of size `r` was absorbed at step `steps`.
    pub last_step_sizes: u64,
    /// Vertices absorbed at step `steps`.
    pub last_step_added: u32,
}

/// Double graph on at most 64 vertices as neighbourhood bitmasks; vertex
/// `v` is bit `v - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallDoubleGraph {
    n: usize,
    red: Vec<u64>,
    blue: Vec<u64>,
}

impl SmallDoubleGraph {
    pub fn from_edges(n: usize, red: &[(Vertex, Vertex)], blue: &[(Vertex, Vertex)]) -> Self {
        assert!(n <= 64, "bitmask graphs hold at most 64 vertices");
        let fill = |edges: &[(Vertex, Vertex)]| {
            let mut adj = vec![0u64; n];
            for &(u, v) in edges {
                adj[u as usize - 1] |= 1 << (v - 1);
                adj[v as usize - 1] |= 1 << (u - 1);
            }
            adj
        };
        SmallDoubleGraph {
            n,
            red: fill(red),
            blue: fill(blue),
        }
    }

    pub fn from_graph(g: &DoubleGraph) -> Result<Self> {
        if g.n() > 64 {
            return Err(Error::Capacity {
                what: "vertex count",
                value: g.n(),
                cap: 64,
            });
        }
        Ok(Self::from_edges(g.n(), g.red_edges(), g.blue_edges()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn union_nbrs(adj: &[u64], mut mask: u64) -> u64 {
        let mut acc = 0;
        while mask != 0 {
            acc |= adj[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        acc
    }

    /// Whether the subset `mask` is a percolating set. Merges any two
    /// clusters joined in both colours until none remain; the end state does
    /// not depend on merge order.
    pub fn percolates_subset(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let mut clusters: Vec<u64> = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            clusters.push(m & m.wrapping_neg());
            m &= m - 1;
        }
        'outer: while clusters.len() > 1 {
            for a in 0..clusters.len() {
                let rn = Self::union_nbrs(&self.red, clusters[a]);
                let bn = Self::union_nbrs(&self.blue, clusters[a]);
                for b in a + 1..clusters.len() {
                    if rn & clusters[b] != 0 && bn & clusters[b] != 0 {
                        clusters[a] |= clusters[b];
                        clusters.swap_remove(b);
                        continue 'outer;
                    }
                }
            }
            return false;
        }
        true
    }

    /// Percolation flag for every subset of the vertex set (`n <= 20`).
    pub fn percolating_subsets(&self) -> Vec<bool> {
        assert!(self.n <= 20, "subset table limited to 20 vertices");
        (0..1u64 << self.n).map(|m| self.percolates_subset(m)).collect()
    }

    /// Runs the absorption process from `v1` (0-based) with the given
    /// cluster masks, which must be sorted by lowest bit.
    pub fn absorb(&self, v1: usize, clusters: &[u64]) -> SmallOutcome {
        let mut order = [0u8; 64];
        order[0] = v1 as u8;
        let mut len = 1usize;
        let mut covered = 1u64 << v1;
        let mut alive = clusters.to_vec();
        let (mut red_prefix, mut blue_prefix) = (0u64, 0u64);
        let mut steps = 0;
        let mut last_sizes = 0u64;
        let mut last_added = 0u32;
        let mut i = 1;
        while len >= i {
            let vi = order[i - 1] as usize;
            red_prefix |= self.red[vi];
            blue_prefix |= self.blue[vi];
            let t = len as u32;
            let (rv, bv) = (self.red[vi], self.blue[vi]);
            let mut sizes = 0u64;
            let before = len;
            let mut k = 0;
            while k < alive.len() {
                let c = alive[k];
                let ok = c.count_ones() <= t
                    && ((rv & c != 0 && blue_prefix & c != 0)
                        || (bv & c != 0 && red_prefix & c != 0));
                if ok {
                    let mut m = c;
                    while m != 0 {
                        order[len] = m.trailing_zeros() as u8;
                        len += 1;
                        m &= m - 1;
                    }
                    covered |= c;
                    sizes |= 1 << c.count_ones();
                    alive.remove(k);
                } else {
                    k += 1;
                }
            }
            if sizes != 0 {
                steps = i;
                last_sizes = sizes;
                last_added = (len - before) as u32;
            }
            i += 1;
        }
        SmallOutcome {
            percolated: covered == self.full_mask(),
            steps,
            last_step_sizes: last_sizes,
            last_step_added: last_added,
        }
    }

    /// Calls `f(v1, clusters)` for every valid input: each start vertex
    /// (ascending) and each partition of the rest into percolating blocks.
    /// Blocks are listed by lowest vertex.
    pub fn for_each_input(&self, mut f: impl FnMut(usize, &[u64])) {
        let table = self.percolating_subsets();
        let full = self.full_mask();
        let mut blocks = Vec::with_capacity(self.n);
        for v1 in 0..self.n {
            partitions(full & !(1 << v1), &table, &mut blocks, &mut |b| f(v1, b));
        }
    }
}

fn partitions(rest: u64, ok: &[bool], blocks: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if rest == 0 {
        f(blocks);
        return;
    }
    let low = rest & rest.wrapping_neg();
    let others = rest & !low;
    // Submasks of `others` in increasing order.
    let mut sub = 0u64;
    loop {
        let block = sub | low;
        if ok[block as usize] {
            blocks.push(block);
            partitions(rest & !block, ok, blocks, f);
            blocks.pop();
        }
        if sub == others {
            break;
        }
        sub = (sub.wrapping_sub(others)) & others;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_double_graph, GenParams};

    fn dg(n: usize, red: &[(Vertex, Vertex)], blue: &[(Vertex, Vertex)]) -> DoubleGraph {
        DoubleGraph::new(n, red.iter().copied(), blue.iter().copied()).unwrap()
    }

    #[test]
    fn single_vertex() {
        let g = DoubleGraph::empty(1).unwrap();
        let t = run_absorption(&g, &AbsorptionInput::new(1, vec![])).unwrap();
        assert!(t.percolated);
        assert_eq!(t.steps, 0);
        assert_eq!(t.vertex_order, vec![1]);
        let found = find_percolating_input(&g).unwrap().unwrap();
        assert_eq!(found.input, AbsorptionInput::new(1, vec![]));
        assert_eq!(found.steps, 0);
    }

    #[test]
    fn two_vertices() {
        let g = dg(2, &[(1, 2)], &[(1, 2)]);
        let t = run_absorption(&g, &AbsorptionInput::new(1, vec![vec![2]])).unwrap();
        assert!(t.percolated);
        assert_eq!(t.steps, 1);
        assert_eq!(t.per_step_added[0], vec![vec![2]]);
    }

    #[test]
    fn three_vertex_hand_trace() {
        let g = dg(3, &[(1, 2), (2, 3)], &[(1, 2), (1, 3)]);
        let t = run_absorption(&g, &AbsorptionInput::new(1, vec![vec![2], vec![3]])).unwrap();
        assert!(t.percolated);
        assert_eq!(t.steps, 2);
        assert_eq!(t.per_step_added[0], vec![vec![2]]);
        assert_eq!(t.per_step_added[1], vec![vec![3]]);
        assert_eq!(t.vertex_order, vec![1, 2, 3]);
    }

    #[test]
    fn validity_checks() {
        let g = dg(3, &[(1, 2)], &[]);
        assert!(is_valid_input(&g, &AbsorptionInput::singletons(&g, 2)));
        // Two-vertex cluster with only a red internal edge.
        assert!(!is_valid_input(&g, &AbsorptionInput::new(3, vec![vec![1, 2]])));
        // Overlap.
        assert!(!is_valid_input(&g, &AbsorptionInput::new(1, vec![vec![2, 3], vec![3]])));
        // Missing vertex, start vertex reused, empty cluster, out of range.
        assert!(!is_valid_input(&g, &AbsorptionInput::new(1, vec![vec![2]])));
        assert!(!is_valid_input(&g, &AbsorptionInput::new(1, vec![vec![1], vec![2], vec![3]])));
        assert!(!is_valid_input(&g, &AbsorptionInput::new(1, vec![vec![2], vec![3], vec![]])));
        assert!(!is_valid_input(&g, &AbsorptionInput::new(4, vec![])));
        assert!(matches!(
            run_absorption(&g, &AbsorptionInput::new(3, vec![vec![1, 2]])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn exhaustive_search_examples() {
        let path_star = dg(3, &[(1, 2), (2, 3)], &[(1, 2), (1, 3)]);
        let found = find_percolating_input(&path_star).unwrap().unwrap();
        assert!(found.steps <= 2);
        let replay = run_absorption(&path_star, &found.input).unwrap();
        assert!(replay.percolated);
        assert_eq!(replay.steps, found.steps);

        let disjoint = dg(3, &[(1, 2), (2, 3)], &[(1, 3)]);
        assert!(find_percolating_input(&disjoint).unwrap().is_none());

        let big = DoubleGraph::empty(8).unwrap();
        assert!(matches!(
            find_percolating_input(&big),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn partitions_of_four_elements() {
        let ok = vec![true; 16];
        let mut count = 0;
        partitions(0b1111, &ok, &mut Vec::new(), &mut |b: &[u64]| {
            assert_eq!(b.iter().fold(0, |a, &x| a | x), 0b1111);
            assert!(b.windows(2).all(|w| w[0].trailing_zeros() < w[1].trailing_zeros()));
            count += 1;
        });
        assert_eq!(count, 15); // Bell(4)
    }

    #[test]
    fn bitmask_kernel_agrees_with_general_runner() {
        for seed in 0..60 {
            let g = generate_double_graph(&GenParams::new(6, 0.5, 0.5, seed)).unwrap();
            let small = SmallDoubleGraph::from_graph(&g).unwrap();
            assert_eq!(small.percolates_subset(small.full_mask()), percolates(&g));
            small.for_each_input(|v1, masks| {
                let input = AbsorptionInput::new(
                    v1 as Vertex + 1,
                    masks.iter().map(|&m| mask_vertices(m)).collect(),
                );
                let general = run_absorption(&g, &input).unwrap();
                let fast = small.absorb(v1, masks);
                assert_eq!(general.percolated, fast.percolated);
                assert_eq!(general.steps, fast.steps);
                if general.steps > 0 {
                    let sizes = general.per_step_added[general.steps - 1]
                        .iter()
                        .fold(0u64, |acc, c| acc | 1 << c.len());
                    assert_eq!(sizes, fast.last_step_sizes);
                    let added: usize =
                        general.per_step_added[general.steps - 1].iter().map(Vec::len).sum();
                    assert_eq!(added, fast.last_step_added as usize);
                }
            });
        }
    }

    #[test]
    fn trace_invariants() {
        for seed in 0..60 {
            let g = generate_double_graph(&GenParams::new(7, 0.45, 0.45, seed)).unwrap();
            let small = SmallDoubleGraph::from_graph(&g).unwrap();
            let mut inputs = Vec::new();
            small.for_each_input(|v1, masks| inputs.push((v1, masks.to_vec())));
            for (v1, masks) in inputs.into_iter().take(40) {
                let input = AbsorptionInput::new(
                    v1 as Vertex + 1,
                    masks.iter().map(|&m| mask_vertices(m)).collect(),
                );
                let t = run_absorption(&g, &input).unwrap();
                let before = t.sizes_before_steps();
                for (i, added) in t.per_step_added.iter().enumerate() {
                    for c in added {
                        assert!(c.len() <= before[i]);
                    }
                }
                assert_eq!(t.percolated, t.vertex_order.len() == g.n());
                if t.percolated {
                    assert!(t.steps <= g.n().saturating_sub(1));
                    assert!(percolates(&g));
                }
            }
        }
    }
}
