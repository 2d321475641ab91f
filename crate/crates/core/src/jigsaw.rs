//! The jigsaw process.
//!
//! Starting from singleton clusters, every round contracts each connected
//! component of the auxiliary graph (cluster pairs joined in *both* colours)
//! into one cluster. A colour-`j` edge survives between two new clusters iff
//! some colour-`j` edge ran between their pre-images. The process stops when
//! the auxiliary graph has no edges and percolates iff one cluster is left.
//!
//! Clusters are named by their smallest vertex. Edges that fall inside a
//! cluster are dropped for good.

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{DoubleGraph, Vertex};

/// Unordered pair of cluster names, stored with the smaller name first.
pub type ClusterPair = (Vertex, Vertex);

/// State `V^(i)`, `E_1^(i)`, `E_2^(i)`, `H^(i)` after `round` contractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JigsawState {
    round: usize,
    /// Cluster name of vertex `v` at index `v - 1`.
    cluster_of: Vec<Vertex>,
    red: Vec<ClusterPair>,
    blue: Vec<ClusterPair>,
    aux: Vec<ClusterPair>,
}

fn intersect_sorted(a: &[ClusterPair], b: &[ClusterPair]) -> Vec<ClusterPair> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn contract(edges: &[ClusterPair], dsu: &mut DisjointSets) -> Vec<ClusterPair> {
    // Edges whose endpoints keep their names stay sorted; only renamed ones
    // need sorting before the merge.
    let mut kept = Vec::with_capacity(edges.len());
    let mut moved = Vec::new();
    for &(a, b) in edges {
        let (x, y) = (dsu.min_of(a), dsu.min_of(b));
        if x == y {
            continue;
        }
        if x == a && y == b {
            kept.push((a, b));
        } else {
            moved.push((x.min(y), x.max(y)));
        }
    }
    moved.sort_unstable();
    let mut out = Vec::with_capacity(kept.len() + moved.len());
    let (mut i, mut j) = (0, 0);
    while i < kept.len() || j < moved.len() {
        let next = if j == moved.len() || (i < kept.len() && kept[i] <= moved[j]) {
            i += 1;
            kept[i - 1]
        } else {
            j += 1;
            moved[j - 1]
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

impl JigsawState {
    /// Round 0: every vertex is its own cluster.
    pub fn initial(g: &DoubleGraph) -> Self {
        let red = g.red_edges().to_vec();
        let blue = g.blue_edges().to_vec();
        let aux = intersect_sorted(&red, &blue);
        JigsawState {
            round: 0,
            cluster_of: g.vertices().collect(),
            red,
            blue,
            aux,
        }
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn cluster_of(&self, v: Vertex) -> Vertex {
        self.cluster_of[v as usize - 1]
    }

    pub fn red_cluster_edges(&self) -> &[ClusterPair] {
        &self.red
    }

    pub fn blue_cluster_edges(&self) -> &[ClusterPair] {
        &self.blue
    }

    pub fn aux_edges(&self) -> &[ClusterPair] {
        &self.aux
    }

    pub fn is_terminal(&self) -> bool {
        self.aux.is_empty()
    }

    /// Clusters as sorted vertex lists, ordered by name.
    pub fn partition(&self) -> Vec<Vec<Vertex>> {
        let mut slot = vec![usize::MAX; self.n() + 1];
        let mut blocks: Vec<Vec<Vertex>> = Vec::new();
        for (i, &c) in self.cluster_of.iter().enumerate() {
            let s = &mut slot[c as usize];
            if *s == usize::MAX {
                *s = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[*s].push(i as Vertex + 1);
        }
        // Names are minima, so first appearance order is name order.
        blocks
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_of
            .iter()
            .enumerate()
            .filter(|&(i, &c)| c as usize == i + 1)
            .count()
    }

    pub fn largest_cluster(&self) -> usize {
        let mut size = vec![0usize; self.n() + 1];
        for &c in &self.cluster_of {
            size[c as usize] += 1;
        }
        size.into_iter().max().unwrap_or(0)
    }

    /// Components of the auxiliary graph, each as a list of cluster names.
    pub fn aux_components(&self) -> Vec<Vec<Vertex>> {
        let mut dsu = DisjointSets::new(self.n() + 1);
        for &(a, b) in &self.aux {
            dsu.union(a, b);
        }
        let mut groups: std::collections::BTreeMap<Vertex, Vec<Vertex>> = Default::default();
        for (i, &c) in self.cluster_of.iter().enumerate() {
            if c as usize == i + 1 {
                groups.entry(dsu.min_of(c)).or_default().push(c);
            }
        }
        groups.into_values().collect()
    }
}

/// One iteration of the while-loop. Fails if the auxiliary graph is empty.
pub fn jigsaw_step(state: &JigsawState) -> Result<JigsawState> {
    if state.aux.is_empty() {
        return Err(Error::Contract(
            "jigsaw_step called on a state with no auxiliary edges".into(),
        ));
    }
    let mut dsu = DisjointSets::new(state.n() + 1);
    for &(a, b) in &state.aux {
        dsu.union(a, b);
    }
    let cluster_of = state.cluster_of.iter().map(|&c| dsu.min_of(c)).collect();
    let red = contract(&state.red, &mut dsu);
    let blue = contract(&state.blue, &mut dsu);
    let aux = intersect_sorted(&red, &blue);
    Ok(JigsawState {
        round: state.round + 1,
        cluster_of,
        red,
        blue,
        aux,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JigsawResult {
    pub percolated: bool,
    /// Number of while-loop iterations executed.
    pub rounds: usize,
    pub final_partition: Vec<Vec<Vertex>>,
    /// Largest cluster size before the first round and after each round;
    /// length `rounds + 1`.
    pub max_cluster_trace: Vec<usize>,
}

impl JigsawResult {
    pub fn max_cluster(&self) -> usize {
        *self.max_cluster_trace.last().unwrap_or(&0)
    }
}

/// Runs the process to completion, keeping every intermediate state.
pub fn trace_jigsaw(g: &DoubleGraph) -> Vec<JigsawState> {
    let mut states = vec![JigsawState::initial(g)];
    while let Some(last) = states.last().filter(|s| !s.is_terminal()) {
        let next = jigsaw_step(last).expect("non-terminal state");
        states.push(next);
    }
    states
}

pub fn run_jigsaw(g: &DoubleGraph) -> JigsawResult {
    let mut state = JigsawState::initial(g);
    let mut trace = vec![state.largest_cluster()];
    while !state.is_terminal() {
        state = jigsaw_step(&state).expect("non-terminal state");
        trace.push(state.largest_cluster());
    }
    let final_partition = state.partition();
    JigsawResult {
        percolated: final_partition.len() == 1,
        rounds: state.round,
        final_partition,
        max_cluster_trace: trace,
    }
}

pub fn percolates(g: &DoubleGraph) -> bool {
    run_jigsaw(g).percolated
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_double_graph, GenParams};

    fn dg(n: usize, red: &[(Vertex, Vertex)], blue: &[(Vertex, Vertex)]) -> DoubleGraph {
        DoubleGraph::new(n, red.iter().copied(), blue.iter().copied()).unwrap()
    }

    #[test]
    fn two_vertices_double_edge() {
        let s0 = JigsawState::initial(&dg(2, &[(1, 2)], &[(1, 2)]));
        let s1 = jigsaw_step(&s0).unwrap();
        assert_eq!(s1.partition(), vec![vec![1, 2]]);
        assert!(s1.aux_edges().is_empty());
        assert_eq!(s1.round(), 1);
    }

    #[test]
    fn three_vertex_hand_trace() {
        let g = dg(3, &[(1, 2), (2, 3)], &[(1, 2), (1, 3)]);
        let s1 = jigsaw_step(&JigsawState::initial(&g)).unwrap();
        assert_eq!(s1.partition(), vec![vec![1, 2], vec![3]]);
        assert_eq!(s1.red_cluster_edges(), &[(1, 3)]);
        assert_eq!(s1.blue_cluster_edges(), &[(1, 3)]);
        assert_eq!(s1.aux_edges(), &[(1, 3)]);
        let s2 = jigsaw_step(&s1).unwrap();
        assert_eq!(s2.partition(), vec![vec![1, 2, 3]]);
        assert!(run_jigsaw(&g).percolated);
        assert_eq!(run_jigsaw(&g).rounds, 2);
    }

    #[test]
    fn connected_aux_graph_collapses_in_one_step() {
        let all: Vec<_> = (1..=5u32)
            .flat_map(|u| (u + 1..=5).map(move |v| (u, v)))
            .collect();
        let s1 = jigsaw_step(&JigsawState::initial(&dg(5, &all, &all))).unwrap();
        assert_eq!(s1.cluster_count(), 1);
    }

    #[test]
    fn step_on_terminal_state_is_a_contract_violation() {
        let s = JigsawState::initial(&dg(3, &[(1, 2)], &[(2, 3)]));
        assert!(matches!(jigsaw_step(&s), Err(Error::Contract(_))));
    }

    #[test]
    fn four_vertex_hand_trace() {
        let g = dg(4, &[(1, 2), (2, 3), (3, 4)], &[(1, 2), (1, 3), (1, 4)]);
        let states = trace_jigsaw(&g);
        let parts: Vec<_> = states.iter().map(|s| s.partition()).collect();
        assert_eq!(parts[1], vec![vec![1, 2], vec![3], vec![4]]);
        assert_eq!(parts[2], vec![vec![1, 2, 3], vec![4]]);
        assert_eq!(parts[3], vec![vec![1, 2, 3, 4]]);
        let r = run_jigsaw(&g);
        assert!(r.percolated);
        assert_eq!(r.rounds, 3);
        assert_eq!(r.max_cluster_trace, vec![1, 2, 3, 4]);
    }

    #[test]
    fn single_vertex_percolates_without_rounds() {
        let r = run_jigsaw(&DoubleGraph::empty(1).unwrap());
        assert!(r.percolated);
        assert_eq!(r.rounds, 0);
    }

    #[test]
    fn disjoint_colours_never_merge() {
        let g = dg(4, &[(1, 2), (2, 3), (3, 4)], &[(1, 3), (2, 4), (1, 4)]);
        let r = run_jigsaw(&g);
        assert_eq!(r.rounds, 0);
        assert_eq!(r.final_partition.len(), 4);
        assert!(!r.percolated);
    }

    #[test]
    fn one_colour_only_does_not_percolate() {
        let g = dg(3, &[(1, 2), (2, 3)], &[]);
        assert!(!percolates(&g));
    }

    #[test]
    fn identical_connected_colours_percolate() {
        let e = [(1, 2), (2, 3), (3, 4), (4, 5)];
        assert!(percolates(&dg(5, &e, &e)));
    }

    #[test]
    fn path_and_star_on_three_vertices() {
        assert!(percolates(&dg(3, &[(1, 2), (2, 3)], &[(1, 2), (1, 3)])));
    }

    #[test]
    fn invariants_along_random_traces() {
        for seed in 0..40 {
            let g = generate_double_graph(&GenParams::new(60, 0.12, 0.12, seed)).unwrap();
            let states = trace_jigsaw(&g);
            assert!(states.len() - 1 <= g.n() - 1);
            for pair in states.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                assert!(b.cluster_count() < a.cluster_count());
                // Coarsening: vertices sharing a cluster keep sharing one.
                for v in g.vertices() {
                    assert_eq!(b.cluster_of(a.cluster_of(v)), b.cluster_of(v));
                }
                let total: usize = b.partition().iter().map(Vec::len).sum();
                assert_eq!(total, g.n());
            }
            for s in &states {
                assert_eq!(s.aux_edges(), intersect_sorted(&s.red, &s.blue).as_slice());
            }
        }
    }
}
