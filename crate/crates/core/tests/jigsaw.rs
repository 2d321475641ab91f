use jigsaw_core::graph::generate_double_graph;
use jigsaw_core::jigsaw::trace_jigsaw;
use jigsaw_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn red_connected(g: &DoubleGraph) -> bool {
    let mut seen = vec![false; g.n() + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbours(Colour::Red, v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == g.n()
}

/// Merges any two clusters joined in both colours until none are left.
fn naive_percolates(g: &DoubleGraph) -> bool {
    let mut clusters: Vec<Vec<Vertex>> = g.vertices().map(|v| vec![v]).collect();
    let joined = |a: &[Vertex], b: &[Vertex], c: Colour| {
        a.iter().any(|&u| b.iter().any(|&v| g.has_edge(c, u, v)))
    };
    'outer: loop {
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                if joined(&clusters[i], &clusters[j], Colour::Red)
                    && joined(&clusters[i], &clusters[j], Colour::Blue)
                {
                    let moved = clusters.remove(j);
                    clusters[i].extend(moved);
                    continue 'outer;
                }
            }
        }
        return clusters.len() == 1;
    }
}

#[test]
fn hand_traces() {
    let g = DoubleGraph::new(4, [(1, 2), (2, 3), (3, 4)], [(1, 2), (1, 3), (1, 4)]).unwrap();
    let r = run_jigsaw(&g);
    assert!(r.percolated);
    assert_eq!(r.rounds, 3);
    assert_eq!(r.max_cluster_trace, vec![1, 2, 3, 4]);

    let g = DoubleGraph::new(3, [(1, 2), (2, 3)], [(1, 2), (1, 3)]).unwrap();
    let states = trace_jigsaw(&g);
    assert_eq!(states[1].partition(), vec![vec![1, 2], vec![3]]);
    assert_eq!(states[1].red_cluster_edges(), &[(1, 3)]);
    assert_eq!(states[1].blue_cluster_edges(), &[(1, 3)]);
    assert!(percolates(&g));

    let r = run_jigsaw(&DoubleGraph::empty(1).unwrap());
    assert!(r.percolated);
    assert_eq!(r.rounds, 0);
}

#[test]
fn disjoint_colours_stay_apart() {
    let g = DoubleGraph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5)], [(1, 3), (2, 4), (3, 5)]).unwrap();
    let r = run_jigsaw(&g);
    assert_eq!(r.rounds, 0);
    assert_eq!(r.final_partition.len(), 5);
    assert!(!r.percolated);
}

#[test]
fn identical_colours_reduce_to_connectivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let n = rng.random_range(2..=50);
        let p = rng.random_range(1..=10) as f64 * 0.02;
        let base = generate_double_graph(&GenParams::new(n, p, 0.0, rng.random())).unwrap();
        let g = DoubleGraph::new(n, base.red_edges().to_vec(), base.red_edges().to_vec()).unwrap();
        assert_eq!(percolates(&g), red_connected(&g));
    }
}

#[test]
fn edge_additions_never_break_percolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let n = rng.random_range(5..=40);
        let mut g = generate_double_graph(&GenParams::new(n, 0.25, 0.25, rng.random())).unwrap();
        let mut was = percolates(&g);
        for _ in 0..20 {
            let u = rng.random_range(1..=n as u32);
            let v = loop {
                let v = rng.random_range(1..=n as u32);
                if v != u {
                    break v;
                }
            };
            let colour = if rng.random_bool(0.5) { Colour::Red } else { Colour::Blue };
            g = g.with_edge(colour, u, v).unwrap();
            let now = percolates(&g);
            assert!(!was || now);
            was = now;
        }
    }
}

#[test]
fn large_sparse_run_is_consistent() {
    let n = 20_000;
    let p = (2.0 / (4.0 * n as f64 * (n as f64).ln())).sqrt();
    let g = generate_double_graph(&GenParams::new(n, p, p, 5)).unwrap();
    let r = run_jigsaw(&g);
    assert!(r.rounds < n);
    assert_eq!(r.percolated, r.max_cluster() == n);
    assert_eq!(r.final_partition.iter().map(Vec::len).sum::<usize>(), n);
}

proptest! {
    #[test]
    fn engine_matches_naive_merging(seed in any::<u64>(), n in 1usize..16, p1 in 0.0f64..0.7, p2 in 0.0f64..0.7) {
        let g = generate_double_graph(&GenParams::new(n, p1, p2, seed)).unwrap();
        prop_assert_eq!(percolates(&g), naive_percolates(&g));
        prop_assert_eq!(percolates(&g), percolates(&g.swap_colours()));
    }

    #[test]
    fn traces_coarsen_and_shrink(seed in any::<u64>(), n in 2usize..60) {
        let g = generate_double_graph(&GenParams::new(n, 0.2, 0.2, seed)).unwrap();
        let states = trace_jigsaw(&g);
        prop_assert!(states.len() <= n);
        for w in states.windows(2) {
            prop_assert!(w[1].cluster_count() < w[0].cluster_count());
            for v in g.vertices() {
                // Coarsening: vertices sharing a cluster keep sharing one.
                let old = w[0].cluster_of(v);
                prop_assert_eq!(w[1].cluster_of(v), w[1].cluster_of(old));
            }
            let total: usize = w[1].partition().iter().map(Vec::len).sum();
            prop_assert_eq!(total, n);
        }
        let last = states.last().unwrap();
        prop_assert!(last.aux_edges().is_empty());
    }

    #[test]
    fn relabelling_does_not_change_the_outcome(seed in any::<u64>(), n in 2usize..25) {
        let g = generate_double_graph(&GenParams::new(n, 0.3, 0.3, seed)).unwrap();
        let flip = |e: &(Vertex, Vertex)| (n as Vertex + 1 - e.1, n as Vertex + 1 - e.0);
        let h = DoubleGraph::new(n, g.red_edges().iter().map(flip), g.blue_edges().iter().map(flip)).unwrap();
        let (a, b) = (run_jigsaw(&g), run_jigsaw(&h));
        prop_assert_eq!(a.percolated, b.percolated);
        prop_assert_eq!(a.rounds, b.rounds);
        prop_assert_eq!(a.max_cluster(), b.max_cluster());
    }
}
