use jigsaw_core::absorption::{find_percolating_input, run_absorption};
use jigsaw_core::enumeration::*;
use jigsaw_core::{percolates, HiFloat};
use proptest::prelude::*;

#[test]
fn prufer_round_trip_is_exhaustive_up_to_six() {
    for k in 2..=6usize {
        let trees = all_trees(k).unwrap();
        assert_eq!(trees.len(), k.pow(k as u32 - 2));
        for t in &trees {
            assert_eq!(t.len(), k - 1);
            let seq = prufer_encode(t, k).unwrap();
            assert_eq!(&prufer_decode(&seq, k).unwrap(), t);
        }
    }
}

proptest! {
    #[test]
    fn decode_then_encode_is_identity(k in 3usize..=9, raw in prop::collection::vec(1u32..=9, 7)) {
        let seq: Vec<u32> = raw[..k - 2].iter().map(|&x| (x - 1) % k as u32 + 1).collect();
        let tree = prufer_decode(&seq, k).unwrap();
        prop_assert_eq!(prufer_encode(&tree, k).unwrap(), seq);
    }
}

#[test]
fn percolating_pair_counts_respect_cayley() {
    let mut previous = 0;
    for k in 2..=6 {
        let report = count_minimal_configs(k).unwrap();
        assert!(report.bound_satisfied, "k={k}: {report:?}");
        assert!(report.exact_count >= previous);
        previous = report.exact_count;
    }
    assert_eq!(count_minimal_configs(2).unwrap().exact_count, 1);
    assert_eq!(count_minimal_configs(3).unwrap().exact_count, 9);
    assert!(count_minimal_configs(7).is_err());
}

#[test]
fn tables_are_internally_consistent() {
    let e = Enumerator::new(EnumerationCaps::default());
    for m in 2..=6 {
        let t = e.table(m, true).unwrap();
        assert_eq!(t.oracle_mismatches, 0, "m={m}");
        assert_eq!(t.engine_mismatches, 0, "m={m}");
        assert_eq!(t.swap_asymmetries, 0, "m={m}");
        // Identical trees always percolate, and (P + D) must be even.
        assert_eq!((t.percolating_pairs() + t.self_symmetric) % 2, 0);
        assert!(t.unordered_pairs() * 2 >= t.percolating_pairs());
        for entry in &t.entries {
            let steps = entry.min_steps.expect("every percolating pair has an input") as usize;
            assert!(steps <= m - 1);
        }
    }
}

#[test]
fn found_inputs_replay_on_small_configs() {
    for k in 2..=4 {
        for config in minimal_configs(k).unwrap() {
            let g = config.to_double_graph();
            assert!(percolates(&g));
            let found = find_percolating_input(&g).unwrap().expect("input exists");
            let trace = run_absorption(&g, &found.input).unwrap();
            assert!(trace.percolated);
            assert_eq!(trace.steps, found.steps);
        }
    }
}

#[test]
fn mprime_is_monotone_and_bounded() {
    for k in 1..=5 {
        let mut last = 0;
        for l in 1..=k {
            let report = count_mprime(k, l).unwrap();
            assert!(report.bound_satisfied);
            assert!(report.exact_count >= last, "k={k} l={l}");
            last = report.exact_count;
        }
        if k >= 2 {
            assert_eq!(last, count_minimal_configs(k).unwrap().exact_count, "k={k}");
        }
    }
    assert_eq!(count_mprime(2, 1).unwrap().exact_count, 1);
}

#[test]
fn mklr_counts_satisfy_the_theorem_bound() {
    for k in 1..=5usize {
        for r in 1..=k.min(6 - k) {
            let total = count_minimal_configs(k + r).unwrap().exact_count;
            for l in 1..=k {
                let report = count_mklr(k, l, r).unwrap();
                assert!(report.bound_satisfied, "{:?}", report.to_json());
                assert!(report.exact_count <= total);
            }
        }
    }
    assert_eq!(count_mklr(1, 1, 1).unwrap().exact_count, 1);
}

// The partition inequality fixes the anchor vertex of the last step from the
// k-vertex part alone, but that vertex depends on the chosen input. These are
// the triples where the exact count exceeds it.
#[test]
fn partition_inequality_violations_are_pinned() {
    let violations = [
        ((3, 2, 2), 1660, 1440),
        ((4, 4, 1), 10220, 9760),
        ((4, 3, 2), 104760, 87840),
        ((4, 4, 2), 121320, 117120),
        ((5, 5, 1), 842710, 811500),
    ];
    let mut seen = Vec::new();
    for k in 1..=5usize {
        for r in 1..=k.min(6 - k) {
            for l in 1..=k {
                let report = count_mklr(k, l, r).unwrap();
                let ineq = &report.extra_bounds[0];
                assert_eq!(ineq.kind, BoundKind::Ineq31);
                if !ineq.satisfied {
                    seen.push(((k, l, r), report.exact_count, ineq.value.to_f64() as u64));
                }
            }
        }
    }
    assert_eq!(seen, violations);
}

#[test]
fn bound_values_are_ordered_sensibly() {
    let lemma = paper_bound_value(BoundKind::LemmaMprime, 3, 2, 0).unwrap();
    assert!(lemma > HiFloat::exp_int(291));
    let theorem = paper_bound_value(BoundKind::TheoremMklr, 2, 1, 1).unwrap();
    assert!(theorem.is_finite());
    assert!((theorem.ln_f64() - 584.0 - 96f64.ln()).abs() < 1e-9);
    let ineq = paper_bound_value(BoundKind::Ineq31, 1, 1, 1).unwrap();
    assert_eq!(ineq, HiFloat::from_u64(4));
    assert!("ineq31".parse::<BoundKind>().is_ok());
    assert!("nope".parse::<BoundKind>().is_err());
}
