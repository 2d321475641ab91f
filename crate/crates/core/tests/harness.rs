use jigsaw_core::harness::*;

fn csv_bytes(config: &SweepConfig) -> Vec<u8> {
    let mut buf = Vec::new();
    write_sweep(&run_sweep(config).unwrap(), OutputFormat::Csv, &mut buf).unwrap();
    buf
}

#[test]
fn sweep_output_ignores_worker_count() {
    let mut config = SweepConfig::new(2000, vec![0.5, 1.0, 3.0], 12, 99);
    config.workers = 1;
    let one = csv_bytes(&config);
    config.workers = 3;
    assert_eq!(csv_bytes(&config), one);
    config.workers = 0;
    assert_eq!(csv_bytes(&config), one);
    config.seed = 100;
    assert_ne!(csv_bytes(&config), one);
}

#[test]
fn records_are_sane_and_ordered() {
    let mut config = SweepConfig::new(1500, vec![0.25, 4.0], 10, 5);
    config.split = Split::Asymmetric;
    let out = run_sweep(&config).unwrap();
    assert_eq!(out.records.len(), 20);
    for (i, r) in out.records.iter().enumerate() {
        assert_eq!(r.trial, (i % 10) as u64);
        assert_eq!(r.percolated, r.max_cluster == r.n);
        assert!(r.rounds < r.n);
        assert_eq!(r.runtime_ms, 0);
    }
    assert_eq!(out.summaries.len(), 2);
    let s = &out.summaries[0];
    assert!(s.estimate.ci_low <= s.estimate.fraction && s.estimate.fraction <= s.estimate.ci_high);
    // The asymmetric split puts p2 far below ln n / n at c = 0.25.
    assert!(s.below_connectivity);
    assert!(!out.warnings.is_empty());
}

#[test]
fn csv_header_and_summary_rows() {
    let text = String::from_utf8(csv_bytes(&SweepConfig::new(300, vec![2.0], 3, 1))).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,p1,p2,c,trial,seed,percolated,rounds,max_cluster,red_edges,blue_edges,runtime_ms"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[4].split(',').nth(4) == Some("summary"));
    for row in &lines[1..4] {
        assert_eq!(row.split(',').count(), 12);
    }
}

#[test]
fn estimate_is_reproducible() {
    let a = estimate_percolation_probability(3000, 2.0, 16, 8).unwrap();
    let b = estimate_percolation_probability(3000, 2.0, 16, 8).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trials, 16);
}

#[test]
fn subcritical_clusters_match_the_bottleneck_root() {
    let report = bottleneck_compare(16_384, 0.5, 300, 3).unwrap();
    eprintln!("{report:?}");
    assert!(report.within_factor_two);
    assert!(report.predicted < report.k0 as f64);
    let low = bottleneck_compare(16_384, 0.25, 300, 4).unwrap();
    assert!(low.above_k0 <= 0.05);
    assert!(bottleneck_compare(100, 1.0, 5, 0).is_err());
}

#[test]
fn supercritical_round_counts() {
    let out = run_sweep(&SweepConfig::new(16_384, vec![4.0], 60, 21)).unwrap();
    let s = &out.summaries[0];
    let cap = 10.0 * (16_384f64).ln();
    eprintln!("p95 rounds {} against 10 ln n = {cap:.1}", s.p95_rounds);
    if s.p95_rounds as f64 > cap {
        eprintln!("warning: p95 round count exceeds 10 ln n");
    }
    assert!(s.estimate.fraction > 0.5);
}

#[test]
fn verification_suites() {
    for suite in [VerifySuite::Identities, VerifySuite::Domination, VerifySuite::Bottleneck] {
        for check in verify(suite).unwrap() {
            assert!(check.passed, "{check:?}");
        }
    }
    assert!("counting".parse::<VerifySuite>().is_ok());
    assert!("bogus".parse::<VerifySuite>().is_err());
}
