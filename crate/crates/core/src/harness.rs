//! Seeded Monte Carlo trials, threshold sweeps and the verification suite.
//!
//! The threshold is parametrised by `c` with `p1 p2 = c / (4 n ln n)`. Trial
//! `t` at the `i`-th value of `c` uses seed `derive_seed([master, i, t])`, so
//! a sweep is a pure function of its configuration whatever the worker count.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::analysis::{self, bottleneck_root, threshold_big_n};
use crate::enumeration::{self, BoundKind};
use crate::error::{param, Error, Result};
use crate::graph::{generate_double_graph, GenParams};
use crate::hifloat::HiFloat;
use crate::jigsaw::run_jigsaw;
use crate::rng::derive_seed;
use crate::scalar::Scalar;
use crate::Rational;

/// CSV header shared by trial and summary rows.
pub const CSV_HEADER: [&str; 12] = [
    "n",
    "p1",
    "p2",
    "c",
    "trial",
    "seed",
    "percolated",
    "rounds",
    "max_cluster",
    "red_edges",
    "blue_edges",
    "runtime_ms",
];

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959964;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub c: f64,
    pub trial: u64,
    pub seed: u64,
    pub percolated: bool,
    pub rounds: usize,
    pub max_cluster: usize,
    pub red_edges: usize,
    pub blue_edges: usize,
    pub runtime_ms: u64,
}

impl TrialRecord {
    fn csv_fields(&self) -> [String; 12] {
        [
            self.n.to_string(),
            self.p1.to_string(),
            self.p2.to_string(),
            self.c.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.percolated.to_string(),
            self.rounds.to_string(),
            self.max_cluster.to_string(),
            self.red_edges.to_string(),
            self.blue_edges.to_string(),
            self.runtime_ms.to_string(),
        ]
    }
}

/// `c` such that `p1 p2 = c / (4 n ln n)`.
pub fn threshold_multiple(n: usize, p1: f64, p2: f64) -> f64 {
    let nf = n as f64;
    if n < 2 {
        return 0.0;
    }
    p1 * p2 * 4.0 * nf * nf.ln()
}

/// `(ln n - ln ln n) / n`, below which `G(n, p)` is whp disconnected.
pub fn connectivity_floor(n: usize) -> f64 {
    let nf = n as f64;
    if n < 3 {
        return 0.0;
    }
    (nf.ln() - nf.ln().ln()) / nf
}

pub fn run_trial(n: usize, p1: f64, p2: f64, seed: u64) -> Result<TrialRecord> {
    run_trial_timed(n, p1, p2, seed, false)
}

/// Like [`run_trial`]; with `timing` the wall time is stored in `runtime_ms`,
/// otherwise it is 0 so that output stays reproducible.
pub fn run_trial_timed(n: usize, p1: f64, p2: f64, seed: u64, timing: bool) -> Result<TrialRecord> {
    let start = Instant::now();
    let g = generate_double_graph(&GenParams::new(n, p1, p2, seed))?;
    let result = run_jigsaw(&g);
    Ok(TrialRecord {
        n,
        p1,
        p2,
        c: threshold_multiple(n, p1, p2),
        trial: 0,
        seed,
        percolated: result.percolated,
        rounds: result.rounds,
        max_cluster: result.max_cluster(),
        red_edges: g.red_edges().len(),
        blue_edges: g.blue_edges().len(),
        runtime_ms: if timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

/// How a threshold multiple `c` is split into `(p1, p2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Split {
    /// `p1 = p2 = sqrt(c / (4 n ln n))`.
    #[default]
    Symmetric,
    /// `p1 = n^(-1/2)`, `p2 = c / (4 n ln n) / p1`.
    Asymmetric,
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Split::Symmetric),
            "asymmetric" => Ok(Split::Asymmetric),
            other => Err(param(format!("unknown split '{other}'"))),
        }
    }
}

pub fn split_probabilities(n: usize, c: f64, split: Split) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(param("threshold sweeps need n >= 2"));
    }
    if !(c.is_finite() && c >= 0.0) {
        return Err(param(format!("c = {c} must be a finite non-negative number")));
    }
    let nf = n as f64;
    let product = c / (4.0 * nf * nf.ln());
    let (p1, p2) = match split {
        Split::Symmetric => (product.sqrt(), product.sqrt()),
        Split::Asymmetric => {
            let p1 = nf.powf(-0.5);
            (p1, product / p1)
        }
    };
    if p1 > 1.0 || p2 > 1.0 {
        return Err(param(format!("c = {c} gives p1 = {p1}, p2 = {p2} outside [0, 1]")));
    }
    Ok((p1, p2))
}

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let phat = successes as f64 / t;
    let z2 = Z95 * Z95;
    let centre = (phat + z2 / (2.0 * t)) / (1.0 + z2 / t);
    let half = Z95 * (phat * (1.0 - phat) / t + z2 / (4.0 * t * t)).sqrt() / (1.0 + z2 / t);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: usize,
    pub trials: usize,
    pub fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    fn new(successes: usize, trials: usize) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        Estimate {
            successes,
            trials,
            fraction: successes as f64 / trials.max(1) as f64,
            ci_low,
            ci_high,
        }
    }
}

/// Runs `f` on a pool of `workers` threads (0 means rayon's default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| param(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Trials `0..trials` at one `c` index, in trial order.
pub fn run_trials(n: usize, p1: f64, p2: f64, c_index: u64, trials: u64, seed: u64, timing: bool) -> Result<Vec<TrialRecord>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = run_trial_timed(n, p1, p2, derive_seed(&[seed, c_index, t]), timing)?;
            r.trial = t;
            Ok(r)
        })
        .collect()
}

/// Percolation fraction at threshold multiple `c` with the symmetric split.
pub fn estimate_percolation_probability(n: usize, c: f64, trials: u64, seed: u64) -> Result<Estimate> {
    let (p1, p2) = split_probabilities(n, c, Split::Symmetric)?;
    estimate_at(n, p1, p2, trials, seed)
}

/// Percolation fraction at explicit probabilities.
pub fn estimate_at(n: usize, p1: f64, p2: f64, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(param("need at least one trial"));
    }
    GenParams::new(n, p1, p2, seed).validate()?;
    let records = run_trials(n, p1, p2, 0, trials, seed, false)?;
    let hits = records.iter().filter(|r| r.percolated).count();
    Ok(Estimate::new(hits, records.len()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub c_values: Vec<f64>,
    pub split: Split,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(n: usize, c_values: Vec<f64>, trials: u64, seed: u64) -> Self {
        SweepConfig {
            n,
            c_values,
            split: Split::Symmetric,
            trials,
            seed,
            workers: 0,
            timing: false,
        }
    }
}

/// Aggregate over the trials at one `c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub c: f64,
    pub estimate: Estimate,
    pub mean_rounds: f64,
    pub p95_rounds: usize,
    pub mean_max_cluster: f64,
    pub mean_red_edges: f64,
    pub mean_blue_edges: f64,
    pub total_runtime_ms: u64,
    /// `p2` lies below the connectivity floor.
    pub below_connectivity: bool,
}

impl SummaryRow {
    fn from_records(n: usize, p1: f64, p2: f64, c: f64, records: &[TrialRecord]) -> Self {
        let count = records.len().max(1) as f64;
        let mean = |f: fn(&TrialRecord) -> usize| records.iter().map(f).sum::<usize>() as f64 / count;
        let mut rounds: Vec<usize> = records.iter().map(|r| r.rounds).collect();
        rounds.sort_unstable();
        let p95 = if rounds.is_empty() {
            0
        } else {
            rounds[((0.95 * rounds.len() as f64).ceil() as usize).clamp(1, rounds.len()) - 1]
        };
        SummaryRow {
            n,
            p1,
            p2,
            c,
            estimate: Estimate::new(records.iter().filter(|r| r.percolated).count(), records.len()),
            mean_rounds: mean(|r| r.rounds),
            p95_rounds: p95,
            mean_max_cluster: mean(|r| r.max_cluster),
            mean_red_edges: mean(|r| r.red_edges),
            mean_blue_edges: mean(|r| r.blue_edges),
            total_runtime_ms: records.iter().map(|r| r.runtime_ms).sum(),
            below_connectivity: p1.min(p2) < connectivity_floor(n),
        }
    }

    /// Summary rows reuse the trial columns: `trial` is `summary`, `seed` is
    /// empty, `percolated` holds the fraction and the count columns hold means.
    fn csv_fields(&self) -> [String; 12] {
        [
            self.n.to_string(),
            self.p1.to_string(),
            self.p2.to_string(),
            self.c.to_string(),
            "summary".into(),
            String::new(),
            self.estimate.fraction.to_string(),
            self.mean_rounds.to_string(),
            self.mean_max_cluster.to_string(),
            self.mean_red_edges.to_string(),
            self.mean_blue_edges.to_string(),
            self.total_runtime_ms.to_string(),
        ]
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "p1": self.p1,
            "p2": self.p2,
            "c": self.c,
            "trial": "summary",
            "seed": null,
            "percolated": self.estimate.fraction,
            "rounds": self.mean_rounds,
            "max_cluster": self.mean_max_cluster,
            "red_edges": self.mean_red_edges,
            "blue_edges": self.mean_blue_edges,
            "runtime_ms": self.total_runtime_ms,
            "trials": self.estimate.trials,
            "successes": self.estimate.successes,
            "ci_low": self.estimate.ci_low,
            "ci_high": self.estimate.ci_high,
            "p95_rounds": self.p95_rounds,
            "below_connectivity": self.below_connectivity,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    /// Ordered by `(c index, trial)`.
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<SummaryRow>,
    pub warnings: Vec<String>,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    let mut plan = Vec::new();
    let mut warnings = Vec::new();
    for &c in &config.c_values {
        let (p1, p2) = split_probabilities(config.n, c, config.split)?;
        if p1.min(p2) < connectivity_floor(config.n) {
            warnings.push(format!(
                "c = {c}: min(p1, p2) = {:.3e} is below the connectivity floor {:.3e}",
                p1.min(p2),
                connectivity_floor(config.n)
            ));
        }
        plan.push((c, p1, p2));
    }
    let (n, trials, seed, timing) = (config.n, config.trials, config.seed, config.timing);
    let mut per_c = with_workers(config.workers, || {
        plan.iter()
            .enumerate()
            .map(|(i, &(_, p1, p2))| run_trials(n, p1, p2, i as u64, trials, seed, timing))
            .collect::<Result<Vec<_>>>()
    })??;
    for (records, &(c, _, _)) in per_c.iter_mut().zip(&plan) {
        for r in records.iter_mut() {
            r.c = c;
        }
    }
    let summaries = plan
        .iter()
        .zip(&per_c)
        .filter(|(_, records)| !records.is_empty())
        .map(|(&(c, p1, p2), records)| SummaryRow::from_records(n, p1, p2, c, records))
        .collect();
    Ok(SweepOutput {
        records: per_c.into_iter().flatten().collect(),
        summaries,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(param(format!("unknown format '{other}', expected csv or json"))),
        }
    }
}

/// Writes trial rows followed by one summary row per `c`.
pub fn write_sweep<W: Write>(out: &SweepOutput, format: OutputFormat, w: W) -> Result<()> {
    write_rows(&out.records, &out.summaries, format, w)
}

/// Writes trial records only.
pub fn write_records<W: Write>(records: &[TrialRecord], format: OutputFormat, w: W) -> Result<()> {
    write_rows(records, &[], format, w)
}

fn write_rows<W: Write>(records: &[TrialRecord], summaries: &[SummaryRow], format: OutputFormat, mut w: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(CSV_HEADER)?;
            for r in records {
                csv.write_record(r.csv_fields())?;
            }
            for s in summaries {
                csv.write_record(s.csv_fields())?;
            }
            csv.flush()?;
        }
        OutputFormat::Json => {
            for r in records {
                serde_json::to_writer(&mut w, r)?;
                writeln!(w)?;
            }
            for s in summaries {
                serde_json::to_writer(&mut w, &s.to_json())?;
                writeln!(w)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Whether summary fractions are non-decreasing in `c`, allowing at most one
/// adjacent inversion whose Wilson intervals overlap.
pub fn fractions_monotone(summaries: &[SummaryRow]) -> bool {
    let mut inversions = 0;
    for w in summaries.windows(2) {
        let (a, b) = (&w[0].estimate, &w[1].estimate);
        if b.fraction < a.fraction {
            inversions += 1;
            if inversions > 1 || b.ci_high < a.ci_low {
                return false;
            }
        }
    }
    true
}

/// Empirical largest clusters below the threshold against the predicted
/// bottleneck root.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BottleneckReport {
    pub n: usize,
    pub c: f64,
    pub trials: u64,
    /// `N = n p1 p2`.
    pub big_n: f64,
    pub predicted: f64,
    pub k0: usize,
    pub median_max_cluster: f64,
    pub median_ratio: f64,
    pub lower_quartile_ratio: f64,
    pub upper_quartile_ratio: f64,
    /// Share of trials whose largest cluster exceeds `k0 = ⌈2 ln n⌉`.
    pub above_k0: f64,
    pub within_factor_two: bool,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn bottleneck_compare(n: usize, c: f64, trials: u64, seed: u64) -> Result<BottleneckReport> {
    if !(c > 0.0 && c < 1.0) {
        return Err(param(format!("bottleneck comparison needs 0 < c < 1, got {c}")));
    }
    if trials == 0 {
        return Err(param("need at least one trial"));
    }
    let (p1, p2) = split_probabilities(n, c, Split::Symmetric)?;
    let nf = n as f64;
    let big_n = nf * p1 * p2;
    let predicted = bottleneck_root(&big_n, &nf)?;
    let records = run_trials(n, p1, p2, 0, trials, seed, false)?;
    let mut sizes: Vec<f64> = records.iter().map(|r| r.max_cluster as f64).collect();
    sizes.sort_by(f64::total_cmp);
    let k0 = (2.0 * nf.ln()).ceil() as usize;
    let median = quantile(&sizes, 0.5);
    let median_ratio = median / predicted;
    Ok(BottleneckReport {
        n,
        c,
        trials,
        big_n,
        predicted,
        k0,
        median_max_cluster: median,
        median_ratio,
        lower_quartile_ratio: quantile(&sizes, 0.25) / predicted,
        upper_quartile_ratio: quantile(&sizes, 0.75) / predicted,
        above_k0: records.iter().filter(|r| r.max_cluster > k0).count() as f64 / trials as f64,
        within_factor_two: (0.5..=2.0).contains(&median_ratio),
    })
}

/// Groups of checks run by [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifySuite {
    All,
    Identities,
    Domination,
    Bottleneck,
    Counting,
}

impl FromStr for VerifySuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(VerifySuite::All),
            "identities" => Ok(VerifySuite::Identities),
            "domination" => Ok(VerifySuite::Domination),
            "bottleneck" => Ok(VerifySuite::Bottleneck),
            "counting" => Ok(VerifySuite::Counting),
            other => Err(param(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn verify_identities() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut first_failure = None;
    for j in 3..=8 {
        if let Some(m) = analysis::partial_sum_identity_sweep(j, 200)? {
            first_failure.get_or_insert((j, m));
        }
    }
    out.push(CheckOutcome::new(
        "partial_sum_identity",
        first_failure.is_none(),
        match first_failure {
            None => "exact for j = 3..8, m = j..200".to_string(),
            Some((j, m)) => format!("fails at j = {j}, m = {m}"),
        },
    ));
    let quarter = analysis::infinite_sum_closed_form(3)?;
    let sixtieth = analysis::infinite_sum_closed_form(4)?;
    let want = (Rational::new(1.into(), 4.into()), Rational::new(1.into(), 60.into()));
    out.push(CheckOutcome::new(
        "infinite_sum_closed_form",
        quarter == want.0 && sixtieth == want.1,
        format!("j = 3: {quarter}, j = 4: {sixtieth}"),
    ));
    let mut bound_ok = true;
    for j in 3..=60 {
        bound_ok &= analysis::infinite_sum_bound_holds(j)?;
    }
    out.push(CheckOutcome::new("infinite_sum_upper_bound", bound_ok, "j = 3..60"));
    let mut cv_fail = None;
    for a in -8..=8 {
        for b in -3..=8 {
            for c in 0..=7 {
                if !analysis::chu_vandermonde_check(a, b, c) {
                    cv_fail.get_or_insert((a, b, c));
                }
            }
        }
    }
    out.push(CheckOutcome::new(
        "chu_vandermonde",
        cv_fail.is_none(),
        match cv_fail {
            None => "exact on a in -8..8, b in -3..8, c in 0..7".to_string(),
            Some(x) => format!("fails at (a, b, c) = {x:?}"),
        },
    ));
    let mut stirling_fail = None;
    for n in 1..=100 {
        if !analysis::stirling_bounds_check(n)? {
            stirling_fail.get_or_insert(n);
        }
    }
    out.push(CheckOutcome::new(
        "stirling_bounds",
        stirling_fail.is_none(),
        match stirling_fail {
            None => "n = 1..100".to_string(),
            Some(n) => format!("fails at n = {n}"),
        },
    ));
    Ok(out)
}

pub fn verify_domination() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let exact = analysis::binomial_domination_grid::<Rational>()?;
    let float = analysis::binomial_domination_grid::<f64>()?;
    out.push(CheckOutcome::new(
        "binomial_dominates_cutoff_poisson",
        exact.violations == 0 && float == exact,
        format!("{} cells, {} exact and {} float violations", exact.cells, exact.violations, float.violations),
    ));
    let exact = analysis::poisson_sum_grid::<Rational>()?;
    let float = analysis::poisson_sum_grid::<f64>()?;
    out.push(CheckOutcome::new(
        "cutoff_poisson_sum_dominates",
        exact.violations == 0 && float == exact,
        format!("{} cells, {} exact and {} float violations", exact.cells, exact.violations, float.violations),
    ));
    Ok(out)
}

/// Bottleneck root at `N = 1/(4 ln n)` against `2 ln n`, in [`HiFloat`].
pub fn verify_bottleneck() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for n in [1e3, 1e4, 1e6] {
        let n_hi = HiFloat::from_f64(n);
        let root = bottleneck_root(&threshold_big_n(&n_hi), &n_hi)?;
        let err = (root - HiFloat::from_u64(2) * n_hi.ln()).abs().to_f64();
        out.push(CheckOutcome::new(
            &format!("bottleneck_threshold_n{n:e}"),
            err < 1e-9,
            format!("|root - 2 ln n| = {err:.3e}"),
        ));
    }
    Ok(out)
}

/// Exact counts against the Cayley, lemma, theorem and partition bounds.
pub fn verify_counting() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut detail = Vec::new();
    let mut ok = true;
    for k in 2..=6 {
        let rep = enumeration::count_minimal_configs(k)?;
        ok &= rep.bound_satisfied && (k != 2 || rep.tight);
        detail.push(format!("P_{k} = {}", rep.exact_count));
    }
    out.push(CheckOutcome::new("cayley_bound", ok, detail.join(", ")));

    let mut ok = true;
    for k in 1..=5 {
        for l in 1..=k {
            ok &= enumeration::count_mprime(k, l)?.bound_satisfied;
        }
    }
    out.push(CheckOutcome::new(BoundKind::LemmaMprime.name(), ok, "1 <= l <= k <= 5"));

    let mut theorem_ok = true;
    let mut ineq_failures = Vec::new();
    for k in 1..=5usize {
        for r in 1..=k.min(6 - k) {
            for l in 1..=k {
                let rep = enumeration::count_mklr(k, l, r)?;
                theorem_ok &= rep.bound_satisfied;
                for b in rep.extra_bounds.iter().filter(|b| !b.satisfied) {
                    ineq_failures.push(format!(
                        "(k,l,r)=({k},{l},{r}): {} > {}",
                        rep.exact_count,
                        b.value.to_f64()
                    ));
                }
            }
        }
    }
    out.push(CheckOutcome::new(BoundKind::TheoremMklr.name(), theorem_ok, "k + r <= 6"));
    out.push(CheckOutcome::new(
        BoundKind::Ineq31.name(),
        ineq_failures.is_empty(),
        if ineq_failures.is_empty() {
            "k + r <= 6".to_string()
        } else {
            ineq_failures.join("; ")
        },
    ));
    Ok(out)
}

pub fn verify(suite: VerifySuite) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    if matches!(suite, VerifySuite::All | VerifySuite::Identities) {
        out.extend(verify_identities()?);
    }
    if matches!(suite, VerifySuite::All | VerifySuite::Domination) {
        out.extend(verify_domination()?);
    }
    if matches!(suite, VerifySuite::All | VerifySuite::Bottleneck) {
        out.extend(verify_bottleneck()?);
    }
    if matches!(suite, VerifySuite::All | VerifySuite::Counting) {
        out.extend(verify_counting()?);
    }
    Ok(out)
}
