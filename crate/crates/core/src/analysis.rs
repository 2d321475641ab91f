//! Exact identity checks, discrete distributions with stochastic domination,
//! and the bottleneck equation.
//!
//! Everything distribution-valued is generic over [`Scalar`]; with
//! [`Rational`] masses every comparison is exact. Truncated Poisson masses
//! are formed from the weights `λ^t / t!` and renormalised, so the `e^{-λ}`
//! factor cancels and rational `λ` gives exact masses.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{param, Error, Result};
use crate::hifloat::HiFloat;
use crate::scalar::{RealScalar, Scalar};
use crate::Rational;

fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Generalised binomial `a (a-1) ... (a-l+1) / l!`, valid for negative `a`.
pub fn generalized_binomial(a: i64, l: u64) -> Rational {
    let num = (0..l as i64).fold(BigInt::one(), |acc, i| acc * (a - i));
    Rational::new(num, factorial(l))
}

/// Both sides of an exact identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `1 / ((i+1)(i+2)...(i+j-1))`.
pub fn reciprocal_rising(i: u64, j: u64) -> Rational {
    let den = (1..j).fold(BigInt::one(), |acc, s| acc * (i + s));
    Rational::new(BigInt::one(), den)
}

/// Closed form of `Σ_{i=j}^{m} 1/((i+1)...(i+j-1))` obtained by partial
/// fractions and telescoping.
pub fn partial_sum_closed_form(j: u64, m: u64) -> Result<Rational> {
    check_partial_sum_range(j, m)?;
    let mut acc = Rational::zero();
    for l in 0..=j - 3 {
        let term = generalized_binomial((j - 3) as i64, l)
            * (rat(1, (j + 1 + l) as i64) - rat(1, (m + 2 + l) as i64));
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / Rational::from_integer(factorial(j - 2)))
}

fn check_partial_sum_range(j: u64, m: u64) -> Result<()> {
    if j < 3 {
        return Err(param(format!("need j >= 3, got {j}")));
    }
    if m < j {
        return Err(param(format!("need m >= j, got m={m}, j={j}")));
    }
    Ok(())
}

/// Direct rational summation against the closed form.
pub fn partial_sum_identity_check(j: u64, m: u64) -> Result<IdentityCheck> {
    check_partial_sum_range(j, m)?;
    let lhs = (j..=m).fold(Rational::zero(), |acc, i| acc + reciprocal_rising(i, j));
    Ok(IdentityCheck {
        lhs,
        rhs: partial_sum_closed_form(j, m)?,
    })
}

/// Checks every `m` in `j..=m_max`, summing incrementally. Returns the first
/// `m` where the sides differ.
pub fn partial_sum_identity_sweep(j: u64, m_max: u64) -> Result<Option<u64>> {
    check_partial_sum_range(j, m_max)?;
    let mut lhs = Rational::zero();
    for m in j..=m_max {
        lhs += reciprocal_rising(m, j);
        if lhs != partial_sum_closed_form(j, m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// `j! / ((j-2) (2j-2)!)`, the value of the full series.
pub fn infinite_sum_closed_form(j: u64) -> Result<Rational> {
    if j < 3 {
        return Err(param(format!("need j >= 3, got {j}")));
    }
    Ok(Rational::new(
        factorial(j),
        BigInt::from(j - 2) * factorial(2 * j - 2),
    ))
}

/// The series value against `e^2 j!/(j-2) (e/(2j))^(2j-2)`, in 576-bit
/// floats. Returns `(value, bound)`.
pub fn infinite_sum_upper_bound(j: u64) -> Result<(HiFloat, HiFloat)> {
    let value = HiFloat::from_rational(&infinite_sum_closed_form(j)?);
    let e = 2 * j as i64 - 2;
    let bound = HiFloat::exp_int(2)
        * HiFloat::from_bigint(&factorial(j))
        / HiFloat::from_u64(j - 2)
        * HiFloat::exp_int(e)
        / HiFloat::from_u64(2 * j).powi(e as usize);
    Ok((value, bound))
}

pub fn infinite_sum_bound_holds(j: u64) -> Result<bool> {
    let (value, bound) = infinite_sum_upper_bound(j)?;
    Ok(value <= bound)
}

/// `C(a+b, c) = Σ_l C(a, l) C(b, c-l)` with generalised binomials.
pub fn chu_vandermonde(a: i64, b: i64, c: u64) -> IdentityCheck {
    let lhs = generalized_binomial(a + b, c);
    let rhs = (0..=c).fold(Rational::zero(), |acc, l| {
        acc + generalized_binomial(a, l) * generalized_binomial(b, c - l)
    });
    IdentityCheck { lhs, rhs }
}

pub fn chu_vandermonde_check(a: i64, b: i64, c: u64) -> bool {
    chu_vandermonde(a, b, c).holds()
}

/// `(n/e)^n <= sqrt(2πn) (n/e)^n <= n! <= e sqrt(n) (n/e)^n`.
///
/// The two outer comparisons are squared and cleared of `e^{-n}` so that
/// the `n = 1` equality on the right is decided between exact integers.
pub fn stirling_bounds_check(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(param("Stirling bounds need n >= 1"));
    }
    let fact = HiFloat::from_bigint(&factorial(n));
    let fact_sq = fact.clone() * fact;
    let n_hi = HiFloat::from_u64(n);
    let two_pi_n = HiFloat::from_u64(2) * HiFloat::pi() * n_hi.clone();
    let first = two_pi_n >= HiFloat::one();
    let n_pow = HiFloat::from_biguint(&BigUint::from(n).pow(2 * n as u32));
    let middle = HiFloat::from_u64(2) * HiFloat::pi() * n_hi.clone() * n_pow.clone()
        <= fact_sq.clone() * HiFloat::exp_int(2 * n as i64);
    let last = fact_sq * HiFloat::exp_int(2 * n as i64 - 2) <= n_pow * n_hi;
    Ok(first && middle && last)
}

/// Finite distribution on `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDist<T> {
    masses: Vec<T>,
}

impl<T: Scalar> DiscreteDist<T> {
    /// Rejects negative masses and a total off 1 by more than the type's
    /// tolerance.
    pub fn new(masses: Vec<T>) -> Result<Self> {
        if masses.is_empty() {
            return Err(param("a distribution needs at least one support point"));
        }
        let zero = T::zero();
        if let Some(t) = masses.iter().position(|m| *m < zero) {
            return Err(param(format!("negative mass at {t}")));
        }
        let total = masses.iter().cloned().fold(T::zero(), |a, b| a + b);
        if (total.clone() - T::one()).abs() > T::tolerance() {
            return Err(param(format!("total mass {} is not 1", total.to_f64())));
        }
        Ok(DiscreteDist { masses })
    }

    pub(crate) fn from_masses_unchecked(masses: Vec<T>) -> Self {
        DiscreteDist { masses }
    }

    pub fn point_mass(at: usize) -> Self {
        let mut masses = vec![T::zero(); at + 1];
        masses[at] = T::one();
        DiscreteDist { masses }
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn mass(&self, t: usize) -> T {
        self.masses.get(t).cloned().unwrap_or_else(T::zero)
    }

    /// Largest support point.
    pub fn max_support(&self) -> usize {
        self.masses.len() - 1
    }

    pub fn total_mass(&self) -> T {
        self.masses.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `P[X >= r]`.
    pub fn tail(&self, r: usize) -> T {
        self.masses
            .iter()
            .skip(r)
            .cloned()
            .fold(T::zero(), |a, b| a + b)
    }

    /// `P[X <= r]`.
    pub fn cdf(&self, r: usize) -> T {
        self.masses
            .iter()
            .take(r + 1)
            .cloned()
            .fold(T::zero(), |a, b| a + b)
    }

    /// All tails `P[X >= r]` for `r` in `0..=max_support + 1`.
    pub fn tails(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.masses.len() + 1];
        for t in (0..self.masses.len()).rev() {
            out[t] = out[t + 1].clone() + self.masses[t].clone();
        }
        out
    }

    pub fn mean(&self) -> T {
        self.masses
            .iter()
            .enumerate()
            .fold(T::zero(), |a, (t, m)| a + T::from_u64(t as u64) * m.clone())
    }

    /// The cutoff transform `X_{<=r}`: condition on `X <= r`.
    pub fn cutoff(&self, r: usize) -> Result<Self> {
        let kept: Vec<T> = self.masses.iter().take(r + 1).cloned().collect();
        let z = kept.iter().cloned().fold(T::zero(), |a, b| a + b);
        if z.is_zero() {
            return Err(param(format!("P[X <= {r}] is zero")));
        }
        Ok(DiscreteDist {
            masses: kept.into_iter().map(|m| m / z.clone()).collect(),
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DiscreteDist<U> {
        DiscreteDist {
            masses: self.masses.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> DiscreteDist<f64> {
        self.map(|m| m.to_f64())
    }
}

impl DiscreteDist<Rational> {
    pub fn convert<U: Scalar>(&self) -> DiscreteDist<U> {
        self.map(U::from_rational)
    }
}

pub fn make_binomial<T: Scalar>(trials: u64, p: &T) -> Result<DiscreteDist<T>> {
    if *p < T::zero() || *p > T::one() {
        return Err(param(format!("binomial p = {} outside [0, 1]", p.to_f64())));
    }
    let q = T::one() - p.clone();
    let mut p_pow = vec![T::one(); trials as usize + 1];
    let mut q_pow = vec![T::one(); trials as usize + 1];
    for t in 1..=trials as usize {
        p_pow[t] = p_pow[t - 1].clone() * p.clone();
        q_pow[t] = q_pow[t - 1].clone() * q.clone();
    }
    let mut coeff = T::one();
    let mut masses = Vec::with_capacity(trials as usize + 1);
    for t in 0..=trials {
        masses.push(coeff.clone() * p_pow[t as usize].clone() * q_pow[(trials - t) as usize].clone());
        coeff = coeff * T::from_u64(trials - t) / T::from_u64(t + 1);
    }
    Ok(DiscreteDist::from_masses_unchecked(masses))
}

/// `Po_{<=r}(λ)`.
pub fn make_truncated_poisson<T: Scalar>(lambda: &T, r: usize) -> Result<DiscreteDist<T>> {
    if *lambda < T::zero() {
        return Err(param(format!("Poisson mean {} is negative", lambda.to_f64())));
    }
    let mut weights = Vec::with_capacity(r + 1);
    let mut w = T::one();
    for t in 0..=r {
        weights.push(w.clone());
        w = w * lambda.clone() / T::from_u64(t as u64 + 1);
    }
    let z = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
    Ok(DiscreteDist::from_masses_unchecked(
        weights.into_iter().map(|w| w / z.clone()).collect(),
    ))
}

/// `P[Po(λ) = t]`.
pub fn poisson_pmf<T: RealScalar>(lambda: &T, t: usize) -> T {
    let mut term = (-lambda.clone()).exp();
    for s in 1..=t {
        term = term * lambda.clone() / T::from_u64(s as u64);
    }
    term
}

/// `P[Po(λ) >= r]`.
pub fn poisson_tail<T: RealScalar>(lambda: &T, r: usize) -> T {
    let below = (0..r).fold(T::zero(), |acc, t| acc + poisson_pmf(lambda, t));
    T::one() - below
}

/// `x ≻ y`: `P[x >= r] >= P[y >= r]` for every `r`, up to the scalar
/// type's tolerance (zero for exact types).
pub fn dominates<T: Scalar>(x: &DiscreteDist<T>, y: &DiscreteDist<T>) -> bool {
    worst_domination_gap(x, y) <= T::tolerance()
}

/// `max_r (P[y >= r] - P[x >= r])`, at least zero.
pub fn worst_domination_gap<T: Scalar>(x: &DiscreteDist<T>, y: &DiscreteDist<T>) -> T {
    let (tx, ty) = (x.tails(), y.tails());
    let len = tx.len().max(ty.len());
    let mut worst = T::zero();
    for r in 0..len {
        let a = tx.get(r).cloned().unwrap_or_else(T::zero);
        let b = ty.get(r).cloned().unwrap_or_else(T::zero);
        let gap = b - a;
        if gap > worst {
            worst = gap;
        }
    }
    worst
}

pub fn convolve<T: Scalar>(x: &DiscreteDist<T>, y: &DiscreteDist<T>) -> DiscreteDist<T> {
    let mut out = vec![T::zero(); x.masses.len() + y.masses.len() - 1];
    for (i, a) in x.masses.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.masses.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    DiscreteDist::from_masses_unchecked(out)
}

/// `Bi(N, p) ≻ Po_{<=r}((1-θ)Np)` for one parameter cell. Fails unless
/// `N > 0` and `r/N < θ < 1`.
pub fn binomial_dominates_cutoff_poisson<T: Scalar>(
    trials: u64,
    p: &T,
    theta: &T,
    r: usize,
) -> Result<bool> {
    if trials == 0 {
        return Err(param("need N > 0"));
    }
    let ratio = T::from_u64(r as u64) / T::from_u64(trials);
    if !(ratio < *theta && *theta < T::one()) {
        return Err(param(format!(
            "need r/N < θ < 1, got r/N = {}, θ = {}",
            ratio.to_f64(),
            theta.to_f64()
        )));
    }
    let x = make_binomial(trials, p)?;
    let lambda = (T::one() - theta.clone()) * T::from_u64(trials) * p.clone();
    let y = make_truncated_poisson(&lambda, r)?;
    Ok(dominates(&x, &y))
}

/// `Po_{<=r}(λ) + Po_{<=r}(μ) ≻ Po_{<=r}(λ + μ)`.
pub fn cutoff_poisson_sum_dominates<T: Scalar>(lambda: &T, mu: &T, r: usize) -> Result<bool> {
    let sum = convolve(
        &make_truncated_poisson(lambda, r)?,
        &make_truncated_poisson(mu, r)?,
    );
    let target = make_truncated_poisson(&(lambda.clone() + mu.clone()), r)?;
    Ok(dominates(&sum, &target))
}

/// Cells checked and cells where domination failed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    pub cells: usize,
    pub violations: usize,
}

impl GridReport {
    fn record(&mut self, ok: bool) {
        self.cells += 1;
        if !ok {
            self.violations += 1;
        }
    }
}

/// Binomial versus cutoff Poisson over `N ∈ {10, 20, 50}`,
/// `p ∈ {1/20, 1/5}`, `θ ∈ {3/10, 3/5}` and every `r < θN`, in scalar type
/// `T` (parameters are exact rationals converted to `T`).
pub fn binomial_domination_grid<T: Scalar>() -> Result<GridReport> {
    let mut report = GridReport::default();
    for trials in [10u64, 20, 50] {
        for p in [rat(1, 20), rat(1, 5)] {
            for theta in [rat(3, 10), rat(3, 5)] {
                let limit = theta.clone() * Rational::from_integer(BigInt::from(trials));
                let mut r = 0usize;
                while Rational::from_integer(BigInt::from(r)) < limit {
                    let ok = binomial_dominates_cutoff_poisson(
                        trials,
                        &T::from_rational(&p),
                        &T::from_rational(&theta),
                        r,
                    )?;
                    report.record(ok);
                    r += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Sum of cutoff Poissons over `λ, μ ∈ {1/2, 1, 2}` and `r ∈ {2, 5, 10}`.
pub fn poisson_sum_grid<T: Scalar>() -> Result<GridReport> {
    let values = [rat(1, 2), rat(1, 1), rat(2, 1)];
    let mut report = GridReport::default();
    for lambda in &values {
        for mu in &values {
            for r in [2usize, 5, 10] {
                let ok = cutoff_poisson_sum_dominates(
                    &T::from_rational(lambda),
                    &T::from_rational(mu),
                    r,
                )?;
                report.record(ok);
            }
        }
    }
    Ok(report)
}

/// Scan density and iteration count for [`bottleneck_root`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BottleneckOptions {
    pub grid_points: usize,
    pub iterations: usize,
    /// The scan starts at `4 ln n * 10^-lower_decades`.
    pub lower_decades: i32,
}

impl Default for BottleneckOptions {
    fn default() -> Self {
        BottleneckOptions {
            grid_points: 1 << 12,
            iterations: 200,
            lower_decades: 8,
        }
    }
}

/// `ln(2xN e^{-xN}) - ln(n^{-1/x})`, positive below the smallest root.
pub fn bottleneck_gap<T: RealScalar>(x: &T, big_n: &T, ln_n: &T) -> T {
    (T::from_u64(2) * big_n.clone() * x.clone()).ln() - x.clone() * big_n.clone()
        + ln_n.clone() / x.clone()
}

/// `2xN e^{-xN} - n^{-1/x}`.
pub fn bottleneck_residual<T: RealScalar>(x: &T, big_n: &T, n: &T) -> T {
    let lhs = T::from_u64(2) * x.clone() * big_n.clone() * (-(x.clone() * big_n.clone())).exp();
    let rhs = (-(n.ln() / x.clone())).exp();
    lhs - rhs
}

/// Smallest positive solution of `2xN e^{-xN} = n^{-1/x}`.
pub fn bottleneck_root<T: RealScalar>(big_n: &T, n: &T) -> Result<T> {
    bottleneck_root_with(big_n, n, BottleneckOptions::default())
}

pub fn bottleneck_root_with<T: RealScalar>(big_n: &T, n: &T, opts: BottleneckOptions) -> Result<T> {
    if !(*big_n > T::zero()) {
        return Err(param(format!("need N > 0, got {}", big_n.to_f64())));
    }
    if !(*n > T::one()) {
        return Err(param(format!("need n > 1, got {}", n.to_f64())));
    }
    if opts.grid_points < 2 {
        return Err(param("the scan needs at least two grid points"));
    }
    let ln_n = n.ln();
    let upper = T::from_u64(4) * ln_n.clone();
    let decades = T::from_f64(10f64.powi(opts.lower_decades));
    let lower = upper.clone() / decades.clone();
    let ln_step = decades.ln() / T::from_u64(opts.grid_points as u64 - 1);
    let step = ln_step.clone().exp();
    let gap = |x: &T| bottleneck_gap(x, big_n, &ln_n);
    // On the grid ln x is affine in the index, so the scan needs no logarithms.
    let ln_2n = (T::from_u64(2) * big_n.clone()).ln();
    let ln_lower = lower.ln();
    let scan_gap = |x: &T, i: usize| {
        ln_2n.clone() + ln_lower.clone() + T::from_u64(i as u64) * ln_step.clone()
            - x.clone() * big_n.clone()
            + ln_n.clone() / x.clone()
    };

    let mut lo = lower;
    if !(gap(&lo) > T::zero()) {
        return Err(Error::NoRoot(format!(
            "equation already violated at the bottom of the scan, x = {}",
            lo.to_f64()
        )));
    }
    let mut hi = None;
    for i in 1..opts.grid_points {
        let x = if i + 1 == opts.grid_points {
            upper.clone()
        } else {
            lo.clone() * step.clone()
        };
        if scan_gap(&x, i) > T::zero() {
            lo = x;
        } else {
            hi = Some(x);
            break;
        }
    }
    let mut hi = hi.ok_or_else(|| {
        Error::NoRoot(format!(
            "no sign change on (0, 4 ln n] for N = {}, n = {}",
            big_n.to_f64(),
            n.to_f64()
        ))
    })?;
    let half = T::from_ratio(1, 2);
    for _ in 0..opts.iterations {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        if gap(&mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// `N = 1/(4 ln n)`, the value at which the smallest root is `2 ln n`.
pub fn threshold_big_n<T: RealScalar>(n: &T) -> T {
    T::one() / (T::from_u64(4) * n.ln())
}
