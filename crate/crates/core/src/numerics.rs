//! Scalar kernels shared by the rest of the crate.
//!
//! Every factorial ratio that appears in the encoded states is handled in
//! natural-log space; photon numbers around a hundred already overflow `f64`
//! when taken as plain factorials.

use crate::{Error, Result};

/// Tolerance on `sum(p) - 1` accepted by [`shannon_entropy_bits`].
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Largest `n` for which `n!` fits exactly in a `u64`.
const EXACT_FACTORIAL_MAX: u64 = 20;

/// A non-negative weight stored as its natural logarithm.
///
/// Zero weight is represented by `-inf`, which [`log_sum_exp`] skips.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeight(pub f64);

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);
    pub const ONE: LogWeight = LogWeight(0.0);

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

// Product of weights is a sum of logs.
impl std::ops::Mul for LogWeight {
    type Output = LogWeight;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogWeight) -> LogWeight {
        LogWeight(self.0 + rhs.0)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of an iterator, accumulated in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(values);
    acc.value()
}

/// `ln(n!)`.
///
/// Exact integer product for `n <= 20`, the Stirling series with five
/// correction terms above (truncation error below 2e-18 at `n = 21`).
pub fn log_factorial(n: u64) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        let product: u64 = (2..=n).product();
        return (product as f64).ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/(12x) - 1/(360x^3) + 1/(1260x^5) - 1/(1680x^7) + 1/(1188x^9)
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    x * (x.ln() - 1.0) + 0.5 * (std::f64::consts::TAU * x).ln() + series
}

/// `ln(e^{-mean} mean^k / k!)`.
///
/// With `mean == 0` the weight is certain at `k == 0` and `-inf` otherwise.
pub fn log_poisson_weight(mean: f64, k: u64) -> Result<f64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::Domain(format!(
            "Poisson mean must be finite and non-negative, got {mean}"
        )));
    }
    if mean == 0.0 {
        return Ok(if k == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    Ok(-mean + k as f64 * mean.ln() - log_factorial(k))
}

/// `ln(sum(exp(t)))` with the maximum shifted out.
///
/// `-inf` terms are treated as zero weights; if every term is `-inf` the
/// result is `-inf`. The shifted exponentials are summed in ascending order
/// with compensation, so the result does not depend on input order.
pub fn log_sum_exp(terms: &[f64]) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::Empty("log_sum_exp needs at least one term"));
    }
    if terms.iter().any(|t| t.is_nan()) {
        return Err(Error::Domain("log_sum_exp received NaN".into()));
    }
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return Ok(max);
    }
    if terms.len() == 1 {
        return Ok(terms[0]);
    }
    let mut shifted: Vec<f64> = terms
        .iter()
        .filter(|t| **t != f64::NEG_INFINITY)
        .map(|t| (t - max).exp())
        .collect();
    shifted.sort_by(f64::total_cmp);
    Ok(max + compensated_sum(shifted).ln())
}

/// [`log_sum_exp`] without the sort: terms are combined in slice order.
///
/// Used in hot loops whose term order is already fixed, so results stay
/// reproducible. `-inf` terms are skipped; an all-`-inf` slice gives `-inf`.
pub(crate) fn log_sum_exp_in_order(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let mut acc = CompensatedSum::new();
    for t in terms {
        if *t != f64::NEG_INFINITY {
            acc.add((t - max).exp());
        }
    }
    max + acc.value().ln()
}

/// `-sum(p log2 p)` with `0 log 0 = 0`.
pub fn shannon_entropy_bits(probabilities: &[f64]) -> Result<f64> {
    if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
        return Err(Error::Domain(format!("negative or NaN probability {p}")));
    }
    let total = compensated_sum(probabilities.iter().copied());
    if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(Error::Normalization {
            total,
            tolerance: PROBABILITY_SUM_TOLERANCE,
        });
    }
    let mut terms: Vec<f64> = probabilities
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.log2())
        .collect();
    terms.sort_by(f64::total_cmp);
    Ok(compensated_sum(terms).max(0.0))
}

/// Smallest `n_max` whose Poisson upper tail `P(k > n_max)` is at most `epsilon`.
///
/// Returns `(n_max, tail)`. The tail is accumulated from the far end of the
/// distribution rather than as `1 - head`, so it stays accurate when tiny.
pub fn poisson_cutoff(mean: f64, epsilon: f64) -> Result<(u64, f64)> {
    check_epsilon(epsilon, "epsilon")?;
    log_poisson_weight(mean, 0)?;
    if mean == 0.0 {
        return Ok((0, 0.0));
    }
    // exp(-800) is far below any representable tail of interest.
    let far = (mean + 40.0 * mean.sqrt() + 40.0).ceil() as u64;
    let weights: Vec<f64> = (0..=far)
        .map(|k| log_poisson_weight(mean, k).map(f64::exp))
        .collect::<Result<_>>()?;
    // suffix[k] = P(K >= k)
    let mut suffix = vec![0.0; weights.len() + 1];
    let mut acc = CompensatedSum::new();
    for k in (0..weights.len()).rev() {
        acc.add(weights[k]);
        suffix[k] = acc.value();
    }
    let n_max = (0..weights.len())
        .find(|&n| suffix[n + 1] <= epsilon)
        .unwrap_or(weights.len() - 1);
    Ok((n_max as u64, suffix[n_max + 1]))
}

pub(crate) fn check_epsilon(epsilon: f64, name: &str) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must lie in (0, 1), got {epsilon}"
        )))
    }
}
