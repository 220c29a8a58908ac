//! Total photon-number projection onto the logical basis `|n_M> = |n>|M-n>`.
//!
//! A coherent input `|alpha>` joined with an ancilla `|beta>` and projected on
//! total photon number `M` leaves
//!
//! ```text
//! |Psi> ∝ sum_n (alpha/beta)^n / sqrt(n! (M-n)!) |n_M>
//! ```
//!
//! and the two-mode squeezed vacuum with one ancilla per half, projected on
//! outcomes `(K, L)`, leaves a state already in Schmidt form
//!
//! ```text
//! |Phi_KL> ∝ sum_n (eta/beta^2)^n / sqrt((K-n)! (L-n)!) |n_K>|n_L>.
//! ```
//!
//! Magnitudes are built in log space and phases tracked separately; every
//! reference phase cancels into a global factor and never appears here.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::numerics::{
    check_epsilon, compensated_sum, log_factorial, log_poisson_weight, log_sum_exp_in_order,
    CompensatedSum, LogWeight,
};
use crate::states::{
    check_eta, coherent_amplitudes, fidelity, tmss_schmidt_amplitudes, CoherentParams, TmssParams,
    TruncatedKet,
};
use crate::{Error, Result};

/// Default outcome-window tail budget.
pub const DEFAULT_EPSILON_TAIL: f64 = 1e-10;

/// Initial half-width, in standard deviations, of the outcome window.
const WINDOW_START_WIDTH: f64 = 2.0;
const WINDOW_WIDTH_STEP: f64 = 0.5;

/// Post-measurement state of a coherent input for total outcome `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedCoherentState {
    total: u64,
    coeffs: Vec<Complex64>,
    norm_log: f64,
}

impl EncodedCoherentState {
    /// The measured total photon number `M`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Normalized coefficients over the logical index `n = 0..=M`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `ln` of the normalizer `sum |alpha/beta|^{2n} / (n! (M-n)!)`.
    pub fn norm_log(&self) -> f64 {
        self.norm_log
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// The coefficients as a ket over the logical index.
    pub fn to_ket(&self) -> TruncatedKet {
        TruncatedKet::new(self.coeffs.clone(), 0.0).expect("encoded state is non-empty")
    }
}

/// Post-measurement state of the two-mode squeezed input for outcomes `(K, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedPairState {
    k: u64,
    l: u64,
    schmidt_coeffs: Vec<Complex64>,
    norm_log: f64,
}

impl EncodedPairState {
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// Normalized Schmidt coefficients over `n = 0..=min(K, L)`.
    pub fn schmidt_coeffs(&self) -> &[Complex64] {
        &self.schmidt_coeffs
    }

    /// `ln` of the normalizer `sum |eta/beta^2|^{2n} / ((K-n)! (L-n)!)`.
    pub fn norm_log(&self) -> f64 {
        self.norm_log
    }

    pub fn schmidt_probabilities(&self) -> Vec<f64> {
        self.schmidt_coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn to_ket(&self) -> TruncatedKet {
        TruncatedKet::new(self.schmidt_coeffs.clone(), 0.0).expect("encoded state is non-empty")
    }
}

/// Probabilities over measurement outcomes `O` with the unenumerated mass.
///
/// `window` is the inclusive upper corner of the enumerated region: `M_max`
/// for single outcomes, `(K_max, L_max)` for pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<O: Ord> {
    support: BTreeMap<O, f64>,
    residual: f64,
    window: O,
}

impl<O: Ord + Copy> OutcomeDistribution<O> {
    pub fn support(&self) -> &BTreeMap<O, f64> {
        &self.support
    }

    pub fn probability(&self, outcome: O) -> f64 {
        self.support.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn window(&self) -> O {
        self.window
    }

    /// Enumerated probability mass, summed in key order.
    pub fn enumerated_mass(&self) -> f64 {
        compensated_sum(self.support.values().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (O, f64)> + '_ {
        self.support.iter().map(|(o, p)| (*o, *p))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

fn check_beta(beta: Complex64) -> Result<()> {
    if !(beta.re.is_finite() && beta.im.is_finite()) {
        return Err(Error::Domain(format!("beta must be finite, got {beta}")));
    }
    if beta.norm_sqr() == 0.0 {
        return Err(Error::DegenerateAncilla);
    }
    Ok(())
}

/// Normalized coefficients `r^n e^{-D(n)/2}` for `n = 0..len`, where
/// `log_denominator(n) = D(n)` is a log-factorial sum and `r` is given by its
/// log-magnitude and argument. Returns the coefficients and `ln` of the
/// normalizer `sum |r|^{2n} e^{-D(n)}`.
fn log_space_coefficients(
    ratio: Complex64,
    len: usize,
    log_denominator: impl Fn(u64) -> f64,
) -> (Vec<Complex64>, f64) {
    let log_ratio = ratio.norm().ln();
    let arg = ratio.arg();
    let magnitudes: Vec<LogWeight> = (0..len as u64)
        .map(|n| {
            let power = if n == 0 {
                LogWeight::ONE
            } else if ratio.norm_sqr() == 0.0 {
                LogWeight::ZERO
            } else {
                LogWeight(n as f64 * log_ratio)
            };
            power * LogWeight(-0.5 * log_denominator(n))
        })
        .collect();
    let doubled: Vec<f64> = magnitudes.iter().map(|m| 2.0 * m.value()).collect();
    let norm_log = log_sum_exp_in_order(&doubled);
    let coeffs = magnitudes
        .iter()
        .enumerate()
        .map(|(n, m)| {
            if m.is_zero() {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar((m.value() - 0.5 * norm_log).exp(), n as f64 * arg)
            }
        })
        .collect();
    (coeffs, norm_log)
}

/// Projects `|alpha>|beta>` onto total photon number `total`.
pub fn encode_coherent(
    alpha: Complex64,
    beta: Complex64,
    total: u64,
) -> Result<EncodedCoherentState> {
    check_beta(beta)?;
    let ratio = alpha / beta;
    let (coeffs, norm_log) = log_space_coefficients(ratio, total as usize + 1, |n| {
        log_factorial(n) + log_factorial(total - n)
    });
    Ok(EncodedCoherentState {
        total,
        coeffs,
        norm_log,
    })
}

/// Amplitude `alpha sqrt(M) / beta` of the coherent state that approximates
/// the encoded state when `|beta| >> |alpha|`.
pub fn coherent_approx_param(alpha: Complex64, beta: Complex64, total: u64) -> Result<Complex64> {
    check_beta(beta)?;
    Ok(alpha * (total as f64).sqrt() / beta)
}

/// Coherent-form approximant of the encoded state over the logical index.
pub fn coherent_approximant(
    alpha: Complex64,
    beta: Complex64,
    total: u64,
    epsilon_trunc: f64,
) -> Result<TruncatedKet> {
    let approx = coherent_approx_param(alpha, beta, total)?;
    coherent_amplitudes(CoherentParams::new(approx, 0.0)?, epsilon_trunc)
}

/// Projects the squeezed pair plus two ancillas onto outcomes `(k, l)`.
pub fn encode_pair(eta: f64, beta: Complex64, k: u64, l: u64) -> Result<EncodedPairState> {
    check_eta(eta)?;
    check_beta(beta)?;
    let ratio = eta / (beta * beta);
    let (schmidt_coeffs, norm_log) = log_space_coefficients(ratio, k.min(l) as usize + 1, |n| {
        log_factorial(k - n) + log_factorial(l - n)
    });
    Ok(EncodedPairState {
        k,
        l,
        schmidt_coeffs,
        norm_log,
    })
}

/// Squeezing `eta sqrt(K L) / |beta|^2` of the two-mode squeezed state that
/// approximates the encoded pair when `|beta|` is large.
pub fn pair_approx_param(eta: f64, beta: Complex64, k: u64, l: u64) -> Result<f64> {
    check_beta(beta)?;
    Ok(eta * ((k as f64) * (l as f64)).sqrt() / beta.norm_sqr())
}

/// Two-mode-squeezed-form approximant of the encoded pair, in the Schmidt
/// index. The phase `e^{-2in arg(beta)}` of the encoded state is carried as the
/// squeezing phase. Fails when the approximate squeezing reaches 1.
pub fn pair_approximant(
    eta: f64,
    beta: Complex64,
    k: u64,
    l: u64,
    epsilon_trunc: f64,
) -> Result<TruncatedKet> {
    let approx = pair_approx_param(eta, beta, k, l)?;
    tmss_schmidt_amplitudes(TmssParams::new(approx, -beta.arg())?, epsilon_trunc)
}

/// Grows `W = ceil(mean + w sqrt(mean))` until `covered(W)` holds.
fn grow_window(mean: f64, mut covered: impl FnMut(u64) -> bool) -> u64 {
    let mut width = WINDOW_START_WIDTH;
    loop {
        let window = (mean + width * mean.sqrt()).ceil() as u64;
        if covered(window) {
            return window;
        }
        width += WINDOW_WIDTH_STEP;
    }
}

fn poisson_table(mean: f64, up_to: u64) -> Result<Vec<f64>> {
    (0..=up_to).map(|k| log_poisson_weight(mean, k)).collect()
}

/// Distribution of the total photon number of `|alpha>|beta>`, computed as
/// the convolution of the two Poisson distributions.
pub fn coherent_outcome_distribution(
    alpha: Complex64,
    beta: Complex64,
    epsilon_tail: f64,
) -> Result<OutcomeDistribution<u64>> {
    check_epsilon(epsilon_tail, "epsilon_tail")?;
    let mean_a = alpha.norm_sqr();
    let mean_b = beta.norm_sqr();
    let mean = mean_a + mean_b;

    let mut log_a: Vec<f64> = Vec::new();
    let mut log_b: Vec<f64> = Vec::new();
    let mut probs: Vec<f64> = Vec::new();
    let mut mass = CompensatedSum::new();
    let mut failure = None;
    let window = grow_window(mean, |window| {
        for m in probs.len() as u64..=window {
            match (log_poisson_weight(mean_a, m), log_poisson_weight(mean_b, m)) {
                (Ok(a), Ok(b)) => {
                    log_a.push(a);
                    log_b.push(b);
                }
                (Err(e), _) | (_, Err(e)) => {
                    failure = Some(e);
                    return true;
                }
            }
            let m = m as usize;
            let terms: Vec<f64> = (0..=m).map(|n| log_a[n] + log_b[m - n]).collect();
            let p = log_sum_exp_in_order(&terms).exp();
            mass.add(p);
            probs.push(p);
        }
        1.0 - mass.value() <= 0.5 * epsilon_tail
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let support: BTreeMap<u64, f64> = probs
        .into_iter()
        .take(window as usize + 1)
        .enumerate()
        .map(|(m, p)| (m as u64, p))
        .collect();
    let residual = (1.0 - compensated_sum(support.values().copied())).max(0.0);
    Ok(OutcomeDistribution {
        support,
        residual,
        window,
    })
}

/// Joint distribution of the two total photon numbers `(K, L)` for the
/// squeezed pair with one `|beta>` ancilla per half.
///
/// `P(K, L) = sum_n (1-eta^2) eta^{2n} Pois(K-n) Pois(L-n)`, with both Poisson
/// factors of mean `|beta|^2`.
pub fn pair_outcome_distribution(
    eta: f64,
    beta: Complex64,
    epsilon_tail: f64,
) -> Result<OutcomeDistribution<(u64, u64)>> {
    check_epsilon(epsilon_tail, "epsilon_tail")?;
    check_eta(eta)?;
    if !(beta.re.is_finite() && beta.im.is_finite()) {
        return Err(Error::Domain(format!("beta must be finite, got {beta}")));
    }
    let mean_b = beta.norm_sqr();
    let eta2 = eta * eta;
    let mean = mean_b + eta2 / (1.0 - eta2);
    let log_thermal = |n: u64| -> f64 {
        if n == 0 {
            (1.0 - eta2).ln()
        } else if eta == 0.0 {
            f64::NEG_INFINITY
        } else {
            (1.0 - eta2).ln() + n as f64 * eta2.ln()
        }
    };

    // Rectangle [0, W]^2 drops at most P(K > W) + P(L > W) = 2 P(K > W);
    // the marginal of K is a Poisson convolved with the thermal distribution.
    let mut log_pois: Vec<f64> = Vec::new();
    let mut marginal = CompensatedSum::new();
    let mut next = 0u64;
    let window = grow_window(mean, |window| {
        for k in next..=window {
            log_pois.push(log_poisson_weight(mean_b, k).expect("mean checked finite"));
            let terms: Vec<f64> = (0..=k)
                .map(|n| log_thermal(n) + log_pois[(k - n) as usize])
                .collect();
            marginal.add(log_sum_exp_in_order(&terms).exp());
        }
        next = window + 1;
        2.0 * (1.0 - marginal.value()) <= 0.5 * epsilon_tail
    });
    let log_pois = poisson_table(mean_b, window)?;
    let log_thermal: Vec<f64> = (0..=window).map(log_thermal).collect();

    // Upper triangle L >= K, mirrored so that P(K, L) == P(L, K) bit for bit.
    let rows: Vec<Vec<f64>> = (0..=window)
        .into_par_iter()
        .map(|k| {
            let mut terms = Vec::with_capacity(k as usize + 1);
            (k..=window)
                .map(|l| {
                    terms.clear();
                    terms.extend((0..=k).map(|n| {
                        log_thermal[n as usize]
                            + log_pois[(k - n) as usize]
                            + log_pois[(l - n) as usize]
                    }));
                    log_sum_exp_in_order(&terms).exp()
                })
                .collect()
        })
        .collect();

    let mut support = BTreeMap::new();
    for k in 0..=window {
        for l in 0..=window {
            let (lo, hi) = if k <= l { (k, l) } else { (l, k) };
            support.insert((k, l), rows[lo as usize][(hi - lo) as usize]);
        }
    }
    let residual = (1.0 - compensated_sum(support.values().copied())).max(0.0);
    Ok(OutcomeDistribution {
        support,
        residual,
        window: (window, window),
    })
}

/// Outcome-weighted fidelity between encoded coherent states and their
/// coherent-form approximants, `sum_M P(M) F(Psi_M, alpha'_M)`.
pub fn coherent_average_fidelity(
    alpha: Complex64,
    beta: Complex64,
    epsilon_tail: f64,
    epsilon_trunc: f64,
) -> Result<f64> {
    check_beta(beta)?;
    let dist = coherent_outcome_distribution(alpha, beta, epsilon_tail)?;
    let mut acc = CompensatedSum::new();
    for (m, p) in dist.iter() {
        let exact = encode_coherent(alpha, beta, m)?.to_ket();
        let approx = coherent_approximant(alpha, beta, m, epsilon_trunc)?;
        acc.add(p * fidelity(&exact, &approx));
    }
    Ok(acc.value())
}

/// Outcome-weighted fidelity between encoded pair states and their
/// squeezed-form approximants, `sum_KL P(K,L) F(Phi_KL, eta'_KL)`.
///
/// Outcomes whose approximate squeezing reaches 1 have no approximant and
/// count as fidelity 0.
pub fn pair_average_fidelity(
    eta: f64,
    beta: Complex64,
    epsilon_tail: f64,
    epsilon_trunc: f64,
) -> Result<f64> {
    check_beta(beta)?;
    check_epsilon(epsilon_trunc, "epsilon_trunc")?;
    let dist = pair_outcome_distribution(eta, beta, epsilon_tail)?;
    let outcomes: Vec<((u64, u64), f64)> = dist.iter().collect();
    let terms: Vec<f64> = outcomes
        .par_iter()
        .map(|&((k, l), p)| -> Result<f64> {
            if pair_approx_param(eta, beta, k, l)? >= 1.0 {
                return Ok(0.0);
            }
            let exact = encode_pair(eta, beta, k, l)?.to_ket();
            let approx = pair_approximant(eta, beta, k, l, epsilon_trunc)?;
            Ok(p * fidelity(&exact, &approx))
        })
        .collect::<Result<_>>()?;
    Ok(compensated_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(got: &[Complex64], expected: &[f64], tol: f64) {
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(expected) {
            assert!((g - c(*e)).norm() <= tol, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn encode_coherent_examples() {
        let s = encode_coherent(c(0.0), c(1.0), 3).unwrap();
        assert_close(s.coeffs(), &[1.0, 0.0, 0.0, 0.0], 0.0);

        let s = encode_coherent(c(1.0), c(1.0), 2).unwrap();
        assert_close(s.coeffs(), &[0.5, 0.5f64.sqrt(), 0.5], 1e-15);
        assert!((s.norm_log() - 2f64.ln()).abs() < 1e-15);

        let s = encode_coherent(c(1.0), c(1.0), 0).unwrap();
        assert_close(s.coeffs(), &[1.0], 0.0);
    }

    #[test]
    fn zero_beta_is_degenerate() {
        assert_eq!(
            encode_coherent(c(1.0), c(0.0), 2),
            Err(Error::DegenerateAncilla)
        );
        assert_eq!(
            encode_pair(0.5, c(0.0), 2, 2),
            Err(Error::DegenerateAncilla)
        );
        assert_eq!(
            coherent_approx_param(c(1.0), c(0.0), 4),
            Err(Error::DegenerateAncilla)
        );
        assert_eq!(
            pair_approx_param(0.5, c(0.0), 4, 4),
            Err(Error::DegenerateAncilla)
        );
    }

    #[test]
    fn coherent_ratio_recurrence() {
        let alpha = Complex64::new(0.7, 0.4);
        let beta = Complex64::new(-2.0, 1.5);
        for total in [1u64, 7, 60, 250] {
            let s = encode_coherent(alpha, beta, total).unwrap();
            let norm: f64 = s.probabilities().iter().sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for n in 0..total as usize {
                let a = s.coeffs()[n];
                let b = s.coeffs()[n + 1];
                if a.norm() < 1e-250 || b.norm() < 1e-250 {
                    continue;
                }
                let expected =
                    alpha / beta * (((total as usize - n) as f64) / ((n + 1) as f64)).sqrt();
                assert!(((b / a) - expected).norm() <= 1e-10 * expected.norm());
            }
        }
    }

    #[test]
    fn tiny_ratio_does_not_underflow_silently() {
        // (alpha/beta)^n ~ 1e-300 at n = 100 without log-space powers.
        let s = encode_coherent(c(1e-3), c(1.0), 100).unwrap();
        // coeff_1 / coeff_0 = 1e-3 * sqrt(100)
        assert!((s.coeffs()[1].re / s.coeffs()[0].re - 1e-2).abs() < 1e-14);
        assert!(s.coeffs()[100].re > 0.0);
        assert!(s.norm_log().is_finite());
    }

    #[test]
    fn approx_param_examples() {
        assert!((coherent_approx_param(c(0.3), c(4.0), 16).unwrap() - c(0.3)).norm() < 1e-15);
        assert!((coherent_approx_param(c(1.0), c(10.0), 100).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((coherent_approx_param(c(1.0), c(10.0), 81).unwrap() - c(0.9)).norm() < 1e-15);

        assert!((pair_approx_param(0.3, c(10.0), 100, 100).unwrap() - 0.3).abs() < 1e-15);
        let expected = 0.3 * 9900f64.sqrt() / 100.0;
        assert!((pair_approx_param(0.3, c(10.0), 90, 110).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.29849).abs() < 1e-5);
        assert_eq!(pair_approx_param(0.3, c(10.0), 0, 100).unwrap(), 0.0);
        // magnitude only
        let rotated = Complex64::from_polar(10.0, 0.9);
        assert!((pair_approx_param(0.3, rotated, 100, 100).unwrap() - 0.3).abs() < 1e-14);
    }

    #[test]
    fn encode_pair_examples() {
        let s = encode_pair(0.4, c(2.0), 0, 5).unwrap();
        assert_close(s.schmidt_coeffs(), &[1.0], 0.0);

        let s = encode_pair(0.5, c(1.0), 1, 1).unwrap();
        let p = s.schmidt_probabilities();
        assert!((p[0] - 0.8).abs() < 1e-15 && (p[1] - 0.2).abs() < 1e-15);
        assert!((s.norm_log() - 1.25f64.ln()).abs() < 1e-15);

        let s = encode_pair(0.0, c(1.0), 3, 3).unwrap();
        assert_close(s.schmidt_coeffs(), &[1.0, 0.0, 0.0, 0.0], 0.0);

        assert!(matches!(
            encode_pair(1.0, c(1.0), 1, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pair_ratio_recurrence() {
        let beta = Complex64::from_polar(3.0, 0.3);
        let eta = 0.45;
        for (k, l) in [(5u64, 9u64), (40, 31), (120, 150)] {
            let s = encode_pair(eta, beta, k, l).unwrap();
            let norm: f64 = s.schmidt_probabilities().iter().sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for n in 0..k.min(l) as usize {
                let a = s.schmidt_coeffs()[n];
                let b = s.schmidt_coeffs()[n + 1];
                if a.norm() < 1e-250 || b.norm() < 1e-250 {
                    continue;
                }
                let expected =
                    eta / (beta * beta) * (((k as usize - n) * (l as usize - n)) as f64).sqrt();
                assert!(((b / a) - expected).norm() <= 1e-10 * expected.norm());
            }
        }
    }

    #[test]
    fn coherent_distribution_examples() {
        let d = coherent_outcome_distribution(c(0.0), c(0.0), 1e-10).unwrap();
        assert_eq!(d.probability(0), 1.0);
        assert_eq!(d.residual(), 0.0);

        let d = coherent_outcome_distribution(c(0.0), c(1.0), 1e-10).unwrap();
        for (m, p) in d.iter() {
            let expected = (-1.0 - log_factorial(m)).exp();
            assert!((p - expected).abs() < 1e-15);
        }
        assert!(d.residual() <= 1e-10);

        assert!(matches!(
            coherent_outcome_distribution(c(1.0), c(1.0), 0.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn pair_distribution_limits() {
        let eta: f64 = 0.4;
        let d = pair_outcome_distribution(eta, c(0.0), 1e-10).unwrap();
        for ((k, l), p) in d.iter() {
            if k == l {
                let expected = (1.0 - eta * eta) * eta.powi(2 * k as i32);
                assert!((p - expected).abs() < 1e-15);
            } else {
                assert_eq!(p, 0.0);
            }
        }

        let d = pair_outcome_distribution(0.0, c(1.0), 1e-10).unwrap();
        for ((k, l), p) in d.iter() {
            let expected = (-2.0 - log_factorial(k) - log_factorial(l)).exp();
            assert!((p - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn pair_distribution_is_symmetric_and_complete() {
        let d = pair_outcome_distribution(0.3, Complex64::from_polar(2.5, 1.0), 1e-10).unwrap();
        let (wk, wl) = d.window();
        assert_eq!(wk, wl);
        for ((k, l), p) in d.iter() {
            assert!(p >= 0.0);
            assert_eq!(p, d.probability((l, k)));
        }
        assert!(d.residual() <= 1e-10);
        assert!((d.enumerated_mass() + d.residual() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn approximants_improve_with_beta() {
        let f_small = pair_average_fidelity(0.5, c(2.0), 1e-10, 1e-12).unwrap();
        let f_large = pair_average_fidelity(0.5, c(6.0), 1e-10, 1e-12).unwrap();
        assert!(f_large > f_small);
        let g_small = coherent_average_fidelity(c(1.0), c(2.0), 1e-10, 1e-12).unwrap();
        let g_large = coherent_average_fidelity(c(1.0), c(6.0), 1e-10, 1e-12).unwrap();
        assert!(g_large > g_small);
    }
}
