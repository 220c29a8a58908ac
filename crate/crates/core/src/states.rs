//! Truncated Fock-space kets for the two input states: a phase-locked
//! coherent state and a two-mode squeezed vacuum.

use num_complex::Complex64;

use crate::numerics::{check_epsilon, compensated_sum, log_poisson_weight, poisson_cutoff};
use crate::{Error, Result};

/// Default per-state truncation budget.
pub const DEFAULT_EPSILON_TRUNC: f64 = 1e-12;

/// Amplitudes over occupation numbers `0..=n_max` plus the probability mass
/// that the truncation dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedKet {
    amplitudes: Vec<Complex64>,
    truncation_loss: f64,
}

impl TruncatedKet {
    /// Wraps amplitudes whose dropped tail mass is known.
    pub fn new(amplitudes: Vec<Complex64>, truncation_loss: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty("a ket needs at least one amplitude"));
        }
        if !(truncation_loss >= 0.0) {
            return Err(Error::Domain(format!(
                "truncation loss must be non-negative, got {truncation_loss}"
            )));
        }
        Ok(Self {
            amplitudes,
            truncation_loss,
        })
    }

    /// Normalizes arbitrary amplitudes; the result carries no truncation loss.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = compensated_sum(amplitudes.iter().map(|a| a.norm_sqr())).sqrt();
        if !(norm > 0.0) {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect(), 0.0)
    }

    /// The Fock state `|n>`.
    pub fn basis(n: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n + 1];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            truncation_loss: 0.0,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    /// `sum |a_n|^2` over the kept amplitudes.
    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`, zero-padding the shorter vector.
    pub fn inner(&self, other: &TruncatedKet) -> Complex64 {
        let mut re = crate::numerics::CompensatedSum::new();
        let mut im = crate::numerics::CompensatedSum::new();
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            let z = a.conj() * b;
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
            truncation_loss: self.truncation_loss,
        }
    }
}

/// Coherent amplitude `alpha` and reference phase `phi`.
///
/// `alpha` may carry its own phase relative to the reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    pub alpha: Complex64,
    pub phi: f64,
}

impl CoherentParams {
    pub fn new(alpha: Complex64, phi: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && phi.is_finite()) {
            return Err(Error::Domain("coherent parameters must be finite".into()));
        }
        Ok(Self { alpha, phi })
    }

    pub fn real(alpha: f64) -> Self {
        Self {
            alpha: Complex64::new(alpha, 0.0),
            phi: 0.0,
        }
    }
}

/// Two-mode squeezing `eta = tanh r` with reference phase `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmssParams {
    eta: f64,
    phi: f64,
}

impl TmssParams {
    pub fn new(eta: f64, phi: f64) -> Result<Self> {
        check_eta(eta)?;
        if !phi.is_finite() {
            return Err(Error::Domain(format!("phase must be finite, got {phi}")));
        }
        Ok(Self { eta, phi })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if (0.0..1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta must lie in [0, 1), got {eta}")))
    }
}

/// `exp(-|a|^2/2) (a e^{i phi})^n / sqrt(n!)`, truncated where the Poisson
/// tail of mean `|a|^2` first drops to `epsilon`.
pub fn coherent_amplitudes(params: CoherentParams, epsilon: f64) -> Result<TruncatedKet> {
    check_epsilon(epsilon, "epsilon")?;
    let mean = params.alpha.norm_sqr();
    let (n_max, tail) = poisson_cutoff(mean, epsilon)?;
    let theta = params.alpha.arg() + params.phi;
    let amplitudes = (0..=n_max)
        .map(|n| {
            let magnitude = (0.5 * log_poisson_weight(mean, n)?).exp();
            Ok(Complex64::from_polar(magnitude, n as f64 * theta))
        })
        .collect::<Result<Vec<_>>>()?;
    TruncatedKet::new(amplitudes, tail)
}

/// Schmidt amplitudes `sqrt(1 - eta^2) eta^n e^{2 i n phi}` of the two-mode
/// squeezed vacuum over the pair basis `|n>|n>`.
///
/// Truncated at the first `n_max` with `eta^{2(n_max+1)} <= epsilon`; the
/// returned ket's loss is exactly that geometric tail.
pub fn tmss_schmidt_amplitudes(params: TmssParams, epsilon: f64) -> Result<TruncatedKet> {
    check_epsilon(epsilon, "epsilon")?;
    let eta = params.eta;
    if eta == 0.0 {
        return TruncatedKet::new(vec![Complex64::new(1.0, 0.0)], 0.0);
    }
    let log_eta2 = 2.0 * eta.ln();
    // eta^{2(n+1)} <= epsilon  <=>  n + 1 >= ln(epsilon) / ln(eta^2)
    let mut n_max = ((epsilon.ln() / log_eta2).ceil() as i64 - 1).max(0) as u64;
    while n_max > 0 && ((n_max as f64) * log_eta2).exp() <= epsilon {
        n_max -= 1;
    }
    while (((n_max + 1) as f64) * log_eta2).exp() > epsilon {
        n_max += 1;
    }
    let prefactor = (1.0 - eta * eta).sqrt();
    let amplitudes = (0..=n_max)
        .map(|n| {
            let magnitude = prefactor * eta.powi(n as i32);
            Complex64::from_polar(magnitude, 2.0 * n as f64 * params.phi)
        })
        .collect();
    let tail = (((n_max + 1) as f64) * log_eta2).exp();
    TruncatedKet::new(amplitudes, tail)
}

/// `|<a|b>|^2`, clamped to `[0, 1]`.
pub fn fidelity(a: &TruncatedKet, b: &TruncatedKet) -> f64 {
    a.inner(b).norm_sqr().clamp(0.0, 1.0)
}
