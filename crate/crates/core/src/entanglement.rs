//! Entanglement of the squeezed input and of its encoded version.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::encoding::{encode_pair, pair_outcome_distribution, EncodedPairState};
use crate::numerics::{check_epsilon, shannon_entropy_bits, CompensatedSum};
use crate::states::check_eta;
use crate::{Error, Result};

/// Default `eta` grid of the fraction-lost sweep.
pub const DEFAULT_ETAS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
/// Default `|beta|` grid of the fraction-lost sweep.
pub const DEFAULT_BETAS: [f64; 12] = [
    1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0,
];

/// Squeezing parameter `r` with `tanh r = eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParams {
    pub r: f64,
}

impl SqueezingParams {
    pub fn from_eta(eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self { r: eta.atanh() })
    }
}

/// Probability of one `(K, L)` outcome and the entanglement it leaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contribution {
    pub k: u64,
    pub l: u64,
    pub probability: f64,
    pub ebits: f64,
}

/// Exact versus averaged entanglement at one `(eta, |beta|)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub eta: f64,
    pub beta_abs: f64,
    /// Entanglement of the squeezed input, in ebits.
    pub e_exact: f64,
    /// Outcome-averaged entanglement of the encoded pair, in ebits.
    pub e_avg: f64,
    pub fraction_lost: f64,
    /// Outcome probability mass outside the enumerated window.
    pub residual: f64,
    /// `residual * log2(min(W_K, W_L) + 1)`: stated bound on the entanglement
    /// the unenumerated outcomes could add to `e_avg`.
    pub residual_bound: f64,
    pub window_k: u64,
    pub window_l: u64,
    /// Per-outcome contributions in `(K, L)` order.
    pub contributions: Vec<Contribution>,
}

impl EntanglementReport {
    /// The `n` outcomes with the largest probability, ties broken by `(K, L)`.
    pub fn top_contributions(&self, n: usize) -> Vec<Contribution> {
        let mut sorted = self.contributions.clone();
        sorted.sort_by(|a, b| {
            b.probability
                .total_cmp(&a.probability)
                .then((a.k, a.l).cmp(&(b.k, b.l)))
        });
        sorted.truncate(n);
        sorted
    }
}

/// Entropy of entanglement of an encoded pair, from its Schmidt spectrum.
pub fn entropy_of_entanglement(state: &EncodedPairState) -> Result<f64> {
    shannon_entropy_bits(&state.schmidt_probabilities())
}

/// `cosh^2 r log2(cosh^2 r) - sinh^2 r log2(sinh^2 r)` with `tanh r = eta`.
pub fn tmss_entanglement(eta: f64) -> Result<f64> {
    let r = SqueezingParams::from_eta(eta)?.r;
    let cosh2 = r.cosh().powi(2);
    let sinh2 = r.sinh().powi(2);
    let tail = if sinh2 > 0.0 {
        sinh2 * sinh2.log2()
    } else {
        0.0
    };
    Ok(cosh2 * cosh2.log2() - tail)
}

/// Outcome-averaged entanglement `sum_KL P(K,L) E(Phi_KL)`.
///
/// Only enumerated outcomes enter the sum. Accumulation runs in `(K, L)` key
/// order, so the result does not depend on how the outcomes were computed.
pub fn average_entanglement(
    eta: f64,
    beta: Complex64,
    epsilon_tail: f64,
) -> Result<EntanglementReport> {
    check_eta(eta)?;
    check_epsilon(epsilon_tail, "epsilon_tail")?;
    if beta.norm_sqr() == 0.0 {
        return Err(Error::DegenerateAncilla);
    }
    let e_exact = tmss_entanglement(eta)?;
    let dist = pair_outcome_distribution(eta, beta, epsilon_tail)?;
    let outcomes: Vec<((u64, u64), f64)> = dist.iter().collect();
    let contributions: Vec<Contribution> = outcomes
        .par_iter()
        .map(|&((k, l), probability)| {
            let ebits = if k.min(l) == 0 || eta == 0.0 {
                0.0
            } else {
                entropy_of_entanglement(&encode_pair(eta, beta, k, l)?)?
            };
            Ok(Contribution {
                k,
                l,
                probability,
                ebits,
            })
        })
        .collect::<Result<_>>()?;

    let mut avg = CompensatedSum::new();
    for c in &contributions {
        avg.add(c.probability * c.ebits);
    }
    let e_avg = avg.value();
    let fraction_lost = if e_exact > 0.0 {
        (e_exact - e_avg) / e_exact
    } else {
        0.0
    };
    let (window_k, window_l) = dist.window();
    let residual = dist.residual();
    Ok(EntanglementReport {
        eta,
        beta_abs: beta.norm(),
        e_exact,
        e_avg,
        fraction_lost,
        residual,
        residual_bound: residual * ((window_k.min(window_l) + 1) as f64).log2(),
        window_k,
        window_l,
        contributions,
    })
}

/// One report per `(eta, beta)` in eta-major, beta-minor order.
pub fn figure1_sweep(
    etas: &[f64],
    betas: &[f64],
    epsilon_tail: f64,
) -> Result<Vec<EntanglementReport>> {
    if etas.is_empty() {
        return Err(Error::Empty("eta grid"));
    }
    if betas.is_empty() {
        return Err(Error::Empty("beta grid"));
    }
    for &eta in etas {
        check_eta(eta)?;
    }
    for &beta in betas {
        if !beta.is_finite() || beta == 0.0 {
            return Err(Error::Domain(format!(
                "beta must be finite and nonzero, got {beta}"
            )));
        }
    }
    check_epsilon(epsilon_tail, "epsilon_tail")?;
    let points: Vec<(f64, f64)> = etas
        .iter()
        .flat_map(|&eta| betas.iter().map(move |&beta| (eta, beta)))
        .collect();
    points
        .par_iter()
        .map(|&(eta, beta)| average_entanglement(eta, Complex64::new(beta, 0.0), epsilon_tail))
        .collect()
}
