//! Brute-force cross-check: dense truncated tensor products, explicit
//! total-number projectors and SVD-based entanglement.
//!
//! Nothing here goes through the log-space closed forms of [`crate::encoding`];
//! amplitudes are built by plain recurrences and measured by zeroing entries.
//! Keep cutoffs small (12 photons per mode gives 13^4 amplitudes for four
//! modes).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::encoding::{
    coherent_outcome_distribution, encode_coherent, encode_pair, pair_outcome_distribution,
};
use crate::entanglement::entropy_of_entanglement;
use crate::numerics::{compensated_sum, shannon_entropy_bits, CompensatedSum};
use crate::{Error, Result};

/// Largest per-mode cutoff the oracle accepts.
pub const MAX_CUTOFF: usize = 12;

/// Singular values below this are dropped before the entropy.
const SINGULAR_VALUE_FLOOR: f64 = 1e-13;

/// Mode order of [`build_joint_pair`]: the two ancillas, then the two halves
/// of the squeezed state. `K` is measured on modes `[0, 2]`, `L` on `[1, 3]`.
pub const PAIR_K_GROUP: [usize; 2] = [0, 2];
pub const PAIR_L_GROUP: [usize; 2] = [1, 3];

/// Amplitudes of a multi-mode pure state, row-major over per-mode occupations
/// (last mode fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseJointState {
    amplitudes: Vec<Complex64>,
    cutoffs: Vec<usize>,
    truncation_loss: f64,
}

impl DenseJointState {
    fn from_modes(modes: &[Vec<Complex64>]) -> Self {
        let cutoffs: Vec<usize> = modes.iter().map(|m| m.len() - 1).collect();
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for mode in modes {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| mode.iter().map(move |b| a * b))
                .collect();
        }
        let kept: f64 = modes
            .iter()
            .map(|m| compensated_sum(m.iter().map(|a| a.norm_sqr())))
            .product();
        Self {
            amplitudes,
            cutoffs,
            truncation_loss: (1.0 - kept).max(0.0),
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    fn index_of(&self, occupations: &[usize]) -> Option<usize> {
        if occupations.len() != self.cutoffs.len() {
            return None;
        }
        let mut index = 0;
        for (&n, &cutoff) in occupations.iter().zip(&self.cutoffs) {
            if n > cutoff {
                return None;
            }
            index = index * (cutoff + 1) + n;
        }
        Some(index)
    }

    /// Amplitude at the given per-mode occupations, zero outside the cutoffs.
    pub fn amplitude(&self, occupations: &[usize]) -> Complex64 {
        self.index_of(occupations)
            .map(|i| self.amplitudes[i])
            .unwrap_or_default()
    }

    fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.cutoffs.len()];
        for (slot, &cutoff) in occ.iter_mut().zip(&self.cutoffs).rev() {
            *slot = index % (cutoff + 1);
            index /= cutoff + 1;
        }
        occ
    }

    fn check_modes(&self, modes: &[usize]) -> Result<()> {
        if modes.is_empty() {
            return Err(Error::Empty("mode group"));
        }
        for (i, &m) in modes.iter().enumerate() {
            if m >= self.cutoffs.len() || modes[..i].contains(&m) {
                return Err(Error::Domain(format!(
                    "invalid mode group {modes:?} for {} modes",
                    self.cutoffs.len()
                )));
            }
        }
        Ok(())
    }

    /// Projects onto total photon number `outcome` over `mode_group`.
    ///
    /// Returns the squared norm of the projected (unnormalized) state and the
    /// renormalized state.
    pub fn project_total_number(
        &self,
        mode_group: &[usize],
        outcome: u64,
    ) -> Result<(f64, DenseJointState)> {
        self.check_modes(mode_group)?;
        let amplitudes: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let occ = self.occupations(i);
                let total: usize = mode_group.iter().map(|&m| occ[m]).sum();
                if total as u64 == outcome {
                    *a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let probability = compensated_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        if probability == 0.0 {
            return Err(Error::ImpossibleOutcome { outcome });
        }
        let scale = probability.sqrt();
        Ok((
            probability,
            DenseJointState {
                amplitudes: amplitudes.into_iter().map(|a| a / scale).collect(),
                cutoffs: self.cutoffs.clone(),
                truncation_loss: 0.0,
            },
        ))
    }

    /// Entropy of entanglement, in bits, across `cut` versus the other modes.
    ///
    /// The amplitudes are reshaped into a matrix (rows: modes in `cut`) and
    /// the entropy of the normalized squared singular values is returned.
    pub fn schmidt_entropy_dense(&self, cut: &[usize]) -> Result<f64> {
        self.check_modes(cut)?;
        let rest: Vec<usize> = (0..self.cutoffs.len())
            .filter(|m| !cut.contains(m))
            .collect();
        let dim = |modes: &[usize]| {
            modes
                .iter()
                .map(|&m| self.cutoffs[m] + 1)
                .product::<usize>()
        };
        let flat = |occ: &[usize], modes: &[usize]| {
            modes
                .iter()
                .fold(0, |acc, &m| acc * (self.cutoffs[m] + 1) + occ[m])
        };
        let (rows, cols) = (dim(cut), dim(&rest));
        let mut full = vec![Complex64::new(0.0, 0.0); rows * cols];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let occ = self.occupations(i);
            full[flat(&occ, cut) * cols + flat(&occ, &rest)] = *a;
        }
        // All-zero rows and columns carry no singular values.
        let live_rows: Vec<usize> = (0..rows)
            .filter(|r| {
                full[r * cols..(r + 1) * cols]
                    .iter()
                    .any(|a| a.norm_sqr() > 0.0)
            })
            .collect();
        let live_cols: Vec<usize> = (0..cols)
            .filter(|c| (0..rows).any(|r| full[r * cols + c].norm_sqr() > 0.0))
            .collect();
        if live_rows.is_empty() {
            return Err(Error::Domain("state has no amplitude".into()));
        }
        let matrix = DMatrix::from_fn(live_rows.len(), live_cols.len(), |r, c| {
            full[live_rows[r] * cols + live_cols[c]]
        });
        let singular = matrix.svd(false, false).singular_values;
        let weights: Vec<f64> = singular
            .iter()
            .filter(|s| **s >= SINGULAR_VALUE_FLOOR)
            .map(|s| s * s)
            .collect();
        let total = compensated_sum(weights.iter().copied());
        let probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();
        shannon_entropy_bits(&probabilities)
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff > MAX_CUTOFF {
        return Err(Error::Config(format!(
            "oracle cutoff {cutoff} exceeds {MAX_CUTOFF}"
        )));
    }
    Ok(())
}

/// `exp(-|a|^2/2) (a e^{i phi})^n / sqrt(n!)` by forward recurrence.
fn coherent_mode(alpha: Complex64, phi: f64, cutoff: usize) -> Vec<Complex64> {
    let step = alpha * Complex64::from_polar(1.0, phi);
    let mut amplitudes = Vec::with_capacity(cutoff + 1);
    let mut a = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..=cutoff {
        amplitudes.push(a);
        a = a * step / ((n + 1) as f64).sqrt();
    }
    amplitudes
}

/// `|alpha_phi> (x) |beta_phi>`, each mode cut at `cutoff` photons.
pub fn build_joint_coherent(
    alpha: Complex64,
    beta: Complex64,
    phi: f64,
    cutoff: usize,
) -> Result<DenseJointState> {
    check_cutoff(cutoff)?;
    Ok(DenseJointState::from_modes(&[
        coherent_mode(alpha, phi, cutoff),
        coherent_mode(beta, phi, cutoff),
    ]))
}

/// `|beta_phi> (x) |beta_phi> (x) |eta_phi>`, each mode cut at `cutoff`.
///
/// See [`PAIR_K_GROUP`] and [`PAIR_L_GROUP`] for the measured mode pairs.
pub fn build_joint_pair(
    eta: f64,
    beta: Complex64,
    phi: f64,
    cutoff: usize,
) -> Result<DenseJointState> {
    check_cutoff(cutoff)?;
    crate::states::check_eta(eta)?;
    let ancilla = coherent_mode(beta, phi, cutoff);
    let mut state = DenseJointState::from_modes(&[
        ancilla.clone(),
        ancilla,
        vec![Complex64::new(0.0, 0.0); cutoff + 1],
        vec![Complex64::new(0.0, 0.0); cutoff + 1],
    ]);
    // Squeezed pair: sqrt(1 - eta^2) (eta e^{2i phi})^n |n>|n>.
    let step = eta * Complex64::from_polar(1.0, 2.0 * phi);
    let mut schmidt = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((1.0 - eta * eta).sqrt(), 0.0);
    for _ in 0..=cutoff {
        schmidt.push(c);
        c *= step;
    }
    let a_mode = coherent_mode(beta, phi, cutoff);
    let mut kept_pair = CompensatedSum::new();
    for c in &schmidt {
        kept_pair.add(c.norm_sqr());
    }
    for m1 in 0..=cutoff {
        for m2 in 0..=cutoff {
            for (n, c) in schmidt.iter().enumerate() {
                let i = state.index_of(&[m1, m2, n, n]).expect("within cutoff");
                state.amplitudes[i] = a_mode[m1] * a_mode[m2] * c;
            }
        }
    }
    let kept_ancilla = compensated_sum(a_mode.iter().map(|a| a.norm_sqr()));
    state.truncation_loss = (1.0 - kept_ancilla * kept_ancilla * kept_pair.value()).max(0.0);
    Ok(state)
}

/// Coefficients of a projected two-mode state over the logical index `n`,
/// read off at occupations `(n, total - n)`.
pub fn logical_coefficients(state: &DenseJointState, total: u64) -> Vec<Complex64> {
    (0..=total as usize)
        .map(|n| state.amplitude(&[n, total as usize - n]))
        .collect()
}

/// Schmidt coefficients of a doubly projected pair state, read off at
/// occupations `(K-n, L-n, n, n)`.
pub fn pair_schmidt_coefficients(state: &DenseJointState, k: u64, l: u64) -> Vec<Complex64> {
    let (k, l) = (k as usize, l as usize);
    (0..=k.min(l))
        .map(|n| state.amplitude(&[k - n, l - n, n, n]))
        .collect()
}

/// Largest deviation between `a` and `b` after rotating `a` by the single
/// global phase that best aligns it with `b`.
pub fn global_phase_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            (x * phase - y).norm()
        })
        .fold(0.0, f64::max)
}

/// Worst-case disagreement between the oracle and the closed-form path.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OracleComparison {
    pub outcomes_compared: usize,
    pub max_probability_deviation: f64,
    pub max_state_deviation: f64,
    pub max_entropy_deviation: f64,
}

impl OracleComparison {
    pub fn max_deviation(&self) -> f64 {
        self.max_probability_deviation
            .max(self.max_state_deviation)
            .max(self.max_entropy_deviation)
    }

    fn record(&mut self, probability: f64, state: f64, entropy: f64) {
        self.outcomes_compared += 1;
        self.max_probability_deviation = self.max_probability_deviation.max(probability);
        self.max_state_deviation = self.max_state_deviation.max(state);
        self.max_entropy_deviation = self.max_entropy_deviation.max(entropy);
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Compares `P(M)` and the post-measurement probability vectors for every
/// `M <= max_total` with oracle probability above `min_probability`.
///
/// Exact whenever `max_total <= cutoff`, since every contributing
/// occupation is then inside the truncation.
pub fn compare_coherent(
    alpha: Complex64,
    beta: Complex64,
    phi: f64,
    cutoff: usize,
    max_total: u64,
    min_probability: f64,
) -> Result<OracleComparison> {
    let joint = build_joint_coherent(alpha, beta, phi, cutoff)?;
    let dist = coherent_outcome_distribution(alpha, beta, crate::encoding::DEFAULT_EPSILON_TAIL)?;
    let mut report = OracleComparison::default();
    for total in 0..=max_total {
        let (probability, post) = match joint.project_total_number(&[0, 1], total) {
            Ok(x) => x,
            Err(Error::ImpossibleOutcome { .. }) => continue,
            Err(e) => return Err(e),
        };
        if probability <= min_probability {
            continue;
        }
        let oracle_probs: Vec<f64> = logical_coefficients(&post, total)
            .iter()
            .map(|c| c.norm_sqr())
            .collect();
        let main = encode_coherent(alpha, beta, total)?;
        report.record(
            (probability - dist.probability(total)).abs(),
            max_abs_diff(&oracle_probs, &main.probabilities()),
            0.0,
        );
    }
    Ok(report)
}

/// Compares `P(K, L)`, Schmidt probabilities and entropies for every
/// `K, L <= max_outcome` with nonzero oracle probability.
pub fn compare_pair(
    eta: f64,
    beta: Complex64,
    phi: f64,
    cutoff: usize,
    max_outcome: u64,
) -> Result<OracleComparison> {
    let joint = build_joint_pair(eta, beta, phi, cutoff)?;
    let dist = pair_outcome_distribution(eta, beta, crate::encoding::DEFAULT_EPSILON_TAIL)?;
    let mut report = OracleComparison::default();
    for k in 0..=max_outcome {
        let (p_k, after_k) = match joint.project_total_number(&PAIR_K_GROUP, k) {
            Ok(x) => x,
            Err(Error::ImpossibleOutcome { .. }) => continue,
            Err(e) => return Err(e),
        };
        for l in 0..=max_outcome {
            let (p_l, post) = match after_k.project_total_number(&PAIR_L_GROUP, l) {
                Ok(x) => x,
                Err(Error::ImpossibleOutcome { .. }) => continue,
                Err(e) => return Err(e),
            };
            let oracle_schmidt: Vec<f64> = pair_schmidt_coefficients(&post, k, l)
                .iter()
                .map(|c| c.norm_sqr())
                .collect();
            let oracle_entropy = post.schmidt_entropy_dense(&PAIR_K_GROUP)?;
            let main = encode_pair(eta, beta, k, l)?;
            report.record(
                (p_k * p_l - dist.probability((k, l))).abs(),
                max_abs_diff(&oracle_schmidt, &main.schmidt_probabilities()),
                (oracle_entropy - entropy_of_entanglement(&main)?).abs(),
            );
        }
    }
    Ok(report)
}
