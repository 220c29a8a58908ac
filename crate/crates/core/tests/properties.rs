//! Invariants of the encoded states, distributions and averaged entanglement.

use num_complex::Complex64;
use phasefree::encoding::{
    coherent_average_fidelity, coherent_outcome_distribution, encode_coherent, encode_pair,
    pair_average_fidelity, pair_outcome_distribution,
};
use phasefree::entanglement::{average_entanglement, figure1_sweep, tmss_entanglement};
use phasefree::numerics::{compensated_sum, log_poisson_weight};
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn recurrences_hold_across_the_support() {
    let (eta, beta) = (0.4, Complex64::from_polar(3.0, 0.6));
    let dist = pair_outcome_distribution(eta, beta, 1e-10).unwrap();
    for ((k, l), _) in dist.iter() {
        let s = encode_pair(eta, beta, k, l).unwrap();
        let norm = compensated_sum(s.schmidt_probabilities());
        assert!((norm - 1.0).abs() < 1e-12);
        let ratio = eta / (beta * beta);
        for n in 0..k.min(l) as usize {
            let (a, b) = (s.schmidt_coeffs()[n], s.schmidt_coeffs()[n + 1]);
            if a.norm() < 1e-250 || b.norm() < 1e-250 {
                continue;
            }
            let expected = ratio * (((k as usize - n) * (l as usize - n)) as f64).sqrt();
            assert!(
                (b / a - expected).norm() <= 1e-10 * expected.norm(),
                "({k},{l}) n={n}"
            );
        }
    }

    let (alpha, beta) = (Complex64::new(0.6, -0.8), c(4.0));
    let dist = coherent_outcome_distribution(alpha, beta, 1e-10).unwrap();
    for (m, _) in dist.iter() {
        let s = encode_coherent(alpha, beta, m).unwrap();
        assert!((compensated_sum(s.probabilities()) - 1.0).abs() < 1e-12);
        for n in 0..m as usize {
            let (a, b) = (s.coeffs()[n], s.coeffs()[n + 1]);
            if a.norm() < 1e-250 || b.norm() < 1e-250 {
                continue;
            }
            let expected = alpha / beta * (((m as usize - n) as f64) / ((n + 1) as f64)).sqrt();
            assert!((b / a - expected).norm() <= 1e-10 * expected.norm());
        }
    }
}

#[test]
fn ancilla_phase_cancels_from_probabilities() {
    let plain = pair_outcome_distribution(0.3, c(2.0), 1e-10).unwrap();
    let rotated = pair_outcome_distribution(0.3, Complex64::from_polar(2.0, 1.3), 1e-10).unwrap();
    assert_eq!(plain.window(), rotated.window());
    for ((k, l), p) in plain.iter() {
        assert!((p - rotated.probability((k, l))).abs() < 1e-14);
        let a = encode_pair(0.3, c(2.0), k, l)
            .unwrap()
            .schmidt_probabilities();
        let b = encode_pair(0.3, Complex64::from_polar(2.0, 1.3), k, l)
            .unwrap()
            .schmidt_probabilities();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

/// The K marginal of the pair table equals the Poisson-thermal convolution.
/// It is close to, but not equal to, a Poisson of the combined mean; the gap
/// falls off like `nbar^2 / |beta|^2`.
#[test]
fn pair_marginal_against_direct_summation() {
    fn marginal_gap(eta: f64, beta: f64) -> (f64, f64, f64) {
        let dist = pair_outcome_distribution(eta, c(beta), 1e-10).unwrap();
        let (w, _) = dist.window();
        let eta2 = eta * eta;
        let nbar = eta2 / (1.0 - eta2);
        let mut convolution_gap: f64 = 0.0;
        let mut tv = Vec::new();
        for k in 0..=w {
            let row = compensated_sum((0..=w).map(|l| dist.probability((k, l))));
            let direct = compensated_sum((0..=k).map(|n| {
                (1.0 - eta2)
                    * eta2.powi(n as i32)
                    * log_poisson_weight(beta * beta, k - n).unwrap().exp()
            }));
            convolution_gap = convolution_gap.max((row - direct).abs());
            let poisson = log_poisson_weight(beta * beta + nbar, k).unwrap().exp();
            tv.push((row - poisson).abs());
        }
        (convolution_gap, 0.5 * compensated_sum(tv), dist.residual())
    }

    for (eta, beta) in [(0.1, 5.0), (0.1, 10.0), (0.3, 5.0), (0.5, 5.0), (0.5, 10.0)] {
        let (gap, _, residual) = marginal_gap(eta, beta);
        assert!(gap <= residual + 1e-12, "eta={eta} beta={beta}: {gap}");
    }
    for beta in [5.0, 10.0] {
        let (_, tv, residual) = marginal_gap(0.1, beta);
        assert!(tv <= residual + 1e-6, "beta={beta}: tv {tv}");
    }
    let (_, tv5, _) = marginal_gap(0.5, 5.0);
    let (_, tv10, _) = marginal_gap(0.5, 10.0);
    assert!(tv10 < 0.3 * tv5, "{tv5} -> {tv10}");
}

#[test]
fn average_entanglement_grows_with_beta_and_stays_bounded() {
    let betas: Vec<f64> = (1..=8).map(f64::from).collect();
    for eta in [0.2, 0.5] {
        let reports = figure1_sweep(&[eta], &betas, 1e-10).unwrap();
        let exact = tmss_entanglement(eta).unwrap();
        for pair in reports.windows(2) {
            assert!(pair[1].e_avg >= pair[0].e_avg);
        }
        for r in &reports {
            assert!(r.e_avg <= exact + r.residual_bound + 1e-9);
            assert!(r.residual <= 1e-10);
            for c in &r.contributions {
                assert!(c.ebits <= ((c.k.min(c.l) + 1) as f64).log2() + 1e-12);
            }
        }
    }
}

#[test]
fn reports_are_identical_across_thread_pools() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| average_entanglement(0.4, c(4.0), 1e-10).unwrap())
    };
    let single = run(1);
    for threads in [2, 3, 8] {
        assert_eq!(run(threads), single);
    }
    assert_eq!(run(1), single);
}

#[test]
fn approximation_fidelity_is_monotone_and_high() {
    let betas = [2.0, 4.0, 6.0, 8.0, 10.0];
    for alpha in [
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.6, 0.8),
    ] {
        let f: Vec<f64> = betas
            .iter()
            .map(|&b| coherent_average_fidelity(alpha, c(b), 1e-10, 1e-12).unwrap())
            .collect();
        assert!(f.windows(2).all(|w| w[1] >= w[0]), "{alpha}: {f:?}");
        assert!(f[4] > 0.99);
    }
    // complex ancilla: the approximant carries the ancilla phase
    let f = pair_average_fidelity(0.3, Complex64::from_polar(6.0, 0.9), 1e-10, 1e-12).unwrap();
    let g = pair_average_fidelity(0.3, c(6.0), 1e-10, 1e-12).unwrap();
    assert!((f - g).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swapping_outcomes_keeps_schmidt_coefficients(
        eta in 0.0f64..0.95,
        beta in 0.2f64..6.0,
        k in 0u64..120,
        l in 0u64..120,
    ) {
        let a = encode_pair(eta, c(beta), k, l).unwrap();
        let b = encode_pair(eta, c(beta), l, k).unwrap();
        prop_assert_eq!(a.schmidt_coeffs(), b.schmidt_coeffs());
    }

    #[test]
    fn encoded_states_are_normalized(
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
        beta in 0.1f64..15.0,
        total in 0u64..400,
    ) {
        let s = encode_coherent(Complex64::new(re, im), c(beta), total).unwrap();
        prop_assert!((compensated_sum(s.probabilities()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_distributions_are_complete(
        alpha in 0.0f64..4.0,
        beta in 0.0f64..12.0,
        exp in 4i32..12,
    ) {
        let eps = 10f64.powi(-exp);
        let d = coherent_outcome_distribution(c(alpha), c(beta), eps).unwrap();
        prop_assert!(d.residual() <= eps);
        prop_assert!((d.enumerated_mass() + d.residual() - 1.0).abs() < 1e-10);
        prop_assert!(d.iter().all(|(_, p)| p >= 0.0));
    }
}
