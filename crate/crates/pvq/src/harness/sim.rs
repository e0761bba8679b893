//! Monte-Carlo validation of the codebook distortion model.
//!
//! Unit-norm vectors with i.i.d. Laplace components are quantized with the
//! codebook search and the measured squared error is compared against the
//! analytic model. Sampling uses SplitMix64 with inverse-CDF draws so results
//! are identical for a given seed on any platform.

use crate::codebook::{self, expected_distortion};

/// SplitMix64: 64-bit state, seedable, deterministic.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Unit-scale Laplace draw by inverse CDF.
    pub fn next_laplace(&mut self) -> f64 {
        let u = self.next_f64() - 0.5;
        -u.signum() * (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln()
    }
}

/// One grid point of the distortion-model study.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub n: usize,
    pub k: u32,
    pub trials: u64,
    pub seed: u64,
    pub measured_mse: f64,
    pub predicted_mse: f64,
    /// measured / predicted.
    pub ratio: f64,
}

impl SimResult {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.8e},{:.8e},{:.6}",
            self.n, self.k, self.trials, self.seed, self.measured_mse, self.predicted_mse, self.ratio
        )
    }
}

/// Quantizes `trials` unit-norm Laplace-sourced vectors of dimension `n`
/// with `k` pulses and reports the mean squared error next to the model's
/// prediction.
pub fn simulate_pvq_distortion(n: usize, k: u32, trials: u64, seed: u64) -> SimResult {
    assert!(n >= 2 && k >= 1 && trials >= 1);
    let mut rng = SplitMix64::new(seed);
    let mut total_err = 0.0f64;
    let mut done = 0u64;
    while done < trials {
        let x: Vec<f64> = (0..n).map(|_| rng.next_laplace()).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 0.0 {
            continue;
        }
        let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
        let y = codebook::search(&unit, k).expect("finite input");
        let shape = codebook::normalize(&y);
        let err: f64 = unit
            .iter()
            .zip(shape.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        total_err += err;
        done += 1;
    }
    let measured = total_err / trials as f64;
    let predicted = expected_distortion(n, k).expect("validated arguments");
    SimResult {
        n,
        k,
        trials,
        seed,
        measured_mse: measured,
        predicted_mse: predicted,
        ratio: measured / predicted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic_and_uniformish() {
        let mut a = SplitMix64::new(12345);
        let mut b = SplitMix64::new(12345);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut rng = SplitMix64::new(1);
        let mean: f64 = (0..10_000).map(|_| rng.next_f64()).sum::<f64>() / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02);
    }

    #[test]
    fn laplace_draws_have_unit_scale() {
        let mut rng = SplitMix64::new(77);
        let n = 50_000;
        let mean_abs: f64 = (0..n).map(|_| rng.next_laplace().abs()).sum::<f64>() / n as f64;
        // E|X| = b = 1 for the unit Laplace.
        assert!((mean_abs - 1.0).abs() < 0.02, "mean |x| = {mean_abs}");
    }

    #[test]
    fn simulation_is_deterministic_per_seed() {
        let a = simulate_pvq_distortion(4, 8, 500, 42);
        let b = simulate_pvq_distortion(4, 8, 500, 42);
        assert_eq!(a, b);
        let c = simulate_pvq_distortion(4, 8, 500, 43);
        assert_ne!(a.measured_mse, c.measured_mse);
    }

    #[test]
    fn measured_distortion_tracks_model_at_moderate_scale() {
        let r = simulate_pvq_distortion(8, 32, 2000, 7);
        assert!(r.ratio > 0.8 && r.ratio < 1.2, "ratio {}", r.ratio);
    }

    #[test]
    fn doubling_pulses_quarters_distortion() {
        let a = simulate_pvq_distortion(8, 16, 4000, 11);
        let b = simulate_pvq_distortion(8, 32, 4000, 11);
        let ratio = a.measured_mse / b.measured_mse;
        assert!((ratio / 4.0 - 1.0).abs() < 0.2, "K-doubling ratio {ratio}");
    }

    #[test]
    fn two_dimension_arc_bound() {
        for k in [4u32, 8, 16] {
            let r = simulate_pvq_distortion(2, k, 3000, 5);
            let bound = (std::f64::consts::PI / (4.0 * k as f64)).powi(2) * 1.1;
            assert!(r.measured_mse <= bound, "K={k}: {} > {bound}", r.measured_mse);
        }
    }
}
