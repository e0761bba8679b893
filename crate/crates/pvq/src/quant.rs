//! Scalar quantizers and resolution laws tying gain, angle, and pulse count
//! to a single master quality parameter.
//!
//! The band gain is companded before uniform quantization: the encoder raises
//! it to the power `1 - alpha` and the decoder expands with the reciprocal
//! exponent, so quantization noise grows with local contrast (activity
//! masking) without any signaling. The angle step follows the gain
//! resolution, and the codeword pulse budget is derived from the coded
//! indices so it never has to be transmitted.

use std::f64::consts::FRAC_PI_2;

use crate::codebook::PVQ_DISTORTION_CONSTANT;

/// Companding exponent used for textured blocks.
pub const MASKING_ALPHA: f64 = 1.0 / 3.0;

/// Gain quantizer configuration.
///
/// `beta = 1 / (1 - alpha)` is the decoder-side expansion exponent and
/// `qg` the master quality step. `robust` selects the pulse-budget rule that
/// survives predictor mismatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskingParams {
    pub alpha: f64,
    pub beta: f64,
    pub qg: f64,
    pub robust: bool,
}

impl MaskingParams {
    pub fn new(alpha: f64, qg: f64, robust: bool) -> Self {
        debug_assert!(qg > 0.0);
        debug_assert!(alpha == 0.0 || (alpha - MASKING_ALPHA).abs() < 1e-12);
        Self { alpha, beta: 1.0 / (1.0 - alpha), qg, robust }
    }

    /// Masking policy per block size: 4x4 blocks are assumed to hold edges
    /// and get a uniform quantizer; 8x8 and 16x16 get the masking exponent.
    pub fn for_block_size(block_size: usize, masking: bool, qg: f64, robust: bool) -> Self {
        let alpha = if masking && block_size >= 8 { MASKING_ALPHA } else { 0.0 };
        Self::new(alpha, qg, robust)
    }
}

/// Exact for the exponents used here; `gamma^1.5` goes through `sqrt` so
/// lattice points like 4^1.5 = 8 come out exact.
fn pow_beta(base: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        base
    } else if beta == 1.5 {
        base * base.sqrt()
    } else {
        base.powf(beta)
    }
}

fn pow_inv_beta(base: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        base
    } else if beta == 1.5 {
        // base^(2/3)
        (base * base).cbrt()
    } else {
        base.powf(1.0 / beta)
    }
}

/// Gain index: round-to-nearest in the companded domain.
pub fn quantize_gain(g: f64, p: &MaskingParams) -> u32 {
    debug_assert!(g >= 0.0);
    pow_inv_beta(g / p.qg, p.beta).round() as u32
}

/// Reconstructed gain `qg * gamma^beta`.
pub fn dequantize_gain(gamma: u32, p: &MaskingParams) -> f64 {
    p.qg * pow_beta(gamma as f64, p.beta)
}

/// Angle step for a coded gain index, rounded to an integer fraction of
/// pi/2.
///
/// Returns the step and the largest valid angle index; indices run over
/// `0..=t_max` so the quarter turn itself is representable.
pub fn theta_step(gamma: u32, p: &MaskingParams) -> (f64, u32) {
    debug_assert!(gamma >= 1, "no angle is coded for a zero gain");
    let raw = p.beta / gamma as f64;
    let t_max = ((FRAC_PI_2 / raw).round() as u32).max(1);
    (FRAC_PI_2 / t_max as f64, t_max)
}

/// Angle index for `theta` in [0, pi/2].
pub fn quantize_theta(theta: f64, q_theta: f64, t_max: u32) -> u32 {
    debug_assert!((0.0..=FRAC_PI_2 + 1e-9).contains(&theta));
    ((theta / q_theta).round() as i64).clamp(0, t_max as i64) as u32
}

/// Reconstructed angle for an index.
pub fn dequantize_theta(tau: u32, q_theta: f64) -> f64 {
    tau as f64 * q_theta
}

/// Pulse budget for a band codeword of dimension `n`, derived from the coded
/// indices so the decoder never needs it signaled.
///
/// With a reference, robust mode uses the angle index alone, which keeps the
/// symbol count immune to predictor mismatch; non-robust mode uses the full
/// gain/angle form. Without a reference the whole gain lands on the shape,
/// i.e. the same law with a unit sine. A positive angle index always buys at
/// least one pulse.
pub fn compute_k(gamma: u32, tau: u32, n: usize, p: &MaskingParams, has_ref: bool) -> u32 {
    if gamma == 0 {
        return 0;
    }
    let spread = ((n as f64 + PVQ_DISTORTION_CONSTANT - 2.0) / 2.0).sqrt();
    if has_ref {
        if p.robust {
            return (tau as f64 * spread).round() as u32;
        }
        if tau == 0 {
            return 0;
        }
        let (q_theta, _) = theta_step(gamma, p);
        let theta_hat = dequantize_theta(tau, q_theta);
        let k = (gamma as f64 * theta_hat.sin() / p.beta * spread).round() as u32;
        k.max(1)
    } else {
        (gamma as f64 / p.beta * spread).round() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sim::SplitMix64;

    fn masked(qg: f64) -> MaskingParams {
        MaskingParams::new(MASKING_ALPHA, qg, false)
    }

    #[test]
    fn gain_lattice_points() {
        let p = masked(8.0);
        assert_eq!(dequantize_gain(4, &p), 64.0);
        assert_eq!(dequantize_gain(0, &p), 0.0);
        assert_eq!(quantize_gain(64.0, &p), 4);
        assert_eq!(quantize_gain(0.0, &p), 0);

        let uniform = MaskingParams::new(0.0, 10.0, false);
        assert_eq!(quantize_gain(37.0, &uniform), 4);
        assert_eq!(dequantize_gain(4, &uniform), 40.0);
    }

    #[test]
    fn masking_policy_by_block_size() {
        assert_eq!(MaskingParams::for_block_size(4, true, 8.0, false).alpha, 0.0);
        assert_eq!(MaskingParams::for_block_size(8, true, 8.0, false).alpha, MASKING_ALPHA);
        assert_eq!(MaskingParams::for_block_size(16, true, 8.0, false).alpha, MASKING_ALPHA);
        assert_eq!(MaskingParams::for_block_size(16, false, 8.0, false).alpha, 0.0);
        let p = MaskingParams::for_block_size(8, true, 8.0, false);
        assert!((p.beta - 1.5).abs() < 1e-15);
    }

    #[test]
    fn gain_roundtrip_error_is_bounded_in_companded_domain() {
        let mut rng = SplitMix64::new(7);
        let p = masked(8.0);
        for _ in 0..1000 {
            let g = rng.next_f64() * 500.0;
            let gamma = quantize_gain(g, &p);
            let ghat = dequantize_gain(gamma, &p);
            // Round-to-nearest in the companded domain: companded error is at
            // most half a step.
            let companded_err = ((g / p.qg).powf(1.0 / p.beta)
                - (ghat / p.qg).powf(1.0 / p.beta))
            .abs();
            assert!(companded_err <= 0.5 + 1e-9, "g={g} gamma={gamma} ghat={ghat}");
        }
    }

    #[test]
    fn companded_steps_grow_with_gain() {
        let p = masked(5.0);
        let mut prev_step = 0.0;
        for gamma in 0..50u32 {
            let step = dequantize_gain(gamma + 1, &p) - dequantize_gain(gamma, &p);
            assert!(step >= prev_step - 1e-12);
            prev_step = step;
        }
    }

    #[test]
    fn alpha_zero_is_uniform_scalar() {
        let p = MaskingParams::new(0.0, 3.0, false);
        for gamma in 0..100u32 {
            assert_eq!(dequantize_gain(gamma, &p), 3.0 * gamma as f64);
        }
    }

    #[test]
    fn theta_step_examples() {
        let p = masked(1.0);
        let (q_theta, t_max) = theta_step(4, &p);
        assert_eq!(t_max, 4);
        assert!((q_theta - std::f64::consts::PI / 8.0).abs() < 1e-12);

        let (q_theta, t_max) = theta_step(1, &p);
        assert_eq!(t_max, 1);
        assert!((q_theta - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn theta_step_refines_with_gain() {
        let p = masked(1.0);
        for gamma in [2u32, 4, 8, 16, 64] {
            let raw = p.beta / gamma as f64;
            let raw2 = p.beta / (2 * gamma) as f64;
            assert!((raw2 - raw / 2.0).abs() < 1e-12);
            let (_, t1) = theta_step(gamma, &p);
            let (_, t2) = theta_step(2 * gamma, &p);
            assert!(t2 >= t1);
        }
    }

    #[test]
    fn theta_quantization_examples() {
        let q = std::f64::consts::PI / 8.0;
        assert_eq!(quantize_theta(0.0, q, 4), 0);
        assert_eq!(quantize_theta(q, q, 4), 1);
        assert_eq!(quantize_theta(0.5, q, 4), 1);
        assert_eq!(quantize_theta(FRAC_PI_2, q, 4), 4);
    }

    #[test]
    fn pulse_budget_examples() {
        let robust = MaskingParams::new(MASKING_ALPHA, 8.0, true);
        assert_eq!(compute_k(4, 2, 15, &robust, true), 6);
        assert_eq!(compute_k(4, 0, 15, &robust, true), 0);
        assert_eq!(compute_k(0, 0, 15, &robust, true), 0);

        let plain = masked(8.0);
        // gamma=4 with beta=1.5 puts tau=1 at pi/8.
        assert_eq!(compute_k(4, 1, 15, &plain, true), 3);
        assert_eq!(compute_k(4, 0, 16, &plain, false), 8);
    }

    #[test]
    fn robust_budget_ignores_gain() {
        let p = MaskingParams::new(MASKING_ALPHA, 8.0, true);
        let k = compute_k(3, 2, 15, &p, true);
        for gamma in 1..200u32 {
            assert_eq!(compute_k(gamma, 2, 15, &p, true), k);
        }
    }

    #[test]
    fn positive_angle_index_buys_a_pulse() {
        // Tiny gain, tiny angle: the raw formula can land below 0.5 but a
        // coded tau > 0 still promises a non-prediction component.
        let p = MaskingParams::new(0.0, 1.0, false);
        for gamma in 1..40u32 {
            let (_, t_max) = theta_step(gamma, &p);
            for tau in 1..=t_max {
                assert!(compute_k(gamma, tau, 2, &p, true) >= 1);
            }
        }
    }
}
