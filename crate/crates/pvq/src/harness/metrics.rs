//! Frame quality metrics: PSNR and single-scale SSIM.

use std::fmt;

use crate::image::Frame;

/// PSNR is capped here so identical frames report a finite score.
pub const PSNR_CAP_DB: f64 = 99.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    DimensionMismatch { a: (usize, usize), b: (usize, usize) },
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { a, b } => {
                write!(f, "frame dimensions differ: {}x{} vs {}x{}", a.0, a.1, b.0, b.1)
            }
        }
    }
}

impl std::error::Error for MetricsError {}

fn check_dims(a: &Frame, b: &Frame) -> Result<(), MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch {
            a: (a.width(), a.height()),
            b: (b.width(), b.height()),
        });
    }
    Ok(())
}

/// Peak signal-to-noise ratio in dB over an 8-bit range, capped at 99.
pub fn psnr(a: &Frame, b: &Frame) -> Result<f64, MetricsError> {
    check_dims(a, b)?;
    let mse: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum::<f64>()
        / a.data().len() as f64;
    if mse <= 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((10.0 * (255.0f64 * 255.0 / mse).log10()).min(PSNR_CAP_DB))
}

/// Single-scale SSIM with sliding 8x8 uniform windows and the standard
/// constants (K1 = 0.01, K2 = 0.03 over an 8-bit range).
pub fn ssim(a: &Frame, b: &Frame) -> Result<f64, MetricsError> {
    check_dims(a, b)?;
    const C1: f64 = 6.5025; // (0.01 * 255)^2
    const C2: f64 = 58.5225; // (0.03 * 255)^2
    let win_w = a.width().min(8);
    let win_h = a.height().min(8);
    let area = (win_w * win_h) as f64;

    let mut total = 0.0f64;
    let mut windows = 0u64;
    for y0 in 0..=(a.height() - win_h) {
        for x0 in 0..=(a.width() - win_w) {
            let mut sx = 0.0;
            let mut sy = 0.0;
            let mut sxx = 0.0;
            let mut syy = 0.0;
            let mut sxy = 0.0;
            for y in y0..y0 + win_h {
                for x in x0..x0 + win_w {
                    let px = a.get(x, y) as f64;
                    let py = b.get(x, y) as f64;
                    sx += px;
                    sy += py;
                    sxx += px * px;
                    syy += py * py;
                    sxy += px * py;
                }
            }
            let mx = sx / area;
            let my = sy / area;
            let vx = sxx / area - mx * mx;
            let vy = syy / area - my * my;
            let cov = sxy / area - mx * my;
            let score = ((2.0 * mx * my + C1) * (2.0 * cov + C2))
                / ((mx * mx + my * my + C1) * (vx + vy + C2));
            total += score;
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sim::SplitMix64;

    fn noisy(base: &Frame, amplitude: i32, seed: u64) -> Frame {
        let mut rng = SplitMix64::new(seed);
        Frame::from_fn(base.width(), base.height(), |x, y| {
            let noise = (rng.next_u64() % (2 * amplitude as u64 + 1)) as i32 - amplitude;
            (base.get(x, y) as i32 + noise).clamp(0, 255) as u8
        })
    }

    #[test]
    fn psnr_examples() {
        let a = Frame::filled(16, 16, 100);
        assert_eq!(psnr(&a, &a).unwrap(), PSNR_CAP_DB);

        let b = Frame::from_fn(16, 16, |x, y| a.get(x, y) + 1);
        let p = psnr(&a, &b).unwrap();
        assert!((p - 48.1308).abs() < 1e-3, "off-by-one PSNR {p}");

        let black = Frame::filled(16, 16, 0);
        let white = Frame::filled(16, 16, 255);
        assert!(psnr(&black, &white).unwrap().abs() < 1e-12);
    }

    #[test]
    fn psnr_rejects_dimension_mismatch() {
        let a = Frame::filled(8, 8, 0);
        let b = Frame::filled(8, 9, 0);
        assert!(psnr(&a, &b).is_err());
        assert!(ssim(&a, &b).is_err());
    }

    #[test]
    fn ssim_identity_and_symmetry() {
        let mut rng = SplitMix64::new(4);
        let a = Frame::from_fn(32, 32, |_, _| (rng.next_u64() % 256) as u8);
        let b = noisy(&a, 20, 5);
        assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let ab = ssim(&a, &b).unwrap();
        let ba = ssim(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
    }

    #[test]
    fn heavier_degradation_scores_lower() {
        let base = Frame::from_fn(64, 64, |x, y| ((x * 3 + y * 2) % 256) as u8);
        let mild = noisy(&base, 5, 1);
        let heavy = noisy(&base, 60, 2);
        let s_mild = ssim(&base, &mild).unwrap();
        let s_heavy = ssim(&base, &heavy).unwrap();
        assert!(s_heavy < s_mild, "{s_heavy} !< {s_mild}");
    }
}
