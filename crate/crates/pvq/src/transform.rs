//! Orthonormal 2-D DCT (type II) for 4x4, 8x8 and 16x16 blocks.
//!
//! Orthonormal scaling means coefficient energy equals pixel energy, which is
//! what makes the coded band gains meaningful measures of local contrast.

use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    UnsupportedSize(usize),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnsupportedSize(n) => write!(f, "unsupported transform size {n}x{n}"),
        }
    }
}

impl std::error::Error for TransformError {}

pub const SUPPORTED_SIZES: [usize; 3] = [4, 8, 16];

/// Row-major orthonormal DCT-II basis matrix of size n x n.
fn basis(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    let norm0 = (1.0 / n as f64).sqrt();
    let norm = (2.0 / n as f64).sqrt();
    for k in 0..n {
        let s = if k == 0 { norm0 } else { norm };
        for i in 0..n {
            t[k * n + i] =
                s * (std::f64::consts::PI * k as f64 * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos();
        }
    }
    t
}

fn cached_basis(n: usize) -> Result<&'static [f64], TransformError> {
    static B4: OnceLock<Vec<f64>> = OnceLock::new();
    static B8: OnceLock<Vec<f64>> = OnceLock::new();
    static B16: OnceLock<Vec<f64>> = OnceLock::new();
    match n {
        4 => Ok(B4.get_or_init(|| basis(4))),
        8 => Ok(B8.get_or_init(|| basis(8))),
        16 => Ok(B16.get_or_init(|| basis(16))),
        other => Err(TransformError::UnsupportedSize(other)),
    }
}

/// out = T . M (both n x n, row-major).
fn mul_basis_left(t: &[f64], m: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += t[r * n + i] * m[i * n + c];
            }
            out[r * n + c] = acc;
        }
    }
    out
}

/// out = M . T^t (both n x n, row-major).
fn mul_basis_right_t(m: &[f64], t: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += m[r * n + i] * t[c * n + i];
            }
            out[r * n + c] = acc;
        }
    }
    out
}

/// Forward 2-D DCT of a row-major n x n block.
pub fn fdct2(block: &[f64], n: usize) -> Result<Vec<f64>, TransformError> {
    debug_assert_eq!(block.len(), n * n);
    let t = cached_basis(n)?;
    Ok(mul_basis_right_t(&mul_basis_left(t, block, n), t, n))
}

/// Inverse 2-D DCT of a row-major n x n coefficient block.
pub fn idct2(coeffs: &[f64], n: usize) -> Result<Vec<f64>, TransformError> {
    debug_assert_eq!(coeffs.len(), n * n);
    let t = cached_basis(n)?;
    // B = T^t . C . T; reuse the kernels with transposed operand order.
    let mut tt = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            tt[r * n + c] = t[c * n + r];
        }
    }
    Ok(mul_basis_right_t(&mul_basis_left(&tt, coeffs, n), &tt, n))
}
