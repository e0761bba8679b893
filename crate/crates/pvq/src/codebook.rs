//! Pyramid vector quantization codebook.
//!
//! The codebook is the set of integer vectors whose component magnitudes sum
//! to a pulse budget `K`. Normalizing a codeword to unit length yields a
//! quantized direction on the unit sphere, so a band of transform
//! coefficients can be coded as a scalar gain plus one of these shapes.

use std::fmt;

use num_bigint::BigUint;

/// Constant of the codebook distortion model, fitted for a unit-norm
/// Laplace source quantized at large pulse counts.
pub const PVQ_DISTORTION_CONSTANT: f64 = 4.0;

/// Errors from codebook construction and search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodebookError {
    /// Input vector is empty.
    EmptyInput,
    /// Input vector contains NaN or infinity.
    NonFiniteInput,
    /// Component magnitudes do not sum to the declared pulse count.
    PulseCountMismatch { declared: u32, actual: u32 },
    /// The distortion model requires at least two dimensions.
    DimensionTooSmall(usize),
    /// The distortion model requires at least one pulse.
    PulseCountTooSmall,
}

impl fmt::Display for CodebookError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyInput => write!(f, "input vector is empty"),
            Self::NonFiniteInput => write!(f, "input vector has non-finite entries"),
            Self::PulseCountMismatch { declared, actual } => {
                write!(f, "pulse count mismatch: declared {declared}, found {actual}")
            }
            Self::DimensionTooSmall(n) => {
                write!(f, "dimension {n} too small for the distortion model (need >= 2)")
            }
            Self::PulseCountTooSmall => {
                write!(f, "pulse count too small for the distortion model (need >= 1)")
            }
        }
    }
}

impl std::error::Error for CodebookError {}

/// A codeword: signed integer pulses whose magnitudes sum to `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PulseVector {
    y: Vec<i32>,
}

impl PulseVector {
    /// Builds a codeword, verifying the magnitude sum against `k`.
    pub fn new(y: Vec<i32>, k: u32) -> Result<Self, CodebookError> {
        if y.is_empty() {
            return Err(CodebookError::EmptyInput);
        }
        let actual: u32 = y.iter().map(|&v| v.unsigned_abs()).sum();
        if actual != k {
            return Err(CodebookError::PulseCountMismatch { declared: k, actual });
        }
        Ok(Self { y })
    }

    /// Builds a codeword from components already known to be consistent.
    pub(crate) fn from_components(y: Vec<i32>) -> Self {
        debug_assert!(!y.is_empty());
        Self { y }
    }

    pub fn components(&self) -> &[i32] {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// Sum of component magnitudes.
    pub fn pulse_count(&self) -> u32 {
        self.y.iter().map(|&v| v.unsigned_abs()).sum()
    }
}

/// A unit-length direction, or the all-zero shape when `K = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitShape {
    u: Vec<f64>,
}

impl UnitShape {
    /// The designated shape for an empty pulse budget.
    pub fn zero(n: usize) -> Self {
        Self { u: vec![0.0; n] }
    }

    pub(crate) fn from_values(u: Vec<f64>) -> Self {
        Self { u }
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }
}

/// Finds the codeword with `k` pulses whose normalized form has the largest
/// dot product with `x`.
///
/// Starts from a truncated projection of `x` onto the pyramid, then adds the
/// remaining pulses one at a time, each to the dimension that maximizes the
/// correlation of the normalized result. Ties go to the lowest index so the
/// encoder and decoder sides of any caller agree on degenerate inputs. An
/// all-zero input gets every pulse on dimension 0, positive.
pub fn search(x: &[f64], k: u32) -> Result<PulseVector, CodebookError> {
    if x.is_empty() {
        return Err(CodebookError::EmptyInput);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CodebookError::NonFiniteInput);
    }
    let n = x.len();
    if k == 0 {
        return Ok(PulseVector::from_components(vec![0; n]));
    }

    let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let l1: f64 = abs.iter().sum();
    if l1 <= 0.0 {
        let mut y = vec![0i32; n];
        y[0] = k as i32;
        return Ok(PulseVector::from_components(y));
    }

    // Initial projection: floor(k * |x_i| / ||x||_1) never overshoots the
    // budget in exact arithmetic; clamp anyway against rounding.
    let mut mag = vec![0u32; n];
    let mut placed: u32 = 0;
    for i in 0..n {
        let p = ((k as f64) * abs[i] / l1).floor() as i64;
        let p = p.clamp(0, (k - placed) as i64) as u32;
        mag[i] = p;
        placed += p;
    }

    let mut sxy: f64 = abs.iter().zip(&mag).map(|(a, &m)| a * m as f64).sum();
    let mut syy: f64 = mag.iter().map(|&m| (m as f64) * (m as f64)).sum();

    for _ in placed..k {
        // Gain of adding one pulse to dimension j, compared without the
        // square root: (sxy + |x_j|)^2 / (syy + 2 mag_j + 1).
        let mut best = 0usize;
        let mut best_num = sxy + abs[0];
        let mut best_den = syy + 2.0 * mag[0] as f64 + 1.0;
        for j in 1..n {
            let num = sxy + abs[j];
            let den = syy + 2.0 * mag[j] as f64 + 1.0;
            if num * num * best_den > best_num * best_num * den {
                best = j;
                best_num = num;
                best_den = den;
            }
        }
        mag[best] += 1;
        sxy = best_num;
        syy = best_den;
    }

    let y: Vec<i32> = mag
        .iter()
        .zip(x)
        .map(|(&m, &xi)| if xi < 0.0 { -(m as i32) } else { m as i32 })
        .collect();
    Ok(PulseVector::from_components(y))
}

/// Normalizes a codeword to unit length; the zero codeword maps to the zero
/// shape.
pub fn normalize(y: &PulseVector) -> UnitShape {
    let norm_sq: f64 = y.y.iter().map(|&v| (v as f64) * (v as f64)).sum();
    if norm_sq <= 0.0 {
        return UnitShape::zero(y.dim());
    }
    let norm = norm_sq.sqrt();
    UnitShape::from_values(y.y.iter().map(|&v| v as f64 / norm).collect())
}

/// Number of codewords for dimension `n` and pulse budget `k`.
///
/// Uses the recurrence V(N, K) = V(N-1, K) + V(N, K-1) + V(N-1, K-1) with
/// V(N, 0) = 1 and V(0, K>0) = 0; counts overflow 64 bits for large inputs,
/// hence the big-integer result.
pub fn codebook_size(n: usize, k: u32) -> BigUint {
    let k = k as usize;
    // One row of the recurrence at a time, over K.
    let mut prev: Vec<BigUint> = vec![BigUint::from(0u32); k + 1];
    prev[0] = BigUint::from(1u32);
    let mut row = vec![BigUint::from(0u32); k + 1];
    for _ in 0..n {
        row[0] = BigUint::from(1u32);
        for j in 1..=k {
            row[j] = &prev[j] + &row[j - 1] + &prev[j - 1];
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[k].clone()
}

/// Mean squared error of quantizing a unit-norm Laplace-sourced vector of
/// dimension `n` with `k` pulses: ((n-1)^2 + C (n-1)) / (24 k^2).
pub fn expected_distortion(n: usize, k: u32) -> Result<f64, CodebookError> {
    if n < 2 {
        return Err(CodebookError::DimensionTooSmall(n));
    }
    if k < 1 {
        return Err(CodebookError::PulseCountTooSmall);
    }
    let nm1 = (n - 1) as f64;
    let kk = k as f64;
    Ok((nm1 * nm1 + PVQ_DISTORTION_CONSTANT * nm1) / (24.0 * kk * kk))
}
