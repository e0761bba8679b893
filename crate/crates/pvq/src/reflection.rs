//! Householder reflection machinery for predictor-aligned coding.
//!
//! Instead of subtracting a predictor from the input band, the coefficient
//! space is reflected so the predictor lands on a coordinate axis. The match
//! between input and predictor then reduces to a single angle against that
//! axis, and the remaining direction is coded in one fewer dimension. Both
//! sides derive the reflection from the predictor alone, so no side
//! information is transmitted.

use std::fmt;

use crate::codebook::UnitShape;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReflectionError {
    /// The predictor has zero norm; callers must take the no-reference path.
    UnusablePredictor,
}

impl fmt::Display for ReflectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnusablePredictor => write!(f, "predictor unusable (zero norm)"),
        }
    }
}

impl std::error::Error for ReflectionError {}

/// Reflection state shared by encoder and decoder.
///
/// `v` is the normal of the reflection plane, `axis` the index of the
/// predictor's largest-magnitude component (lowest index on ties), and
/// `sign` the sign of that component (+1 for zero). Applying the reflection
/// to the predictor leaves `-sign * ||r||` on `axis` and zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflector {
    v: Vec<f64>,
    axis: usize,
    sign: f64,
}

impl Reflector {
    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }
}

/// Derives the reflection that maps the predictor `r` onto its dominant axis.
pub fn compute_reflector(r: &[f64]) -> Result<Reflector, ReflectionError> {
    let norm = l2_norm(r);
    if norm <= 0.0 {
        return Err(ReflectionError::UnusablePredictor);
    }
    let mut axis = 0usize;
    let mut best = r[0].abs();
    for (i, &v) in r.iter().enumerate().skip(1) {
        if v.abs() > best {
            best = v.abs();
            axis = i;
        }
    }
    let sign = if r[axis] < 0.0 { -1.0 } else { 1.0 };
    let mut v: Vec<f64> = r.iter().map(|&c| c / norm).collect();
    v[axis] += sign;
    Ok(Reflector { v, axis, sign })
}

/// Reflects `x` through the plane with normal `v`: z = x - 2 (v.x / v.v) v.
pub fn apply_reflection(x: &[f64], refl: &Reflector) -> Vec<f64> {
    debug_assert_eq!(x.len(), refl.v.len());
    let vx: f64 = refl.v.iter().zip(x).map(|(a, b)| a * b).sum();
    let vv: f64 = refl.v.iter().map(|a| a * a).sum();
    let scale = 2.0 * vx / vv;
    x.iter().zip(&refl.v).map(|(&xi, &vi)| xi - scale * vi).collect()
}

/// Angle in [0, pi] between the reflected input `z` and the predictor axis.
///
/// Returns `None` for a zero input, which callers treat as a zero-gain band.
pub fn compute_theta(z: &[f64], refl: &Reflector) -> Option<f64> {
    let norm = l2_norm(z);
    if norm <= 0.0 {
        return None;
    }
    let cos = (-refl.sign * z[refl.axis] / norm).clamp(-1.0, 1.0);
    Some(cos.acos())
}

/// Rebuilds an N-dimensional band from gain, angle, and an (N-1)-dimensional
/// shape that skips the reflection axis.
///
/// The reflected reconstruction puts `-sign * cos(theta)` of the gain on the
/// axis and spreads `sin(theta)` of it over the shape, then reflects back to
/// the original coordinates. Its norm equals the gain by construction.
pub fn reconstruct(gain: f64, theta: f64, shape: &UnitShape, refl: &Reflector) -> Vec<f64> {
    let n = refl.v.len();
    debug_assert_eq!(shape.dim(), n - 1);
    let (sin_t, cos_t) = theta.sin_cos();
    let mut z = vec![0.0; n];
    z[refl.axis] = -refl.sign * cos_t * gain;
    let mut s = shape.values().iter();
    for (i, zi) in z.iter_mut().enumerate() {
        if i != refl.axis {
            *zi = gain * sin_t * s.next().expect("shape dimension checked");
        }
    }
    apply_reflection(&z, refl)
}

pub(crate) fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
