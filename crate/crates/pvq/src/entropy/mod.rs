//! Bit-exact adaptive entropy layer: range coder, Laplace models, and the
//! codebook coefficient coder.
//!
//! Codeword coefficients are coded in band order against the running pulse
//! budget. While more than one pulse remains, each magnitude is modeled with
//! expectation `mu * K_n / (N - n)`; once a single pulse remains, the
//! position of that pulse is coded as a zero run with expectation
//! `nu * (N - n) / K_n`. Nonzero magnitudes are followed by a raw sign bit,
//! and coding stops as soon as the budget is spent. Both expectations adapt
//! from coded symbols only, so decoder state can never drift from encoder
//! state on a well-formed stream.

mod laplace;
mod range;

pub use laplace::{
    read_binary, read_cdf, read_laplace, read_laplace_signed, read_raw, unzigzag, write_binary,
    write_cdf, write_laplace, write_laplace_signed, zigzag, BinaryModel, BitCounter, LaplaceModel,
    SymbolWriter, PROB_TOTAL,
};
pub use range::{RangeDecoder, RangeEncoder, MAX_TOTAL};

use std::fmt;

use crate::codebook::PulseVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntropyError {
    /// Component magnitudes of the codeword do not sum to the stated budget.
    PulseCountMismatch { declared: u32, actual: u32 },
    /// A zero pulse budget has no coded representation.
    EmptyBudget,
}

impl fmt::Display for EntropyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PulseCountMismatch { declared, actual } => {
                write!(f, "pulse count mismatch: declared {declared}, found {actual}")
            }
            Self::EmptyBudget => write!(f, "cannot code a pulse vector with zero pulses"),
        }
    }
}

impl std::error::Error for EntropyError {}

/// The full set of adaptive contexts used by the codec. One instance lives
/// on each side of a stream and is strictly sequential.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymbolModels {
    /// Coefficient magnitude expectation (per-position scaled).
    pub magnitude: LaplaceModel,
    /// Zero-run expectation for the final pulse.
    pub run: LaplaceModel,
    /// Gain index residuals (and direct gain indices on no-reference paths).
    pub gain: LaplaceModel,
    /// Angle indices.
    pub theta: LaplaceModel,
    /// DC index residuals.
    pub dc: LaplaceModel,
    /// Scalar-baseline coefficient indices.
    pub scalar: LaplaceModel,
    /// The per-band no-reference flag.
    pub noref: BinaryModel,
}

/// Codes the components of `y` (with `k = sum |y_i|`, `k >= 1`).
pub fn encode_pulse_vector<W: SymbolWriter>(
    w: &mut W,
    magnitude: &mut LaplaceModel,
    run: &mut LaplaceModel,
    y: &[i32],
    k: u32,
) -> Result<(), EntropyError> {
    let actual: u32 = y.iter().map(|&v| v.unsigned_abs()).sum();
    if actual != k {
        return Err(EntropyError::PulseCountMismatch { declared: k, actual });
    }
    if k == 0 {
        return Err(EntropyError::EmptyBudget);
    }
    let n = y.len();
    let mut kn = k;
    let mut pos = 0usize;
    while kn > 0 {
        let left = (n - pos) as u32;
        if left == 1 {
            // Forced: the whole remaining budget sits here.
            w.raw(u32::from(y[pos] < 0), 1);
            break;
        }
        if kn > 1 {
            let m = y[pos].unsigned_abs();
            write_laplace(w, magnitude, m, kn, left, Some(kn));
            if m > 0 {
                w.raw(u32::from(y[pos] < 0), 1);
            }
            kn -= m;
            pos += 1;
        } else {
            // Single pulse left: code its position as a run of zeros.
            let run_len = y[pos..].iter().position(|&v| v != 0).expect("budget is nonzero") as u32;
            write_laplace(w, run, run_len, left, kn, Some(left - 1));
            w.raw(u32::from(y[pos + run_len as usize] < 0), 1);
            break;
        }
    }
    Ok(())
}

/// Inverse of [`encode_pulse_vector`]; the result always has magnitude sum
/// exactly `k`. The flag reports whether a corrupt escape payload was
/// clamped.
pub fn decode_pulse_vector(
    dec: &mut RangeDecoder,
    magnitude: &mut LaplaceModel,
    run: &mut LaplaceModel,
    n: usize,
    k: u32,
) -> (PulseVector, bool) {
    let mut y = vec![0i32; n];
    let mut kn = k;
    let mut pos = 0usize;
    let mut clamped = false;
    while kn > 0 {
        let left = (n - pos) as u32;
        if left == 1 {
            let neg = read_raw(dec, 1) == 1;
            y[pos] = if neg { -(kn as i32) } else { kn as i32 };
            break;
        }
        if kn > 1 {
            let (m, cl) = read_laplace(dec, magnitude, kn, left, Some(kn));
            clamped |= cl;
            if m > 0 {
                let neg = read_raw(dec, 1) == 1;
                y[pos] = if neg { -(m as i32) } else { m as i32 };
            }
            kn -= m;
            pos += 1;
        } else {
            let (run_len, cl) = read_laplace(dec, run, left, kn, Some(left - 1));
            clamped |= cl;
            let neg = read_raw(dec, 1) == 1;
            y[pos + run_len as usize] = if neg { -1 } else { 1 };
            break;
        }
    }
    (PulseVector::from_components(y), clamped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sim::SplitMix64;

    fn random_pulse_vector(rng: &mut SplitMix64, n: usize, k: u32) -> Vec<i32> {
        let mut y = vec![0i32; n];
        for _ in 0..k {
            let i = (rng.next_u64() as usize) % n;
            if y[i] == 0 {
                y[i] = if rng.next_u64() & 1 == 1 { -1 } else { 1 };
            } else {
                y[i] += y[i].signum();
            }
        }
        y
    }

    #[test]
    fn single_pulse_is_one_run_and_a_sign() {
        let mut y = vec![0i32; 16];
        y[15] = -1;
        let mut enc = RangeEncoder::new();
        let mut mag = LaplaceModel::default();
        let mut run = LaplaceModel::default();
        encode_pulse_vector(&mut enc, &mut mag, &mut run, &y, 1).unwrap();
        let bytes = enc.finish();
        let mut dec = RangeDecoder::new(&bytes);
        let mut mag = LaplaceModel::default();
        let mut run = LaplaceModel::default();
        let (got, clamped) = decode_pulse_vector(&mut dec, &mut mag, &mut run, 16, 1);
        assert_eq!(got.components(), &y[..]);
        assert!(!clamped);
        assert_eq!(dec.bytes_consumed(), bytes.len());
    }

    #[test]
    fn magnitude_and_run_expectations_match_the_models() {
        // K_n = 5 over 16 remaining positions with mu = 1 expects 0.3125;
        // K_n = 1 over 8 remaining with nu = 1 expects a run of 8.
        let mu = LaplaceModel::default();
        assert_eq!(mu.expectation_q8() as u64 * 5 / 16, 80); // 0.3125 in Q8
        assert_eq!(mu.expectation_q8() as u64 * 8 / 1, 2048); // 8.0 in Q8
    }

    #[test]
    fn pulse_count_mismatch_is_rejected() {
        let mut enc = RangeEncoder::new();
        let mut mag = LaplaceModel::default();
        let mut run = LaplaceModel::default();
        let err = encode_pulse_vector(&mut enc, &mut mag, &mut run, &[1, -1], 3).unwrap_err();
        assert_eq!(err, EntropyError::PulseCountMismatch { declared: 3, actual: 2 });
    }

    #[test]
    fn roundtrip_many_random_vectors_with_shared_adaptation() {
        let mut rng = SplitMix64::new(0xAB);
        let mut cases = Vec::new();
        let mut enc = RangeEncoder::new();
        let mut mag = LaplaceModel::default();
        let mut run = LaplaceModel::default();
        for _ in 0..1000 {
            let n = [15usize, 16, 63][(rng.next_u64() % 3) as usize];
            let k = 1 + (rng.next_u64() % 32) as u32;
            let y = random_pulse_vector(&mut rng, n, k);
            encode_pulse_vector(&mut enc, &mut mag, &mut run, &y, k).unwrap();
            cases.push((y, n, k));
        }
        let bytes = enc.finish();
        let mut dec = RangeDecoder::new(&bytes);
        let mut dmag = LaplaceModel::default();
        let mut drun = LaplaceModel::default();
        for (y, n, k) in &cases {
            let (got, clamped) = decode_pulse_vector(&mut dec, &mut dmag, &mut drun, *n, *k);
            assert!(!clamped);
            assert_eq!(got.components(), &y[..]);
            assert_eq!(got.pulse_count(), *k);
        }
        assert_eq!(dec.bytes_consumed(), bytes.len());
        // Decoder-side adaptation replayed the encoder's trajectory exactly.
        assert_eq!(dmag, mag);
        assert_eq!(drun, run);
    }

    #[test]
    fn final_position_magnitude_is_inferred() {
        // All pulses forced into the last slot: only sign bits and runs are
        // coded on the way, never a magnitude for the final position.
        let y = [0i32, 0, 0, 7];
        let mut enc = RangeEncoder::new();
        let mut mag = LaplaceModel::default();
        let mut run = LaplaceModel::default();
        encode_pulse_vector(&mut enc, &mut mag, &mut run, &y, 7).unwrap();
        let bytes = enc.finish();
        let mut dec = RangeDecoder::new(&bytes);
        let mut dmag = LaplaceModel::default();
        let mut drun = LaplaceModel::default();
        let (got, _) = decode_pulse_vector(&mut dec, &mut dmag, &mut drun, 4, 7);
        assert_eq!(got.components(), &y[..]);
    }
}
