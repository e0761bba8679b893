//! Adaptive Laplace symbol models over the range coder.
//!
//! A model tracks the expected magnitude of its values in Q8 fixed point and
//! maps it to a geometric distribution with decay `E / (E + 1)`, realized as
//! an integer CDF with 15-bit totals and a minimum probability of one per
//! symbol. The alphabet is capped at `2 E + 16` values; larger values go
//! through an escape symbol followed by raw bits. Expectations adapt by
//! exponential moving average of the coded values, so encoder and decoder
//! stay in lockstep from the symbol stream alone.

use super::range::{RangeDecoder, RangeEncoder};

/// Fixed CDF total (15-bit probability precision).
pub const PROB_TOTAL: u32 = 1 << 15;

/// EMA adaptation rate: 1/16 per observation.
const ADAPT_SHIFT: u32 = 4;

/// Expectation bounds in Q8 (1/256 .. 4096).
const MU_MIN_Q8: u32 = 1;
const MU_MAX_Q8: u32 = 1 << 20;

/// Raw bits for values beyond the escape cap.
const ESCAPE_RAW_BITS: u32 = 24;

/// Sink for coded symbols: either the real range encoder or a bit counter
/// used for rate estimation. Decisions made against a counter never touch
/// the byte stream.
pub trait SymbolWriter {
    fn span(&mut self, start: u32, freq: u32, total: u32);
    fn raw(&mut self, value: u32, bits: u32);
}

impl SymbolWriter for RangeEncoder {
    fn span(&mut self, start: u32, freq: u32, total: u32) {
        self.encode_span(start, freq, total);
    }

    fn raw(&mut self, value: u32, bits: u32) {
        debug_assert!(bits <= 32 && (bits == 32 || value < (1 << bits)));
        let mut remaining = bits;
        while remaining > 0 {
            let chunk = remaining.min(16);
            let shift = remaining - chunk;
            let piece = (value >> shift) & ((1u32 << chunk) - 1);
            self.encode_span(piece, 1, 1 << chunk);
            remaining -= chunk;
        }
    }
}

/// Accumulates the information content of symbols without coding them.
#[derive(Debug, Default, Clone)]
pub struct BitCounter {
    pub bits: f64,
}

impl SymbolWriter for BitCounter {
    fn span(&mut self, _start: u32, freq: u32, total: u32) {
        self.bits += (total as f64 / freq as f64).log2();
    }

    fn raw(&mut self, _value: u32, bits: u32) {
        self.bits += bits as f64;
    }
}

pub fn read_raw(dec: &mut RangeDecoder, bits: u32) -> u32 {
    let mut remaining = bits;
    let mut value = 0u32;
    while remaining > 0 {
        let chunk = remaining.min(16);
        let total = 1u32 << chunk;
        let piece = dec.decode_freq(total);
        dec.decode_span(piece, 1, total);
        value = (value << chunk) | piece;
        remaining -= chunk;
    }
    value
}

/// Writes one symbol of a strictly increasing CDF (`cdf[0] = 0`, last entry
/// is the total).
pub fn write_cdf<W: SymbolWriter>(w: &mut W, symbol: usize, cdf: &[u32]) {
    let total = *cdf.last().expect("non-empty cdf");
    w.span(cdf[symbol], cdf[symbol + 1] - cdf[symbol], total);
}

pub fn read_cdf(dec: &mut RangeDecoder, cdf: &[u32]) -> usize {
    let total = *cdf.last().expect("non-empty cdf");
    let f = dec.decode_freq(total);
    let symbol = cdf.partition_point(|&c| c <= f) - 1;
    dec.decode_span(cdf[symbol], cdf[symbol + 1] - cdf[symbol], total);
    symbol
}

/// Maps signed values to the non-negative alphabet: 0, -1, 1, -2, 2, ...
pub fn zigzag(v: i32) -> u32 {
    if v >= 0 {
        (v as u32) << 1
    } else {
        ((-(v as i64)) as u32 * 2) - 1
    }
}

pub fn unzigzag(u: u32) -> i32 {
    if u & 1 == 0 {
        (u >> 1) as i32
    } else {
        -(((u as i64 + 1) / 2) as i32)
    }
}

/// Adaptive expectation parameter of one Laplace-modeled symbol context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplaceModel {
    mu_q8: u32,
}

impl Default for LaplaceModel {
    fn default() -> Self {
        // Initial expectation 1.0.
        Self { mu_q8: 256 }
    }
}

impl LaplaceModel {
    pub fn expectation_q8(&self) -> u32 {
        self.mu_q8
    }

    fn update_q8(&mut self, observed_q8: u64) {
        let obs = observed_q8.min(MU_MAX_Q8 as u64) as i64;
        let next = self.mu_q8 as i64 + ((obs - self.mu_q8 as i64) >> ADAPT_SHIFT);
        self.mu_q8 = next.clamp(MU_MIN_Q8 as i64, MU_MAX_Q8 as i64) as u32;
    }
}

struct GeometricCdf {
    cdf: Vec<u32>,
    cap: u32,
    has_escape: bool,
}

/// Integer CDF of a geometric distribution with expectation `e_q8`,
/// truncated at `max_value` when that is tighter than the escape cap.
fn geometric_cdf(e_q8: u32, max_value: Option<u32>) -> GeometricCdf {
    let cap = 2 * (e_q8 >> 8) + 16;
    let (nvalues, has_escape) = match max_value {
        Some(m) if m < cap => (m + 1, false),
        _ => (cap, true),
    };
    let nsym = nvalues as usize + usize::from(has_escape);
    debug_assert!(nsym >= 1 && nsym < PROB_TOTAL as usize);

    // Geometric decay q = E / (E + 1) in Q15.
    let q15 = ((e_q8 as u64) << 15) / (e_q8 as u64 + 256);
    let mut weights = Vec::with_capacity(nsym);
    let mut w: u64 = 1 << 16;
    for _ in 0..nvalues {
        weights.push(w);
        w = (w * q15) >> 15;
    }
    if has_escape {
        // Tail mass of the geometric beyond the cap: w / (1 - q).
        let tail = if q15 >= (1 << 15) { w } else { (w << 15) / ((1u64 << 15) - q15) };
        weights.push(tail);
    }

    let sum: u64 = weights.iter().sum::<u64>().max(1);
    let avail = PROB_TOTAL as u64 - nsym as u64;
    let mut cdf = Vec::with_capacity(nsym + 1);
    cdf.push(0u32);
    let mut acc = 0u32;
    for &wt in &weights {
        acc += 1 + ((wt * avail) / sum) as u32;
        cdf.push(acc);
    }
    // Hand the rounding remainder to the most probable symbol.
    let rem = PROB_TOTAL - acc;
    if rem > 0 {
        for c in cdf.iter_mut().skip(1) {
            *c += rem;
        }
    }
    GeometricCdf { cdf, cap, has_escape }
}

/// Codes `value` against a Laplace model whose effective expectation is
/// `model * scale_num / scale_den`, then adapts the model with the
/// correspondingly normalized observation. `max_value` bounds the alphabet
/// when the decoder knows a hard limit; `Some(0)` codes nothing.
pub fn write_laplace<W: SymbolWriter>(
    w: &mut W,
    model: &mut LaplaceModel,
    value: u32,
    scale_num: u32,
    scale_den: u32,
    max_value: Option<u32>,
) {
    debug_assert!(scale_num > 0 && scale_den > 0);
    if max_value == Some(0) {
        debug_assert_eq!(value, 0);
        return;
    }
    if let Some(m) = max_value {
        debug_assert!(value <= m);
    }
    let e_q8 =
        ((model.expectation_q8() as u64 * scale_num as u64) / scale_den as u64).min(MU_MAX_Q8 as u64) as u32;
    let geom = geometric_cdf(e_q8, max_value);
    if geom.has_escape && value >= geom.cap {
        write_cdf(w, geom.cap as usize, &geom.cdf);
        w.raw(value - geom.cap, ESCAPE_RAW_BITS);
    } else {
        write_cdf(w, value as usize, &geom.cdf);
    }
    model.update_q8((value as u64 * 256 * scale_den as u64) / scale_num as u64);
}

/// Inverse of [`write_laplace`]. Returns the value and whether a corrupt
/// escape payload had to be clamped to `max_value`.
pub fn read_laplace(
    dec: &mut RangeDecoder,
    model: &mut LaplaceModel,
    scale_num: u32,
    scale_den: u32,
    max_value: Option<u32>,
) -> (u32, bool) {
    debug_assert!(scale_num > 0 && scale_den > 0);
    if max_value == Some(0) {
        return (0, false);
    }
    let e_q8 =
        ((model.expectation_q8() as u64 * scale_num as u64) / scale_den as u64).min(MU_MAX_Q8 as u64) as u32;
    let geom = geometric_cdf(e_q8, max_value);
    let sym = read_cdf(dec, &geom.cdf) as u32;
    let (value, clamped) = if geom.has_escape && sym == geom.cap {
        let raw = read_raw(dec, ESCAPE_RAW_BITS);
        let v = geom.cap.saturating_add(raw);
        match max_value {
            Some(m) if v > m => (m, true),
            _ => (v, false),
        }
    } else {
        (sym, false)
    };
    model.update_q8((value as u64 * 256 * scale_den as u64) / scale_num as u64);
    (value, clamped)
}

/// Signed variant of [`write_laplace`] via the zigzag mapping.
pub fn write_laplace_signed<W: SymbolWriter>(w: &mut W, model: &mut LaplaceModel, value: i32) {
    write_laplace(w, model, zigzag(value), 1, 1, None);
}

pub fn read_laplace_signed(dec: &mut RangeDecoder, model: &mut LaplaceModel) -> i32 {
    unzigzag(read_laplace(dec, model, 1, 1, None).0)
}

/// Adaptive binary context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryModel {
    p1_q15: u32,
}

impl Default for BinaryModel {
    fn default() -> Self {
        Self { p1_q15: PROB_TOTAL / 2 }
    }
}

impl BinaryModel {
    fn update(&mut self, bit: bool) {
        if bit {
            self.p1_q15 += (PROB_TOTAL - self.p1_q15) >> ADAPT_SHIFT;
        } else {
            self.p1_q15 -= self.p1_q15 >> ADAPT_SHIFT;
        }
        self.p1_q15 = self.p1_q15.clamp(128, PROB_TOTAL - 128);
    }
}

pub fn write_binary<W: SymbolWriter>(w: &mut W, model: &mut BinaryModel, bit: bool) {
    let p0 = PROB_TOTAL - model.p1_q15;
    if bit {
        w.span(p0, model.p1_q15, PROB_TOTAL);
    } else {
        w.span(0, p0, PROB_TOTAL);
    }
    model.update(bit);
}

pub fn read_binary(dec: &mut RangeDecoder, model: &mut BinaryModel) -> bool {
    let p0 = PROB_TOTAL - model.p1_q15;
    let f = dec.decode_freq(PROB_TOTAL);
    let bit = f >= p0;
    if bit {
        dec.decode_span(p0, model.p1_q15, PROB_TOTAL);
    } else {
        dec.decode_span(0, p0, PROB_TOTAL);
    }
    model.update(bit);
    bit
}
