//! Byte-oriented range coder with carry propagation.
//!
//! The encoder keeps a 33-bit `low` accumulator and a 32-bit `range`;
//! whenever the range drops below 2^24 the top byte of `low` is retired
//! through a carry cache and the registers shift left by one byte. The
//! decoder mirrors the same renormalization, so for a given symbol sequence
//! the number of bytes it consumes equals the number the encoder emitted.
//! All probability arithmetic is integer-only.

/// Renormalization threshold.
const TOP: u32 = 1 << 24;

/// Frequency totals must stay at or below this so `range / total` keeps at
/// least eight bits of precision after renormalization.
pub const MAX_TOTAL: u32 = 1 << 16;

pub struct RangeEncoder {
    low: u64,
    range: u32,
    cache: u8,
    pending: u64,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        Self { low: 0, range: u32::MAX, cache: 0, pending: 1, out: Vec::new() }
    }

    /// Narrows the interval to the span `[start, start + freq)` out of
    /// `total`. The final span of a distribution absorbs the division
    /// remainder so no code space is wasted.
    pub fn encode_span(&mut self, start: u32, freq: u32, total: u32) {
        debug_assert!(freq > 0 && start + freq <= total && total <= MAX_TOTAL);
        let unit = self.range / total;
        self.low += (unit * start) as u64;
        if start + freq == total {
            self.range -= unit * start;
        } else {
            self.range = unit * freq;
        }
        while self.range < TOP {
            self.shift_low();
            self.range <<= 8;
        }
    }

    fn shift_low(&mut self) {
        let low32 = self.low as u32;
        if low32 < 0xFF00_0000 || self.low > u32::MAX as u64 {
            let carry = (self.low >> 32) as u8;
            self.out.push(self.cache.wrapping_add(carry));
            for _ in 1..self.pending {
                self.out.push(0xFFu8.wrapping_add(carry));
            }
            self.cache = (low32 >> 24) as u8;
            self.pending = 0;
        }
        self.pending += 1;
        self.low = ((low32 as u64) << 8) & 0xFFFF_FFFF;
    }

    /// Flushes the accumulator and returns the byte stream.
    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..5 {
            self.shift_low();
        }
        self.out
    }

    /// Bytes emitted so far (excluding bytes still held in the carry cache).
    pub fn bytes_written(&self) -> usize {
        self.out.len()
    }
}

pub struct RangeDecoder<'a> {
    code: u32,
    range: u32,
    buf: &'a [u8],
    pos: usize,
    overrun: bool,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        let mut dec = Self { code: 0, range: u32::MAX, buf, pos: 0, overrun: false };
        // The first byte is the encoder's initial cache and carries no data.
        dec.next_byte();
        for _ in 0..4 {
            dec.code = (dec.code << 8) | dec.next_byte() as u32;
        }
        dec
    }

    fn next_byte(&mut self) -> u8 {
        if self.pos < self.buf.len() {
            let b = self.buf[self.pos];
            self.pos += 1;
            b
        } else {
            self.overrun = true;
            0
        }
    }

    /// Cumulative frequency of the current symbol; look it up in the same
    /// distribution the encoder used, then call [`Self::decode_span`].
    pub fn decode_freq(&mut self, total: u32) -> u32 {
        debug_assert!(total <= MAX_TOTAL);
        let unit = self.range / total;
        (self.code / unit).min(total - 1)
    }

    /// Consumes the span located by [`Self::decode_freq`].
    pub fn decode_span(&mut self, start: u32, freq: u32, total: u32) {
        let unit = self.range / total;
        self.code -= unit * start;
        if start + freq == total {
            self.range -= unit * start;
        } else {
            self.range = unit * freq;
        }
        while self.range < TOP {
            self.code = (self.code << 8) | self.next_byte() as u32;
            self.range <<= 8;
        }
    }

    /// Bytes consumed so far. After the last symbol of a well-formed stream
    /// this equals the encoder's output length.
    pub fn bytes_consumed(&self) -> usize {
        self.pos
    }

    /// True if the decoder ran past the end of the buffer (corrupt stream).
    pub fn overrun(&self) -> bool {
        self.overrun
    }
}
