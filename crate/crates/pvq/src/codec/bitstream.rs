//! Bitstream container: fixed header, entropy payload, length trailer.
//!
//! Layout (little-endian):
//! `"PVQ1"` magic, `u16` width, `u16` height, `u8` block size, `u8` flags
//! (bit 0 robust, bit 1 masking, bit 2 mode, bit 3 has-reference), `u16`
//! master quality in 1/16 steps, the entropy payload, and a `u32` trailer
//! holding the total stream length for truncation detection.

use super::{CodecError, CodingMode};

pub const MAGIC: [u8; 4] = *b"PVQ1";
pub const HEADER_LEN: usize = 12;
pub const TRAILER_LEN: usize = 4;

const FLAG_ROBUST: u8 = 1 << 0;
const FLAG_MASKING: u8 = 1 << 1;
const FLAG_SCALAR: u8 = 1 << 2;
const FLAG_HAS_REFERENCE: u8 = 1 << 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub width: u16,
    pub height: u16,
    pub block_size: u8,
    pub robust: bool,
    pub masking: bool,
    pub mode: CodingMode,
    pub has_reference: bool,
    /// Master quality step in 1/16 units.
    pub qg16: u16,
}

impl Header {
    pub fn qg(&self) -> f64 {
        self.qg16 as f64 / 16.0
    }

    fn flags(&self) -> u8 {
        let mut f = 0u8;
        if self.robust {
            f |= FLAG_ROBUST;
        }
        if self.masking {
            f |= FLAG_MASKING;
        }
        if self.mode == CodingMode::Scalar {
            f |= FLAG_SCALAR;
        }
        if self.has_reference {
            f |= FLAG_HAS_REFERENCE;
        }
        f
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        out.push(self.block_size);
        out.push(self.flags());
        out.extend_from_slice(&self.qg16.to_le_bytes());
    }
}

/// Appends the length trailer to a header + payload buffer.
pub fn seal(mut stream: Vec<u8>) -> Vec<u8> {
    let total = stream.len() + TRAILER_LEN;
    stream.extend_from_slice(&(total as u32).to_le_bytes());
    stream
}

/// Parses and validates the container; returns the header and the entropy
/// payload. The header stays readable without touching the payload.
pub fn parse(bytes: &[u8]) -> Result<(Header, &[u8]), CodecError> {
    if bytes.len() < HEADER_LEN {
        return Err(CodecError::Truncated);
    }
    if bytes[0..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    let width = u16::from_le_bytes([bytes[4], bytes[5]]);
    let height = u16::from_le_bytes([bytes[6], bytes[7]]);
    let block_size = bytes[8];
    let flags = bytes[9];
    let qg16 = u16::from_le_bytes([bytes[10], bytes[11]]);

    if bytes.len() < HEADER_LEN + TRAILER_LEN {
        return Err(CodecError::Truncated);
    }
    let trailer = u32::from_le_bytes(bytes[bytes.len() - TRAILER_LEN..].try_into().unwrap());
    if trailer as usize != bytes.len() {
        return Err(CodecError::Truncated);
    }

    if !matches!(block_size, 4 | 8 | 16) {
        return Err(CodecError::Malformed(format!("block size {block_size}")));
    }
    if width == 0 || height == 0 {
        return Err(CodecError::Malformed("zero frame dimensions".into()));
    }
    if qg16 == 0 {
        return Err(CodecError::Malformed("zero quality step".into()));
    }
    let header = Header {
        width,
        height,
        block_size,
        robust: flags & FLAG_ROBUST != 0,
        masking: flags & FLAG_MASKING != 0,
        mode: if flags & FLAG_SCALAR != 0 { CodingMode::Scalar } else { CodingMode::Pvq },
        has_reference: flags & FLAG_HAS_REFERENCE != 0,
        qg16,
    };
    Ok((header, &bytes[HEADER_LEN..bytes.len() - TRAILER_LEN]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Header {
        Header {
            width: 65,
            height: 48,
            block_size: 8,
            robust: true,
            masking: false,
            mode: CodingMode::Scalar,
            has_reference: true,
            qg16: 8 * 16,
        }
    }

    #[test]
    fn header_roundtrip() {
        let h = sample();
        let mut buf = Vec::new();
        h.write_to(&mut buf);
        buf.extend_from_slice(&[1, 2, 3]); // payload
        let sealed = seal(buf);
        let (parsed, payload) = parse(&sealed).unwrap();
        assert_eq!(parsed, h);
        assert_eq!(payload, &[1, 2, 3]);
    }

    #[test]
    fn bad_magic_reports_bad_magic() {
        let h = sample();
        let mut buf = Vec::new();
        h.write_to(&mut buf);
        let mut sealed = seal(buf);
        sealed[0] = b'X';
        assert!(matches!(parse(&sealed), Err(CodecError::BadMagic)));
    }

    #[test]
    fn truncation_is_detected() {
        let h = sample();
        let mut buf = Vec::new();
        h.write_to(&mut buf);
        buf.extend_from_slice(&[0; 64]);
        let sealed = seal(buf);
        assert!(matches!(parse(&sealed[..sealed.len() - 1]), Err(CodecError::Truncated)));
        assert!(matches!(parse(&sealed[..6]), Err(CodecError::Truncated)));
        assert!(parse(&sealed).is_ok());
    }

    #[test]
    fn malformed_header_fields() {
        let mut h = sample();
        h.block_size = 5;
        let mut buf = Vec::new();
        h.write_to(&mut buf);
        assert!(matches!(parse(&seal(buf)), Err(CodecError::Malformed(_))));

        let mut h = sample();
        h.qg16 = 0;
        let mut buf = Vec::new();
        h.write_to(&mut buf);
        assert!(matches!(parse(&seal(buf)), Err(CodecError::Malformed(_))));
    }
}
