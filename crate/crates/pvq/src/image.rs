//! 8-bit grayscale frames, PGM (P5) files, and first-frame Y4M extraction.

use std::fmt;
use std::io;
use std::path::Path;

#[derive(Debug)]
pub enum ImageError {
    Io(io::Error),
    /// Malformed or unsupported file contents.
    Format(String),
}

impl fmt::Display for ImageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(e) => write!(f, "i/o error: {e}"),
            Self::Format(msg) => write!(f, "bad image data: {msg}"),
        }
    }
}

impl std::error::Error for ImageError {}

impl From<io::Error> for ImageError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

fn format_err<T>(msg: impl Into<String>) -> Result<T, ImageError> {
    Err(ImageError::Format(msg.into()))
}

/// A row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width * height);
        Self { width, height, data }
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self { width, height, data: vec![value; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    /// Extends the frame to multiples of `block` by replicating edge pixels.
    pub fn pad_to_multiple(&self, block: usize) -> Frame {
        let pw = self.width.div_ceil(block) * block;
        let ph = self.height.div_ceil(block) * block;
        if pw == self.width && ph == self.height {
            return self.clone();
        }
        Frame::from_fn(pw, ph, |x, y| self.get(x.min(self.width - 1), y.min(self.height - 1)))
    }

    pub fn crop(&self, width: usize, height: usize) -> Frame {
        assert!(width <= self.width && height <= self.height);
        Frame::from_fn(width, height, |x, y| self.get(x, y))
    }
}

/// Reads a binary PGM (P5) file with 8-bit samples.
pub fn read_pgm(path: &Path) -> Result<Frame, ImageError> {
    let bytes = std::fs::read(path)?;
    parse_pgm(&bytes)
}

pub fn parse_pgm(bytes: &[u8]) -> Result<Frame, ImageError> {
    let mut pos = 0usize;

    fn skip_space(bytes: &[u8], pos: &mut usize) {
        while *pos < bytes.len() {
            match bytes[*pos] {
                b' ' | b'\t' | b'\r' | b'\n' => *pos += 1,
                b'#' => {
                    while *pos < bytes.len() && bytes[*pos] != b'\n' {
                        *pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read_int(bytes: &[u8], pos: &mut usize) -> Result<usize, ImageError> {
        skip_space(bytes, pos);
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return format_err("expected integer in PGM header");
        }
        std::str::from_utf8(&bytes[start..*pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| format_err("bad integer in PGM header"), Ok)
    }

    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        return format_err("not a binary PGM (P5) file");
    }
    pos += 2;
    let width = read_int(bytes, &mut pos)?;
    let height = read_int(bytes, &mut pos)?;
    let maxval = read_int(bytes, &mut pos)?;
    if width == 0 || height == 0 {
        return format_err("zero PGM dimensions");
    }
    if maxval == 0 || maxval > 255 {
        return format_err(format!("unsupported PGM maxval {maxval} (need 1..=255)"));
    }
    // Single whitespace byte separates header from samples.
    if pos >= bytes.len() {
        return format_err("truncated PGM header");
    }
    pos += 1;
    let need = width * height;
    if bytes.len() < pos + need {
        return format_err("truncated PGM pixel data");
    }
    Ok(Frame::new(width, height, bytes[pos..pos + need].to_vec()))
}

/// Writes a binary PGM (P5) file.
pub fn write_pgm(path: &Path, frame: &Frame) -> Result<(), ImageError> {
    let mut out = format!("P5\n{} {}\n255\n", frame.width, frame.height).into_bytes();
    out.extend_from_slice(&frame.data);
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads the luma plane of the first frame of a Y4M file (4:2:0 or mono).
pub fn read_y4m_first_frame(path: &Path) -> Result<Frame, ImageError> {
    let bytes = std::fs::read(path)?;
    parse_y4m_first_frame(&bytes)
}

pub fn parse_y4m_first_frame(bytes: &[u8]) -> Result<Frame, ImageError> {
    let header_end = match bytes.iter().position(|&b| b == b'\n') {
        Some(p) => p,
        None => return format_err("missing Y4M stream header"),
    };
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| ImageError::Format("non-UTF8 Y4M header".into()))?;
    if !header.starts_with("YUV4MPEG2") {
        return format_err("not a YUV4MPEG2 file");
    }
    let mut width = 0usize;
    let mut height = 0usize;
    for token in header.split_whitespace().skip(1) {
        let (key, val) = token.split_at(1);
        match key {
            "W" => width = val.parse().map_err(|_| ImageError::Format("bad Y4M width".into()))?,
            "H" => height = val.parse().map_err(|_| ImageError::Format("bad Y4M height".into()))?,
            "C" => {
                if !val.starts_with("420") && val != "mono" {
                    return format_err(format!("unsupported Y4M colorspace C{val}"));
                }
            }
            _ => {}
        }
    }
    if width == 0 || height == 0 {
        return format_err("missing W/H in Y4M header");
    }
    // FRAME line may carry parameters; luma follows the newline.
    let rest = &bytes[header_end + 1..];
    if !rest.starts_with(b"FRAME") {
        return format_err("missing Y4M FRAME marker");
    }
    let frame_nl = match rest.iter().position(|&b| b == b'\n') {
        Some(p) => p,
        None => return format_err("truncated Y4M FRAME header"),
    };
    let luma = &rest[frame_nl + 1..];
    if luma.len() < width * height {
        return format_err("truncated Y4M frame data");
    }
    Ok(Frame::new(width, height, luma[..width * height].to_vec()))
}

/// Loads a frame, sniffing the container from its leading bytes.
pub fn load_frame(path: &Path) -> Result<Frame, ImageError> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(b"P5") {
        parse_pgm(&bytes)
    } else if bytes.starts_with(b"YUV4MPEG2") {
        parse_y4m_first_frame(&bytes)
    } else {
        format_err("unrecognized image container (need PGM P5 or YUV4MPEG2)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_roundtrip_via_parse() {
        let frame = Frame::from_fn(7, 5, |x, y| (x * 13 + y * 31) as u8);
        let mut buf = format!("P5\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
        buf.extend_from_slice(frame.data());
        assert_eq!(parse_pgm(&buf).unwrap(), frame);
    }

    #[test]
    fn pgm_with_comments() {
        let mut buf = b"P5 # binary pgm\n# a comment line\n2 2\n255\n".to_vec();
        buf.extend_from_slice(&[1, 2, 3, 4]);
        let frame = parse_pgm(&buf).unwrap();
        assert_eq!(frame.width(), 2);
        assert_eq!(frame.data(), &[1, 2, 3, 4]);
    }

    #[test]
    fn pgm_rejects_bad_inputs() {
        assert!(parse_pgm(b"P6\n2 2\n255\n....").is_err());
        assert!(parse_pgm(b"P5\n2 2\n65535\n").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\x01\x02").is_err());
    }

    #[test]
    fn y4m_first_frame_luma() {
        let mut buf = b"YUV4MPEG2 W4 H2 F25:1 Ip A1:1 C420jpeg\nFRAME\n".to_vec();
        buf.extend_from_slice(&[10, 20, 30, 40, 50, 60, 70, 80]); // luma
        buf.extend_from_slice(&[128, 128]); // chroma, ignored
        let frame = parse_y4m_first_frame(&buf).unwrap();
        assert_eq!((frame.width(), frame.height()), (4, 2));
        assert_eq!(frame.data(), &[10, 20, 30, 40, 50, 60, 70, 80]);
    }

    #[test]
    fn y4m_mono_and_bad_colorspace() {
        let mut buf = b"YUV4MPEG2 W2 H1 Cmono\nFRAME\n".to_vec();
        buf.extend_from_slice(&[9, 9]);
        assert!(parse_y4m_first_frame(&buf).is_ok());
        let buf = b"YUV4MPEG2 W2 H1 C444\nFRAME\n99".to_vec();
        assert!(parse_y4m_first_frame(&buf).is_err());
    }

    #[test]
    fn padding_replicates_edges() {
        let frame = Frame::from_fn(5, 3, |x, y| (x + 10 * y) as u8);
        let padded = frame.pad_to_multiple(4);
        assert_eq!((padded.width(), padded.height()), (8, 4));
        assert_eq!(padded.get(7, 0), frame.get(4, 0));
        assert_eq!(padded.get(4, 3), frame.get(4, 2));
        assert_eq!(padded.get(7, 3), frame.get(4, 2));
        assert_eq!(padded.crop(5, 3), frame);
    }
}
