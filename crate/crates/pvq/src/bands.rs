//! Frequency-band partitioning of block coefficients.
//!
//! AC coefficients of a block are grouped into bands of similar octave and
//! orientation so quantizing one band never moves energy across octaves or
//! orientations. DC (index 0) is excluded and coded separately. The low
//! frequencies of a larger block are split recursively following the layout
//! of the next smaller block: 4x4, 8x8 and 16x16 blocks yield 1, 4 and 7
//! bands respectively.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BandError {
    UnsupportedBlockSize(usize),
    BandIndexOutOfRange { index: usize, count: usize },
}

impl fmt::Display for BandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnsupportedBlockSize(n) => write!(f, "unsupported block size {n}x{n}"),
            Self::BandIndexOutOfRange { index, count } => {
                write!(f, "band index {index} out of range (block has {count} bands)")
            }
        }
    }
}

impl std::error::Error for BandError {}

/// Ordered partition of a block's AC coefficients into bands.
///
/// Indices address the row-major coefficient array of the block; within each
/// rectangular region they run row-major as well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandLayout {
    block_size: usize,
    bands: Vec<Vec<usize>>,
}

impl BandLayout {
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn band(&self, index: usize) -> Result<&[usize], BandError> {
        self.bands
            .get(index)
            .map(Vec::as_slice)
            .ok_or(BandError::BandIndexOutOfRange { index, count: self.bands.len() })
    }

    pub fn band_sizes(&self) -> Vec<usize> {
        self.bands.iter().map(Vec::len).collect()
    }

    pub fn bands(&self) -> impl Iterator<Item = &[usize]> {
        self.bands.iter().map(Vec::as_slice)
    }
}

/// Indices of the rectangle rows x cols at origin (r0, c0) inside a block of
/// width `stride`, row-major, with DC (index 0) skipped.
fn region(stride: usize, r0: usize, c0: usize, rows: usize, cols: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(rows * cols);
    for r in r0..r0 + rows {
        for c in c0..c0 + cols {
            let idx = r * stride + c;
            if idx != 0 {
                out.push(idx);
            }
        }
    }
    out
}

/// Band layout for a supported block size.
pub fn band_layout(block_size: usize) -> Result<BandLayout, BandError> {
    let bands = match block_size {
        4 => vec![region(4, 0, 0, 4, 4)],
        8 => vec![
            region(8, 0, 0, 4, 4),
            region(8, 0, 4, 4, 4),
            region(8, 4, 0, 4, 4),
            region(8, 4, 4, 4, 4),
        ],
        16 => vec![
            region(16, 0, 0, 4, 4),
            region(16, 0, 4, 4, 4),
            region(16, 4, 0, 4, 4),
            region(16, 4, 4, 4, 4),
            region(16, 0, 8, 8, 8),
            region(16, 8, 0, 8, 8),
            region(16, 8, 8, 8, 8),
        ],
        other => return Err(BandError::UnsupportedBlockSize(other)),
    };
    Ok(BandLayout { block_size, bands })
}

/// Gathers one band's coefficients in layout order.
pub fn extract(coeffs: &[f64], layout: &BandLayout, band_index: usize) -> Result<Vec<f64>, BandError> {
    let band = layout.band(band_index)?;
    Ok(band.iter().map(|&i| coeffs[i]).collect())
}

/// Writes one band's values back into the block coefficient array.
pub fn scatter(
    values: &[f64],
    layout: &BandLayout,
    band_index: usize,
    coeffs: &mut [f64],
) -> Result<(), BandError> {
    let band = layout.band(band_index)?;
    debug_assert_eq!(values.len(), band.len());
    for (&i, &v) in band.iter().zip(values) {
        coeffs[i] = v;
    }
    Ok(())
}
