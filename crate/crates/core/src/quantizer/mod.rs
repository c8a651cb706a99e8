//! The cube-split quantizers.
//!
//! A codeword is the coarse cell index `i* - 1` in `ceil(log2 m)` bits
//! followed by one field per companded coordinate, each MSB-first. Real lines
//! use the real compander directly. Complex scheme 1 rotates the line so its
//! first component is real and runs the real quantizer in dimension `2D - 1`.
//! Complex scheme 2 uses the complex compander on the complex mesh.

mod bits;
mod config;

use num_complex::Complex64;

pub use bits::BitString;
pub use config::{
    bits_per_dimension, codebook_size, BitAllocation, QuantizerConfig, Scheme, MAX_FIELD_BITS,
};

use crate::compander::{complex_map, complex_unmap, real_map, real_unmap, CellIndex, CubeCoords};
use crate::line::{ComplexLine, RealLine};
use crate::{Error, Result};

/// Index of the largest `|y_i|`, lowest index on ties.
pub fn cell_index_real(y: &RealLine) -> CellIndex {
    let v = y.as_slice();
    CellIndex::new(argmax(v.iter().map(|x| x.abs())), v.len()).expect("argmax is in range")
}

/// Index of the largest complex modulus, lowest index on ties.
pub fn cell_index_complex(x: &ComplexLine) -> CellIndex {
    let v = x.as_slice();
    CellIndex::new(argmax(v.iter().map(|z| z.norm_sqr())), v.len()).expect("argmax is in range")
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    best + 1
}

/// `min(floor(2^bits · a), 2^bits - 1)`; zero when `bits == 0`.
pub fn scalar_quantize(a: f64, bits: u32) -> Result<u64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::CoordinateOutOfRange(a));
    }
    if bits > MAX_FIELD_BITS {
        return Err(Error::InvalidAllocation(format!("{bits} bits")));
    }
    Ok(quantize_field(a, bits))
}

#[inline]
fn quantize_field(a: f64, bits: u32) -> u64 {
    let levels = 1u64 << bits;
    // 2^bits · a is exact, so floor sees the true product
    ((a * levels as f64).floor() as u64).min(levels - 1)
}

/// Cell midpoint `2^-bits · (n + 1/2)`; `0.5` when `bits == 0`.
pub fn scalar_dequantize(n: u64, bits: u32) -> Result<f64> {
    if bits > MAX_FIELD_BITS {
        return Err(Error::InvalidAllocation(format!("{bits} bits")));
    }
    if n >> bits != 0 {
        return Err(Error::MalformedCodeword(format!(
            "field value {n} does not fit in {bits} bits"
        )));
    }
    Ok(dequantize_field(n, bits))
}

#[inline]
fn dequantize_field(n: u64, bits: u32) -> f64 {
    (n as f64 + 0.5) / (1u64 << bits) as f64
}

fn pack(
    cell: CellIndex,
    coords: &CubeCoords,
    header_bits: u32,
    alloc: &BitAllocation,
) -> BitString {
    let mut out = BitString::with_capacity(header_bits as usize + alloc.total() as usize);
    out.push((cell.get() - 1) as u64, header_bits);
    for (&a, &b) in coords.as_slice().iter().zip(alloc.as_slice()) {
        out.push(quantize_field(a, b), b);
    }
    out
}

fn check_length(bits: &BitString, cfg: &QuantizerConfig) -> Result<()> {
    let expected = cfg.total_bits() as usize;
    if bits.len() != expected {
        return Err(Error::MalformedCodeword(format!(
            "expected {expected} bits, got {}",
            bits.len()
        )));
    }
    Ok(())
}

fn read_header(bits: &BitString, cfg: &QuantizerConfig) -> Result<CellIndex> {
    let header = bits.read(0, cfg.header_bits()) as usize;
    let cells = cfg.cell_count();
    if header >= cells {
        return Err(Error::MalformedCodeword(format!(
            "header {header} addresses a cell beyond {cells}"
        )));
    }
    CellIndex::new(header + 1, cells)
}

/// Fields read front to back.
fn unpack_fields(bits: &BitString, cfg: &QuantizerConfig) -> CubeCoords {
    let mut pos = cfg.header_bits() as usize;
    let a = cfg
        .alloc()
        .as_slice()
        .iter()
        .map(|&b| {
            let n = bits.read(pos, b);
            pos += b as usize;
            dequantize_field(n, b)
        })
        .collect();
    CubeCoords::new(a).expect("midpoints lie in (0, 1)")
}

fn encode_real_line(y: &RealLine, header_bits: u32, alloc: &BitAllocation) -> BitString {
    let cell = cell_index_real(y);
    let coords = real_map(y, cell).expect("a line always lies in its argmax cell");
    pack(cell, &coords, header_bits, alloc)
}

fn decode_real_line(bits: &BitString, cfg: &QuantizerConfig, dim: usize) -> Result<RealLine> {
    check_length(bits, cfg)?;
    let cell = read_header(bits, cfg)?;
    real_unmap(&unpack_fields(bits, cfg), cell, dim)
}

pub fn encode_real(y: &RealLine, cfg: &QuantizerConfig) -> Result<BitString> {
    cfg.expect(Scheme::Real, y.dim())?;
    Ok(encode_real_line(y, cfg.header_bits(), cfg.alloc()))
}

/// Reconstructs the cell-midpoint codeword.
pub fn decode_real(bits: &BitString, cfg: &QuantizerConfig) -> Result<RealLine> {
    if cfg.scheme() != Scheme::Real {
        return Err(Error::ConfigMismatch(format!(
            "configuration is for scheme {}, not real",
            cfg.scheme()
        )));
    }
    decode_real_line(bits, cfg, cfg.dim())
}

/// Real vector of dimension `2D - 1` for the line `x` rotated so that its
/// first component is real and non-negative:
/// `(|x_1|, Re x_2', …, Re x_D', Im x_2', …, Im x_D')`.
pub fn real_representative(x: &ComplexLine) -> RealLine {
    let v = x.as_slice();
    let d = v.len();
    let r1 = v[0].norm();
    let rot = if r1 == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        v[0].conj() / r1
    };
    let mut y = Vec::with_capacity(2 * d - 1);
    y.push(r1);
    y.extend(v[1..].iter().map(|z| (z * rot).re));
    y.extend(v[1..].iter().map(|z| (z * rot).im));
    RealLine::from_vector(y).expect("rotation preserves the unit norm")
}

/// Inverse layout of [`real_representative`].
pub fn complex_from_real(y: &RealLine) -> Result<ComplexLine> {
    let v = y.as_slice();
    if v.len() < 3 || v.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "real representative needs odd dimension >= 3, got {}",
            v.len()
        )));
    }
    let d = v.len().div_ceil(2);
    let mut x = Vec::with_capacity(d);
    x.push(Complex64::new(v[0], 0.0));
    x.extend((1..d).map(|k| Complex64::new(v[k], v[d - 1 + k])));
    ComplexLine::from_vector(x)
}

pub fn encode_scheme1(x: &ComplexLine, cfg: &QuantizerConfig) -> Result<BitString> {
    cfg.expect(Scheme::ComplexScheme1, x.dim())?;
    Ok(encode_real_line(
        &real_representative(x),
        cfg.header_bits(),
        cfg.alloc(),
    ))
}

pub fn decode_scheme1(bits: &BitString, cfg: &QuantizerConfig) -> Result<ComplexLine> {
    if cfg.scheme() != Scheme::ComplexScheme1 {
        return Err(Error::ConfigMismatch(format!(
            "configuration is for scheme {}, not cs1",
            cfg.scheme()
        )));
    }
    let y = decode_real_line(bits, cfg, 2 * cfg.dim() - 1)?;
    complex_from_real(&y)
}

pub fn encode_scheme2(x: &ComplexLine, cfg: &QuantizerConfig) -> Result<BitString> {
    cfg.expect(Scheme::ComplexScheme2, x.dim())?;
    let cell = cell_index_complex(x);
    let coords = complex_map(x, cell).expect("a line always lies in its argmax cell");
    Ok(pack(cell, &coords, cfg.header_bits(), cfg.alloc()))
}

/// Pops the coordinate fields from the tail, last coordinate first, then
/// reads the cell index from the head.
pub fn decode_scheme2(bits: &BitString, cfg: &QuantizerConfig) -> Result<ComplexLine> {
    if cfg.scheme() != Scheme::ComplexScheme2 {
        return Err(Error::ConfigMismatch(format!(
            "configuration is for scheme {}, not cs2",
            cfg.scheme()
        )));
    }
    check_length(bits, cfg)?;
    let alloc = cfg.alloc().as_slice();
    let mut a = vec![0.0; alloc.len()];
    let mut end = bits.len();
    for (slot, &b) in a.iter_mut().zip(alloc).rev() {
        end -= b as usize;
        *slot = dequantize_field(bits.read(end, b), b);
    }
    let cell = read_header(bits, cfg)?;
    let coords = CubeCoords::new(a).expect("midpoints lie in (0, 1)");
    complex_unmap(&coords, cell, cfg.dim())
}

/// A validated configuration with scheme-dispatching encode and decode.
///
/// Stateless beyond the configuration; share freely across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeSplit {
    cfg: QuantizerConfig,
}

impl CubeSplit {
    pub fn new(cfg: QuantizerConfig) -> Self {
        CubeSplit { cfg }
    }

    pub fn config(&self) -> &QuantizerConfig {
        &self.cfg
    }

    pub fn encode_real(&self, y: &RealLine) -> Result<BitString> {
        encode_real(y, &self.cfg)
    }

    pub fn decode_real(&self, bits: &BitString) -> Result<RealLine> {
        decode_real(bits, &self.cfg)
    }

    pub fn encode_complex(&self, x: &ComplexLine) -> Result<BitString> {
        match self.cfg.scheme() {
            Scheme::ComplexScheme1 => encode_scheme1(x, &self.cfg),
            Scheme::ComplexScheme2 => encode_scheme2(x, &self.cfg),
            Scheme::Real => Err(Error::ConfigMismatch(
                "real configuration cannot encode complex lines".into(),
            )),
        }
    }

    pub fn decode_complex(&self, bits: &BitString) -> Result<ComplexLine> {
        match self.cfg.scheme() {
            Scheme::ComplexScheme1 => decode_scheme1(bits, &self.cfg),
            Scheme::ComplexScheme2 => decode_scheme2(bits, &self.cfg),
            Scheme::Real => Err(Error::ConfigMismatch(
                "real configuration cannot decode complex lines".into(),
            )),
        }
    }
}
