use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Largest per-coordinate bit budget; midpoints stay exact in an `f64`.
pub const MAX_FIELD_BITS: u32 = 52;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Real lines in `R^d`.
    Real,
    /// Complex lines through their real representative in `R^(2D-1)`.
    ComplexScheme1,
    /// Complex lines with the complex mesh and Gaussian compander.
    ComplexScheme2,
}

impl Scheme {
    /// Short name used on the command line and in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Scheme::Real => "real",
            Scheme::ComplexScheme1 => "cs1",
            Scheme::ComplexScheme2 => "cs2",
        }
    }

    pub fn is_complex(self) -> bool {
        !matches!(self, Scheme::Real)
    }

    /// Number of companded coordinates for dimension `dim`.
    pub fn coord_count(self, dim: usize) -> usize {
        match self {
            Scheme::Real => dim - 1,
            Scheme::ComplexScheme1 | Scheme::ComplexScheme2 => 2 * dim - 2,
        }
    }

    /// Number of coarse cells for dimension `dim`.
    pub fn cell_count(self, dim: usize) -> usize {
        match self {
            Scheme::Real | Scheme::ComplexScheme2 => dim,
            Scheme::ComplexScheme1 => 2 * dim - 1,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Scheme::Real),
            "cs1" => Ok(Scheme::ComplexScheme1),
            "cs2" => Ok(Scheme::ComplexScheme2),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Bits spent on each companded coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitAllocation(Vec<u32>);

impl BitAllocation {
    pub fn new(bits: Vec<u32>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > MAX_FIELD_BITS) {
            return Err(Error::InvalidAllocation(format!(
                "{b} bits exceeds the per-coordinate limit of {MAX_FIELD_BITS}"
            )));
        }
        Ok(BitAllocation(bits))
    }

    pub fn uniform(coords: usize, bits: u32) -> Result<Self> {
        BitAllocation::new(vec![bits; coords])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&b| b as u64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantizerConfig {
    scheme: Scheme,
    dim: usize,
    alloc: BitAllocation,
}

impl QuantizerConfig {
    /// `dim` is `d` for [`Scheme::Real`] and the complex dimension `D` otherwise.
    pub fn new(scheme: Scheme, dim: usize, alloc: BitAllocation) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let expected = scheme.coord_count(dim);
        if alloc.len() != expected {
            return Err(Error::InvalidAllocation(format!(
                "scheme {scheme} in dimension {dim} needs {expected} entries, got {}",
                alloc.len()
            )));
        }
        Ok(QuantizerConfig { scheme, dim, alloc })
    }

    /// Same budget `bits` on every coordinate.
    pub fn uniform(scheme: Scheme, dim: usize, bits: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        QuantizerConfig::new(
            scheme,
            dim,
            BitAllocation::uniform(scheme.coord_count(dim), bits)?,
        )
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alloc(&self) -> &BitAllocation {
        &self.alloc
    }

    pub fn cell_count(&self) -> usize {
        self.scheme.cell_count(self.dim)
    }

    /// `ceil(log2(cells))`.
    pub fn header_bits(&self) -> u32 {
        self.cell_count().next_power_of_two().trailing_zeros()
    }

    pub fn total_bits(&self) -> u64 {
        self.header_bits() as u64 + self.alloc.total()
    }

    /// `cells · 2^(Σ B_i)`, or `None` if it does not fit in a `u128`.
    pub fn codebook_size(&self) -> Option<u128> {
        let body = u32::try_from(self.alloc.total()).ok()?;
        1u128
            .checked_shl(body)?
            .checked_mul(self.cell_count() as u128)
    }

    pub fn log2_codebook_size(&self) -> f64 {
        (self.cell_count() as f64).log2() + self.alloc.total() as f64
    }

    /// Codeword length over the ambient dimension (`d` real, `D` complex).
    pub fn bits_per_dimension(&self) -> f64 {
        self.total_bits() as f64 / self.dim as f64
    }

    pub(crate) fn expect(&self, scheme: Scheme, dim: usize) -> Result<()> {
        if self.scheme != scheme {
            return Err(Error::ConfigMismatch(format!(
                "configuration is for scheme {}, not {scheme}",
                self.scheme
            )));
        }
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: dim,
            });
        }
        Ok(())
    }
}

pub fn codebook_size(cfg: &QuantizerConfig) -> Option<u128> {
    cfg.codebook_size()
}

pub fn bits_per_dimension(cfg: &QuantizerConfig) -> f64 {
    cfg.bits_per_dimension()
}
