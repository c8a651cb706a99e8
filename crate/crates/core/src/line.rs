//! Lines through the origin, represented by unit-norm spanning vectors.
//!
//! `v` and `-v` (real) or `v` and `λv` with `|λ| = 1` (complex) are the same
//! line. No canonical sign or phase is chosen here; every distance and encoder
//! is invariant to the choice.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::SeededRng;
use crate::{Error, Result};

/// Tolerance on `|‖v‖ - 1|` accepted by the checked constructors.
pub const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RealLine {
    v: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLine {
    v: Vec<Complex64>,
}

/// Behaviour shared by real and complex lines, used by the generic
/// Monte Carlo and codebook code.
pub trait GrassmannLine: Clone + Send + Sync + Sized {
    fn dim(&self) -> usize;

    /// Chordal distance `sqrt(1 - |<x, y>|^2)`.
    fn chordal_distance(&self, other: &Self) -> Result<f64>;

    /// Squared modulus of the inner product, for hot loops that only rank.
    fn overlap(&self, other: &Self) -> f64;

    fn sample_uniform(dim: usize, rng: &mut SeededRng) -> Result<Self>;

    /// One line per row in the vector text format.
    fn to_text(&self) -> String;
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::DimensionTooSmall(d))
    } else {
        Ok(())
    }
}

fn chordal_from_overlap(overlap: f64) -> f64 {
    // rounding can push the overlap slightly above 1
    (1.0 - overlap).max(0.0).sqrt()
}

impl RealLine {
    /// Wraps an already unit-norm vector.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(RealLine { v })
    }

    /// Normalizes any nonzero finite vector.
    pub fn from_vector(mut v: Vec<f64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Degenerate);
        }
        v.iter_mut().for_each(|x| *x /= norm);
        Ok(RealLine { v })
    }

    /// Canonical basis vector `e_index` (1-based).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index == 0 || index > dim {
            return Err(Error::CellOutOfRange { index, cells: dim });
        }
        let mut v = vec![0.0; dim];
        v[index - 1] = 1.0;
        Ok(RealLine { v })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn negated(&self) -> RealLine {
        RealLine {
            v: self.v.iter().map(|x| -x).collect(),
        }
    }
}

impl ComplexLine {
    pub fn new(v: Vec<Complex64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(ComplexLine { v })
    }

    pub fn from_vector(mut v: Vec<Complex64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Degenerate);
        }
        v.iter_mut().for_each(|z| *z /= norm);
        Ok(ComplexLine { v })
    }

    /// Canonical basis vector `f_index` (1-based).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index == 0 || index > dim {
            return Err(Error::CellOutOfRange { index, cells: dim });
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index - 1] = Complex64::new(1.0, 0.0);
        Ok(ComplexLine { v })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.v
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// The same line with its representative multiplied by `lambda`
    /// (renormalized, so any nonzero `lambda` is accepted).
    pub fn scaled(&self, lambda: Complex64) -> Result<ComplexLine> {
        ComplexLine::from_vector(self.v.iter().map(|z| z * lambda).collect())
    }
}

pub fn chordal_distance_real(x: &RealLine, y: &RealLine) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(chordal_from_overlap(real_overlap(x, y)))
}

pub fn chordal_distance_complex(x: &ComplexLine, y: &ComplexLine) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(chordal_from_overlap(complex_overlap(x, y)))
}

fn real_overlap(x: &RealLine, y: &RealLine) -> f64 {
    let dot: f64 = x.v.iter().zip(&y.v).map(|(a, b)| a * b).sum();
    dot * dot
}

fn complex_overlap(x: &ComplexLine, y: &ComplexLine) -> f64 {
    let dot: Complex64 = x.v.iter().zip(&y.v).map(|(a, b)| a.conj() * b).sum();
    dot.norm_sqr()
}

/// Normalized vector of `d` independent standard normals.
pub fn sample_uniform_real(d: usize, rng: &mut SeededRng) -> Result<RealLine> {
    check_dim(d)?;
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        // a zero draw has probability zero but would not normalize
        if let Ok(line) = RealLine::from_vector(v) {
            return Ok(line);
        }
    }
}

/// Normalized vector of `d` independent circular complex normals.
pub fn sample_uniform_complex(d: usize, rng: &mut SeededRng) -> Result<ComplexLine> {
    check_dim(d)?;
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(line) = ComplexLine::from_vector(v) {
            return Ok(line);
        }
    }
}

impl GrassmannLine for RealLine {
    fn dim(&self) -> usize {
        self.v.len()
    }

    fn chordal_distance(&self, other: &Self) -> Result<f64> {
        chordal_distance_real(self, other)
    }

    fn overlap(&self, other: &Self) -> f64 {
        real_overlap(self, other)
    }

    fn sample_uniform(dim: usize, rng: &mut SeededRng) -> Result<Self> {
        sample_uniform_real(dim, rng)
    }

    fn to_text(&self) -> String {
        crate::textio::format_real(&self.v)
    }
}

impl GrassmannLine for ComplexLine {
    fn dim(&self) -> usize {
        self.v.len()
    }

    fn chordal_distance(&self, other: &Self) -> Result<f64> {
        chordal_distance_complex(self, other)
    }

    fn overlap(&self, other: &Self) -> f64 {
        complex_overlap(self, other)
    }

    fn sample_uniform(dim: usize, rng: &mut SeededRng) -> Result<Self> {
        sample_uniform_complex(dim, rng)
    }

    fn to_text(&self) -> String {
        crate::textio::format_complex(&self.v)
    }
}
