//! Bijections between a coarse cell and the unit cube.
//!
//! A line in cell `i*` (its largest-modulus component sits at index `i*`) is
//! described by the ratios `t_j = y_j / y_{i*}`, all of modulus at most one.
//! The real compander sends each ratio through the truncated Cauchy CDF,
//! `a = (2/π)·atan(t) + 1/2`. The complex compander maps each ratio to a
//! complex Gaussian `w` (Rayleigh modulus, same phase) and then takes the
//! normal CDF of its real and imaginary parts.

mod normal;

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use num_complex::Complex64;

pub use normal::{std_normal_cdf, std_normal_cdf_inv};

use crate::line::{ComplexLine, RealLine};
use crate::{Error, Result};

/// Slack on `|t| <= 1` accepted before a point is declared outside its cell.
pub const CELL_TOL: f64 = 1e-12;

/// Largest ratio modulus fed to the complex compander; keeps `w` finite.
const MAX_COMPLEX_RATIO: f64 = 1.0 - 1e-15;

/// 1-based index of a coarse cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex(usize);

impl CellIndex {
    pub fn new(index: usize, cells: usize) -> Result<Self> {
        if index == 0 || index > cells {
            return Err(Error::CellOutOfRange { index, cells });
        }
        Ok(CellIndex(index))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub(crate) fn offset(self) -> usize {
        self.0 - 1
    }
}

/// Companded local coordinates in `[0, 1]^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeCoords(Vec<f64>);

impl CubeCoords {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::CoordinateOutOfRange(bad));
        }
        Ok(CubeCoords(a))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_open(&self) -> Result<()> {
        match self.0.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
            Some(&bad) => Err(Error::CoordinateOutOfRange(bad)),
            None => Ok(()),
        }
    }
}

fn check_cell(cell: CellIndex, dim: usize) -> Result<()> {
    if cell.get() > dim {
        return Err(Error::CellOutOfRange {
            index: cell.get(),
            cells: dim,
        });
    }
    Ok(())
}

fn check_len(a: &CubeCoords, expected: usize) -> Result<()> {
    if a.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: a.len(),
        });
    }
    Ok(())
}

/// Companded coordinates of `y` inside cell `cell`.
pub fn real_map(y: &RealLine, cell: CellIndex) -> Result<CubeCoords> {
    let v = y.as_slice();
    check_cell(cell, v.len())?;
    let pivot = v[cell.offset()];
    if pivot == 0.0 {
        return Err(Error::OutsideCell {
            cell: cell.get(),
            ratio: f64::INFINITY,
        });
    }
    let mut a = Vec::with_capacity(v.len() - 1);
    for (j, &yj) in v.iter().enumerate() {
        if j == cell.offset() {
            continue;
        }
        let t = yj / pivot;
        if t.abs() > 1.0 + CELL_TOL {
            return Err(Error::OutsideCell {
                cell: cell.get(),
                ratio: t.abs(),
            });
        }
        a.push(FRAC_2_PI * t.clamp(-1.0, 1.0).atan() + 0.5);
    }
    Ok(CubeCoords(a))
}

/// Line of dimension `d` whose companded coordinates in `cell` are `a`.
///
/// The result lies strictly inside the cell: every `|u_i| < 1`.
pub fn real_unmap(a: &CubeCoords, cell: CellIndex, d: usize) -> Result<RealLine> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    check_cell(cell, d)?;
    check_len(a, d - 1)?;
    a.check_open()?;
    let mut v = Vec::with_capacity(d);
    v.extend(a.0.iter().map(|&ai| (FRAC_PI_2 * (ai - 0.5)).tan()));
    v.insert(cell.offset(), 1.0);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    RealLine::new(v)
}

/// Complex Gaussian image of a local coordinate `t` with `|t| <= 1`.
///
/// `|w|^2 = 2·ln((1 + |t|^2) / (1 - |t|^2))`, phase of `t`; `w = 0` at `t = 0`.
pub(crate) fn ratio_to_gaussian(t: Complex64) -> Complex64 {
    let r = t.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let rc = r.min(MAX_COMPLEX_RATIO);
    let s = rc * rc;
    let log_ratio = if rc > 0.9 {
        s.ln_1p() - ((1.0 - rc) * (1.0 + rc)).ln()
    } else {
        s.ln_1p() - (-s).ln_1p()
    };
    let magnitude = (2.0 * log_ratio).sqrt();
    t * (magnitude / r)
}

/// Inverse of [`ratio_to_gaussian`]: `|z| = sqrt((1 - e^{-|w|^2/2}) / (1 + e^{-|w|^2/2}))`,
/// evaluated as `sqrt(tanh(|w|^2 / 4))`.
pub(crate) fn gaussian_to_ratio(w: Complex64) -> Complex64 {
    let m2 = w.norm_sqr();
    if m2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    w * ((0.25 * m2).tanh().sqrt() / m2.sqrt())
}

/// Companded coordinates of `x` inside complex cell `cell`, laid out as
/// `(Re w_1, Im w_1, Re w_2, ...)` through the normal CDF.
pub fn complex_map(x: &ComplexLine, cell: CellIndex) -> Result<CubeCoords> {
    let v = x.as_slice();
    check_cell(cell, v.len())?;
    let pivot = v[cell.offset()];
    if pivot.norm_sqr() == 0.0 {
        return Err(Error::OutsideCell {
            cell: cell.get(),
            ratio: f64::INFINITY,
        });
    }
    let inv_pivot = pivot.inv();
    let mut a = Vec::with_capacity(2 * v.len() - 2);
    for (j, &xj) in v.iter().enumerate() {
        if j == cell.offset() {
            continue;
        }
        let t = xj * inv_pivot;
        let r = t.norm();
        if r > 1.0 + CELL_TOL {
            return Err(Error::OutsideCell {
                cell: cell.get(),
                ratio: r,
            });
        }
        let w = ratio_to_gaussian(t);
        a.push(std_normal_cdf(w.re));
        a.push(std_normal_cdf(w.im));
    }
    Ok(CubeCoords(a))
}

/// Complex line of dimension `d` whose companded coordinates in `cell` are `a`.
pub fn complex_unmap(a: &CubeCoords, cell: CellIndex, d: usize) -> Result<ComplexLine> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    check_cell(cell, d)?;
    check_len(a, 2 * d - 2)?;
    a.check_open()?;
    let mut v = Vec::with_capacity(d);
    v.extend(a.0.chunks_exact(2).map(|pair| {
        let w = Complex64::new(
            normal::inv_unchecked(pair[0]),
            normal::inv_unchecked(pair[1]),
        );
        gaussian_to_ratio(w)
    }));
    v.insert(cell.offset(), Complex64::new(1.0, 0.0));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    ComplexLine::new(v)
}
