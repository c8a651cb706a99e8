//! Reference quantizers and distortion bounds.
//!
//! [`exhaustive_encode`] is the brute-force nearest-codeword search that every
//! structured quantizer approximates. The Fourier and scalar quantizers are
//! the low-complexity competitors; [`distortion_bounds`] gives the
//! high-resolution sandwich on the best achievable distortion with `2^B`
//! codewords.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::bench::Quantizer;
use crate::line::{ComplexLine, GrassmannLine};
use crate::rng::SeededRng;
use crate::{Error, Result};

/// Non-empty list of lines of one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Codebook<L> {
    entries: Vec<L>,
}

impl<L: GrassmannLine> Codebook<L> {
    pub fn new(entries: Vec<L>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyCodebook)?;
        let dim = first.dim();
        if let Some(bad) = entries.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: bad.dim(),
            });
        }
        Ok(Codebook { entries })
    }

    pub fn entries(&self) -> &[L] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].dim()
    }

    /// One codeword per line in the vector text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_text());
            out.push('\n');
        }
        out
    }
}

/// Index (0-based) of the codeword nearest to `x` in chordal distance,
/// lowest index on ties.
pub fn exhaustive_encode<L: GrassmannLine>(x: &L, cb: &Codebook<L>) -> Result<usize> {
    if x.dim() != cb.dim() {
        return Err(Error::DimensionMismatch {
            expected: cb.dim(),
            actual: x.dim(),
        });
    }
    let mut best = 0;
    let mut best_gap = f64::INFINITY;
    for (i, e) in cb.entries.iter().enumerate() {
        // squared chordal distance, clamped like the distance itself
        let gap = (1.0 - x.overlap(e)).max(0.0);
        if gap < best_gap {
            best = i;
            best_gap = gap;
        }
    }
    Ok(best)
}

/// DFT family: entry `n` has components `e^{i 2π k n / N} / sqrt(D)`.
pub fn fourier_codebook(dim: usize, size: usize) -> Result<Codebook<ComplexLine>> {
    if size < 1 {
        return Err(Error::EmptyCodebook);
    }
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let entries = (0..size)
        .map(|n| {
            let v = (0..dim)
                .map(|k| {
                    // reduce k·n mod N first so the angle stays accurate
                    let m = (k as u128 * n as u128 % size as u128) as f64;
                    Complex64::from_polar(scale, TAU * m / size as f64)
                })
                .collect();
            ComplexLine::from_vector(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Codebook::new(entries)
}

/// `N` independent uniform lines.
pub fn random_codebook<L: GrassmannLine>(
    dim: usize,
    size: usize,
    rng: &mut SeededRng,
) -> Result<Codebook<L>> {
    let entries = (0..size)
        .map(|_| L::sample_uniform(dim, rng))
        .collect::<Result<Vec<_>>>()?;
    Codebook::new(entries)
}

/// Nearest-codeword quantizer over an explicit codebook.
#[derive(Clone, Debug)]
pub struct CodebookQuantizer<L> {
    codebook: Codebook<L>,
    label: String,
}

impl<L: GrassmannLine> CodebookQuantizer<L> {
    pub fn new(codebook: Codebook<L>, label: impl Into<String>) -> Self {
        CodebookQuantizer {
            codebook,
            label: label.into(),
        }
    }

    pub fn codebook(&self) -> &Codebook<L> {
        &self.codebook
    }
}

impl<L: GrassmannLine> Quantizer<L> for CodebookQuantizer<L> {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn dim(&self) -> usize {
        self.codebook.dim()
    }

    /// `ceil(log2 N)`.
    fn total_bits(&self) -> u64 {
        self.codebook.len().next_power_of_two().trailing_zeros() as u64
    }

    fn quantize(&self, x: &L) -> Result<L> {
        let i = exhaustive_encode(x, &self.codebook)?;
        Ok(self.codebook.entries[i].clone())
    }
}

/// Phase-normalized per-component uniform quantizer.
///
/// The line is rotated so `x_1` is real and non-negative, then each of the
/// `2D - 1` free real components is quantized over `[-1, 1]` with
/// `bits_per_component` bits and reconstructed at its cell midpoint.
pub fn scalar_baseline(x: &ComplexLine, bits_per_component: u32) -> Result<ComplexLine> {
    if !(1..=52).contains(&bits_per_component) {
        return Err(Error::InvalidArgument(format!(
            "scalar baseline needs 1..=52 bits per component, got {bits_per_component}"
        )));
    }
    let v = x.as_slice();
    let r1 = v[0].norm();
    let rot = if r1 == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        v[0].conj() / r1
    };
    let levels = (1u64 << bits_per_component) as f64;
    let q = |t: f64| -> f64 {
        let n = ((t.clamp(-1.0, 1.0) + 1.0) * 0.5 * levels)
            .floor()
            .min(levels - 1.0);
        -1.0 + (n + 0.5) * 2.0 / levels
    };
    let mut out = Vec::with_capacity(v.len());
    out.push(Complex64::new(q(r1), 0.0));
    out.extend(v[1..].iter().map(|z| {
        let r = z * rot;
        Complex64::new(q(r.re), q(r.im))
    }));
    ComplexLine::from_vector(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarQuantizer {
    dim: usize,
    bits_per_component: u32,
}

impl ScalarQuantizer {
    pub fn new(dim: usize, bits_per_component: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if !(1..=52).contains(&bits_per_component) {
            return Err(Error::InvalidArgument(format!(
                "scalar baseline needs 1..=52 bits per component, got {bits_per_component}"
            )));
        }
        Ok(ScalarQuantizer {
            dim,
            bits_per_component,
        })
    }
}

impl Quantizer<ComplexLine> for ScalarQuantizer {
    fn label(&self) -> String {
        "scalar".into()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn total_bits(&self) -> u64 {
        (2 * self.dim as u64 - 1) * self.bits_per_component as u64
    }

    fn quantize(&self, x: &ComplexLine) -> Result<ComplexLine> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        scalar_baseline(x, self.bits_per_component)
    }
}

/// Closest line on the continuous Fourier curve `θ ↦ (e^{ikθ})_k / sqrt(D)`.
///
/// Every Fourier codebook is a finite subset of this curve, so the distortion
/// of this map is a lower bound on the distortion of a Fourier codebook of
/// any size. It stands in for codebooks too large to search exhaustively.
pub fn fourier_envelope(x: &ComplexLine) -> ComplexLine {
    let v = x.as_slice();
    let d = v.len();
    // |Σ_k x_k e^{-ikθ}|^2, a trigonometric polynomial of degree d - 1
    let power = |theta: f64| -> f64 {
        v.iter()
            .enumerate()
            .map(|(k, z)| z * Complex64::from_polar(1.0, -(k as f64) * theta))
            .sum::<Complex64>()
            .norm_sqr()
    };
    let grid = (32 * d).max(64);
    let step = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|j| power(j as f64 * step)).collect();

    let mut best_theta = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for j in 0..grid {
        let prev = values[(j + grid - 1) % grid];
        let next = values[(j + 1) % grid];
        if values[j] < prev || values[j] < next {
            continue;
        }
        let (theta, val) = golden_max(&power, (j as f64 - 1.0) * step, (j as f64 + 1.0) * step);
        if val > best_val {
            best_val = val;
            best_theta = theta;
        }
    }
    let scale = 1.0 / (d as f64).sqrt();
    let out = (0..d)
        .map(|k| Complex64::from_polar(scale, k as f64 * best_theta))
        .collect();
    ComplexLine::from_vector(out).expect("unit-modulus entries")
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-12 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid.rem_euclid(2.0 * PI), f(mid))
}

/// High-resolution bounds on the best distortion with `2^B` codewords.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsResult {
    pub lower: f64,
    pub upper: f64,
    pub d: usize,
    pub total_bits: u64,
}

/// `((d-1)/d)·2^{-B/(d-1)} <= D* <= Γ(d/(d-1))·2^{-B/(d-1)}`.
///
/// For complex sources `d` is the complex dimension `D`.
pub fn distortion_bounds(d: usize, total_bits: u64) -> Result<BoundsResult> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if total_bits < 1 {
        return Err(Error::InvalidArgument(
            "bounds need at least one bit".into(),
        ));
    }
    let df = d as f64;
    let scale = (-(total_bits as f64) / (df - 1.0)).exp2();
    Ok(BoundsResult {
        lower: (df - 1.0) / df * scale,
        upper: libm::tgamma(df / (df - 1.0)) * scale,
        d,
        total_bits,
    })
}
