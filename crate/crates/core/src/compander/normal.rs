//! Standard normal CDF and its inverse.
//!
//! The forward CDF goes through `erfc`, accurate in both tails. The inverse
//! starts from Acklam's rational approximation (relative error about 1e-9)
//! and applies one Halley step against the forward CDF, which brings it to
//! near machine precision.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{Error, Result};

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub fn std_normal_cdf_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(inv_unchecked(p))
}

/// Caller guarantees `0 < p < 1`.
pub(crate) fn inv_unchecked(p: f64) -> f64 {
    // Work in the lower tail where `p` carries full relative precision;
    // `1 - p` is exact for p >= 0.5.
    if p > 0.5 {
        -lower_tail_inv(1.0 - p)
    } else {
        lower_tail_inv(p)
    }
}

fn lower_tail_inv(p: f64) -> f64 {
    let x = acklam(p);
    if x == 0.0 {
        return 0.0;
    }
    let e = std_normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    if p == 0.5 {
        return 0.0;
    }
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson integration of the standard normal density from 0
    /// to `x`, added to 1/2.
    fn quadrature_cdf(x: f64) -> f64 {
        let n = 20_000;
        let h = x / n as f64;
        let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
        let mut s = pdf(0.0) + pdf(x);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * pdf(k as f64 * h);
        }
        0.5 + s * h / 3.0
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.0) - 0.841_344_746_1).abs() < 1e-9);
        assert!((std_normal_cdf(1.0) - quadrature_cdf(1.0)).abs() < 1e-12);
    }

    #[test]
    fn cdf_matches_quadrature_on_grid() {
        let mut x = -8.0;
        while x <= 8.0 {
            let err = (std_normal_cdf(x) - quadrature_cdf(x)).abs();
            assert!(err <= 1e-9, "x = {x}: err {err}");
            x += 0.125;
        }
    }

    #[test]
    fn cdf_symmetry() {
        for k in 0..200 {
            let x = k as f64 * 0.04;
            assert!((std_normal_cdf(x) + std_normal_cdf(-x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let mut x = -6.0;
        while x <= 6.0 {
            let back = std_normal_cdf_inv(std_normal_cdf(x)).unwrap();
            assert!((back - x).abs() < 1e-7, "x = {x}: back {back}");
            x += 0.01;
        }
    }

    #[test]
    fn inverse_matches_quadrature_quantiles() {
        // the quadrature CDF evaluated at x must map back to x
        for &x in &[-7.5, -5.0, -2.5, -1.0, -0.3, 0.0, 0.42, 1.0, 2.0, 3.3, 5.5] {
            let p = quadrature_cdf(x);
            if p >= 1.0 {
                continue;
            }
            let q = std_normal_cdf_inv(p).unwrap();
            assert!((std_normal_cdf(q) - p).abs() <= 1e-9, "x = {x}");
            if x.abs() <= 6.0 {
                assert!((q - x).abs() < 1e-7, "x = {x}: q = {q}");
            }
        }
    }

    #[test]
    fn inverse_rejects_endpoints() {
        assert!(std_normal_cdf_inv(0.0).is_err());
        assert!(std_normal_cdf_inv(1.0).is_err());
        assert!(std_normal_cdf_inv(-0.1).is_err());
        assert!(std_normal_cdf_inv(f64::NAN).is_err());
        assert_eq!(std_normal_cdf_inv(0.5).unwrap(), 0.0);
    }

    #[test]
    fn inverse_is_antisymmetric() {
        for k in 1..100 {
            let p = k as f64 / 200.0;
            let lo = std_normal_cdf_inv(p).unwrap();
            let hi = std_normal_cdf_inv(1.0 - p).unwrap();
            assert!((lo + hi).abs() < 1e-12);
        }
    }
}
