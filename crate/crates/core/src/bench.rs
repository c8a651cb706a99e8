//! Monte Carlo distortion estimates, KS uniformity checks and CSV sweeps.
//!
//! Sample `i` of a run with seed `s` is drawn from stream `(s, i)`, and
//! per-sample errors are reduced by fixed-order pairwise summation, so a
//! report depends only on its inputs and never on the thread count.

use rayon::prelude::*;

use crate::baselines::distortion_bounds;
use crate::compander::{complex_map, ratio_to_gaussian, real_map};
use crate::line::{ComplexLine, GrassmannLine, RealLine};
use crate::quantizer::{
    cell_index_complex, cell_index_real, real_representative, CubeSplit, QuantizerConfig, Scheme,
};
use crate::rng::SeededRng;
use crate::{Error, Result};

/// Fewest samples accepted by the uniformity harness.
pub const MIN_KS_SAMPLES: usize = 100;

/// Asymptotic one-sample KS critical value at α = 0.01 is `1.628 / sqrt(n)`.
pub const KS_CRITICAL_001: f64 = 1.628;

pub const CSV_HEADER: &str =
    "scheme,D,total_bits,bits_per_dim,samples,distortion,distortion_db,stderr,lower_bound,upper_bound,seed";

/// A quantizer the harness can evaluate. Implementations must be pure.
pub trait Quantizer<L>: Sync {
    fn label(&self) -> String;
    fn dim(&self) -> usize;
    fn total_bits(&self) -> u64;
    fn quantize(&self, x: &L) -> Result<L>;

    fn bits_per_dim(&self) -> f64 {
        self.total_bits() as f64 / self.dim() as f64
    }
}

impl Quantizer<RealLine> for CubeSplit {
    fn label(&self) -> String {
        self.config().scheme().label().into()
    }

    fn dim(&self) -> usize {
        self.config().dim()
    }

    fn total_bits(&self) -> u64 {
        self.config().total_bits()
    }

    fn quantize(&self, x: &RealLine) -> Result<RealLine> {
        self.decode_real(&self.encode_real(x)?)
    }
}

impl Quantizer<ComplexLine> for CubeSplit {
    fn label(&self) -> String {
        self.config().scheme().label().into()
    }

    fn dim(&self) -> usize {
        self.config().dim()
    }

    fn total_bits(&self) -> u64 {
        self.config().total_bits()
    }

    fn quantize(&self, x: &ComplexLine) -> Result<ComplexLine> {
        self.decode_complex(&self.encode_complex(x)?)
    }
}

/// Summation by recursive halving in a fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorStats {
    pub samples: usize,
    /// Mean squared chordal error.
    pub mean: f64,
    /// Standard error of `mean` from the sample variance.
    pub stderr: f64,
}

/// Mean and standard error of `d_C(x, f(x))^2` over `n` uniform lines.
pub fn squared_error_stats<L, F>(dim: usize, n: usize, seed: u64, f: F) -> Result<ErrorStats>
where
    L: GrassmannLine,
    F: Fn(&L) -> Result<L> + Sync,
{
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let errors = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i);
            let x = L::sample_uniform(dim, &mut rng)?;
            let d = x.chordal_distance(&f(&x)?)?;
            Ok(d * d)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = pairwise_sum(&errors) / n as f64;
    let stderr = if n > 1 {
        let centered: Vec<f64> = errors.iter().map(|e| (e - mean) * (e - mean)).collect();
        (pairwise_sum(&centered) / (n - 1) as f64 / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(ErrorStats {
        samples: n,
        mean,
        stderr,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionReport {
    pub scheme: String,
    pub dim: usize,
    pub total_bits: u64,
    pub bits_per_dim: f64,
    pub samples: usize,
    pub distortion: f64,
    pub distortion_db: f64,
    pub stderr: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub seed: u64,
}

impl DistortionReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.scheme,
            self.dim,
            self.total_bits,
            self.bits_per_dim,
            self.samples,
            self.distortion,
            self.distortion_db,
            self.stderr,
            self.lower_bound,
            self.upper_bound,
            self.seed
        )
    }
}

/// Header line plus one row per report, each newline-terminated.
pub fn to_csv(reports: &[DistortionReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn to_db(distortion: f64) -> f64 {
    10.0 * distortion.log10()
}

/// Monte Carlo estimate of the mean squared chordal error of `q`, with rate
/// and the high-resolution bounds for `(d = dim, B = total_bits)`.
pub fn estimate_distortion<L, Q>(q: &Q, n: usize, seed: u64) -> Result<DistortionReport>
where
    L: GrassmannLine,
    Q: Quantizer<L> + ?Sized,
{
    let stats = squared_error_stats::<L, _>(q.dim(), n, seed, |x| q.quantize(x))?;
    let bounds = distortion_bounds(q.dim(), q.total_bits().max(1))?;
    Ok(DistortionReport {
        scheme: q.label(),
        dim: q.dim(),
        total_bits: q.total_bits(),
        bits_per_dim: q.bits_per_dim(),
        samples: n,
        distortion: stats.mean,
        distortion_db: to_db(stats.mean),
        stderr: stats.stderr,
        lower_bound: bounds.lower,
        upper_bound: bounds.upper,
        seed,
    })
}

/// Distortion report of one cube-split configuration, sampling real or
/// complex lines according to its scheme.
pub fn estimate_config(cfg: &QuantizerConfig, n: usize, seed: u64) -> Result<DistortionReport> {
    let q = CubeSplit::new(cfg.clone());
    match cfg.scheme() {
        Scheme::Real => estimate_distortion::<RealLine, _>(&q, n, seed),
        Scheme::ComplexScheme1 | Scheme::ComplexScheme2 => {
            estimate_distortion::<ComplexLine, _>(&q, n, seed)
        }
    }
}

/// One CSV row per configuration, in the given order.
pub fn sweep(configs: &[QuantizerConfig], n: usize, seed: u64) -> Result<String> {
    let reports = configs
        .iter()
        .map(|cfg| estimate_config(cfg, n, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(to_csv(&reports))
}

/// Least-squares slope of `log2(distortion)` against total bits.
pub fn log2_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.log2()).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.log2() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsReport {
    /// 1-based coordinate the samples came from.
    pub coordinate: usize,
    pub n: usize,
    pub statistic: f64,
    pub critical_001: f64,
}

impl KsReport {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_001
    }
}

/// One-sample KS statistic of `samples` against `cdf`:
/// `sup_i max(i/n - F(s_i), F(s_i) - (i-1)/n)` over the sorted sample.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let f = cdf(s);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// KS test of `samples` against Uniform[0, 1].
pub fn ks_uniformity(coordinate: usize, samples: &[f64]) -> KsReport {
    ks_against(coordinate, samples, |s| s.clamp(0.0, 1.0))
}

pub fn ks_against(coordinate: usize, samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsReport {
    let n = samples.len();
    KsReport {
        coordinate,
        n,
        statistic: ks_statistic(samples, cdf),
        critical_001: KS_CRITICAL_001 / (n as f64).sqrt(),
    }
}

fn check_ks_samples(n: usize) -> Result<()> {
    if n < MIN_KS_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "{n} samples is too few for a KS test (need at least {MIN_KS_SAMPLES})"
        )));
    }
    Ok(())
}

/// Companded coordinates of `n` uniform lines, each mapped in its own cell,
/// returned column-wise.
pub fn companded_columns(scheme: Scheme, dim: usize, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let rows = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i);
            let coords = match scheme {
                Scheme::Real => {
                    let y = RealLine::sample_uniform(dim, &mut rng)?;
                    real_map(&y, cell_index_real(&y))?
                }
                Scheme::ComplexScheme1 => {
                    let x = ComplexLine::sample_uniform(dim, &mut rng)?;
                    let y = real_representative(&x);
                    real_map(&y, cell_index_real(&y))?
                }
                Scheme::ComplexScheme2 => {
                    let x = ComplexLine::sample_uniform(dim, &mut rng)?;
                    complex_map(&x, cell_index_complex(&x))?
                }
            };
            Ok(coords.into_vec())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(transpose(rows, scheme.coord_count(dim)))
}

fn transpose(rows: Vec<Vec<f64>>, width: usize) -> Vec<Vec<f64>> {
    let mut cols = vec![Vec::with_capacity(rows.len()); width];
    for row in rows {
        for (col, v) in cols.iter_mut().zip(row) {
            col.push(v);
        }
    }
    cols
}

/// Per-coordinate KS test of the companded coordinates against Uniform[0, 1].
pub fn uniformity_report(scheme: Scheme, dim: usize, n: usize, seed: u64) -> Result<Vec<KsReport>> {
    check_ks_samples(n)?;
    let cols = companded_columns(scheme, dim, n, seed)?;
    Ok(cols
        .iter()
        .enumerate()
        .map(|(k, col)| ks_uniformity(k + 1, col))
        .collect())
}

/// CDF of `|t|^2` for a uniform complex line inside its cell: `2x / (x + 1)`.
pub fn truncated_fisher22_cdf(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    2.0 * x / (x + 1.0)
}

/// Rayleigh CDF with unit scale: `1 - e^{-r^2/2}`.
pub fn rayleigh_cdf(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        -(-0.5 * r * r).exp_m1()
    }
}

/// Per-coordinate KS tests of the intermediate laws of the complex
/// compander: `|t_i|^2` against [`truncated_fisher22_cdf`] and `|w_i|`
/// against [`rayleigh_cdf`].
pub fn complex_intermediate_report(
    dim: usize,
    n: usize,
    seed: u64,
) -> Result<Vec<(KsReport, KsReport)>> {
    check_ks_samples(n)?;
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let rows = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i);
            let x = ComplexLine::sample_uniform(dim, &mut rng)?;
            let cell = cell_index_complex(&x);
            let v = x.as_slice();
            let pivot = v[cell.get() - 1];
            let mut row = Vec::with_capacity(2 * dim - 2);
            for (j, z) in v.iter().enumerate() {
                if j + 1 == cell.get() {
                    continue;
                }
                let t = z / pivot;
                row.push(t.norm_sqr());
                row.push(ratio_to_gaussian(t).norm());
            }
            Ok(row)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let cols = transpose(rows, 2 * dim - 2);
    Ok(cols
        .chunks(2)
        .enumerate()
        .map(|(k, pair)| {
            (
                ks_against(k + 1, &pair[0], truncated_fisher22_cdf),
                ks_against(k + 1, &pair[1], rayleigh_cdf),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{Codebook, CodebookQuantizer};

    struct Identity(usize);

    impl Quantizer<ComplexLine> for Identity {
        fn label(&self) -> String {
            "identity".into()
        }
        fn dim(&self) -> usize {
            self.0
        }
        fn total_bits(&self) -> u64 {
            64
        }
        fn quantize(&self, x: &ComplexLine) -> Result<ComplexLine> {
            Ok(x.clone())
        }
    }

    #[test]
    fn identity_has_zero_distortion() {
        let r = estimate_distortion(&Identity(4), 1000, 1).unwrap();
        assert!(r.distortion < 1e-14);
        assert!(r.stderr < 1e-14);
        assert_eq!(r.bits_per_dim, 16.0);
    }

    #[test]
    fn single_codeword_gives_one_half() {
        // |x_1|^2 ~ Uniform[0, 1] for D = 2, so E[1 - |x_1|^2] = 1/2
        let cb = Codebook::new(vec![ComplexLine::basis(2, 1).unwrap()]).unwrap();
        let q = CodebookQuantizer::new(cb, "single");
        let r = estimate_distortion(&q, 100_000, 9).unwrap();
        assert!((r.distortion - 0.5).abs() < 3.0 * r.stderr, "{r:?}");
        assert!(r.stderr > 0.0);
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let cfg = QuantizerConfig::uniform(Scheme::ComplexScheme2, 4, 3).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sweep(std::slice::from_ref(&cfg), 3000, 17).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one, run(8));
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(estimate_distortion(&Identity(3), 0, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        assert_eq!(sweep(&[], 10, 0).unwrap(), format!("{CSV_HEADER}\n"));
        let cfgs = vec![
            QuantizerConfig::uniform(Scheme::ComplexScheme2, 3, 2).unwrap(),
            QuantizerConfig::uniform(Scheme::ComplexScheme2, 3, 2).unwrap(),
            QuantizerConfig::uniform(Scheme::Real, 3, 3).unwrap(),
        ];
        let csv = sweep(&cfgs, 500, 5).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(csv.ends_with('\n'));
        assert_eq!(lines[1], lines[2]);
        let fields: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(fields.len(), 11);
        assert_eq!(fields[0], "real");
        assert_eq!(fields[1], "3");
        assert_eq!(fields[2], "8");
        let distortion: f64 = fields[5].parse().unwrap();
        let lower: f64 = fields[8].parse().unwrap();
        let upper: f64 = fields[9].parse().unwrap();
        assert!((0.0..=1.0).contains(&distortion));
        assert!(lower <= upper);
        // 17 significant digits in every decimal column
        let mantissa = fields[5].split('e').next().unwrap();
        assert_eq!(mantissa.replace(['.', '-'], "").len(), 17);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let xs: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 50_005_000.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn ks_examples() {
        let n = 1000;
        let grid: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let r = ks_uniformity(1, &grid);
        assert!((r.statistic - 1.0 / (2.0 * n as f64)).abs() < 1e-15);
        assert!((r.critical_001 - 1.628 / (n as f64).sqrt()).abs() < 1e-15);

        let zeros = vec![0.0; 50];
        assert_eq!(ks_uniformity(1, &zeros).statistic, 1.0);
    }

    #[test]
    fn ks_on_uniform_draws() {
        use rand::Rng;
        let mut rng = SeededRng::new(31, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let r = ks_uniformity(1, &xs);
        assert!(r.statistic < 0.005_15, "{r:?}");
        assert!(r.passes());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|k| {
                (
                    10.0 + 6.0 * k as f64,
                    (-(10.0 + 6.0 * k as f64) / 3.0).exp2(),
                )
            })
            .collect();
        assert!((log2_slope(&pts) + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_cells_are_exactly_uniform() {
        // With a single local coordinate the cell condition is one-dimensional
        // and the companders are exact CDF transforms. Six tests run here, so
        // each uses the α = 0.001 critical value 1.949/sqrt(n).
        let n = 100_000;
        let critical = 1.949 / (n as f64).sqrt();
        for scheme in [Scheme::Real, Scheme::ComplexScheme2] {
            for r in uniformity_report(scheme, 2, n, 123).unwrap() {
                assert!(r.statistic < critical, "{scheme}: {r:?}");
            }
        }
        for (fisher, rayleigh) in complex_intermediate_report(2, n, 321).unwrap() {
            assert!(fisher.statistic < critical, "{fisher:?}");
            assert!(rayleigh.statistic < critical, "{rayleigh:?}");
        }
    }

    #[test]
    fn larger_cells_are_not_uniform() {
        // in higher dimensions the joint cell condition tilts the marginals
        let r = uniformity_report(Scheme::ComplexScheme2, 4, 20_000, 5).unwrap();
        assert!(r.iter().all(|k| !k.passes()), "{r:?}");
    }

    #[test]
    fn underpowered_ks_rejected() {
        assert!(uniformity_report(Scheme::ComplexScheme2, 4, 99, 0).is_err());
        assert!(complex_intermediate_report(4, 10, 0).is_err());
    }
}
