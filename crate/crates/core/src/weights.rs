//! Edge weighting for clique merges and the calibrated projection cost
//! model behind the estimated variant.
//!
//! A weighting function maps a clique pair to the modeled per-iteration
//! saving of merging it; positive means the merge is modeled as beneficial.
//! The nominal weight treats projection as pure cubic work. The estimated
//! weight uses `t_proj(N) = a*N^3 + b*N^2` with coefficients fitted by least
//! squares against measured projection times on this machine.

use std::path::Path;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{sym_eigen, Matrix};
use crate::vset;

/// Coefficients of the projection-time polynomial `t_proj(N) = a*N^3 + b*N^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub a: f64,
    pub b: f64,
}

impl CostModel {
    /// Pure cubic model; the estimated weight degenerates to the nominal one.
    pub const NOMINAL: CostModel = CostModel { a: 1.0, b: 0.0 };

    pub fn projection_time(&self, n: usize) -> f64 {
        let n = n as f64;
        self.a * n * n * n + self.b * n * n
    }
}

/// `|C_i|^3 + |C_j|^3 - |C_i ∪ C_j|^3`.
pub fn nominal_weight(ci: &[usize], cj: &[usize]) -> f64 {
    let cube = |n: usize| {
        let x = n as f64;
        x * x * x
    };
    cube(ci.len()) + cube(cj.len()) - cube(vset::union_len(ci, cj))
}

/// `t_proj(|C_i|) + t_proj(|C_j|) - t_proj(|C_i ∪ C_j|)` for the given model.
pub fn estimated_weight(ci: &[usize], cj: &[usize], model: &CostModel) -> f64 {
    model.projection_time(ci.len()) + model.projection_time(cj.len())
        - model.projection_time(vset::union_len(ci, cj))
}

/// Nearest positive semidefinite matrix in Frobenius norm: symmetrize,
/// eigendecompose, clamp negative eigenvalues to zero, reassemble.
pub fn psd_project(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "projection input must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "projection input has non-finite entries".into(),
        ));
    }
    let sym = m.symmetrized();
    let (vals, v) = sym_eigen(&sym);
    let n = sym.rows();
    let mut out = Matrix::zeros(n, n);
    for (k, &val) in vals.iter().enumerate() {
        let lambda = val.max(0.0);
        if lambda == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v.get(i, k);
            if vik == 0.0 {
                continue;
            }
            for j in 0..n {
                out.add_to(i, j, lambda * vik * v.get(j, k));
            }
        }
    }
    Ok(out.symmetrized())
}

/// One measured projection timing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingSample {
    pub size: usize,
    pub time: f64,
}

/// Default calibration grid.
pub const DEFAULT_CALIBRATION_SIZES: [usize; 6] = [16, 32, 64, 128, 256, 512];

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random_range(-1.0..1.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// Times `psd_project` on seeded random symmetric matrices.
///
/// For every size, one warm-up round is discarded and the median of the
/// remaining repetitions is recorded. Runs single-threaded by contract so
/// the samples are not skewed by contention. The seed fixes the matrix
/// inputs; the measured times naturally still vary between runs.
pub fn measure_projection_times(
    sizes: &[usize],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<TimingSample>> {
    if repetitions < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 repetitions, got {repetitions}"
        )));
    }
    if let Some(&bad) = sizes.iter().find(|&&s| s < 2) {
        return Err(Error::InvalidInput(format!(
            "calibration sizes must be at least 2, got {bad}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut times = Vec::with_capacity(repetitions);
        for rep in 0..=repetitions {
            let m = random_symmetric(n, &mut rng);
            let start = Instant::now();
            let _ = psd_project(&m)?;
            let elapsed = start.elapsed().as_secs_f64();
            if rep > 0 {
                times.push(elapsed);
            }
        }
        times.sort_by(f64::total_cmp);
        let median = if times.len() % 2 == 1 {
            times[times.len() / 2]
        } else {
            0.5 * (times[times.len() / 2 - 1] + times[times.len() / 2])
        };
        samples.push(TimingSample {
            size: n,
            time: median,
        });
    }
    Ok(samples)
}

/// Result of fitting the cost model: the coefficients, the l2 residual of
/// the fit, and whether the cubic coefficient had to be clamped to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModelFit {
    pub model: CostModel,
    pub residual: f64,
    pub clamped: bool,
}

/// Least-squares fit of `t = a*N^3 + b*N^2` via the 2x2 normal equations.
/// A negative `a` (possible on noisy measurements) is clamped to zero and
/// `b` refitted alone.
pub fn fit_cost_model(samples: &[TimingSample]) -> Result<CostModelFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let (mut s66, mut s55, mut s44, mut s3t, mut s2t) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for s in samples {
        let n = s.size as f64;
        let (n2, n3) = (n * n, n * n * n);
        s66 += n3 * n3;
        s55 += n3 * n2;
        s44 += n2 * n2;
        s3t += n3 * s.time;
        s2t += n2 * s.time;
    }
    let det = s66 * s44 - s55 * s55;
    if det.abs() <= f64::EPSILON * s66 * s44 {
        return Err(Error::SingularFit(
            "samples do not span two distinct sizes".into(),
        ));
    }
    let mut a = (s3t * s44 - s2t * s55) / det;
    let mut b = (s66 * s2t - s55 * s3t) / det;
    let mut clamped = false;
    if a < 0.0 {
        a = 0.0;
        b = s2t / s44;
        clamped = true;
    }
    let model = CostModel { a, b };
    let residual = samples
        .iter()
        .map(|s| {
            let r = model.projection_time(s.size) - s.time;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    Ok(CostModelFit {
        model,
        residual,
        clamped,
    })
}

/// Persisted form of a calibrated cost model.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModelFile {
    pub model: CostModel,
    pub fitted_at: String,
    pub sizes: Vec<usize>,
    pub residual: f64,
}

impl CostModelFile {
    /// Canonical key-value text form.
    pub fn to_text(&self) -> String {
        let sizes: Vec<String> = self.sizes.iter().map(usize::to_string).collect();
        format!(
            "a = {:.16e}\nb = {:.16e}\nfitted_at = {}\nsizes = {}\nresidual = {:.16e}\n",
            self.model.a,
            self.model.b,
            self.fitted_at,
            sizes.join(","),
            self.residual
        )
    }

    /// Lenient parse: whitespace-insensitive, `#` comments and unknown keys
    /// ignored, metadata lines optional. `a` and `b` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut a = None;
        let mut b = None;
        let mut fitted_at = String::new();
        let mut sizes = Vec::new();
        let mut residual = 0.0;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected 'key = value', got '{line}'"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| {
                v.parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("invalid number '{v}'"),
                })
            };
            match key {
                "a" => a = Some(parse_f64(value)?),
                "b" => b = Some(parse_f64(value)?),
                "fitted_at" => fitted_at = value.to_string(),
                "residual" => residual = parse_f64(value)?,
                "sizes" => {
                    for tok in value.split(',').filter(|t| !t.trim().is_empty()) {
                        sizes.push(tok.trim().parse::<usize>().map_err(|_| Error::Parse {
                            line: idx + 1,
                            msg: format!("invalid size '{tok}'"),
                        })?);
                    }
                }
                _ => {}
            }
        }
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::InvalidInput(
                "cost model file must define both 'a' and 'b'".into(),
            ));
        };
        Ok(Self {
            model: CostModel { a, b },
            fitted_at,
            sizes,
            residual,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
pub fn utc_timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format_utc(secs)
}

/// Formats unix seconds as ISO 8601 UTC (proleptic Gregorian).
pub fn format_utc(secs: u64) -> String {
    let days = secs / 86_400;
    let rem = secs % 86_400;
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);

    // Civil date from day count (days since 1970-01-01).
    let z = days as i64 + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { y + 1 } else { y };

    format!("{year:04}-{month:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}
