//! Zeros of `Δ` in the disk, their eigenvalues, boundary singularities and
//! limit-set diagnostics.

pub mod finder;
pub mod metrics;
pub mod oracle;

pub use finder::{find_zeros_disk, find_zeros_sector, DiskZero, FinderOptions, FinderReport, FinderZero, Sector};
pub use metrics::{cantor_endpoints, default_eps_grid, gevrey_envelope, gevrey_minimum_check, limit_set_metrics, GevreyEnvelope, PointSetMetrics};
pub use oracle::{dense_eigenvalues, dense_truncation_oracle, section_eigenvalues, tridiagonal_eigenvalues, OracleResult};

use crate::core::{golden_min, joukowski, ComplexJacobiSpec};
use crate::detkit::{det_recursion, det_truncation_ratio_auto, det_volterra, determinant_series, eval_series};
use crate::{Error, Result, C64};
use serde::Serialize;
use std::f64::consts::TAU;

/// Which evaluator of `Δ(z)` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Engine {
    /// Backward three-term recursion (exact for finite support).
    Recursion,
    /// Volterra back-substitution, valid on the closed disk.
    Volterra,
    /// Limit of section determinant ratios, open disk only.
    Ratio,
    /// Full Taylor polynomial.
    Series,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursion" => Ok(Self::Recursion),
            "volterra" => Ok(Self::Volterra),
            "ratio" => Ok(Self::Ratio),
            "series" => Ok(Self::Series),
            _ => Err(Error::Precondition(format!(
                "unknown engine `{s}` (expected recursion, volterra, ratio or series)"
            ))),
        }
    }
}

/// `z ↦ Δ(z, J)` for the chosen engine. Evaluation failures become NaN so
/// that the zero finder treats them as unstable contours.
pub fn evaluator(spec: &ComplexJacobiSpec, engine: Engine) -> Result<Box<dyn Fn(C64) -> C64 + Sync + Send>> {
    let nan = C64::new(f64::NAN, f64::NAN);
    let s = spec.clone();
    Ok(match engine {
        Engine::Recursion => Box::new(move |z| det_recursion(&s, z, -1)),
        Engine::Volterra => Box::new(move |z| det_volterra(&s, z, -1).unwrap_or(nan)),
        Engine::Ratio => Box::new(move |z| det_truncation_ratio_auto(&s, z).unwrap_or(nan)),
        Engine::Series => {
            let series = determinant_series(spec, 2 * spec.support() + 1)?;
            Box::new(move |z| eval_series(&series, z).0)
        }
    })
}

/// Zeros of `Δ` in `|z| <= radius` with their eigenvalues, plus any finder warnings.
pub fn disk_zeros(
    spec: &ComplexJacobiSpec,
    radius: f64,
    engine: Engine,
    opts: &FinderOptions,
) -> Result<(Vec<DiskZero>, Vec<String>)> {
    if spec.is_free() {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Precondition(format!("radius must lie in (0, 1), got {radius}")));
        }
        return Ok((Vec::new(), Vec::new()));
    }
    let f = evaluator(spec, engine)?;
    let report = find_zeros_disk(&*f, radius, opts)?;
    let zeros = report
        .zeros
        .iter()
        .map(|z| {
            Ok(DiskZero {
                z: z.z,
                multiplicity: z.multiplicity,
                eigenvalue: joukowski(z.z)?,
                residual: z.residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((zeros, report.warnings))
}

/// Eigenvalues `λ = (z + 1/z)/2` for the zeros with `|z| <= radius`, sorted
/// by `|Im λ|` and then `Re λ`.
pub fn discrete_spectrum(spec: &ComplexJacobiSpec, radius: f64) -> Result<Vec<(C64, usize)>> {
    let (zeros, _) = disk_zeros(spec, radius, Engine::Recursion, &FinderOptions::default())?;
    let mut out: Vec<(C64, usize)> = zeros.iter().map(|z| (z.eigenvalue, z.multiplicity)).collect();
    out.sort_by(|a, b| a.0.im.abs().total_cmp(&b.0.im.abs()).then(a.0.re.total_cmp(&b.0.re)));
    Ok(out)
}

/// Points `ζ` of the unit circle where `|Δ(ζ)| < 1e-6`.
///
/// `|Δ|` is sampled at `grid_size` equally spaced angles; every local minimum
/// is refined by golden-section search on the neighbouring grid cells.
pub fn spectral_singularities(spec: &ComplexJacobiSpec, grid_size: usize) -> Result<Vec<(C64, f64)>> {
    if grid_size < 256 {
        return Err(Error::Precondition(format!("grid_size must be at least 256, got {grid_size}")));
    }
    if spec.is_free() {
        return Ok(Vec::new());
    }
    let abs_delta = |t: f64| det_volterra(spec, C64::from_polar(1.0, t), -1).map(|d| d.norm()).unwrap_or(f64::INFINITY);
    let h = TAU / grid_size as f64;
    let vals: Vec<f64> = (0..grid_size).map(|k| abs_delta(k as f64 * h)).collect();
    let mut out: Vec<(C64, f64)> = Vec::new();
    for k in 0..grid_size {
        let prev = vals[(k + grid_size - 1) % grid_size];
        let next = vals[(k + 1) % grid_size];
        if !(vals[k] <= prev && vals[k] < next) {
            continue;
        }
        let t0 = k as f64 * h;
        let t = golden_min(abs_delta, t0 - h, t0 + h, 1e-14);
        let v = abs_delta(t);
        if v < 1e-6 {
            let zeta = C64::from_polar(1.0, t.rem_euclid(TAU));
            if !out.iter().any(|(w, _)| (w - zeta).norm() < 1e-9) {
                out.push((zeta, v));
            }
        }
    }
    out.sort_by(|a, b| a.0.arg().total_cmp(&b.0.arg()));
    Ok(out)
}
