//! Diagnostics for limit sets and for the growth of derivatives of `Δ`.

use crate::detkit::{falling, DeterminantSeries};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PointSetMetrics {
    pub points: Vec<f64>,
    /// Lengths of the bounded complementary intervals between adjacent points.
    pub gaps: Vec<f64>,
    pub tau_estimate: f64,
}

/// Grid `{0.00, 0.01, ..., 1.00}`.
pub fn default_eps_grid() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

/// Endpoints of the depth-`depth` middle-third Cantor intervals, mapped to `[-1, 1]`.
pub fn cantor_endpoints(depth: u32) -> Vec<f64> {
    let mut iv = vec![(0.0f64, 1.0f64)];
    for _ in 0..depth {
        iv = iv
            .into_iter()
            .flat_map(|(a, b)| {
                let d = (b - a) / 3.0;
                [(a, a + d), (b - d, b)]
            })
            .collect();
    }
    iv.into_iter().flat_map(|(a, b)| [2.0 * a - 1.0, 2.0 * b - 1.0]).collect()
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Gaps of a finite point set and an estimate of the convergence exponent
/// `τ = inf{ε : Σ |l_j|^ε < ∞}`.
///
/// Gaps are grouped into dyadic scale blocks `2^{-k-1} < l <= 2^{-k}`. For a
/// given `ε` the series converges when the block sums `B_k(ε) = Σ_{l in block k} l^ε`
/// decay geometrically in `k`, which is judged from the sign of the fitted
/// slope of `log B_k(ε)` against `k`. The finest occupied block is dropped
/// because a truncated set lumps its unresolved structure there. The estimate is
/// the smallest grid `ε` with non-positive slope; fewer than two usable blocks
/// means finitely many scales and gives `0`.
pub fn limit_set_metrics(points: &[f64], eps_grid: &[f64]) -> Result<PointSetMetrics> {
    if points.iter().any(|x| !(-1.0..=1.0).contains(x)) {
        return Err(Error::Precondition("points must lie in [-1, 1]".into()));
    }
    let mut pts: Vec<f64> = points.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let gaps: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    let mut grid = eps_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    if gaps.is_empty() {
        return Ok(PointSetMetrics { points: pts, gaps, tau_estimate: 0.0 });
    }
    let block = |l: f64| (-l.log2()).floor().max(0.0) as usize;
    let finest = gaps.iter().map(|&l| block(l)).max().unwrap_or(0);
    let mut blocks: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for &l in &gaps {
        let k = block(l);
        if k < finest {
            blocks.entry(k).or_default().push(l);
        }
    }
    if blocks.len() < 2 {
        return Ok(PointSetMetrics { points: pts, gaps, tau_estimate: 0.0 });
    }
    let ks: Vec<f64> = blocks.keys().map(|&k| k as f64).collect();
    let tau = grid
        .iter()
        .copied()
        .find(|&eps| {
            let logs: Vec<f64> = blocks
                .values()
                .map(|ls| ls.iter().map(|l| l.powf(eps)).sum::<f64>().ln())
                .collect();
            slope(&ks, &logs) <= 1e-12
        })
        .unwrap_or(1.0);
    Ok(PointSetMetrics {
        points: pts,
        gaps,
        tau_estimate: tau.clamp(0.0, 1.0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GevreyEnvelope {
    /// `G_n = Σ_j (j+1)…(j+n) |δ_{j+n}|` for `n = 0..=n_max`.
    pub g: Vec<f64>,
    /// `(s, T(s))` with `T(s) = min_k G_k s^k / k!`.
    pub t: Vec<(f64, f64)>,
}

pub fn gevrey_envelope(series: &DeterminantSeries, n_max: usize, s_grid: &[f64]) -> Result<GevreyEnvelope> {
    // A polynomial series of full degree is exact, so the order requirement
    // only matters for genuinely truncated series.
    if series.order < n_max + 10 && series.order < series.degree_bound() {
        return Err(Error::Precondition(format!(
            "series order {} is below n_max + 10 = {}",
            series.order,
            n_max + 10
        )));
    }
    let g: Vec<f64> = (0..=n_max)
        .map(|n| {
            (n..series.coeffs.len())
                .map(|k| falling(k, n) * series.coeffs[k].norm())
                .sum()
        })
        .collect();
    let t = s_grid
        .iter()
        .map(|&s| {
            let mut fact = 1.0;
            let mut best = f64::INFINITY;
            for (k, gk) in g.iter().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                best = best.min(gk * s.powi(k as i32) / fact);
            }
            (s, best)
        })
        .collect();
    Ok(GevreyEnvelope { g, t })
}

/// `v(x) = t^x x^{αx}` minimised over the integers next to `x₁ = t^{-1/α}/e`,
/// returned together with the continuous minimum `exp(-(α/e) t^{-1/α})`.
pub fn gevrey_minimum_check(t: f64, alpha: f64) -> (f64, f64) {
    let x1 = t.powf(-1.0 / alpha) / std::f64::consts::E;
    let v = |x: f64| (x * t.ln() + alpha * x * x.ln()).exp();
    let lo = x1.floor().max(1.0);
    let discrete = v(lo).min(v(lo + 1.0));
    (discrete, (-(alpha / std::f64::consts::E) * t.powf(-1.0 / alpha)).exp())
}
