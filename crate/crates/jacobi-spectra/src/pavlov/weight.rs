//! The weight `w = A Im f` on `[-1, 1]` and its three-term recurrence.

use super::{HerglotzConstants, PavlovModel};
use crate::{Error, Result, C64};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

/// A discrete measure on `(-1, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightTable {
    /// Nodes `x_k = cos θ_k`, `θ_k = π(k + 1/2)/M`, in decreasing order.
    pub nodes: Vec<f64>,
    /// Weight values `w(x_k)`.
    pub values: Vec<f64>,
    /// Quadrature weights `(π/M) sin θ_k` for `dx`.
    pub quad_weights: Vec<f64>,
}

impl WeightTable {
    /// Total mass `Σ w(x_k) q_k`.
    pub fn mass(&self) -> f64 {
        self.values.iter().zip(&self.quad_weights).map(|(w, q)| w * q).sum()
    }

    /// A table for a closed-form weight on the same midpoint grid.
    pub fn from_fn(node_count: usize, w: impl Fn(f64) -> f64) -> Self {
        let m = node_count as f64;
        let th: Vec<f64> = (0..node_count).map(|k| PI * (k as f64 + 0.5) / m).collect();
        Self {
            nodes: th.iter().map(|t| t.cos()).collect(),
            values: th.iter().map(|t| w(t.cos())).collect(),
            quad_weights: th.iter().map(|t| PI / m * t.sin()).collect(),
        }
    }

    /// `Σ_n n^k |q_n|` for `k = 0..=3`, where `q_n` are the cosine
    /// coefficients of `w(cos θ) sin θ`. Rapid decay of the `q_n` reflects
    /// smoothness of the weight in `θ`.
    pub fn smoothness_sums(&self) -> [f64; 4] {
        let m = self.values.len();
        let g: Vec<f64> = self.values.iter().zip(&self.quad_weights).map(|(w, q)| w * q * m as f64 / PI).collect();
        // DCT-II through a length-4M FFT of the even, odd-sample embedding.
        let mut buf = vec![C64::new(0.0, 0.0); 4 * m];
        for (k, &v) in g.iter().enumerate() {
            buf[2 * k + 1] = C64::new(v, 0.0);
            buf[4 * m - 2 * k - 1] = C64::new(v, 0.0);
        }
        FftPlanner::new().plan_fft_forward(4 * m).process(&mut buf);
        let mut out = [0.0; 4];
        for (n, c) in buf.iter().take(m).enumerate() {
            let q = c.re.abs() / (2.0 * m as f64);
            for (k, o) in out.iter_mut().enumerate() {
                *o += (n as f64).powi(k as i32) * q;
            }
        }
        out
    }
}

/// `w(x_k) = A Im f(x_k + i0)` on `node_count` midpoint nodes in `θ`.
///
/// The boundary value is approached from the upper half-plane, where `f` is
/// Herglotz; a value below `-1e-9` means the wrong side was taken and is
/// reported as a branch error.
pub fn weight_table(model: &PavlovModel, herglotz: &HerglotzConstants, node_count: usize) -> Result<WeightTable> {
    if node_count < 16 {
        return Err(Error::Precondition(format!("node_count must be at least 16, got {node_count}")));
    }
    let m = node_count as f64;
    let th: Vec<f64> = (0..node_count).map(|k| PI * (k as f64 + 0.5) / m).collect();
    let values: Vec<f64> = th
        .par_iter()
        .map(|&t| model.boundary_im_f(t).map(|v| herglotz.a_norm * v))
        .collect::<Result<_>>()?;
    if let Some(k) = values.iter().position(|&v| v < -1e-9) {
        return Err(Error::Branch(format!(
            "weight is negative ({}) at x = {}: boundary value taken from the wrong side",
            values[k],
            th[k].cos()
        )));
    }
    Ok(WeightTable {
        nodes: th.iter().map(|t| t.cos()).collect(),
        values: values.into_iter().map(|v| v.max(0.0)).collect(),
        quad_weights: th.iter().map(|t| PI / m * t.sin()).collect(),
    })
}

/// Recurrence coefficients `(ã_n, b̃_n)`, `n = 0..n_max`, of the polynomials
/// orthonormal for the discrete measure, by the Stieltjes procedure.
///
/// Row `n` of the resulting Jacobi matrix has diagonal `b̃_n` and couples to row
/// `n + 1` through `ã_n`. A tail in which every `|ã_n - 1/2| + |b̃_n|` is below
/// `1e-13` is replaced by exact free values.
pub fn recurrence_from_weight(table: &WeightTable, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if table.nodes.len() < 8 * n_max {
        return Err(Error::Precondition(format!(
            "{} nodes cannot resolve {n_max} recurrence coefficients (need at least {})",
            table.nodes.len(),
            8 * n_max
        )));
    }
    let x = &table.nodes;
    let w: Vec<f64> = table.values.iter().zip(&table.quad_weights).map(|(v, q)| v * q).collect();
    let mass: f64 = w.iter().sum();
    if !(mass > 0.0) {
        return Err(Error::Precondition("the measure has no mass".into()));
    }
    let mut p_prev = vec![0.0; x.len()];
    let mut p = vec![1.0 / mass.sqrt(); x.len()];
    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    let mut a_prev = 0.0;
    for n in 0..n_max {
        let bn: f64 = w.iter().zip(x).zip(&p).map(|((w, x), p)| w * x * p * p).sum();
        let mut norm = 0.0;
        for k in 0..x.len() {
            let r = (x[k] - bn) * p[k] - a_prev * p_prev[k];
            p_prev[k] = r;
            norm += w[k] * r * r;
        }
        let an = norm.sqrt();
        if !(an > 1e-300 && an.is_finite()) {
            return Err(Error::NoConvergence {
                what: format!("Stieltjes procedure lost orthogonality at n = {n}; use more nodes or higher precision"),
                iterations: n,
                estimate: an,
            });
        }
        // p_prev now holds the unnormalised next polynomial; rotate.
        std::mem::swap(&mut p, &mut p_prev);
        for v in p.iter_mut() {
            *v /= an;
        }
        a.push(an);
        b.push(bn);
        a_prev = an;
    }
    let floor = 1e-13;
    let mut keep = a.len();
    while keep > 0 && (a[keep - 1] - 0.5).abs() + b[keep - 1].abs() < floor {
        keep -= 1;
    }
    for k in keep..a.len() {
        a[k] = 0.5;
        b[k] = 0.0;
    }
    Ok((a, b))
}
