//! Forward and inverse scattering for real symmetric Jacobi matrices of finite support.
//!
//! Sites are numbered from 1 in this module: site `n >= 1` carries
//! `a_n = spec.a(n - 1)` and `b_n = spec.b(n - 1)`, and the off-matrix
//! coupling is `a_0 = 1/2`. The Jost solution solves
//! `a_{n-1} f_{n-1} + b_n f_n + a_n f_{n+1} = λ f_n` with `f_n = z^n` beyond the
//! support, and `f_0` is the Jost function.

use crate::core::RealJacobiSpec;
use crate::spectra::{find_zeros_disk, FinderOptions};
use crate::{Error, Result, C64};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

fn site_a(spec: &RealJacobiSpec, n: usize) -> f64 {
    if n == 0 {
        0.5
    } else {
        spec.a(n - 1)
    }
}

fn site_b(spec: &RealJacobiSpec, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        spec.b(n - 1)
    }
}

/// Values `f_n(z)` of the Jost solution.
#[derive(Clone, Debug)]
pub struct JostSolution {
    pub z: C64,
    /// Support of the matrix; `f_n = z^n` exactly for `n > support`.
    pub support: usize,
    /// `g_n = f_n / z^n` for `n = 0..=support + 1` (all equal to 1 beyond).
    g: Vec<C64>,
}

impl JostSolution {
    pub fn f(&self, n: usize) -> C64 {
        let g = self.g.get(n).copied().unwrap_or(C64::new(1.0, 0.0));
        g * self.z.powu(n as u32)
    }

    /// The Jost function `f_0(z)`.
    pub fn jost_function(&self) -> C64 {
        self.g[0]
    }
}

/// Jost solution at `z`, `0 < |z| <= 1`.
///
/// The downward pass runs on `g_n = z^{-n} f_n`, which obeys
/// `2a_{n-1} g_{n-1} = (1 + z² - 2b_n z) g_n - 2a_n z² g_{n+1}` and so has no
/// division by `z`.
pub fn jost_solution(spec: &RealJacobiSpec, z: C64) -> Result<JostSolution> {
    if !(z.norm() > 0.0 && z.norm() <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("Jost solution needs 0 < |z| <= 1, got {z}")));
    }
    Ok(JostSolution { z, support: spec.support(), g: jost_g(spec, z) })
}

/// `g_n` for `n = 0..=N+1`; valid for every complex `z`.
fn jost_g(spec: &RealJacobiSpec, z: C64) -> Vec<C64> {
    let n = spec.support();
    let one = C64::new(1.0, 0.0);
    let mut g = vec![one; n + 3];
    let z2 = z * z;
    for k in (1..=n + 1).rev() {
        let b = site_b(spec, k);
        let a = site_a(spec, k);
        g[k - 1] = ((one + z2 - z * (2.0 * b)) * g[k] - z2 * g[k + 1] * (2.0 * a)) / (2.0 * site_a(spec, k - 1));
    }
    g.truncate(n + 2);
    g
}

/// `f_0(z)`, a polynomial in `z`, evaluated anywhere in the plane.
pub fn jost_function(spec: &RealJacobiSpec, z: C64) -> C64 {
    jost_g(spec, z)[0]
}

/// `a_n (f_n(ζ) f_{n+1}(ζ̄) - f_{n+1}(ζ) f_n(ζ̄))`, which equals `(ζ⁻¹ - ζ)/2`
/// for every `n` when `|ζ| = 1`.
pub fn wronskian(spec: &RealJacobiSpec, zeta: C64, n: usize) -> Result<C64> {
    let f = jost_solution(spec, zeta)?;
    let fb = jost_solution(spec, zeta.conj())?;
    Ok((f.f(n) * fb.f(n + 1) - f.f(n + 1) * fb.f(n)) * site_a(spec, n))
}

#[derive(Clone, Debug, Serialize)]
pub struct JostReport {
    /// Zeros of `f_0` in the open unit disk (eigenvalues of the matrix).
    pub disk_zeros: Vec<C64>,
    /// Whether every disk zero is real and simple, as it must be for a real spec.
    pub zeros_real_simple: bool,
    pub f0_at_plus_one: f64,
    pub f0_at_minus_one: f64,
    pub resonance_plus: bool,
    pub resonance_minus: bool,
    /// Smallest `|f_0|` on a 1024-point grid of the unit circle.
    pub boundary_min: f64,
}

impl JostReport {
    /// No discrete spectrum and no resonance: the inverse problem applies.
    pub fn admissible(&self) -> bool {
        self.disk_zeros.is_empty() && !self.resonance_plus && !self.resonance_minus
    }
}

/// Zeros of `f_0` in the disk and resonances at `z = ±1`.
pub fn jost_function_check(spec: &RealJacobiSpec) -> Result<JostReport> {
    let f = |z: C64| jost_function(spec, z);
    let fp = f(C64::new(1.0, 0.0)).re;
    let fm = f(C64::new(-1.0, 0.0)).re;
    let boundary_min = (0..1024)
        .map(|k| f(C64::from_polar(1.0, TAU * k as f64 / 1024.0)).norm())
        .fold(f64::INFINITY, f64::min);
    let mut disk_zeros = Vec::new();
    let mut real_simple = true;
    if spec.support() > 0 {
        let report = find_zeros_disk(&f, 1.0 - 1e-9, &FinderOptions::default())?;
        for z in report.zeros {
            real_simple &= z.multiplicity == 1 && z.z.im.abs() < 1e-8;
            disk_zeros.extend(std::iter::repeat_n(z.z, z.multiplicity));
        }
    }
    Ok(JostReport {
        disk_zeros,
        zeros_real_simple: real_simple,
        f0_at_plus_one: fp,
        f0_at_minus_one: fm,
        resonance_plus: fp.abs() < 1e-10,
        resonance_minus: fm.abs() < 1e-10,
        boundary_min,
    })
}

/// Scattering function on a uniform grid and its Fourier coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScatteringData {
    /// The grid has `2^grid_k` points `θ_j = 2πj / 2^grid_k`.
    pub grid_k: u32,
    /// Support of the matrix the data came from, if known.
    #[serde(default)]
    pub support: Option<usize>,
    /// `S(θ_j) = conj(f_0) / f_0`.
    #[serde(skip)]
    pub s: Vec<C64>,
    /// `F(n) = -(1/2π) ∫ S(θ) e^{inθ} dθ` for `n = 0..2^{grid_k - 1}`.
    #[serde(rename = "F")]
    pub f: Vec<f64>,
    /// `F̂(n) = Σ_{k>=n} |F(k) - F(k+2)|`.
    #[serde(rename = "Fhat", default)]
    pub fhat: Vec<f64>,
    /// Largest imaginary part discarded from the coefficients.
    #[serde(default)]
    pub max_imag: f64,
}

impl ScatteringData {
    /// `F(n)`, zero beyond the stored range.
    pub fn coeff(&self, n: usize) -> f64 {
        self.f.get(n).copied().unwrap_or(0.0)
    }

    /// Data from raw coefficients, filling in `F̂`.
    pub fn from_coefficients(grid_k: u32, support: Option<usize>, f: Vec<f64>) -> Self {
        let fhat = fhat(&f);
        Self { grid_k, support, s: Vec::new(), f, fhat, max_imag: 0.0 }
    }
}

fn fhat(f: &[f64]) -> Vec<f64> {
    let get = |k: usize| f.get(k).copied().unwrap_or(0.0);
    let mut out = vec![0.0; f.len()];
    let mut acc = 0.0;
    for n in (0..f.len()).rev() {
        acc += (get(n) - get(n + 2)).abs();
        out[n] = acc;
    }
    out
}

/// Forward scattering on `2^grid_k` points.
///
/// Refuses specs with eigenvalues or a resonance, where the Marchenko
/// equation without discrete-spectrum terms does not hold.
pub fn scattering_function(spec: &RealJacobiSpec, grid_k: u32) -> Result<ScatteringData> {
    if !(4..=24).contains(&grid_k) {
        return Err(Error::Precondition(format!("grid_k must lie in 4..=24, got {grid_k}")));
    }
    let check = jost_function_check(spec)?;
    if !check.admissible() {
        return Err(Error::Precondition(format!(
            "scattering data need no discrete spectrum and no resonance (disk zeros {:?}, f0(1) = {}, f0(-1) = {})",
            check.disk_zeros, check.f0_at_plus_one, check.f0_at_minus_one
        )));
    }
    let m = 1usize << grid_k;
    let s: Vec<C64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let f0 = jost_function(spec, C64::from_polar(1.0, TAU * j as f64 / m as f64));
            f0.conj() / f0
        })
        .collect();
    let mut buf = s.clone();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let half = m / 2;
    let max_imag = buf[..half].iter().map(|c| c.im.abs() / m as f64).fold(0.0, f64::max);
    let f: Vec<f64> = buf[..half].iter().map(|c| -c.re / m as f64).collect();
    let fhat = fhat(&f);
    Ok(ScatteringData { grid_k, support: Some(spec.support()), s, f, fhat, max_imag })
}

/// Solutions of the truncated Marchenko system.
#[derive(Clone, Debug, Serialize)]
pub struct MarchenkoSolution {
    /// `tau[n - 1][j] = τ(n, j)` for sites `n = 1..`, `j = 0..j_max`, solving
    /// `τ(n,j) + Σ_m F(2n+m+j) τ(n,m) = -F(2n+j)`.
    pub tau: Vec<Vec<f64>>,
    /// Boundary row `x_j + Σ_i F(2+i+j) x_i = -F(1+j)`, which fixes the first diagonal entry.
    pub boundary: Vec<f64>,
    /// Largest residual over all rows.
    pub residual: f64,
    pub j_max: usize,
}

impl MarchenkoSolution {
    /// `K(n, n) = √(1 + τ(n, 0))`.
    pub fn k_diag(&self, n: usize) -> Result<f64> {
        let t = self.tau[n - 1][0];
        if !(t > -1.0) {
            return Err(Error::Domain(format!("τ({n}, 0) = {t} <= -1: non-physical scattering data")));
        }
        Ok((1.0 + t).sqrt())
    }
}

fn solve_row(data: &ScatteringData, shift: usize, rhs_shift: usize, j_max: usize) -> Result<(Vec<f64>, f64)> {
    let m = DMatrix::from_fn(j_max, j_max, |j, i| data.coeff(shift + i + j) + if i == j { 1.0 } else { 0.0 });
    let rhs = DVector::from_fn(j_max, |j, _| -data.coeff(rhs_shift + j));
    let x = m.clone().lu().solve(&rhs).ok_or_else(|| {
        Error::Singular(format!(
            "truncated Marchenko matrix at shift {shift} is singular; the data violate the no-eigenvalue assumption or j_max = {j_max} is too small"
        ))
    })?;
    let res = (&m * &x - &rhs).amax();
    Ok((x.iter().copied().collect(), res))
}

/// Solve the rows for sites `1..=n_max + 2` with `j_max` unknowns each.
pub fn marchenko_solve(data: &ScatteringData, n_max: usize, j_max: usize) -> Result<MarchenkoSolution> {
    if j_max < 2 {
        return Err(Error::Precondition("j_max must be at least 2".into()));
    }
    let rows: Vec<(Vec<f64>, f64)> = (1..=n_max + 2)
        .into_par_iter()
        .map(|n| solve_row(data, 2 * n, 2 * n, j_max))
        .collect::<Result<_>>()?;
    let (boundary, r0) = solve_row(data, 2, 1, j_max)?;
    let residual = rows.iter().map(|r| r.1).fold(r0, f64::max);
    Ok(MarchenkoSolution { tau: rows.into_iter().map(|r| r.0).collect(), boundary, residual, j_max })
}

/// Recover `a`, `b` for rows `0..=n_max` from a Marchenko solution.
///
/// With `K(n,n) = √(1 + τ(n,0))` and `r_n = τ(n,1) / (1 + τ(n,0))`, the entries
/// at site `n` are `a_n = K(n+1,n+1) / (2K(n,n))` and `b_n = (r_n - r_{n-1})/2`,
/// where the first site uses the boundary row in place of `r_0`. Entries
/// within `1e-13` of the free values are snapped to them so that trailing
/// free rows are trimmed.
pub fn reconstruct(sol: &MarchenkoSolution) -> Result<RealJacobiSpec> {
    let rows = sol.tau.len() - 1;
    let mut a = Vec::with_capacity(rows);
    let mut b = Vec::with_capacity(rows);
    let r = |n: usize| -> Result<f64> {
        let k = sol.k_diag(n)?;
        Ok(sol.tau[n - 1][1] / (k * k))
    };
    for n in 1..=rows {
        let an = sol.k_diag(n + 1)? / (2.0 * sol.k_diag(n)?);
        let prev = if n == 1 { sol.boundary[0] } else { r(n - 1)? };
        let bn = 0.5 * (r(n)? - prev);
        a.push(if (an - 0.5).abs() < 1e-13 { 0.5 } else { an });
        b.push(if bn.abs() < 1e-13 { 0.0 } else { bn });
    }
    RealJacobiSpec::new(a, b)
}

/// Reconstruct rows `0..=n_max`, doubling `j_max` from `4N + 32` until the
/// entries change by less than `1e-9`.
pub fn inverse_scattering(data: &ScatteringData, n_max: usize) -> Result<RealJacobiSpec> {
    let n = data.support.unwrap_or(n_max);
    let cap = data.f.len().max(64);
    let mut j = 4 * n + 32;
    let mut prev = reconstruct(&marchenko_solve(data, n_max, j)?)?;
    while j < cap {
        j *= 2;
        let next = reconstruct(&marchenko_solve(data, n_max, j)?)?;
        if next.max_entry_error(&prev) < 1e-9 {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayBoundReport {
    /// `(n, |2a_n - 1| + |b_n|, |F(2n-1) - F(2n+1)| + |F(2n) - F(2n+2)| + F̂(2n-2)²)` per site.
    pub rows: Vec<(usize, f64, f64)>,
    /// Smallest constant covering every row (infinite if a row has a zero right side).
    pub c_min: f64,
    pub fhat_monotone: bool,
    /// `|F(k)| + |F(k+1)| <= F̂(k)` for every stored `k`.
    pub tail_sum_ok: bool,
    pub passes: bool,
}

/// Compare the entries of `spec` with the coefficient bound driven by `data`
/// at sites `1..=n_max`.
pub fn verify_decay_bound(data: &ScatteringData, spec: &RealJacobiSpec, n_max: usize) -> DecayBoundReport {
    let fh = |k: usize| data.fhat.get(k).copied().unwrap_or(0.0);
    let f = |k: usize| data.coeff(k);
    let mut rows = Vec::new();
    let mut c_min: f64 = 0.0;
    for n in 1..=n_max {
        let lhs = (2.0 * site_a(spec, n) - 1.0).abs() + site_b(spec, n).abs();
        let rhs = (f(2 * n - 1) - f(2 * n + 1)).abs() + (f(2 * n) - f(2 * n + 2)).abs() + fh(2 * n - 2).powi(2);
        if lhs > 0.0 {
            c_min = c_min.max(if rhs > 0.0 { lhs / rhs } else { f64::INFINITY });
        }
        rows.push((n, lhs, rhs));
    }
    let fhat_monotone = data.fhat.windows(2).all(|w| w[1] <= w[0]);
    let tail_sum_ok = (0..data.f.len()).all(|k| f(k).abs() + f(k + 1).abs() <= fh(k) * (1.0 + 1e-12) + 1e-15);
    DecayBoundReport {
        passes: c_min <= 1e6 && fhat_monotone && tail_sum_ok,
        rows,
        c_min,
        fhat_monotone,
        tail_sum_ok,
    }
}
