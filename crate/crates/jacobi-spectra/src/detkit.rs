//! Perturbation determinant `Δ(z, J)` and its Taylor coefficients.
//!
//! Four evaluators are provided and cross-checked in the tests:
//!
//! * [`det_truncation_ratio`]: `det(J_m - λ)/det(J_{0,m} - λ)` for a finite section.
//! * [`det_volterra`]: exact back-substitution of the discrete Volterra equation, `O(N²)`.
//! * [`det_recursion`]: the backward three-term recursion between associated matrices, `O(N)`.
//! * [`eval_series`]: the Taylor polynomial from [`taylor_recursion`].
//!
//! `J^(n)` denotes the associated matrix that starts at row `n + 1`, so
//! `Δ(z, J^(-1)) = Δ(z, J)` and `Δ(z, J^(n)) = 1` once `n + 1 >= N`.

use crate::core::{envelope, joukowski, moment, ComplexJacobiSpec, Envelope};
use crate::{Error, Result, C64};

const ONE: C64 = C64::new(1.0, 0.0);

/// `Δ(z, J^(n))` for `n >= -1` by the backward recursion
/// `D_n = (1 + z² - 2 b_{n+1} z) D_{n+1} - 4 a_{n+1} c_{n+1} z² D_{n+2}`.
///
/// `Δ` is a polynomial of degree at most `2N`, so any `z` is accepted; the
/// recursion is numerically stable for `|z| <= 1`.
pub fn det_recursion(spec: &ComplexJacobiSpec, z: C64, n: i64) -> C64 {
    assert!(n >= -1, "associated index must be at least -1");
    let nn = spec.support() as i64;
    if n >= nn - 1 {
        return ONE;
    }
    let z2 = z * z;
    let base = ONE + z2;
    let (mut d1, mut d2) = (ONE, ONE); // D_{k+1}, D_{k+2}
    let mut k = nn - 2;
    loop {
        let m = (k + 1) as usize;
        let d = (base - spec.b(m) * z * 2.0) * d1 - spec.a(m) * spec.c(m) * z2 * 4.0 * d2;
        if k == n {
            return d;
        }
        d2 = d1;
        d1 = d;
        k -= 1;
    }
}

/// All of `Δ(z, J^(n))` for `n = -1..=N`, indexed by `n + 1`.
pub fn det_recursion_all(spec: &ComplexJacobiSpec, z: C64) -> Vec<C64> {
    let nn = spec.support();
    let mut out = vec![ONE; nn + 2];
    let z2 = z * z;
    for k in (-1..nn as i64 - 1).rev() {
        let m = (k + 1) as usize;
        let i = (k + 1) as usize;
        out[i] = (ONE + z2 - spec.b(m) * z * 2.0) * out[i + 1]
            - spec.a(m) * spec.c(m) * z2 * 4.0 * out[i + 2];
    }
    out
}

/// Three-term determinant recurrence with log-scale tracking against overflow.
struct ScaledDet {
    prev: C64,
    cur: C64,
    log_scale: f64,
}

impl ScaledDet {
    fn new() -> Self {
        Self {
            prev: C64::new(0.0, 0.0),
            cur: ONE,
            log_scale: 0.0,
        }
    }

    fn step(&mut self, diag: C64, offprod: C64) {
        let next = diag * self.cur - offprod * self.prev;
        self.prev = self.cur;
        self.cur = next;
        let s = self.cur.norm().max(self.prev.norm());
        if s > 1e100 || (s < 1e-100 && s > 0.0) {
            self.prev /= s;
            self.cur /= s;
            self.log_scale += s.ln();
        }
    }
}

/// `det(J_m - λ)/det(J_{0,m} - λ)` with `J_m` the leading `(m+1) × (m+1)` block.
///
/// `z = 0` returns the limit value 1. Fails if `λ(z)` is an eigenvalue of the
/// free section.
pub fn det_truncation_ratio(spec: &ComplexJacobiSpec, z: C64, m: usize) -> Result<C64> {
    if z == C64::new(0.0, 0.0) {
        return Ok(ONE);
    }
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "truncation ratio needs |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let lam = joukowski(z)?;
    let mut e = ScaledDet::new();
    let mut f = ScaledDet::new();
    for k in 0..=m {
        let off = if k == 0 {
            C64::new(0.0, 0.0)
        } else {
            spec.a(k - 1) * spec.c(k - 1)
        };
        e.step(spec.b(k) - lam, off);
        f.step(-lam, C64::new(if k == 0 { 0.0 } else { 0.25 }, 0.0));
    }
    if f.cur.norm() <= 1e-300 || f.cur.norm() < 1e-13 * f.prev.norm() {
        return Err(Error::Division(format!(
            "λ = {lam} is an eigenvalue of the free section of size {}",
            m + 1
        )));
    }
    Ok(e.cur / f.cur * (e.log_scale - f.log_scale).exp())
}

/// Truncation ratio with automatic section size.
///
/// Starts at `max(200, 4N)` and doubles until two successive values agree to
/// `1e-9`; a singular free section is skipped by moving to `m + 1`.
pub fn det_truncation_ratio_auto(spec: &ComplexJacobiSpec, z: C64) -> Result<C64> {
    let eval = |m: usize| {
        det_truncation_ratio(spec, z, m).or_else(|e| match e {
            Error::Division(_) => det_truncation_ratio(spec, z, m + 1),
            other => Err(other),
        })
    };
    let mut m = (4 * spec.support()).max(200);
    let mut prev = eval(m)?;
    for _ in 0..16 {
        m *= 2;
        let cur = eval(m)?;
        if (cur - prev).norm() <= 1e-9 * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        what: "truncation ratio".into(),
        iterations: 16,
        estimate: f64::NAN,
    })
}

/// `Ĝ_k(z) = G(n, n+k, z) z^k = 2z(1 + z² + ... + z^{2(k-1)})` for `k = 0..len`.
fn kernel_table(z: C64, len: usize) -> Vec<C64> {
    let mut g = vec![C64::new(0.0, 0.0); len];
    for k in 1..len {
        g[k] = g[k - 1] * z * z + z * 2.0;
    }
    g
}

/// `Δ(z, J^(n))` by exact back-substitution of the Volterra equation
/// `Δ_n = 1 + Σ_{m>n} M̂(n, m, z) Δ_m`.
///
/// The kernel is a polynomial in `z`, so `z = ±1` needs no special case.
pub fn det_volterra(spec: &ComplexJacobiSpec, z: C64, n: i64) -> Result<C64> {
    let all = det_volterra_all(spec, z)?;
    Ok(if n + 1 < all.len() as i64 {
        all[(n + 1) as usize]
    } else {
        ONE
    })
}

/// All of `Δ(z, J^(n))` for `n = -1..=N` by the Volterra back-substitution,
/// indexed by `n + 1`.
pub fn det_volterra_all(spec: &ComplexJacobiSpec, z: C64) -> Result<Vec<C64>> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "Volterra engine needs |z| <= 1, got |z| = {}",
            z.norm()
        )));
    }
    let nn = spec.support();
    let mut delta = vec![ONE; nn + 2];
    if nn == 0 {
        return Ok(delta);
    }
    let g = kernel_table(z, nn + 2);
    // Coefficients of the kernel: b_m and (1/2 - 2 a_{m-1} c_{m-1}).
    let bm: Vec<C64> = (0..=nn).map(|m| spec.b(m)).collect();
    let qm: Vec<C64> = (0..=nn)
        .map(|m| {
            if m == 0 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.5, 0.0) - spec.a(m - 1) * spec.c(m - 1) * 2.0
            }
        })
        .collect();
    for n in (-1..nn as i64 - 1).rev() {
        let mut acc = ONE;
        for m in (n + 1) as usize..=nn {
            let k = (m as i64 - n) as usize;
            let mhat = -bm[m] * g[k] + qm[m] * z * g[k - 1];
            acc += mhat * delta[m + 1];
        }
        delta[(n + 1) as usize] = acc;
    }
    Ok(delta)
}

/// `ψ_n(z) = z^n Δ(z, J^(n))`, a solution of the recurrence that behaves like `z^n`.
pub fn jost_psi(spec: &ComplexJacobiSpec, z: C64, n: i64) -> Result<C64> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Domain("ψ_n needs z ≠ 0".into()));
    }
    Ok(z.powi(n as i32) * det_volterra(spec, z, n)?)
}

/// Taylor coefficients `κ(n, j)` of `Δ(z, J^(n)) = 1 + Σ_j κ(n, j) z^j`.
#[derive(Clone, Debug)]
pub struct KappaTable {
    support: usize,
    order: usize,
    /// `rows[n + 1][j]` for `n = -1..=N`, `j = 0..=order`.
    rows: Vec<Vec<C64>>,
}

impl KappaTable {
    /// `κ(n, j)`; `κ(n, 0) = 1`, and rows at or beyond the support vanish.
    pub fn kappa(&self, n: i64, j: usize) -> C64 {
        assert!(n >= -1 && j <= self.order);
        if j == 0 {
            return ONE;
        }
        self.rows
            .get((n + 1) as usize)
            .map(|r| r[j])
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn support(&self) -> usize {
        self.support
    }
}

/// Fill `κ(n, j)` for `j <= order` by matching coefficients in the recursion.
///
/// `κ(n, j+1) = [j >= 2] κ(n+1, j-1) - Σ_{m>n} {2 b_m κ(m, j) + (4 a_m c_m - 1) κ(m+1, j-1)}`
/// with `κ(·, 0) = 1` and `κ(·, -1) = 0`. Every sum stops at the support, so
/// each new column costs `O(N)`.
pub fn taylor_recursion(spec: &ComplexJacobiSpec, order: usize) -> Result<KappaTable> {
    if order == 0 {
        return Err(Error::Precondition("Taylor order must be at least 1".into()));
    }
    let nn = spec.support();
    let rows_len = nn + 2; // n = -1..=N
    let mut rows = vec![vec![C64::new(0.0, 0.0); order + 1]; rows_len];
    for r in rows.iter_mut() {
        r[0] = ONE;
    }
    let k = |rows: &Vec<Vec<C64>>, n: i64, j: i64| -> C64 {
        if j < 0 {
            C64::new(0.0, 0.0)
        } else if j == 0 {
            ONE
        } else if (n + 1) as usize >= rows_len {
            C64::new(0.0, 0.0)
        } else {
            rows[(n + 1) as usize][j as usize]
        }
    };
    for j in 0..order as i64 {
        // Suffix sums S(n) = Σ_{m>n} term(m), built from the top.
        let mut col = vec![C64::new(0.0, 0.0); rows_len];
        let mut suffix = C64::new(0.0, 0.0);
        for n in (-1..nn as i64).rev() {
            let m = n + 1;
            if (m as usize) < nn {
                let mu = m as usize;
                let term = spec.b(mu) * 2.0 * k(&rows, m, j)
                    + (spec.a(mu) * spec.c(mu) * 4.0 - 1.0) * k(&rows, m + 1, j - 1);
                suffix += term;
            }
            let shift = if j >= 2 { k(&rows, n + 1, j - 1) } else { C64::new(0.0, 0.0) };
            col[(n + 1) as usize] = shift - suffix;
        }
        for (i, r) in rows.iter_mut().enumerate() {
            r[(j + 1) as usize] = if i + 1 > nn { C64::new(0.0, 0.0) } else { col[i] };
        }
    }
    Ok(KappaTable {
        support: nn,
        order,
        rows,
    })
}

/// Taylor coefficients of `Δ(z, J)` with a certified coefficient bound.
#[derive(Clone, Debug)]
pub struct DeterminantSeries {
    pub coeffs: Vec<C64>,
    pub order: usize,
    env: Envelope,
    full_product: f64,
}

impl DeterminantSeries {
    /// Certified bound on `|δ_j|`:
    /// `Π_{i>=0}(1 + H(i)) · H(⌈j/2⌉ - 1)` for `j >= 1`, and `1` for `j = 0`.
    pub fn tail_bound(&self, j: usize) -> f64 {
        if j == 0 {
            return 1.0;
        }
        self.full_product * self.env.h(j.div_ceil(2) - 1)
    }

    /// Degree bound of `Δ`: twice the support.
    pub fn degree_bound(&self) -> usize {
        2 * self.env.support()
    }

    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or(C64::new(0.0, 0.0))
    }
}

/// `δ_j = κ(-1, j)` with `δ_0 = 1`.
pub fn series_from_kappa(table: &KappaTable, spec: &ComplexJacobiSpec) -> DeterminantSeries {
    let env = envelope(spec);
    let coeffs = (0..=table.order()).map(|j| table.kappa(-1, j)).collect();
    DeterminantSeries {
        coeffs,
        order: table.order(),
        full_product: env.tail_product(0),
        env,
    }
}

/// Convenience: Taylor table and series in one call.
pub fn determinant_series(spec: &ComplexJacobiSpec, order: usize) -> Result<DeterminantSeries> {
    Ok(series_from_kappa(&taylor_recursion(spec, order)?, spec))
}

/// The coefficient bound in its textbook form
/// `Π_{i>=1}(1 + H(i)) · Σ_{m>=⌊j/2⌋} (|2b_m| + |4a_m c_m - 1|)`.
///
/// Kept for comparison only: it fails already for diagonal perturbations
/// (see [`DeterminantSeries::tail_bound`] for the certified version).
pub fn printed_coefficient_bound(spec: &ComplexJacobiSpec, j: usize) -> f64 {
    let env = envelope(spec);
    env.tail_product(1) * env.h(j / 2)
}

/// Horner evaluation with the certified truncation error
/// `Σ_{order < j <= 2N} tail_bound(j) |z|^j`.
pub fn eval_series(series: &DeterminantSeries, z: C64) -> (C64, f64) {
    let value = series
        .coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let r = z.norm();
    let err = ((series.order + 1)..=series.degree_bound())
        .fold(0.0, |acc, j| acc + series.tail_bound(j) * r.powi(j as i32));
    (value, err)
}

/// Bounds on `max_{|z|<=1} |Δ^(n)(z)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeBound {
    /// `C(J) 4^n/(n+1) M_{n+1}` (plus 1 for `n = 0`).
    pub moment_bound: f64,
    /// `C(J)` used in `moment_bound`.
    pub constant: f64,
    /// `Σ_j (j+1)…(j+n) |δ_{j+n}|`, exact for the polynomial `Δ`.
    pub series_bound: f64,
}

/// Derivative bounds from the moments and from the coefficients.
///
/// The constant is `C(J) = 2 θ Π_{i>=0}(1 + H(i))` with
/// `θ = max_m (|2b_m| + |4a_m c_m - 1|)/(|a_m - 1/2| + |b_m| + |c_m - 1/2|)`,
/// which follows from the certified coefficient bound.
pub fn derivative_max_bound(spec: &ComplexJacobiSpec, n: usize) -> Result<DerivativeBound> {
    let env = envelope(spec);
    let theta = (0..spec.support())
        .filter(|&m| spec.moment_term(m) > 0.0)
        .map(|m| spec.envelope_term(m) / spec.moment_term(m))
        .fold(0.0, f64::max);
    let constant = 2.0 * theta * env.tail_product(0);
    let mut moment_bound =
        constant * 4f64.powi(n as i32) / (n as f64 + 1.0) * moment(spec, n as u32 + 1);
    if n == 0 {
        moment_bound += 1.0;
    }
    let series = determinant_series(spec, 2 * spec.support() + n + 1)?;
    Ok(DerivativeBound {
        moment_bound,
        constant,
        series_bound: derivative_series_bound(&series, n),
    })
}

/// `Σ_j (j+1)…(j+n) |δ_{j+n}|`.
pub fn derivative_series_bound(series: &DeterminantSeries, n: usize) -> f64 {
    (n..series.coeffs.len())
        .map(|k| falling(k, n) * series.coeffs[k].norm())
        .sum()
}

/// `k (k-1) … (k-n+1)`.
pub(crate) fn falling(k: usize, n: usize) -> f64 {
    ((k + 1 - n)..=k).map(|i| i as f64).product()
}
