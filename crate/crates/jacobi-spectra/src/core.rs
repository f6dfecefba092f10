//! Matrix types, the spectral-parameter map, moments and decay envelopes.

use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

/// One non-free row of a complex Jacobi matrix.
///
/// `da = a_n - 1/2`, `db = b_n`, `dc = c_n - 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub n: usize,
    pub da: C64,
    pub db: C64,
    pub dc: C64,
}

/// A complex Jacobi matrix equal to the free laplacian from row `support` on.
///
/// Row `n` carries the diagonal entry `b_n`, the super-diagonal `a_n` and the
/// sub-diagonal `c_n` (both coupling rows `n` and `n + 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexJacobiSpec {
    a: Vec<C64>,
    b: Vec<C64>,
    c: Vec<C64>,
}

const HALF: C64 = C64::new(0.5, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

impl ComplexJacobiSpec {
    /// The discrete laplacian itself.
    pub fn free() -> Self {
        Self {
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
        }
    }

    /// Build from sparse deviation records. Duplicate indices are rejected.
    pub fn from_deviations(devs: &[Deviation]) -> Result<Self> {
        let support = devs.iter().map(|d| d.n + 1).max().unwrap_or(0);
        let mut seen = vec![false; support];
        let mut a = vec![HALF; support];
        let mut b = vec![ZERO; support];
        let mut c = vec![HALF; support];
        for d in devs {
            if seen[d.n] {
                return Err(Error::InvalidSpec(format!(
                    "two deviation records for index {}",
                    d.n
                )));
            }
            for v in [d.da, d.db, d.dc] {
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "non-finite deviation at index {}",
                        d.n
                    )));
                }
            }
            seen[d.n] = true;
            a[d.n] = HALF + d.da;
            b[d.n] = d.db;
            c[d.n] = HALF + d.dc;
        }
        Ok(Self { a, b, c }.trimmed())
    }

    /// Build from dense entry lists of equal length.
    pub fn from_entries(a: Vec<C64>, b: Vec<C64>, c: Vec<C64>) -> Result<Self> {
        if a.len() != b.len() || b.len() != c.len() {
            return Err(Error::InvalidSpec(format!(
                "entry lists differ in length: a {}, b {}, c {}",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        if a.iter().chain(&b).chain(&c).any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidSpec("non-finite entry".into()));
        }
        Ok(Self { a, b, c }.trimmed())
    }

    /// Diagonal perturbation: `b_n = diag[n]`, off-diagonals free.
    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self {
            a: vec![HALF; n],
            b: diag.to_vec(),
            c: vec![HALF; n],
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while let Some(k) = self.a.len().checked_sub(1) {
            if self.a[k] == HALF && self.b[k] == ZERO && self.c[k] == HALF {
                self.a.pop();
                self.b.pop();
                self.c.pop();
            } else {
                break;
            }
        }
        self
    }

    /// Smallest `N` such that every row `n >= N` is free.
    pub fn support(&self) -> usize {
        self.a.len()
    }

    pub fn is_free(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self, n: usize) -> C64 {
        self.a.get(n).copied().unwrap_or(HALF)
    }

    pub fn b(&self, n: usize) -> C64 {
        self.b.get(n).copied().unwrap_or(ZERO)
    }

    pub fn c(&self, n: usize) -> C64 {
        self.c.get(n).copied().unwrap_or(HALF)
    }

    /// Non-free rows, sorted by index.
    pub fn deviations(&self) -> Vec<Deviation> {
        (0..self.support())
            .filter(|&n| self.a[n] != HALF || self.b[n] != ZERO || self.c[n] != HALF)
            .map(|n| Deviation {
                n,
                da: self.a[n] - HALF,
                db: self.b[n],
                dc: self.c[n] - HALF,
            })
            .collect()
    }

    /// `|2 b_m| + |4 a_m c_m - 1|`, the summand of the envelope `H`.
    pub fn envelope_term(&self, m: usize) -> f64 {
        (self.b(m) * 2.0).norm() + (self.a(m) * self.c(m) * 4.0 - 1.0).norm()
    }

    /// `|a_k - 1/2| + |b_k| + |c_k - 1/2|`, the summand of the moments.
    pub fn moment_term(&self, k: usize) -> f64 {
        (self.a(k) - HALF).norm() + self.b(k).norm() + (self.c(k) - HALF).norm()
    }
}

/// A real symmetric Jacobi matrix with positive off-diagonal.
///
/// Row `k` has diagonal `b[k]` and couples to row `k + 1` through `a[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealJacobiSpec {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RealJacobiSpec {
    pub fn new(mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Self> {
        let n = a.len().max(b.len());
        a.resize(n, 0.5);
        b.resize(n, 0.0);
        if let Some(k) = a.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidSpec(format!(
                "off-diagonal a[{k}] = {} must be positive",
                a[k]
            )));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec("non-finite diagonal entry".into()));
        }
        while a.last() == Some(&0.5) && b.last() == Some(&0.0) {
            a.pop();
            b.pop();
        }
        Ok(Self { a, b })
    }

    pub fn free() -> Self {
        Self {
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    /// Single diagonal site `b_0 = b`.
    pub fn single_site(b: f64) -> Self {
        Self::new(vec![0.5], vec![b]).expect("finite entry")
    }

    pub fn support(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, n: usize) -> f64 {
        self.a.get(n).copied().unwrap_or(0.5)
    }

    pub fn b(&self, n: usize) -> f64 {
        self.b.get(n).copied().unwrap_or(0.0)
    }

    pub fn to_complex(&self) -> ComplexJacobiSpec {
        let a: Vec<C64> = self.a.iter().map(|&x| C64::new(x, 0.0)).collect();
        let b = self.b.iter().map(|&x| C64::new(x, 0.0)).collect();
        ComplexJacobiSpec::from_entries(a.clone(), b, a).expect("validated entries")
    }

    /// Largest entrywise difference against another real spec.
    pub fn max_entry_error(&self, other: &RealJacobiSpec) -> f64 {
        let n = self.support().max(other.support());
        (0..n)
            .map(|k| (self.a(k) - other.a(k)).abs().max((self.b(k) - other.b(k)).abs()))
            .fold(0.0, f64::max)
    }
}

/// `λ(z) = (z + 1/z)/2`.
pub fn joukowski(z: C64) -> Result<C64> {
    if z == ZERO {
        return Err(Error::Domain("joukowski map is undefined at z = 0".into()));
    }
    Ok((z + z.inv()) * 0.5)
}

/// Preimage of `λ` inside the unit disk.
///
/// Points of `[-1, 1]` have both preimages on the unit circle and are refused.
pub fn inverse_joukowski(lambda: C64) -> Result<C64> {
    let s = (lambda * lambda - 1.0).sqrt();
    let (z1, z2) = (lambda - s, lambda + s);
    // Take the smaller root directly and recover it from the product z1 z2 = 1
    // when cancellation would spoil it.
    let (big, small) = if z1.norm() >= z2.norm() { (z1, z2) } else { (z2, z1) };
    let z = if big.norm() > 0.0 { big.inv() } else { small };
    if (1.0 - z.norm()).abs() <= 4.0 * f64::EPSILON {
        return Err(Error::Branch(format!(
            "λ = {lambda} lies on [-1, 1]; use a boundary limit"
        )));
    }
    Ok(z)
}

/// Distance from `λ` to the segment `[-1, 1]`.
pub fn dist_to_segment(lambda: C64) -> f64 {
    let x = lambda.re.clamp(-1.0, 1.0);
    ((lambda.re - x).powi(2) + lambda.im.powi(2)).sqrt()
}

/// Moment `M_r = Σ_k (k+1)^r (|a_k - 1/2| + |b_k| + |c_k - 1/2|)`.
pub fn moment(spec: &ComplexJacobiSpec, r: u32) -> f64 {
    (0..spec.support())
        .map(|k| ((k + 1) as f64).powi(r as i32) * spec.moment_term(k))
        .sum()
}

/// Tail sums `H(n)` of the envelope terms and the products built from them.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    /// `h[n] = H(n)` for `n <= N`; `H` vanishes beyond.
    h: Vec<f64>,
}

impl Envelope {
    /// `H(n)`, zero for `n >= N`.
    pub fn h(&self, n: usize) -> f64 {
        self.h.get(n).copied().unwrap_or(0.0)
    }

    /// `H(n)` for signed `n`; indices below zero saturate at `H(0)`.
    pub fn h_signed(&self, n: i64) -> f64 {
        self.h(n.max(0) as usize)
    }

    /// `Π_{j=n+1}^{n+m-1} (1 + H(j))`.
    pub fn hprod(&self, n: i64, m: usize) -> f64 {
        let mut p = 1.0;
        for j in (n + 1)..(n + m as i64) {
            p *= 1.0 + self.h_signed(j);
        }
        p
    }

    /// `Π_{j>=from} (1 + H(j))`.
    pub fn tail_product(&self, from: usize) -> f64 {
        self.h.iter().skip(from).map(|h| 1.0 + h).product()
    }

    pub fn support(&self) -> usize {
        self.h.len().saturating_sub(1)
    }
}

/// Envelope `H(n) = Σ_{j>=n} (|2b_j| + |4a_j c_j - 1|)`.
pub fn envelope(spec: &ComplexJacobiSpec) -> Envelope {
    let n = spec.support();
    let mut h = vec![0.0; n + 1];
    for j in (0..n).rev() {
        h[j] = h[j + 1] + spec.envelope_term(j);
    }
    Envelope { h }
}

/// Result of fitting `log v ≈ log C1 - C2 n^β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    /// Root-mean-square residual of the log-linear fit.
    pub fit_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DecayClass {
    Fitted(DecayFit),
    /// Every sample is zero: faster than any stretched exponential.
    FiniteSupport,
}

/// Default β grid `{0.05, 0.10, ..., 1.00}`.
pub fn default_beta_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 * 0.05).collect()
}

fn fit_for_beta(samples: &[(f64, f64)], beta: f64) -> DecayFit {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(n, v)| (n.powf(beta), v.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    DecayFit {
        beta,
        c1: icpt.exp(),
        c2: -slope,
        fit_residual: (ss / m).sqrt(),
    }
}

/// Fit a stretched-exponential decay class to `(n, value)` samples.
///
/// Only samples with `value > 0` and `n > 0` enter the fit. The β minimising the
/// residual over `grid` is refined by golden-section search within one grid
/// step on either side.
pub fn classify_decay(samples: &[(f64, f64)], grid: &[f64]) -> Result<DecayClass> {
    if !samples.is_empty() && samples.iter().all(|s| s.1 == 0.0) {
        return Ok(DecayClass::FiniteSupport);
    }
    let pos: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(n, v)| v > 0.0 && v.is_finite() && n > 0.0)
        .collect();
    if pos.len() < 8 {
        return Err(Error::Precondition(format!(
            "classify_decay needs at least 8 positive samples, got {}",
            pos.len()
        )));
    }
    if grid.is_empty() {
        return Err(Error::Precondition("empty β grid".into()));
    }
    // No measurable decay: the slope is zero for every β.
    let (lo_v, hi_v) = pos
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.1.ln()), hi.max(p.1.ln()))
        });
    if hi_v - lo_v <= 1e-12 * (1.0 + hi_v.abs()) {
        let f = fit_for_beta(&pos, grid[0]);
        return Ok(DecayClass::Fitted(DecayFit {
            beta: 0.0,
            c2: 0.0,
            ..f
        }));
    }
    let fits: Vec<DecayFit> = grid.iter().map(|&b| fit_for_beta(&pos, b)).collect();
    let (k, _) = fits
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.fit_residual.total_cmp(&y.1.fit_residual))
        .expect("nonempty grid");
    let lo = if k > 0 { grid[k - 1] } else { grid[k] };
    let hi = if k + 1 < grid.len() { grid[k + 1] } else { grid[k] };
    let mut best = fits[k];
    if hi > lo {
        let g = golden_min(|b| fit_for_beta(&pos, b).fit_residual, lo, hi, 1e-6);
        let f = fit_for_beta(&pos, g);
        if f.fit_residual < best.fit_residual {
            best = f;
        }
    }
    Ok(DecayClass::Fitted(best))
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}
