//! A complex Jacobi matrix whose eigenvalues accumulate at an interior point of `[-1, 1]`.
//!
//! The construction starts from the oscillatory integral
//! `V(z) = ∫_0^z e^{-χ(ξ)} cos(γ χ(ξ)) dξ` with `χ(ξ) = (1 + ξ²)^{γ-1} / 32`.
//! Its level set `V(z) = V(i)` on the imaginary axis is an infinite sequence
//! `i t_k` with `t_k ↑ 1`. The function `f(λ) = -1/V_κ(-z(λ))` is Herglotz, so
//! `Im f` on `[-1, 1]` is a weight whose orthonormal polynomials give a real
//! Jacobi matrix. One complex border row then turns the points
//! `z_k = φ(i t_k)` into eigenvalues, where `φ(z) = (z - κ)/(1 - κz)`.
//!
//! * [`PavlovModel`] evaluates `V`, `V_κ` and the Weyl-type function `f`.
//! * [`PavlovModel::find_roots`] and [`PavlovModel::predicted_eigenvalues`] give the eigenvalue sequence.
//! * [`weight`] builds the weight and its recurrence coefficients.
//! * [`assemble`] adds the border row and checks the spectrum.

pub mod assemble;
pub mod weight;

pub use assemble::{
    assemble_matrix, build, verify_accumulation, weyl_residuals, AccumulationReport, MatchRow, PavlovBuild,
};
pub use weight::{recurrence_from_weight, weight_table, WeightTable};

use crate::core::{inverse_joukowski, joukowski};
use crate::quad::{graded_towards_end, integrate, QuadOptions};
use crate::{Error, Result, C64};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadSettings {
    pub abs_tol: f64,
    /// Subinterval budget per integral.
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { abs_tol: 1e-13, max_intervals: 4000 }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PavlovModel {
    pub gamma: f64,
    pub kappa: f64,
    pub quad: QuadSettings,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    /// `t_k`, strictly increasing in `(0, 1)`.
    pub roots: Vec<f64>,
    /// `u_k = χ(i t_k)`, the roots in the variable where they are nearly equispaced.
    pub u: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HerglotzConstants {
    /// `α = lim f(iy)/(iy)` by Richardson extrapolation.
    pub alpha: f64,
    /// `β = lim Re f(iy)` by Richardson extrapolation.
    pub beta: f64,
    /// `A = 1 / ∫_{-1}^{1} Im f(x) dx`.
    pub a_norm: f64,
    /// `α` and `β` from the Taylor coefficients of `V_κ` at 0, for comparison.
    pub alpha_closed: f64,
    pub beta_closed: f64,
}

impl PavlovModel {
    pub fn new(gamma: f64, kappa: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Precondition(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        if !(kappa > -1.0 && kappa < 1.0) {
            return Err(Error::Precondition(format!("kappa must lie in (-1, 1), got {kappa}")));
        }
        Ok(Self { gamma, kappa, quad: QuadSettings::default() })
    }

    fn opts(&self) -> QuadOptions {
        QuadOptions { abs_tol: self.quad.abs_tol, rel_tol: 1e-13, max_intervals: self.quad.max_intervals }
    }

    /// `χ(ξ) = (1 + ξ²)^{γ-1} / 32` on the principal branch.
    pub fn chi(&self, xi: C64) -> C64 {
        (xi * xi + 1.0).powf(self.gamma - 1.0) / 32.0
    }

    /// `e^{-χ} cos(γχ)`, flushed to zero once it underflows.
    ///
    /// Evaluated as `(e^{-(1-iγ)χ} + e^{-(1+iγ)χ})/2` so that near `±i` a
    /// vanishing `e^{-χ}` never multiplies an overflowing cosine.
    pub fn integrand(&self, xi: C64) -> C64 {
        let chi = self.chi(xi);
        if !(chi.re.is_finite() && chi.im.is_finite()) || chi.re - self.gamma * chi.im.abs() > 700.0 {
            return C64::new(0.0, 0.0);
        }
        let ig = C64::new(0.0, self.gamma);
        ((-(chi * (1.0 - ig))).exp() + (-(chi * (1.0 + ig))).exp()) * 0.5
    }

    /// `∫ e^{-χ} cos(γχ) dξ` along the straight segment `from → to`, refined
    /// geometrically towards an endpoint near `±i`.
    pub fn segment_integral(&self, from: C64, to: C64) -> Result<C64> {
        // Rounding can leave a Möbius image of ±i just outside the disk, where
        // the integrand grows without bound.
        let snap = |z: C64| {
            let pole = C64::new(0.0, z.im.signum());
            if (z - pole).norm() < 1e-12 { pole } else { z }
        };
        let (from, to) = (snap(from), snap(to));
        let d = to - from;
        if d.norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        let near = |z: C64| (z * z + 1.0).norm() < 0.1;
        let mut bp = vec![0.0, 1.0];
        if near(to) {
            bp = graded_towards_end(0.0, 1.0, 1e-15);
        }
        if near(from) {
            let mut lo: Vec<f64> = graded_towards_end(1.0, 0.0, 1e-15).into_iter().rev().collect();
            lo.retain(|&s| s < 0.5);
            bp.retain(|&s| s >= 0.5);
            lo.extend(bp);
            bp = lo;
        }
        let r = integrate(|s| self.integrand(from + d * s) * d, &bp, &self.opts())?;
        Ok(r.value)
    }

    /// `V(z)` for `z` in the closed unit disk.
    pub fn v(&self, z: C64) -> Result<C64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("V is evaluated on the closed unit disk, got {z}")));
        }
        self.segment_integral(C64::new(0.0, 0.0), z)
    }

    /// `φ(z) = (z - κ)/(1 - κz)`.
    pub fn mobius(&self, z: C64) -> C64 {
        (z - self.kappa) / (1.0 - z * self.kappa)
    }

    /// `V_κ(z) = V(φ(z)) - V(-κ)`, integrated directly from `-κ = φ(0)` so
    /// that small values keep their relative accuracy.
    pub fn v_shifted(&self, z: C64) -> Result<C64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("V_κ is evaluated on the closed unit disk, got {z}")));
        }
        self.segment_integral(C64::new(-self.kappa, 0.0), self.mobius(z))
    }

    /// The preimage `w_κ = (i + κ)/(1 + iκ)` of `i` under `φ`.
    pub fn w_kappa(&self) -> C64 {
        let i = C64::new(0.0, 1.0);
        (i + self.kappa) / (i * self.kappa + 1.0)
    }

    /// The point `φ(i)` of the unit circle where the `z_k` accumulate.
    pub fn accumulation_z(&self) -> C64 {
        self.mobius(C64::new(0.0, 1.0))
    }

    /// `ν = -2κ/(1 + κ²)`, the accumulation point of the eigenvalues.
    pub fn accumulation_point(&self) -> f64 {
        -2.0 * self.kappa / (1.0 + self.kappa * self.kappa)
    }

    /// `f(λ) = -1/V_κ(-z(λ))`.
    pub fn weyl_f(&self, lambda: C64) -> Result<C64> {
        self.weyl_f_at_z(inverse_joukowski(lambda)?)
    }

    fn weyl_f_at_z(&self, z: C64) -> Result<C64> {
        let v = self.v_shifted(-z)?;
        if v.norm() == 0.0 {
            return Err(Error::Division(format!("V_κ vanishes at {}", -z)));
        }
        Ok(-v.inv())
    }

    /// Boundary value `Im f(cos θ + i0)` for `θ ∈ (0, π)`, where `z → e^{-iθ}`.
    pub fn boundary_im_f(&self, theta: f64) -> Result<f64> {
        let v = self.v_shifted(-C64::from_polar(1.0, -theta))?;
        Ok(v.im / v.norm_sqr())
    }

    /// `V'(x) = e^{-χ} cos(γχ)` and `V''(x)` on the real axis.
    fn v_derivatives(&self, x: f64) -> (f64, f64) {
        let g = self.gamma;
        let chi = (1.0 + x * x).powf(g - 1.0) / 32.0;
        let dchi = (g - 1.0) * (1.0 + x * x).powf(g - 2.0) * 2.0 * x / 32.0;
        let e = (-chi).exp();
        (e * (g * chi).cos(), -dchi * e * ((g * chi).cos() + g * (g * chi).sin()))
    }

    /// `h(U) / s'(U)` with `h(U) = ∫_0^∞ e^{-v} cos(γ(U+v)) s'(U+v) dv`, whose
    /// zeros are the `u_k`.
    ///
    /// Substituting `u = χ(is)` in `∫_t^1 e^{-χ(is)} cos(γχ(is)) ds` gives
    /// `∫_U^∞ e^{-u} cos(γu) s'(u) du` with `s(u) = √(1 - (32u)^{-1/(1-γ)})`,
    /// which is `e^{-U} h(U)`.
    fn root_function(&self, u: f64) -> Result<f64> {
        let p = 1.0 / (1.0 - self.gamma);
        let sprime = |u: f64| {
            let e = (32.0 * u).powf(-p);
            p * 32.0 * (32.0 * u).powf(-p - 1.0) / (2.0 * (1.0 - e).sqrt())
        };
        let scale = sprime(u);
        let g = self.gamma;
        let f = |v: f64| C64::new((-v).exp() * (g * (u + v)).cos() * sprime(u + v) / scale, 0.0);
        let u0 = 1.0 / 32.0;
        let bp: Vec<f64> = if u - u0 < 1.0 {
            let mut b: Vec<f64> = graded_towards_end(1.0, 0.0, 1e-14).into_iter().rev().collect();
            b.extend([2.0, 5.0, 10.0, 20.0, 40.0, 60.0]);
            b
        } else {
            vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0]
        };
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, max_intervals: self.quad.max_intervals };
        Ok(integrate(f, &bp, &opts)?.value.re)
    }

    /// `t = s(u)` and `1 - t²`, both computed without cancellation.
    fn t_of_u(&self, u: f64) -> (f64, f64) {
        let e = (32.0 * u).powf(-1.0 / (1.0 - self.gamma));
        ((1.0 - e).sqrt(), e)
    }

    /// The `count` smallest roots `t_k` of `∫_t^1 e^{-χ(is)} cos(γχ(is)) ds = 0`.
    ///
    /// Sign changes are bracketed on a grid of spacing `π/(8γ)` in `u` and
    /// refined by the Illinois method to `1e-12`. The scan stops with a
    /// warning once `1 - t` falls below `1e-15`.
    pub fn find_roots(&self, count: usize) -> Result<RootReport> {
        if count == 0 {
            return Err(Error::Precondition("count must be at least 1".into()));
        }
        let step = std::f64::consts::PI / (8.0 * self.gamma);
        let mut u = 1.0 / 32.0 + 1e-9;
        let mut hu = self.root_function(u)?;
        let mut report = RootReport { roots: Vec::new(), u: Vec::new(), warnings: Vec::new() };
        while report.roots.len() < count {
            let un = u + step;
            if self.t_of_u(un).1 < 2e-15 {
                report.warnings.push(format!(
                    "only {} of {count} roots lie above the double-precision floor 1 - t = 1e-15",
                    report.roots.len()
                ));
                break;
            }
            let hn = self.root_function(un)?;
            if hu == 0.0 || hu.signum() != hn.signum() {
                let r = illinois(|x| self.root_function(x), u, un, hu, hn, 1e-12)?;
                report.u.push(r);
                report.roots.push(self.t_of_u(r).0);
            }
            u = un;
            hu = hn;
        }
        Ok(report)
    }

    /// `z_k = φ(i t_k)` for the given roots.
    pub fn predicted_z(&self, roots: &RootReport) -> Vec<C64> {
        roots.roots.iter().map(|&t| self.mobius(C64::new(0.0, t))).collect()
    }

    /// `λ_k = joukowski(z_k)`. For `κ = 0` this is `-i(1 - t_k²)/(2t_k)`,
    /// evaluated from `u_k` to keep full relative precision.
    pub fn predicted_eigenvalues(&self, roots: &RootReport) -> Result<Vec<C64>> {
        if self.kappa == 0.0 {
            return Ok(roots
                .u
                .iter()
                .map(|&u| {
                    let (t, e) = self.t_of_u(u);
                    C64::new(0.0, -e / (2.0 * t))
                })
                .collect());
        }
        self.predicted_z(roots).into_iter().map(joukowski).collect()
    }

    /// `α`, `β` and `A`.
    ///
    /// `α` and `β` come from Richardson extrapolation of `Im f(iy)/y` and
    /// `Re f(iy)` over `y ∈ {10, 20, 40, 80}`; the closed forms
    /// `α = 2/c₁`, `β = c₂/c₁²` from `V_κ(z) = c₁z + c₂z² + …` are reported
    /// beside them. `A` uses adaptive quadrature in `θ` with a breakpoint at
    /// the singular point `x = ν`.
    pub fn herglotz_constants(&self) -> Result<HerglotzConstants> {
        let ys = [10.0, 20.0, 40.0, 80.0];
        let mut al = Vec::new();
        let mut be = Vec::new();
        for &y in &ys {
            let f = self.weyl_f(C64::new(0.0, y))?;
            al.push(f.im / y);
            be.push(f.re);
        }
        let alpha = richardson(&al, "alpha")?;
        let beta = richardson(&be, "beta")?;
        let k = self.kappa;
        let (d1, d2) = self.v_derivatives(-k);
        let c1 = d1 * (1.0 - k * k);
        let c2 = 0.5 * (d2 * (1.0 - k * k).powi(2) + d1 * 2.0 * k * (1.0 - k * k));
        let theta_nu = self.accumulation_point().acos();
        let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: self.quad.max_intervals };
        let integral = integrate(
            |th| C64::new(self.boundary_im_f(th).unwrap_or(f64::NAN) * th.sin(), 0.0),
            &[0.0, theta_nu, std::f64::consts::PI],
            &opts,
        )?
        .value
        .re;
        if !(integral > 0.0) {
            return Err(Error::Branch(format!("∫ Im f = {integral} is not positive")));
        }
        Ok(HerglotzConstants {
            alpha,
            beta,
            a_norm: 1.0 / integral,
            alpha_closed: 2.0 / c1,
            beta_closed: c2 / (c1 * c1),
        })
    }
}

/// Richardson extrapolation for samples at `y, 2y, 4y, …` with error in even powers of `1/y`.
fn richardson(v: &[f64], what: &str) -> Result<f64> {
    let mut t = v.to_vec();
    let mut factor = 4.0;
    let mut last_change = f64::INFINITY;
    while t.len() > 1 {
        let next: Vec<f64> = t.windows(2).map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0)).collect();
        last_change = (next[next.len() - 1] - t[t.len() - 1]).abs();
        t = next;
        factor *= 4.0;
    }
    if !(last_change < 1e-6 * (1.0 + t[0].abs())) {
        return Err(Error::NoConvergence {
            what: format!("Richardson extrapolation of {what}"),
            iterations: v.len(),
            estimate: last_change,
        });
    }
    Ok(t[0])
}

/// Illinois variant of regula falsi on a sign-changing bracket.
fn illinois(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() < tol {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            return Ok(0.5 * (a + b));
        }
    }
    Err(Error::NoConvergence { what: "root bracketing".into(), iterations: 200, estimate: (b - a).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn model() -> PavlovModel {
        PavlovModel::new(0.3, 0.0).unwrap()
    }

    #[test]
    fn v_basic_properties() {
        let m = model();
        assert_eq!(m.v(C64::new(0.0, 0.0)).unwrap(), C64::new(0.0, 0.0));
        for t in [0.2, 0.7, 0.999, 1.0] {
            let v = m.v(C64::new(0.0, t)).unwrap();
            assert!(v.re.abs() < 1e-14, "{v}");
        }
        let h = 1e-5;
        let d = (m.v(C64::new(h, 0.0)).unwrap() - m.v(C64::new(-h, 0.0)).unwrap()) / (2.0 * h);
        let want = (-1.0f64 / 32.0).exp() * (0.3f64 / 32.0).cos();
        assert!((d.re - want).abs() < 1e-9);
    }

    #[test]
    fn v_symmetry_and_sign() {
        let m = model();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let z = C64::from_polar(rng.gen_range(0.05..0.999f64).sqrt(), rng.gen_range(0.01..3.13));
            let z = if rng.gen_bool(0.5) { z.conj() } else { z };
            let v = m.v(z).unwrap();
            assert!(v.im * z.im > 0.0, "{z}: {v}");
            assert!((m.v(z.conj()).unwrap() - v.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn roots_increase_with_spacing_pi_over_gamma() {
        let m = model();
        let r = m.find_roots(4).unwrap();
        assert_eq!(r.roots.len(), 4);
        assert!((r.u[0] - 4.5419).abs() < 1e-3, "{:?}", r.u);
        for w in r.roots.windows(2) {
            assert!(w[1] > w[0] && w[1] < 1.0);
        }
        let gaps: Vec<f64> = r.u.windows(2).map(|w| w[1] - w[0]).collect();
        let p = std::f64::consts::PI / 0.3;
        for g in &gaps {
            assert!((g / p - 1.0).abs() < 0.02, "{gaps:?}");
        }
        assert!((gaps[2] / p - 1.0).abs() <= (gaps[0] / p - 1.0).abs());
        // The roots solve the defining level-set equation directly.
        let vi = m.v(C64::new(0.0, 1.0)).unwrap();
        for &t in &r.roots {
            assert!((m.v(C64::new(0.0, t)).unwrap() - vi).norm() < 1e-11);
        }
        assert!(vi.im > 0.0);
        let lam = m.predicted_eigenvalues(&r).unwrap();
        for w in lam.windows(2) {
            assert!(w[0].re == 0.0 && w[0].im < 0.0 && w[1].norm() < w[0].norm());
        }
    }

    #[test]
    fn herglotz_constants_kappa_zero() {
        let m = model();
        let h = m.herglotz_constants().unwrap();
        let closed = 2.0 * (1.0f64 / 32.0).exp() / (0.3f64 / 32.0).cos();
        assert!((h.alpha - closed).abs() < 1e-6, "{h:?}");
        assert!((h.alpha_closed - closed).abs() < 1e-14);
        assert!(h.beta.abs() < 1e-6 && h.beta_closed == 0.0);
        assert!((1.0 / h.a_norm - 1.63258).abs() < 1e-4, "{h:?}");
        for k in 1..20 {
            let lam = C64::new(-1.5 + 0.15 * k as f64, 0.05 * k as f64);
            assert!(m.weyl_f(lam).unwrap().im > 0.0);
        }
    }

    #[test]
    fn shifted_model() {
        let m = PavlovModel::new(0.3, 0.5).unwrap();
        assert!((m.accumulation_z() - C64::new(-0.8, 0.6)).norm() < 1e-15);
        assert!((m.accumulation_point() + 0.8).abs() < 1e-15);
        assert!(m.v_shifted(C64::new(0.0, 0.0)).unwrap().norm() == 0.0);
        assert!((m.mobius(m.w_kappa()) - C64::new(0.0, 1.0)).norm() < 1e-15);
        let h = m.herglotz_constants().unwrap();
        assert!((h.alpha - h.alpha_closed).abs() < 1e-6 && (h.beta - h.beta_closed).abs() < 1e-6, "{h:?}");
        let r = m.find_roots(3).unwrap();
        for l in m.predicted_eigenvalues(&r).unwrap() {
            assert!((l - C64::new(-0.8, 0.0)).norm() < 0.01 && l.im < 0.0);
        }
    }
}
