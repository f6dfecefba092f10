//! Zeros of an analytic function by the argument principle on polar sectors.
//!
//! A region is the annular sector `{r e^{iφ} : r0 <= r <= r1, φ0 <= φ <= φ1}`
//! (a pie when `r0 = 0`, a disk when additionally `φ1 - φ0 = 2π`). Working in
//! polar pieces keeps every evaluation point inside the starting disk, which
//! matters for evaluators that are only valid for `|z| < 1`.

use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Polar sector `[r0, r1] × [phi0, phi1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub r0: f64,
    pub r1: f64,
    pub phi0: f64,
    pub phi1: f64,
}

impl Sector {
    pub fn disk(radius: f64) -> Self {
        Self {
            r0: 0.0,
            r1: radius,
            phi0: 0.0,
            phi1: TAU,
        }
    }

    fn is_full_disk(&self) -> bool {
        self.r0 == 0.0 && self.phi1 - self.phi0 >= TAU * (1.0 - 1e-15)
    }

    /// Largest extent, used as a size for stopping rules.
    pub fn diameter(&self) -> f64 {
        let dphi = (self.phi1 - self.phi0).min(TAU);
        (self.r1 - self.r0).max(self.r1 * dphi.min(2.0))
    }

    pub fn center(&self) -> C64 {
        if self.is_full_disk() {
            return C64::new(0.0, 0.0);
        }
        C64::from_polar(0.5 * (self.r0 + self.r1), 0.5 * (self.phi0 + self.phi1))
    }

    /// Membership with absolute slack.
    pub fn contains(&self, z: C64, slack: f64) -> bool {
        let r = z.norm();
        if r < self.r0 - slack || r > self.r1 + slack {
            return false;
        }
        if self.phi1 - self.phi0 >= TAU || r <= slack {
            return true;
        }
        let mid = 0.5 * (self.phi0 + self.phi1);
        let mut d = z.arg() - mid;
        d = (d + PI).rem_euclid(TAU) - PI;
        let half = 0.5 * (self.phi1 - self.phi0);
        d.abs() * r <= half * r + slack
    }

    /// Split into four pieces at jittered midpoints (`s`, `t` in (0, 1)).
    fn split(&self, s: f64, t: f64) -> [Sector; 4] {
        let rm = self.r0 + s * (self.r1 - self.r0);
        if self.is_full_disk() {
            // The seam of a full disk is arbitrary, so rotate it off the real
            // axis where zeros of real functions like to sit.
            let base = self.phi0 + 0.5 + t;
            return [
                Sector { r0: 0.0, r1: rm, phi0: base, phi1: base + PI },
                Sector { r0: 0.0, r1: rm, phi0: base + PI, phi1: base + TAU },
                Sector { r0: rm, r1: self.r1, phi0: base, phi1: base + PI },
                Sector { r0: rm, r1: self.r1, phi0: base + PI, phi1: base + TAU },
            ];
        }
        let pm = self.phi0 + t * (self.phi1 - self.phi0);
        [
            Sector { r0: self.r0, r1: rm, phi0: self.phi0, phi1: pm },
            Sector { r0: self.r0, r1: rm, phi0: pm, phi1: self.phi1 },
            Sector { r0: rm, r1: self.r1, phi0: self.phi0, phi1: pm },
            Sector { r0: rm, r1: self.r1, phi0: pm, phi1: self.phi1 },
        ]
    }

    /// Boundary pieces, oriented counter-clockwise, as maps `[0,1] → C`.
    fn boundary(&self) -> Vec<Path> {
        if self.is_full_disk() {
            return vec![Path::Arc { r: self.r1, a: self.phi0, b: self.phi1 }];
        }
        let mut p = vec![
            Path::Arc { r: self.r1, a: self.phi0, b: self.phi1 },
            Path::Ray { phi: self.phi1, a: self.r1, b: self.r0 },
        ];
        if self.r0 > 0.0 {
            p.push(Path::Arc { r: self.r0, a: self.phi1, b: self.phi0 });
        }
        p.push(Path::Ray { phi: self.phi0, a: self.r0, b: self.r1 });
        p
    }
}

#[derive(Clone, Copy, Debug)]
enum Path {
    Arc { r: f64, a: f64, b: f64 },
    Ray { phi: f64, a: f64, b: f64 },
}

impl Path {
    fn at(&self, t: f64) -> C64 {
        match *self {
            Path::Arc { r, a, b } => C64::from_polar(r, a + t * (b - a)),
            Path::Ray { phi, a, b } => C64::from_polar(a + t * (b - a), phi),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Path::Arc { r, a, b } => r * (b - a).abs(),
            Path::Ray { a, b, .. } => (b - a).abs(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FinderOptions {
    /// `|f|` below this on a contour makes the winding count untrustworthy.
    pub tol: f64,
    /// Seed for the split jitter and contour retries.
    pub seed: u64,
    /// Regions smaller than this are treated as one (possibly multiple) zero.
    pub min_size: f64,
    pub max_depth: usize,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            seed: 0x5eed,
            min_size: 1e-9,
            max_depth: 60,
        }
    }
}

/// A zero of `Δ` inside the disk, with its eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskZero {
    pub z: C64,
    pub multiplicity: usize,
    pub eigenvalue: C64,
    pub residual: f64,
}

#[derive(Clone, Debug, Default)]
pub struct FinderReport {
    pub zeros: Vec<FinderZero>,
    /// Winding number of the outer contour.
    pub total_winding: i64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinderZero {
    pub z: C64,
    pub multiplicity: usize,
    pub residual: f64,
}

struct Unstable;

/// Total change of `arg f` along a path, with adaptive refinement.
///
/// A step is accepted when the chord `|f(b) - f(a)|` is at most half of
/// `min(|f(a)|, |f(b)|)`, which keeps the image segment away from the origin.
fn arg_change(f: &(dyn Fn(C64) -> C64 + Sync), path: &Path, tol: f64) -> std::result::Result<f64, Unstable> {
    let n0 = ((path.length() * 64.0).ceil() as usize).clamp(16, 512);
    let mut total = 0.0;
    let mut stack: Vec<(f64, C64, f64, C64, u32)> = Vec::new();
    let mut ta = 0.0;
    let mut fa = f(path.at(0.0));
    if !(fa.norm() > tol) {
        return Err(Unstable);
    }
    for k in 1..=n0 {
        let tb = k as f64 / n0 as f64;
        let fb = f(path.at(tb));
        if !(fb.norm() > tol) {
            return Err(Unstable);
        }
        stack.push((ta, fa, tb, fb, 0));
        while let Some((a, fa_, b, fb_, depth)) = stack.pop() {
            let ok = (fb_ - fa_).norm() <= 0.5 * fa_.norm().min(fb_.norm());
            if ok || depth >= 48 {
                if !ok {
                    return Err(Unstable);
                }
                total += (fb_ / fa_).arg();
                continue;
            }
            let m = 0.5 * (a + b);
            let fm = f(path.at(m));
            if !(fm.norm() > tol) {
                return Err(Unstable);
            }
            // Right half first so the left half is processed next (in order).
            stack.push((m, fm, b, fb_, depth + 1));
            stack.push((a, fa_, m, fm, depth + 1));
        }
        ta = tb;
        fa = fb;
    }
    Ok(total)
}

fn winding(f: &(dyn Fn(C64) -> C64 + Sync), s: &Sector, tol: f64) -> std::result::Result<i64, Unstable> {
    let mut total = 0.0;
    for p in s.boundary() {
        total += arg_change(f, &p, tol)?;
    }
    let w = total / TAU;
    let r = w.round();
    if (w - r).abs() > 0.05 {
        return Err(Unstable);
    }
    Ok(r as i64)
}

/// Newton iteration with a central-difference derivative; `mult > 1` uses
/// the modified step for multiple roots.
pub(crate) fn newton_polish(f: &(dyn Fn(C64) -> C64 + Sync), z0: C64, mult: usize, scale: f64) -> Option<C64> {
    let mut z = z0;
    let mut h = (scale * 1e-3).clamp(1e-9, 1e-4);
    for _ in 0..200 {
        let fz = f(z);
        if fz.norm() == 0.0 {
            return Some(z);
        }
        let hc = C64::new(h, 0.0);
        let d = (f(z + hc) - f(z - hc)) / (2.0 * h);
        if d.norm() == 0.0 || !d.re.is_finite() {
            return None;
        }
        let step = fz / d * mult as f64;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z -= step;
        h = (step.norm() * 10.0).clamp(1e-9, h);
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1e-3) {
            return Some(z);
        }
    }
    // Accept a converged-in-value point even if steps jitter at roundoff.
    if f(z).norm() < 1e-10 {
        Some(z)
    } else {
        None
    }
}

struct Work {
    sector: Sector,
    id: u64,
    depth: usize,
    count: i64,
}

enum Outcome {
    Done(Vec<FinderZero>),
    Split(Vec<Work>),
    Warn(String, Vec<FinderZero>),
}

fn rng_for(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn process(f: &(dyn Fn(C64) -> C64 + Sync), w: Work, opts: &FinderOptions) -> Outcome {
    let s = w.sector;
    let size = s.diameter();
    if w.count == 1 {
        if let Some(z) = newton_polish(f, s.center(), 1, size) {
            if s.contains(z, 1e-12) {
                return Outcome::Done(vec![FinderZero { z, multiplicity: 1, residual: f(z).norm() }]);
            }
        }
    }
    if size <= opts.min_size || w.depth >= opts.max_depth {
        let m = w.count as usize;
        let z = newton_polish(f, s.center(), m, size).filter(|z| s.contains(*z, size)).unwrap_or(s.center());
        return Outcome::Done(vec![FinderZero { z, multiplicity: m, residual: f(z).norm() }]);
    }
    let mut rng = rng_for(opts.seed, w.id);
    for attempt in 0..6 {
        let (a, b) = if attempt == 0 {
            (0.5, 0.5)
        } else {
            (rng.gen_range(0.35..0.65), rng.gen_range(0.35..0.65))
        };
        let kids = s.split(a, b);
        let counts: std::result::Result<Vec<i64>, Unstable> = kids.iter().map(|k| winding(f, k, opts.tol)).collect();
        if let Ok(c) = counts {
            if c.iter().sum::<i64>() == w.count && c.iter().all(|&x| x >= 0) {
                let next = kids
                    .iter()
                    .zip(&c)
                    .enumerate()
                    .filter(|(_, (_, &n))| n > 0)
                    .map(|(i, (k, &n))| Work {
                        sector: *k,
                        id: w.id.wrapping_mul(4).wrapping_add(i as u64 + 1),
                        depth: w.depth + 1,
                        count: n,
                    })
                    .collect();
                return Outcome::Split(next);
            }
        }
    }
    let m = w.count as usize;
    let z = newton_polish(f, s.center(), m, size).unwrap_or(s.center());
    Outcome::Warn(
        format!(
            "boundary cluster near z = {z:.6}: {} zero(s) could not be separated after 5 retries",
            m
        ),
        vec![FinderZero { z, multiplicity: m, residual: f(z).norm() }],
    )
}

/// All zeros of `f` in `sector`.
///
/// The outer contour's winding number is computed first (shrinking the sector
/// slightly up to five times if `f` is tiny on it); subregions are processed
/// in parallel and merged deterministically in order of `(Re z, Im z)`.
pub fn find_zeros_sector(f: &(dyn Fn(C64) -> C64 + Sync), sector: Sector, opts: &FinderOptions) -> Result<FinderReport> {
    let mut report = FinderReport::default();
    let mut rng = rng_for(opts.seed, 0);
    let mut s = sector;
    let mut count = None;
    for retry in 0..=5 {
        match winding(f, &s, opts.tol) {
            Ok(c) => {
                count = Some(c);
                break;
            }
            Err(Unstable) if retry < 5 => {
                let shrink = rng.gen_range(1e-7..1e-6) * (1 << retry) as f64;
                s.r1 -= shrink * s.r1;
                if s.r0 > 0.0 {
                    s.r0 += shrink * s.r0;
                }
            }
            Err(Unstable) => {}
        }
    }
    let Some(count) = count else {
        return Err(Error::NoConvergence {
            what: "outer winding number (function vanishes on the contour)".into(),
            iterations: 5,
            estimate: opts.tol,
        });
    };
    if s != sector {
        report
            .warnings
            .push(format!("outer contour moved to r in [{}, {}] to avoid a zero", s.r0, s.r1));
    }
    if count < 0 {
        return Err(Error::Domain(format!("negative winding number {count}: f has poles in the region")));
    }
    report.total_winding = count;
    let mut queue = if count > 0 {
        vec![Work { sector: s, id: 1, depth: 0, count }]
    } else {
        Vec::new()
    };
    while !queue.is_empty() {
        let outcomes: Vec<Outcome> = queue.into_par_iter().map(|w| process(f, w, opts)).collect();
        queue = Vec::new();
        for o in outcomes {
            match o {
                Outcome::Done(z) => report.zeros.extend(z),
                Outcome::Split(w) => queue.extend(w),
                Outcome::Warn(msg, z) => {
                    report.warnings.push(msg);
                    report.zeros.extend(z);
                }
            }
        }
    }
    report
        .zeros
        .sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    let total: usize = report.zeros.iter().map(|z| z.multiplicity).sum();
    if total as i64 != count {
        report.warnings.push(format!(
            "multiplicities sum to {total} but the outer winding number is {count}"
        ));
    }
    Ok(report)
}

/// All zeros of `f` in the disk `|z| <= radius`.
pub fn find_zeros_disk(f: &(dyn Fn(C64) -> C64 + Sync), radius: f64, opts: &FinderOptions) -> Result<FinderReport> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Precondition(format!("radius must lie in (0, 1), got {radius}")));
    }
    find_zeros_sector(f, Sector::disk(radius), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(roots: Vec<C64>) -> impl Fn(C64) -> C64 + Sync {
        move |z| roots.iter().fold(C64::new(1.0, 0.0), |acc, &r| acc * (z - r))
    }

    #[test]
    fn finds_simple_and_double_roots() {
        let roots = vec![
            C64::new(0.5, 0.0),
            C64::new(-0.3, 0.4),
            C64::new(-0.3, 0.4),
            C64::new(0.1, -0.8),
            C64::new(0.95, 0.1),
        ];
        let f = poly(roots);
        let rep = find_zeros_disk(&f, 0.9, &FinderOptions::default()).unwrap();
        assert_eq!(rep.total_winding, 4);
        let mult: usize = rep.zeros.iter().map(|z| z.multiplicity).sum();
        assert_eq!(mult, 4, "{rep:?}");
        let dbl = rep.zeros.iter().find(|z| z.multiplicity == 2).expect("double root");
        assert!((dbl.z - C64::new(-0.3, 0.4)).norm() < 1e-6, "{dbl:?}");
        assert!(rep.zeros.iter().any(|z| (z.z - C64::new(0.5, 0.0)).norm() < 1e-13));
    }

    #[test]
    fn zero_on_contour_is_avoided() {
        let f = poly(vec![C64::new(0.5, 0.0)]);
        let rep = find_zeros_disk(&f, 0.5, &FinderOptions::default()).unwrap();
        assert!(!rep.warnings.is_empty());
        assert!(rep.zeros.len() <= 1);
    }

    #[test]
    fn close_pair_in_thin_sector() {
        let a = C64::from_polar(0.9996, 1.5706);
        let b = C64::from_polar(0.99969, 1.5712);
        let f = poly(vec![a, b, C64::new(0.2, 0.0)]);
        let s = Sector {
            r0: 0.997,
            r1: 1.0 - 1e-7,
            phi0: 1.5678,
            phi1: 1.5738,
        };
        let rep = find_zeros_sector(&f, s, &FinderOptions::default()).unwrap();
        assert_eq!(rep.zeros.len(), 2, "{rep:?}");
        assert!((rep.zeros[0].z - a).norm() < 1e-12 || (rep.zeros[0].z - b).norm() < 1e-12);
    }

    #[test]
    fn deterministic_under_threads() {
        let f = poly((0..12).map(|k| C64::from_polar(0.1 + 0.07 * k as f64, k as f64)).collect());
        let r1 = find_zeros_disk(&f, 0.99, &FinderOptions::default()).unwrap();
        let r2 = find_zeros_disk(&f, 0.99, &FinderOptions::default()).unwrap();
        assert_eq!(r1.zeros, r2.zeros);
        assert_eq!(r1.zeros.len(), 12, "{r1:?}");
    }
}
