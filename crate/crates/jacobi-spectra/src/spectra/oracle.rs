//! Dense eigenvalues of finite sections, used as an independent check.

use crate::core::{dist_to_segment, ComplexJacobiSpec};
use crate::{Error, Result, C64};
use nalgebra::DMatrix;

/// Eigenvalues of the complex tridiagonal matrix with diagonal `d` and
/// off-diagonal products `p[k] = a_k c_k` (length `d.len() - 1`).
///
/// The matrix is diagonally similar to the complex symmetric one with
/// off-diagonal `sqrt(p[k])`, which is diagonalised by implicit QL sweeps with
/// complex Givens-like rotations (`O(n²)` in total). Rotations can break down
/// for complex symmetric matrices (`f² + g² = 0` with `f, g ≠ 0`); the caller
/// then falls back to [`dense_eigenvalues`].
pub fn tridiagonal_eigenvalues(d: &[C64], p: &[C64]) -> Result<Vec<C64>> {
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_eq!(p.len() + 1, n);
    let mut d = d.to_vec();
    let mut e: Vec<C64> = p.iter().map(|x| x.sqrt()).collect();
    e.push(C64::new(0.0, 0.0));
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= eps * dd || e[m].norm() < 1e-300 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::NoConvergence {
                    what: format!("tridiagonal QL at index {l}"),
                    iterations: iter,
                    estimate: e[l].norm(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            let mut r = (g * g + one).sqrt();
            if (g - r).norm() > (g + r).norm() {
                r = -r;
            }
            g = d[m] - d[l] + e[l] / (g + r);
            let (mut s, mut c, mut pp) = (one, one, zero);
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r.norm() < 1e-300 {
                    if f.norm() > 0.0 || g.norm() > 0.0 {
                        return Err(Error::NoConvergence {
                            what: "complex rotation breakdown in tridiagonal QL".into(),
                            iterations: iter,
                            estimate: 0.0,
                        });
                    }
                    d[i + 1] -= pp;
                    e[m] = zero;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - pp;
                r = (d[i] - g) * s + c * b * 2.0;
                pp = s * r;
                d[i + 1] = g + pp;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= pp;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(d)
}

/// Eigenvalues of a general complex matrix via nalgebra's Schur decomposition.
pub fn dense_eigenvalues(m: DMatrix<C64>) -> Result<Vec<C64>> {
    let n = m.nrows();
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 100 * n.max(10)).ok_or_else(|| {
        Error::NoConvergence {
            what: "dense Schur decomposition".into(),
            iterations: 100 * n.max(10),
            estimate: f64::NAN,
        }
    })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// The section `J_m` (rows `0..=m`) as a dense matrix.
pub fn section_matrix(spec: &ComplexJacobiSpec, m: usize) -> DMatrix<C64> {
    let n = m + 1;
    let mut a = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for k in 0..n {
        a[(k, k)] = spec.b(k);
        if k + 1 < n {
            a[(k, k + 1)] = spec.a(k);
            a[(k + 1, k)] = spec.c(k);
        }
    }
    a
}

/// All eigenvalues of the section `J_m`.
pub fn section_eigenvalues(spec: &ComplexJacobiSpec, m: usize) -> Result<Vec<C64>> {
    let d: Vec<C64> = (0..=m).map(|k| spec.b(k)).collect();
    let p: Vec<C64> = (0..m).map(|k| spec.a(k) * spec.c(k)).collect();
    match tridiagonal_eigenvalues(&d, &p) {
        Ok(v) if v.iter().all(|x| x.re.is_finite() && x.im.is_finite()) => Ok(v),
        _ => dense_eigenvalues(section_matrix(spec, m)),
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Eigenvalues stable under `m → 2m` and away from `[-1, 1]`.
    pub stable: Vec<C64>,
    pub m: usize,
}

/// Eigenvalues of `J_m` that persist in `J_{2m}` within `1e-6` and lie
/// farther than `1e-3` from `[-1, 1]`, sorted by `(Re λ, Im λ)`.
pub fn dense_truncation_oracle(spec: &ComplexJacobiSpec, m: usize) -> Result<OracleResult> {
    if m < spec.support() + 10 {
        return Err(Error::Precondition(format!(
            "oracle section size {m} must be at least support + 10 = {}",
            spec.support() + 10
        )));
    }
    let (e1, e2) = rayon::join(|| section_eigenvalues(spec, m), || section_eigenvalues(spec, 2 * m));
    let (e1, e2) = (e1?, e2?);
    let cand: Vec<C64> = e1.into_iter().filter(|&l| dist_to_segment(l) > 1e-3).collect();
    let mut pool: Vec<C64> = e2.into_iter().filter(|&l| dist_to_segment(l) > 5e-4).collect();
    let mut stable = Vec::new();
    for l in cand {
        if let Some((i, d)) = pool
            .iter()
            .enumerate()
            .map(|(i, &x)| (i, (x - l).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        {
            if d <= 1e-6 {
                pool.swap_remove(i);
                stable.push(l);
            }
        }
    }
    stable.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(OracleResult { stable, m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ql_matches_schur_on_random_complex_tridiagonal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let n = 30;
            let d: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let a: Vec<C64> = (0..n - 1).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let cc: Vec<C64> = (0..n - 1).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let p: Vec<C64> = a.iter().zip(&cc).map(|(x, y)| x * y).collect();
            let mut ql = tridiagonal_eigenvalues(&d, &p).unwrap();
            let mut m = DMatrix::from_element(n, n, c(0.0, 0.0));
            for k in 0..n {
                m[(k, k)] = d[k];
                if k + 1 < n {
                    m[(k, k + 1)] = a[k];
                    m[(k + 1, k)] = cc[k];
                }
            }
            let mut sc = dense_eigenvalues(m).unwrap();
            let key = |x: &C64, y: &C64| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            ql.sort_by(key);
            sc.sort_by(key);
            for x in &ql {
                let best = sc.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-8, "{x} unmatched ({best})");
            }
        }
    }

    #[test]
    fn free_section_spectrum() {
        let m = 100;
        let ev = section_eigenvalues(&ComplexJacobiSpec::free(), m).unwrap();
        for l in &ev {
            assert!(l.im.abs() < 1e-12 && l.re.abs() < 1.0);
        }
        let mut re: Vec<f64> = ev.iter().map(|l| l.re).collect();
        re.sort_by(f64::total_cmp);
        for (k, x) in re.iter().enumerate() {
            let exact = -((k + 1) as f64 * std::f64::consts::PI / (m + 2) as f64).cos();
            assert!((x - exact).abs() < 1e-12);
        }
        assert!(dense_truncation_oracle(&ComplexJacobiSpec::free(), 100).unwrap().stable.is_empty());
    }

    #[test]
    fn rank_one_oracle() {
        let s = ComplexJacobiSpec::from_diagonal(&[c(1.0, 0.0)]);
        let r = dense_truncation_oracle(&s, 400).unwrap();
        assert_eq!(r.stable.len(), 1);
        assert!((r.stable[0] - c(1.25, 0.0)).norm() < 1e-8);
        let s = ComplexJacobiSpec::from_diagonal(&[c(0.0, 1.0)]);
        let r = dense_truncation_oracle(&s, 400).unwrap();
        assert_eq!(r.stable.len(), 1);
        assert!((r.stable[0] - c(0.0, 0.75)).norm() < 1e-8);
    }
}
