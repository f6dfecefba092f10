//! Border row, assembled matrix and the check that its eigenvalues sit where predicted.

use super::weight::{recurrence_from_weight, weight_table};
use super::{HerglotzConstants, PavlovModel, RootReport};
use crate::core::{dist_to_segment, ComplexJacobiSpec};
use crate::detkit::det_recursion;
use crate::spectra::{dense_truncation_oracle, disk_zeros, find_zeros_sector, Engine, FinderOptions, Sector};
use crate::{Error, Result, C64};
use serde::Serialize;

/// The matrix with border row `(b_0, a_0)` followed by the recurrence
/// coefficients `(b̃_n, ã_n)`.
///
/// `a_0² = 1/(απA)` and `b_0 = -β/α - 1/(α conj(V_κ(w_κ)))`. With these the
/// eigenvalue condition `λ - b_0 + a_0² m̃(λ) = 0`, where `m̃ = πA(f - αλ - β)`
/// is the Weyl function of the recurrence part, reduces to
/// `V_κ(-z) = conj(V_κ(w_κ))`, which holds exactly at `z_k = φ(i t_k)`.
pub fn assemble_matrix(model: &PavlovModel, h: &HerglotzConstants, a_tilde: &[f64], b_tilde: &[f64]) -> Result<ComplexJacobiSpec> {
    let scale = h.alpha * std::f64::consts::PI * h.a_norm;
    if !(scale > 0.0) {
        return Err(Error::InvalidSpec(format!("α A = {} must be positive", h.alpha * h.a_norm)));
    }
    let a0 = C64::new(1.0 / scale, 0.0).sqrt();
    let vw = model.v_shifted(model.w_kappa())?;
    let b0 = -h.beta / h.alpha - (vw.conj() * h.alpha).inv();
    let n = a_tilde.len().min(b_tilde.len());
    let mut a = vec![a0];
    let mut b = vec![b0];
    a.extend(a_tilde[..n].iter().map(|&x| C64::new(x, 0.0)));
    b.extend(b_tilde[..n].iter().map(|&x| C64::new(x, 0.0)));
    ComplexJacobiSpec::from_entries(a.clone(), b, a)
}

/// `|f(λ_k) - αb_0 - β| / α` for each root, which vanishes when `λ_k` is an
/// eigenvalue of the infinite matrix.
pub fn weyl_residuals(model: &PavlovModel, h: &HerglotzConstants, b0: C64, roots: &RootReport) -> Result<Vec<f64>> {
    model
        .predicted_z(roots)
        .into_iter()
        .map(|z| Ok((model.weyl_f_at_z(z)? - b0 * h.alpha - h.beta).norm() / h.alpha))
        .collect()
}

/// Everything produced by [`build`].
#[derive(Clone, Debug, Serialize)]
pub struct PavlovBuild {
    pub model: PavlovModel,
    pub roots: RootReport,
    pub predicted: Vec<C64>,
    pub herglotz: HerglotzConstants,
    pub weight_mass: f64,
    pub a_tilde: Vec<f64>,
    pub b_tilde: Vec<f64>,
    #[serde(skip)]
    pub spec: ComplexJacobiSpec,
    pub weyl_residuals: Vec<f64>,
}

/// Roots, Herglotz constants, weight, recurrence and border row in one go.
/// The node count is the smallest power of two with at least `8 n_max` nodes
/// (and at least `2^12`).
pub fn build(model: &PavlovModel, n_max: usize, root_count: usize) -> Result<PavlovBuild> {
    let roots = model.find_roots(root_count)?;
    let predicted = model.predicted_eigenvalues(&roots)?;
    let herglotz = model.herglotz_constants()?;
    let nodes = (8 * n_max).max(1 << 12).next_power_of_two();
    let table = weight_table(model, &herglotz, nodes)?;
    let (a_tilde, b_tilde) = recurrence_from_weight(&table, n_max)?;
    let spec = assemble_matrix(model, &herglotz, &a_tilde, &b_tilde)?;
    let weyl_residuals = weyl_residuals(model, &herglotz, spec.b(0), &roots)?;
    Ok(PavlovBuild {
        model: *model,
        roots,
        predicted,
        herglotz,
        weight_mass: table.mass(),
        a_tilde,
        b_tilde,
        spec,
        weyl_residuals,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchRow {
    pub k: usize,
    pub predicted: C64,
    pub computed: Option<C64>,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AccumulationReport {
    /// Stable eigenvalues of the dense sections (only those away from `[-1, 1]`).
    pub oracle: Vec<C64>,
    pub oracle_m: usize,
    /// Eigenvalues with `|z| <= 0.995`.
    pub disk: Vec<C64>,
    /// Eigenvalues found in the thin sector at the accumulation point.
    pub local: Vec<C64>,
    pub matches: Vec<MatchRow>,
    pub matched_count: usize,
    pub warnings: Vec<String>,
}

/// Compare the computed spectrum of `spec` with `predicted`.
///
/// Three sources are pooled: the dense oracle at sizes `m` and `2m`, the zero
/// finder on `|z| <= 0.995`, and the zero finder on a thin polar sector
/// around `z_acc` reaching out to `|z| = 1 - 1e-7`. The sector is needed
/// because eigenvalues close to an interior point of `[-1, 1]` have `|z|`
/// within `1e-3` of the unit circle, which the other two cannot see. Its size
/// is eight times the distance of the first predicted `z_k` from the circle.
/// Predictions are then matched in order to the nearest unused computed
/// eigenvalue within `0.05`.
pub fn verify_accumulation(
    spec: &ComplexJacobiSpec,
    predicted: &[C64],
    predicted_z: &[C64],
    z_acc: C64,
    m: usize,
    opts: &FinderOptions,
) -> Result<AccumulationReport> {
    if m < 200 {
        return Err(Error::Precondition(format!("m must be at least 200, got {m}")));
    }
    let mut warnings = Vec::new();
    let oracle_m = m.max(spec.support() + 10);
    let oracle = dense_truncation_oracle(spec, oracle_m)?.stable;
    let (dz, w) = disk_zeros(spec, 0.995, Engine::Recursion, opts)?;
    warnings.extend(w);
    let disk: Vec<C64> = dz.iter().flat_map(|z| std::iter::repeat_n(z.eigenvalue, z.multiplicity)).collect();
    let mut local = Vec::new();
    if let Some(z1) = predicted_z.first() {
        let depth = (1.0 - z1.norm()).max(1e-6);
        let width = 8.0 * depth;
        let sector = Sector {
            r0: (1.0 - width).max(0.995),
            r1: 1.0 - 1e-7,
            phi0: z_acc.arg() - width,
            phi1: z_acc.arg() + width,
        };
        let s = spec.clone();
        let f = move |z: C64| det_recursion(&s, z, -1);
        let rep = find_zeros_sector(&f, sector, opts)?;
        warnings.extend(rep.warnings);
        for z in rep.zeros {
            let lam = (z.z + z.z.inv()) * 0.5;
            local.extend(std::iter::repeat_n(lam, z.multiplicity));
        }
    }
    let mut pool: Vec<C64> = Vec::new();
    for &l in oracle.iter().chain(&disk).chain(&local) {
        if !pool.iter().any(|p| (p - l).norm() < 1e-8) {
            pool.push(l);
        }
    }
    let mut used = vec![false; pool.len()];
    let mut matches = Vec::new();
    for (k, &p) in predicted.iter().enumerate() {
        let best = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &l)| (i, l, (l - p).norm()))
            .min_by(|a, b| a.2.total_cmp(&b.2));
        match best {
            Some((i, l, d)) if d <= 0.05 => {
                used[i] = true;
                matches.push(MatchRow { k: k + 1, predicted: p, computed: Some(l), distance: d });
            }
            _ => matches.push(MatchRow { k: k + 1, predicted: p, computed: None, distance: f64::INFINITY }),
        }
    }
    if local.iter().any(|l| dist_to_segment(*l) > 1e-2) {
        warnings.push("sector search returned eigenvalues far from [-1, 1]".into());
    }
    let matched_count = matches.iter().filter(|r| r.computed.is_some()).count();
    Ok(AccumulationReport { oracle, oracle_m, disk, local, matches, matched_count, warnings })
}
