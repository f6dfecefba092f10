//! Build the bordered matrix whose eigenvalues accumulate at `λ = 0` and check
//! the first few against the predicted sequence.
//!
//! Pass `kappa` as the first argument to move the accumulation point.

use jacobi_spectra::pavlov::{build, verify_accumulation, PavlovModel};
use jacobi_spectra::spectra::FinderOptions;

fn main() -> jacobi_spectra::Result<()> {
    let kappa: f64 = std::env::args().nth(1).map_or(0.0, |s| s.parse().expect("kappa must be a number"));
    let model = PavlovModel::new(0.3, kappa)?;
    let b = build(&model, 2000, 4)?;
    println!("accumulation point {:.6}, weight mass {:.10}", model.accumulation_point(), b.weight_mass);
    println!("border row: b0 = {:.10}, a0 = {:.10}", b.spec.b(0), b.spec.a(0));

    let pz = model.predicted_z(&b.roots);
    let rep = verify_accumulation(&b.spec, &b.predicted, &pz, model.accumulation_z(), 400, &FinderOptions::default())?;
    for (row, r) in rep.matches.iter().zip(&b.weyl_residuals) {
        match row.computed {
            Some(c) => println!("k = {}: predicted {:.4e}, found {:.4e} (distance {:.1e}), residual {r:.1e}", row.k, row.predicted, c, row.distance),
            None => println!("k = {}: predicted {:.4e}, not resolved, residual {r:.1e}", row.k, row.predicted),
        }
    }
    for w in rep.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
