//! Convergence exponent of a point set, and Gevrey-type envelopes of `Δ`.

use jacobi_spectra::core::ComplexJacobiSpec;
use jacobi_spectra::detkit::determinant_series;
use jacobi_spectra::spectra::{cantor_endpoints, default_eps_grid, gevrey_envelope, gevrey_minimum_check, limit_set_metrics};
use jacobi_spectra::C64;

fn main() -> jacobi_spectra::Result<()> {
    for depth in [4, 8, 12] {
        let m = limit_set_metrics(&cantor_endpoints(depth), &default_eps_grid())?;
        println!("Cantor depth {depth}: {} gaps, τ ≈ {:.3} (log 2/log 3 = {:.4})", m.gaps.len(), m.tau_estimate, 2f64.ln() / 3f64.ln());
    }
    println!("two points: τ = {}", limit_set_metrics(&[-0.5, 0.5], &default_eps_grid())?.tau_estimate);

    let spec = ComplexJacobiSpec::from_diagonal(&[C64::new(0.4, 0.2), C64::new(-0.1, 0.3)]);
    let series = determinant_series(&spec, 2 * spec.support() + 8)?;
    let env = gevrey_envelope(&series, 6, &[0.25, 0.5, 1.0, 2.0])?;
    println!("G_n = {:?}", env.g);
    // G_k vanishes past the degree of Δ, so T(s) = 0 for a polynomial.
    for &(s, t) in &env.t {
        println!("T({s}) = {t:.6}");
    }
    for t in [0.5, 0.3, 0.1] {
        let (discrete, continuous) = gevrey_minimum_check(t, 0.5);
        println!("min_x t^x x^(x/2) at t = {t}: {discrete:.3e} on the integers, {continuous:.3e} continuous");
    }
    Ok(())
}
