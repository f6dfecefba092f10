//! Four ways to evaluate the perturbation determinant, compared on a random
//! spec, plus the Taylor coefficients and their bound.

use jacobi_spectra::detkit::{det_recursion, det_truncation_ratio_auto, det_volterra, determinant_series, eval_series};
use jacobi_spectra::fixtures::random_complex_spec;
use jacobi_spectra::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jacobi_spectra::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = random_complex_spec(&mut rng, 5, 0.8)?;
    println!("support {}", spec.support());

    let series = determinant_series(&spec, 2 * spec.support())?;
    for k in 0..6 {
        let z = C64::from_polar(0.8, 1.1 * k as f64);
        let rec = det_recursion(&spec, z, -1);
        let vol = det_volterra(&spec, z, -1)?;
        let rat = det_truncation_ratio_auto(&spec, z)?;
        let (ser, err) = eval_series(&series, z);
        println!(
            "z = {z:.3}: Δ = {rec:.10}  |vol - rec| = {:.1e}  |ratio - rec| = {:.1e}  |series - rec| = {:.1e} (tail ≤ {err:.1e})",
            (vol - rec).norm(),
            (rat - rec).norm(),
            (ser - rec).norm()
        );
    }

    // Δ is a polynomial, so coefficients past twice the support vanish.
    for j in 0..=series.degree_bound() {
        println!("δ_{j:<2} = {:>24.12}   bound {:.3e}", series.coeff(j), series.tail_bound(j));
    }
    Ok(())
}
