//! The oscillatory integral `V`, its level set on the imaginary axis and the
//! constants of the Herglotz function built from it.

use jacobi_spectra::pavlov::PavlovModel;
use jacobi_spectra::C64;

fn main() -> jacobi_spectra::Result<()> {
    let model = PavlovModel::new(0.3, 0.0)?;
    for z in [C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.3, -0.6)] {
        println!("V({z}) = {:.12}", model.v(z)?);
    }

    let roots = model.find_roots(6)?;
    let lambdas = model.predicted_eigenvalues(&roots)?;
    for (k, ((t, u), l)) in roots.roots.iter().zip(&roots.u).zip(&lambdas).enumerate() {
        println!("k = {}: t = {t:.15}, u = {u:.6}, λ = {l:.6e}", k + 1);
    }

    let h = model.herglotz_constants()?;
    println!("α = {:.12} (closed form {:.12}), β = {:.2e}, A = {:.12}", h.alpha, h.alpha_closed, h.beta, h.a_norm);
    println!("f(0.2 + 0.1i) = {:.10}", model.weyl_f(C64::new(0.2, 0.1))?);
    Ok(())
}
