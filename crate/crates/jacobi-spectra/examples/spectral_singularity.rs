//! `b_0 = e^{iπ/4}/2` puts a zero of `Δ` on the unit circle: no eigenvalue,
//! but a spectral singularity at `λ = cos(π/4)`. Doubling `b_0` pushes the
//! zero inside and it becomes an eigenvalue.

use jacobi_spectra::core::ComplexJacobiSpec;
use jacobi_spectra::spectra::{discrete_spectrum, spectral_singularities};
use jacobi_spectra::C64;
use std::f64::consts::FRAC_PI_4;

fn main() -> jacobi_spectra::Result<()> {
    for r in [0.5, 1.0] {
        let spec = ComplexJacobiSpec::from_diagonal(&[C64::from_polar(r, FRAC_PI_4)]);
        println!("b0 = {r} e^(iπ/4)");
        println!("  eigenvalues: {:?}", discrete_spectrum(&spec, 0.999)?);
        for (zeta, v) in spectral_singularities(&spec, 2048)? {
            println!("  singularity at ζ = {zeta:.12}, λ = {:.12}, |Δ| = {v:.1e}", zeta.re);
        }
    }
    Ok(())
}
