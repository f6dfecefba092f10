//! Jost function and scattering data for a real symmetric matrix.
//!
//! For a single site `b_0 = 0.3` the Jost function is `1 - 0.6 z`.

use jacobi_spectra::core::RealJacobiSpec;
use jacobi_spectra::scattering::{jost_function, jost_function_check, scattering_function, wronskian};
use jacobi_spectra::C64;

fn main() -> jacobi_spectra::Result<()> {
    let spec = RealJacobiSpec::single_site(0.3);
    let z = C64::from_polar(0.7, 0.4);
    println!("f0({z:.3}) = {:.12}  (1 - 0.6 z = {:.12})", jost_function(&spec, z), 1.0 - 0.6 * z);

    let zeta = C64::from_polar(1.0, 1.2);
    for n in 0..3 {
        println!("W_{n}(ζ) = {:.12}", wronskian(&spec, zeta, n)?);
    }

    let check = jost_function_check(&spec)?;
    println!("admissible: {}, min |f0| on the circle {:.4}", check.admissible(), check.boundary_min);

    let data = scattering_function(&spec, 12)?;
    for n in 0..8 {
        println!("F({n}) = {:+.12}   F̂({n}) = {:.12}", data.coeff(n), data.fhat[n]);
    }
    Ok(())
}
