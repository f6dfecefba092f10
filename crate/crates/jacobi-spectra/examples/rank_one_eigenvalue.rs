//! A single diagonal perturbation `b_0 = 1` has exactly one eigenvalue,
//! `λ = 1.25`, sitting at `z = 1/2` in the disk. Every engine should find it.

use jacobi_spectra::core::ComplexJacobiSpec;
use jacobi_spectra::spectra::{dense_truncation_oracle, disk_zeros, Engine, FinderOptions};
use jacobi_spectra::C64;

fn main() -> jacobi_spectra::Result<()> {
    let spec = ComplexJacobiSpec::from_diagonal(&[C64::new(1.0, 0.0)]);
    let opts = FinderOptions::default();

    for engine in [Engine::Recursion, Engine::Volterra, Engine::Ratio, Engine::Series] {
        let (zeros, _) = disk_zeros(&spec, 0.99, engine, &opts)?;
        for z in &zeros {
            println!("{engine:?}: z = {:.12}, λ = {:.12}, multiplicity {}", z.z, z.eigenvalue, z.multiplicity);
        }
    }

    let oracle = dense_truncation_oracle(&spec, 400)?;
    println!("dense sections of size {} and {}: {:?}", oracle.m, 2 * oracle.m, oracle.stable);
    Ok(())
}
