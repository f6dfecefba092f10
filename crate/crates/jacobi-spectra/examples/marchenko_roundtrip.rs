//! Forward scattering, then the Marchenko equation back to the coefficients.

use jacobi_spectra::fixtures::random_admissible_real_spec;
use jacobi_spectra::scattering::{inverse_scattering, scattering_function, verify_decay_bound};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jacobi_spectra::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let spec = random_admissible_real_spec(&mut rng, 6)?;
        let data = scattering_function(&spec, 12)?;
        let back = inverse_scattering(&data, spec.support() + 1)?;
        let bound = verify_decay_bound(&data, &spec, 40);
        println!(
            "support {}: max entry error {:.2e}, decay constant {:.3e}",
            spec.support(),
            back.max_entry_error(&spec),
            bound.c_min
        );
    }
    Ok(())
}
