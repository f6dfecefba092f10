use jacobi_spectra::fixtures::random_complex_spec;
use jacobi_spectra::spectra::{dense_truncation_oracle, discrete_spectrum, section_eigenvalues};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jacobi_spectra::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let spec = random_complex_spec(&mut rng, 4, 1.0)?;

    // Most section eigenvalues crowd onto [-1, 1]; only the stable ones are real eigenvalues.
    let raw = section_eigenvalues(&spec, 100)?;
    let oracle = dense_truncation_oracle(&spec, 400)?;
    println!("{} section eigenvalues, {} stable", raw.len(), oracle.stable.len());
    for l in &oracle.stable {
        println!("  oracle {l:.10}");
    }
    for (l, m) in discrete_spectrum(&spec, 0.99)? {
        println!("  finder {l:.10} ×{m}");
    }
    Ok(())
}
