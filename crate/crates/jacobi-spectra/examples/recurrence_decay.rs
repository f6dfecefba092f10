//! Orthogonal-polynomial recurrence coefficients of the weight `A Im f`, and
//! how fast they approach the free values.

use jacobi_spectra::core::{classify_decay, default_beta_grid};
use jacobi_spectra::pavlov::{recurrence_from_weight, weight_table, PavlovModel};

fn main() -> jacobi_spectra::Result<()> {
    let model = PavlovModel::new(0.3, 0.0)?;
    let h = model.herglotz_constants()?;
    let table = weight_table(&model, &h, 1 << 15)?;
    println!("mass {:.12}, smoothness sums {:?}", table.mass(), table.smoothness_sums());

    let (a, b) = recurrence_from_weight(&table, 4000)?;
    let d: Vec<f64> = a.iter().zip(&b).map(|(a, b)| (a - 0.5).abs() + b.abs()).collect();
    for n in [0, 10, 100, 400, 1000, 2000, 3999] {
        println!("n = {n:>4}: |a - 1/2| + |b| = {:.3e}", d[n]);
    }

    let samples: Vec<(f64, f64)> = d.iter().enumerate().map(|(n, &v)| ((n + 1) as f64, v)).filter(|s| (1e-12..=1e-2).contains(&s.1)).collect();
    println!("{:?}", classify_decay(&samples, &default_beta_grid())?);
    Ok(())
}
