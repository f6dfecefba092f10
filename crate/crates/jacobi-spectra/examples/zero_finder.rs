//! The argument-principle zero finder on a plain polynomial, then on a sector.

use jacobi_spectra::spectra::{find_zeros_disk, find_zeros_sector, FinderOptions, Sector};
use jacobi_spectra::C64;

fn main() -> jacobi_spectra::Result<()> {
    let roots = [C64::new(0.5, 0.0), C64::new(-0.3, 0.4), C64::new(-0.3, 0.4), C64::new(0.1, -0.85)];
    let p = move |z: C64| roots.iter().map(|r| z - r).product::<C64>();

    let opts = FinderOptions::default();
    let rep = find_zeros_disk(&p, 0.95, &opts)?;
    println!("winding number {}", rep.total_winding);
    for z in &rep.zeros {
        println!("  {:.12} ×{}  |p| = {:.1e}", z.z, z.multiplicity, z.residual);
    }

    // Sector edges must avoid zeros; the real root 0.5 is kept just outside.
    let upper = Sector { r0: 0.2, r1: 0.9, phi0: 0.1, phi1: std::f64::consts::PI };
    let rep = find_zeros_sector(&p, upper, &opts)?;
    println!("upper half annulus: {:?}", rep.zeros.iter().map(|z| (z.z, z.multiplicity)).collect::<Vec<_>>());
    Ok(())
}
