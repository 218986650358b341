//! Attenuated projections of a basis polynomial in closed form, compared
//! with direct numerical chord integrals.

use oped::basis2d::{DiskBasisTable, DiskPoint};
use oped::radon2d::{chord_integral_numeric, radon_polynomial, ChordSpec};

fn main() -> oped::Result<()> {
    let k = 5;
    for mu in [0.0, 0.5, 1.5] {
        let table = DiskBasisTable::new(mu, k)?;
        let coeffs: Vec<f64> = (0..=k).map(|i| 1.0 / (i + 1) as f64).collect();
        let f = |x: f64, y: f64| {
            let v = table.eval_disk_basis(k, DiskPoint::new(x, y).unwrap()).unwrap();
            v.iter().zip(&coeffs).map(|(a, b)| a * b).sum::<f64>()
        };
        for (theta, t) in [(0.3, 0.0), (1.2, 0.45), (4.0, -0.8)] {
            let chord = ChordSpec::new(theta, t)?;
            let closed = radon_polynomial(&table, k, &coeffs, chord)?;
            let numeric = chord_integral_numeric(f, mu, chord, 1e-13)?;
            println!("mu={mu} theta={theta} t={t:+}: closed {closed:+.15e} numeric {numeric:+.15e} diff {:.1e}", (closed - numeric).abs());
        }
    }
    Ok(())
}
