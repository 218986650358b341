//! The orthonormal disk basis: evaluation, the kernel weight `Λ`, and a
//! discrete Gram check.

use std::f64::consts::TAU;

use oped::basis2d::{basis_dim, BasisScratch, DiskBasisTable, DiskPoint};
use oped::quadrature::gauss_jacobi;

fn main() -> oped::Result<()> {
    let (mu, n) = (1.5, 6);
    let table = DiskBasisTable::new(mu, n)?;
    println!("Lambda = {:.16e}", table.lambda());

    let p = DiskPoint::from_polar(0.6, 1.1)?;
    for k in 0..=2 {
        println!("degree {k} at (r=0.6, phi=1.1): {:?}", table.eval_disk_basis(k, p)?);
    }

    // polar cubature: Gauss-Jacobi in r² times an equispaced angle
    let radial = gauss_jacobi(mu - 0.5, 0.0, n + 1)?;
    let angular = 2 * n + 3;
    let dim = basis_dim(n);
    let mut gram = vec![0.0; dim * dim];
    let mut total = 0.0;
    let (mut v, mut scratch) = (vec![0.0; dim], BasisScratch::new(n));
    for (&u, &w) in radial.nodes.iter().zip(&radial.weights) {
        let r = ((1.0 + u) / 2.0).sqrt();
        for a in 0..angular {
            let phi = TAU * a as f64 / angular as f64;
            table.eval_all_into(n, r * phi.cos(), r * phi.sin(), &mut v, &mut scratch);
            total += w;
            for i in 0..dim {
                for j in 0..dim {
                    gram[i * dim + j] += w * v[i] * v[j];
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * dim + j] / total - id).abs());
        }
    }
    println!("{dim} basis functions up to degree {n}, max |G - I| = {worst:.2e}");
    Ok(())
}
