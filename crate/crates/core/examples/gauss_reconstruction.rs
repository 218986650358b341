//! Reconstruction on the half-turn Gauss grid. A polynomial of degree at most
//! `n` comes back exactly; a smooth function converges as `n` grows.

use oped::basis2d::DiskPoint;
use oped::radon2d::{sinogram_acquire, Scheme, Source};
use oped::recon2d::{naive_reference, reconstruct};

fn main() -> oped::Result<()> {
    let mu = 0.5;
    let points = [(0.0, 0.0), (0.3, -0.5), (-0.7, 0.2), (0.1, 0.95)];

    let poly = |x: f64, y: f64| 1.0 + x - 2.0 * x * y + y.powi(3);
    let sino = sinogram_acquire(&Source::Function { f: &poly, rel_tol: 1e-13 }, mu, Scheme::HalfGauss(3))?;
    let img = reconstruct(&sino)?;
    for &(x, y) in &points {
        let p = DiskPoint::new(x, y)?;
        println!("cubic at ({x}, {y}): {:+.15e} vs {:+.15e}", img.eval(p)?, poly(x, y));
    }
    // the direct double sum agrees with the fast path
    let p = DiskPoint::new(0.3, -0.5)?;
    println!("naive double sum: {:+.15e}", naive_reference(&sino, p)?);

    let smooth = |x: f64, y: f64| (x - 0.5 * y).exp() * (3.0 * y).cos();
    for n in [4, 8, 16, 24] {
        let img = reconstruct(&sinogram_acquire(&Source::Function { f: &smooth, rel_tol: 1e-13 }, mu, Scheme::HalfGauss(n))?)?;
        let err = points
            .iter()
            .map(|&(x, y)| (img.eval(DiskPoint::new(x, y).unwrap()).unwrap() - smooth(x, y)).abs())
            .fold(0.0, f64::max);
        println!("n = {n:2}: max error {err:.2e}");
    }
    Ok(())
}
