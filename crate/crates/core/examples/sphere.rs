//! Reconstruction on the sphere from circle integrals, lifted from the disk
//! operator through the height coordinate. Circle data cannot see the part
//! of `f` that is odd in `x₃`, so only the even part is recovered.

use oped::sphere3d::{eval_on_sphere, reconstruct_sphere, sphere_acquire, Measure};

fn main() -> oped::Result<()> {
    let f = |x: [f64; 3]| x[0] * x[1] - x[2].powi(2) + 0.5;
    let odd = |x: [f64; 3]| x[2].powi(3);
    let ds = sphere_acquire(&f, 0.5, 4, Measure::Geometric, 1e-12)?;
    let img = reconstruct_sphere(&ds)?;
    let odd_img = reconstruct_sphere(&sphere_acquire(&odd, 0.5, 4, Measure::Geometric, 1e-12)?)?;
    for (theta, phi) in [(0.4_f64, 0.2_f64), (1.3, 2.5), (2.9, -1.0)] {
        let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        println!("x = {x:.3?}: recon {:+.15e} exact {:+.15e}", eval_on_sphere(&img, x)?, f(x));
        println!("  odd part x3^3 reconstructs to {:+.3e}", eval_on_sphere(&odd_img, x)?);
    }
    Ok(())
}
