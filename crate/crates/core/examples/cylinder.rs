//! Slice-by-slice reconstruction on a cylinder, with an exported raw volume.
//!
//! Run with an optional output directory: `cargo run --example cylinder -- out/`

use std::path::PathBuf;

use oped::io;
use oped::volume3d::{cylinder_acquire_numeric, reconstruct_cylinder};

fn main() -> oped::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("oped_cylinder"));
    std::fs::create_dir_all(&out)?;
    let (mu, length, n) = (0.5, 2.0, 6);
    let f = |x: f64, y: f64, z: f64| (x + 0.3 * z).cos() * (1.0 + y * z);
    let img = reconstruct_cylinder(&cylinder_acquire_numeric(&f, mu, length, n, 1e-12)?)?;
    for p in [[0.0, 0.0, 1.0], [0.4, -0.3, 0.2], [-0.6, 0.5, 1.8]] {
        println!("{p:?}: recon {:+.12e} exact {:+.12e}", img.eval(p[0], p[1], p[2])?, f(p[0], p[1], p[2]));
    }
    let ev = img.evaluator()?;
    let z: Vec<f64> = (0..8).map(|i| length * (i as f64 + 0.5) / 8.0).collect();
    let manifest = io::export_volume(&out, "cylinder", [64, 64], &z, Some(length), mu, n, |x, y, _| x * x + y * y <= 1.0, |x, y, z| {
        ev.eval(x, y, z)
    })?;
    println!("wrote {}", manifest.display());
    Ok(())
}
