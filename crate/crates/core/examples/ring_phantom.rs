//! The ring phantom through the whole pipeline: Chebyshev fan data, fast
//! reconstruction, rasterization, interior error metrics and a PGM image.
//!
//! Run with an optional output directory: `cargo run --example ring_phantom -- out/`

use std::path::PathBuf;

use oped::io::{self, ImageFormat};
use oped::phantoms::{Phantom, DEFAULT_JUMP_BAND};
use oped::radon2d::{sinogram_acquire, Scheme, Source};
use oped::recon2d::{error_metrics, rasterize, reconstruct, RasterSpec};

fn main() -> oped::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&out)?;
    let phantom = Phantom::ring();
    let spec = RasterSpec::new(200, 200);
    let truth = phantom.rasterize_truth(spec, DEFAULT_JUMP_BAND)?;

    for m in [25, 50, 100] {
        let sino = sinogram_acquire(&Source::Phantom(&phantom), 0.0, Scheme::FullCheb(m))?;
        let grid = rasterize(&reconstruct(&sino)?, spec)?;
        let metrics = error_metrics(&truth, &grid)?;
        println!(
            "m = {m:3}: rmse {:.4} max {:.4} over {} pixels",
            metrics.rmse_interior, metrics.max_abs_interior, metrics.n_pixels_used
        );
        if m == 100 {
            let path = out.join("ring_m100.pgm");
            io::write_image(&grid, &path, ImageFormat::Pgm16)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
