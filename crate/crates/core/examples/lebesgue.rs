//! Lebesgue constants of the Chebyshev fan operator on a raster.

use oped::recon2d::{lebesgue_function, RasterSpec};

fn main() -> oped::Result<()> {
    let spec = RasterSpec::new(96, 96);
    for mu in [0.0, 0.5, 1.5] {
        for m in [4, 8, 16, 32] {
            let (grid, max) = lebesgue_function(mu, m, spec)?;
            let centre = grid.get(48, 48);
            println!("mu={mu} m={m:2}: max {max:8.3}  near centre {centre:8.3}  max/(m log m) {:.3}", max / (m as f64 * (m as f64).ln()));
        }
    }
    Ok(())
}
