//! Reconstruction in the unit ball from weighted line integrals, with both
//! node weightings.

use oped::volume3d::{ball_acquire_numeric, reconstruct_ball, BallWeights};

fn main() -> oped::Result<()> {
    let mu = 0.5;
    let f = |x: [f64; 3]| (x[0] - x[1] + 0.5 * x[2]).sin();
    let probes = [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5], [-0.5, 0.4, -0.1]];
    for n in [2, 4, 8] {
        let ds = ball_acquire_numeric(&f, mu, n, 1e-12)?;
        for weights in [BallWeights::Consistent, BallWeights::AsPrinted] {
            let img = reconstruct_ball(&ds, weights)?;
            let err = probes.iter().map(|&x| (img.eval(x).unwrap() - f(x)).abs()).fold(0.0, f64::max);
            println!("n = {n} {weights:?}: max error {err:.2e}");
        }
    }
    Ok(())
}
