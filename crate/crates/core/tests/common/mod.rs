#![allow(dead_code)]

use oped::basis2d::DiskPoint;
use oped::polynomial::Polynomial;
use oped::radon2d::{sinogram_acquire, Scheme, SinogramGrid, Source};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disk.
pub fn disk_point(rng: &mut impl Rng) -> DiskPoint {
    let r = rng.gen::<f64>().sqrt() * 0.999_999;
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    DiskPoint::from_polar(r, phi).unwrap()
}

pub fn random_poly<const D: usize>(rng: &mut impl Rng, n: u32) -> Polynomial<D> {
    Polynomial::dense(n, || rng.gen_range(-1.0..1.0))
}

/// Exact sinogram of a bivariate polynomial.
pub fn poly_sinogram(p: &Polynomial<2>, mu: f64, scheme: Scheme) -> SinogramGrid {
    let proj = |mu: f64, c: oped::radon2d::ChordSpec| Ok(p.radon(mu, c.theta, c.t));
    sinogram_acquire(&Source::Projection(&proj), mu, scheme).unwrap()
}

/// Largest |P| over a point set, the sup-norm proxy used in tolerances.
pub fn sup_on(points: &[DiskPoint], p: &Polynomial<2>) -> f64 {
    points.iter().map(|q| p.eval([q.x, q.y]).abs()).fold(0.0, f64::max)
}
