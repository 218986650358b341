//! Exactness suites run by `oped selftest`.
//!
//! Every suite feeds exact projections of random polynomials through a
//! reconstruction operator that must reproduce them, and reports the
//! largest pointwise error against a tolerance.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis2d::DiskPoint;
use crate::error::Result;
use crate::polynomial::Polynomial;
use crate::quadrature::{cheb2_point_rule, cylinder_axis_rule, gauss_symmetric_jacobi};
use crate::radon2d::{sinogram_acquire, ChordSpec, Scheme, Source};
use crate::recon2d::reconstruct;
use crate::sphere3d::{eval_on_sphere, reconstruct_sphere, Measure, SphereDataset};
use crate::volume3d::{ball_acquire, ball_line, cylinder_acquire, reconstruct_ball, reconstruct_cylinder, BallWeights};

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

struct Sizes {
    disk_n: usize,
    polys: usize,
    points: usize,
    cheb_m: usize,
    vol_n: usize,
}

const QUICK: Sizes = Sizes { disk_n: 6, polys: 3, points: 40, cheb_m: 5, vol_n: 3 };
const FULL: Sizes = Sizes { disk_n: 12, polys: 10, points: 200, cheb_m: 8, vol_n: 6 };

fn random_poly<const D: usize>(rng: &mut ChaCha8Rng, n: usize) -> Polynomial<D> {
    Polynomial::dense(n as u32, || rng.gen_range(-1.0..1.0))
}

fn disk_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|_| {
            let r = rng.gen::<f64>().sqrt() * 0.999_999;
            let phi = rng.gen_range(0.0..TAU);
            [r * phi.cos(), r * phi.sin()]
        })
        .collect()
}

/// Relative error measure `|P - A P| / (1 + max |P|)` over `points`.
fn scaled_error(points: &[[f64; 2]], exact: impl Fn([f64; 2]) -> f64, approx: impl Fn([f64; 2]) -> Result<f64>) -> Result<f64> {
    let sup = points.iter().map(|&p| exact(p).abs()).fold(0.0, f64::max);
    let mut err = 0.0f64;
    for &p in points {
        err = err.max((exact(p) - approx(p)?).abs());
    }
    Ok(err / (1.0 + sup))
}

fn quadrature_suite(s: &Sizes) -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for mu in [0.0, 0.5, 1.5, 2.5] {
        for n in 0..=2 * s.disk_n {
            worst = worst.max(gauss_symmetric_jacobi(mu, n)?.certify());
            cases += 1;
        }
    }
    for n in 0..=2 * s.disk_n {
        worst = worst.max(cheb2_point_rule(n).certify());
        worst = worst.max(cylinder_axis_rule(2.5, n)?.certify());
        cases += 2;
    }
    Ok(SuiteResult { name: "quadrature certificates", cases, max_error: worst, tolerance: 1e-11 })
}

fn disk_suite(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for mu in [0.0, 0.5, 1.5, 2.5] {
        for n in 1..=s.disk_n {
            for _ in 0..s.polys {
                let p = random_poly::<2>(rng, n);
                let proj = |mu: f64, c: ChordSpec| Ok(p.radon(mu, c.theta, c.t));
                let img = reconstruct(&sinogram_acquire(&Source::Projection(&proj), mu, Scheme::HalfGauss(n))?)?;
                let pts = disk_points(rng, s.points);
                worst = worst.max(scaled_error(&pts, |q| p.eval(q), |q| img.eval(DiskPoint::new(q[0], q[1])?))?);
                cases += 1;
            }
        }
    }
    Ok(SuiteResult { name: "disk Gauss scheme exactness", cases, max_error: worst, tolerance: 1e-8 })
}

fn fan_suite(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for mu in [0.5, 1.5] {
        for m in 3..=s.cheb_m {
            let deg = 2 * m - (2.0 * mu) as usize;
            for _ in 0..s.polys {
                let p = random_poly::<2>(rng, deg);
                let proj = |mu: f64, c: ChordSpec| Ok(p.radon(mu, c.theta, c.t));
                let img = reconstruct(&sinogram_acquire(&Source::Projection(&proj), mu, Scheme::FullCheb(m))?)?;
                let pts = disk_points(rng, s.points);
                worst = worst.max(scaled_error(&pts, |q| p.eval(q), |q| img.eval(DiskPoint::new(q[0], q[1])?))?);
                cases += 1;
            }
        }
    }
    Ok(SuiteResult { name: "Chebyshev scheme exactness", cases, max_error: worst, tolerance: 1e-8 })
}

fn sphere_suite(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for mu in [0.0, 0.5] {
        for n in 1..=s.disk_n.min(8) {
            for _ in 0..s.polys {
                let mut f = random_poly::<3>(rng, n);
                f.terms.retain(|(e, _)| e[2] % 2 == 0);
                let lifted = f.even_lift_to_disk().expect("even in the last variable");
                let mut ds = SphereDataset {
                    mu,
                    n,
                    angles: Scheme::HalfGauss(n).angles(),
                    nodes: Scheme::HalfGauss(n).nodes(mu)?,
                    data: Vec::new(),
                    measure: Measure::Reduced,
                };
                ds.data = ds
                    .angles
                    .iter()
                    .map(|&a| ds.nodes.iter().map(|&t| lifted.radon(mu, a, t)).collect())
                    .collect();
                let img = reconstruct_sphere(&ds)?;
                let mut sup = 0.0f64;
                let mut err = 0.0f64;
                for _ in 0..s.points {
                    let z: f64 = rng.gen_range(-1.0..1.0);
                    let phi = rng.gen_range(0.0..TAU);
                    let r = (1.0 - z * z).sqrt();
                    let x = [r * phi.cos(), r * phi.sin(), z];
                    let exact = f.eval(x);
                    sup = sup.max(exact.abs());
                    err = err.max((exact - eval_on_sphere(&img, x)?).abs());
                }
                worst = worst.max(err / (1.0 + sup));
                cases += 1;
            }
        }
    }
    Ok(SuiteResult { name: "sphere exactness", cases, max_error: worst, tolerance: 1e-8 })
}

fn cylinder_suite(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for mu in [0.0, 0.5, 1.5] {
        for length in [1.0, 2.5] {
            let n = s.vol_n;
            let f = random_poly::<3>(rng, n);
            let proj = |z: f64, mu: f64, c: ChordSpec| Ok(f.slice(z).radon(mu, c.theta, c.t));
            let img = reconstruct_cylinder(&cylinder_acquire(&proj, mu, length, n)?)?;
            let ev = img.evaluator()?;
            let mut sup = 0.0f64;
            let mut err = 0.0f64;
            for p in disk_points(rng, s.points) {
                let z = rng.gen_range(0.0..length);
                let exact = f.eval([p[0], p[1], z]);
                sup = sup.max(exact.abs());
                err = err.max((exact - ev.eval(p[0], p[1], z)?).abs());
            }
            worst = worst.max(err / (1.0 + sup));
            cases += 1;
        }
    }
    Ok(SuiteResult { name: "cylinder exactness", cases, max_error: worst, tolerance: 1e-8 })
}

fn ball_suite(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for mu in [0.0, 0.5, 1.5] {
        let n = s.vol_n;
        let f = random_poly::<3>(rng, n);
        let proj = |mu: f64, theta: f64, t: f64, w: f64| {
            let (p0, dir) = ball_line(theta, t, w);
            Ok(f.ball_line_integral(p0, dir, mu))
        };
        let img = reconstruct_ball(&ball_acquire(&proj, mu, n)?, BallWeights::Consistent)?;
        let basis = img.evaluator()?;
        let mut sup = 0.0f64;
        let mut err = 0.0f64;
        for _ in 0..s.points {
            let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            let r = rng.gen::<f64>().cbrt() * 0.999_999 / norm.max(1e-12);
            let x = v.map(|c| c * r);
            let exact = f.eval(x);
            sup = sup.max(exact.abs());
            err = err.max((exact - img.eval_with(&basis, x)?).abs());
        }
        worst = worst.max(err / (1.0 + sup));
        cases += 1;
    }
    Ok(SuiteResult { name: "ball exactness", cases, max_error: worst, tolerance: 1e-8 })
}

/// Runs every suite with a fixed seed; `quick` uses smaller degrees.
pub fn run_all(quick: bool) -> Result<Vec<SuiteResult>> {
    let sizes = if quick { &QUICK } else { &FULL };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0bed);
    Ok(vec![
        quadrature_suite(sizes)?,
        disk_suite(sizes, &mut rng)?,
        fan_suite(sizes, &mut rng)?,
        sphere_suite(sizes, &mut rng)?,
        cylinder_suite(sizes, &mut rng)?,
        ball_suite(sizes, &mut rng)?,
    ])
}
