mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use oped::basis2d::DiskPoint;
use oped::phantoms::{Phantom, DEFAULT_JUMP_BAND};
use oped::radon2d::{sinogram_acquire, Scheme, Source};
use oped::recon2d::{
    error_metrics, lebesgue_function, naive_reference, proj_from_sinogram, rasterize, reconstruct, CoefficientImage, RasterSpec,
};
use oped::sphere3d::{reconstruct_sphere, sphere_acquire, Measure};
use proptest::prelude::*;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let phantom = Phantom::ring();
    let run = |threads: usize| {
        pool(threads).install(|| {
            let sino = sinogram_acquire(&Source::Phantom(&phantom), 1.5, Scheme::FullCheb(12)).unwrap();
            let img = reconstruct(&sino).unwrap();
            let grid = rasterize(&img, RasterSpec::new(41, 37)).unwrap();
            (sino, img, grid.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>())
        })
    };
    let base = run(1);
    for threads in [2, 3, 7] {
        let other = run(threads);
        assert_eq!(base.0, other.0);
        assert_eq!(base.1, other.1);
        assert_eq!(base.2, other.2);
    }
}

#[test]
fn raster_reproduces_polynomial() {
    let mut rng = rng(41);
    let p = random_poly::<2>(&mut rng, 8);
    let img = reconstruct(&poly_sinogram(&p, 0.5, Scheme::HalfGauss(8))).unwrap();
    let grid = rasterize(&img, RasterSpec::new(64, 64)).unwrap();
    for i in 0..grid.values.len() {
        let (x, y) = grid.spec.pixel_center(i % 64, i / 64);
        if grid.mask[i] {
            assert!((grid.values[i] - p.eval([x, y])).abs() <= 1e-9);
        } else {
            assert!(grid.values[i].is_nan() && x * x + y * y > 1.0);
        }
    }
}

#[test]
fn constant_image_rasterizes_flat() {
    let sino = sinogram_acquire(&Source::Phantom(&Phantom::constant(2.5)), 0.5, Scheme::HalfGauss(4)).unwrap();
    let grid = rasterize(&reconstruct(&sino).unwrap(), RasterSpec::new(20, 20)).unwrap();
    for i in grid.used() {
        assert!((grid.values[i] - 2.5).abs() < 1e-12);
    }
}

#[test]
fn zero_reconstruction_metrics_equal_interior_rms() {
    let spec = RasterSpec::new(120, 120);
    let truth = Phantom::ring().rasterize_truth(spec, DEFAULT_JUMP_BAND).unwrap();
    let zero = rasterize(&CoefficientImage::zeros(0.5, 4), spec).unwrap();
    let m = error_metrics(&truth, &zero).unwrap();
    let used: Vec<usize> = truth.used().collect();
    let rms = (used.iter().map(|&i| truth.values[i].powi(2)).sum::<f64>() / used.len() as f64).sqrt();
    assert_eq!(m.n_pixels_used, used.len());
    assert!((m.rmse_interior - rms).abs() < 1e-15);
    assert!(m.rmse_interior <= m.max_abs_interior);
    // bands around r = 0.1, 0.9 and 1 are left out
    for i in 0..spec.len() {
        let (x, y) = spec.pixel_center(i % 120, i / 120);
        let r = x.hypot(y);
        if truth.mask[i] && (r - 0.9).abs() < DEFAULT_JUMP_BAND {
            assert!(truth.excluded[i]);
        }
    }
}

#[test]
fn lebesgue_growth_and_symmetry() {
    let spec = RasterSpec::new(64, 64);
    let maxima: Vec<f64> = [4, 8, 16].iter().map(|&m| lebesgue_function(0.5, m, spec).unwrap().1).collect();
    assert!(maxima[0] < maxima[1] && maxima[1] < maxima[2], "{maxima:?}");
    // the growth ratio stays within a constant factor of m log(m + 1)
    let trend = |m: f64| m * (m + 1.0).ln();
    for (w, m) in maxima.windows(2).zip([4.0, 8.0]) {
        let ratio = (w[1] / w[0]) / (trend(2.0 * m) / trend(m));
        assert!(ratio > 0.25 && ratio < 4.0, "ratio {ratio}");
    }

    let m = 3;
    let (x, y) = (0.41, -0.27);
    let rot = TAU / (2 * m + 1) as f64;
    let (xr, yr) = (x * rot.cos() - y * rot.sin(), x * rot.sin() + y * rot.cos());
    for mu in [0.0, 0.5, 1.5] {
        assert!((lebesgue_at(mu, m, x, y) - lebesgue_at(mu, m, xr, yr)).abs() <= 1e-9);
    }
}

/// `Λ_m` at one point, through the sum of absolute naive kernel weights.
fn lebesgue_at(mu: f64, m: usize, x: f64, y: f64) -> f64 {
    let scheme = Scheme::FullCheb(m);
    let mut sino = oped::radon2d::SinogramGrid::zeros(mu, scheme).unwrap();
    let p = DiskPoint::new(x, y).unwrap();
    let (views, nodes) = (sino.angles.len(), sino.nodes.len());
    let mut total = 0.0;
    for v in 0..views {
        for j in 0..nodes {
            sino.data[v][j] = 1.0;
            let weight = naive_reference(&sino, p).unwrap();
            sino.data[v][j] = 0.0;
            let psi = (2 * j + 1) as f64 * PI / (4 * m + 2) as f64;
            total += psi.sin().powf(mu) * weight.abs();
        }
    }
    total
}

#[test]
fn lebesgue_field_matches_pointwise_sum() {
    let spec = RasterSpec::new(5, 5);
    let (grid, max) = lebesgue_function(0.5, 2, spec).unwrap();
    for i in grid.used() {
        let (x, y) = spec.pixel_center(i % 5, i / 5);
        let direct = lebesgue_at(0.5, 2, x, y);
        assert!((grid.values[i] - direct).abs() <= 1e-9 * direct, "{} vs {direct}", grid.values[i]);
    }
    assert!(grid.used().all(|i| grid.values[i] <= max));
}

#[test]
fn sphere_degree_slices_match_disk_projection() {
    let f = |x: [f64; 3]| (x[0] - 0.5 * x[1]).exp() + x[2] * x[2];
    let ds = sphere_acquire(&f, 0.5, 5, Measure::Geometric, 1e-12).unwrap();
    let img = reconstruct_sphere(&ds).unwrap();
    let q = ds.to_sinogram().unwrap();
    for k in 0..=5 {
        assert_eq!(img.degree_slice(k).unwrap(), proj_from_sinogram(&q, k).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_equals_naive(mu in prop::sample::select(vec![0.0, 0.5, 1.5, 2.5]), n in 0usize..17,
                         r in 0.0f64..1.0, a in 0.0f64..TAU, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_poly::<2>(&mut rng, n as u32 + 2);
        let sino = poly_sinogram(&p, mu, Scheme::HalfGauss(n));
        let q = DiskPoint::from_polar(r, a).unwrap();
        let fast = reconstruct(&sino).unwrap().eval(q).unwrap();
        let naive = naive_reference(&sino, q).unwrap();
        prop_assert!((fast - naive).abs() <= 1e-10 * (1.0 + fast.abs()), "{} vs {}", fast, naive);
    }

    #[test]
    fn reconstruction_is_linear(mu in prop::sample::select(vec![0.0, 0.5, 1.5]), alpha in -3.0f64..3.0,
                                beta in -3.0f64..3.0, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let scheme = Scheme::FullCheb(4);
        let f = poly_sinogram(&random_poly::<2>(&mut rng, 6), mu, scheme);
        let g = poly_sinogram(&random_poly::<2>(&mut rng, 6), mu, scheme);
        let lhs = reconstruct(&f.combine(alpha, &g, beta).unwrap()).unwrap();
        let (rf, rg) = (reconstruct(&f).unwrap(), reconstruct(&g).unwrap());
        for ((a, b), c) in lhs.coeffs.iter().zip(&rf.coeffs).zip(&rg.coeffs) {
            let rhs = alpha * b + beta * c;
            prop_assert!((a - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
