mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use oped::basis2d::{
    basis_dim, basis_index, degree_entries, reprod_kernel_reference, ridge_chebyshev_u, BasisScratch, DiskBasisTable, DiskPoint,
};
use oped::quadrature::gauss_jacobi;
use oped::specfun::{eval_gegenbauer, norm_table};
use oped::volume3d::{ball_dim, BallBasis};
use proptest::prelude::*;
use rand::Rng;

/// Nodes and normalized weights for `a_μ (1-r²)^(μ-1/2)` on the disk,
/// exact for polynomials of degree `≤ 2 * radial - 1` with `angular > degree`.
fn disk_cubature(mu: f64, radial: usize, angular: usize) -> Vec<([f64; 2], f64)> {
    let rule = gauss_jacobi(mu - 0.5, 0.0, radial - 1).unwrap();
    let mut out = Vec::new();
    for (&v, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = ((1.0 + v) / 2.0).sqrt();
        for a in 0..angular {
            let phi = TAU * a as f64 / angular as f64;
            out.push(([r * phi.cos(), r * phi.sin()], w));
        }
    }
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    out.into_iter().map(|(p, w)| (p, w / total)).collect()
}

#[test]
fn disk_basis_gram_is_identity() {
    let n = 10;
    for mu in [0.0, 0.5, 1.5, 2.5, 0.3] {
        let table = DiskBasisTable::new(mu, n).unwrap();
        let dim = basis_dim(n);
        let mut gram = vec![0.0; dim * dim];
        let mut scratch = BasisScratch::new(n);
        let mut v = vec![0.0; dim];
        for (p, w) in disk_cubature(mu, n + 2, 2 * n + 3) {
            table.eval_all_into(n, p[0], p[1], &mut v, &mut scratch);
            for a in 0..dim {
                for b in 0..dim {
                    gram[a * dim + b] += w * v[a] * v[b];
                }
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                let id = if a == b { 1.0 } else { 0.0 };
                assert!((gram[a * dim + b] - id).abs() <= 1e-11, "μ={mu} ({a},{b}) {}", gram[a * dim + b]);
            }
        }
    }
}

#[test]
fn ball_basis_gram_is_identity() {
    let n = 4;
    for mu in [0.5, 1.5] {
        let basis = BallBasis::new(mu, n).unwrap();
        // r² = (1+v)/2 carries the radial weight (1-r²)^(μ-1/2) r² dr
        let radial = gauss_jacobi(mu - 0.5, 0.5, 8).unwrap();
        let polar = gauss_jacobi(0.0, 0.0, 8).unwrap();
        let azimuth = 2 * n + 3;
        let mut pts = Vec::new();
        for (&v, &wr) in radial.nodes.iter().zip(&radial.weights) {
            let r = ((1.0 + v) / 2.0).sqrt();
            for (&c, &wc) in polar.nodes.iter().zip(&polar.weights) {
                let s = (1.0 - c * c).sqrt();
                for a in 0..azimuth {
                    let phi = TAU * a as f64 / azimuth as f64;
                    pts.push(([r * s * phi.cos(), r * s * phi.sin(), r * c], wr * wc));
                }
            }
        }
        let total: f64 = pts.iter().map(|(_, w)| w).sum();
        let dim = ball_dim(n);
        let mut gram = vec![0.0; dim * dim];
        for (x, w) in &pts {
            let v: Vec<f64> = basis.eval_all(*x).unwrap().into_iter().flatten().collect();
            assert_eq!(v.len(), dim);
            for a in 0..dim {
                for b in 0..dim {
                    gram[a * dim + b] += w / total * v[a] * v[b];
                }
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                let id = if a == b { 1.0 } else { 0.0 };
                assert!((gram[a * dim + b] - id).abs() <= 1e-11, "μ={mu} ({a},{b}) {}", gram[a * dim + b]);
            }
        }
    }
}

fn ridge(k: usize, lambda: Option<f64>, xi: f64, p: DiskPoint) -> f64 {
    let s = p.x * xi.cos() + p.y * xi.sin();
    match lambda {
        Some(l) => eval_gegenbauer(l, k, s).unwrap()[k],
        None => s.powi(k as i32),
    }
}

#[test]
fn ridge_sum_identity() {
    let mut rng = rng(21);
    for n in [0usize, 1, 5, 12, 24] {
        for _ in 0..50 {
            let theta = rng.gen_range(0.0..TAU);
            let p = disk_point(&mut rng);
            let k = rng.gen_range(0..=n);
            for lambda in [Some(0.7), Some(2.0), None] {
                let sum: f64 = (0..=n)
                    .map(|v| {
                        let xi = v as f64 * PI / (n + 1) as f64;
                        ridge_chebyshev_u(k, xi, DiskPoint::on_circle(theta)) * ridge(k, lambda, xi, p)
                    })
                    .sum::<f64>()
                    / (n + 1) as f64;
                let direct = ridge(k, lambda, theta, p);
                assert!((sum - direct).abs() <= 1e-10 * (1.0 + direct.abs()), "n={n} k={k} {sum} {direct}");
            }
        }
    }
    for m in [1usize, 4, 10] {
        for _ in 0..50 {
            let theta = rng.gen_range(0.0..TAU);
            let p = disk_point(&mut rng);
            let k = rng.gen_range(0..=2 * m);
            let sum: f64 = (0..=2 * m)
                .map(|v| {
                    let phi = 2.0 * v as f64 * PI / (2 * m + 1) as f64;
                    ridge_chebyshev_u(k, phi, DiskPoint::on_circle(theta)) * ridge(k, Some(1.3), phi, p)
                })
                .sum::<f64>()
                / (2 * m + 1) as f64;
            let direct = ridge(k, Some(1.3), theta, p);
            assert!((sum - direct).abs() <= 1e-10 * (1.0 + direct.abs()), "m={m} k={k}");
        }
    }
}

#[test]
fn kernel_reproduces_degree_k_from_boundary_samples() {
    let mut rng = rng(22);
    for mu in [0.0, 0.5, 1.5, 2.5] {
        let table = DiskBasisTable::new(mu, 8).unwrap();
        for k in 0..=8 {
            let coeffs: Vec<f64> = degree_entries(k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q_on_circle = |xi: f64| -> f64 {
                degree_entries(k).zip(&coeffs).map(|((l, e), c)| c * table.boundary_value(k, l, e, xi)).sum()
            };
            for n in [k, k + 3] {
                let p = disk_point(&mut rng);
                let values = table.eval_disk_basis(k, p).unwrap();
                let q_p: f64 = values.iter().zip(&coeffs).map(|(a, b)| a * b).sum();
                let sum: f64 = (0..=n)
                    .map(|v| {
                        let xi = v as f64 * PI / (n + 1) as f64;
                        q_on_circle(xi) * table.eval_dk(k, xi, p).unwrap()
                    })
                    .sum::<f64>()
                    / (n + 1) as f64;
                assert!((sum - q_p).abs() <= 1e-9 * (1.0 + q_p.abs()), "μ={mu} k={k} n={n}: {sum} vs {q_p}");
            }
        }
    }
}

#[test]
fn kernel_weight_at_half_is_one_over_k_plus_one() {
    let table = DiskBasisTable::new(0.5, 20).unwrap();
    for k in 0..=20 {
        for l in 0..=k / 2 {
            assert!((table.lambda_kernel(l, k) * (k as f64 + 1.0) - 1.0).abs() <= 1e-12);
        }
    }
    let norms = norm_table(0.5, 0).unwrap();
    assert!((norms.lambda - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_parity(mu in prop::sample::select(vec![0.0, 0.5, 1.5, 2.5]), n in 0usize..10,
                  xi in 0.0f64..TAU, t in -1.0f64..1.0, r in 0.0f64..1.0, a in 0.0f64..TAU) {
        let table = DiskBasisTable::new(mu, n).unwrap();
        let p = DiskPoint::from_polar(r, a).unwrap();
        let lhs = table.eval_phi_n(n, xi, t, p).unwrap();
        let rhs = table.eval_phi_n(n, xi + PI, -t, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn basis_sum_matches_kernel_integral(mu in prop::sample::select(vec![0.0, 0.5, 1.5, 0.8]), k in 0usize..9,
                                          r1 in 0.0f64..0.99, a1 in 0.0f64..TAU, r2 in 0.0f64..0.99, a2 in 0.0f64..TAU) {
        let table = DiskBasisTable::new(mu, k).unwrap();
        let (p, q) = (DiskPoint::from_polar(r1, a1).unwrap(), DiskPoint::from_polar(r2, a2).unwrap());
        let vp = table.eval_disk_basis(k, p).unwrap();
        let vq = table.eval_disk_basis(k, q).unwrap();
        let sum: f64 = vp.iter().zip(&vq).map(|(a, b)| a * b).sum();
        let reference = reprod_kernel_reference(mu, k, p, q, 64).unwrap();
        prop_assert!((sum - reference).abs() <= 1e-9 * (1.0 + reference.abs()), "{} vs {}", sum, reference);
    }

    #[test]
    fn boundary_value_matches_basis(mu in 0.0f64..3.0, k in 0usize..12, xi in 0.0f64..TAU) {
        let table = DiskBasisTable::new(mu, k).unwrap();
        let v = table.eval_disk_basis(k, DiskPoint::on_circle(xi)).unwrap();
        for (l, e) in degree_entries(k) {
            let idx = basis_index(k, l, e) - basis_index(k, 0, 0);
            prop_assert!((v[idx] - table.boundary_value(k, l, e, xi)).abs() <= 1e-10 * (1.0 + v[idx].abs()));
        }
    }
}
