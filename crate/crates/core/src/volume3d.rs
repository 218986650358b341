//! Volume reconstruction from stacks of attenuated planar projections.
//!
//! * Cylinder `B_L = B² × [0, L]` with weight `W_μ(x, y) W_L(z)`: parallel
//!   slices `z = z_i` at the Chebyshev nodes of `[0, L]`, reconstructed in
//!   the product basis `P̂_{l,ε}^k(x, y) p_a(z)`, `k + a ≤ n`.
//! * Ball `B³` with weight `(1-|x|²)^(μ-1/2)`: chords in the planes
//!   `x₃ = w`, reconstructed in the basis
//!   `Q_{l,k,j}(x) = h_k (1-x₃²)^{k/2} P̂_j^k(x'/√(1-x₃²)) C̃_{l-k}^{k+μ+1}(x₃)`.
//!
//! Both reconstructions are spectral: Gegenbauer moments in `t`, then the
//! axis (or `w`) stage, then the angular stage of the disk code.

use rayon::prelude::*;

use crate::basis2d::{basis_dim, basis_index, degree_entries, BasisScratch, DiskBasisTable, DiskPoint};
use crate::error::{OpedError, Result};
use crate::quadrature::{cylinder_axis_rule, gauss_symmetric_jacobi};
use crate::radon2d::{chord_integral_numeric, ChordSpec, Scheme};
use crate::recon2d::{assemble_coefficients, gegenbauer_table, scheme_weights, view_moments, CoefficientImage};
use crate::specfun::{eval_gegenbauer_orthonormal, norm_table, pochhammer};

/// `p_0 = 1`, `p_l(z) = √2 cos(l arccos(2z/L - 1))`, orthonormal for
/// `W_L(z) = 1/(π√(z(L-z)))`.
pub fn axis_basis(length: f64, l_max: usize, z: f64) -> Result<Vec<f64>> {
    if !(length > 0.0) || !(z > 0.0 && z < length) {
        return Err(OpedError::Domain(format!("axis point {z} outside (0, {length})")));
    }
    Ok(axis_basis_unchecked(length, l_max, z))
}

fn axis_basis_unchecked(length: f64, l_max: usize, z: f64) -> Vec<f64> {
    let theta = (2.0 * z / length - 1.0).clamp(-1.0, 1.0).acos();
    (0..=l_max)
        .map(|l| if l == 0 { 1.0 } else { std::f64::consts::SQRT_2 * (l as f64 * theta).cos() })
        .collect()
}

/// Slice projections `data[ν][j][i] = R_{ξ_ν}^μ(f(·, ·, z_i); t_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderDataset {
    pub mu: f64,
    pub length: f64,
    pub n: usize,
    pub angles: Vec<f64>,
    pub nodes: Vec<f64>,
    pub axis_nodes: Vec<f64>,
    pub data: Vec<Vec<Vec<f64>>>,
}

impl CylinderDataset {
    pub fn zeros(mu: f64, length: f64, n: usize) -> Result<Self> {
        let scheme = Scheme::HalfGauss(n);
        let axis = cylinder_axis_rule(length, n)?;
        Ok(Self {
            mu,
            length,
            n,
            angles: scheme.angles(),
            nodes: scheme.nodes(mu)?,
            axis_nodes: axis.nodes,
            data: vec![vec![vec![0.0; n + 1]; n + 1]; n + 1],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.n + 1;
        let ok = self.angles.len() == m
            && self.nodes.len() == m
            && self.axis_nodes.len() == m
            && self.data.len() == m
            && self.data.iter().all(|v| v.len() == m && v.iter().all(|r| r.len() == m));
        if !ok {
            return Err(OpedError::Shape(format!("cylinder dataset of order {} needs {m}³ values", self.n)));
        }
        if self.axis_nodes.iter().any(|&z| !(z > 0.0 && z < self.length)) {
            return Err(OpedError::Shape("axis nodes must lie inside (0, L)".into()));
        }
        Ok(())
    }
}

/// Fills a cylinder dataset from slice projections
/// `proj(z, μ, chord) = R_θ^μ(f(·, ·, z); t)`, in parallel.
pub fn cylinder_acquire(
    proj: &(dyn Fn(f64, f64, ChordSpec) -> Result<f64> + Sync),
    mu: f64,
    length: f64,
    n: usize,
) -> Result<CylinderDataset> {
    let mut ds = CylinderDataset::zeros(mu, length, n)?;
    let m = n + 1;
    let flat: Vec<f64> = (0..m * m * m)
        .into_par_iter()
        .map(|idx| {
            let (v, j, i) = (idx / (m * m), (idx / m) % m, idx % m);
            let chord = ChordSpec::new(ds.angles[v], ds.nodes[j])?;
            proj(ds.axis_nodes[i], mu, chord).map_err(|e| e.with_context(format!("view {v}, node {j}, slice {i}")))
        })
        .collect::<Result<_>>()?;
    for (idx, val) in flat.into_iter().enumerate() {
        ds.data[idx / (m * m)][(idx / m) % m][idx % m] = val;
    }
    Ok(ds)
}

/// [`cylinder_acquire`] with numerical chord integrals of `f(x, y, z)`.
pub fn cylinder_acquire_numeric(
    f: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    mu: f64,
    length: f64,
    n: usize,
    rel_tol: f64,
) -> Result<CylinderDataset> {
    let proj = |z: f64, mu: f64, c: ChordSpec| chord_integral_numeric(|x, y| f(x, y, z), mu, c, rel_tol);
    cylinder_acquire(&proj, mu, length, n)
}

/// `Σ_a p_a(z) g_a(x, y)` with `g_a` a disk image of degree `n - a`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderImage {
    pub mu: f64,
    pub length: f64,
    pub n: usize,
    /// `axis[a]` multiplies `p_a`.
    pub axis: Vec<CoefficientImage>,
}

impl CylinderImage {
    pub fn evaluator(&self) -> Result<CylinderEvaluator<'_>> {
        Ok(CylinderEvaluator {
            image: self,
            table: DiskBasisTable::new(self.mu, self.n)?,
        })
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        self.evaluator()?.eval(x, y, z)
    }
}

pub struct CylinderEvaluator<'a> {
    image: &'a CylinderImage,
    table: DiskBasisTable,
}

impl CylinderEvaluator<'_> {
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        let n = self.image.n;
        let p = axis_basis(self.image.length, n, z)?;
        DiskPoint::new(x, y)?;
        let mut vals = vec![0.0; basis_dim(n)];
        self.table.eval_all_into(n, x, y, &mut vals, &mut BasisScratch::new(n));
        let mut total = 0.0;
        for (a, img) in self.image.axis.iter().enumerate() {
            let g = img.coeffs.iter().zip(&vals).fold(0.0, |acc, (c, v)| acc + c * v);
            total += p[a] * g;
        }
        Ok(total)
    }
}

/// `B_{n,L}^μ f` by moments per `(ν, i)`, the axis stage against `p_a(z_i)`,
/// and the angular stage per axis order.
pub fn reconstruct_cylinder(ds: &CylinderDataset) -> Result<CylinderImage> {
    ds.validate()?;
    let n = ds.n;
    let table = DiskBasisTable::new(ds.mu, n)?;
    let weights = scheme_weights(ds.mu, Scheme::HalfGauss(n))?;
    let ctab = gegenbauer_table(table.lambda(), n, &ds.nodes);
    let axis = cylinder_axis_rule(ds.length, n)?;
    let pz: Vec<Vec<f64>> = axis.nodes.iter().map(|&z| axis_basis_unchecked(ds.length, n, z)).collect();
    // moments[ν][a][k], summed over slices i in order
    let moments: Vec<Vec<Vec<f64>>> = ds
        .data
        .par_iter()
        .map(|view| {
            let mut out = vec![vec![0.0; n + 1]; n + 1];
            let mut row = vec![0.0; n + 1];
            for (i, (wz, p)) in axis.weights.iter().zip(&pz).enumerate() {
                for (j, r) in row.iter_mut().enumerate() {
                    *r = view[j][i];
                }
                let m = view_moments(&weights, &ctab, &row, n);
                for (a, oa) in out.iter_mut().enumerate() {
                    let f = wz * p[a];
                    for (o, mk) in oa.iter_mut().zip(&m).take(n - a + 1) {
                        *o += f * mk;
                    }
                }
            }
            out
        })
        .collect();
    let axis_images = (0..=n)
        .map(|a| {
            let deg = n - a;
            let mom: Vec<Vec<f64>> = moments.iter().map(|v| v[a][..=deg].to_vec()).collect();
            CoefficientImage {
                mu: ds.mu,
                degree: deg,
                coeffs: assemble_coefficients(&table, deg, &ds.angles, &mom, 0..=deg),
                scheme: Some(Scheme::HalfGauss(n)),
            }
        })
        .collect();
    Ok(CylinderImage {
        mu: ds.mu,
        length: ds.length,
        n,
        axis: axis_images,
    })
}

/// Literal triple sum `Σ_ν Σ_j Σ_i γ_{ν,j,i} T_{ν,j,i}(x)` with the kernel
/// `Σ_k ((k+λ)/λ) C_k(t_j) D_k(ξ_ν; x, y) Σ_{a≤n-k} p_a(z_i) p_a(z)`.
pub fn naive_cylinder(ds: &CylinderDataset, x: f64, y: f64, z: f64) -> Result<f64> {
    ds.validate()?;
    let n = ds.n;
    let table = DiskBasisTable::new(ds.mu, n)?;
    let weights = scheme_weights(ds.mu, Scheme::HalfGauss(n))?;
    let lambda = table.lambda();
    let axis = cylinder_axis_rule(ds.length, n)?;
    let pz = axis_basis(ds.length, n, z)?;
    let p = DiskPoint::new(x, y)?;
    let mut total = 0.0;
    for (v, &xi) in ds.angles.iter().enumerate() {
        for (j, &t) in ds.nodes.iter().enumerate() {
            let c = crate::specfun::eval_gegenbauer(lambda, n, t)?;
            for (i, &zi) in axis.nodes.iter().enumerate() {
                let pzi = axis_basis(ds.length, n, zi)?;
                let mut kernel = 0.0;
                for k in 0..=n {
                    let dk = table.eval_dk(k, xi, p)?;
                    let axis_sum: f64 = (0..=n - k).map(|a| pzi[a] * pz[a]).sum();
                    kernel += (k as f64 + lambda) / lambda * c[k] * dk * axis_sum;
                }
                total += ds.data[v][j][i] * weights[j] * axis.weights[i] * kernel;
            }
        }
    }
    Ok(total)
}

/// Start point and direction of the chord `(θ, t)` in the plane `x₃ = w`:
/// the line `x cos θ + y sin θ = t √(1-w²)`.
pub fn ball_line(theta: f64, t: f64, w: f64) -> ([f64; 3], [f64; 3]) {
    let rho = (1.0 - w * w).max(0.0).sqrt();
    let (s, c) = theta.sin_cos();
    ([rho * t * c, rho * t * s, w], [-s, c, 0.0])
}

/// `R_θ^μ(f; t, w) = (1-w²)^μ R_θ^μ(g_w; t)` with
/// `g_w(x, y) = f(√(1-w²) x, √(1-w²) y, w)`; this equals the weighted
/// arc-length integral along [`ball_line`].
pub fn ball_chord_data(f: impl Fn([f64; 3]) -> f64, mu: f64, theta: f64, t: f64, w: f64, rel_tol: f64) -> Result<f64> {
    if !(w.abs() < 1.0) {
        return Ok(if mu > 0.0 { 0.0 } else { std::f64::consts::PI * f([0.0, 0.0, w.signum()]) });
    }
    let rho2 = 1.0 - w * w;
    let rho = rho2.sqrt();
    let chord = ChordSpec::new(theta, t)?;
    let r = chord_integral_numeric(|x, y| f([rho * x, rho * y, w]), mu, chord, rel_tol)?;
    Ok(rho2.powf(mu) * r)
}

/// How the ball operator weights its quadrature nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallWeights {
    /// `λ_j λ_k (1-t_j²)^{-μ} (1-w_k²)^{-μ}`: the Gauss rules applied to the
    /// integrals of the partial-sum formula.
    Consistent,
    /// `λ_j λ_k` without the endpoint factors.
    AsPrinted,
}

/// Chord data `data[ν][j][k] = R_{ξ_ν}^μ(f; t_j, w_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallDataset {
    pub mu: f64,
    pub n: usize,
    pub angles: Vec<f64>,
    /// Gauss nodes for `(1-t²)^μ`.
    pub t_nodes: Vec<f64>,
    /// Gauss nodes for `(1-w²)^{μ+1/2}`.
    pub w_nodes: Vec<f64>,
    pub data: Vec<Vec<Vec<f64>>>,
}

impl BallDataset {
    pub fn zeros(mu: f64, n: usize) -> Result<Self> {
        Ok(Self {
            mu,
            n,
            angles: Scheme::HalfGauss(n).angles(),
            t_nodes: gauss_symmetric_jacobi(mu, n)?.nodes,
            w_nodes: gauss_symmetric_jacobi(mu + 0.5, n)?.nodes,
            data: vec![vec![vec![0.0; n + 1]; n + 1]; n + 1],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.n + 1;
        let ok = self.angles.len() == m
            && self.t_nodes.len() == m
            && self.w_nodes.len() == m
            && self.data.len() == m
            && self.data.iter().all(|v| v.len() == m && v.iter().all(|r| r.len() == m));
        if !ok {
            return Err(OpedError::Shape(format!("ball dataset of order {} needs {m}³ values", self.n)));
        }
        Ok(())
    }
}

/// Fills a ball dataset from `proj(μ, θ, t, w)`, in parallel.
pub fn ball_acquire(
    proj: &(dyn Fn(f64, f64, f64, f64) -> Result<f64> + Sync),
    mu: f64,
    n: usize,
) -> Result<BallDataset> {
    let mut ds = BallDataset::zeros(mu, n)?;
    let m = n + 1;
    let flat: Vec<f64> = (0..m * m * m)
        .into_par_iter()
        .map(|idx| {
            let (v, j, k) = (idx / (m * m), (idx / m) % m, idx % m);
            proj(mu, ds.angles[v], ds.t_nodes[j], ds.w_nodes[k])
                .map_err(|e| e.with_context(format!("view {v}, node {j}, plane {k}")))
        })
        .collect::<Result<_>>()?;
    for (idx, val) in flat.into_iter().enumerate() {
        ds.data[idx / (m * m)][(idx / m) % m][idx % m] = val;
    }
    Ok(ds)
}

/// [`ball_acquire`] with [`ball_chord_data`] of a pointwise function.
pub fn ball_acquire_numeric(f: &(dyn Fn([f64; 3]) -> f64 + Sync), mu: f64, n: usize, rel_tol: f64) -> Result<BallDataset> {
    let proj = |mu: f64, theta: f64, t: f64, w: f64| ball_chord_data(f, mu, theta, t, w, rel_tol);
    ball_acquire(&proj, mu, n)
}

/// Constants and evaluation of the orthonormal ball basis up to degree `n`.
#[derive(Debug, Clone)]
pub struct BallBasis {
    pub mu: f64,
    pub n: usize,
    pub disk: DiskBasisTable,
    /// `a_{μ,3} = 1/∫_{B³} W_μ`.
    pub a_mu3: f64,
    /// `h_k = √((μ+2)_k / (μ+3/2)_k)`.
    pub h: Vec<f64>,
}

/// Number of basis elements of total degree `≤ n` in three variables.
pub fn ball_dim(n: usize) -> usize {
    (n + 1) * (n + 2) * (n + 3) / 6
}

impl BallBasis {
    pub fn new(mu: f64, n: usize) -> Result<Self> {
        let norms = norm_table(mu, 0)?;
        Ok(Self {
            mu,
            n,
            disk: DiskBasisTable::new(mu, n)?,
            a_mu3: norms.a_mu3,
            h: (0..=n).map(|k| (pochhammer(mu + 2.0, k) / pochhammer(mu + 1.5, k)).sqrt()).collect(),
        })
    }

    /// `C̃_{0..=n-k}^{k+μ+1}(z)` for every `k ≤ n`.
    fn axis_values(&self, z: f64) -> Vec<Vec<f64>> {
        (0..=self.n)
            .map(|k| eval_gegenbauer_orthonormal(k as f64 + self.mu + 1.0, self.n - k, z).expect("valid Gegenbauer index"))
            .collect()
    }

    /// Every `Q_{l,k,j}(x)`, grouped by `l`; within a group the layout is
    /// the disk layout of degree `l` over `(k, j)`.
    pub fn eval_all(&self, x: [f64; 3]) -> Result<Vec<Vec<f64>>> {
        let r2 = x.iter().map(|v| v * v).sum::<f64>();
        if r2 > 1.0 + 1e-12 {
            return Err(OpedError::Domain(format!("point {x:?} outside the unit ball")));
        }
        let n = self.n;
        let rho2 = (1.0 - x[2] * x[2]).max(0.0);
        let rho = rho2.sqrt();
        let mut disk = vec![0.0; basis_dim(n)];
        if rho > 0.0 {
            let (u, v) = (x[0] / rho, x[1] / rho);
            let s = (u * u + v * v).sqrt().max(1.0);
            self.disk.eval_all_into(n, u / s, v / s, &mut disk, &mut BasisScratch::new(n));
        } else {
            self.disk.eval_all_into(n, 0.0, 0.0, &mut disk, &mut BasisScratch::new(n));
        }
        let axis = self.axis_values(x[2]);
        Ok((0..=n)
            .map(|l| {
                let mut out = vec![0.0; basis_dim(l)];
                for k in 0..=l {
                    let radial = if k == 0 { 1.0 } else { rho.powi(k as i32) };
                    let f = self.h[k] * radial * axis[k][l - k];
                    for (lp, e) in degree_entries(k) {
                        let idx = basis_index(k, lp, e);
                        out[idx] = f * disk[idx];
                    }
                }
                out
            })
            .collect())
    }
}

/// `Q_{l,k,j}(x)` for a single element; `j` indexes the degree-`k` disk
/// entries in storage order.
pub fn ball_basis_eval(mu: f64, l: usize, k: usize, j: usize, x: [f64; 3]) -> Result<f64> {
    if !(k <= l && j <= k) {
        return Err(OpedError::Range(format!("need j ≤ k ≤ l, got ({l}, {k}, {j})")));
    }
    let basis = BallBasis::new(mu, l)?;
    Ok(basis.eval_all(x)?[l][k * (k + 1) / 2 + j])
}

/// A polynomial on the ball in the `Q_{l,k,j}` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BallImage {
    pub mu: f64,
    pub n: usize,
    /// `coeffs[l]` in the disk layout of degree `l`.
    pub coeffs: Vec<Vec<f64>>,
}

impl BallImage {
    pub fn evaluator(&self) -> Result<BallBasis> {
        BallBasis::new(self.mu, self.n)
    }

    pub fn eval_with(&self, basis: &BallBasis, x: [f64; 3]) -> Result<f64> {
        let vals = basis.eval_all(x)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&vals)
            .map(|(c, v)| c.iter().zip(v).fold(0.0, |acc, (a, b)| acc + a * b))
            .sum())
    }

    pub fn eval(&self, x: [f64; 3]) -> Result<f64> {
        self.eval_with(&self.evaluator()?, x)
    }
}

fn ball_node_weights(ds: &BallDataset, weights: BallWeights) -> Result<(Vec<f64>, Vec<f64>)> {
    let rt = gauss_symmetric_jacobi(ds.mu, ds.n)?;
    let rw = gauss_symmetric_jacobi(ds.mu + 0.5, ds.n)?;
    let mu = ds.mu;
    Ok(match weights {
        BallWeights::Consistent => (
            rt.nodes.iter().zip(&rt.weights).map(|(t, l)| l * (1.0 - t * t).powf(-mu)).collect(),
            rw.nodes.iter().zip(&rw.weights).map(|(w, l)| l * (1.0 - w * w).powf(-mu)).collect(),
        ),
        BallWeights::AsPrinted => (rt.weights, rw.weights),
    })
}

/// `ℬ_n^μ f`: the Gauss rules in `t` and `w` applied to the integrals of
/// the ball partial sum. Computed spectrally: moments in `t`, then the `w`
/// stage against `(1-w²)^{k/2} C̃_{l-k}^{k+μ+1}(w)`, then the angular stage.
pub fn reconstruct_ball(ds: &BallDataset, weights: BallWeights) -> Result<BallImage> {
    ds.validate()?;
    let n = ds.n;
    let basis = BallBasis::new(ds.mu, n)?;
    let (wt, ww) = ball_node_weights(ds, weights)?;
    let views = (n + 1) as f64;
    let wt: Vec<f64> = wt.iter().map(|w| w / views).collect();
    let ctab = gegenbauer_table(basis.disk.lambda(), n, &ds.t_nodes);
    // (1-w²)^{k/2} C̃_{l-k}(w) per plane, as [plane][k][l-k]
    let wfac: Vec<Vec<Vec<f64>>> = ds
        .w_nodes
        .iter()
        .map(|&w| {
            let axis = basis.axis_values(w);
            let rho = (1.0 - w * w).sqrt();
            axis.into_iter()
                .enumerate()
                .map(|(k, v)| v.into_iter().map(|c| c * rho.powi(k as i32)).collect())
                .collect()
        })
        .collect();
    // b[ν][l][k]
    let b: Vec<Vec<Vec<f64>>> = ds
        .data
        .par_iter()
        .map(|view| {
            let mut out: Vec<Vec<f64>> = (0..=n).map(|l| vec![0.0; l + 1]).collect();
            let mut row = vec![0.0; n + 1];
            for (kw, wk) in ww.iter().enumerate() {
                for (j, r) in row.iter_mut().enumerate() {
                    *r = view[j][kw];
                }
                let m = view_moments(&wt, &ctab, &row, n);
                for (l, ol) in out.iter_mut().enumerate() {
                    for (k, o) in ol.iter_mut().enumerate() {
                        *o += wk * wfac[kw][k][l - k] * m[k];
                    }
                }
            }
            out
        })
        .collect();
    let coeffs = (0..=n)
        .map(|l| {
            let mom: Vec<Vec<f64>> = b.iter().map(|v| v[l].clone()).collect();
            let mut c = assemble_coefficients(&basis.disk, l, &ds.angles, &mom, 0..=l);
            for k in 0..=l {
                let f = basis.a_mu3 * basis.h[k];
                for (lp, e) in degree_entries(k) {
                    c[basis_index(k, lp, e)] *= f;
                }
            }
            c
        })
        .collect();
    Ok(BallImage { mu: ds.mu, n, coeffs })
}

/// Literal triple sum `Σ_ν Σ_j Σ_k R T_{j,k,ν}(x)` with the kernel
/// `Φ_n = Σ_l G_l` evaluated term by term.
pub fn naive_ball(ds: &BallDataset, weights: BallWeights, x: [f64; 3]) -> Result<f64> {
    ds.validate()?;
    let n = ds.n;
    let basis = BallBasis::new(ds.mu, n)?;
    let (wt, ww) = ball_node_weights(ds, weights)?;
    let lambda = basis.disk.lambda();
    let rho_x = (1.0 - x[2] * x[2]).max(0.0).sqrt();
    let u = if rho_x > 0.0 {
        DiskPoint::new(x[0] / rho_x, x[1] / rho_x)?
    } else {
        DiskPoint::new(0.0, 0.0)?
    };
    let axis_x = basis.axis_values(x[2]);
    let mut total = 0.0;
    for (v, &xi) in ds.angles.iter().enumerate() {
        for (j, &t) in ds.t_nodes.iter().enumerate() {
            let c = crate::specfun::eval_gegenbauer(lambda, n, t)?;
            for (kw, &w) in ds.w_nodes.iter().enumerate() {
                let axis_w = basis.axis_values(w);
                let rho_w = (1.0 - w * w).sqrt();
                let mut phi = 0.0;
                for l in 0..=n {
                    let mut g = 0.0;
                    for k in 0..=l {
                        let dk = (k as f64 + lambda) / lambda * c[k] * basis.disk.eval_dk(k, xi, u)?;
                        g += basis.h[k].powi(2)
                            * dk
                            * (rho_w * rho_x).powi(k as i32)
                            * axis_w[k][l - k]
                            * axis_x[k][l - k];
                    }
                    phi += basis.a_mu3 * g;
                }
                total += ds.data[v][j][kw] * wt[j] * ww[kw] / (n + 1) as f64 * phi;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn axis_examples() {
        let l = 2.5;
        assert_eq!(axis_basis(l, 3, 0.7).unwrap()[0], 1.0);
        assert!(axis_basis(l, 1, l / 2.0).unwrap()[1].abs() < 1e-15);
        assert!(axis_basis(l, 1, 0.0).is_err());
        let rule = cylinder_axis_rule(l, 8).unwrap();
        for a in 0..=5 {
            for b in 0..=5 {
                let g = rule.integrate(|z| {
                    let p = axis_basis(l, 5, z).unwrap();
                    p[a] * p[b]
                });
                assert_relative_eq!(g, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ball_chord_constant() {
        let (t, w): (f64, f64) = (0.3, -0.6);
        let v = ball_chord_data(|_| 1.0, 0.5, 0.4, t, w, 1e-12).unwrap();
        assert_relative_eq!(v, (1.0 - w * w).sqrt() * 2.0 * (1.0 - t * t).sqrt(), max_relative = 1e-12);
        assert_eq!(ball_chord_data(|_| 1.0, 0.5, 0.4, t, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn ball_basis_constant_and_slice() {
        assert_relative_eq!(ball_basis_eval(0.5, 0, 0, 0, [0.1, 0.2, 0.3]).unwrap(), 1.0);
        let b = BallBasis::new(1.5, 3).unwrap();
        let p = [0.2, -0.3, 0.0];
        let vals = b.eval_all(p).unwrap();
        let disk = b.disk.eval_all(3, DiskPoint::new(0.2, -0.3).unwrap()).unwrap();
        let c = eval_gegenbauer_orthonormal(1.5 + 1.0 + 1.0, 2, 0.0).unwrap();
        assert_relative_eq!(vals[3][1], b.h[1] * disk[1] * c[2], epsilon = 1e-14);
        // k ≥ 1 vanishes on the axis poles
        let pole = b.eval_all([0.0, 0.0, 1.0]).unwrap();
        assert!(pole[2][1..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn zero_data_gives_zero() {
        let ds = CylinderDataset::zeros(0.5, 1.0, 2).unwrap();
        let img = reconstruct_cylinder(&ds).unwrap();
        assert!(img.axis.iter().all(|a| a.coeffs.iter().all(|&c| c == 0.0)));
        let ds = BallDataset::zeros(0.5, 2).unwrap();
        let img = reconstruct_ball(&ds, BallWeights::Consistent).unwrap();
        assert!(img.coeffs.iter().flatten().all(|&c| c == 0.0));
    }
}
