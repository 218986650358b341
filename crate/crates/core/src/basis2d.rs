//! Orthonormal basis of `V_k²(W_μ)` in polar form, its boundary amplitudes,
//! and the kernels `D_k` and `Φ_n` used by the reconstruction operators.
//!
//! The basis entry indexed by `(k, l, ε)`, with `m = k - 2l`, is
//!
//! ```text
//! P̂_{l,ε}^k(x, y) = η_m · p_l^(μ-1/2, m)(2r² - 1) · r^m · S_{m,ε}(φ)
//! ```
//!
//! where `S_{m,0} = cos(mφ)`, `S_{m,1} = sin(mφ)` (absent for `m = 0`), and
//! `η_m² = 2 (μ+3/2)_m / m!` for `m > 0`, `η_0 = 1`. The factor 2 for
//! `m > 0` is what makes the entries orthonormal under
//! `⟨f, g⟩_μ = a_μ ∫ f g W_μ`; without it those entries have squared norm
//! one half.
//!
//! On the unit circle every entry reduces to `Ĥ_{l,k} S_{m,ε}(φ)`. The kernel
//! weight is `Λ_{l,k} = 1 / (d_{l,k} Ĥ_{l,k}²)` with `d = 1/2` for `m > 0`
//! and `d = 1` for `m = 0`; at `μ = 1/2` this gives `Λ = 1/(k+1)` for every
//! `l` and `D_k` becomes the ridge Chebyshev polynomial `U_k`.

use std::f64::consts::PI;

use crate::error::{OpedError, Result};
use crate::quadrature::gauss_symmetric_jacobi;
use crate::specfun::{gegenbauer_into, norm_table, JacobiRecurrence, NormTable};

/// A point of the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

impl DiskPoint {
    /// Points within rounding distance of the circle are accepted.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x * x + y * y <= 1.0 + 1e-12) {
            return Err(OpedError::Domain(format!("({x}, {y}) lies outside the unit disk")));
        }
        Ok(Self { x, y })
    }

    pub fn from_polar(r: f64, phi: f64) -> Result<Self> {
        Self::new(r * phi.cos(), r * phi.sin())
    }

    pub fn on_circle(phi: f64) -> Self {
        Self {
            x: phi.cos(),
            y: phi.sin(),
        }
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }
}

/// Index of a basis entry inside a degree-`n` coefficient vector. Entries
/// are ordered by ascending `k`, then `l`, then `ε`.
#[inline]
pub fn basis_index(k: usize, l: usize, eps: usize) -> usize {
    k * (k + 1) / 2 + 2 * l + eps
}

/// `dim Π_n² = (n+1)(n+2)/2`.
#[inline]
pub fn basis_dim(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// The `(l, ε)` pairs of degree `k` in storage order. The `ε = 1` entry for
/// `k = 2l` is structurally absent.
pub fn degree_entries(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=k / 2).flat_map(move |l| {
        let eps_max = if 2 * l < k { 2 } else { 1 };
        (0..eps_max).map(move |e| (l, e))
    })
}

/// `S_{m,ε}(φ)`.
#[inline]
pub fn trig_factor(m: usize, eps: usize, phi: f64) -> f64 {
    let a = m as f64 * phi;
    if eps == 0 {
        a.cos()
    } else {
        a.sin()
    }
}

/// `d_{l,k}`: 1/2 when `2l < k`, 1 when `2l = k`.
#[inline]
pub fn d_factor(l: usize, k: usize) -> f64 {
    if 2 * l < k {
        0.5
    } else {
        1.0
    }
}

/// `(Σ_ν sin(2kνπ/(n+1)), Σ_ν cos(2kνπ/(n+1)))` over `ν = 0..=n`.
pub fn discrete_trig_sums(k: usize, n: usize) -> (f64, f64) {
    (0..=n).fold((0.0, 0.0), |(s, c), nu| {
        let a = 2.0 * (k * nu % (n + 1)) as f64 * PI / (n + 1) as f64;
        (s + a.sin(), c + a.cos())
    })
}

/// `U_k(x cos ξ + y sin ξ)`.
pub fn ridge_chebyshev_u(k: usize, xi: f64, p: DiskPoint) -> f64 {
    let s = p.x * xi.cos() + p.y * xi.sin();
    let mut v = vec![0.0; k + 1];
    gegenbauer_into(1.0, s, &mut v);
    v[k]
}

/// Basis constants for `W_μ` up to degree `k_max`.
#[derive(Debug, Clone)]
pub struct DiskBasisTable {
    pub mu: f64,
    pub k_max: usize,
    pub norms: NormTable,
    /// `η_m`, indexed by the angular order `m`.
    angular_norm: Vec<f64>,
    /// Radial recurrences, indexed by `m`: `p_l^(μ-1/2, m)`.
    radial: Vec<JacobiRecurrence>,
    /// `Ĥ_{l,k}`, stored as `h_hat[k][l]`.
    h_hat: Vec<Vec<f64>>,
    /// `Λ_{l,k}`, stored as `lambda_kernel[k][l]`.
    lambda_kernel: Vec<Vec<f64>>,
}

impl DiskBasisTable {
    /// Builds the table; this is the boundary-amplitude computation.
    pub fn new(mu: f64, k_max: usize) -> Result<Self> {
        let norms = norm_table(mu, k_max)?;
        let alpha = mu - 0.5;
        let angular_norm: Vec<f64> = (0..=k_max)
            .map(|m| {
                if m == 0 {
                    1.0
                } else {
                    let ratio = (0..m).fold(1.0, |acc, i| acc * (mu + 1.5 + i as f64) / (i as f64 + 1.0));
                    (2.0 * ratio).sqrt()
                }
            })
            .collect();
        let radial = (0..=k_max)
            .map(|m| JacobiRecurrence::new(alpha, m as f64, (k_max - m) / 2))
            .collect::<Result<Vec<_>>>()?;

        let mut h_hat = Vec::with_capacity(k_max + 1);
        let mut lambda_kernel = Vec::with_capacity(k_max + 1);
        let mut buf = vec![0.0; k_max / 2 + 1];
        for k in 0..=k_max {
            let mut hk = Vec::with_capacity(k / 2 + 1);
            let mut lk = Vec::with_capacity(k / 2 + 1);
            for l in 0..=k / 2 {
                let m = k - 2 * l;
                radial[m].eval_into(1.0, &mut buf[..=l]);
                let h = angular_norm[m] * buf[l];
                hk.push(h);
                lk.push(1.0 / (d_factor(l, k) * h * h));
            }
            h_hat.push(hk);
            lambda_kernel.push(lk);
        }
        Ok(Self {
            mu,
            k_max,
            norms,
            angular_norm,
            radial,
            h_hat,
            lambda_kernel,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.mu + 0.5
    }

    /// Normalizing constant of entry `(l, k)`.
    pub fn hat_norm(&self, l: usize, k: usize) -> f64 {
        self.angular_norm[k - 2 * l]
    }

    pub fn h_hat(&self, l: usize, k: usize) -> f64 {
        self.h_hat[k][l]
    }

    pub fn lambda_kernel(&self, l: usize, k: usize) -> f64 {
        self.lambda_kernel[k][l]
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.k_max {
            return Err(OpedError::Range(format!(
                "degree {k} exceeds table degree {}",
                self.k_max
            )));
        }
        Ok(())
    }

    /// Values of every basis entry of degree `≤ n` at `(x, y)`, written in
    /// storage order into `out[..basis_dim(n)]`.
    pub fn eval_all_into(&self, n: usize, x: f64, y: f64, out: &mut [f64], scratch: &mut BasisScratch) {
        debug_assert!(n <= self.k_max);
        scratch.resize(n);
        let u = 2.0 * (x * x + y * y) - 1.0;
        // (x + iy)^m = r^m (cos mφ + i sin mφ)
        scratch.re[0] = 1.0;
        scratch.im[0] = 0.0;
        for m in 1..=n {
            let (a, b) = (scratch.re[m - 1], scratch.im[m - 1]);
            scratch.re[m] = a * x - b * y;
            scratch.im[m] = a * y + b * x;
        }
        for m in 0..=n {
            let lmax = (n - m) / 2;
            let radial = &mut scratch.radial[..=lmax];
            self.radial[m].eval_into(u, radial);
            let eta = self.angular_norm[m];
            for (l, p) in radial.iter().enumerate() {
                let k = m + 2 * l;
                let v = eta * p;
                out[basis_index(k, l, 0)] = v * scratch.re[m];
                if m > 0 {
                    out[basis_index(k, l, 1)] = v * scratch.im[m];
                }
            }
        }
    }

    pub fn eval_all(&self, n: usize, p: DiskPoint) -> Result<Vec<f64>> {
        self.check_degree(n)?;
        let mut out = vec![0.0; basis_dim(n)];
        self.eval_all_into(n, p.x, p.y, &mut out, &mut BasisScratch::new(n));
        Ok(out)
    }

    /// Values `P̂_{l,ε}^k(p)` for every entry of degree `k`, in storage order.
    pub fn eval_disk_basis(&self, k: usize, p: DiskPoint) -> Result<Vec<f64>> {
        let all = self.eval_all(k, p)?;
        Ok(all[basis_index(k, 0, 0)..].to_vec())
    }

    /// Boundary sample `P̂_{l,ε}^k(cos ξ, sin ξ) = Ĥ_{l,k} S_{m,ε}(ξ)`.
    #[inline]
    pub fn boundary_value(&self, k: usize, l: usize, eps: usize, xi: f64) -> f64 {
        self.h_hat[k][l] * trig_factor(k - 2 * l, eps, xi)
    }

    /// `D_k(ξ; p)` for every `k ≤ n`, given the basis values at `p`.
    pub fn dk_from_values(&self, n: usize, xi: f64, values: &[f64]) -> Vec<f64> {
        (0..=n)
            .map(|k| {
                degree_entries(k)
                    .map(|(l, e)| {
                        self.lambda_kernel[k][l]
                            * self.boundary_value(k, l, e, xi)
                            * values[basis_index(k, l, e)]
                    })
                    .sum()
            })
            .collect()
    }

    /// `D_k(ξ; p) = Σ_{l,ε} Λ_{l,k} P̂_{l,ε}^k(cos ξ, sin ξ) P̂_{l,ε}^k(p)`.
    pub fn eval_dk(&self, k: usize, xi: f64, p: DiskPoint) -> Result<f64> {
        let values = self.eval_all(k, p)?;
        Ok(self.dk_from_values(k, xi, &values)[k])
    }

    /// `Φ_n(ξ, t; p) = Σ_{k≤n} ((k+λ)/λ) C_k^λ(t) D_k(ξ; p)`.
    pub fn eval_phi_n(&self, n: usize, xi: f64, t: f64, p: DiskPoint) -> Result<f64> {
        if !(t.abs() <= 1.0) {
            return Err(OpedError::Domain(format!("|t| must not exceed 1, got {t}")));
        }
        let values = self.eval_all(n, p)?;
        let dk = self.dk_from_values(n, xi, &values);
        Ok(self.phi_from_dk(&dk, t))
    }

    /// Combines precomputed `D_k` values into `Φ_n` at `t`.
    pub fn phi_from_dk(&self, dk: &[f64], t: f64) -> f64 {
        let lambda = self.lambda();
        let mut c = vec![0.0; dk.len()];
        gegenbauer_into(lambda, t, &mut c);
        dk.iter()
            .enumerate()
            .map(|(k, d)| (k as f64 + lambda) / lambda * c[k] * d)
            .sum()
    }
}

/// Reusable buffers for [`DiskBasisTable::eval_all_into`].
#[derive(Debug, Clone, Default)]
pub struct BasisScratch {
    re: Vec<f64>,
    im: Vec<f64>,
    radial: Vec<f64>,
    /// Spare buffer for callers that need the full value vector.
    pub(crate) values: Vec<f64>,
}

impl BasisScratch {
    pub fn new(n: usize) -> Self {
        let mut s = Self::default();
        s.resize(n);
        s
    }

    fn resize(&mut self, n: usize) {
        if self.re.len() < n + 1 {
            self.re.resize(n + 1, 0.0);
            self.im.resize(n + 1, 0.0);
            self.radial.resize(n / 2 + 1, 0.0);
        }
    }
}

/// Reproducing kernel of `V_k²(W_μ)` from its Gegenbauer integral
/// representation, independent of any basis. For `μ = 0` the kernel measure
/// is the average of the endpoint values `t = ±1`.
pub fn reprod_kernel_reference(mu: f64, k: usize, p: DiskPoint, q: DiskPoint, quad_points: usize) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(OpedError::Domain(format!("μ must be nonnegative, got {mu}")));
    }
    let lambda = mu + 0.5;
    let inner = p.x * q.x + p.y * q.y;
    let cross = (1.0 - p.x * p.x - p.y * p.y).max(0.0).sqrt() * (1.0 - q.x * q.x - q.y * q.y).max(0.0).sqrt();
    let mut c = vec![0.0; k + 1];
    let mut ck = |s: f64| {
        gegenbauer_into(lambda, s, &mut c);
        c[k]
    };
    let scale = (k as f64 + lambda) / lambda;
    if mu == 0.0 {
        return Ok(scale * 0.5 * (ck(inner + cross) + ck(inner - cross)));
    }
    let rule = gauss_symmetric_jacobi(mu - 1.0, quad_points.max(1) - 1)?;
    let integral = rule.integrate(|t| ck(inner + cross * t));
    Ok(scale * integral / rule.weight_kind.mass())
}
