//! Reconstruction on the sphere `S²` from weighted circle integrals.
//!
//! The circles are the intersections of `S²` with the planes
//! `⟨x, ζ⟩ = t`, `ζ = (cos ξ, sin ξ, 0)`, weighted by `|x₃|^{2μ}`. For
//! functions even in `x₃`, projecting the circle onto the disk turns it
//! into the chord `(ξ, t)` traversed twice, and the arc-length element
//! becomes `√(1-t²) ds / x₃`. Hence
//!
//! ```text
//! ∮ f |x₃|^{2μ} dℓ = 2 √(1-t²) · R_ξ^μ(F; t),   F(x₁, x₂) = f(x₁, x₂, √(1-x₁²-x₂²)),
//! ```
//!
//! and the disk reconstruction applies to `q = R_ξ^μ(F; t)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{OpedError, Result};
use crate::quadrature::gauss_symmetric_jacobi;
use crate::radon2d::{Scheme, SinogramGrid};
use crate::recon2d::{reconstruct, CoefficientImage};

/// How the values of a [`SphereDataset`] are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `q = R_ξ^μ(F; t)`, the input of the disk algorithm.
    Reduced,
    /// Arc-length circle integrals, as an instrument would record them.
    Geometric,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::Reduced => "paper-q",
            Measure::Geometric => "geometric",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "paper-q" => Ok(Measure::Reduced),
            "geometric" => Ok(Measure::Geometric),
            other => Err(OpedError::Format(format!("unknown measure {other:?}"))),
        }
    }
}

/// Circle data on the `(n+1) × (n+1)` Gauss grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereDataset {
    pub mu: f64,
    pub n: usize,
    /// `ξ_ν = νπ/(n+1)`; the normals are `(cos ξ_ν, sin ξ_ν, 0)`.
    pub angles: Vec<f64>,
    pub nodes: Vec<f64>,
    /// `data[ν][j]` in the stated measure.
    pub data: Vec<Vec<f64>>,
    pub measure: Measure,
}

impl SphereDataset {
    pub fn zeta(&self, nu: usize) -> [f64; 3] {
        [self.angles[nu].cos(), self.angles[nu].sin(), 0.0]
    }

    /// The same data in another measure. The conversion is a per-node
    /// scaling by `2√(1-t²)`.
    pub fn to_measure(&self, measure: Measure) -> Result<SphereDataset> {
        let mut out = self.clone();
        if measure == self.measure {
            return Ok(out);
        }
        for row in &mut out.data {
            for (v, &t) in row.iter_mut().zip(&self.nodes) {
                *v = match measure {
                    Measure::Reduced => q_from_circle(*v, t)?,
                    Measure::Geometric => *v * 2.0 * (1.0 - t * t).sqrt(),
                };
            }
        }
        out.measure = measure;
        Ok(out)
    }

    fn shape_ok(&self) -> Result<()> {
        let m = self.n + 1;
        if self.angles.len() != m || self.nodes.len() != m || self.data.len() != m || self.data.iter().any(|r| r.len() != m) {
            return Err(OpedError::Shape(format!("sphere dataset of order {} needs {m}x{m} values", self.n)));
        }
        Ok(())
    }

    /// The disk sinogram consumed by the reconstruction.
    pub fn to_sinogram(&self) -> Result<SinogramGrid> {
        self.shape_ok()?;
        let q = self.to_measure(Measure::Reduced)?;
        let mut grid = SinogramGrid::zeros(self.mu, Scheme::HalfGauss(self.n))?;
        grid.data = q.data;
        grid.validate()?;
        Ok(grid)
    }
}

/// The point of the circle `⟨x, ζ⟩ = t` at parameter `s`.
pub fn circle_point(xi: f64, t: f64, s: f64) -> [f64; 3] {
    let r = (1.0 - t * t).max(0.0).sqrt();
    let (sx, cx) = xi.sin_cos();
    let (ss, cs) = s.sin_cos();
    [t * cx - r * cs * sx, t * sx + r * cs * cx, r * ss]
}

/// `∮ f(x) |x₃|^{2μ} dℓ` over the circle `⟨x, ζ⟩ = t` with
/// `ζ = (cos ξ, sin ξ, 0)`.
///
/// Each half circle `s ∈ [0, π]`, `[π, 2π]` is mapped to `[-1, 1]`, where
/// `|sin s|^{2μ} = cos^{2μ}(πx/2)`; the factor `(1-x²)^{2μ}` is taken as
/// the Gauss–Jacobi weight and the rest is smooth. The rule order is
/// doubled until two estimates agree.
pub fn circle_integral_numeric(f: impl Fn([f64; 3]) -> f64, mu: f64, xi: f64, t: f64, rel_tol: f64) -> Result<f64> {
    if !(t.abs() < 1.0) {
        return Err(OpedError::Domain(format!("|t| must be below 1, got {t}")));
    }
    if !(rel_tol >= 1e-12) || !(mu >= 0.0) {
        return Err(OpedError::Domain(format!("need rel_tol ≥ 1e-12 and μ ≥ 0, got {rel_tol}, {mu}")));
    }
    let r = (1.0 - t * t).sqrt();
    let estimate = |points: usize| -> Result<(f64, f64)> {
        let rule = gauss_symmetric_jacobi(2.0 * mu, points - 1)?;
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            // cos(πx/2) without cancellation near x = ±1
            let c = (0.5 * PI * (1.0 - x.abs())).sin();
            let smooth = if mu == 0.0 { 1.0 } else { (c / (1.0 - x * x)).powf(2.0 * mu) };
            for offset in [0.0, PI] {
                let s = offset + 0.5 * PI * (1.0 + x);
                let v = w * smooth * f(circle_point(xi, t, s));
                sum += v;
                abs += v.abs();
            }
        }
        let scale = 0.5 * PI * r * r.powf(2.0 * mu);
        Ok((sum * scale, abs * scale))
    };
    let mut points = 8;
    let (mut prev, _) = estimate(points)?;
    loop {
        points *= 2;
        let (cur, abs) = estimate(points)?;
        if (cur - prev).abs() <= rel_tol * abs || abs == 0.0 {
            return Ok(cur);
        }
        if points >= 512 {
            return Err(OpedError::ToleranceNotMet {
                context: format!("circle integral with {points} nodes"),
                last: cur,
                previous: prev,
            });
        }
        prev = cur;
    }
}

/// `circle_value / (2√(1-t²))`.
pub fn q_from_circle(circle_value: f64, t: f64) -> Result<f64> {
    if !(t.abs() < 1.0) {
        return Err(OpedError::Domain(format!("|t| must be below 1, got {t}")));
    }
    Ok(circle_value / (2.0 * (1.0 - t * t).sqrt()))
}

/// Samples the circle integrals of `f` on the order-`n` grid and stores
/// them in the requested measure.
pub fn sphere_acquire(
    f: &(dyn Fn([f64; 3]) -> f64 + Sync),
    mu: f64,
    n: usize,
    measure: Measure,
    rel_tol: f64,
) -> Result<SphereDataset> {
    let grid = SinogramGrid::zeros(mu, Scheme::HalfGauss(n))?;
    let cols = n + 1;
    let flat: Vec<f64> = (0..cols * cols)
        .into_par_iter()
        .map(|idx| {
            let (v, j) = (idx / cols, idx % cols);
            let t = grid.nodes[j];
            let c = circle_integral_numeric(f, mu, grid.angles[v], t, rel_tol)
                .map_err(|e| e.with_context(format!("view {v}, node {j}")))?;
            match measure {
                Measure::Geometric => Ok(c),
                Measure::Reduced => q_from_circle(c, t),
            }
        })
        .collect::<Result<_>>()?;
    Ok(SphereDataset {
        mu,
        n,
        angles: grid.angles,
        nodes: grid.nodes,
        data: flat.chunks(cols).map(<[f64]>::to_vec).collect(),
        measure,
    })
}

/// `𝒮_n^μ f` as a disk image in `(x₁, x₂)`; evaluate at the projection of
/// a sphere point (the sign of `x₃` does not matter for even `f`).
pub fn reconstruct_sphere(ds: &SphereDataset) -> Result<CoefficientImage> {
    reconstruct(&ds.to_sinogram()?)
}

/// Evaluates a sphere reconstruction at a point of `S²`.
pub fn eval_on_sphere(img: &CoefficientImage, x: [f64; 3]) -> Result<f64> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    let s = if r2 > 1.0 { r2.sqrt() } else { 1.0 };
    img.eval(crate::basis2d::DiskPoint::new(x[0] / s, x[1] / s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_examples() {
        for t in [0.0, 0.4, -0.9] {
            let c = circle_integral_numeric(|_| 1.0, 0.0, 0.3, t, 1e-12).unwrap();
            assert_relative_eq!(c, 2.0 * PI * (1.0 - t * t).sqrt(), max_relative = 1e-13);
            assert_relative_eq!(q_from_circle(c, t).unwrap(), PI, max_relative = 1e-13);
        }
        // x₃² over the circle: r³ ∫ sin² s ds = π r³
        let t: f64 = 0.35;
        let c = circle_integral_numeric(|x| x[2] * x[2], 0.0, 1.2, t, 1e-12).unwrap();
        assert_relative_eq!(c, PI * (1.0 - t * t).powf(1.5), max_relative = 1e-13);
        assert!(q_from_circle(1.0, 1.0).is_err());
    }

    #[test]
    fn weighted_constant_matches_chord() {
        // μ = 1/2: ∮ |x₃| dℓ = 4(1-t²), q = 2√(1-t²)
        let t: f64 = -0.3;
        let c = circle_integral_numeric(|_| 1.0, 0.5, 0.0, t, 1e-12).unwrap();
        assert_relative_eq!(c, 4.0 * (1.0 - t * t), max_relative = 1e-12);
    }

    #[test]
    fn circle_points_lie_on_sphere_and_plane() {
        let (xi, t) = (0.8, 0.45);
        for s in [0.0, 1.0, 4.0] {
            let p = circle_point(xi, t, s);
            assert_relative_eq!(p.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-15);
            assert_relative_eq!(p[0] * xi.cos() + p[1] * xi.sin(), t, epsilon = 1e-15);
        }
    }

    #[test]
    fn measure_conversion_round_trip() {
        let f = |x: [f64; 3]| 1.0 + x[0] * x[0];
        let ds = sphere_acquire(&f, 0.5, 2, Measure::Geometric, 1e-12).unwrap();
        let back = ds.to_measure(Measure::Reduced).unwrap().to_measure(Measure::Geometric).unwrap();
        for (a, b) in ds.data.iter().flatten().zip(back.data.iter().flatten()) {
            assert_relative_eq!(a, b, max_relative = 1e-15);
        }
    }
}
