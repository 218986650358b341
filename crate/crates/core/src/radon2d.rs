//! Attenuated Radon transforms on the unit disk.
//!
//! `R_θ^μ(f; t) = ∫ f(t cos θ - s sin θ, t sin θ + s cos θ) (1 - t² - s²)^(μ-1/2) ds`
//! over the chord `|s| ≤ √(1-t²)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::basis2d::{degree_entries, DiskBasisTable};
use crate::error::{OpedError, Result};
use crate::phantoms::Phantom;
use crate::quadrature::{chebyshev_first_kind_zeros, gauss_symmetric_jacobi, QuadRule};
use crate::specfun::{gegenbauer_at_one, gegenbauer_into};

/// Upper bound on the panel count of the adaptive chord oracle.
pub const MAX_PANELS: usize = 1 << 14;

/// A chord `{x cos θ + y sin θ = t}` of the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordSpec {
    pub theta: f64,
    pub t: f64,
}

impl ChordSpec {
    /// `theta` is reduced to `[0, 2π)`; `|t| ≤ 1` is required.
    pub fn new(theta: f64, t: f64) -> Result<Self> {
        if !(t.abs() <= 1.0) || !theta.is_finite() {
            return Err(OpedError::Domain(format!("chord (θ={theta}, t={t}) misses the disk")));
        }
        Ok(Self {
            theta: theta.rem_euclid(2.0 * PI),
            t,
        })
    }

    /// Half length `√(1-t²)` of the chord.
    pub fn half_length(&self) -> f64 {
        (1.0 - self.t * self.t).max(0.0).sqrt()
    }

    /// Point at signed arc length `s` from the foot `t(cos θ, sin θ)`.
    #[inline]
    pub fn point(&self, s: f64) -> (f64, f64) {
        let (sn, cs) = self.theta.sin_cos();
        (self.t * cs - s * sn, self.t * sn + s * cs)
    }
}

fn gauss_legendre_16() -> &'static QuadRule {
    static RULE: OnceLock<QuadRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_symmetric_jacobi(0.0, 15).expect("Gauss-Legendre rule"))
}

/// `∫_{s_lo}^{s_hi} g(s) (a² - s²)^(μ-1/2) ds` for `-a ≤ s_lo ≤ s_hi ≤ a`.
///
/// After `s = a sin τ` the integrand is `g(a sin τ) a^{2μ} cos^{2μ} τ`. A
/// cubic grading in `τ` then flattens the remaining endpoint behaviour, and
/// composite 16-point Gauss–Legendre panels are doubled until two estimates
/// agree to `rel_tol` relative to the integral of `|integrand|`.
pub fn weighted_segment_integral(
    mut g: impl FnMut(f64) -> f64,
    a: f64,
    s_lo: f64,
    s_hi: f64,
    mu: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a <= 0.0 {
        return Ok(if mu == 0.0 && s_lo <= 0.0 && 0.0 <= s_hi { PI * g(0.0) } else { 0.0 });
    }
    if !(s_hi > s_lo) {
        return Ok(0.0);
    }
    let tau_lo = (s_lo / a).clamp(-1.0, 1.0).asin();
    let tau_hi = (s_hi / a).clamp(-1.0, 1.0).asin();
    let mid = 0.5 * (tau_lo + tau_hi);
    let half = 0.5 * (tau_hi - tau_lo);
    let scale = a.powf(2.0 * mu);
    let mut integrand = |sigma: f64| {
        let tau = mid + half * sigma * (3.0 - sigma * sigma) * 0.5;
        let jac = half * 1.5 * (1.0 - sigma * sigma);
        let (sn, cs) = tau.sin_cos();
        let w = if mu == 0.0 { 1.0 } else { cs.max(0.0).powf(2.0 * mu) };
        g(a * sn) * w * jac
    };
    let gl = gauss_legendre_16();
    let mut composite = |panels: usize| {
        let width = 2.0 / panels as f64;
        let mut sum = 0.0;
        let mut abs = 0.0;
        for p in 0..panels {
            let c = -1.0 + width * (p as f64 + 0.5);
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let v = w * integrand(c + 0.5 * width * x);
                sum += v;
                abs += v.abs();
            }
        }
        (sum * 0.5 * width, abs * 0.5 * width)
    };
    let mut panels = 2;
    let (mut prev, _) = composite(1);
    loop {
        let (cur, abs) = composite(panels);
        if (cur - prev).abs() <= rel_tol * abs || abs == 0.0 {
            return Ok(cur * scale);
        }
        if panels >= MAX_PANELS {
            return Err(OpedError::ToleranceNotMet {
                context: format!("weighted segment integral with {panels} panels"),
                last: cur * scale,
                previous: prev * scale,
            });
        }
        prev = cur;
        panels *= 2;
    }
}

/// Numerical `R_θ^μ(f; t)` for a pointwise function on the disk.
pub fn chord_integral_numeric(
    mut f: impl FnMut(f64, f64) -> f64,
    mu: f64,
    chord: ChordSpec,
    rel_tol: f64,
) -> Result<f64> {
    if !(rel_tol >= 1e-13) {
        return Err(OpedError::Domain(format!("rel_tol must be at least 1e-13, got {rel_tol}")));
    }
    let a = chord.half_length();
    weighted_segment_integral(
        |s| {
            let (x, y) = chord.point(s);
            f(x, y)
        },
        a,
        -a,
        a,
        mu,
        rel_tol,
    )
}

/// `R_θ^μ(P; t)` for `P ∈ V_k²` given by its `k+1` coefficients in the
/// orthonormal basis (order of [`degree_entries`]).
pub fn radon_polynomial(table: &DiskBasisTable, k: usize, coeffs: &[f64], chord: ChordSpec) -> Result<f64> {
    if k > table.k_max {
        return Err(OpedError::Range(format!("degree {k} exceeds table degree {}", table.k_max)));
    }
    if coeffs.len() != k + 1 {
        return Err(OpedError::Shape(format!("V_{k} needs {} coefficients, got {}", k + 1, coeffs.len())));
    }
    let lambda = table.lambda();
    let mut c = vec![0.0; k + 1];
    gegenbauer_into(lambda, chord.t, &mut c);
    let boundary: f64 = degree_entries(k)
        .zip(coeffs)
        .map(|((l, e), a)| a * table.boundary_value(k, l, e, chord.theta))
        .sum();
    let envelope = table.norms.b_mu * (1.0 - chord.t * chord.t).max(0.0).powf(table.mu);
    Ok(envelope * c[k] / gegenbauer_at_one(lambda, k) * boundary)
}

/// `R_θ^μ` of a full expansion `Σ c_{k,l,ε} P̂_{l,ε}^k` in flat layout.
pub fn radon_expansion(table: &DiskBasisTable, degree: usize, coeffs: &[f64], chord: ChordSpec) -> Result<f64> {
    if degree > table.k_max {
        return Err(OpedError::Range(format!("degree {degree} exceeds table degree {}", table.k_max)));
    }
    let lambda = table.lambda();
    let mut c = vec![0.0; degree + 1];
    gegenbauer_into(lambda, chord.t, &mut c);
    let mut total = 0.0;
    for k in 0..=degree {
        let base = k * (k + 1) / 2;
        let boundary: f64 = degree_entries(k)
            .enumerate()
            .map(|(i, (l, e))| coeffs[base + i] * table.boundary_value(k, l, e, chord.theta))
            .sum();
        total += c[k] / gegenbauer_at_one(lambda, k) * boundary;
    }
    Ok(table.norms.b_mu * (1.0 - chord.t * chord.t).max(0.0).powf(table.mu) * total)
}

/// Sampling pattern of a sinogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `n+1` views `ξ_ν = νπ/(n+1)` over half a turn, Gauss nodes for `(1-t²)^μ`.
    HalfGauss(usize),
    /// `2m+1` views `φ_ν = 2νπ/(2m+1)` over a full turn, nodes `cos ψ_j`.
    FullCheb(usize),
}

impl Scheme {
    /// Polynomial degree of the reconstruction built from this scheme.
    pub fn degree(&self) -> usize {
        match *self {
            Scheme::HalfGauss(n) => n,
            Scheme::FullCheb(m) => 2 * m,
        }
    }

    pub fn order(&self) -> usize {
        match *self {
            Scheme::HalfGauss(n) | Scheme::FullCheb(n) => n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::HalfGauss(_) => "gauss",
            Scheme::FullCheb(_) => "cheb",
        }
    }

    pub fn from_name(name: &str, order: usize) -> Result<Self> {
        match name {
            "gauss" | "half_gauss" => Ok(Scheme::HalfGauss(order)),
            "cheb" | "full_cheb" => Ok(Scheme::FullCheb(order)),
            other => Err(OpedError::Format(format!("unknown scheme {other:?}"))),
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        match *self {
            Scheme::HalfGauss(n) => (0..=n).map(|v| v as f64 * PI / (n + 1) as f64).collect(),
            Scheme::FullCheb(m) => (0..=2 * m)
                .map(|v| 2.0 * v as f64 * PI / (2 * m + 1) as f64)
                .collect(),
        }
    }

    /// Detector nodes. For the Chebyshev scheme these are `cos ψ_j`,
    /// `ψ_j = (2j+1)π/(4m+2)`, in increasing `j`.
    pub fn nodes(&self, mu: f64) -> Result<Vec<f64>> {
        match *self {
            Scheme::HalfGauss(n) => Ok(gauss_symmetric_jacobi(mu, n)?.nodes),
            Scheme::FullCheb(m) => Ok(chebyshev_first_kind_zeros(2 * m)),
        }
    }
}

/// Attenuated projection data on a scheme's (view, node) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SinogramGrid {
    pub mu: f64,
    pub scheme: Scheme,
    pub angles: Vec<f64>,
    pub nodes: Vec<f64>,
    /// `data[ν][j]`.
    pub data: Vec<Vec<f64>>,
}

impl SinogramGrid {
    /// All-zero grid for the given scheme.
    pub fn zeros(mu: f64, scheme: Scheme) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(OpedError::Domain(format!("μ must be non-negative, got {mu}")));
        }
        let angles = scheme.angles();
        let nodes = scheme.nodes(mu)?;
        let data = vec![vec![0.0; nodes.len()]; angles.len()];
        Ok(Self {
            mu,
            scheme,
            angles,
            nodes,
            data,
        })
    }

    pub fn views(&self) -> usize {
        self.angles.len()
    }

    /// Checks that the stored geometry is exactly what the scheme prescribes.
    pub fn validate(&self) -> Result<()> {
        let expect = Self::zeros(self.mu, self.scheme)?;
        if self.angles.len() != expect.angles.len() || self.nodes.len() != expect.nodes.len() {
            return Err(OpedError::Shape(format!(
                "{} scheme of order {} needs {}x{} samples",
                self.scheme.name(),
                self.scheme.order(),
                expect.angles.len(),
                expect.nodes.len()
            )));
        }
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12);
        if !close(&self.angles, &expect.angles) || !close(&self.nodes, &expect.nodes) {
            return Err(OpedError::Shape("angles or nodes differ from the scheme".into()));
        }
        if self.data.len() != self.angles.len() || self.data.iter().any(|r| r.len() != self.nodes.len()) {
            return Err(OpedError::Shape("data dimensions do not match the scheme".into()));
        }
        Ok(())
    }

    /// Entry-wise `alpha·self + beta·other` on the same geometry.
    pub fn combine(&self, alpha: f64, other: &SinogramGrid, beta: f64) -> Result<SinogramGrid> {
        if self.scheme != other.scheme || self.mu != other.mu {
            return Err(OpedError::Shape("sinograms on different grids".into()));
        }
        let mut out = self.clone();
        for (row, orow) in out.data.iter_mut().zip(&other.data) {
            for (v, o) in row.iter_mut().zip(orow) {
                *v = alpha * *v + beta * o;
            }
        }
        Ok(out)
    }
}

/// What the projections are taken of.
pub enum Source<'a> {
    /// Analytic projections.
    Phantom(&'a Phantom),
    /// Numerical chord integrals of a pointwise function.
    Function {
        f: &'a (dyn Fn(f64, f64) -> f64 + Sync),
        rel_tol: f64,
    },
    /// Projections supplied directly, for example in closed form.
    Projection(&'a (dyn Fn(f64, ChordSpec) -> Result<f64> + Sync)),
}

/// Samples `R_{angle_ν}^μ(source; node_j)` on the whole grid, in parallel
/// over `(ν, j)`.
pub fn sinogram_acquire(source: &Source<'_>, mu: f64, scheme: Scheme) -> Result<SinogramGrid> {
    let mut grid = SinogramGrid::zeros(mu, scheme)?;
    let cols = grid.nodes.len();
    let angles = &grid.angles;
    let nodes = &grid.nodes;
    let flat: Vec<f64> = (0..angles.len() * cols)
        .into_par_iter()
        .map(|idx| {
            let (v, j) = (idx / cols, idx % cols);
            let chord = ChordSpec::new(angles[v], nodes[j])?;
            let value = match source {
                Source::Phantom(p) => p.radon(mu, chord),
                Source::Function { f, rel_tol } => chord_integral_numeric(f, mu, chord, *rel_tol),
                Source::Projection(r) => r(mu, chord),
            };
            value.map_err(|e| e.with_context(format!("view {v}, node {j}")))
        })
        .collect::<Result<_>>()?;
    for (row, chunk) in grid.data.iter_mut().zip(flat.chunks(cols)) {
        row.copy_from_slice(chunk);
    }
    Ok(grid)
}
