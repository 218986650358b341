//! One-dimensional quadrature rules, each carrying the largest polynomial
//! degree it integrates exactly.
//!
//! Gauss rules are built with the Golub–Welsch construction: the nodes are
//! eigenvalues of the symmetric tridiagonal Jacobi matrix of the orthonormal
//! recurrence. Nodes are then polished with a Newton step on `p_{n+1}` and
//! the weights are taken from the Christoffel function, which keeps small
//! endpoint weights accurate to full relative precision.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{OpedError, Result};
use crate::specfun::{jacobi_mass, symmetric_jacobi_mass, JacobiRecurrence};

/// Weight function a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `(1-t²)^α` on `[-1, 1]`.
    SymmetricJacobi { alpha: f64 },
    /// `(1-t)^α (1+t)^β` on `[-1, 1]`.
    Jacobi { alpha: f64, beta: f64 },
    /// `1/√(1-t²)` on `[-1, 1]`.
    InverseSemicircle,
    /// `W_L(z) = 1/(π √(z(L-z)))` on `[0, L]`, unit mass.
    CylinderAxis { length: f64 },
}

impl WeightKind {
    /// Endpoint exponents `(α, β)` of the weight written in Jacobi form.
    fn jacobi_exponents(&self) -> (f64, f64) {
        match *self {
            WeightKind::SymmetricJacobi { alpha } => (alpha, alpha),
            WeightKind::Jacobi { alpha, beta } => (alpha, beta),
            WeightKind::InverseSemicircle | WeightKind::CylinderAxis { .. } => (-0.5, -0.5),
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        match *self {
            WeightKind::CylinderAxis { length } => (0.0, length),
            _ => (-1.0, 1.0),
        }
    }

    /// Total mass of the weight.
    pub fn mass(&self) -> f64 {
        match *self {
            WeightKind::SymmetricJacobi { alpha } => symmetric_jacobi_mass(alpha),
            WeightKind::Jacobi { alpha, beta } => jacobi_mass(alpha, beta),
            WeightKind::InverseSemicircle => PI,
            WeightKind::CylinderAxis { .. } => 1.0,
        }
    }

    /// Exact integral of `x^k` against the weight, where `x ∈ [0, 1]` is the
    /// affine image of the interval. All such moments are positive, so the
    /// certificate below never divides by a vanishing reference.
    pub fn shifted_moment(&self, k: usize) -> f64 {
        let (alpha, beta) = self.jacobi_exponents();
        let ratio = (0..k).fold(1.0, |acc, i| {
            let i = i as f64;
            acc * (beta + 1.0 + i) / (alpha + beta + 2.0 + i)
        });
        ratio * self.mass()
    }
}

/// Nodes, positive weights, and guaranteed algebraic precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub weight_kind: WeightKind,
    pub precision: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Largest relative error over the monomials `x^k`, `k ≤ precision`,
    /// against exact Beta-function moments.
    pub fn certify(&self) -> f64 {
        let (lo, hi) = self.weight_kind.interval();
        (0..=self.precision)
            .map(|k| {
                let approx = self.integrate(|t| ((t - lo) / (hi - lo)).powi(k as i32));
                let exact = self.weight_kind.shifted_moment(k);
                ((approx - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn golub_welsch(rec: &JacobiRecurrence, n: usize, mass: f64, label: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let (diag, off) = rec.jacobi_matrix(n);
    let size = n + 1;
    let mut m = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        m[(i, i)] = diag[i];
        if i + 1 < size {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::try_new(m, 1e-16, 10_000).ok_or_else(|| OpedError::EigenNonConvergence {
        rule: label.to_string(),
        nodes: size,
    })?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut values = vec![0.0; size];
    let mut weights = Vec::with_capacity(size);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = rec.eval_with_derivative(n, *x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        rec.eval_into(*x, &mut values);
        let christoffel: f64 = values.iter().map(|v| v * v).sum();
        weights.push(mass / christoffel);
    }
    Ok((nodes, weights))
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for j in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - j] - nodes[j]);
        let w = 0.5 * (weights[j] + weights[n - 1 - j]);
        nodes[j] = -x;
        nodes[n - 1 - j] = x;
        weights[j] = w;
        weights[n - 1 - j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// `(n+1)`-point Gauss rule for `(1-t²)^α`: nodes are the zeros of
/// `C_{n+1}^{α+1/2}`, precision `2n+1`. Any `α > -1` is accepted.
pub fn gauss_symmetric_jacobi(alpha: f64, n: usize) -> Result<QuadRule> {
    if !(alpha > -1.0) {
        return Err(OpedError::Domain(format!("weight exponent must exceed -1, got {alpha}")));
    }
    let rec = JacobiRecurrence::new(alpha, alpha, n + 1)?;
    let mass = symmetric_jacobi_mass(alpha);
    let (mut nodes, mut weights) = golub_welsch(&rec, n, mass, "symmetric Gauss-Jacobi")?;
    symmetrize(&mut nodes, &mut weights);
    Ok(QuadRule {
        nodes,
        weights,
        weight_kind: WeightKind::SymmetricJacobi { alpha },
        precision: 2 * n + 1,
    })
}

/// Quadrature on the zeros of the quasi-orthogonal polynomial
/// `C_{n+1}^{α+1/2} + a C_n^{α+1/2}`. Only `a = 0` (the Gauss rule) is
/// supported; other values are rejected.
pub fn gauss_quasi_orthogonal(alpha: f64, n: usize, a: f64) -> Result<QuadRule> {
    if a != 0.0 {
        return Err(OpedError::Domain(format!(
            "quasi-orthogonal rules with a = {a} ≠ 0 are not implemented"
        )));
    }
    gauss_symmetric_jacobi(alpha, n)
}

/// `(n+1)`-point Gauss rule for `(1-t)^α (1+t)^β`.
pub fn gauss_jacobi(alpha: f64, beta: f64, n: usize) -> Result<QuadRule> {
    let rec = JacobiRecurrence::new(alpha, beta, n + 1)?;
    let (nodes, weights) = golub_welsch(&rec, n, jacobi_mass(alpha, beta), "Gauss-Jacobi")?;
    Ok(QuadRule {
        nodes,
        weights,
        weight_kind: WeightKind::Jacobi { alpha, beta },
        precision: 2 * n + 1,
    })
}

/// `cos((2j+1)π/(2n+2))` for `j = 0..=n`, in that (decreasing) order.
pub fn chebyshev_first_kind_zeros(n: usize) -> Vec<f64> {
    let count = n + 1;
    let mut out = vec![0.0; count];
    for j in 0..count / 2 {
        let x = ((2 * j + 1) as f64 * PI / (2 * count) as f64).cos();
        out[j] = x;
        out[count - 1 - j] = -x;
    }
    out
}

/// Gauss–Chebyshev rule on the zeros of `T_{n+1}` for `1/√(1-t²)`:
/// equal weights `π/(n+1)`, precision `2n+1`. Nodes are returned in
/// increasing order.
pub fn cheb2_point_rule(n: usize) -> QuadRule {
    let mut nodes = chebyshev_first_kind_zeros(n);
    nodes.reverse();
    QuadRule {
        weights: vec![PI / (n + 1) as f64; n + 1],
        nodes,
        weight_kind: WeightKind::InverseSemicircle,
        precision: 2 * n + 1,
    }
}

/// Chebyshev rule mapped onto `[0, L]`: nodes `(L/2)(1 + cos((2i+1)π/(2n+2)))`,
/// weights `1/(n+1)` against the unit-mass weight `W_L`.
pub fn cylinder_axis_rule(length: f64, n: usize) -> Result<QuadRule> {
    if !(length > 0.0) {
        return Err(OpedError::Domain(format!("cylinder length must be positive, got {length}")));
    }
    let base = cheb2_point_rule(n);
    Ok(QuadRule {
        nodes: base.nodes.iter().map(|u| 0.5 * length * (1.0 + u)).collect(),
        weights: vec![1.0 / (n + 1) as f64; n + 1],
        weight_kind: WeightKind::CylinderAxis { length },
        precision: 2 * n + 1,
    })
}
