//! Multivariate polynomials in monomial form with exact weighted line
//! integrals.
//!
//! Restricted to a line `x(σ) = p₀ + σ d` with `|d| = 1` and `p₀ ⊥ d`, the
//! weight `(1 - |x|²)^(μ-1/2)` becomes `(A² - σ²)^(μ-1/2)` with
//! `A² = 1 - |p₀|²`, and the integral of each power of `σ` is a Beta
//! function. This gives attenuated Radon data of polynomials without going
//! through the orthogonal basis, which is what makes it a useful oracle.

use crate::specfun::symmetric_jacobi_mass;

/// `∫_{-A}^{A} q(σ) (A²-σ²)^(μ-1/2) dσ` for `q(σ) = Σ_i coeffs[i] σ^i`.
/// At `A = 0` this is the limit value: zero for `μ > 0`, `π q(0)` for `μ = 0`.
pub fn weighted_segment_moments(coeffs: &[f64], half_len: f64, mu: f64) -> f64 {
    let a2 = half_len * half_len;
    let mut beta = symmetric_jacobi_mass(mu - 0.5);
    let mut scale = half_len.powf(2.0 * mu);
    let mut total = 0.0;
    for q in 0..=coeffs.len().saturating_sub(1) / 2 {
        if q > 0 {
            let qf = q as f64;
            beta *= (qf - 0.5) / (qf + mu);
            scale *= a2;
        }
        total += coeffs[2 * q] * scale * beta;
    }
    total
}

/// A polynomial in `D` variables stored as a list of monomial terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<const D: usize> {
    pub terms: Vec<([u32; D], f64)>,
}

/// Exponent vectors of total degree `≤ n`, in graded order.
pub fn monomials<const D: usize>(n: u32) -> Vec<[u32; D]> {
    fn rec<const D: usize>(dim: usize, left: u32, cur: &mut [u32; D], out: &mut Vec<[u32; D]>) {
        if dim == D {
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[dim] = e;
            rec(dim + 1, left - e, cur, out);
        }
        cur[dim] = 0;
    }
    let mut out = Vec::new();
    for deg in 0..=n {
        let mut all = Vec::new();
        rec::<D>(0, deg, &mut [0; D], &mut all);
        out.extend(all.into_iter().filter(|e| e.iter().sum::<u32>() == deg));
    }
    out
}

impl<const D: usize> Polynomial<D> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Dense polynomial of total degree `≤ n`, coefficients taken in the
    /// order of [`monomials`].
    pub fn dense(n: u32, mut coeff: impl FnMut() -> f64) -> Self {
        Self {
            terms: monomials::<D>(n).into_iter().map(|e| (e, coeff())).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: [f64; D]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, v)| v.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Coefficients in `σ` of `P(p₀ + σ d)`.
    pub fn restrict_to_line(&self, p0: [f64; D], dir: [f64; D]) -> Vec<f64> {
        let deg = self.degree() as usize;
        // powers[dim][e] = coefficients of (p0[dim] + σ dir[dim])^e
        let powers: Vec<Vec<Vec<f64>>> = (0..D)
            .map(|dim| {
                let mut v = vec![vec![1.0]];
                for e in 1..=deg {
                    let prev = &v[e - 1];
                    let mut next = vec![0.0; e + 1];
                    for (i, c) in prev.iter().enumerate() {
                        next[i] += c * p0[dim];
                        next[i + 1] += c * dir[dim];
                    }
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = vec![0.0; deg + 1];
        for (e, c) in &self.terms {
            if *c == 0.0 {
                continue;
            }
            let mut acc = vec![*c];
            for dim in 0..D {
                let f = &powers[dim][e[dim] as usize];
                let mut next = vec![0.0; acc.len() + f.len() - 1];
                for (i, a) in acc.iter().enumerate() {
                    for (j, b) in f.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                acc = next;
            }
            for (i, a) in acc.into_iter().enumerate() {
                out[i] += a;
            }
        }
        out
    }

    /// `∫ P(x) (1-|x|²)^(μ-1/2) dℓ` over the segment of the line
    /// `p₀ + σ d` inside the unit ball (`|d| = 1`, `p₀ ⊥ d`).
    pub fn ball_line_integral(&self, p0: [f64; D], dir: [f64; D], mu: f64) -> f64 {
        let a2 = 1.0 - p0.iter().map(|v| v * v).sum::<f64>();
        let coeffs = self.restrict_to_line(p0, dir);
        weighted_segment_moments(&coeffs, a2.max(0.0).sqrt(), mu)
    }
}

impl Polynomial<2> {
    /// Exact attenuated Radon transform `R_θ^μ(P; t)`.
    pub fn radon(&self, mu: f64, theta: f64, t: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        self.ball_line_integral([t * c, t * s], [-s, c], mu)
    }
}

impl Polynomial<3> {
    /// Fixes the last variable, giving a polynomial on the plane.
    pub fn slice(&self, z: f64) -> Polynomial<2> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0], e[1]], c * z.powi(e[2] as i32)))
                .collect(),
        }
    }

    /// For a polynomial even in `x₃`, the function `F(x₁, x₂) =
    /// f(x₁, x₂, √(1-x₁²-x₂²))` as a polynomial, or `None` if an odd power
    /// of `x₃` occurs.
    pub fn even_lift_to_disk(&self) -> Option<Polynomial<2>> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if *c == 0.0 {
                continue;
            }
            if e[2] % 2 == 1 {
                return None;
            }
            // (1 - x² - y²)^q expanded by the trinomial theorem
            let q = e[2] / 2;
            for i in 0..=q {
                for j in 0..=q - i {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    let multinom = factorial(q) / (factorial(i) * factorial(j) * factorial(q - i - j));
                    terms.push(([e[0] + 2 * i, e[1] + 2 * j], c * sign * multinom));
                }
            }
        }
        Some(Polynomial { terms })
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials::<2>(3).len(), 10);
        assert_eq!(monomials::<3>(2).len(), 10);
        assert_eq!(monomials::<2>(2)[0], [0, 0]);
    }

    #[test]
    fn constant_chords() {
        let one = Polynomial::<2> { terms: vec![([0, 0], 1.0)] };
        let t: f64 = 0.6;
        assert_relative_eq!(one.radon(0.5, 0.3, t), 2.0 * (1.0 - t * t).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(one.radon(0.0, 1.1, t), PI, epsilon = 1e-14);
        assert_relative_eq!(one.radon(0.0, 1.1, 1.0), PI, epsilon = 1e-14);
        assert_eq!(one.radon(0.5, 1.1, 1.0), 0.0);
    }

    #[test]
    fn linear_ridge_chord() {
        // f = 2(x cos φ + y sin φ) at μ = 1/2
        let phi: f64 = 0.4;
        let f = Polynomial::<2> {
            terms: vec![([1, 0], 2.0 * phi.cos()), ([0, 1], 2.0 * phi.sin())],
        };
        let (theta, t): (f64, f64) = (1.3, -0.35);
        let expect = 4.0 * t * (1.0 - t * t).sqrt() * (theta - phi).cos();
        assert_relative_eq!(f.radon(0.5, theta, t), expect, epsilon = 1e-14);
    }

    #[test]
    fn even_lift() {
        // x₁² + x₃² on the sphere is 1 - x₂²
        let f = Polynomial::<3> {
            terms: vec![([2, 0, 0], 1.0), ([0, 0, 2], 1.0)],
        };
        let g = f.even_lift_to_disk().unwrap();
        for (x, y) in [(0.1, 0.2), (-0.5, 0.7)] {
            assert_relative_eq!(g.eval([x, y]), 1.0 - y * y, epsilon = 1e-15);
        }
        let odd = Polynomial::<3> { terms: vec![([0, 0, 1], 1.0)] };
        assert!(odd.even_lift_to_disk().is_none());
    }
}
