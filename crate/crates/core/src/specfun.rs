//! Classical orthogonal polynomials and the normalization constants shared
//! by every other module.
//!
//! Conventions used throughout the crate:
//!
//! * `C_k^λ` is the Gegenbauer polynomial, orthogonal for `(1-s²)^(λ-1/2)`,
//!   with `C_k^λ(1) = (2λ)_k / k!`.
//! * `h_k = λ (2λ)_k / ((k+λ) k!)` is its squared norm under the
//!   *normalized* weight (total mass one).
//! * `p_n^(α,β)` is the Jacobi polynomial that is orthonormal under the
//!   normalized measure `c_{α,β} (1-t)^α (1+t)^β dt`, so `p_0 ≡ 1`.
//! * `b_μ = ∫ (1-s²)^(μ-1/2) ds`, the total mass of the chord weight. This is
//!   the constant that appears in the closed form of the attenuated Radon
//!   transform of an orthogonal polynomial.

use std::f64::consts::PI;

use crate::error::{OpedError, Result};

/// Largest polynomial degree any evaluator accepts. Upward recurrences are
/// stable on `[-1, 1]`, but endpoint values grow polynomially in the degree.
pub const MAX_DEGREE: usize = 4096;

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)` as an iterated product.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `∫_{-1}^{1} (1-t²)^α dt = √π Γ(α+1) / Γ(α+3/2)` for `α > -1`.
pub fn symmetric_jacobi_mass(alpha: f64) -> f64 {
    if alpha < 60.0 {
        PI.sqrt() * gamma(alpha + 1.0) / gamma(alpha + 1.5)
    } else {
        PI.sqrt() * (libm::lgamma(alpha + 1.0) - libm::lgamma(alpha + 1.5)).exp()
    }
}

/// `∫_{-1}^{1} (1-t)^α (1+t)^β dt`.
pub fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    let log = (alpha + beta + 1.0) * std::f64::consts::LN_2 + libm::lgamma(alpha + 1.0)
        + libm::lgamma(beta + 1.0)
        - libm::lgamma(alpha + beta + 2.0);
    log.exp()
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(OpedError::Range(format!(
            "degree {k} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// Values `C_0^λ(s), ..., C_{k_max}^λ(s)`.
pub fn eval_gegenbauer(lambda: f64, k_max: usize, s: f64) -> Result<Vec<f64>> {
    if !(lambda > 0.0) {
        return Err(OpedError::Domain(format!(
            "Gegenbauer parameter must be positive, got {lambda}"
        )));
    }
    check_degree(k_max)?;
    let mut out = vec![0.0; k_max + 1];
    gegenbauer_into(lambda, s, &mut out);
    Ok(out)
}

/// Fills `out[k] = C_k^λ(s)` for `k < out.len()`. No argument checks.
#[inline]
pub fn gegenbauer_into(lambda: f64, s: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 2.0 * lambda * s;
    for k in 2..out.len() {
        let kf = k as f64;
        out[k] = (2.0 * (kf + lambda - 1.0) * s * out[k - 1] - (kf + 2.0 * lambda - 2.0) * out[k - 2])
            / kf;
    }
}

/// `C_k^λ(1) = (2λ)_k / k!`.
pub fn gegenbauer_at_one(lambda: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (2.0 * lambda + i as f64) / (i as f64 + 1.0))
}

/// `h_k = λ (2λ)_k / ((k+λ) k!)`.
pub fn gegenbauer_norm_sq(lambda: f64, k: usize) -> f64 {
    lambda / (k as f64 + lambda) * gegenbauer_at_one(lambda, k)
}

/// Orthonormal Gegenbauer values `C_k^λ(s) / √h_k`, orthonormal under the
/// normalized weight `(1-s²)^(λ-1/2)`.
pub fn eval_gegenbauer_orthonormal(lambda: f64, k_max: usize, s: f64) -> Result<Vec<f64>> {
    let mut v = eval_gegenbauer(lambda, k_max, s)?;
    for (k, x) in v.iter_mut().enumerate() {
        *x /= gegenbauer_norm_sq(lambda, k).sqrt();
    }
    Ok(v)
}

/// Three-term recurrence for the Jacobi polynomials orthonormal under the
/// normalized measure. Coefficients are computed once so the table can be
/// reused across many evaluation points.
#[derive(Debug, Clone)]
pub struct JacobiRecurrence {
    pub alpha: f64,
    pub beta: f64,
    /// Diagonal entries of the Jacobi matrix.
    diag: Vec<f64>,
    /// Off-diagonal entries; `offdiag[n]` couples degrees `n` and `n+1`.
    offdiag: Vec<f64>,
}

impl JacobiRecurrence {
    pub fn new(alpha: f64, beta: f64, n_max: usize) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(OpedError::Domain(format!(
                "Jacobi parameters must exceed -1, got ({alpha}, {beta})"
            )));
        }
        check_degree(n_max)?;
        let ab = alpha + beta;
        let diag = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    (beta - alpha) / (ab + 2.0)
                } else {
                    let s = 2.0 * n as f64 + ab;
                    (beta * beta - alpha * alpha) / (s * (s + 2.0))
                }
            })
            .collect();
        let offdiag = (1..=n_max + 1)
            .map(|n| {
                let nf = n as f64;
                let b = if n == 1 {
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    let s = 2.0 * nf + ab;
                    4.0 * nf * (nf + alpha) * (nf + beta) * (nf + ab)
                        / (s * s * (s + 1.0) * (s - 1.0))
                };
                b.sqrt()
            })
            .collect();
        Ok(Self {
            alpha,
            beta,
            diag,
            offdiag,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.diag.len() - 1
    }

    /// Diagonal and off-diagonal of the `(n+1)×(n+1)` Jacobi matrix.
    pub fn jacobi_matrix(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        (self.diag[..=n].to_vec(), self.offdiag[..n].to_vec())
    }

    /// Fills `out[l] = p_l(u)`; `out.len()` must not exceed `max_degree()+1`.
    #[inline]
    pub fn eval_into(&self, u: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = (u - self.diag[0]) / self.offdiag[0];
        for n in 1..out.len() - 1 {
            out[n + 1] =
                ((u - self.diag[n]) * out[n] - self.offdiag[n - 1] * out[n - 1]) / self.offdiag[n];
        }
    }

    /// `p_{n+1}(u)` and its derivative, used to polish quadrature nodes.
    pub fn eval_with_derivative(&self, n: usize, u: f64) -> (f64, f64) {
        let (mut p0, mut p1) = (0.0, 1.0);
        let (mut d0, mut d1) = (0.0, 0.0);
        for k in 0..=n {
            let prev = if k == 0 { 0.0 } else { self.offdiag[k - 1] };
            let p2 = ((u - self.diag[k]) * p1 - prev * p0) / self.offdiag[k];
            let d2 = (p1 + (u - self.diag[k]) * d1 - prev * d0) / self.offdiag[k];
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        (p1, d1)
    }
}

/// Orthonormal Jacobi values `p_0^(α,β)(u), ..., p_{l_max}^(α,β)(u)`.
pub fn eval_jacobi_orthonormal(alpha: f64, beta: f64, l_max: usize, u: f64) -> Result<Vec<f64>> {
    let rec = JacobiRecurrence::new(alpha, beta, l_max)?;
    let mut out = vec![0.0; l_max + 1];
    rec.eval_into(u, &mut out);
    Ok(out)
}

/// Every normalization constant for the weight `W_μ(x,y) = (1-x²-y²)^(μ-1/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormTable {
    pub mu: f64,
    /// `μ + 1/2`, the Gegenbauer index paired with `W_μ`.
    pub lambda: f64,
    /// Disk normalizer `(μ+1/2)/π = 1 / ∫_{B²} W_μ`.
    pub a_mu: f64,
    /// Chord-weight mass `∫ (1-s²)^(μ-1/2) ds = √π Γ(μ+1/2) / Γ(μ+1)`.
    pub b_mu: f64,
    /// `1 / ∫ (1-t²)^(μ-1) dt`; zero at `μ = 0`, where the kernel measure
    /// degenerates to the two-point average (see `beta_endpoint_limit`).
    pub beta_mu: f64,
    pub beta_endpoint_limit: bool,
    /// Ball normalizer `Γ(μ+2) / (π^{3/2} Γ(μ+1/2)) = 1 / ∫_{B³} W_μ`.
    pub a_mu3: f64,
    /// `h_k` for the Gegenbauer index `λ`, `k = 0..=k_max`.
    pub geg_norm_sq: Vec<f64>,
}

pub fn norm_table(mu: f64, k_max: usize) -> Result<NormTable> {
    if !(mu >= 0.0) {
        return Err(OpedError::Domain(format!("μ must be nonnegative, got {mu}")));
    }
    let lambda = mu + 0.5;
    let (beta_mu, beta_endpoint_limit) = if mu > 0.0 {
        (1.0 / symmetric_jacobi_mass(mu - 1.0), false)
    } else {
        (0.0, true)
    };
    Ok(NormTable {
        mu,
        lambda,
        a_mu: lambda / PI,
        b_mu: symmetric_jacobi_mass(mu - 0.5),
        beta_mu,
        beta_endpoint_limit,
        a_mu3: gamma(mu + 2.0) / (PI.powf(1.5) * gamma(mu + 0.5)),
        geg_norm_sq: (0..=k_max).map(|k| gegenbauer_norm_sq(lambda, k)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gegenbauer_examples() {
        assert_eq!(eval_gegenbauer(1.0, 2, 1.0).unwrap(), vec![1.0, 2.0, 3.0]);
        let v = eval_gegenbauer(0.5, 1, 0.3).unwrap();
        assert_relative_eq!(v[1], 0.3, epsilon = 1e-15);
        assert_eq!(eval_gegenbauer(2.0, 0, -0.7).unwrap(), vec![1.0]);
        assert!(matches!(eval_gegenbauer(0.0, 3, 0.1), Err(OpedError::Domain(_))));
        assert!(matches!(eval_gegenbauer(1.0, MAX_DEGREE + 1, 0.1), Err(OpedError::Range(_))));
    }

    #[test]
    fn chebyshev_second_kind_closed_form() {
        for i in 0..100 {
            let theta = 0.013 + i as f64 * 0.0311;
            let v = eval_gegenbauer(1.0, 50, theta.cos()).unwrap();
            for (k, c) in v.iter().enumerate() {
                let exact = ((k as f64 + 1.0) * theta).sin() / theta.sin();
                assert!((c - exact).abs() <= 1e-12 * (1.0 + exact.abs()), "k={k}");
            }
        }
    }

    #[test]
    fn gegenbauer_value_at_one() {
        for mu in [0.0, 0.5, 1.5, 2.5, 0.3] {
            let lambda = mu + 0.5;
            let v = eval_gegenbauer(lambda, 30, 1.0).unwrap();
            for (k, c) in v.iter().enumerate() {
                let exact = pochhammer(2.0 * mu + 1.0, k) / pochhammer(1.0, k);
                assert_relative_eq!(*c, exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        let v = eval_jacobi_orthonormal(0.0, 0.0, 1, 1.0).unwrap();
        assert_relative_eq!(v[0], 1.0);
        assert_relative_eq!(v[1], 3f64.sqrt(), max_relative = 1e-15);
        assert_eq!(eval_jacobi_orthonormal(0.0, 0.0, 0, 0.2).unwrap(), vec![1.0]);
        assert!(eval_jacobi_orthonormal(-1.0, 0.0, 2, 0.0).is_err());
        assert!(eval_jacobi_orthonormal(0.0, -1.5, 2, 0.0).is_err());
    }

    #[test]
    fn norm_table_examples() {
        let t = norm_table(0.5, 10).unwrap();
        assert_relative_eq!(t.a_mu, 1.0 / PI, max_relative = 1e-15);
        assert_relative_eq!(t.b_mu, 2.0, max_relative = 1e-14);
        for h in &t.geg_norm_sq {
            assert_relative_eq!(*h, 1.0, max_relative = 1e-14);
        }
        let t0 = norm_table(0.0, 3).unwrap();
        assert_relative_eq!(t0.a_mu, 0.5 / PI, max_relative = 1e-15);
        assert_relative_eq!(t0.b_mu, PI, max_relative = 1e-14);
        assert!(t0.beta_endpoint_limit);
        let t15 = norm_table(1.5, 2).unwrap();
        assert_relative_eq!(t15.geg_norm_sq[0], 1.0, max_relative = 1e-15);
        assert!(norm_table(-0.1, 2).is_err());
    }

    #[test]
    fn pochhammer_small_argument() {
        assert_eq!(pochhammer(0.5, 0), 1.0);
        assert_relative_eq!(pochhammer(1e-9, 3), 1e-9 * (1.0 + 1e-9) * (2.0 + 1e-9));
    }
}
