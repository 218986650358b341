//! Phantoms with analytic attenuated projections and pointwise truth.

use serde::{Deserialize, Serialize};

use crate::basis2d::{basis_dim, BasisScratch, DiskBasisTable};
use crate::error::{OpedError, Result};
use crate::polynomial::weighted_segment_moments;
use crate::radon2d::{chord_integral_numeric, radon_expansion, weighted_segment_integral, ChordSpec};
use crate::recon2d::{RasterGrid, RasterSpec};
use crate::specfun::symmetric_jacobi_mass;

/// Default half-width of the band around jump radii excluded from metrics.
pub const DEFAULT_JUMP_BAND: f64 = 0.03;

const ORACLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    /// `value` on `r_inner ≤ r ≤ r_outer`.
    Annulus { r_inner: f64, r_outer: f64, value: f64 },
    /// Expansion in the orthonormal disk basis for weight parameter `mu`,
    /// flat coefficient layout up to `degree`.
    BasisPoly { mu: f64, degree: usize, coeffs: Vec<f64> },
    /// `p(x cos φ + y sin φ)` with `p(s) = Σ coeffs[i] sⁱ`.
    RidgePoly { angle: f64, coeffs: Vec<f64> },
}

impl Primitive {
    fn validate(&self) -> Result<()> {
        match self {
            Primitive::Annulus { r_inner, r_outer, value } => {
                if !(0.0 <= *r_inner && r_inner < r_outer && *r_outer <= 1.0) || !value.is_finite() {
                    return Err(OpedError::Domain(format!(
                        "annulus needs 0 ≤ r_inner < r_outer ≤ 1, got ({r_inner}, {r_outer})"
                    )));
                }
            }
            Primitive::BasisPoly { mu, degree, coeffs } => {
                if !(*mu >= 0.0) || coeffs.len() != basis_dim(*degree) {
                    return Err(OpedError::Shape(format!(
                        "degree {degree} expansion needs {} coefficients, got {}",
                        basis_dim(*degree),
                        coeffs.len()
                    )));
                }
            }
            Primitive::RidgePoly { angle, coeffs } => {
                if !angle.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(OpedError::Domain("ridge polynomial has non-finite data".into()));
                }
            }
        }
        Ok(())
    }
}

/// Sum of primitives supported on the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phantom {
    pub primitives: Vec<Primitive>,
}

/// `L_μ(R, t)`: projection of the indicator of the disk of radius `R`.
///
/// Closed forms at `μ ∈ {0, 1/2, 3/2}` and for `R = 1`; other cases use the
/// numeric segment integral.
pub fn annulus_sinogram_value(mu: f64, radius: f64, t: f64) -> Result<f64> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(OpedError::Domain(format!("radius must lie in (0, 1], got {radius}")));
    }
    if !(t.abs() <= 1.0) {
        return Err(OpedError::Domain(format!("|t| must not exceed 1, got {t}")));
    }
    let a2 = 1.0 - t * t;
    if radius == 1.0 {
        return Ok(symmetric_jacobi_mass(mu - 0.5) * a2.powf(mu));
    }
    if t.abs() >= radius {
        return Ok(0.0);
    }
    let s2 = radius * radius - t * t;
    let s = s2.sqrt();
    Ok(if mu == 0.0 {
        2.0 * (s2 / a2).sqrt().min(1.0).asin()
    } else if mu == 0.5 {
        2.0 * s
    } else if mu == 1.5 {
        2.0 * s * a2 - 2.0 / 3.0 * s * s2
    } else {
        weighted_segment_integral(|_| 1.0, a2.sqrt(), -s, s, mu, ORACLE_TOL)?
    })
}

impl Phantom {
    /// Value 1 on `r ≤ 0.1` and on `0.9 ≤ r ≤ 1`, zero elsewhere.
    pub fn ring() -> Self {
        Self {
            primitives: vec![
                Primitive::Annulus { r_inner: 0.9, r_outer: 1.0, value: 1.0 },
                Primitive::Annulus { r_inner: 0.0, r_outer: 0.1, value: 1.0 },
            ],
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            primitives: vec![Primitive::Annulus { r_inner: 0.0, r_outer: 1.0, value }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.primitives.iter().try_for_each(Primitive::validate)
    }

    /// Radii across which the phantom jumps.
    pub fn jump_radii(&self) -> Vec<f64> {
        let mut radii = Vec::new();
        for p in &self.primitives {
            if let Primitive::Annulus { r_inner, r_outer, .. } = p {
                if *r_inner > 0.0 {
                    radii.push(*r_inner);
                }
                radii.push(*r_outer);
            }
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        radii
    }

    /// Point evaluator with basis tables prepared once.
    pub fn evaluator(&self) -> Result<PhantomEvaluator<'_>> {
        self.validate()?;
        let tables = self
            .primitives
            .iter()
            .map(|p| match p {
                Primitive::BasisPoly { mu, degree, .. } => DiskBasisTable::new(*mu, *degree).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_>>()?;
        Ok(PhantomEvaluator { phantom: self, tables })
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.evaluator()?.eval(x, y))
    }

    /// `R_θ^μ` of the phantom along `chord`.
    pub fn radon(&self, mu: f64, chord: ChordSpec) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.primitives {
            p.validate()?;
            total += match p {
                Primitive::Annulus { r_inner, r_outer, value } => {
                    let inner = if *r_inner > 0.0 {
                        annulus_sinogram_value(mu, *r_inner, chord.t)?
                    } else {
                        0.0
                    };
                    value * (annulus_sinogram_value(mu, *r_outer, chord.t)? - inner)
                }
                Primitive::BasisPoly { mu: pmu, degree, coeffs } => {
                    let table = DiskBasisTable::new(*pmu, *degree)?;
                    if *pmu == mu {
                        radon_expansion(&table, *degree, coeffs, chord)?
                    } else {
                        let mut scratch = BasisScratch::new(*degree);
                        let mut vals = vec![0.0; basis_dim(*degree)];
                        chord_integral_numeric(
                            |x, y| {
                                table.eval_all_into(*degree, x, y, &mut vals, &mut scratch);
                                vals.iter().zip(coeffs).map(|(v, c)| v * c).sum()
                            },
                            mu,
                            chord,
                            ORACLE_TOL,
                        )?
                    }
                }
                Primitive::RidgePoly { angle, coeffs } => {
                    let (sn, cs) = (chord.theta - angle).sin_cos();
                    let sigma = restrict_ridge(coeffs, chord.t * cs, -sn);
                    weighted_segment_moments(&sigma, chord.half_length(), mu)
                }
            };
        }
        Ok(total)
    }

    /// Pixel-centre truth on `spec`, with pixels within `band` of a jump
    /// radius flagged for exclusion from metrics.
    pub fn rasterize_truth(&self, spec: RasterSpec, band: f64) -> Result<RasterGrid> {
        let ev = self.evaluator()?;
        let jumps = self.jump_radii();
        let mut grid = RasterGrid::from_fn(spec, |x, y| ev.eval(x, y));
        for (idx, excl) in grid.excluded.iter_mut().enumerate() {
            let (x, y) = spec.pixel_center(idx % spec.width, idx / spec.width);
            let r = x.hypot(y);
            *excl = jumps.iter().any(|j| (r - j).abs() < band);
        }
        Ok(grid)
    }
}

/// Coefficients in `σ` of `p(c0 + c1 σ)`.
fn restrict_ridge(coeffs: &[f64], c0: f64, c1: f64) -> Vec<f64> {
    // Horner in the polynomial ring
    let mut acc: Vec<f64> = Vec::new();
    for &c in coeffs.iter().rev() {
        let mut next = vec![0.0; acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i] += a * c0;
            next[i + 1] += a * c1;
        }
        next[0] += c;
        acc = next;
    }
    acc
}

/// Evaluates a validated phantom at points.
pub struct PhantomEvaluator<'a> {
    phantom: &'a Phantom,
    tables: Vec<Option<DiskBasisTable>>,
}

impl PhantomEvaluator<'_> {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        let mut total = 0.0;
        for (p, table) in self.phantom.primitives.iter().zip(&self.tables) {
            total += match p {
                Primitive::Annulus { r_inner, r_outer, value } => {
                    if *r_inner <= r && r <= *r_outer {
                        *value
                    } else {
                        0.0
                    }
                }
                Primitive::BasisPoly { degree, coeffs, .. } => {
                    let table = table.as_ref().expect("table prepared for basis primitive");
                    let mut vals = vec![0.0; basis_dim(*degree)];
                    table.eval_all_into(*degree, x, y, &mut vals, &mut BasisScratch::new(*degree));
                    vals.iter().zip(coeffs).map(|(v, c)| v * c).sum()
                }
                Primitive::RidgePoly { angle, coeffs } => {
                    let s = x * angle.cos() + y * angle.sin();
                    coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
                }
            };
        }
        total
    }
}
