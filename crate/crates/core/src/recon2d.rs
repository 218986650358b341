//! Reconstruction operators on the disk.
//!
//! Both schemes evaluate `A f(p) = Σ_ν Σ_j R_ν(t_j) ω_j Φ_n(angle_ν, t_j; p)`.
//! The fast path reorders the double sum into three stages: Gegenbauer
//! moments per view, angular sums per basis entry, and a diagonal scaling.
//! The output is the polynomial `A f` itself, as coefficients in the
//! orthonormal disk basis.

use rayon::prelude::*;

use crate::basis2d::{basis_dim, basis_index, degree_entries, trig_factor, BasisScratch, DiskBasisTable, DiskPoint};
use crate::error::{OpedError, Result};
use crate::quadrature::gauss_symmetric_jacobi;
use crate::radon2d::{Scheme, SinogramGrid};
use crate::specfun::{gegenbauer_into, norm_table};

/// A polynomial of degree `≤ degree` in the orthonormal disk basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientImage {
    pub mu: f64,
    pub degree: usize,
    /// Flat layout of [`basis_index`].
    pub coeffs: Vec<f64>,
    /// Scheme the image was reconstructed from, if any.
    pub scheme: Option<Scheme>,
}

impl CoefficientImage {
    pub fn zeros(mu: f64, degree: usize) -> Self {
        Self {
            mu,
            degree,
            coeffs: vec![0.0; basis_dim(degree)],
            scheme: None,
        }
    }

    pub fn get(&self, k: usize, l: usize, eps: usize) -> f64 {
        self.coeffs[basis_index(k, l, eps)]
    }

    /// Copy keeping only the degree-`k` entries.
    pub fn degree_slice(&self, k: usize) -> Result<Self> {
        if k > self.degree {
            return Err(OpedError::Range(format!("degree {k} exceeds image degree {}", self.degree)));
        }
        let mut out = self.clone();
        let (lo, hi) = (k * (k + 1) / 2, (k + 1) * (k + 2) / 2);
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if i < lo || i >= hi {
                *c = 0.0;
            }
        }
        Ok(out)
    }

    /// `coeffs[k][l][ε]`, with a single entry for `k = 2l`.
    pub fn nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..=self.degree)
            .map(|k| {
                (0..=k / 2)
                    .map(|l| {
                        let eps_max = if 2 * l < k { 2 } else { 1 };
                        (0..eps_max).map(|e| self.get(k, l, e)).collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_nested(mu: f64, nested: &[Vec<Vec<f64>>]) -> Result<Self> {
        let degree = nested.len().checked_sub(1).ok_or_else(|| OpedError::Format("empty coefficient array".into()))?;
        let mut img = Self::zeros(mu, degree);
        for (k, row) in nested.iter().enumerate() {
            if row.len() != k / 2 + 1 {
                return Err(OpedError::Format(format!("degree {k} needs {} radial entries", k / 2 + 1)));
            }
            for (l, cell) in row.iter().enumerate() {
                let eps_max = if 2 * l < k { 2 } else { 1 };
                if cell.len() != eps_max {
                    return Err(OpedError::Format(format!("entry ({k},{l}) needs {eps_max} values")));
                }
                for (e, v) in cell.iter().enumerate() {
                    img.coeffs[basis_index(k, l, e)] = *v;
                }
            }
        }
        Ok(img)
    }

    pub fn evaluator(&self) -> Result<ImageEvaluator<'_>> {
        if self.coeffs.len() != basis_dim(self.degree) {
            return Err(OpedError::Shape("coefficient count does not match degree".into()));
        }
        Ok(ImageEvaluator {
            image: self,
            table: DiskBasisTable::new(self.mu, self.degree)?,
        })
    }

    pub fn eval(&self, p: DiskPoint) -> Result<f64> {
        Ok(self.evaluator()?.eval(p.x, p.y, &mut BasisScratch::new(self.degree)))
    }
}

/// Evaluates an image with a prepared basis table.
pub struct ImageEvaluator<'a> {
    image: &'a CoefficientImage,
    table: DiskBasisTable,
}

impl ImageEvaluator<'_> {
    /// Sum in ascending `k`, then `l`, then `ε`.
    pub fn eval(&self, x: f64, y: f64, scratch: &mut BasisScratch) -> f64 {
        let n = self.image.degree;
        let mut vals = std::mem::take(&mut scratch.values);
        vals.resize(basis_dim(n), 0.0);
        self.table.eval_all_into(n, x, y, &mut vals, scratch);
        let v = vals.iter().zip(&self.image.coeffs).fold(0.0, |acc, (b, c)| acc + b * c);
        scratch.values = vals;
        v
    }
}

/// Per-node weights `ω_j` of the scheme, folding in `a_μ`, the factor
/// `(1-t_j²)^(-μ)` (Gauss) or `sin ψ_j` (Chebyshev), and the average over
/// views.
pub fn scheme_weights(mu: f64, scheme: Scheme) -> Result<Vec<f64>> {
    let norms = norm_table(mu, 0)?;
    match scheme {
        Scheme::HalfGauss(n) => {
            let rule = gauss_symmetric_jacobi(mu, n)?;
            let views = (n + 1) as f64;
            Ok(rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(t, w)| norms.a_mu * w * (1.0 - t * t).powf(-mu) / views)
                .collect())
        }
        Scheme::FullCheb(m) => {
            let count = (2 * m + 1) as f64;
            Ok((0..=2 * m)
                .map(|j| {
                    let psi = (2 * j + 1) as f64 * std::f64::consts::PI / (4 * m + 2) as f64;
                    (mu + 0.5) * psi.sin() / (count * count)
                })
                .collect())
        }
    }
}

/// `C_k^λ(t_j)` for all nodes, `k ≤ n`, stored as `[j][k]`.
pub fn gegenbauer_table(lambda: f64, n: usize, nodes: &[f64]) -> Vec<Vec<f64>> {
    nodes
        .iter()
        .map(|&t| {
            let mut c = vec![0.0; n + 1];
            gegenbauer_into(lambda, t, &mut c);
            c
        })
        .collect()
}

/// Stage one: `â_k = Σ_j ω_j row_j C_k(t_j)` for `k ≤ n`, summed in `j` order.
pub fn view_moments(weights: &[f64], ctab: &[Vec<f64>], row: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for ((w, c), r) in weights.iter().zip(ctab).zip(row) {
        let f = w * r;
        for (o, ck) in out.iter_mut().zip(c) {
            *o += f * ck;
        }
    }
    out
}

/// Stages two and three for degrees in `ks`: angular sums of the moments
/// against `S_{m,ε}` and scaling by `((k+λ)/λ) Λ_{l,k} Ĥ_{l,k}`. `moments`
/// is indexed `[ν][k]`.
pub fn assemble_coefficients(
    table: &DiskBasisTable,
    n: usize,
    angles: &[f64],
    moments: &[Vec<f64>],
    ks: std::ops::RangeInclusive<usize>,
) -> Vec<f64> {
    let lambda = table.lambda();
    let per_k: Vec<(usize, Vec<f64>)> = ks
        .into_par_iter()
        .map(|k| {
            let scale = (k as f64 + lambda) / lambda;
            let vals = degree_entries(k)
                .map(|(l, e)| {
                    let m = k - 2 * l;
                    let f = angles
                        .iter()
                        .zip(moments)
                        .fold(0.0, |acc, (&a, mom)| acc + mom[k] * trig_factor(m, e, a));
                    scale * table.lambda_kernel(l, k) * table.h_hat(l, k) * f
                })
                .collect();
            (k, vals)
        })
        .collect();
    let mut coeffs = vec![0.0; basis_dim(n)];
    for (k, vals) in per_k {
        let base = k * (k + 1) / 2;
        coeffs[base..base + vals.len()].copy_from_slice(&vals);
    }
    coeffs
}

fn spectral(sino: &SinogramGrid, ks: std::ops::RangeInclusive<usize>) -> Result<CoefficientImage> {
    sino.validate()?;
    let n = sino.scheme.degree();
    let table = DiskBasisTable::new(sino.mu, n)?;
    let weights = scheme_weights(sino.mu, sino.scheme)?;
    let ctab = gegenbauer_table(table.lambda(), n, &sino.nodes);
    let moments: Vec<Vec<f64>> = sino
        .data
        .par_iter()
        .map(|row| view_moments(&weights, &ctab, row, n))
        .collect();
    Ok(CoefficientImage {
        mu: sino.mu,
        degree: n,
        coeffs: assemble_coefficients(&table, n, &sino.angles, &moments, ks),
        scheme: Some(sino.scheme),
    })
}

/// `A_n^μ f` (Gauss scheme) or `A_{2m}^μ f` (Chebyshev scheme) as a
/// coefficient image, by the three-stage spectral path.
pub fn reconstruct(sino: &SinogramGrid) -> Result<CoefficientImage> {
    spectral(sino, 0..=sino.scheme.degree())
}

/// Degree-`k` component of [`reconstruct`].
pub fn proj_from_sinogram(sino: &SinogramGrid, k: usize) -> Result<CoefficientImage> {
    let n = sino.scheme.degree();
    if k > n {
        return Err(OpedError::Range(format!("degree {k} exceeds reconstruction degree {n}")));
    }
    spectral(sino, k..=k)
}

/// Literal double sum `Σ_ν Σ_j data[ν][j] T_{j,ν}(p)`, with `Φ_n` evaluated
/// from scratch for every term.
pub fn naive_reference(sino: &SinogramGrid, p: DiskPoint) -> Result<f64> {
    sino.validate()?;
    let n = sino.scheme.degree();
    let table = DiskBasisTable::new(sino.mu, n)?;
    let weights = scheme_weights(sino.mu, sino.scheme)?;
    let mut total = 0.0;
    for (angle, row) in sino.angles.iter().zip(&sino.data) {
        for ((t, w), r) in sino.nodes.iter().zip(&weights).zip(row) {
            total += r * w * table.eval_phi_n(n, *angle, *t, p)?;
        }
    }
    Ok(total)
}

/// Pixel geometry of a raster covering `[-1, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RasterSpec {
    pub width: usize,
    pub height: usize,
}

impl RasterSpec {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height }
    }

    /// Centre of pixel `(col, row)`; row 0 is the top edge `y = 1`.
    #[inline]
    pub fn pixel_center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            -1.0 + (2 * col + 1) as f64 / self.width as f64,
            1.0 - (2 * row + 1) as f64 / self.height as f64,
        )
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Row-major pixel values. Pixels outside the disk are masked and hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub spec: RasterSpec,
    pub values: Vec<f64>,
    /// Pixel centre lies in the closed disk.
    pub mask: Vec<bool>,
    /// Pixel is excluded from error metrics (jump bands).
    pub excluded: Vec<bool>,
}

impl RasterGrid {
    /// Evaluates `f` at every inside pixel centre, in parallel over rows.
    pub fn from_fn(spec: RasterSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        Self::from_fn_with(spec, || (), |_, x, y| f(x, y))
    }

    /// As [`RasterGrid::from_fn`] with per-thread state.
    pub fn from_fn_with<S>(
        spec: RasterSpec,
        init: impl Fn() -> S + Sync + Send,
        f: impl Fn(&mut S, f64, f64) -> f64 + Sync + Send,
    ) -> Self {
        let mut values = vec![f64::NAN; spec.len()];
        let mut mask = vec![false; spec.len()];
        if spec.width > 0 {
            values
                .par_chunks_mut(spec.width)
                .zip(mask.par_chunks_mut(spec.width))
                .enumerate()
                .for_each_init(&init, |state, (row, (vals, inside))| {
                    for col in 0..spec.width {
                        let (x, y) = spec.pixel_center(col, row);
                        if x * x + y * y <= 1.0 {
                            inside[col] = true;
                            vals[col] = f(state, x, y);
                        }
                    }
                });
        }
        Self {
            spec,
            values,
            mask,
            excluded: vec![false; spec.len()],
        }
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.spec.width + col]
    }

    /// Pixels used by metrics: inside the disk and not excluded.
    pub fn used(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.values.len()).filter(move |&i| self.mask[i] && !self.excluded[i])
    }

    /// Largest value over inside pixels.
    pub fn max_inside(&self) -> f64 {
        (0..self.values.len())
            .filter(|&i| self.mask[i])
            .map(|i| self.values[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluates the image at every pixel centre inside the disk.
pub fn rasterize(img: &CoefficientImage, spec: RasterSpec) -> Result<RasterGrid> {
    let ev = img.evaluator()?;
    Ok(RasterGrid::from_fn_with(
        spec,
        || BasisScratch::new(img.degree),
        |scratch, x, y| ev.eval(x, y, scratch),
    ))
}

/// Interior error summary of a reconstruction against ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    pub rmse_interior: f64,
    pub max_abs_interior: f64,
    pub n_pixels_used: usize,
}

/// Compares on pixels inside the disk and outside the truth's jump bands.
pub fn error_metrics(truth: &RasterGrid, recon: &RasterGrid) -> Result<ErrorMetrics> {
    if truth.spec != recon.spec {
        return Err(OpedError::Shape("rasters have different sizes".into()));
    }
    let mut sum = 0.0;
    let mut max = 0.0f64;
    let mut count = 0;
    for i in truth.used().filter(|&i| recon.mask[i]) {
        let d = truth.values[i] - recon.values[i];
        sum += d * d;
        max = max.max(d.abs());
        count += 1;
    }
    if count == 0 {
        return Err(OpedError::Shape("no pixels left for metrics".into()));
    }
    Ok(ErrorMetrics {
        rmse_interior: (sum / count as f64).sqrt(),
        max_abs_interior: max,
        n_pixels_used: count,
    })
}

/// Lebesgue function of the Chebyshev-scheme operator,
/// `Λ_m(p) = Σ_ν Σ_j (sin ψ_j)^μ |T_{j,ν}(p)|`, and its maximum over the
/// inside pixels.
pub fn lebesgue_function(mu: f64, m: usize, spec: RasterSpec) -> Result<(RasterGrid, f64)> {
    let scheme = Scheme::FullCheb(m);
    let n = scheme.degree();
    let table = DiskBasisTable::new(mu, n)?;
    let weights = scheme_weights(mu, scheme)?;
    let nodes = scheme.nodes(mu)?;
    let angles = scheme.angles();
    let psi_pow: Vec<f64> = (0..=2 * m)
        .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / (4 * m + 2) as f64).sin().powf(mu))
        .collect();
    let grid = RasterGrid::from_fn_with(
        spec,
        || (BasisScratch::new(n), vec![0.0; basis_dim(n)]),
        |(scratch, vals), x, y| {
            table.eval_all_into(n, x, y, vals, scratch);
            let mut total = 0.0;
            for &a in &angles {
                let dk = table.dk_from_values(n, a, vals);
                for ((t, w), s) in nodes.iter().zip(&weights).zip(&psi_pow) {
                    total += s * (w * table.phi_from_dk(&dk, *t)).abs();
                }
            }
            total
        },
    );
    let max = grid.max_inside();
    Ok((grid, max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_sinogram_gives_zero_image() {
        let sino = SinogramGrid::zeros(0.5, Scheme::HalfGauss(4)).unwrap();
        let img = reconstruct(&sino).unwrap();
        assert!(img.coeffs.iter().all(|&c| c == 0.0));
        assert_eq!(img.coeffs.len(), 15);
    }

    #[test]
    fn constant_from_one_node() {
        // n = 0, μ = 1/2: data of f ≡ c is c·2√(1-t²)
        let c = 2.5;
        let mut sino = SinogramGrid::zeros(0.5, Scheme::HalfGauss(0)).unwrap();
        let t = sino.nodes[0];
        sino.data[0][0] = c * 2.0 * (1.0 - t * t).sqrt();
        let img = reconstruct(&sino).unwrap();
        assert_relative_eq!(img.eval(DiskPoint::new(0.0, 0.0).unwrap()).unwrap(), c, epsilon = 1e-14);
        assert_relative_eq!(naive_reference(&sino, DiskPoint::new(0.3, 0.1).unwrap()).unwrap(), c, epsilon = 1e-14);
    }

    #[test]
    fn single_entry_is_kernel_weight() {
        let mut sino = SinogramGrid::zeros(1.5, Scheme::FullCheb(2)).unwrap();
        sino.data[3][1] = 1.0;
        let p = DiskPoint::new(0.2, -0.6).unwrap();
        let table = DiskBasisTable::new(1.5, 4).unwrap();
        let w = scheme_weights(1.5, Scheme::FullCheb(2)).unwrap();
        let t = w[1] * table.eval_phi_n(4, sino.angles[3], sino.nodes[1], p).unwrap();
        assert_relative_eq!(naive_reference(&sino, p).unwrap(), t, epsilon = 1e-15);
        assert_relative_eq!(reconstruct(&sino).unwrap().eval(p).unwrap(), t, epsilon = 1e-13);
    }

    #[test]
    fn nested_round_trip() {
        let mut img = CoefficientImage::zeros(0.0, 3);
        for (i, c) in img.coeffs.iter_mut().enumerate() {
            *c = i as f64;
        }
        let nested = img.nested();
        assert_eq!(nested[2], vec![vec![3.0, 4.0], vec![5.0]]);
        assert_eq!(CoefficientImage::from_nested(0.0, &nested).unwrap(), img);
    }

    #[test]
    fn raster_geometry() {
        let spec = RasterSpec::new(2, 2);
        assert_eq!(spec.pixel_center(0, 0), (-0.5, 0.5));
        let g = RasterGrid::from_fn(RasterSpec::new(4, 4), |_, _| 3.0);
        assert!(g.mask[5] && !g.mask[0]);
        assert!(g.values[0].is_nan());
        assert_eq!(g.get(1, 1), 3.0);
    }

    #[test]
    fn lebesgue_single_term() {
        let (grid, max) = lebesgue_function(1.5, 0, RasterSpec::new(8, 8)).unwrap();
        assert_relative_eq!(max, 2.0, epsilon = 1e-14);
        assert!(grid.used().all(|i| (grid.values[i] - 2.0).abs() < 1e-14));
    }
}
