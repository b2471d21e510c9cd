//! Gauss–Hermite and Gauss–Legendre rules and their tensor-product grids.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::hermite::scaled_pair;

/// Largest Gauss–Hermite order this crate will build.
pub const MAX_GAUSS_HERMITE_ORDER: usize = 2048;


/// One-dimensional Gauss–Hermite rule for the weight e^{-x²}.
///
/// `weights` are the classical weights; `compensated` holds wᵢ e^{xᵢ²}, the
/// weights that integrate plain functions `g` with ∫ g ≈ Σ cᵢ g(xᵢ). The
/// compensated weights are computed directly, never as a product with e^{xᵢ²}.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub compensated: Vec<f64>,
}

impl QuadratureRule1D {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Gauss–Hermite rule of order `m`.
///
/// Roots are bracketed as eigenvalues of the Jacobi matrix (Sturm-sequence
/// bisection) and polished by Newton iteration on the normalized recurrence.
pub fn gauss_hermite(m: usize) -> Result<QuadratureRule1D> {
    if m == 0 {
        return Err(Error::invalid("Gauss-Hermite order must be >= 1"));
    }
    if m > MAX_GAUSS_HERMITE_ORDER {
        return Err(Error::Resolution(format!(
            "Gauss-Hermite order {m} exceeds the cap {MAX_GAUSS_HERMITE_ORDER}"
        )));
    }
    let half = m / 2;
    // positive roots in decreasing order
    let mut roots: Vec<f64> = Vec::with_capacity(half);
    let mut comp: Vec<f64> = Vec::with_capacity(half);
    for i in 0..half {
        let guess = jacobi_eigenvalue(m, m - 1 - i);
        let (root, w) = polish_root(m, guess)?;
        roots.push(root);
        comp.push(w);
    }
    let mut nodes = Vec::with_capacity(m);
    let mut compensated = Vec::with_capacity(m);
    for i in 0..half {
        nodes.push(-roots[i]);
        compensated.push(comp[i]);
    }
    if m % 2 == 1 {
        let (_, w) = polish_root(m, 0.0)?;
        nodes.push(0.0);
        compensated.push(w);
    }
    for i in (0..half).rev() {
        nodes.push(roots[i]);
        compensated.push(comp[i]);
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Resolution(format!(
            "Gauss-Hermite root iteration for order {m} did not separate the roots"
        )));
    }
    let weights = nodes
        .iter()
        .zip(&compensated)
        .map(|(x, c)| c * (-x * x).exp())
        .collect();
    Ok(QuadratureRule1D {
        nodes,
        weights,
        compensated,
    })
}

/// Memoized [`gauss_hermite`]; rules are immutable once built.
pub fn gauss_hermite_shared(m: usize) -> Result<Arc<QuadratureRule1D>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule1D>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&m) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_hermite(m)?);
    cache
        .lock()
        .expect("rule cache poisoned")
        .insert(m, rule.clone());
    Ok(rule)
}

/// `j`-th smallest eigenvalue of the symmetric tridiagonal Jacobi matrix of
/// the Hermite weight (zero diagonal, off-diagonal √(k/2)).
fn jacobi_eigenvalue(m: usize, j: usize) -> f64 {
    let below = |x: f64| {
        let mut count = 0;
        let mut q = -x;
        if q < 0.0 {
            count += 1;
        }
        for k in 1..m {
            let denom = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            q = -x - (k as f64 / 2.0) / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound = (2.0 * m as f64).sqrt() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * mid.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Newton iteration for a root of ψ_m; returns the root and its compensated
/// weight 1/(m ψ_{m−1}(x)²).
fn polish_root(m: usize, start: f64) -> Result<(f64, f64)> {
    let two_m = (2 * m) as f64;
    let mut z = start;
    for _ in 0..50 {
        let (prev, cur, _) = scaled_pair(m, z);
        // roots of ψ_m are those of the orthonormal polynomial p_m,
        // whose derivative is √(2m) p_{m−1}
        let dz = cur / (two_m.sqrt() * prev);
        z -= dz;
        if dz.abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0) {
            let (prev, _, scale) = scaled_pair(m, z);
            let log_psi = prev.abs().ln() + scale;
            let w = (-2.0 * log_psi).exp() / m as f64;
            return Ok((z, w));
        }
    }
    Err(Error::Resolution(format!(
        "Gauss-Hermite Newton iteration for order {m} did not converge near {start}"
    )))
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::invalid("Gauss-Legendre order must be >= 1"));
    }
    if !(b > a) {
        return Err(Error::invalid(format!("empty interval [{a}, {b}]")));
    }
    let mid = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..m {
                let jf = j as f64;
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * jf + 1.0) * z * p1 - jf * p2) / (jf + 1.0);
            }
            deriv = mf * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / deriv;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        nodes[i] = mid - half_len * z;
        nodes[m - 1 - i] = mid + half_len * z;
        weights[i] = half_len * w;
        weights[m - 1 - i] = half_len * w;
    }
    Ok((nodes, weights))
}

/// How the weights of a [`QuadratureGrid`] are meant to be used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightConvention {
    /// Weights for ∫ g(x) e^{-|x|²} dx.
    Raw,
    /// Weights for ∫ g(x) dx (Gauss–Hermite weights times e^{|x|²}).
    Compensated,
    /// Trapezoid weights on a uniform box; used for sup-norm sampling.
    Uniform,
}

/// Tensor product of a one-dimensional rule over n axes.
///
/// Points are stored row-major with the last axis varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    dimension: usize,
    axis_nodes: Vec<f64>,
    axis_weights: Vec<f64>,
    points: Vec<f64>,
    weights: Vec<f64>,
    convention: WeightConvention,
}

impl QuadratureGrid {
    /// Gauss–Hermite grid with `order` nodes per axis.
    pub fn gauss_hermite(dimension: usize, order: usize, convention: WeightConvention) -> Result<Self> {
        let rule = gauss_hermite_shared(order)?;
        let weights = match convention {
            WeightConvention::Raw => rule.weights.clone(),
            WeightConvention::Compensated => rule.compensated.clone(),
            WeightConvention::Uniform => {
                return Err(Error::invalid("uniform convention needs QuadratureGrid::uniform"))
            }
        };
        Self::tensor(dimension, rule.nodes.clone(), weights, convention)
    }

    /// Compensated Gauss–Hermite grid with nodes σxᵢ and weights σcᵢ, exact for
    /// polynomial × e^{-|x|²/σ²} integrands.
    pub fn gauss_hermite_scaled(dimension: usize, order: usize, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::invalid("grid scale must be positive"));
        }
        let rule = gauss_hermite_shared(order)?;
        let nodes = rule.nodes.iter().map(|x| scale * x).collect();
        let weights = rule.compensated.iter().map(|w| scale * w).collect();
        Self::tensor(dimension, nodes, weights, WeightConvention::Compensated)
    }

    /// Uniform grid of `per_axis` points on [−radius, radius] per axis with
    /// trapezoid weights.
    pub fn uniform(dimension: usize, radius: f64, per_axis: usize) -> Result<Self> {
        if per_axis < 2 || !(radius > 0.0) {
            return Err(Error::invalid("uniform grid needs >= 2 points and a positive radius"));
        }
        let h = 2.0 * radius / (per_axis - 1) as f64;
        let nodes: Vec<f64> = (0..per_axis).map(|i| -radius + h * i as f64).collect();
        let mut weights = vec![h; per_axis];
        weights[0] *= 0.5;
        weights[per_axis - 1] *= 0.5;
        Self::tensor(dimension, nodes, weights, WeightConvention::Uniform)
    }

    fn tensor(
        dimension: usize,
        axis_nodes: Vec<f64>,
        axis_weights: Vec<f64>,
        convention: WeightConvention,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        let m = axis_nodes.len();
        let total = m
            .checked_pow(dimension as u32)
            .filter(|&t| t <= 50_000_000)
            .ok_or_else(|| Error::Resolution(format!("tensor grid {m}^{dimension} is too large")))?;
        let mut points = Vec::with_capacity(total * dimension);
        let mut weights = Vec::with_capacity(total);
        let mut digits = vec![0usize; dimension];
        for _ in 0..total {
            let mut w = 1.0;
            for &d in &digits {
                points.push(axis_nodes[d]);
                w *= axis_weights[d];
            }
            weights.push(w);
            for axis in (0..dimension).rev() {
                digits[axis] += 1;
                if digits[axis] < m {
                    break;
                }
                digits[axis] = 0;
            }
        }
        Ok(QuadratureGrid {
            dimension,
            axis_nodes,
            axis_weights,
            points,
            weights,
            convention,
        })
    }

    /// Same grid with every point multiplied by `factor` and weights rescaled
    /// by factorⁿ (for compensated or uniform weights).
    pub fn dilated(&self, factor: f64) -> Result<Self> {
        if self.convention == WeightConvention::Raw {
            return Err(Error::invalid("raw Gauss-Hermite weights cannot be dilated"));
        }
        Self::tensor(
            self.dimension,
            self.axis_nodes.iter().map(|x| x * factor).collect(),
            self.axis_weights.iter().map(|w| w * factor).collect(),
            self.convention,
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn convention(&self) -> WeightConvention {
        self.convention
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dimension)
    }

    pub fn flat_points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn axis_nodes(&self) -> &[f64] {
        &self.axis_nodes
    }

    pub fn axis_weights(&self) -> &[f64] {
        &self.axis_weights
    }

    /// Per-axis node indices of point `i`.
    pub fn axis_digits(&self, mut i: usize, out: &mut [usize]) {
        let m = self.axis_nodes.len();
        for axis in (0..self.dimension).rev() {
            out[axis] = i % m;
            i /= m;
        }
    }

    /// Σ wᵢ g(xᵢ).
    pub fn integrate(&self, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
        self.points().zip(&self.weights).map(|(x, w)| w * g(x)).sum()
    }

    pub fn max_abs_node(&self) -> f64 {
        self.axis_nodes.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    /// ∫ x^k e^{-x²} dx = Γ((k+1)/2) for even k, 0 for odd k.
    fn moment(k: usize) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        // Γ(j + 1/2) = (2j)! √π / (4^j j!)
        let j = k / 2;
        let mut g = SQRT_PI;
        for i in 0..j {
            g *= i as f64 + 0.5;
        }
        g
    }

    #[test]
    fn order_one_and_two() {
        let r = gauss_hermite(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - SQRT_PI).abs() < 1e-14);
        let r = gauss_hermite(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - SQRT_PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_and_symmetry() {
        for m in [1, 2, 3, 5, 8, 13, 32, 60, 100, 257, 512, 1000, MAX_GAUSS_HERMITE_ORDER] {
            let r = gauss_hermite(m).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum / SQRT_PI - 1.0).abs() < 1e-12, "m={m} sum={sum}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            for i in 0..m {
                assert!((r.nodes[i] + r.nodes[m - 1 - i]).abs() < 1e-12 * r.nodes[i].abs().max(1.0));
                assert!(r.weights[i] >= 0.0 && r.compensated[i] > 0.0);
            }
        }
    }

    #[test]
    fn moments_are_exact() {
        for m in [3, 6, 10, 20] {
            let r = gauss_hermite(m).unwrap();
            for k in 0..2 * m {
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = moment(k);
                let scale = moment(2 * (k / 2) + 2 * (k % 2)).max(1.0);
                assert!((q - exact).abs() < 1e-12 * scale, "m={m} k={k} {q} vs {exact}");
            }
        }
    }

    #[test]
    fn order_cap() {
        assert!(matches!(gauss_hermite(0), Err(Error::InvalidInput(_))));
        assert!(matches!(
            gauss_hermite(MAX_GAUSS_HERMITE_ORDER + 1),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7, 0.0, 2.0).unwrap();
        for k in 0..14 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = 2f64.powi(k + 1) / (k + 1) as f64;
            assert!((q - exact).abs() < 1e-12 * exact);
        }
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn compensated_grid_integrates_gaussians() {
        // ∫_{ℝ²} (1 + x² y⁴) e^{-|x|²} = π + (1/2)(3/4)π
        let grid = QuadratureGrid::gauss_hermite(2, 6, WeightConvention::Compensated).unwrap();
        assert_eq!(grid.len(), 36);
        let q = grid.integrate(|p| (1.0 + p[0] * p[0] * p[1].powi(4)) * (-(p[0] * p[0] + p[1] * p[1])).exp());
        let exact = PI * (1.0 + 0.375);
        assert!((q - exact).abs() < 1e-12);
        let mut digits = [0; 2];
        grid.axis_digits(7, &mut digits);
        assert_eq!(digits, [1, 1]);
        assert_eq!(grid.point(7), &[grid.axis_nodes()[1], grid.axis_nodes()[1]]);
    }

    #[test]
    fn scaled_and_dilated_grids() {
        // ∫ e^{-x²/2} = √(2π)
        let g = QuadratureGrid::gauss_hermite_scaled(1, 4, 2f64.sqrt()).unwrap();
        let q = g.integrate(|p| (-0.5 * p[0] * p[0]).exp());
        assert!((q - (2.0 * PI).sqrt()).abs() < 1e-13);
        let d = QuadratureGrid::gauss_hermite(1, 4, WeightConvention::Compensated)
            .unwrap()
            .dilated(2f64.sqrt())
            .unwrap();
        assert!((d.integrate(|p| (-0.5 * p[0] * p[0]).exp()) - q).abs() < 1e-14);
    }

    #[test]
    fn uniform_grid_weights() {
        let g = QuadratureGrid::uniform(2, 1.0, 11).unwrap();
        let area: f64 = g.weights().iter().sum();
        assert!((area - 4.0).abs() < 1e-13);
        assert_eq!(g.convention(), WeightConvention::Uniform);
    }
}
