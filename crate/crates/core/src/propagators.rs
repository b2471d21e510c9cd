//! Time evolution: the oscillator group e^{−itH}, the heat semigroup e^{−tH}
//! (spectral and kernel forms) and the free Schrödinger group e^{itΔ}.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::hermite_functions;
use crate::quadrature::{gauss_hermite_shared, gauss_legendre, QuadratureGrid, WeightConvention, MAX_GAUSS_HERMITE_ORDER};
use crate::spectral::{Multiplier, Sampler, SpectralField};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// e^{−itH} f: multiplier e^{−itℓ}.
pub fn schrodinger_h(c: &SpectralField, t: f64) -> SpectralField {
    c.apply_multiplier(&Multiplier::Phase(t))
        .expect("phase multipliers are defined on every level")
}

/// e^{−tH} f for t ≥ 0.
pub fn heat_spectral(c: &SpectralField, t: f64) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("heat evolution needs t >= 0, got {t}")));
    }
    c.apply_multiplier(&Multiplier::Decay(t))
}

/// Closed forms of the heat kernel exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MehlerVariant {
    /// −½(|x|²+|y|²) coth 2t + x·y csch 2t
    Symmetric,
    /// −(½|x|²+|y|²) coth 2t + x·y csch 2t
    AsPrinted,
}

impl MehlerVariant {
    pub const ALL: [MehlerVariant; 2] = [MehlerVariant::Symmetric, MehlerVariant::AsPrinted];

    pub fn name(self) -> &'static str {
        match self {
            MehlerVariant::Symmetric => "symmetric",
            MehlerVariant::AsPrinted => "as-printed",
        }
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(())
}

/// Closed-form heat kernel K_t(x, y) of e^{−tH}.
pub fn mehler_kernel(t: f64, x: &[f64], y: &[f64], variant: MehlerVariant) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("the heat kernel needs t > 0, got {t}")));
    }
    check_dims(x, y)?;
    let n = x.len() as f64;
    let (s, c) = ((2.0 * t).sinh(), (2.0 * t).cosh());
    let coth = c / s;
    let csch = 1.0 / s;
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let yy: f64 = y.iter().map(|v| v * v).sum();
    let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let quad = match variant {
        MehlerVariant::Symmetric => -0.5 * (xx + yy) * coth,
        MehlerVariant::AsPrinted => -(0.5 * xx + yy) * coth,
    };
    Ok((2.0 * PI * s).powf(-0.5 * n) * (quad + xy * csch).exp())
}

/// Σ_{level(ν) ≤ L} e^{−t level(ν)} φ_ν(x)φ_ν(y).
pub fn mehler_spectral_sum(t: f64, x: &[f64], y: &[f64], cutoff: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("the heat kernel needs t > 0, got {t}")));
    }
    check_dims(x, y)?;
    let basis = crate::hermite::Basis::shared(x.len(), cutoff)?;
    let kmax = basis.max_axis_order();
    let products: Vec<Vec<f64>> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let (ha, hb) = (hermite_functions(a, kmax), hermite_functions(b, kmax));
            ha.iter().zip(&hb).map(|(u, v)| u * v).collect()
        })
        .collect();
    let mut total = 0.0;
    for (level, range) in basis.levels() {
        let level_sum: f64 = basis.indices()[range.clone()]
            .iter()
            .map(|nu| nu.entries().iter().zip(&products).map(|(&k, p)| p[k]).product::<f64>())
            .sum();
        total += (-t * *level as f64).exp() * level_sum;
    }
    Ok(total)
}

/// ∫ K_t(x, y) f(y) dy by quadrature over the nodes of `grid`, for samples
/// f(yᵢ) taken at those nodes.
pub fn heat_kernel_apply(
    samples: &[Complex64],
    grid: &QuadratureGrid,
    t: f64,
    points: &[Vec<f64>],
    variant: MehlerVariant,
) -> Result<Vec<Complex64>> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("the heat kernel needs t > 0, got {t}")));
    }
    if grid.convention() == WeightConvention::Raw {
        return Err(Error::invalid("kernel quadrature needs compensated or uniform weights"));
    }
    if samples.len() != grid.len() {
        return Err(Error::invalid(format!(
            "expected {} samples, got {}",
            grid.len(),
            samples.len()
        )));
    }
    points
        .par_iter()
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((y, &w), &f) in grid.points().zip(grid.weights()).zip(samples) {
                acc += f * (w * mehler_kernel(t, x, y, variant)?);
            }
            Ok(acc)
        })
        .collect()
}

/// Kernel route for a spectral field: samples f on a Gauss–Hermite grid whose
/// width matches the Gaussian decay of K_t(x, ·) f and applies the kernel.
pub fn heat_kernel_apply_field(
    c: &SpectralField,
    t: f64,
    points: &[Vec<f64>],
    variant: MehlerVariant,
) -> Result<Vec<Complex64>> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("the heat kernel needs t > 0, got {t}")));
    }
    let decay = 0.5 / (2.0 * t).tanh() + 0.5;
    let order = 2 * c.cutoff() + 40;
    let grid = Arc::new(QuadratureGrid::gauss_hermite_scaled(c.dimension(), order, decay.sqrt().recip())?);
    let sampler = Sampler::new(c.basis(), grid.clone())?;
    let samples = sampler.synthesize(c)?;
    heat_kernel_apply(&samples, &grid, t, points, variant)
}

/// Hermite–Fourier image of the Fourier transform: c_ν ↦ (−i)^{|ν|} c_ν.
pub fn fourier_transform(c: &SpectralField) -> SpectralField {
    let basis = c.basis();
    let mut out = c.clone();
    let powers = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    for (v, nu) in out.coefficients_mut().iter_mut().zip(basis.indices()) {
        *v *= powers[nu.order() % 4];
    }
    out
}

/// Spreading factor √(1+4t²) of the free evolution of Gaussian-scale data.
pub fn free_spreading(t: f64) -> f64 {
    (1.0 + 4.0 * t * t).sqrt()
}

/// Oscillatory-quadrature evaluation of e^{itΔ}.
///
/// Each axis is handled by one-dimensional transforms of the Hermite
/// functions, a_k(x) = e^{itΔ}ψ_k(x):
/// for |t| ≤ ½ directly from the Fourier side, and for larger |t| through
/// a_k(x) = (2it)^{−1/2} e^{ix²/4t} b_k(x/2t) with
/// b_k(ξ) = (2π)^{−1/2} ∫ e^{−iξy + iy²/4t} ψ_k(y) dy.
/// Both integrals use a Gauss–Hermite rule of width √2 whose order is doubled
/// until two successive orders agree within `tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreePropagator {
    pub horizon: f64,
    pub tolerance: f64,
}

impl Default for FreePropagator {
    fn default() -> Self {
        FreePropagator {
            horizon: default_free_horizon(),
            tolerance: 1e-6,
        }
    }
}

/// tan(0.98·π/2)/2.
pub fn default_free_horizon() -> f64 {
    (0.98 * PI / 2.0).tan() / 2.0
}

/// Per-axis values a_k(x) for k ≤ kmax, plus the quadrature order accepted.
#[derive(Clone, Debug)]
pub struct AxisTable {
    pub values: Vec<Vec<Complex64>>,
    pub order: usize,
    pub discrepancy: f64,
}

impl FreePropagator {
    /// e^{itΔ}f at arbitrary points.
    pub fn apply(&self, c: &SpectralField, t: f64, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        let n = c.dimension();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let args: Vec<f64> = points.iter().flatten().copied().collect();
        let table = self.axis_table(&args, c.basis().max_axis_order(), t, c.cutoff())?;
        Ok(combine(c, points.len(), |i, axis, k| table.values[i * n + axis][k]))
    }

    /// e^{itΔ}f at the points of a tensor grid.
    pub fn apply_on_grid(&self, c: &SpectralField, t: f64, grid: &QuadratureGrid) -> Result<Vec<Complex64>> {
        let n = c.dimension();
        if grid.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: grid.dimension(),
            });
        }
        let table = self.axis_table(grid.axis_nodes(), c.basis().max_axis_order(), t, c.cutoff())?;
        let mut digits = vec![0usize; n];
        let digit_table: Vec<usize> = (0..grid.len())
            .flat_map(|i| {
                grid.axis_digits(i, &mut digits);
                digits.clone()
            })
            .collect();
        Ok(combine(c, grid.len(), |i, axis, k| {
            table.values[digit_table[i * n + axis]][k]
        }))
    }

    /// a_k(x) for every x in `args` and k ≤ kmax.
    pub fn axis_table(&self, args: &[f64], kmax: usize, t: f64, cutoff: usize) -> Result<AxisTable> {
        if !t.is_finite() || t.abs() > self.horizon {
            return Err(Error::Resolution(format!(
                "free evolution time {t} exceeds the certified horizon {}",
                self.horizon
            )));
        }
        if t == 0.0 {
            let values = args.iter().map(|&x| {
                hermite_functions(x, kmax).into_iter().map(|v| Complex64::new(v, 0.0)).collect()
            });
            return Ok(AxisTable {
                values: values.collect(),
                order: 0,
                discrepancy: 0.0,
            });
        }
        let direct = t.abs() <= 0.5;
        let (freq_sign, chirp) = if direct { (1.0, -t) } else { (-1.0, 0.25 / t) };
        let transformed: Vec<f64> = if direct {
            args.to_vec()
        } else {
            args.iter().map(|x| x / (2.0 * t)).collect()
        };
        let radius = (2.0 * cutoff as f64).sqrt() + 4.0;
        let reach = transformed.iter().fold(radius, |a, x| a.max(x.abs()));
        let start = (cutoff + 12).max((8.0 * (1.0 + chirp.abs()) * reach).ceil() as usize);
        let mut order = start.min(MAX_GAUSS_HERMITE_ORDER / 2);
        let mut coarse = chirp_transform(&transformed, kmax, freq_sign, chirp, order)?;
        loop {
            let fine = chirp_transform(&transformed, kmax, freq_sign, chirp, 2 * order)?;
            let discrepancy = coarse
                .iter()
                .flatten()
                .zip(fine.iter().flatten())
                .fold(0.0f64, |a, (u, v)| a.max((u - v).norm()));
            if discrepancy <= self.tolerance {
                let values = if direct {
                    fine.into_iter()
                        .map(|row| row.into_iter().enumerate().map(|(k, v)| v * minus_i_pow(k)).collect())
                        .collect()
                } else {
                    let pre = (Complex64::new(0.0, 2.0 * t)).sqrt().inv();
                    fine.into_iter()
                        .zip(args)
                        .map(|(row, &x)| {
                            let phase = pre * Complex64::from_polar(1.0, x * x / (4.0 * t));
                            row.into_iter().map(|v| v * phase).collect()
                        })
                        .collect()
                };
                return Ok(AxisTable {
                    values,
                    order: 2 * order,
                    discrepancy,
                });
            }
            if 4 * order > MAX_GAUSS_HERMITE_ORDER {
                return Err(Error::Resolution(format!(
                    "free evolution at t = {t}: orders {order} and {} still differ by {discrepancy:.3e}",
                    2 * order
                )));
            }
            order *= 2;
            coarse = fine;
        }
    }
}

/// e^{itΔ}f at arbitrary points with the default propagator settings.
pub fn free_schrodinger(c: &SpectralField, t: f64, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    FreePropagator::default().apply(c, t, points)
}

fn minus_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// (2π)^{−1/2} ∫ e^{i(s·a·y + χy²)} ψ_k(y) dy for each a, k ≤ kmax.
fn chirp_transform(args: &[f64], kmax: usize, freq_sign: f64, chirp: f64, order: usize) -> Result<Vec<Vec<Complex64>>> {
    let rule = gauss_hermite_shared(order)?;
    let sigma = std::f64::consts::SQRT_2;
    let nodes: Vec<(f64, f64, Vec<f64>)> = rule
        .nodes
        .iter()
        .zip(&rule.compensated)
        .map(|(&u, &w)| {
            let y = sigma * u;
            (y, sigma * w * INV_SQRT_2PI, hermite_functions(y, kmax))
        })
        .filter(|(_, _, psi)| psi.iter().any(|v| *v != 0.0))
        .collect();
    Ok(args
        .par_iter()
        .map(|&a| {
            let mut row = vec![Complex64::new(0.0, 0.0); kmax + 1];
            for (y, w, psi) in &nodes {
                let phase = Complex64::from_polar(*w, freq_sign * a * y + chirp * y * y);
                for (r, &p) in row.iter_mut().zip(psi) {
                    *r += phase * p;
                }
            }
            row
        })
        .collect())
}

fn combine(
    c: &SpectralField,
    points: usize,
    table: impl Fn(usize, usize, usize) -> Complex64 + Sync,
) -> Vec<Complex64> {
    let basis = c.basis();
    let coeffs = c.coefficients();
    (0..points)
        .into_par_iter()
        .map(|i| {
            basis
                .indices()
                .iter()
                .zip(coeffs)
                .filter(|(_, cv)| cv.norm_sqr() != 0.0)
                .map(|(nu, &cv)| {
                    nu.entries()
                        .iter()
                        .enumerate()
                        .fold(cv, |acc, (axis, &k)| acc * table(i, axis, k))
                })
                .sum()
        })
        .collect()
}

/// Time nodes and weights on [0, T].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    horizon: f64,
    kind: TimeGridKind,
}

/// How the nodes of a [`TimeGrid`] were laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeGridKind {
    /// Equispaced trapezoid on a full period [0, T).
    Periodic,
    GaussLegendre,
    /// Explicit instants; not an integration rule.
    Instants,
}

impl TimeGrid {
    /// Trapezoid rule with `count` equispaced nodes on the period [0, T).
    pub fn periodic(horizon: f64, count: usize) -> Result<Self> {
        if count == 0 || !(horizon > 0.0) {
            return Err(Error::invalid("periodic time grid needs T > 0 and at least one node"));
        }
        let h = horizon / count as f64;
        Ok(TimeGrid {
            nodes: (0..count).map(|j| h * j as f64).collect(),
            weights: vec![h; count],
            horizon,
            kind: TimeGridKind::Periodic,
        })
    }

    /// Gauss–Legendre rule on [0, T].
    pub fn gauss_legendre(horizon: f64, count: usize) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::invalid("time horizon must be positive"));
        }
        let (nodes, weights) = gauss_legendre(count, 0.0, horizon)?;
        Ok(TimeGrid {
            nodes,
            weights,
            horizon,
            kind: TimeGridKind::GaussLegendre,
        })
    }

    /// Explicit instants with unit weights (no integration intended).
    pub fn instants(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("time list must be non-empty and finite"));
        }
        let horizon = nodes.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        Ok(TimeGrid {
            weights: vec![1.0; nodes.len()],
            nodes,
            horizon,
            kind: TimeGridKind::Instants,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn kind(&self) -> TimeGridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Which equation generated a [`SpaceTimeField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evolution {
    Oscillator,
    Heat,
    Free,
}

/// u(t_j, x_i) on a time grid × spatial grid, stored time-major.
#[derive(Clone, Debug)]
pub struct SpaceTimeField {
    initial: SpectralField,
    evolution: Evolution,
    times: TimeGrid,
    space: Arc<QuadratureGrid>,
    values: Vec<Complex64>,
}

/// JSON export layout of a [`SpaceTimeField`].
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct SpaceTimeExport {
    pub time_nodes: Vec<f64>,
    pub space_points: Vec<Vec<f64>>,
    pub values: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn evolve(
        initial: &SpectralField,
        evolution: Evolution,
        times: TimeGrid,
        space: Arc<QuadratureGrid>,
    ) -> Result<Self> {
        let values = match evolution {
            Evolution::Oscillator | Evolution::Heat => {
                if evolution == Evolution::Heat {
                    if let Some(t) = times.nodes().iter().find(|t| !(**t >= 0.0)) {
                        return Err(Error::invalid(format!("heat evolution needs t >= 0, got {t}")));
                    }
                }
                let sampler = Sampler::new(initial.basis(), space.clone())?;
                let levels = sampler.level_values(initial)?;
                let mut values = Vec::with_capacity(times.len() * space.len());
                for &t in times.nodes() {
                    let factors: Vec<Complex64> = levels
                        .levels()
                        .iter()
                        .map(|&l| match evolution {
                            Evolution::Heat => Complex64::new((-t * l as f64).exp(), 0.0),
                            _ => Complex64::from_polar(1.0, -t * l as f64),
                        })
                        .collect();
                    values.extend((0..space.len()).map(|i| {
                        levels
                            .at_point(i)
                            .zip(&factors)
                            .map(|((_, v), f)| v * f)
                            .sum::<Complex64>()
                    }));
                }
                values
            }
            Evolution::Free => {
                let prop = FreePropagator::default();
                let mut values = Vec::with_capacity(times.len() * space.len());
                for &t in times.nodes() {
                    values.extend(prop.apply_on_grid(initial, t, &space)?);
                }
                values
            }
        };
        Ok(SpaceTimeField {
            initial: initial.clone(),
            evolution,
            times,
            space,
            values,
        })
    }

    pub fn initial(&self) -> &SpectralField {
        &self.initial
    }

    pub fn evolution(&self) -> Evolution {
        self.evolution
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn space(&self) -> &Arc<QuadratureGrid> {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// u(t_j, ·) on the spatial grid.
    pub fn slice(&self, j: usize) -> &[Complex64] {
        let m = self.space.len();
        &self.values[j * m..(j + 1) * m]
    }

    pub fn export(&self) -> SpaceTimeExport {
        SpaceTimeExport {
            time_nodes: self.times.nodes().to_vec(),
            space_points: self.space.points().map(|p| p.to_vec()).collect(),
            values: self.values.clone(),
        }
    }
}
