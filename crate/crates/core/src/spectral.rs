//! Hermite–Fourier analysis and synthesis, eigenspace projections and
//! spectral multipliers m(H) acting level by level.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{hermite_functions, Basis, MultiIndex};
use crate::quadrature::{QuadratureGrid, WeightConvention};

/// Coefficients f̂(φ_ν) over all ν with level ≤ cutoff, in the layout of
/// [`Basis`] (level-major, lexicographic within a level).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField")]
pub struct SpectralField {
    dimension: usize,
    cutoff: usize,
    coefficients: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawField {
    dimension: usize,
    cutoff: usize,
    coefficients: Vec<Complex64>,
}

impl TryFrom<RawField> for SpectralField {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        SpectralField::from_coefficients(raw.dimension, raw.cutoff, raw.coefficients)
    }
}

impl SpectralField {
    pub fn zeros(dimension: usize, cutoff: usize) -> Result<Self> {
        let len = Basis::shared(dimension, cutoff)?.len();
        Ok(SpectralField {
            dimension,
            cutoff,
            coefficients: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    pub fn from_coefficients(dimension: usize, cutoff: usize, coefficients: Vec<Complex64>) -> Result<Self> {
        let len = Basis::shared(dimension, cutoff)?.len();
        if coefficients.len() != len {
            return Err(Error::invalid(format!(
                "cutoff {cutoff} in dimension {dimension} needs {len} coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(SpectralField {
            dimension,
            cutoff,
            coefficients,
        })
    }

    /// Real coefficients.
    pub fn from_real(dimension: usize, cutoff: usize, coefficients: &[f64]) -> Result<Self> {
        Self::from_coefficients(
            dimension,
            cutoff,
            coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    /// The single eigenfunction φ_ν.
    pub fn unit(dimension: usize, cutoff: usize, nu: &MultiIndex) -> Result<Self> {
        let basis = Basis::shared(dimension, cutoff)?;
        let pos = basis.position(nu).ok_or_else(|| {
            Error::invalid(format!("{nu:?} is not in the basis of cutoff {cutoff}, dimension {dimension}"))
        })?;
        let mut field = Self::zeros(dimension, cutoff)?;
        field.coefficients[pos] = Complex64::new(1.0, 0.0);
        Ok(field)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn basis(&self) -> Arc<Basis> {
        Basis::shared(self.dimension, self.cutoff).expect("field invariants guarantee a valid basis")
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn coefficient(&self, nu: &MultiIndex) -> Option<Complex64> {
        self.basis().position(nu).map(|i| self.coefficients[i])
    }

    /// ‖f‖_{L²} by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.coefficients.iter().all(|c| c.im == 0.0)
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        self.map_coefficients(|_, c| alpha * c)
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize the zero field"));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.map_coefficients(|i, c| c + other.coefficients[i]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.map_coefficients(|i, c| c - other.coefficients[i]))
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        if self.cutoff != other.cutoff {
            return Err(Error::invalid(format!(
                "cutoff mismatch: {} vs {}",
                self.cutoff, other.cutoff
            )));
        }
        Ok(())
    }

    /// Same function expressed with another cutoff; coefficients above the new
    /// cutoff are dropped (the layout of a smaller cutoff is a prefix).
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        let len = Basis::shared(self.dimension, cutoff)?.len();
        let mut coefficients = vec![Complex64::new(0.0, 0.0); len];
        let keep = len.min(self.coefficients.len());
        coefficients[..keep].copy_from_slice(&self.coefficients[..keep]);
        Ok(SpectralField {
            dimension: self.dimension,
            cutoff,
            coefficients,
        })
    }

    /// Coefficients of the eigenspace of level ℓ (empty for non-spectral ℓ).
    pub fn level_slice(&self, level: usize) -> &[Complex64] {
        match self.basis().levels().iter().find(|(l, _)| *l == level) {
            Some((_, range)) => &self.coefficients[range.clone()],
            None => &[],
        }
    }

    /// P_ℓ f.
    pub fn project_level(&self, level: usize) -> Self {
        let basis = self.basis();
        self.map_coefficients(|i, c| {
            if basis.level_of(i) == level {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// m(H) f: the coefficient at ν is multiplied by m(level(ν)).
    pub fn apply_multiplier(&self, m: &Multiplier) -> Result<Self> {
        let basis = self.basis();
        let mut out = self.clone();
        for (level, range) in basis.levels() {
            let factor = m.value(*level).ok_or_else(|| {
                Error::invalid(format!("multiplier is not defined at level {level}"))
            })?;
            for c in &mut out.coefficients[range.clone()] {
                *c *= factor;
            }
        }
        Ok(out)
    }

    /// H^s f; negative powers are allowed since the spectrum is ≥ n.
    pub fn apply_h_power(&self, s: f64) -> Self {
        self.apply_multiplier(&Multiplier::Power(s))
            .expect("power multipliers are defined on every level")
    }

    fn map_coefficients(&self, mut g: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        SpectralField {
            dimension: self.dimension,
            cutoff: self.cutoff,
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, &c)| g(i, c))
                .collect(),
        }
    }
}

/// A function of the spectral value ℓ, applied as m(H).
#[derive(Clone, Debug, PartialEq)]
pub enum Multiplier {
    Constant(Complex64),
    /// ℓ^s
    Power(f64),
    /// e^{−itℓ}
    Phase(f64),
    /// e^{−tℓ}
    Decay(f64),
    /// 1_{[0, ℓ']}(ℓ): the partial-sum operator S_ℓ'.
    Indicator { upper: f64 },
    /// 1_{[a, a+1)}(ℓ)
    UnitWindow { start: f64 },
    /// Values at the levels first, first+2, …
    Tabulated { first_level: usize, values: Vec<Complex64> },
    Product(Box<Multiplier>, Box<Multiplier>),
}

impl Multiplier {
    pub fn value(&self, level: usize) -> Option<Complex64> {
        let l = level as f64;
        let real = |v: f64| Some(Complex64::new(v, 0.0));
        match self {
            Multiplier::Constant(c) => Some(*c),
            Multiplier::Power(s) => real(l.powf(*s)),
            Multiplier::Phase(t) => Some(Complex64::from_polar(1.0, -t * l)),
            Multiplier::Decay(t) => real((-t * l).exp()),
            Multiplier::Indicator { upper } => real(if l <= *upper { 1.0 } else { 0.0 }),
            Multiplier::UnitWindow { start } => real(if l >= *start && l < start + 1.0 { 1.0 } else { 0.0 }),
            Multiplier::Tabulated { first_level, values } => {
                if level < *first_level || !(level - first_level).is_multiple_of(2) {
                    return None;
                }
                values.get((level - first_level) / 2).copied()
            }
            Multiplier::Product(a, b) => Some(a.value(level)? * b.value(level)?),
        }
    }

    /// max |m(ℓ)| over the levels of the truncated space.
    pub fn sup_norm(&self, dimension: usize, cutoff: usize) -> Result<f64> {
        crate::hermite::spectral_levels(cutoff, dimension)
            .map(|l| {
                self.value(l)
                    .map(|v| v.norm())
                    .ok_or_else(|| Error::invalid(format!("multiplier is not defined at level {l}")))
            })
            .try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
    }

    /// Level attaining the sup norm (smallest such level).
    pub fn argmax_level(&self, dimension: usize, cutoff: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for l in crate::hermite::spectral_levels(cutoff, dimension) {
            let v = self.value(l)?.norm();
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((l, v));
            }
        }
        best.map(|(l, _)| l)
    }

    /// Tabulate m₁·m₂ on the levels of the truncated space.
    pub fn compose(&self, other: &Multiplier, dimension: usize, cutoff: usize) -> Result<Multiplier> {
        let values = crate::hermite::spectral_levels(cutoff, dimension)
            .map(|l| match (self.value(l), other.value(l)) {
                (Some(a), Some(b)) => Ok(a * b),
                _ => Err(Error::invalid(format!("multiplier is not defined at level {l}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Multiplier::Tabulated {
            first_level: dimension,
            values,
        })
    }
}

/// Per-level values P_ℓ f(xᵢ) on the points of a grid.
#[derive(Clone, Debug)]
pub struct LevelSamples {
    levels: Vec<usize>,
    points: usize,
    values: Vec<Complex64>,
}

impl LevelSamples {
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    /// Values of P_ℓ f for the `j`-th level.
    pub fn level(&self, j: usize) -> &[Complex64] {
        &self.values[j * self.points..(j + 1) * self.points]
    }

    /// P_ℓ f(xᵢ) for all levels at one point.
    pub fn at_point(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .map(move |(j, &l)| (l, self.values[j * self.points + i]))
    }

    /// Σ_ℓ P_ℓ f(xᵢ).
    pub fn total(&self) -> Vec<Complex64> {
        (0..self.points)
            .map(|i| self.at_point(i).map(|(_, v)| v).sum())
            .collect()
    }
}

/// The basis functions φ_ν tabulated on the points of a grid.
#[derive(Debug)]
pub struct Sampler {
    basis: Arc<Basis>,
    grid: Arc<QuadratureGrid>,
    // row-major: point × basis index
    table: Vec<f64>,
}

impl Sampler {
    pub fn new(basis: Arc<Basis>, grid: Arc<QuadratureGrid>) -> Result<Self> {
        if basis.dimension() != grid.dimension() {
            return Err(Error::DimensionMismatch {
                expected: basis.dimension(),
                found: grid.dimension(),
            });
        }
        let n = basis.dimension();
        let kmax = basis.max_axis_order();
        let axis_table: Vec<Vec<f64>> = grid
            .axis_nodes()
            .iter()
            .map(|&x| hermite_functions(x, kmax))
            .collect();
        let k = basis.len();
        let mut table = vec![0.0; grid.len() * k];
        let mut digits = vec![0usize; n];
        for (i, row) in table.chunks_exact_mut(k).enumerate() {
            grid.axis_digits(i, &mut digits);
            for (slot, nu) in row.iter_mut().zip(basis.indices()) {
                *slot = nu
                    .entries()
                    .iter()
                    .zip(&digits)
                    .map(|(&order, &d)| axis_table[d][order])
                    .product();
            }
        }
        Ok(Sampler { basis, grid, table })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    fn row(&self, i: usize) -> &[f64] {
        let k = self.basis.len();
        &self.table[i * k..(i + 1) * k]
    }

    fn check_field(&self, c: &SpectralField) -> Result<()> {
        if c.dimension() != self.basis.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dimension(),
                found: c.dimension(),
            });
        }
        if c.cutoff() > self.basis.cutoff() {
            return Err(Error::invalid(format!(
                "field cutoff {} exceeds the sampler cutoff {}",
                c.cutoff(),
                self.basis.cutoff()
            )));
        }
        Ok(())
    }

    /// Σ_ν c_ν φ_ν(xᵢ) at every grid point.
    pub fn synthesize(&self, c: &SpectralField) -> Result<Vec<Complex64>> {
        self.check_field(c)?;
        let coeffs = c.coefficients();
        Ok((0..self.grid.len())
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(coeffs)
                    .map(|(&phi, &cv)| cv * phi)
                    .sum()
            })
            .collect())
    }

    /// P_ℓ f(xᵢ) for every level ℓ ≤ c.cutoff().
    pub fn level_values(&self, c: &SpectralField) -> Result<LevelSamples> {
        self.check_field(c)?;
        let coeffs = c.coefficients();
        let ranges: Vec<_> = self
            .basis
            .levels()
            .iter()
            .filter(|(l, _)| *l <= c.cutoff())
            .cloned()
            .collect();
        let points = self.grid.len();
        let mut values = vec![Complex64::new(0.0, 0.0); ranges.len() * points];
        for i in 0..points {
            let row = self.row(i);
            for (j, (_, range)) in ranges.iter().enumerate() {
                values[j * points + i] = row[range.clone()]
                    .iter()
                    .zip(&coeffs[range.clone()])
                    .map(|(&phi, &cv)| cv * phi)
                    .sum();
            }
        }
        Ok(LevelSamples {
            levels: ranges.into_iter().map(|(l, _)| l).collect(),
            points,
            values,
        })
    }

    /// Quadrature Hermite–Fourier coefficients of samples taken at the grid
    /// points; the grid weights must integrate plain functions.
    pub fn analyze_samples(&self, samples: &[Complex64]) -> Result<SpectralField> {
        if self.grid.convention() == WeightConvention::Raw {
            return Err(Error::invalid("analysis needs compensated or uniform weights"));
        }
        if samples.len() != self.grid.len() {
            return Err(Error::invalid(format!(
                "expected {} samples, got {}",
                self.grid.len(),
                samples.len()
            )));
        }
        let k = self.basis.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        for (i, (&f, &w)) in samples.iter().zip(self.grid.weights()).enumerate() {
            let wf = f * w;
            for (c, &phi) in coeffs.iter_mut().zip(self.row(i)) {
                *c += wf * phi;
            }
        }
        SpectralField::from_coefficients(self.basis.dimension(), self.basis.cutoff(), coeffs)
    }
}

/// c_ν ≈ ∫ f φ_ν dx by quadrature on `grid`.
pub fn analyze(
    f: impl Fn(&[f64]) -> Complex64,
    grid: &Arc<QuadratureGrid>,
    cutoff: usize,
) -> Result<SpectralField> {
    let basis = Basis::shared(grid.dimension(), cutoff)?;
    let sampler = Sampler::new(basis, grid.clone())?;
    let samples: Vec<Complex64> = grid.points().map(&f).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("function is not finite at every node"));
    }
    sampler.analyze_samples(&samples)
}

/// Σ_ν c_ν φ_ν(x) at arbitrary points (each of length n).
pub fn synthesize(c: &SpectralField, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let basis = c.basis();
    let kmax = basis.max_axis_order();
    points
        .iter()
        .map(|x| {
            if x.len() != c.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: c.dimension(),
                    found: x.len(),
                });
            }
            let rows: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_functions(xi, kmax)).collect();
            Ok(basis
                .indices()
                .iter()
                .zip(c.coefficients())
                .map(|(nu, &cv)| {
                    let phi: f64 = nu.entries().iter().zip(&rows).map(|(&k, r)| r[k]).product();
                    cv * phi
                })
                .sum())
        })
        .collect()
}
