//! Norm functionals: L^p, mixed space-time norms, the Hermite
//! Triebel–Lizorkin norms 𝔽^r_{p,q} and the Sobolev norms ℋ^s, W^{2s,p,H}.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::Basis;
use crate::propagators::{SpaceTimeField, TimeGrid, TimeGridKind};
use crate::quadrature::QuadratureGrid;
use crate::spectral::{LevelSamples, Sampler, SpectralField};

pub const TWO_PI: f64 = 2.0 * PI;

fn check_exponent(name: &str, p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::invalid(format!("exponent {name} must lie in (0, inf], got {p}")));
    }
    Ok(())
}

/// Parses an exponent: a decimal number or `inf`.
pub fn parse_exponent(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s {
        "inf" | "Inf" | "infinity" => f64::INFINITY,
        _ => s
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("cannot parse exponent {s:?}")))?,
    };
    if v.is_nan() {
        return Err(Error::invalid(format!("cannot parse exponent {s:?}")));
    }
    Ok(v)
}

/// Formats an exponent so that [`parse_exponent`] reads it back exactly.
pub fn format_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p:?}")
    }
}

/// The Hölder conjugate p′ with 1/p + 1/p′ = 1.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// (Σ wᵢ aᵢ^p)^{1/p} for non-negative aᵢ; p = ∞ gives the max.
pub fn lp_norm_abs(abs: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    if abs.len() != weights.len() {
        return Err(Error::invalid(format!(
            "{} values for {} weights",
            abs.len(),
            weights.len()
        )));
    }
    let peak = abs.iter().fold(0.0f64, |a, &v| a.max(v));
    if p.is_infinite() || peak == 0.0 {
        return Ok(peak);
    }
    let sum: f64 = abs.iter().zip(weights).map(|(&a, &w)| w * (a / peak).powf(p)).sum();
    Ok(peak * sum.powf(1.0 / p))
}

/// (Σ wᵢ |vᵢ|^p)^{1/p}; quasi-norm for p < 1.
pub fn lp_norm(values: &[Complex64], weights: &[f64], p: f64) -> Result<f64> {
    let abs: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    lp_norm_abs(&abs, weights, p)
}

/// Spatial discretization used for norms of spectral fields.
///
/// Finite p integrate on a compensated Gauss–Hermite grid of width √(2/p),
/// so that the Gaussian tail of |f|^p matches the rule, with order
/// M·max(1, p/2) per axis to keep the outermost node at the same distance;
/// p = ∞ samples a uniform box [−R, R]ⁿ with R = √(2L) + 4.
#[derive(Debug)]
pub struct Discretization {
    dimension: usize,
    cutoff: usize,
    order: usize,
    grids: Mutex<HashMap<u64, Arc<Sampler>>>,
}

impl Discretization {
    /// Default order M = L + 12.
    pub fn new(dimension: usize, cutoff: usize) -> Result<Self> {
        Self::with_order(dimension, cutoff, cutoff + 12)
    }

    pub fn with_order(dimension: usize, cutoff: usize, order: usize) -> Result<Self> {
        Basis::shared(dimension, cutoff)?;
        if order <= (cutoff - dimension) / 2 {
            return Err(Error::invalid(format!(
                "quadrature order {order} cannot resolve cutoff {cutoff}"
            )));
        }
        Ok(Discretization {
            dimension,
            cutoff,
            order,
            grids: Mutex::new(HashMap::new()),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sup_radius(&self) -> f64 {
        (2.0 * self.cutoff as f64).sqrt() + 4.0
    }

    fn sup_points_per_axis(&self) -> usize {
        match self.dimension {
            1 => 801,
            2 => 161,
            _ => 41,
        }
    }

    /// Width factor of the Gauss–Hermite grid used for exponent p.
    pub fn scale_for(p: f64) -> f64 {
        if p.is_infinite() {
            1.0
        } else {
            (2.0 / p).sqrt()
        }
    }

    /// Per-axis order of the grid used for exponent p.
    pub fn order_for(&self, p: f64) -> usize {
        let factor = (0.5 * p).clamp(1.0, 8.0);
        (self.order as f64 * factor).ceil() as usize
    }

    /// Sampler on the grid appropriate for exponent p.
    pub fn sampler(&self, p: f64) -> Result<Arc<Sampler>> {
        check_exponent("p", p)?;
        let key = if p.is_infinite() { u64::MAX } else { Self::scale_for(p).to_bits() };
        if let Some(s) = self.grids.lock().expect("grid cache poisoned").get(&key) {
            return Ok(s.clone());
        }
        let grid = if p.is_infinite() {
            QuadratureGrid::uniform(self.dimension, self.sup_radius(), self.sup_points_per_axis())?
        } else {
            QuadratureGrid::gauss_hermite_scaled(self.dimension, self.order_for(p), Self::scale_for(p))?
        };
        let sampler = Arc::new(Sampler::new(
            Basis::shared(self.dimension, self.cutoff)?,
            Arc::new(grid),
        )?);
        self.grids
            .lock()
            .expect("grid cache poisoned")
            .insert(key, sampler.clone());
        Ok(sampler)
    }

    fn check_field(&self, c: &SpectralField) -> Result<()> {
        if c.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: c.dimension(),
            });
        }
        if c.cutoff() > self.cutoff {
            return Err(Error::invalid(format!(
                "field cutoff {} exceeds the discretization cutoff {}",
                c.cutoff(),
                self.cutoff
            )));
        }
        Ok(())
    }
}

/// ‖f‖_{L^p}.
pub fn field_lp_norm(c: &SpectralField, p: f64, disc: &Discretization) -> Result<f64> {
    disc.check_field(c)?;
    let sampler = disc.sampler(p)?;
    let values = sampler.synthesize(c)?;
    lp_norm(&values, sampler.grid().weights(), p)
}

/// (Σ_ℓ (ℓ^r a_ℓ)^q)^{1/q} for one point; q = ∞ gives the max.
fn level_aggregate(mut terms: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        return terms.fold(0.0, f64::max);
    }
    let collected: Vec<f64> = terms.by_ref().collect();
    let peak = collected.iter().fold(0.0f64, |a, &v| a.max(v));
    if peak == 0.0 {
        return 0.0;
    }
    peak * collected.iter().map(|v| (v / peak).powf(q)).sum::<f64>().powf(1.0 / q)
}

/// Pointwise ℓ-aggregate (Σ_ℓ ℓ^{rq} |P_ℓ f(xᵢ)|^q)^{1/q}.
pub fn tl_profile(levels: &LevelSamples, r: f64, q: f64) -> Result<Vec<f64>> {
    check_exponent("q", q)?;
    let weights: Vec<f64> = levels.levels().iter().map(|&l| (l as f64).powf(r)).collect();
    Ok((0..levels.num_points())
        .into_par_iter()
        .map(|i| {
            level_aggregate(
                levels.at_point(i).zip(&weights).map(|((_, v), w)| w * v.norm()),
                q,
            )
        })
        .collect())
}

/// ‖f‖_{𝔽^r_{p,q}} = ‖(Σ_ℓ ℓ^{rq}|P_ℓ f|^q)^{1/q}‖_{L^p}.
pub fn tl_norm(c: &SpectralField, r: f64, p: f64, q: f64, disc: &Discretization) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    disc.check_field(c)?;
    let sampler = disc.sampler(p)?;
    let levels = sampler.level_values(c)?;
    lp_norm_abs(&tl_profile(&levels, r, q)?, sampler.grid().weights(), p)
}

/// ‖f‖_{ℋ^s} = ‖H^{s/2} f‖_{L²}, exact by Parseval.
pub fn sobolev_h(c: &SpectralField, s: f64) -> f64 {
    let basis = c.basis();
    basis
        .levels()
        .iter()
        .map(|(l, range)| {
            (*l as f64).powf(s) * c.coefficients()[range.clone()].iter().map(|v| v.norm_sqr()).sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

/// ‖f‖_{W^{2s,p,H}} = ‖H^s f‖_{L^p}.
pub fn sobolev_w(c: &SpectralField, s: f64, p: f64, disc: &Discretization) -> Result<f64> {
    field_lp_norm(&c.apply_h_power(s), p, disc)
}

/// Exact pointwise ‖u(·, x)‖_{L²_t[0,2π]} = √(2π) (Σ_ℓ |P_ℓ f(x)|²)^{1/2}.
pub fn l2t_profile(levels: &LevelSamples) -> Vec<f64> {
    let scale = TWO_PI.sqrt();
    (0..levels.num_points())
        .map(|i| scale * levels.at_point(i).map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// [`l2t_profile`] at arbitrary points.
pub fn l2t_profile_at(c: &SpectralField, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let basis = c.basis();
    let scale = TWO_PI.sqrt();
    points
        .iter()
        .map(|x| {
            let mut total = 0.0;
            for (_, range) in basis.levels() {
                let mut level = Complex64::new(0.0, 0.0);
                for (nu, cv) in basis.indices()[range.clone()].iter().zip(&c.coefficients()[range.clone()]) {
                    level += cv * crate::hermite::hermite_eval(nu, x)?;
                }
                total += level.norm_sqr();
            }
            Ok(scale * total.sqrt())
        })
        .collect()
}

/// Both orderings of a mixed norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedNorms {
    /// ‖u‖_{L^p_x(L^q_t)}
    pub xt: f64,
    /// ‖u‖_{L^q_t(L^p_x)}
    pub tx: f64,
}

/// Number of time nodes needed to integrate the oscillator evolution of a
/// field with cutoff L over [0, T]: 8L per period.
pub fn required_time_nodes(cutoff: usize, horizon: f64) -> usize {
    ((8 * cutoff) as f64 * horizon / TWO_PI - 1e-9).ceil().max(1.0) as usize
}

/// Default time rule on [0, T]: periodic trapezoid for T = 2π, Gauss–Legendre
/// otherwise, with the node count of [`required_time_nodes`].
pub fn default_time_grid(cutoff: usize, horizon: f64) -> Result<TimeGrid> {
    let count = required_time_nodes(cutoff, horizon).max(16);
    if (horizon - TWO_PI).abs() <= 1e-12 {
        TimeGrid::periodic(TWO_PI, count)
    } else {
        TimeGrid::gauss_legendre(horizon, count)
    }
}

fn check_time_grid(times: &TimeGrid, cutoff: usize) -> Result<()> {
    let required = required_time_nodes(cutoff, times.horizon());
    match times.kind() {
        TimeGridKind::Instants => Err(Error::invalid("mixed norms need a time quadrature rule, not instants")),
        _ if times.len() < required => Err(Error::Resolution(format!(
            "{} time nodes cannot resolve frequencies up to {cutoff} on [0, {}]; need at least {required}",
            times.len(),
            times.horizon()
        ))),
        _ => Ok(()),
    }
}

/// Accumulates both mixed-norm orderings from rows |u(·, xᵢ)| over time.
struct MixedAccumulator<'a> {
    p: f64,
    q: f64,
    time_weights: &'a [f64],
    inner_t: Vec<f64>,
    // per time node: Σᵢ wᵢ|u|^p, or max |u| for p = ∞
    inner_x: Vec<f64>,
}

impl<'a> MixedAccumulator<'a> {
    fn new(p: f64, q: f64, time_weights: &'a [f64], points: usize) -> Self {
        MixedAccumulator {
            p,
            q,
            time_weights,
            inner_t: Vec::with_capacity(points),
            inner_x: vec![0.0; time_weights.len()],
        }
    }

    fn push(&mut self, row: &[f64], space_weight: f64) -> Result<()> {
        self.inner_t.push(lp_norm_abs(row, self.time_weights, self.q)?);
        for (acc, &a) in self.inner_x.iter_mut().zip(row) {
            if self.p.is_infinite() {
                *acc = acc.max(a);
            } else {
                *acc += space_weight * a.powf(self.p);
            }
        }
        Ok(())
    }

    fn finish(self, space_weights: &[f64]) -> Result<MixedNorms> {
        let xt = lp_norm_abs(&self.inner_t, space_weights, self.p)?;
        let per_time: Vec<f64> = if self.p.is_infinite() {
            self.inner_x
        } else {
            self.inner_x.iter().map(|s| s.powf(1.0 / self.p)).collect()
        };
        let tx = lp_norm_abs(&per_time, self.time_weights, self.q)?;
        Ok(MixedNorms { xt, tx })
    }
}

/// Both mixed norms of a stored space-time field.
pub fn mixed_norms_of(u: &SpaceTimeField, p: f64, q: f64) -> Result<MixedNorms> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    check_time_grid(u.times(), u.initial().cutoff())?;
    let grid = u.space();
    let m = grid.len();
    let mut acc = MixedAccumulator::new(p, q, u.times().weights(), m);
    let mut row = vec![0.0; u.times().len()];
    for (i, &w) in grid.weights().iter().enumerate() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = u.values()[j * m + i].norm();
        }
        acc.push(&row, w)?;
    }
    acc.finish(grid.weights())
}

/// ‖u‖_{L^p_x(L^q_t)} of a stored space-time field.
pub fn mixed_norm_xt(u: &SpaceTimeField, p: f64, q: f64) -> Result<f64> {
    Ok(mixed_norms_of(u, p, q)?.xt)
}

/// ‖u‖_{L^q_t(L^p_x)} of a stored space-time field.
pub fn mixed_norm_tx(u: &SpaceTimeField, q: f64, p: f64) -> Result<f64> {
    Ok(mixed_norms_of(u, p, q)?.tx)
}

/// Both mixed norms of u = e^{−itH} f, streamed over the spatial points so
/// the full space-time array is never stored.
pub fn oscillator_mixed_norms(
    c: &SpectralField,
    p: f64,
    q: f64,
    times: &TimeGrid,
    sampler: &Sampler,
) -> Result<MixedNorms> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    check_time_grid(times, c.cutoff())?;
    let levels = sampler.level_values(c)?;
    let phases: Vec<Vec<Complex64>> = times
        .nodes()
        .iter()
        .map(|&t| {
            levels
                .levels()
                .iter()
                .map(|&l| Complex64::from_polar(1.0, -t * l as f64))
                .collect()
        })
        .collect();
    let weights = sampler.grid().weights();
    let rows: Vec<Vec<f64>> = (0..levels.num_points())
        .into_par_iter()
        .map(|i| {
            let at: Vec<Complex64> = levels.at_point(i).map(|(_, v)| v).collect();
            phases
                .iter()
                .map(|ph| ph.iter().zip(&at).map(|(e, v)| e * v).sum::<Complex64>().norm())
                .collect()
        })
        .collect();
    let mut acc = MixedAccumulator::new(p, q, times.weights(), rows.len());
    for (row, &w) in rows.iter().zip(weights) {
        acc.push(row, w)?;
    }
    acc.finish(weights)
}

/// How the pointwise L^q_t[0,2π] norm of e^{−itH}f is obtained.
#[derive(Clone, Copy, Debug)]
pub enum TimeRoute<'a> {
    /// Quadrature-free: q = 2m even, ∫|u|^{2m} dt = 2π Σ_j |b_j|² where b are
    /// the coefficients of (Σ_k a_k w^k)^m in w = e^{−2it}.
    Exact,
    Quadrature(&'a TimeGrid),
}

/// Largest even q accepted by [`TimeRoute::Exact`].
pub const MAX_EXACT_TIME_EXPONENT: f64 = 16.0;

fn exact_power(q: f64) -> Result<usize> {
    if q.fract() != 0.0 || !(2.0..=MAX_EXACT_TIME_EXPONENT).contains(&q) || !(q as usize).is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "the exact time route needs an even q <= {MAX_EXACT_TIME_EXPONENT}, got {q}"
        )));
    }
    Ok(q as usize / 2)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// ‖e^{−itH}f(x)‖_{L^q_t[0,2π]} at every point of `levels`.
pub fn time_lq_profile(levels: &LevelSamples, q: f64, route: TimeRoute<'_>) -> Result<Vec<f64>> {
    check_exponent("q", q)?;
    match route {
        TimeRoute::Exact => {
            let m = exact_power(q)?;
            if m == 1 {
                return Ok(l2t_profile(levels));
            }
            Ok((0..levels.num_points())
                .into_par_iter()
                .map(|i| {
                    let a: Vec<Complex64> = levels.at_point(i).map(|(_, v)| v).collect();
                    let mut power = a.clone();
                    for _ in 1..m {
                        power = poly_mul(&power, &a);
                    }
                    let energy: f64 = power.iter().map(|b| b.norm_sqr()).sum();
                    (TWO_PI * energy).powf(1.0 / q)
                })
                .collect())
        }
        TimeRoute::Quadrature(times) => {
            // All levels share the parity of n, so |u(t + π)| = |u(t)|: on a
            // periodic 2π grid with an even count the second half repeats the first.
            let half = times.kind() == TimeGridKind::Periodic
                && (times.horizon() - TWO_PI).abs() <= 1e-12
                && times.len() % 2 == 0;
            let used = if half { times.len() / 2 } else { times.len() };
            let weights: Vec<f64> = times.weights()[..used]
                .iter()
                .map(|w| if half { 2.0 * w } else { *w })
                .collect();
            let phases: Vec<Vec<Complex64>> = times.nodes()[..used]
                .iter()
                .map(|&t| {
                    levels
                        .levels()
                        .iter()
                        .map(|&l| Complex64::from_polar(1.0, -t * l as f64))
                        .collect()
                })
                .collect();
            (0..levels.num_points())
                .into_par_iter()
                .map(|i| {
                    let at: Vec<Complex64> = levels.at_point(i).map(|(_, v)| v).collect();
                    let row: Vec<f64> = phases
                        .iter()
                        .map(|ph| ph.iter().zip(&at).map(|(e, v)| e * v).sum::<Complex64>().norm())
                        .collect();
                    lp_norm_abs(&row, &weights, q)
                })
                .collect()
        }
    }
}

/// ‖e^{−itH}f‖_{L^p_x(L^q_t[0,2π])} on the points of `sampler`.
pub fn oscillator_xt_norm(
    c: &SpectralField,
    p: f64,
    q: f64,
    sampler: &Sampler,
    route: TimeRoute<'_>,
) -> Result<f64> {
    check_exponent("p", p)?;
    if let TimeRoute::Quadrature(times) = route {
        check_time_grid(times, c.cutoff())?;
        if times.kind() != TimeGridKind::Periodic || (times.horizon() - TWO_PI).abs() > 1e-12 {
            return Err(Error::invalid("the L^q_t[0,2π] profile needs a periodic grid on [0, 2π)"));
        }
    }
    let levels = sampler.level_values(c)?;
    lp_norm_abs(&time_lq_profile(&levels, q, route)?, sampler.grid().weights(), p)
}

/// A norm request, written `KIND:key=value,...`.
///
/// Kinds and keys: `Lp:p`, `MixedXT:p,q[,T]`, `MixedTX:q,p[,T]`,
/// `TL:r,p,q`, `SobolevH2:s`, `SobolevWp:s,p`. Exponents accept `inf`;
/// T defaults to 2π.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    Lp { p: f64 },
    MixedXT { p: f64, q: f64, horizon: f64 },
    MixedTX { q: f64, p: f64, horizon: f64 },
    TriebelLizorkin { r: f64, p: f64, q: f64 },
    SobolevH2 { s: f64 },
    SobolevWp { s: f64, p: f64 },
}

impl NormSpec {
    pub fn evaluate(&self, c: &SpectralField, disc: &Discretization) -> Result<f64> {
        match *self {
            NormSpec::Lp { p } => field_lp_norm(c, p, disc),
            NormSpec::MixedXT { p, q, horizon } | NormSpec::MixedTX { q, p, horizon } => {
                disc.check_field(c)?;
                let times = default_time_grid(c.cutoff(), horizon)?;
                let norms = oscillator_mixed_norms(c, p, q, &times, &*disc.sampler(p)?)?;
                Ok(if matches!(self, NormSpec::MixedXT { .. }) { norms.xt } else { norms.tx })
            }
            NormSpec::TriebelLizorkin { r, p, q } => tl_norm(c, r, p, q, disc),
            NormSpec::SobolevH2 { s } => Ok(sobolev_h(c, s)),
            NormSpec::SobolevWp { s, p } => sobolev_w(c, s, p, disc),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("norm spec {text:?} lacks KIND:")))?;
        let mut keys: HashMap<&str, &str> = HashMap::new();
        for pair in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got {pair:?}")))?;
            if keys.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::invalid(format!("key {k:?} given twice")));
            }
        }
        let allowed: &[&str] = match kind.trim() {
            "Lp" => &["p"],
            "MixedXT" | "MixedTX" => &["p", "q", "T"],
            "TL" => &["r", "p", "q"],
            "SobolevH2" => &["s"],
            "SobolevWp" => &["s", "p"],
            other => return Err(Error::invalid(format!("unknown norm kind {other:?}"))),
        };
        if let Some(k) = keys.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::invalid(format!("key {k:?} does not apply to {}", kind.trim())));
        }
        let exponent = |k: &str| -> Result<f64> {
            let v = parse_exponent(
                keys.get(k)
                    .ok_or_else(|| Error::invalid(format!("{} needs key {k}", kind.trim())))?,
            )?;
            check_exponent(k, v)?;
            Ok(v)
        };
        let real = |k: &str| -> Result<f64> {
            let v = parse_exponent(
                keys.get(k)
                    .ok_or_else(|| Error::invalid(format!("{} needs key {k}", kind.trim())))?,
            )?;
            if !v.is_finite() {
                return Err(Error::invalid(format!("{k} must be finite")));
            }
            Ok(v)
        };
        let horizon = || -> Result<f64> {
            match keys.get("T") {
                None => Ok(TWO_PI),
                Some(_) => {
                    let t = real("T")?;
                    if t <= 0.0 {
                        return Err(Error::invalid("T must be positive"));
                    }
                    Ok(t)
                }
            }
        };
        Ok(match kind.trim() {
            "Lp" => NormSpec::Lp { p: exponent("p")? },
            "MixedXT" => NormSpec::MixedXT {
                p: exponent("p")?,
                q: exponent("q")?,
                horizon: horizon()?,
            },
            "MixedTX" => NormSpec::MixedTX {
                q: exponent("q")?,
                p: exponent("p")?,
                horizon: horizon()?,
            },
            "TL" => NormSpec::TriebelLizorkin {
                r: real("r")?,
                p: exponent("p")?,
                q: exponent("q")?,
            },
            "SobolevH2" => NormSpec::SobolevH2 { s: real("s")? },
            _ => NormSpec::SobolevWp {
                s: real("s")?,
                p: exponent("p")?,
            },
        })
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = format_exponent;
        match *self {
            NormSpec::Lp { p } => write!(f, "Lp:p={}", e(p)),
            NormSpec::MixedXT { p, q, horizon } => write!(f, "MixedXT:p={},q={},T={horizon:?}", e(p), e(q)),
            NormSpec::MixedTX { q, p, horizon } => write!(f, "MixedTX:q={},p={},T={horizon:?}", e(q), e(p)),
            NormSpec::TriebelLizorkin { r, p, q } => write!(f, "TL:r={r:?},p={},q={}", e(p), e(q)),
            NormSpec::SobolevH2 { s } => write!(f, "SobolevH2:s={s:?}"),
            NormSpec::SobolevWp { s, p } => write!(f, "SobolevWp:s={s:?},p={}", e(p)),
        }
    }
}
