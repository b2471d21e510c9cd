//! Multi-index bookkeeping and normalized Hermite functions.
//!
//! The Hermite function of order `k` is evaluated through the three-term
//! recurrence of the L²-normalized family
//!
//! ```text
//! ψ₀(x)     = π^{-1/4} e^{-x²/2}
//! ψ_{k+1}(x) = x √(2/(k+1)) ψ_k(x) − √(k/(k+1)) ψ_{k-1}(x)
//! ```
//!
//! carried with a separate logarithmic scale, so neither the Gaussian factor
//! nor the polynomial growth can underflow or overflow for large `|x|`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FRAC_PI_POW_QUARTER: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
const RESCALE_AT: f64 = 1e150;
const RESCALE_LN: f64 = 345.387_763_949_107; // 150 ln 10

/// A multi-index ν ∈ ℕ₀ⁿ labelling the Hermite function φ_ν = Π φ_{ν_j}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("multi-index must have dimension >= 1"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn zero(dimension: usize) -> Self {
        MultiIndex(vec![0; dimension.max(1)])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// |ν| = ν₁ + … + ν_n.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    /// Eigenvalue of H on φ_ν: 2|ν| + n.
    pub fn level(&self) -> usize {
        2 * self.order() + self.dimension()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// 2|ν| + n.
pub fn level(nu: &MultiIndex) -> usize {
    nu.level()
}

/// True when ℓ is an eigenvalue of H in dimension n.
pub fn is_spectral_level(level: usize, dimension: usize) -> bool {
    level >= dimension && (level - dimension).is_multiple_of(2)
}

/// All ν with 2|ν| + n = ℓ in lexicographic order; empty for non-spectral ℓ.
pub fn enumerate_level(level: usize, dimension: usize) -> Vec<MultiIndex> {
    if dimension == 0 || !is_spectral_level(level, dimension) {
        return Vec::new();
    }
    let order = (level - dimension) / 2;
    let mut out = Vec::new();
    let mut scratch = vec![0usize; dimension];
    compositions(order, 0, &mut scratch, &mut out);
    out
}

fn compositions(remaining: usize, axis: usize, scratch: &mut [usize], out: &mut Vec<MultiIndex>) {
    if axis + 1 == scratch.len() {
        scratch[axis] = remaining;
        out.push(MultiIndex(scratch.to_vec()));
        return;
    }
    for first in 0..=remaining {
        scratch[axis] = first;
        compositions(remaining - first, axis + 1, scratch, out);
    }
}

/// All ν with level ≤ L, grouped by level and lexicographic within a level.
/// This order is the coefficient layout of [`crate::SpectralField`].
pub fn enumerate_up_to(cutoff: usize, dimension: usize) -> Vec<MultiIndex> {
    spectral_levels(cutoff, dimension)
        .flat_map(|l| enumerate_level(l, dimension))
        .collect()
}

/// The eigenvalues n, n+2, … not exceeding the cutoff.
pub fn spectral_levels(cutoff: usize, dimension: usize) -> impl Iterator<Item = usize> {
    (dimension..=cutoff).step_by(2)
}

/// Number of multi-indices at one level: C(k+n−1, n−1), k = (ℓ−n)/2.
pub fn level_multiplicity(level: usize, dimension: usize) -> usize {
    if dimension == 0 || !is_spectral_level(level, dimension) {
        return 0;
    }
    let k = (level - dimension) / 2;
    binomial(k + dimension - 1, dimension - 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The truncated eigenbasis: multi-indices of level ≤ L in layout order,
/// with the contiguous slice occupied by each level.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    dimension: usize,
    cutoff: usize,
    indices: Vec<MultiIndex>,
    level_ranges: Vec<(usize, Range<usize>)>,
}

impl Basis {
    pub fn new(dimension: usize, cutoff: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if cutoff < dimension {
            return Err(Error::invalid(format!(
                "cutoff L = {cutoff} is below the ground level n = {dimension}"
            )));
        }
        let mut indices = Vec::new();
        let mut level_ranges = Vec::new();
        for l in spectral_levels(cutoff, dimension) {
            let start = indices.len();
            indices.extend(enumerate_level(l, dimension));
            level_ranges.push((l, start..indices.len()));
        }
        Ok(Basis {
            dimension,
            cutoff,
            indices,
            level_ranges,
        })
    }

    /// Memoized constructor.
    pub fn shared(dimension: usize, cutoff: usize) -> Result<Arc<Basis>> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<Basis>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().expect("basis cache poisoned").get(&(dimension, cutoff)) {
            return Ok(b.clone());
        }
        let basis = Arc::new(Basis::new(dimension, cutoff)?);
        cache
            .lock()
            .expect("basis cache poisoned")
            .insert((dimension, cutoff), basis.clone());
        Ok(basis)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// `(ℓ, slice)` pairs in increasing ℓ.
    pub fn levels(&self) -> &[(usize, Range<usize>)] {
        &self.level_ranges
    }

    /// Largest one-dimensional order appearing in any index.
    pub fn max_axis_order(&self) -> usize {
        (self.cutoff - self.dimension) / 2
    }

    pub fn position(&self, nu: &MultiIndex) -> Option<usize> {
        if nu.dimension() != self.dimension || nu.level() > self.cutoff {
            return None;
        }
        let (_, range) = &self.level_ranges[(nu.level() - self.dimension) / 2];
        self.indices[range.clone()]
            .binary_search(nu)
            .ok()
            .map(|i| i + range.start)
    }

    /// Level of the coefficient stored at `position`.
    pub fn level_of(&self, position: usize) -> usize {
        self.indices[position].level()
    }
}

/// ψ₀(x), …, ψ_kmax(x).
pub fn hermite_functions(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut prev = 0.0;
    let mut cur = FRAC_PI_POW_QUARTER;
    let mut log_scale = -0.5 * x * x;
    for k in 0..=kmax {
        out.push(unscale(cur, log_scale));
        if k == kmax {
            break;
        }
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            log_scale += RESCALE_LN;
        }
    }
    out
}

/// ψ_k(x) for a single order.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    let (_, cur, log_scale) = scaled_pair(k, x);
    unscale(cur, log_scale)
}

/// Value of the L²-normalized Hermite function φ_ν at a point of ℝⁿ.
pub fn hermite_eval(nu: &MultiIndex, x: &[f64]) -> Result<f64> {
    if x.len() != nu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: nu.dimension(),
            found: x.len(),
        });
    }
    Ok(nu
        .entries()
        .iter()
        .zip(x)
        .map(|(&k, &xi)| hermite_function(k, xi))
        .product())
}

/// `(m_{k-1}, m_k, s)` with ψ_j(x) = m_j e^{s}; the common scale keeps
/// ratios such as ψ_k/ψ_{k-1} exact even where both values underflow.
pub(crate) fn scaled_pair(k: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = FRAC_PI_POW_QUARTER;
    let mut log_scale = -0.5 * x * x;
    for j in 0..k {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            log_scale += RESCALE_LN;
        }
    }
    (prev, cur, log_scale)
}

fn unscale(mantissa: f64, log_scale: f64) -> f64 {
    if mantissa == 0.0 {
        return 0.0;
    }
    mantissa.signum() * (mantissa.abs().ln() + log_scale).exp()
}
