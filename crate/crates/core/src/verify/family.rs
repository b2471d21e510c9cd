use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{Basis, MultiIndex};
use crate::spectral::SpectralField;

/// Which initial data a suite draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// φ_ν for the basis entry at index `trial mod len`.
    SingleEigenfunction,
    /// i.i.d. standard normal coefficients, L²-normalized.
    RandomBandLimited,
    /// The ground state φ₀.
    Gaussian,
    /// φ₀ plus 0.1 times a normalized random field, renormalized.
    GaussianPerturbed,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::SingleEigenfunction => "single-eigenfunction",
            FamilyKind::RandomBandLimited => "random-band-limited",
            FamilyKind::Gaussian => "gaussian",
            FamilyKind::GaussianPerturbed => "gaussian-perturbed",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "single-eigenfunction" | "eigenfunction" => FamilyKind::SingleEigenfunction,
            "random-band-limited" | "random" => FamilyKind::RandomBandLimited,
            "gaussian" => FamilyKind::Gaussian,
            "gaussian-perturbed" => FamilyKind::GaussianPerturbed,
            other => return Err(Error::invalid(format!("unknown trial family `{other}`"))),
        })
    }
}

/// A reproducible stream of initial data.
///
/// Trial `i` uses ChaCha8 seeded with `seed` on stream `i`, so a trial's
/// field does not depend on how many trials run or in which order.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialFamily {
    pub kind: FamilyKind,
    pub dimension: usize,
    pub cutoff: usize,
    pub seed: u64,
    /// Draw real coefficients only.
    pub real: bool,
}

impl TrialFamily {
    pub fn draw(&self, trial: usize) -> Result<SpectralField> {
        let basis = Basis::shared(self.dimension, self.cutoff)?;
        match self.kind {
            FamilyKind::SingleEigenfunction => {
                let nu = &basis.indices()[trial % basis.len()];
                SpectralField::unit(self.dimension, self.cutoff, nu)
            }
            FamilyKind::RandomBandLimited => {
                let coeffs = random_coefficients(basis.len(), self.seed, trial as u64, self.real);
                SpectralField::from_coefficients(self.dimension, self.cutoff, coeffs)?.normalized()
            }
            FamilyKind::Gaussian => self.ground_state(),
            FamilyKind::GaussianPerturbed => {
                let coeffs = random_coefficients(basis.len(), self.seed, trial as u64, self.real);
                let noise = SpectralField::from_coefficients(self.dimension, self.cutoff, coeffs)?.normalized()?;
                self.ground_state()?
                    .add(&noise.scaled(Complex64::new(0.1, 0.0)))?
                    .normalized()
            }
        }
    }

    pub fn label(&self, trial: usize) -> String {
        match self.kind {
            FamilyKind::SingleEigenfunction => match Basis::shared(self.dimension, self.cutoff) {
                Ok(b) => format!("phi{:?}", b.indices()[trial % b.len()].entries()),
                Err(_) => format!("phi#{trial}"),
            },
            FamilyKind::Gaussian => "phi0".to_string(),
            kind => format!("{kind}#{trial}"),
        }
    }

    fn ground_state(&self) -> Result<SpectralField> {
        SpectralField::unit(self.dimension, self.cutoff, &MultiIndex::zero(self.dimension))
    }
}

/// `len` standard normal coefficients from stream `stream` of `seed`.
pub fn random_coefficients(len: usize, seed: u64, stream: u64, real: bool) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if real { 0.0 } else { rng.sample(StandardNormal) };
            Complex64::new(re, im)
        })
        .collect()
}
