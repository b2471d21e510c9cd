use std::path::{Path, PathBuf};

use hosc_core::norms::{format_exponent, parse_exponent};
use hosc_core::verify::{FamilyKind, MultiplierSpec, Suite, SuiteParams};
use hosc_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Output encoding of reports and tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything an invocation depends on. Flags and `--config` files fill the
/// same fields; flags win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evolution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<bool>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field),)* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad config {}: {e}", path.display())))
    }

    /// `top` fields replace those of `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        overlay!(
            self, top, subcommand, suite, dimension, cutoffs, p, q, s, r, t, degrees, multipliers, family, trials,
            seed, real, tolerance, out, format, field, spec, order, evolution, horizon, steps, spectral
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the subcommand recorded in a config file.
    pub fn expect_subcommand(&mut self, name: &str) -> Result<()> {
        match &self.subcommand {
            Some(s) if s != name => Err(Error::InvalidInput(format!(
                "config is for `{s}`, not `{name}`"
            ))),
            _ => {
                self.subcommand = Some(name.to_string());
                Ok(())
            }
        }
    }

    pub fn suite(&self) -> Result<Suite> {
        self.suite
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("--suite is required".into()))?
            .parse()
    }

    /// Suite defaults with every given field applied.
    pub fn suite_params(&self, suite: Suite) -> Result<SuiteParams> {
        let mut params = SuiteParams::defaults(suite);
        if let Some(n) = self.dimension {
            params.dimension = n;
        }
        if let Some(c) = &self.cutoffs {
            params.cutoffs = c.clone();
        }
        if let Some(p) = &self.p {
            params.p = exponent_list(p)?;
        }
        if let Some(q) = &self.q {
            params.q = exponent_list(q)?;
        }
        if self.s.is_some() {
            params.s = self.s;
        }
        if let Some(r) = &self.r {
            params.r = Some(parse_exponent(r)?);
        }
        if let Some(t) = &self.t {
            params.times = number_list(t)?;
        }
        if let Some(d) = &self.degrees {
            params.degrees = d.clone();
        }
        if let Some(m) = &self.multipliers {
            params.multipliers = split(m).map(str::parse::<MultiplierSpec>).collect::<Result<_>>()?;
        }
        if let Some(f) = &self.family {
            params.family = f.parse::<FamilyKind>()?;
        }
        if let Some(t) = self.trials {
            params.trials = t;
        }
        if let Some(s) = self.seed {
            params.seed = s;
        }
        if let Some(r) = self.real {
            params.real = r;
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::InvalidInput(format!("tolerance must be positive, got {t}")));
            }
            params.tolerance = Some(t);
        }
        Ok(params)
    }

    /// A config spelling out every parameter the suite ran with.
    pub fn resolved(&self, suite: Suite, params: &SuiteParams) -> RunConfig {
        let list = |v: &[f64]| v.iter().map(|&x| format_exponent(x)).collect::<Vec<_>>().join(",");
        RunConfig {
            suite: Some(suite.name().to_string()),
            dimension: Some(params.dimension),
            cutoffs: Some(params.cutoffs.clone()),
            p: Some(list(&params.p)),
            q: Some(list(&params.q)),
            s: params.s,
            r: params.r.map(format_exponent),
            t: (!params.times.is_empty()).then(|| list(&params.times)),
            degrees: (!params.degrees.is_empty()).then(|| params.degrees.clone()),
            multipliers: (!params.multipliers.is_empty())
                .then(|| params.multipliers.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")),
            family: Some(params.family.to_string()),
            trials: Some(params.trials),
            seed: Some(params.seed),
            real: Some(params.real),
            tolerance: params.tolerance,
            ..self.clone()
        }
    }
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

/// Comma-separated exponents; `inf` is accepted.
pub fn exponent_list(s: &str) -> Result<Vec<f64>> {
    split(s).map(parse_exponent).collect()
}

/// Comma-separated finite decimals.
pub fn number_list(s: &str) -> Result<Vec<f64>> {
    split(s)
        .map(|x| {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidInput(format!("bad number `{x}`")))
        })
        .collect()
}
