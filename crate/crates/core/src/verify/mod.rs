//! Numerical verification suites.
//!
//! Each suite draws seeded trial fields, evaluates both sides of an estimate
//! and returns a [`VerificationReport`]. Identity and constant-1 suites pass
//! when every record is within tolerance. Suites with an unknown constant
//! pass when every record is finite and the empirical constant Ĉ does not
//! grow by more than 25% from one cutoff to the next.
//!
//! Exponent hypotheses are checked before any computation; violations return
//! [`Error::Hypothesis`](crate::Error::Hypothesis) naming the constraint.

mod family;
pub mod hypotheses;
mod report;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::norms::format_exponent;
use crate::spectral::Multiplier;

pub use family::{random_coefficients, FamilyKind, TrialFamily};
pub use report::{stability, Aggregate, Stability, TrialRecord, VerificationReport, STABILITY_FACTOR};

macro_rules! suites {
    ($($variant:ident => $name:literal, $empirical:literal;)*) => {
        /// The registered suites.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Suite {
            $($variant,)*
        }

        impl Suite {
            pub const ALL: &'static [Suite] = &[$(Suite::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Suite::$variant => $name,)*
                }
            }

            /// Whether the suite estimates an unknown constant (and so uses
            /// the stability protocol).
            pub fn is_empirical(self) -> bool {
                match self {
                    $(Suite::$variant => $empirical,)*
                }
            }
        }

        impl FromStr for Suite {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($name => Ok(Suite::$variant),)*
                    other => Err(Error::invalid(format!(
                        "unknown suite `{other}`; expected one of: {}",
                        Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
                    ))),
                }
            }
        }
    };
}

suites! {
    IdentitySqrt2Pi => "identity-sqrt2pi", false;
    MultiplierNorm => "multiplier-norm", false;
    SjogrenTorrea => "sjogren-torrea", false;
    MainTheorem => "main-theorem", true;
    Lplq => "lplq", true;
    LpAnalogue => "lp-analogue", true;
    Dispersive => "dispersive", true;
    Wainger => "wainger", true;
    MixedOrderings => "mixed-orderings", false;
    CorollaryL2 => "corollary-l2", true;
    LemmaT1 => "lemma-t1", true;
    MehlerOracle => "mehler-oracle", false;
    TlEmbeddings => "tl-embeddings", false;
    PartialSums => "partial-sums", false;
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A multiplier family, written `kind[:value]`.
///
/// `indicator` without a value cuts at L/2; `random` tabulates seeded
/// complex normal values.
#[derive(Clone, Debug, PartialEq)]
pub enum MultiplierSpec {
    Indicator(Option<f64>),
    Power(f64),
    Phase(f64),
    Decay(f64),
    Window(f64),
    Constant(f64),
    Random,
}

impl MultiplierSpec {
    pub fn build(&self, dimension: usize, cutoff: usize, seed: u64) -> Result<Multiplier> {
        Ok(match *self {
            MultiplierSpec::Indicator(upper) => Multiplier::Indicator {
                upper: upper.unwrap_or(0.5 * cutoff as f64),
            },
            MultiplierSpec::Power(s) => Multiplier::Power(s),
            MultiplierSpec::Phase(t) => Multiplier::Phase(t),
            MultiplierSpec::Decay(t) => Multiplier::Decay(t),
            MultiplierSpec::Window(a) => Multiplier::UnitWindow { start: a },
            MultiplierSpec::Constant(c) => Multiplier::Constant(Complex64::new(c, 0.0)),
            MultiplierSpec::Random => {
                let count = crate::hermite::spectral_levels(cutoff, dimension).count();
                Multiplier::Tabulated {
                    first_level: dimension,
                    values: random_coefficients(count, seed, u64::MAX, false),
                }
            }
        })
    }
}

impl fmt::Display for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierSpec::Indicator(None) => write!(f, "indicator"),
            MultiplierSpec::Indicator(Some(u)) => write!(f, "indicator:{u:?}"),
            MultiplierSpec::Power(s) => write!(f, "power:{s:?}"),
            MultiplierSpec::Phase(t) => write!(f, "phase:{t:?}"),
            MultiplierSpec::Decay(t) => write!(f, "decay:{t:?}"),
            MultiplierSpec::Window(a) => write!(f, "window:{a:?}"),
            MultiplierSpec::Constant(c) => write!(f, "constant:{c:?}"),
            MultiplierSpec::Random => write!(f, "random"),
        }
    }
}

impl FromStr for MultiplierSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = match s.trim().split_once(':') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (s.trim(), None),
        };
        let number = || -> Result<f64> {
            let v = value.ok_or_else(|| Error::invalid(format!("multiplier `{kind}` needs a value")))?;
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::invalid(format!("bad multiplier value `{v}`")))
        };
        Ok(match kind {
            "indicator" => MultiplierSpec::Indicator(value.map(|_| number()).transpose()?),
            "power" => MultiplierSpec::Power(number()?),
            "phase" => MultiplierSpec::Phase(number()?),
            "decay" => {
                let t = number()?;
                if t < 0.0 {
                    return Err(Error::invalid("decay multiplier needs t ≥ 0"));
                }
                MultiplierSpec::Decay(t)
            }
            "window" => MultiplierSpec::Window(number()?),
            "constant" => MultiplierSpec::Constant(number()?),
            "random" if value.is_none() => MultiplierSpec::Random,
            _ => return Err(Error::invalid(format!("unknown multiplier `{s}`"))),
        })
    }
}

/// Parameters shared by all suites; each suite reads the fields it needs.
///
/// `p` and `q` are paired elementwise by the suites whose exponents are tied
/// together (sjogren-torrea, corollary-l2, mixed-orderings), with a single
/// value broadcast; the other suites run every combination.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteParams {
    pub dimension: usize,
    pub cutoffs: Vec<usize>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Smoothness; `None` selects the suite default (s_q where relevant).
    pub s: Option<f64>,
    /// Wainger r, or the smoothness of the embedding checks.
    pub r: Option<f64>,
    pub times: Vec<f64>,
    /// Trigonometric degrees D (wainger).
    pub degrees: Vec<usize>,
    pub multipliers: Vec<MultiplierSpec>,
    pub family: FamilyKind,
    pub trials: usize,
    pub seed: u64,
    pub real: bool,
    pub tolerance: Option<f64>,
}

impl SuiteParams {
    pub fn defaults(suite: Suite) -> Self {
        let base = SuiteParams {
            dimension: 1,
            cutoffs: vec![20],
            p: vec![1.8],
            q: vec![2.0],
            s: None,
            r: None,
            times: Vec::new(),
            degrees: Vec::new(),
            multipliers: Vec::new(),
            family: FamilyKind::RandomBandLimited,
            trials: 200,
            seed: 42,
            real: false,
            tolerance: None,
        };
        let inf = f64::INFINITY;
        match suite {
            Suite::IdentitySqrt2Pi => SuiteParams { p: vec![1.5, 2.0, 4.0, inf], trials: 50, ..base },
            Suite::MultiplierNorm => SuiteParams {
                p: vec![1.5, 4.0],
                trials: 50,
                multipliers: vec![
                    MultiplierSpec::Indicator(None),
                    MultiplierSpec::Power(-1.0),
                    MultiplierSpec::Phase(0.7),
                    MultiplierSpec::Decay(0.3),
                    MultiplierSpec::Random,
                ],
                ..base
            },
            Suite::SjogrenTorrea => SuiteParams {
                cutoffs: vec![12],
                p: vec![6.0],
                q: vec![6.0],
                trials: 20,
                real: true,
                ..base
            },
            Suite::MainTheorem => SuiteParams { dimension: 3, cutoffs: vec![8, 16], ..base },
            Suite::Lplq => SuiteParams { dimension: 3, cutoffs: vec![8, 16], p: vec![1.9], ..base },
            Suite::LpAnalogue => SuiteParams { dimension: 3, cutoffs: vec![8, 16], s: Some(0.5), ..base },
            Suite::Dispersive => SuiteParams {
                dimension: 3,
                cutoffs: vec![8, 16],
                times: (1..=16).map(|j| j as f64 * std::f64::consts::PI / 64.0).collect(),
                ..base
            },
            Suite::Wainger => SuiteParams {
                q: vec![6.0],
                r: Some(2.0),
                degrees: vec![16, 32, 64],
                ..base
            },
            Suite::MixedOrderings => SuiteParams {
                cutoffs: vec![12],
                p: vec![4.0, 2.0, 3.0],
                q: vec![2.0, 4.0, 3.0],
                ..base
            },
            // (p, q) = (4, 8/3) lies on 1/q = n/2(1/2 − 1/p) for n = 3 with q ≤ p
            Suite::CorollaryL2 => SuiteParams {
                dimension: 3,
                cutoffs: vec![8, 16],
                p: vec![4.0],
                q: vec![8.0 / 3.0],
                ..base
            },
            Suite::LemmaT1 => SuiteParams { cutoffs: vec![8, 16], p: vec![3.0], q: vec![4.0], ..base },
            Suite::MehlerOracle => SuiteParams {
                cutoffs: vec![60],
                times: vec![0.25, 0.5, 1.0, 2.0],
                trials: 0,
                ..base
            },
            Suite::TlEmbeddings => SuiteParams {
                p: vec![1.5, 2.0, 4.0, inf],
                q: vec![1.0, 2.0, 4.0, inf],
                r: Some(0.25),
                ..base
            },
            Suite::PartialSums => SuiteParams { p: vec![1.5, 4.0], q: vec![1.0, 2.0, inf], ..base },
        }
    }

    /// The parameters as recorded in a report.
    pub(crate) fn describe(&self, suite: Suite) -> BTreeMap<String, String> {
        let list = |v: &[f64]| v.iter().map(|&x| format_exponent(x)).collect::<Vec<_>>().join(",");
        let ints = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut m = BTreeMap::new();
        m.insert("dimension".into(), self.dimension.to_string());
        m.insert("trials".into(), self.trials.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("family".into(), self.family.to_string());
        m.insert("real".into(), self.real.to_string());
        if suite != Suite::Wainger {
            m.insert("cutoffs".into(), ints(&self.cutoffs));
        }
        if !matches!(suite, Suite::Wainger | Suite::MehlerOracle) {
            m.insert("p".into(), list(&self.p));
        }
        if !matches!(suite, Suite::MehlerOracle | Suite::LpAnalogue | Suite::Dispersive) {
            m.insert("q".into(), list(&self.q));
        }
        if let Some(s) = self.s {
            m.insert("s".into(), format!("{s:?}"));
        }
        if let Some(r) = self.r {
            m.insert("r".into(), format_exponent(r));
        }
        if !self.times.is_empty() {
            m.insert("t".into(), list(&self.times));
        }
        if !self.degrees.is_empty() {
            m.insert("degrees".into(), ints(&self.degrees));
        }
        if !self.multipliers.is_empty() {
            let names: Vec<String> = self.multipliers.iter().map(|m| m.to_string()).collect();
            m.insert("multipliers".into(), names.join(","));
        }
        if let Some(t) = self.tolerance {
            m.insert("tolerance".into(), format!("{t:?}"));
        }
        m
    }
}

/// Runs one suite.
pub fn run(suite: Suite, params: &SuiteParams) -> Result<VerificationReport> {
    suites::run(suite, params)
}

/// One row of a Ĉ table.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub suite: Suite,
    pub p: f64,
    pub q: f64,
    pub s: Option<f64>,
    pub cutoff: usize,
    pub c_hat: f64,
    pub stable: bool,
}

/// Runs an empirical suite once per (p, q) pair of the exponent grid and
/// tabulates Ĉ by cutoff.
pub fn sweep(suite: Suite, params: &SuiteParams) -> Result<Vec<SweepRow>> {
    if !suite.is_empirical() {
        return Err(Error::invalid(format!("`{suite}` has no empirical constant to sweep")));
    }
    let qs: Vec<f64> = if suite == Suite::LpAnalogue || suite == Suite::Dispersive {
        vec![2.0]
    } else {
        params.q.clone()
    };
    if params.p.is_empty() || qs.is_empty() || params.cutoffs.is_empty() && suite != Suite::Wainger {
        return Err(Error::invalid("the exponent grid is empty"));
    }
    let mut rows = Vec::new();
    for &p in &params.p {
        for &q in &qs {
            let single = SuiteParams {
                p: vec![p],
                q: vec![q],
                ..params.clone()
            };
            let report = run(suite, &single)?;
            let stable = report.pass;
            for (&cutoff, &c_hat) in &report.aggregate.c_hat_by_cutoff {
                rows.push(SweepRow {
                    suite,
                    p,
                    q,
                    s: params.s,
                    cutoff,
                    c_hat,
                    stable,
                });
            }
        }
    }
    Ok(rows)
}

/// CSV rendering of a sweep.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("suite,p,q,s,cutoff,c_hat,stable\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:e},{}\n",
            r.suite,
            format_exponent(r.p),
            format_exponent(r.q),
            r.s.map(|s| format!("{s:?}")).unwrap_or_default(),
            r.cutoff,
            r.c_hat,
            r.stable
        ));
    }
    out
}
