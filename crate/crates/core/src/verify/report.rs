use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ĉ(L_{i+1}) may exceed Ĉ(L_i) by at most this factor.
pub const STABILITY_FACTOR: f64 = 1.25;

/// One (trial, cutoff, exponent choice) evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub cutoff: usize,
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub ok: bool,
}

impl TrialRecord {
    /// Builds a record; a non-finite ratio is stored as 0 and marked failed.
    pub fn new(trial: usize, cutoff: usize, label: impl Into<String>, lhs: f64, rhs: f64, ok: impl FnOnce(f64) -> bool) -> Self {
        let ratio = lhs / rhs;
        let finite = lhs.is_finite() && rhs.is_finite() && ratio.is_finite();
        let clean = |v: f64| if v.is_finite() { v } else { 0.0 };
        TrialRecord {
            trial,
            cutoff,
            label: label.into(),
            lhs: clean(lhs),
            rhs: clean(rhs),
            ratio: clean(ratio),
            ok: finite && ok(ratio),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub max: f64,
    pub median: f64,
    /// Ĉ(L): the largest ratio observed at each cutoff.
    pub c_hat_by_cutoff: BTreeMap<usize, f64>,
}

impl Aggregate {
    pub fn of<'a>(records: impl IntoIterator<Item = &'a TrialRecord>) -> Self {
        let mut ratios = Vec::new();
        let mut c_hat = BTreeMap::new();
        for r in records {
            ratios.push(r.ratio);
            let e = c_hat.entry(r.cutoff).or_insert(r.ratio);
            *e = f64::max(*e, r.ratio);
        }
        ratios.sort_by(f64::total_cmp);
        let median = match ratios.len() {
            0 => 0.0,
            k if k % 2 == 1 => ratios[k / 2],
            k => 0.5 * (ratios[k / 2 - 1] + ratios[k / 2]),
        };
        Aggregate {
            max: ratios.last().copied().unwrap_or(0.0),
            median,
            c_hat_by_cutoff: c_hat,
        }
    }
}

/// Result of the cutoff-stability protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct Stability {
    pub stable: bool,
    pub notes: Vec<String>,
}

/// Checks Ĉ(L_{i+1}) ≤ 1.25·Ĉ(L_i) for consecutive cutoffs; needs at least two.
pub fn stability(c_hat: &BTreeMap<usize, f64>) -> Stability {
    if c_hat.len() < 2 {
        return Stability {
            stable: false,
            notes: vec!["stability needs at least two cutoffs".to_string()],
        };
    }
    let mut notes = Vec::new();
    let mut stable = true;
    let entries: Vec<(usize, f64)> = c_hat.iter().map(|(&l, &c)| (l, c)).collect();
    for pair in entries.windows(2) {
        let ((l0, c0), (l1, c1)) = (pair[0], pair[1]);
        let growth = c1 / c0;
        let ok = c1 <= STABILITY_FACTOR * c0;
        stable &= ok;
        notes.push(format!(
            "C({l1})/C({l0}) = {growth:.6} ({})",
            if ok { "stable" } else { "unstable" }
        ));
    }
    Stability { stable, notes }
}

/// The outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    pub pass: bool,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(format!("cannot encode report: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("cannot decode report: {e}")))
    }

    /// One row per record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,trial,cutoff,label,lhs,rhs,ratio,ok\n");
        for r in &self.trials {
            let _ = writeln!(
                out,
                "{},{},{},{},{:e},{:e},{:e},{}",
                self.suite,
                r.trial,
                r.cutoff,
                csv_field(&r.label),
                r.lhs,
                r.rhs,
                r.ratio,
                r.ok
            );
        }
        out
    }

    /// One line suitable for a terminal.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} records, max ratio {:.6e}, median {:.6e})",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.trials.len(),
            self.aggregate.max,
            self.aggregate.median
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(trial: usize, cutoff: usize, ratio: f64) -> TrialRecord {
        TrialRecord::new(trial, cutoff, "x", ratio, 1.0, |_| true)
    }

    #[test]
    fn aggregate_statistics() {
        let recs = [record(0, 8, 1.0), record(1, 8, 3.0), record(0, 16, 2.0), record(1, 16, 4.0)];
        let agg = Aggregate::of(&recs);
        assert_eq!(agg.max, 4.0);
        assert_eq!(agg.median, 2.5);
        assert_eq!(agg.c_hat_by_cutoff[&8], 3.0);
        assert_eq!(agg.c_hat_by_cutoff[&16], 4.0);
    }

    #[test]
    fn stability_protocol() {
        let grow = |a: f64, b: f64| BTreeMap::from([(8, a), (16, b)]);
        assert!(stability(&grow(1.0, 1.2)).stable);
        assert!(!stability(&grow(1.0, 1.3)).stable);
        assert!(!stability(&BTreeMap::from([(8, 1.0)])).stable);
    }

    #[test]
    fn non_finite_ratios_fail_cleanly() {
        let r = TrialRecord::new(0, 4, "zero", 1.0, 0.0, |_| true);
        assert!(!r.ok);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let trials = vec![record(0, 8, 0.1 + 0.2), record(1, 8, std::f64::consts::PI)];
        let report = VerificationReport {
            suite: "demo".into(),
            params: BTreeMap::from([("p".to_string(), "1.8".to_string())]),
            aggregate: Aggregate::of(&trials),
            trials,
            pass: true,
            tolerance: 1e-6,
            notes: vec!["note".into()],
        };
        let back = VerificationReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("suite,trial,cutoff"));
    }
}
