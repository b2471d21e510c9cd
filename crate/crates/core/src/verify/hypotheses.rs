//! Hypothesis checks. Every violation carries the constraint in its canonical form.

use crate::error::{Error, Result};
use crate::norms::{conjugate, format_exponent};

pub const P_BETWEEN_ONE_AND_TWO: &str = "1 < p < 2";
pub const MAIN_WINDOW: &str = "|1/2 − 1/p| < 1/(2n)";
pub const DIMENSION_ABOVE_TWO: &str = "n > 2";
pub const Q_AT_LEAST_TWO: &str = "2 ≤ q < ∞";
pub const SMOOTHNESS_THRESHOLD: &str = "s ≥ s_q = 1/2 − 1/q";
pub const LPLQ_WINDOW: &str = "|1/p − 1/2| < 1/(nq)";
pub const Q_BELOW_CONJUGATE: &str = "1 ≤ q ≤ p′";
pub const ADMISSIBLE_LINE: &str = "2/q = n(1/2 − 1/p)";
pub const COROLLARY_LINE: &str = "1/q = n/2(1/2 − 1/p)";
pub const Q_BELOW_P: &str = "1 < q ≤ p < ∞";
pub const COROLLARY_RANGE: &str = "2 ≤ p < 2n/(n−2)";
pub const WAINGER_RANGE: &str = "1 < r ≤ q < ∞";
pub const TIME_WINDOW: &str = "0 < t ≤ π/4";
pub const POSITIVE_EXPONENT: &str = "0 < p ≤ ∞";

/// Absolute slack used when comparing exponents against a line, and the
/// margin by which a strict inequality must hold.
const LINE_SLACK: f64 = 1e-12;

fn require(ok: bool, constraint: &'static str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::hypothesis(constraint, detail()))
    }
}

fn fmt(x: f64) -> String {
    format_exponent(x)
}

pub fn dimension_above_two(n: usize) -> Result<()> {
    require(n > 2, DIMENSION_ABOVE_TWO, || format!("n = {n}"))
}

pub fn p_between_one_and_two(p: f64) -> Result<()> {
    require(p > 1.0 && p < 2.0, P_BETWEEN_ONE_AND_TWO, || format!("p = {}", fmt(p)))
}

pub fn main_window(n: usize, p: f64) -> Result<()> {
    let gap = (0.5 - 1.0 / p).abs();
    require(gap < 0.5 / n as f64 - LINE_SLACK, MAIN_WINDOW, || {
        format!("n = {n}, p = {}: |1/2 − 1/p| = {gap:.6}", fmt(p))
    })
}

pub fn q_at_least_two(q: f64) -> Result<()> {
    require(q >= 2.0 && q.is_finite(), Q_AT_LEAST_TWO, || format!("q = {}", fmt(q)))
}

pub fn smoothness_threshold(s: f64, q: f64) -> Result<()> {
    let sq = 0.5 - 1.0 / q;
    require(s >= sq - LINE_SLACK, SMOOTHNESS_THRESHOLD, || {
        format!("s = {s}, q = {}: s_q = {sq:.6}", fmt(q))
    })
}

pub fn lplq_window(n: usize, p: f64, q: f64) -> Result<()> {
    let gap = (1.0 / p - 0.5).abs();
    require(gap < 1.0 / (n as f64 * q) - LINE_SLACK, LPLQ_WINDOW, || {
        format!("n = {n}, p = {}, q = {}: |1/p − 1/2| = {gap:.6}", fmt(p), fmt(q))
    })
}

pub fn q_below_conjugate(p: f64, q: f64) -> Result<()> {
    let pc = conjugate(p);
    require(q >= 1.0 && q <= pc, Q_BELOW_CONJUGATE, || {
        format!("q = {}, p′ = {}", fmt(q), fmt(pc))
    })
}

/// The Schrödinger-admissible line; q must be finite, so p = 2 is excluded.
pub fn admissible_line(n: usize, p: f64, q: f64) -> Result<()> {
    let ok = p > 2.0 && p.is_finite() && q.is_finite() && q > 0.0 && (2.0 / q - n as f64 * (0.5 - 1.0 / p)).abs() <= LINE_SLACK;
    require(ok, ADMISSIBLE_LINE, || {
        if p == 2.0 {
            "p = 2 forces q = ∞, which is outside the supported range".to_string()
        } else {
            format!("n = {n}, p = {}, q = {}", fmt(p), fmt(q))
        }
    })
}

pub fn corollary_line(n: usize, p: f64, q: f64) -> Result<()> {
    let ok = q.is_finite() && (1.0 / q - 0.5 * n as f64 * (0.5 - 1.0 / p)).abs() <= LINE_SLACK;
    require(ok, COROLLARY_LINE, || format!("n = {n}, p = {}, q = {}", fmt(p), fmt(q)))
}

pub fn q_below_p(p: f64, q: f64) -> Result<()> {
    require(q > 1.0 && q <= p && p.is_finite(), Q_BELOW_P, || {
        format!("p = {}, q = {}", fmt(p), fmt(q))
    })
}

/// 2 ≤ p ≤ ∞ for n = 1, 2 ≤ p < ∞ for n = 2, 2 ≤ p < 2n/(n−2) otherwise.
pub fn corollary_range(n: usize, p: f64) -> Result<()> {
    let ok = match n {
        1 => p >= 2.0,
        2 => p >= 2.0 && p.is_finite(),
        _ => p >= 2.0 && p < 2.0 * n as f64 / (n as f64 - 2.0) - LINE_SLACK,
    };
    require(ok, COROLLARY_RANGE, || format!("n = {n}, p = {}", fmt(p)))
}

pub fn wainger_range(r: f64, q: f64) -> Result<()> {
    require(r > 1.0 && r <= q && q.is_finite(), WAINGER_RANGE, || {
        format!("r = {}, q = {}", fmt(r), fmt(q))
    })
}

pub fn time_window(t: f64) -> Result<()> {
    require(t > 0.0 && t <= std::f64::consts::FRAC_PI_4 + LINE_SLACK, TIME_WINDOW, || {
        format!("t = {t}")
    })
}

pub fn positive_exponent(p: f64) -> Result<()> {
    require(p > 0.0, POSITIVE_EXPONENT, || format!("p = {}", fmt(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constraint(r: Result<()>) -> &'static str {
        match r {
            Err(Error::Hypothesis { constraint, .. }) => constraint,
            other => panic!("expected a hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn violations_name_their_constraint() {
        assert_eq!(constraint(main_window(3, 1.2)), MAIN_WINDOW);
        assert_eq!(constraint(main_window(3, 1.5)), MAIN_WINDOW, "boundary is excluded");
        assert_eq!(constraint(dimension_above_two(2)), DIMENSION_ABOVE_TWO);
        assert_eq!(constraint(p_between_one_and_two(2.0)), P_BETWEEN_ONE_AND_TWO);
        assert_eq!(constraint(admissible_line(1, 2.0, 4.0)), ADMISSIBLE_LINE);
        assert_eq!(constraint(smoothness_threshold(0.0, 4.0)), SMOOTHNESS_THRESHOLD);
        assert_eq!(constraint(corollary_range(3, 6.0)), COROLLARY_RANGE);
        assert_eq!(constraint(time_window(1.0)), TIME_WINDOW);
    }

    #[test]
    fn admissible_examples_pass() {
        main_window(3, 1.8).unwrap();
        admissible_line(1, 6.0, 6.0).unwrap();
        corollary_line(3, 3.0, 4.0).unwrap();
        corollary_range(3, 3.0).unwrap();
        corollary_range(1, f64::INFINITY).unwrap();
        lplq_window(3, 1.9, 2.0).unwrap();
        q_below_conjugate(1.9, 2.0).unwrap();
        smoothness_threshold(0.0, 2.0).unwrap();
        time_window(std::f64::consts::FRAC_PI_4).unwrap();
        wainger_range(2.0, 6.0).unwrap();
    }

    #[test]
    fn p_equal_two_is_rejected_on_the_admissible_line() {
        let err = admissible_line(1, 2.0, 1e300).unwrap_err();
        assert!(err.to_string().contains("p = 2"));
    }
}
