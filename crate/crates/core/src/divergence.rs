//! Rank-turbulence divergence.
//!
//! For two rankings over a union lexicon the divergence is
//!
//! ```text
//! D(R1 || R2) = 1/N * (a+1)/a * sum_t | r_t1^-a - r_t2^-a |^(1/(a+1))
//! ```
//!
//! where `N` is the value the sum would take if the two systems shared no
//! types, so that `0 <= D <= 1`. The per-type summand (prefactor included)
//! is what [`rtd_element`] returns.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, round_significant};
use crate::ranking::{Exclusivity, MergedLexicon};
use crate::Label;

/// The divergence's tuning parameter, including both limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Zero,
    /// Strictly between zero and infinity.
    Finite(f64),
    Infinity,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Alpha> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::Alpha {
                text: value.to_string(),
                message: "alpha must be a non-negative number".into(),
            });
        }
        Ok(if value == 0.0 {
            Alpha::Zero
        } else if value == f64::INFINITY {
            Alpha::Infinity
        } else {
            Alpha::Finite(value)
        })
    }

    /// Accepts decimals (`0.17`, `1e3`), fractions (`1/3`) and `inf`.
    pub fn parse(text: &str) -> Result<Alpha> {
        let t = text.trim();
        let err = |message: &str| Error::Alpha {
            text: text.to_string(),
            message: message.to_string(),
        };
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "inf" | "infinity" | "∞") {
            return Ok(Alpha::Infinity);
        }
        let number = |s: &str| -> Result<f64> {
            let s = s.trim();
            // Rust's float parser also takes "nan" and "inf"; only plain
            // numerals are allowed here.
            if s.is_empty()
                || s.chars()
                    .any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
            {
                return Err(err("expected a number, a fraction p/q, or inf"));
            }
            s.parse::<f64>()
                .map_err(|_| err("expected a number, a fraction p/q, or inf"))
        };
        let value = match lower.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (number(p)?, number(q)?);
                if q == 0.0 {
                    return Err(err("zero denominator"));
                }
                p / q
            }
            None => number(&lower)?,
        };
        if !value.is_finite() {
            return Err(err("alpha overflows; use inf for the limit"));
        }
        Alpha::new(value).map_err(|_| err("alpha must be non-negative"))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Alpha::Zero => 0.0,
            Alpha::Finite(a) => a,
            Alpha::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Zero => f.write_str("0"),
            Alpha::Finite(a) => write!(f, "{}", round_significant(*a, 6)),
            Alpha::Infinity => f.write_str("∞"),
        }
    }
}

/// Per-type divergence term for ranks `r1` and `r2` (both at least 1).
///
/// Finite alpha is evaluated in log space with the larger power factored
/// out, which avoids overflow for large alpha and cancellation for small
/// alpha. The limits are `|ln(r1/r2)|` at zero and `1/min(r1, r2)` (zero on
/// ties) at infinity.
pub fn rtd_element(r1: f64, r2: f64, alpha: Alpha) -> f64 {
    if r1 == r2 {
        return 0.0;
    }
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    match alpha {
        Alpha::Zero => (hi / lo).ln(),
        Alpha::Infinity => 1.0 / lo,
        Alpha::Finite(a) => {
            // |lo^-a - hi^-a| = lo^-a * (1 - (lo/hi)^a)
            let gap = -(-a * (hi / lo).ln()).exp_m1();
            let log_diff = -a * lo.ln() + gap.ln();
            (a + 1.0) / a * (log_diff / (a + 1.0)).exp()
        }
    }
}

/// Which system ranks a type higher (smaller rank number).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    #[serde(rename = "system_1")]
    System1,
    #[serde(rename = "system_2")]
    System2,
    #[serde(rename = "tie")]
    Tie,
}

impl Side {
    pub fn of(r1: f64, r2: f64) -> Side {
        if r1 < r2 {
            Side::System1
        } else if r1 > r2 {
            Side::System2
        } else {
            Side::Tie
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub label: Label,
    /// Term before normalization, prefactor included.
    pub element: f64,
    /// `element` over the sum of all elements; zero when that sum is zero.
    pub normalized_share: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceResult {
    pub alpha: Alpha,
    pub total: f64,
    pub normalization: f64,
    /// One per lexicon record, in the lexicon's label order.
    pub contributions: Vec<Contribution>,
}

/// Sum of elements for the hypothetical where the two systems share no
/// types: each of system 1's types sits against system 2's tied last rank,
/// and vice versa.
pub fn normalization(lex: &MergedLexicon, alpha: Alpha) -> f64 {
    let last_2 = lex.disjoint_rank_2();
    let last_1 = lex.disjoint_rank_1();
    let side_1: Vec<f64> = lex
        .records()
        .par_iter()
        .filter(|r| r.exclusivity != Exclusivity::Only2)
        .map(|r| rtd_element(r.rank_1, last_2, alpha))
        .collect();
    let sum_1 = pairwise_sum(&side_1);
    drop(side_1);
    let side_2: Vec<f64> = lex
        .records()
        .par_iter()
        .filter(|r| r.exclusivity != Exclusivity::Only1)
        .map(|r| rtd_element(last_1, r.rank_2, alpha))
        .collect();
    let norm = sum_1 + pairwise_sum(&side_2);
    assert!(norm > 0.0, "normalization must be positive, got {norm}");
    norm
}

/// Total divergence and per-type contributions.
pub fn rtd_total(lex: &MergedLexicon, alpha: Alpha) -> DivergenceResult {
    let elements: Vec<f64> = lex
        .records()
        .par_iter()
        .map(|r| rtd_element(r.rank_1, r.rank_2, alpha))
        .collect();
    let sum = pairwise_sum(&elements);
    let norm = normalization(lex, alpha);
    let contributions = lex
        .records()
        .par_iter()
        .zip(elements.par_iter())
        .map(|(r, &element)| Contribution {
            label: r.label.clone(),
            element,
            normalized_share: if sum > 0.0 { element / sum } else { 0.0 },
            side: Side::of(r.rank_1, r.rank_2),
        })
        .collect();
    DivergenceResult {
        alpha,
        total: sum / norm,
        normalization: norm,
        contributions,
    }
}

/// One result per alpha, each computed independently.
pub fn alpha_sweep(lex: &MergedLexicon, alphas: &[Alpha]) -> Vec<DivergenceResult> {
    alphas.iter().map(|&a| rtd_total(lex, a)).collect()
}
