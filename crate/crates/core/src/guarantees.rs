//! Asymptotic approximation and space guarantees of each oracle, as data.
//!
//! The formulas carry no constants. Tests scale them by budgets of their own
//! choosing.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RatioFormula {
    /// `m / k`
    MOverK,
    /// `sqrt(n / k)`
    SqrtNOverK,
    /// `m^eps / sqrt(k)`
    MEpsOverSqrtK,
    /// `min(m^eps, sqrt(n)) / sqrt(k)`
    MinMEpsSqrtNOverSqrtK,
    /// `min(m/k, sqrt(n/k))`
    MinMOverKSqrtNOverK,
    /// `min(m^(eps - d1), n^(1/2 - d2)) / (k sqrt(k))`, a lower bound for
    /// every deterministic oracle in the given space. Documentation only.
    DetLowerBound { delta1: f64, delta2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceFormula {
    /// `n`
    Linear,
    /// `n * m^(1 - 2 eps)`
    NM1Minus2Eps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nature {
    DeterministicUpper,
    RandomizedUpper,
    DeterministicLower,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GuaranteeRow {
    pub oracle: &'static str,
    pub ratio: RatioFormula,
    pub space: SpaceFormula,
    pub nature: Nature,
}

pub const TABLE: &[GuaranteeRow] = &[
    GuaranteeRow {
        oracle: "simple",
        ratio: RatioFormula::MOverK,
        space: SpaceFormula::Linear,
        nature: Nature::DeterministicUpper,
    },
    GuaranteeRow {
        oracle: "greedy-partition",
        ratio: RatioFormula::SqrtNOverK,
        space: SpaceFormula::Linear,
        nature: Nature::DeterministicUpper,
    },
    GuaranteeRow {
        oracle: "simple + greedy-partition",
        ratio: RatioFormula::MinMOverKSqrtNOverK,
        space: SpaceFormula::Linear,
        nature: Nature::DeterministicUpper,
    },
    GuaranteeRow {
        oracle: "sparse",
        ratio: RatioFormula::MEpsOverSqrtK,
        space: SpaceFormula::NM1Minus2Eps,
        nature: Nature::RandomizedUpper,
    },
    GuaranteeRow {
        oracle: "combined",
        ratio: RatioFormula::MinMEpsSqrtNOverSqrtK,
        space: SpaceFormula::NM1Minus2Eps,
        nature: Nature::RandomizedUpper,
    },
    GuaranteeRow {
        oracle: "any deterministic",
        ratio: RatioFormula::DetLowerBound {
            delta1: 0.0,
            delta2: 0.0,
        },
        space: SpaceFormula::NM1Minus2Eps,
        nature: Nature::DeterministicLower,
    },
];

/// The row for an oracle name, if it has an upper bound listed.
pub fn row_for(oracle: &str) -> Option<&'static GuaranteeRow> {
    TABLE.iter().find(|r| r.oracle == oracle)
}

pub fn evaluate_ratio(f: RatioFormula, n: usize, m: usize, k: usize, eps: f64) -> f64 {
    let (n, m, k) = (n as f64, m as f64, k as f64);
    match f {
        RatioFormula::MOverK => m / k,
        RatioFormula::SqrtNOverK => (n / k).sqrt(),
        RatioFormula::MEpsOverSqrtK => m.powf(eps) / k.sqrt(),
        RatioFormula::MinMEpsSqrtNOverSqrtK => m.powf(eps).min(n.sqrt()) / k.sqrt(),
        RatioFormula::MinMOverKSqrtNOverK => (m / k).min((n / k).sqrt()),
        RatioFormula::DetLowerBound { delta1, delta2 } => {
            m.powf(eps - delta1).min(n.powf(0.5 - delta2)) / (k * k.sqrt())
        }
    }
}

pub fn evaluate_space(f: SpaceFormula, n: usize, m: usize, eps: f64) -> f64 {
    match f {
        SpaceFormula::Linear => n as f64,
        SpaceFormula::NM1Minus2Eps => n as f64 * (m as f64).powf(1.0 - 2.0 * eps),
    }
}

/// The row's ratio formula at concrete dimensions.
pub fn evaluate_guarantee(row: &GuaranteeRow, n: usize, m: usize, k: usize, epsilon: f64) -> f64 {
    evaluate_ratio(row.ratio, n, m, k, epsilon)
}

impl fmt::Display for RatioFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioFormula::MOverK => f.write_str("m/k"),
            RatioFormula::SqrtNOverK => f.write_str("sqrt(n/k)"),
            RatioFormula::MEpsOverSqrtK => f.write_str("m^eps/sqrt(k)"),
            RatioFormula::MinMEpsSqrtNOverSqrtK => f.write_str("min(m^eps, sqrt(n))/sqrt(k)"),
            RatioFormula::MinMOverKSqrtNOverK => f.write_str("min(m/k, sqrt(n/k))"),
            RatioFormula::DetLowerBound { .. } => {
                f.write_str("min(m^(eps-d1), n^(1/2-d2))/(k sqrt(k))")
            }
        }
    }
}

impl fmt::Display for SpaceFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceFormula::Linear => f.write_str("n"),
            SpaceFormula::NM1Minus2Eps => f.write_str("n m^(1-2eps)"),
        }
    }
}

impl fmt::Display for Nature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Nature::DeterministicUpper => "det. upper",
            Nature::RandomizedUpper => "rand. upper",
            Nature::DeterministicLower => "det. lower",
        })
    }
}

/// Markdown rendering of [`TABLE`].
pub fn render_markdown() -> String {
    let mut out =
        String::from("| oracle | ratio | space (bits, up to logs) | bound |\n|---|---|---|---|\n");
    for r in TABLE {
        out.push_str(&format!(
            "| {} | O({}) | {} | {} |\n",
            r.oracle, r.ratio, r.space, r.nature
        ));
    }
    out
}
