use serde::{Serialize, Serializer};

use crate::Rational;

/// Three-valued answer to an equality or membership question.
///
/// Exact answers come from polynomial reduction or linear solves; numeric
/// answers from evaluation at seeded zero-set samples. Non-membership found
/// by a bounded cofactor search is stamped with the bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    ProvedEqual,
    ProvedUnequal {
        /// Exact zero-set point where the difference is nonzero, when one was found.
        #[serde(serialize_with = "ser_rationals")]
        witness: Option<Vec<Rational>>,
    },
    /// No cofactors of degree at most `degree` exist.
    NotMemberUpToDegree { degree: u32 },
    NumericallyEqual {
        samples: usize,
        max_abs_diff: f64,
        tolerance: f64,
        seed: u64,
    },
    NumericallyUnequal {
        witness: Vec<f64>,
        value: f64,
        seed: u64,
    },
    Unknown { reason: String },
}

fn ser_rationals<S: Serializer>(w: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match w {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(|q| q.to_string())),
    }
}

impl Verdict {
    /// Equal (or member), exactly or on all samples.
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::ProvedEqual | Verdict::NumericallyEqual { .. })
    }

    /// Unequal or non-member, by any of the refuting verdicts.
    pub fn refuted(&self) -> bool {
        matches!(
            self,
            Verdict::ProvedUnequal { .. }
                | Verdict::NotMemberUpToDegree { .. }
                | Verdict::NumericallyUnequal { .. }
        )
    }

    pub fn is_proved_equal(&self) -> bool {
        matches!(self, Verdict::ProvedEqual)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ProvedEqual => "ProvedEqual",
            Verdict::ProvedUnequal { .. } => "ProvedUnequal",
            Verdict::NotMemberUpToDegree { .. } => "NotMemberUpToDegree",
            Verdict::NumericallyEqual { .. } => "NumericallyEqual",
            Verdict::NumericallyUnequal { .. } => "NumericallyUnequal",
            Verdict::Unknown { .. } => "Unknown",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::ProvedUnequal { witness: Some(w) } => {
                let pts: Vec<String> = w.iter().map(|q| q.to_string()).collect();
                write!(f, "ProvedUnequal at ({})", pts.join(", "))
            }
            Verdict::NotMemberUpToDegree { degree } => write!(f, "NotMemberUpToDegree({degree})"),
            Verdict::NumericallyEqual { samples, max_abs_diff, .. } => {
                write!(f, "NumericallyEqual ({samples} samples, max |diff| {max_abs_diff:.3e})")
            }
            Verdict::NumericallyUnequal { witness, value, .. } => {
                write!(f, "NumericallyUnequal at {witness:?} (diff {value:.3e})")
            }
            Verdict::Unknown { reason } => write!(f, "Unknown: {reason}"),
            other => f.write_str(other.label()),
        }
    }
}
