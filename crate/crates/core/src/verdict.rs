//! Verdict types shared by all checkers.
//!
//! Every check reduces to a signed `slack` and a `scale`: it passes iff
//! `slack >= -tolerance_rel * scale`. For an inequality the slack is the
//! margin in the direction that should be non-negative; for an identity it is
//! minus the residual; for a Loewner test it is the smallest eigenvalue of the
//! gap.

use serde::{Deserialize, Serialize};

use crate::linalg::{GeneralMatrix, LoewnerVerdict};

/// Default tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Loewner and singular value comparisons, relative to the problem scale.
    pub loewner_rel: f64,
    /// Matrix identities, relative to `1 + max |entry|`.
    pub equality_abs: f64,
    /// Integral representation vs spectral evaluation.
    pub quadrature_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            loewner_rel: 1e-9,
            equality_abs: 1e-12,
            quadrature_rel: 1e-6,
        }
    }
}

/// One `j`-indexed comparison (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexComparison {
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// A family of comparisons `lhs_j (≤ | ≥) rhs_j` for `j = 1..`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexedVerdict {
    pub comparisons: Vec<IndexComparison>,
    pub scale: f64,
    pub tolerance_rel: f64,
    pub holds: bool,
}

impl IndexedVerdict {
    /// `lhs_j ≤ rhs_j` for every common index.
    pub fn leq(lhs: &[f64], rhs: &[f64], tolerance_rel: f64, scale: f64) -> Self {
        Self::build(lhs, rhs, tolerance_rel, scale, |l, r| r - l)
    }

    /// `lhs_j ≥ rhs_j` for every common index.
    pub fn geq(lhs: &[f64], rhs: &[f64], tolerance_rel: f64, scale: f64) -> Self {
        Self::build(lhs, rhs, tolerance_rel, scale, |l, r| l - r)
    }

    fn build(lhs: &[f64], rhs: &[f64], tolerance_rel: f64, scale: f64, slack: impl Fn(f64, f64) -> f64) -> Self {
        let comparisons: Vec<IndexComparison> = lhs
            .iter()
            .zip(rhs)
            .enumerate()
            .map(|(i, (&l, &r))| IndexComparison {
                j: i + 1,
                lhs: l,
                rhs: r,
                slack: slack(l, r),
            })
            .collect();
        let threshold = tolerance_rel * scale;
        let holds = comparisons.iter().all(|c| c.slack >= -threshold);
        Self {
            comparisons,
            scale,
            tolerance_rel,
            holds,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.tolerance_rel * self.scale
    }

    /// Comparison with the smallest slack.
    pub fn worst(&self) -> Option<&IndexComparison> {
        self.comparisons.iter().min_by(|a, b| a.slack.total_cmp(&b.slack))
    }

    pub fn comparison(&self, j: usize) -> Option<&IndexComparison> {
        self.comparisons.get(j.checked_sub(1)?)
    }

    pub fn outcome(&self, name: impl Into<String>) -> CheckOutcome {
        let worst = self.worst();
        CheckOutcome {
            name: name.into(),
            holds: self.holds,
            slack: worst.map_or(0.0, |c| c.slack),
            scale: self.scale,
            tolerance_rel: self.tolerance_rel,
            witness_index: worst.map(|c| c.j),
            applicable: true,
        }
    }
}

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub holds: bool,
    pub slack: f64,
    pub scale: f64,
    pub tolerance_rel: f64,
    /// 1-based index of the worst comparison, when the check is indexed.
    pub witness_index: Option<usize>,
    /// False when a precondition was not met and the check was skipped.
    pub applicable: bool,
}

impl CheckOutcome {
    pub fn from_loewner(name: impl Into<String>, v: &LoewnerVerdict, tolerance_rel: f64) -> Self {
        let scale = if tolerance_rel > 0.0 {
            v.threshold / tolerance_rel
        } else {
            1.0
        };
        Self {
            name: name.into(),
            holds: v.holds,
            slack: v.min_eig_of_gap,
            scale,
            tolerance_rel,
            witness_index: None,
            applicable: true,
        }
    }

    /// Identity `lhs == rhs`, residual measured entrywise against
    /// `tolerance * (1 + max |entry|)`.
    pub fn equality(name: impl Into<String>, lhs: &GeneralMatrix, rhs: &GeneralMatrix, tolerance: f64) -> Self {
        let residual = lhs.max_abs_diff(rhs);
        let scale = 1.0 + lhs.max_abs().max(rhs.max_abs());
        Self {
            name: name.into(),
            holds: residual <= tolerance * scale,
            slack: -residual,
            scale,
            tolerance_rel: tolerance,
            witness_index: None,
            applicable: true,
        }
    }

    /// Identity between two real vectors, compared elementwise.
    pub fn vector_equality(name: impl Into<String>, lhs: &[f64], rhs: &[f64], tolerance: f64) -> Self {
        let (mut residual, mut at) = (0.0_f64, None);
        for (i, (l, r)) in lhs.iter().zip(rhs).enumerate() {
            let d = (l - r).abs();
            if d > residual {
                residual = d;
                at = Some(i + 1);
            }
        }
        let magnitude = lhs.iter().chain(rhs).map(|v| v.abs()).fold(0.0, f64::max);
        let scale = 1.0 + magnitude;
        Self {
            name: name.into(),
            holds: lhs.len() == rhs.len() && residual <= tolerance * scale,
            slack: -residual,
            scale,
            tolerance_rel: tolerance,
            witness_index: at,
            applicable: true,
        }
    }

    /// A skipped check; counts as passing.
    pub fn not_applicable(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            holds: true,
            slack: 0.0,
            scale: 1.0,
            tolerance_rel: 0.0,
            witness_index: None,
            applicable: false,
        }
    }

    /// A boolean claim with a signed margin (positive means it holds).
    pub fn claim(name: impl Into<String>, margin: f64, scale: f64) -> Self {
        Self {
            name: name.into(),
            holds: margin > 0.0,
            slack: margin,
            scale,
            tolerance_rel: 0.0,
            witness_index: None,
            applicable: true,
        }
    }

    pub fn relative_slack(&self) -> f64 {
        if self.scale > 0.0 {
            self.slack / self.scale
        } else {
            self.slack
        }
    }
}
