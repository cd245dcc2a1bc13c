use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HeinzError, Result};
use crate::linalg::Field;
use crate::verdict::Tolerances;

pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Zhan,
    Theorem1,
    Corollary1,
    Tao,
    AgmChain,
    ProofChain,
    Theorem2,
    Counterexample,
    Search,
    All,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 10] = [
        ("zhan", Suite::Zhan),
        ("theorem1", Suite::Theorem1),
        ("corollary1", Suite::Corollary1),
        ("tao", Suite::Tao),
        ("agm_chain", Suite::AgmChain),
        ("proof_chain", Suite::ProofChain),
        ("theorem2", Suite::Theorem2),
        ("counterexample", Suite::Counterexample),
        ("search", Suite::Search),
        ("all", Suite::All),
    ];

    /// Suites run by `all`; `search` is open-ended and only runs on request.
    pub const ALL: [Suite; 8] = [
        Suite::Zhan,
        Suite::Theorem1,
        Suite::Corollary1,
        Suite::Tao,
        Suite::AgmChain,
        Suite::ProofChain,
        Suite::Theorem2,
        Suite::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES
            .iter()
            .find(|(_, s)| *s == self)
            .map(|(n, _)| *n)
            .unwrap_or("?")
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HeinzError;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, suite)| *suite)
            .ok_or_else(|| HeinzError::Config(format!("unknown suite {s:?}")))
    }
}

/// Options used only by the `search` suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchOptions {
    /// Rank of both matrices; full rank when absent.
    pub rank: Option<usize>,
    pub j_max: Option<usize>,
    pub refine_steps: usize,
    pub inject_reference: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            rank: None,
            j_max: None,
            refine_steps: 30,
            inject_reference: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub nu_grid_points: usize,
    pub tolerances: Tolerances,
    pub field: Field,
    pub search: SearchOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            dims: vec![2, 3, 4],
            trials: 100,
            seed: 0,
            nu_grid_points: 21,
            tolerances: Tolerances::default(),
            field: Field::Complex,
            search: SearchOptions::default(),
            output_path: None,
        }
    }
}

impl CampaignConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HeinzError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HeinzError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HeinzError::Config(m));
        if self.dims.is_empty() {
            return bad("dims must not be empty".into());
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d > MAX_DIM) {
            return bad(format!("dimension {d} outside [1, {MAX_DIM}]"));
        }
        if self.nu_grid_points == 0 {
            return bad("nu_grid_points must be positive".into());
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("loewner_rel", t.loewner_rel),
            ("equality_abs", t.equality_abs),
            ("quadrature_rel", t.quadrature_rel),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("tolerance {name} = {v} must be finite and non-negative"));
            }
        }
        if let Some(rank) = self.search.rank {
            if let Some(&d) = self.dims.iter().find(|&&d| rank == 0 || rank > d) {
                return bad(format!("search rank {rank} outside [1, {d}]"));
            }
        }
        if self.search.j_max == Some(0) {
            return bad("search j_max must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_json() {
        let cfg = CampaignConfig::from_json(r#"{"suite": "zhan", "dims": [3]}"#).unwrap();
        assert_eq!(cfg.suite, Suite::Zhan);
        assert_eq!(cfg.nu_grid_points, 21);
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(CampaignConfig::from_json(r#"{"suite": "nope"}"#).is_err());
        assert!(CampaignConfig::from_json(r#"{"dims": [65]}"#).is_err());
        assert!(CampaignConfig::from_json(r#"{"dims": []}"#).is_err());
        assert!(CampaignConfig::from_json(r#"{"trails": 3}"#).is_err());
        assert!(CampaignConfig::from_json("{").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for (name, suite) in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap(), suite);
            assert_eq!(suite.to_string(), name);
        }
    }
}
