use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use super::config::CampaignConfig;
use crate::inequality::search::{write_violations_csv, ViolationRecord};
use crate::verdict::CheckOutcome;

/// Aggregate of one named check over all trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub suite: String,
    pub name: String,
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    /// Smallest `slack / scale` over applicable evaluations.
    pub worst_relative_slack: f64,
    /// Trial seed at which the worst slack occurred.
    pub worst_seed: Option<u64>,
}

impl CheckSummary {
    fn new(suite: &str, name: &str) -> Self {
        Self {
            suite: suite.to_owned(),
            name: name.to_owned(),
            total: 0,
            pass: 0,
            fail: 0,
            not_applicable: 0,
            worst_relative_slack: f64::INFINITY,
            worst_seed: None,
        }
    }

    fn record(&mut self, outcome: &CheckOutcome, seed: u64) {
        self.total += 1;
        if outcome.holds {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
        if !outcome.applicable {
            self.not_applicable += 1;
            return;
        }
        let rel = outcome.relative_slack();
        if rel < self.worst_relative_slack || self.worst_seed.is_none() {
            self.worst_relative_slack = rel;
            self.worst_seed = Some(seed);
        }
    }

    fn finish(&mut self) {
        if !self.worst_relative_slack.is_finite() {
            self.worst_relative_slack = 0.0;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: CampaignConfig,
    pub checks: Vec<CheckSummary>,
    pub violations: Vec<ViolationRecord>,
    /// Edge of the counterexample window, when that suite ran.
    pub threshold: Option<f64>,
    /// Kept out of the serialized report so identical configs give identical
    /// bytes.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn new(config: &CampaignConfig) -> Self {
        Self {
            suite: config.suite.to_string(),
            config: config.clone(),
            checks: Vec::new(),
            violations: Vec::new(),
            threshold: None,
            wall_time: Duration::ZERO,
        }
    }

    /// Folds per-trial outcomes in trial order.
    pub fn absorb(&mut self, suite: &str, trials: &[(u64, Vec<CheckOutcome>)]) {
        for (seed, outcomes) in trials {
            for o in outcomes {
                let idx = match self.checks.iter().position(|c| c.suite == suite && c.name == o.name) {
                    Some(i) => i,
                    None => {
                        self.checks.push(CheckSummary::new(suite, &o.name));
                        self.checks.len() - 1
                    }
                };
                self.checks[idx].record(o, *seed);
            }
        }
        for c in &mut self.checks {
            c.finish();
        }
    }

    pub fn total(&self) -> usize {
        self.checks.iter().map(|c| c.total).sum()
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.fail).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn write_checks_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "suite,check,total,pass,fail,not_applicable,worst_relative_slack,worst_seed"
        )?;
        for c in &self.checks {
            writeln!(
                out,
                "{},{},{},{},{},{},{:.16e},{}",
                c.suite,
                c.name,
                c.total,
                c.pass,
                c.fail,
                c.not_applicable,
                c.worst_relative_slack,
                c.worst_seed.map(|s| s.to_string()).unwrap_or_default()
            )?;
        }
        Ok(())
    }

    pub fn write_violations_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        write_violations_csv(&self.violations, out)
    }
}
