use std::time::Instant;

use log::info;
use rand::Rng;
use rayon::prelude::*;

use super::config::{CampaignConfig, Suite};
use super::ensemble::{random_affine_spec, random_atom_spec, trial_plan, Trial};
use super::report::SuiteReport;
use crate::error::Result;
use crate::inequality::block::{block_form, substitution_check, tao_check, theorem2_steps};
use crate::inequality::{
    agm_chain_check, reference_counterexample, reference_pair, violation_search, zhan_check, BlockPsd, BlockVariant,
    Branch, GapFunction, NuGrid, SearchConfig,
};
use crate::linalg::random::gaussian_matrix;
use crate::linalg::RandomPsdConfig;
use crate::monotone::checks::{corollary1_with_midpoint, midpoint, proof_chain_check, theorem1_gap_with_midpoint};
use crate::monotone::MonotoneFunctionSpec;
use crate::verdict::{CheckOutcome, Tolerances};

/// `r ∈ {0.1, …, 0.9}`.
pub const POWER_EXPONENTS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
/// Resolvent parameters for the proof-chain suite.
pub const PROOF_CHAIN_LAMBDAS: [f64; 5] = [1e-2, 1e-1, 1.0, 1e1, 1e2];

type TrialOutcomes = Vec<(u64, Vec<CheckOutcome>)>;

fn per_trial<F>(cfg: &CampaignConfig, f: F) -> Result<TrialOutcomes>
where
    F: Fn(&mut Trial) -> Result<Vec<CheckOutcome>> + Sync,
{
    trial_plan(cfg.seed, &cfg.dims, cfg.trials)
        .into_par_iter()
        .map(|(seed, dim)| {
            let mut trial = Trial::new(seed, dim, cfg.field)?;
            Ok((seed, f(&mut trial)?))
        })
        .collect()
}

fn renamed(outcome: CheckOutcome, name: String) -> CheckOutcome {
    CheckOutcome { name, ..outcome }
}

fn zhan_suite(cfg: &CampaignConfig, grid: &NuGrid) -> Result<TrialOutcomes> {
    let tol = cfg.tolerances;
    per_trial(cfg, |t| {
        grid.points()
            .iter()
            .map(|&s| Ok(zhan_check(&t.a, &t.b, s, &tol)?.outcome("zhan")))
            .collect()
    })
}

/// The function families shared by the Loewner and eigenvalue suites.
fn function_family(t: &mut Trial) -> Result<Vec<(&'static str, MonotoneFunctionSpec)>> {
    let mut fs = POWER_EXPONENTS
        .iter()
        .map(|&r| Ok(("power", MonotoneFunctionSpec::power(r)?)))
        .collect::<Result<Vec<_>>>()?;
    fs.push(("atoms", random_atom_spec(&mut t.rng)?));
    fs.push(("affine", random_affine_spec(&mut t.rng)?));
    Ok(fs)
}

fn theorem1_suite(cfg: &CampaignConfig, eigenvalues_only: bool) -> Result<TrialOutcomes> {
    let tol = cfg.tolerances;
    per_trial(cfg, |t| {
        let m_sqrt = midpoint(&t.a, &t.b)?.sqrt();
        function_family(t)?
            .into_iter()
            .map(|(kind, f)| {
                Ok(if eigenvalues_only {
                    corollary1_with_midpoint(&t.a, &t.b, &m_sqrt, &f, &tol)?.outcome(format!("corollary1_{kind}"))
                } else {
                    let gap = theorem1_gap_with_midpoint(&t.a, &t.b, &m_sqrt, &f, &tol)?;
                    renamed(gap.verdict, format!("theorem1_{kind}"))
                })
            })
            .collect()
    })
}

fn tao_suite(cfg: &CampaignConfig) -> Result<TrialOutcomes> {
    let tol = cfg.tolerances;
    let field = cfg.field;
    per_trial(cfg, |t| {
        let mut out = Vec::new();
        let r: f64 = t.rng.random_range(0.0..=1.0);
        for variant in [BlockVariant::PowerOutside, BlockVariant::PowerInside] {
            let form = block_form(&t.a, &t.b, r, variant, &tol)?;
            out.push(form.spectrum_check.clone());
            out.push(tao_check(&form.block, &tol)?.outcome("tao_block_form"));
        }
        let n = 2 * t.dim();
        let k = t.rng.random_range(1..=n);
        let m = t.rng.random_range(1..n);
        let g = gaussian_matrix(&mut t.rng, n, k, field);
        out.push(tao_check(&BlockPsd::from_factor(&g, m)?, &tol)?.outcome("tao_gram"));
        Ok(out)
    })
}

fn agm_suite(cfg: &CampaignConfig, grid: &NuGrid) -> Result<TrialOutcomes> {
    let tol = cfg.tolerances;
    let field = cfg.field;
    per_trial(cfg, |t| {
        let n = t.dim();
        let x = gaussian_matrix(&mut t.rng, n, n, field);
        let mut out = Vec::new();
        for &nu in grid.points() {
            let plain = agm_chain_check(&t.a, &t.b, nu, None, &tol)?;
            out.push(plain.left.outcome("agm_left"));
            out.push(plain.right.outcome("agm_right"));
            let general = agm_chain_check(&t.a, &t.b, nu, Some(&x), &tol)?;
            out.push(general.left.outcome("agm_x_left"));
            out.push(general.right.outcome("agm_x_right"));
        }
        Ok(out)
    })
}

fn proof_chain_suite(cfg: &CampaignConfig) -> Result<TrialOutcomes> {
    let tol = cfg.tolerances;
    per_trial(cfg, |t| {
        let mut out = Vec::new();
        for lambda in PROOF_CHAIN_LAMBDAS {
            out.extend(proof_chain_check(&t.a, &t.b, lambda, &tol)?.steps);
        }
        Ok(out)
    })
}

fn substitution_outcome(t: &Trial, r: f64, branch: Branch, tol: &Tolerances) -> Result<CheckOutcome> {
    let sub = substitution_check(&t.a, &t.b, r, branch, tol)?;
    let name = match branch {
        Branch::Outer => "substitution_outer",
        Branch::Inner => "substitution_inner",
    };
    Ok(CheckOutcome {
        name: name.into(),
        holds: sub.agrees && sub.chain_steps_hold && sub.direct.holds,
        slack: -sub.max_value_diff,
        scale: sub.direct.scale,
        tolerance_rel: tol.loewner_rel,
        witness_index: None,
        applicable: true,
    })
}

fn theorem2_suite(cfg: &CampaignConfig, grid: &NuGrid) -> Result<TrialOutcomes> {
    let tol = cfg.tolerances;
    per_trial(cfg, |t| {
        let mut out = Vec::new();
        for &r in grid.points() {
            out.extend(theorem2_steps(&t.a, &t.b, r, &tol)?.steps);
            for branch in [Branch::Outer, Branch::Inner] {
                out.push(substitution_outcome(t, r, branch, &tol)?);
            }
        }
        Ok(out)
    })
}

/// Fixed checks on the built-in pair; skipped when `trials == 0`.
fn counterexample_suite(cfg: &CampaignConfig, grid: &NuGrid, report: &mut SuiteReport) -> Result<TrialOutcomes> {
    if cfg.trials == 0 {
        return Ok(Vec::new());
    }
    let ce = reference_counterexample(grid)?;
    let (a, b) = reference_pair();
    let gap = GapFunction::new(&a, &b, 2)?;
    let scale = 1.0 + ce.sigma_geom;
    let mirrored = grid
        .points()
        .iter()
        .map(|&nu| gap.eval(1.0 - nu))
        .collect::<Result<Vec<_>>>()?;
    let direct: Vec<f64> = ce.scan.iter().map(|r| r.g).collect();
    let outcomes = vec![
        CheckOutcome::claim("violation_at_0.05", -gap.eval(0.05)?, scale),
        CheckOutcome::claim("no_violation_at_0.20", gap.eval(0.20)?, scale),
        CheckOutcome::claim(
            "threshold_in_window",
            (ce.threshold - 0.12).min(0.14 - ce.threshold),
            1.0,
        ),
        CheckOutcome::vector_equality("mirror_symmetry", &direct, &mirrored, 1e-12),
    ];
    report.threshold = Some(ce.threshold);
    Ok(vec![(cfg.seed, outcomes)])
}

/// Search configuration for one entry of `cfg.dims`.
pub fn search_config(cfg: &CampaignConfig, dim_index: usize) -> Result<SearchConfig> {
    let dim = cfg.dims[dim_index];
    let mut ensemble = RandomPsdConfig::new(
        dim,
        cfg.search.rank.unwrap_or(dim),
        cfg.seed ^ ((dim_index as u64) << 32),
    );
    ensemble.field = cfg.field;
    let mut sc = SearchConfig::new(ensemble, NuGrid::uniform(cfg.nu_grid_points)?, cfg.trials);
    sc.j_max = cfg.search.j_max;
    sc.refine_steps = cfg.search.refine_steps;
    sc.inject_reference = cfg.search.inject_reference;
    sc.tol_rel = cfg.tolerances.loewner_rel;
    Ok(sc)
}

fn search_suite(cfg: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    for di in 0..cfg.dims.len() {
        report.violations.extend(violation_search(&search_config(cfg, di)?)?);
    }
    report.violations.sort_by(|x, y| {
        y.margin
            .total_cmp(&x.margin)
            .then(x.seed.cmp(&y.seed))
            .then(x.j.cmp(&y.j))
            .then(x.dim.cmp(&y.dim))
    });
    Ok(())
}

fn run_suite(suite: Suite, cfg: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let grid = NuGrid::uniform(cfg.nu_grid_points)?;
    let started = Instant::now();
    let outcomes = match suite {
        Suite::Zhan => zhan_suite(cfg, &grid)?,
        Suite::Theorem1 => theorem1_suite(cfg, false)?,
        Suite::Corollary1 => theorem1_suite(cfg, true)?,
        Suite::Tao => tao_suite(cfg)?,
        Suite::AgmChain => agm_suite(cfg, &grid)?,
        Suite::ProofChain => proof_chain_suite(cfg)?,
        Suite::Theorem2 => theorem2_suite(cfg, &grid)?,
        Suite::Counterexample => counterexample_suite(cfg, &grid, report)?,
        Suite::Search => {
            search_suite(cfg, report)?;
            Vec::new()
        }
        Suite::All => {
            for s in Suite::ALL {
                run_suite(s, cfg, report)?;
            }
            return Ok(());
        }
    };
    report.absorb(suite.name(), &outcomes);
    info!("suite {suite} finished in {:.3}s", started.elapsed().as_secs_f64());
    Ok(())
}

/// Runs the configured suite. The returned report depends only on `cfg`.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let started = Instant::now();
    let mut report = SuiteReport::new(cfg);
    run_suite(cfg.suite, cfg, &mut report)?;
    report.wall_time = started.elapsed();
    Ok(report)
}
