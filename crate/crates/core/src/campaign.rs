//! Seeded verification campaigns.
//!
//! A campaign evaluates a check on `trials` independent random inputs. Trial
//! `k` draws from [`trial_rng`]`(seed, k)`, so each result depends only on
//! `(seed, k)`. Results are merged by a commutative, associative fold
//! (counts, minimum slack, seed of the minimum with ties going to the smaller
//! seed), which makes the summary identical for sequential and parallel runs.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bw::{bw_slack, bw_spectral_slack, maximize_ratio, RatioSearchResult};
use crate::ddvv::{ddvv_slack, SymmetricTuple};
use crate::error::{Error, Result};
use crate::report::{SlackReport, VERDICT_RTOL};
use crate::rng::{gaussian_matrix, gaussian_symmetric, trial_rng, trial_seed, TrialRng};
use crate::VERSION;

/// Largest `n` and `m` accepted by campaigns.
pub const MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: u64,
    /// Fixed dimension, or `None` to draw it per trial.
    pub n: Option<usize>,
    /// Fixed codimension, or `None` to draw it per trial.
    pub m: Option<usize>,
    /// Absolute tolerance replacing the default `1e-9 · (1 + |lhs|)`.
    pub tol_override: Option<f64>,
    #[serde(skip)]
    pub execution: Execution,
}

impl CampaignConfig {
    pub fn new(seed: u64, trials: u64) -> Self {
        CampaignConfig {
            seed,
            trials,
            n: None,
            m: None,
            tol_override: None,
            execution: Execution::default(),
        }
    }

    pub fn with_dims(mut self, n: Option<usize>, m: Option<usize>) -> Self {
        self.n = n;
        self.m = m;
        self
    }

    pub fn with_tol(mut self, tol: Option<f64>) -> Self {
        self.tol_override = tol;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        for (name, v) in [("n", self.n), ("m", self.m)] {
            match v {
                Some(0) => return Err(Error::InvalidInput(format!("{name} must be positive"))),
                Some(d) if d > MAX_DIM => {
                    return Err(Error::InvalidInput(format!("{name} = {d} exceeds the cap of {MAX_DIM}")))
                }
                _ => {}
            }
        }
        if let Some(tol) = self.tol_override {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::InvalidInput(format!("tolerance must be finite and nonnegative, got {tol}")));
            }
        }
        Ok(())
    }

    fn apply_tol(&self, report: SlackReport) -> SlackReport {
        match self.tol_override {
            Some(tol) => report.with_tol(tol),
            None => report,
        }
    }
}

/// Aggregate of one campaign. `wall_time_ms` is not serialized so that the
/// JSON of a rerun is byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub campaign: String,
    pub seed: u64,
    pub trials_run: u64,
    /// Trials in which at least one check had `slack < −tol`.
    pub violations: u64,
    pub min_slack: f64,
    /// Sub-seed `seed ^ k` of the trial attaining `min_slack`.
    pub argmin_seed: u64,
    /// `"relative"` for `tol = rtol · (1 + |lhs|)`, `"absolute"` otherwise.
    pub tol_mode: String,
    pub tol: f64,
    pub version: String,
    #[serde(skip)]
    pub wall_time_ms: u64,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Summary of checks run on a single supplied input.
    pub fn from_reports(name: &str, config: &CampaignConfig, reports: &[SlackReport]) -> Self {
        let acc = Accumulator::from_reports(config.seed, reports.iter().map(|r| config.apply_tol(r.clone())));
        acc.finish(name, config, 0)
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    trials: u64,
    violations: u64,
    min_slack: f64,
    argmin_seed: u64,
    /// First error by trial index.
    error: Option<(u64, String)>,
}

impl Accumulator {
    fn empty() -> Self {
        Accumulator {
            trials: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            argmin_seed: 0,
            error: None,
        }
    }

    fn from_reports(seed: u64, reports: impl IntoIterator<Item = SlackReport>) -> Self {
        let mut acc = Accumulator::empty();
        acc.trials = 1;
        acc.argmin_seed = seed;
        let mut violated = false;
        for r in reports {
            violated |= !r.holds;
            // NaN slack counts as a violation and as the minimum
            let slack = if r.slack.is_nan() { f64::NEG_INFINITY } else { r.slack };
            if slack < acc.min_slack {
                acc.min_slack = slack;
            }
        }
        acc.violations = u64::from(violated);
        acc
    }

    fn failed(trial: u64, err: Error) -> Self {
        Accumulator {
            error: Some((trial, err.to_string())),
            ..Accumulator::empty()
        }
    }

    fn merge(self, other: Self) -> Self {
        let (min_slack, argmin_seed) = if self.trials == 0 {
            (other.min_slack, other.argmin_seed)
        } else if other.trials == 0 {
            (self.min_slack, self.argmin_seed)
        } else {
            match self.min_slack.total_cmp(&other.min_slack) {
                std::cmp::Ordering::Less => (self.min_slack, self.argmin_seed),
                std::cmp::Ordering::Greater => (other.min_slack, other.argmin_seed),
                std::cmp::Ordering::Equal => (self.min_slack, self.argmin_seed.min(other.argmin_seed)),
            }
        };
        let error = match (self.error, other.error) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        Accumulator {
            trials: self.trials + other.trials,
            violations: self.violations + other.violations,
            min_slack,
            argmin_seed,
            error,
        }
    }

    fn finish(self, name: &str, config: &CampaignConfig, wall_time_ms: u64) -> CampaignSummary {
        let (tol_mode, tol) = match config.tol_override {
            Some(t) => ("absolute", t),
            None => ("relative", VERDICT_RTOL),
        };
        CampaignSummary {
            campaign: name.to_string(),
            seed: config.seed,
            trials_run: self.trials,
            violations: self.violations,
            min_slack: self.min_slack,
            argmin_seed: self.argmin_seed,
            tol_mode: tol_mode.to_string(),
            tol,
            version: VERSION.to_string(),
            wall_time_ms,
        }
    }
}

/// Runs `check` on every trial and merges the results.
///
/// `check` receives the trial index and the trial's generator and returns the
/// reports for that trial; a trial is a violation when any of them fails. The tolerance
/// override in `config` is applied to every report. The first error by
/// trial index aborts the campaign.
pub fn run<F>(name: &str, config: &CampaignConfig, check: F) -> Result<CampaignSummary>
where
    F: Fn(u64, &mut TrialRng) -> Result<Vec<SlackReport>> + Sync,
{
    config.validate()?;
    let start = Instant::now();
    let one = |k: u64| {
        let mut rng = trial_rng(config.seed, k);
        match check(k, &mut rng) {
            Ok(reports) => Accumulator::from_reports(
                trial_seed(config.seed, k),
                reports.into_iter().map(|r| config.apply_tol(r)),
            ),
            Err(e) => Accumulator::failed(k, e),
        }
    };
    let acc = fold_trials(config.trials, config.execution, one);
    if let Some((k, msg)) = acc.error {
        return Err(Error::InvalidInput(format!("{name}: trial {k} failed: {msg}")));
    }
    Ok(acc.finish(name, config, start.elapsed().as_millis() as u64))
}

fn fold_trials<F>(trials: u64, execution: Execution, one: F) -> Accumulator
where
    F: Fn(u64) -> Accumulator + Sync,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials)
                .into_par_iter()
                .map(&one)
                .reduce(Accumulator::empty, Accumulator::merge)
        }
        _ => (0..trials).map(one).fold(Accumulator::empty(), Accumulator::merge),
    }
}

/// Maps each index through `f` in the configured execution mode, keeping
/// index order in the output.
pub fn map_indices<T, F>(count: u64, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(&f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

fn dim_or_draw(rng: &mut TrialRng, fixed: Option<usize>, lo: usize, hi: usize) -> usize {
    fixed.unwrap_or_else(|| rng.random_range(lo..=hi))
}

/// Gaussian symmetric tuple.
pub fn random_tuple(rng: &mut TrialRng, n: usize, m: usize) -> SymmetricTuple {
    let matrices = (0..m).map(|_| gaussian_symmetric(rng, n)).collect();
    SymmetricTuple::new(matrices).expect("Gaussian symmetric matrices form a valid tuple")
}

/// DDVV on Gaussian symmetric tuples; unset `n`, `m` are drawn from `2..=6`.
pub fn ddvv_campaign(config: &CampaignConfig) -> Result<CampaignSummary> {
    run("ddvv", config, |_, rng| {
        let n = dim_or_draw(rng, config.n, 2, 6);
        let m = dim_or_draw(rng, config.m, 2, 6);
        Ok(vec![ddvv_slack(&random_tuple(rng, n, m))])
    })
}

/// Commutator bound on Gaussian pairs together with the spectral bound for
/// the operator of `X`; unset `n` is drawn from `2..=8`.
pub fn bw_campaign(config: &CampaignConfig) -> Result<CampaignSummary> {
    run("bw", config, |_, rng| {
        let n = dim_or_draw(rng, config.n, 2, 8);
        let x = gaussian_matrix(rng, n);
        let y = gaussian_matrix(rng, n);
        Ok(vec![bw_slack(&x, &y)?, bw_spectral_slack(&x)?])
    })
}

/// Best ratio found over a range of seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSummary {
    pub n: usize,
    pub seeds: u64,
    pub best_ratio: f64,
    pub best_seed: u64,
    pub converged_runs: u64,
    pub version: String,
    pub best: RatioSearchResult,
}

/// Runs [`maximize_ratio`] for seeds `seed, seed + 1, …` and keeps the best
/// result (ties go to the smaller seed).
pub fn search_campaign(
    n: usize,
    seed: u64,
    seeds: u64,
    max_iters: usize,
    execution: Execution,
) -> Result<SearchSummary> {
    if seeds == 0 {
        return Err(Error::InvalidInput("at least one seed is required".into()));
    }
    if n > MAX_DIM {
        return Err(Error::InvalidInput(format!("n = {n} exceeds the cap of {MAX_DIM}")));
    }
    let runs = map_indices(seeds, execution, |k| {
        let s = seed.wrapping_add(k);
        maximize_ratio(n, s, max_iters).map(|r| (s, r))
    });
    let mut best: Option<(u64, RatioSearchResult)> = None;
    let mut converged_runs = 0;
    for run in runs {
        let (s, r) = run?;
        converged_runs += u64::from(r.converged);
        if best.as_ref().is_none_or(|(_, b)| r.best_ratio > b.best_ratio) {
            best = Some((s, r));
        }
    }
    let (best_seed, best) = best.expect("seeds >= 1");
    Ok(SearchSummary {
        n,
        seeds,
        best_ratio: best.best_ratio,
        best_seed,
        converged_runs,
        version: VERSION.to_string(),
        best,
    })
}
