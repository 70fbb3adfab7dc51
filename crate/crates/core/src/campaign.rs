//! Randomized comparison of the classification against the stability
//! checker on sampled instances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundles::generic_splitting;
use crate::classification::{classify, Status, Verdict};
use crate::error::{Error, Result};
use crate::exactmath::{PrimeField, Rational};
use crate::interval::AlphaInterval;
use crate::stability::{sample_generating_instance, sample_instance, StabilityChecker, GUARD_K, GUARD_Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule", content = "alphas")]
pub enum AlphaRule {
    /// A representative of the predicted interval, plus `lower - 1/2` (when
    /// positive) and `upper + 1/2` just outside it.
    IntervalMidpoint,
    /// One point in every cell cut out by the verdict's endpoints.
    CellMidpoints,
    Explicit(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyCampaignConfig {
    pub n: (i64, i64),
    pub d: (i64, i64),
    pub k: (i64, i64),
    pub q: u32,
    pub trials: usize,
    pub alpha_rule: AlphaRule,
    pub seed: u64,
    /// Minimum stable fraction where stability is predicted.
    pub stable_threshold: f64,
    /// Maximum stable instances tolerated where instability is predicted.
    pub max_false_positives: usize,
    pub force_large: bool,
    /// Sample only systems whose sections generate `E`.
    pub require_generation: bool,
}

impl Default for VerifyCampaignConfig {
    fn default() -> Self {
        VerifyCampaignConfig {
            n: (2, 2),
            d: (2, 2),
            k: (1, 1),
            q: crate::exactmath::DEFAULT_PRIME,
            trials: 20,
            alpha_rule: AlphaRule::IntervalMidpoint,
            seed: 0,
            stable_threshold: 0.8,
            max_false_positives: 0,
            force_large: false,
            require_generation: false,
        }
    }
}

impl VerifyCampaignConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("n", self.n), ("d", self.d), ("k", self.k)] {
            if lo > hi {
                return Err(Error::InvalidInput(format!("empty {name} range {lo}..{hi}")));
            }
        }
        if self.n.0 < 2 {
            return Err(Error::InvalidInput("n must be at least 2".into()));
        }
        if self.k.0 < 1 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.stable_threshold) {
            return Err(Error::InvalidInput("stable threshold must lie in [0, 1]".into()));
        }
        PrimeField::new(self.q)?;
        if self.k.1 as usize > GUARD_K && self.q > GUARD_Q && !self.force_large {
            return Err(Error::CostGuard { k: self.k.1 as usize, q: self.q });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    Stable,
    Unstable,
    Unknown,
}

/// What the verdict predicts for a general system at `alpha`.
pub fn expectation(v: &Verdict, alpha: &Rational) -> Expectation {
    let in_stable = v.stable_interval.contains(alpha);
    let in_necessary = v.necessary_region.contains(alpha);
    match v.status {
        Status::ExactNonEmpty if in_stable => Expectation::Stable,
        Status::ExactNonEmpty | Status::Empty => Expectation::Unstable,
        Status::PartiallyKnown if in_stable => Expectation::Stable,
        Status::PartiallyKnown | Status::NecessaryOnly if !in_necessary => Expectation::Unstable,
        Status::PartiallyKnown | Status::NecessaryOnly => Expectation::Unknown,
    }
}

pub fn sample_alphas(v: &Verdict, rule: &AlphaRule) -> Vec<Rational> {
    let half = Rational::new(1, 2);
    match rule {
        AlphaRule::Explicit(list) => list.clone(),
        AlphaRule::IntervalMidpoint => {
            let target = if v.stable_interval.is_empty() { &v.necessary_region } else { &v.stable_interval };
            let Some(rep) = target.representative() else {
                return vec![Rational::one()];
            };
            let mut out = vec![rep];
            if let Some(lo) = target.lower() {
                let below = lo - &half;
                if below.is_positive() {
                    out.push(below);
                }
            }
            if let Some(hi) = target.upper() {
                out.push(hi + &half);
            }
            out
        }
        AlphaRule::CellMidpoints => {
            let mut cuts = vec![Rational::zero()];
            for i in [&v.necessary_region, &v.stable_interval] {
                cuts.extend(i.lower().cloned());
                cuts.extend(i.upper().cloned());
            }
            if let Some(range) = &v.lower_endpoint {
                cuts.push(range.at_least.clone());
                cuts.extend(range.at_most.clone());
            }
            cuts.retain(|c| c >= &Rational::zero());
            cuts.sort();
            cuts.dedup();
            let mut out: Vec<Rational> = cuts.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
            out.push(cuts.last().unwrap() + Rational::one());
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaResult {
    pub alpha: Rational,
    pub expectation: Expectation,
    pub stable: usize,
    pub semistable: usize,
    pub trials: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub status: Status,
    pub stable_interval: AlphaInterval,
    pub necessary_region: AlphaInterval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub alphas: Vec<AlphaResult>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub config: VerifyCampaignConfig,
    pub cells: Vec<CellResult>,
    pub disagreements: usize,
    pub all_agree: bool,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed, independent of scheduling.
pub fn trial_seed(seed: u64, n: i64, d: i64, k: i64, trial: usize) -> u64 {
    [n as u64, d as u64, k as u64, trial as u64].iter().fold(splitmix(seed), |acc, &x| splitmix(acc ^ x))
}

/// `(stable, semistable)` per sampled alpha.
type TrialOutcome = Result<Vec<(bool, bool)>>;

struct Cell {
    verdict: Verdict,
    alphas: Vec<Rational>,
    skipped: Option<String>,
}

pub fn run_campaign(config: &VerifyCampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let mut cells = Vec::new();
    for n in config.n.0..=config.n.1 {
        for d in config.d.0..=config.d.1 {
            for k in config.k.0..=config.k.1 {
                let verdict = classify(n, d, k)?;
                let h0 = generic_splitting(n as usize, d).sections();
                let skipped = (k as usize > h0).then(|| format!("k exceeds h^0 = {h0} of the generic type"));
                let alphas = sample_alphas(&verdict, &config.alpha_rule);
                cells.push(Cell { verdict, alphas, skipped });
            }
        }
    }

    let tasks: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.skipped.is_none())
        .flat_map(|(i, _)| (0..config.trials).map(move |t| (i, t)))
        .collect();
    let outcomes: Vec<(usize, TrialOutcome)> = tasks
        .par_iter()
        .map(|&(i, trial)| {
            let c = &cells[i];
            let (n, d, k) = (c.verdict.n, c.verdict.d, c.verdict.k);
            let run = || -> Result<Vec<(bool, bool)>> {
                let seed = trial_seed(config.seed, n, d, k, trial);
                let inst = if config.require_generation {
                    sample_generating_instance(n as usize, d, k as usize, config.q, seed)?
                } else {
                    sample_instance(n as usize, d, k as usize, config.q, seed)?
                };
                let checker = StabilityChecker::new(&inst, config.force_large)?;
                c.alphas.iter().map(|a| checker.is_alpha_stable(a).map(|r| (r.stable, r.semistable))).collect()
            };
            (i, run())
        })
        .collect();

    let mut counts: Vec<Vec<(usize, usize)>> = cells.iter().map(|c| vec![(0, 0); c.alphas.len()]).collect();
    let mut failures: Vec<Option<String>> = vec![None; cells.len()];
    for (i, outcome) in outcomes {
        match outcome {
            Ok(flags) => {
                for (slot, (stable, semistable)) in counts[i].iter_mut().zip(flags) {
                    slot.0 += stable as usize;
                    slot.1 += semistable as usize;
                }
            }
            Err(e @ (Error::Internal(_) | Error::CostGuard { .. })) => return Err(e),
            Err(e) => {
                failures[i].get_or_insert_with(|| format!("sampling failed: {e}"));
            }
        }
    }

    let mut results = Vec::with_capacity(cells.len());
    for (i, c) in cells.into_iter().enumerate() {
        let skipped = c.skipped.or(failures[i].take());
        let alphas: Vec<AlphaResult> = if skipped.is_some() {
            Vec::new()
        } else {
            c.alphas
                .iter()
                .zip(&counts[i])
                .map(|(a, &(stable, semistable))| {
                    let exp = expectation(&c.verdict, a);
                    let agree = match exp {
                        Expectation::Stable => stable as f64 >= config.stable_threshold * config.trials as f64,
                        Expectation::Unstable => stable <= config.max_false_positives,
                        Expectation::Unknown => true,
                    };
                    AlphaResult { alpha: a.clone(), expectation: exp, stable, semistable, trials: config.trials, agree }
                })
                .collect()
        };
        let agree = alphas.iter().all(|a| a.agree);
        results.push(CellResult {
            n: c.verdict.n,
            d: c.verdict.d,
            k: c.verdict.k,
            status: c.verdict.status,
            stable_interval: c.verdict.stable_interval,
            necessary_region: c.verdict.necessary_region,
            skipped,
            alphas,
            agree,
        });
    }
    let disagreements = results.iter().filter(|c| !c.agree).count();
    Ok(CampaignReport { config: config.clone(), cells: results, disagreements, all_agree: disagreements == 0 })
}
