//! Candidate generation, evaluation, and threshold filtering.
//!
//! Candidates are independent of each other, so evaluation fans out over a
//! rayon pool when the `parallel` feature is on. Results are collected in
//! candidate order, which makes output identical for every worker count.

mod candidates;
mod indexed;
pub mod listing;
mod metrics;
mod oracle;

use crate::decimal::{parse_unit_interval, Rational};
use crate::error::{Error, Result};
use crate::event_log::EventLog;
use crate::occurrence::OccurrenceIndex;
use crate::org_model::{OrgModel, RoleTable};
use crate::templates::{ConstraintCandidate, TemplateId};

pub use candidates::generate_candidates;
pub use metrics::ConstraintMetrics;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscoveryConfig {
    /// Exclusive lower bound on support.
    pub min_support: Rational,
    /// Exclusive lower bound on confidence.
    pub min_confidence: Rational,
    pub templates: Vec<TemplateId>,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs inline.
    pub jobs: Option<usize>,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            min_support: Rational::new(7, 10),
            min_confidence: Rational::new(1, 2),
            templates: TemplateId::ALL.to_vec(),
            jobs: None,
        }
    }
}

impl DiscoveryConfig {
    pub fn with_templates(templates: &[TemplateId]) -> Self {
        DiscoveryConfig {
            templates: templates.to_vec(),
            ..Default::default()
        }
    }

    /// Sets both thresholds from decimal text.
    pub fn thresholds(mut self, min_support: &str, min_confidence: &str) -> Result<Self> {
        self.min_support = parse_unit_interval(min_support)?;
        self.min_confidence = parse_unit_interval(min_confidence)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let one = Rational::from_integer(1);
        if self.min_support > one || self.min_confidence > one {
            return Err(Error::Config("thresholds must lie in [0, 1]".into()));
        }
        if self.templates.is_empty() {
            return Err(Error::Config("no templates selected".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be positive".into()));
        }
        Ok(())
    }

    /// Strict comparison on both metrics, as in the queries' HAVING clause.
    pub fn accepts(&self, metrics: &ConstraintMetrics) -> bool {
        metrics.support() > self.min_support && metrics.confidence() > self.min_confidence
    }
}

/// A candidate with its metrics and whether it cleared the thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluated {
    pub candidate: ConstraintCandidate,
    pub metrics: ConstraintMetrics,
    pub passed: bool,
}

/// Immutable mining context: a log, its occurrence index, and resolved
/// role memberships. Shareable across threads.
#[derive(Debug)]
pub struct Miner<'a> {
    log: &'a EventLog,
    index: OccurrenceIndex,
    roles: RoleTable,
}

impl<'a> Miner<'a> {
    pub fn new(log: &'a EventLog, org: &OrgModel) -> Self {
        Miner {
            log,
            index: OccurrenceIndex::build(log),
            roles: RoleTable::new(org, log),
        }
    }

    /// Uses a caller-supplied index, e.g. a deliberately damaged one.
    pub fn with_index(log: &'a EventLog, org: &OrgModel, index: OccurrenceIndex) -> Self {
        Miner {
            log,
            index,
            roles: RoleTable::new(org, log),
        }
    }

    pub fn log(&self) -> &EventLog {
        self.log
    }

    pub fn index(&self) -> &OccurrenceIndex {
        &self.index
    }

    pub fn roles(&self) -> &RoleTable {
        &self.roles
    }

    pub fn candidates(&self, templates: &[TemplateId]) -> Vec<ConstraintCandidate> {
        generate_candidates(self.log, &self.roles, templates)
    }

    pub fn evaluate(&self, candidate: &ConstraintCandidate) -> ConstraintMetrics {
        indexed::evaluate(candidate, self.log, &self.index, &self.roles)
    }

    pub fn oracle(&self, candidate: &ConstraintCandidate) -> ConstraintMetrics {
        oracle::naive_oracle(candidate, self.log, &self.roles)
    }

    pub fn listing_counts(
        &self,
        candidate: &ConstraintCandidate,
        mode: crate::sql::Mode,
    ) -> listing::ListingCounts {
        listing::listing_counts(candidate, self.log, &self.index, &self.roles, mode)
    }

    pub fn evaluate_sequential(
        &self,
        candidates: &[ConstraintCandidate],
    ) -> Vec<ConstraintMetrics> {
        candidates.iter().map(|c| self.evaluate(c)).collect()
    }

    #[cfg(feature = "parallel")]
    pub fn evaluate_parallel(&self, candidates: &[ConstraintCandidate]) -> Vec<ConstraintMetrics> {
        use rayon::prelude::*;
        candidates.par_iter().map(|c| self.evaluate(c)).collect()
    }

    /// Evaluates in candidate order on `jobs` workers.
    pub fn evaluate_all(
        &self,
        candidates: &[ConstraintCandidate],
        jobs: Option<usize>,
    ) -> Result<Vec<ConstraintMetrics>> {
        #[cfg(feature = "parallel")]
        {
            match jobs {
                Some(1) => Ok(self.evaluate_sequential(candidates)),
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
                    Ok(pool.install(|| self.evaluate_parallel(candidates)))
                }
                None => Ok(self.evaluate_parallel(candidates)),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = jobs;
            Ok(self.evaluate_sequential(candidates))
        }
    }

    /// Every candidate with its metrics and pass flag.
    pub fn audit(&self, config: &DiscoveryConfig) -> Result<Vec<Evaluated>> {
        config.validate()?;
        let candidates = self.candidates(&config.templates);
        let metrics = self.evaluate_all(&candidates, config.jobs)?;
        Ok(candidates
            .into_iter()
            .zip(metrics)
            .map(|(candidate, metrics)| Evaluated {
                candidate,
                metrics,
                passed: config.accepts(&metrics),
            })
            .collect())
    }

    /// Candidates clearing both thresholds, in (template, binding) order.
    pub fn discover(&self, config: &DiscoveryConfig) -> Result<Vec<Evaluated>> {
        Ok(self
            .audit(config)?
            .into_iter()
            .filter(|e| e.passed)
            .collect())
    }
}

pub fn evaluate_candidate(
    candidate: &ConstraintCandidate,
    log: &EventLog,
    roles: &RoleTable,
    index: &OccurrenceIndex,
) -> ConstraintMetrics {
    indexed::evaluate(candidate, log, index, roles)
}

pub fn naive_oracle(
    candidate: &ConstraintCandidate,
    log: &EventLog,
    roles: &RoleTable,
) -> ConstraintMetrics {
    oracle::naive_oracle(candidate, log, roles)
}

pub fn discover(
    log: &EventLog,
    org: &OrgModel,
    config: &DiscoveryConfig,
) -> Result<Vec<Evaluated>> {
    Miner::new(log, org).discover(config)
}
