//! Candidate evaluation over the occurrence index.
//!
//! Each template is reduced to arithmetic on the sorted position lists of its
//! two activities, so a candidate costs time proportional to the occurrences
//! of its activities rather than to trace length.

use crate::event_log::{EventLog, Trace};
use crate::occurrence::OccurrenceIndex;
use crate::org_model::RoleTable;
use crate::templates::{ConstraintCandidate, TemplateId};

use super::ConstraintMetrics;

pub fn evaluate(
    candidate: &ConstraintCandidate,
    log: &EventLog,
    index: &OccurrenceIndex,
    roles: &RoleTable,
) -> ConstraintMetrics {
    let mut metrics = ConstraintMetrics {
        total_traces: log.trace_count() as u64,
        ..Default::default()
    };
    for &t in index.traces_containing(candidate.condition_activity()) {
        let t = t as usize;
        let (activations, fulfilments) = trace_counts(candidate, log.trace(t), t, index, roles);
        metrics.add_trace(activations, fulfilments);
    }
    metrics
}

/// Number of entries of `sorted` strictly below `bound`.
fn count_below(sorted: &[u32], bound: u32) -> u64 {
    sorted.partition_point(|&p| p < bound) as u64
}

fn count_above(sorted: &[u32], bound: u32) -> u64 {
    (sorted.len() - sorted.partition_point(|&p| p <= bound)) as u64
}

fn trace_counts(
    c: &ConstraintCandidate,
    trace: &Trace,
    t: usize,
    index: &OccurrenceIndex,
    roles: &RoleTable,
) -> (u64, u64) {
    use TemplateId::*;
    let a_pos = index.positions_or_empty(t, c.task_a());
    let b_pos = match c.binding().task_b {
        Some(b) => index.positions_or_empty(t, b),
        None => &[],
    };
    let n_a = a_pos.len() as u64;
    let n_b = b_pos.len() as u64;

    match c.template() {
        Response => (
            n_a,
            b_pos.last().map_or(0, |&last| count_below(a_pos, last)),
        ),
        NotSuccession => (
            n_a,
            n_a - b_pos.last().map_or(0, |&last| count_below(a_pos, last)),
        ),
        RespondedExistence => (n_a, if n_b > 0 { n_a } else { 0 }),
        ChainResponse => (
            n_a,
            a_pos
                .iter()
                .filter(|&&p| b_pos.binary_search(&(p + 1)).is_ok())
                .count() as u64,
        ),
        AlternateResponse => {
            // the first b after each a must come before the next a
            let mut fulfilled = 0;
            let mut j = 0;
            for (i, &p) in a_pos.iter().enumerate() {
                while j < b_pos.len() && b_pos[j] < p {
                    j += 1;
                }
                if let Some(&q) = b_pos.get(j) {
                    if a_pos.get(i + 1).is_none_or(|&next| next > q) {
                        fulfilled += 1;
                    }
                }
            }
            (n_a, fulfilled)
        }
        Precedence => (
            n_b,
            a_pos.first().map_or(0, |&first| count_above(b_pos, first)),
        ),
        ChainPrecedence => (
            n_b,
            b_pos
                .iter()
                .filter(|&&p| p > 0 && a_pos.binary_search(&(p - 1)).is_ok())
                .count() as u64,
        ),
        AlternatePrecedence => {
            // the last a before each b must come after the previous b
            let mut fulfilled = 0;
            let mut i = 0;
            for (j, &p) in b_pos.iter().enumerate() {
                while i < a_pos.len() && a_pos[i] < p {
                    i += 1;
                }
                if i > 0 {
                    let q = a_pos[i - 1];
                    if j == 0 || b_pos[j - 1] < q {
                        fulfilled += 1;
                    }
                }
            }
            (n_b, fulfilled)
        }
        DirectAllocation => {
            let who = c.identity();
            (
                n_a,
                a_pos
                    .iter()
                    .filter(|&&p| trace.resource_at(p as usize) == who)
                    .count() as u64,
            )
        }
        RoleBasedAllocation => {
            let group = c.group();
            (
                n_a,
                a_pos
                    .iter()
                    .filter(|&&p| roles.has_role(trace.resource_at(p as usize), group))
                    .count() as u64,
            )
        }
        BindingOfDuties => {
            let Some(&first_b) = b_pos.first() else {
                return (0, 0);
            };
            let r = trace.resource_at(first_b as usize);
            if b_pos.iter().any(|&q| trace.resource_at(q as usize) != r) {
                return (n_a, 0);
            }
            (
                n_a,
                a_pos
                    .iter()
                    .filter(|&&p| trace.resource_at(p as usize) == r)
                    .count() as u64,
            )
        }
        SeparationOfDuties => {
            if b_pos.is_empty() {
                return (0, 0);
            }
            let mut b_resources: Vec<_> = b_pos
                .iter()
                .map(|&q| trace.resource_at(q as usize))
                .collect();
            b_resources.sort_unstable();
            b_resources.dedup();
            (
                n_a,
                a_pos
                    .iter()
                    .filter(|&&p| {
                        b_resources
                            .binary_search(&trace.resource_at(p as usize))
                            .is_err()
                    })
                    .count() as u64,
            )
        }
        RoleBasedResponse => {
            let group = c.group();
            let last_b = b_pos.last().copied();
            let mut activations = 0;
            let mut fulfilled = 0;
            for &p in a_pos {
                if roles.has_role(trace.resource_at(p as usize), group) {
                    activations += 1;
                    if last_b.is_some_and(|l| p < l) {
                        fulfilled += 1;
                    }
                }
            }
            (activations, fulfilled)
        }
        RoleBasedPrecedence => {
            let group = c.group();
            let first_a = a_pos.first().copied();
            let mut activations = 0;
            let mut fulfilled = 0;
            for &p in b_pos {
                if roles.has_role(trace.resource_at(p as usize), group) {
                    activations += 1;
                    if first_a.is_some_and(|f| f < p) {
                        fulfilled += 1;
                    }
                }
            }
            (activations, fulfilled)
        }
    }
}
