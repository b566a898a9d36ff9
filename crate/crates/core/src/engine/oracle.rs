//! Brute-force reference evaluation: every trace, every activation, one
//! predicate call each. No index.

use crate::event_log::EventLog;
use crate::org_model::RoleTable;
use crate::templates::{activations, is_fulfilled, ConstraintCandidate};

use super::ConstraintMetrics;

pub fn naive_oracle(
    candidate: &ConstraintCandidate,
    log: &EventLog,
    roles: &RoleTable,
) -> ConstraintMetrics {
    let mut metrics = ConstraintMetrics {
        total_traces: log.trace_count() as u64,
        ..Default::default()
    };
    for trace in log.traces() {
        let acts = activations(candidate, trace, roles);
        let fulfilled = acts
            .iter()
            .filter(|&&pos| is_fulfilled(candidate, pos, trace, roles))
            .count();
        metrics.add_trace(acts.len() as u64, fulfilled as u64);
    }
    metrics
}
