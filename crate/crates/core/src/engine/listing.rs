//! Counts produced by the discovery queries when read literally, row by row.
//!
//! Several queries quantify differently from their stated semantics (`ALL`
//! where one witness is meant, a self-join that multiplies rows, a swapped
//! activation filter). This module reproduces what the SQL itself would
//! count so the validator can report where the two diverge. Event order is
//! the log's total order, standing in for `Time`.

use crate::event_log::{EventLog, Trace};
use crate::occurrence::OccurrenceIndex;
use crate::org_model::RoleTable;
use crate::sql::Mode;
use crate::templates::{ConstraintCandidate, TemplateId};

/// `rows` is `COUNT(*)` of the grouped query; `denominator` is the
/// per-template count subquery it is divided by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ListingCounts {
    pub rows: u64,
    pub denominator: u64,
    pub condition_traces: u64,
    pub total_traces: u64,
}

pub fn listing_counts(
    candidate: &ConstraintCandidate,
    log: &EventLog,
    index: &OccurrenceIndex,
    roles: &RoleTable,
    mode: Mode,
) -> ListingCounts {
    let mut out = ListingCounts {
        total_traces: log.trace_count() as u64,
        ..Default::default()
    };
    // the pair subquery joins every TaskA with each other observed activity
    let partners = log.alphabet().len().saturating_sub(1) as u64;
    for (t, trace) in log.traces().iter().enumerate() {
        let (rows, denominator) = trace_rows(candidate, trace, t, index, roles, mode, partners);
        out.rows += rows;
        out.denominator += denominator;
        if denominator > 0 {
            out.condition_traces += 1;
        }
    }
    out
}

fn trace_rows(
    c: &ConstraintCandidate,
    trace: &Trace,
    t: usize,
    index: &OccurrenceIndex,
    roles: &RoleTable,
    mode: Mode,
    partners: u64,
) -> (u64, u64) {
    use TemplateId::*;
    let a: Vec<usize> = index
        .positions_or_empty(t, c.task_a())
        .iter()
        .map(|&p| p as usize)
        .collect();
    let b: Vec<usize> = match c.binding().task_b {
        Some(x) => index
            .positions_or_empty(t, x)
            .iter()
            .map(|&p| p as usize)
            .collect(),
        None => Vec::new(),
    };
    let count =
        |xs: &[usize], pred: &dyn Fn(usize) -> bool| xs.iter().filter(|&&p| pred(p)).count() as u64;
    let n_a = a.len() as u64;
    let n_b = b.len() as u64;
    let role = |p: usize| roles.has_role(trace.resource_at(p), c.group());

    match c.template() {
        Response => (count(&a, &|p| b.iter().any(|&q| q > p)), n_a),
        // NOT EXISTS ranges over every later b, so no a may sit before the last one
        AlternateResponse => (
            count(&a, &|p| {
                b.iter().any(|&q| q > p)
                    && !b
                        .iter()
                        .any(|&q| q > p && a.iter().any(|&r| r > p && r < q))
            }),
            n_a,
        ),
        // no event of any kind between a and any later b
        ChainResponse => (
            count(&a, &|p| {
                b.iter().any(|&q| q > p) && !b.iter().any(|&q| q > p && q - p > 1)
            }),
            n_a,
        ),
        Precedence => (count(&b, &|p| a.iter().any(|&q| q < p)), n_b),
        AlternatePrecedence => (
            count(&b, &|p| {
                a.iter().any(|&q| q < p)
                    && !a
                        .iter()
                        .any(|&q| q < p && b.iter().any(|&r| r < p && r > q))
            }),
            n_b,
        ),
        ChainPrecedence => (
            count(&b, &|p| {
                a.iter().any(|&q| q < p) && !a.iter().any(|&q| q < p && p - q > 1)
            }),
            n_b,
        ),
        RespondedExistence => match mode {
            // activation filter on TaskB, divided by the TaskA count
            Mode::Verbatim => (if n_a > 0 { n_b } else { 0 }, n_a),
            Mode::Corrected => (if n_b > 0 { n_a } else { 0 }, n_a),
        },
        NotSuccession => (
            count(&b, &|p| {
                !a.is_empty() && a.iter().all(|&q| p < q) && b.iter().all(|&q| p > q)
            }),
            n_a,
        ),
        DirectAllocation => (
            count(&a, &|p| trace.resource_at(p) == c.identity()) * partners,
            n_a,
        ),
        RoleBasedAllocation => (count(&a, &|p| role(p)) * partners, n_a),
        BindingOfDuties | SeparationOfDuties => {
            if b.is_empty() {
                return (0, 0);
            }
            let same = c.template() == BindingOfDuties;
            let rows = count(&a, &|p| {
                let r = trace.resource_at(p);
                b.iter().all(|&q| (trace.resource_at(q) == r) == same)
            });
            (rows, n_a)
        }
        RoleBasedResponse => (
            count(&a, &|p| {
                role(p) && !b.is_empty() && b.iter().all(|&q| p < q)
            }),
            count(&a, &role),
        ),
        RoleBasedPrecedence => (
            count(&b, &|p| {
                role(p) && !a.is_empty() && a.iter().all(|&q| p < q)
            }),
            count(&b, &role),
        ),
    }
}
