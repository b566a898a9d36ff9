//! A second, string-level reference evaluator that shares nothing with the
//! library beyond name lookup. Also used by the CLI crate's tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use sqlminer::org_model::ROLE;
use sqlminer::{ConstraintCandidate, EventLog, OrgModel, RoleTable, TemplateId};

/// Traces as `(activity, resource)` pairs in order, plus `(resource, group)`
/// role memberships.
#[derive(Clone, Debug, Default)]
pub struct RawLog {
    pub traces: Vec<Vec<(String, String)>>,
    pub roles: BTreeSet<(String, String)>,
}

impl RawLog {
    pub fn from_log(log: &EventLog, org: &OrgModel) -> Self {
        let traces = log
            .traces()
            .iter()
            .map(|t| {
                t.events
                    .iter()
                    .map(|e| {
                        (
                            log.activity_name(e.activity).to_string(),
                            log.resource_name(e.resource).to_string(),
                        )
                    })
                    .collect()
            })
            .collect();
        let roles = org
            .relations()
            .filter(|r| r.relation_type == ROLE)
            .map(|r| (r.identity.clone(), r.group.clone()))
            .collect();
        RawLog { traces, roles }
    }

    /// CSV with one trace per day and one event per second.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("event_id,trace_id,activity,timestamp,resource\n");
        let mut n = 0;
        for (t, trace) in self.traces.iter().enumerate() {
            for (i, (act, res)) in trace.iter().enumerate() {
                n += 1;
                let ts = 1_600_000_000 + 86_400 * t + i;
                out.push_str(&format!("e{n},t{t},{act},{ts},{res}\n"));
            }
        }
        out
    }

    pub fn org(&self) -> OrgModel {
        let mut org = OrgModel::new();
        for (r, g) in &self.roles {
            org.insert(r, ROLE, g);
        }
        org
    }

    pub fn reversed(&self) -> RawLog {
        RawLog {
            traces: self
                .traces
                .iter()
                .map(|t| t.iter().rev().cloned().collect())
                .collect(),
            roles: self.roles.clone(),
        }
    }
}

/// `(activations, fulfilments, condition traces, total traces)`.
pub type Counts = (u64, u64, u64, u64);

pub fn oracle(raw: &RawLog, c: &ConstraintCandidate, log: &EventLog, roles: &RoleTable) -> Counts {
    use TemplateId::*;
    let a = log.activity_name(c.task_a()).to_string();
    let b = c.binding().task_b.map(|x| log.activity_name(x).to_string());
    let b = b.as_deref().unwrap_or("");
    let identity = c
        .binding()
        .identity
        .map(|x| log.resource_name(x).to_string());
    let group = c.binding().group.map(|g| roles.group_name(g).to_string());
    let in_group = |r: &str| {
        group
            .as_ref()
            .is_some_and(|g| raw.roles.contains(&(r.to_string(), g.clone())))
    };

    let mut total = (0, 0, 0, raw.traces.len() as u64);
    for trace in &raw.traces {
        let act = |i: usize| trace[i].0.as_str();
        let res = |i: usize| trace[i].1.as_str();
        let n = trace.len();
        let has_b = (0..n).any(|i| act(i) == b);
        let mut acts = 0;
        let mut fuls = 0;
        for p in 0..n {
            let (activated, fulfilled) = match c.template() {
                Response => (act(p) == a, (p + 1..n).any(|q| act(q) == b)),
                AlternateResponse => (
                    act(p) == a,
                    (p + 1..n).any(|q| act(q) == b && (p + 1..q).all(|r| act(r) != a)),
                ),
                ChainResponse => (act(p) == a, p + 1 < n && act(p + 1) == b),
                Precedence => (act(p) == b, (0..p).any(|q| act(q) == a)),
                AlternatePrecedence => (
                    act(p) == b,
                    (0..p).any(|q| act(q) == a && (q + 1..p).all(|r| act(r) != b)),
                ),
                ChainPrecedence => (act(p) == b, p > 0 && act(p - 1) == a),
                RespondedExistence => (act(p) == a, has_b),
                NotSuccession => (act(p) == a, !(p + 1..n).any(|q| act(q) == b)),
                DirectAllocation => (act(p) == a, Some(res(p)) == identity.as_deref()),
                RoleBasedAllocation => (act(p) == a, in_group(res(p))),
                BindingOfDuties => (
                    act(p) == a && has_b,
                    (0..n).filter(|&q| act(q) == b).all(|q| res(q) == res(p)),
                ),
                SeparationOfDuties => (
                    act(p) == a && has_b,
                    (0..n).filter(|&q| act(q) == b).all(|q| res(q) != res(p)),
                ),
                RoleBasedResponse => (
                    act(p) == a && in_group(res(p)),
                    (p + 1..n).any(|q| act(q) == b),
                ),
                RoleBasedPrecedence => {
                    (act(p) == b && in_group(res(p)), (0..p).any(|q| act(q) == a))
                }
            };
            if activated {
                acts += 1;
                fuls += fulfilled as u64;
            }
        }
        if acts > 0 {
            total.0 += acts;
            total.1 += fuls;
            total.2 += 1;
        }
    }
    total
}
