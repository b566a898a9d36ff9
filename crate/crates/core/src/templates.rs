//! The fourteen constraint templates and their activation / fulfilment
//! semantics, evaluated directly over one trace.
//!
//! The predicates here are deliberately literal: each one scans the trace and
//! spells out its quantifier. They define what the indexed engine must
//! compute and double as the reference for the brute-force oracle.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::event_log::{ActivityId, ResourceId, Trace};
use crate::org_model::{GroupId, RoleTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemplateId {
    Response,
    AlternateResponse,
    ChainResponse,
    Precedence,
    AlternatePrecedence,
    ChainPrecedence,
    RespondedExistence,
    NotSuccession,
    DirectAllocation,
    RoleBasedAllocation,
    BindingOfDuties,
    SeparationOfDuties,
    RoleBasedResponse,
    RoleBasedPrecedence,
}

/// Parameter kinds a template is instantiated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    ActivityPair,
    ActivityIdentity,
    ActivityGroup,
    ActivityPairGroup,
}

impl Signature {
    pub fn arity(self) -> usize {
        match self {
            Signature::ActivityPairGroup => 3,
            _ => 2,
        }
    }
}

impl TemplateId {
    pub const ALL: [TemplateId; 14] = [
        TemplateId::Response,
        TemplateId::AlternateResponse,
        TemplateId::ChainResponse,
        TemplateId::Precedence,
        TemplateId::AlternatePrecedence,
        TemplateId::ChainPrecedence,
        TemplateId::RespondedExistence,
        TemplateId::NotSuccession,
        TemplateId::DirectAllocation,
        TemplateId::RoleBasedAllocation,
        TemplateId::BindingOfDuties,
        TemplateId::SeparationOfDuties,
        TemplateId::RoleBasedResponse,
        TemplateId::RoleBasedPrecedence,
    ];

    pub const CONTROL_FLOW: [TemplateId; 8] = [
        TemplateId::Response,
        TemplateId::AlternateResponse,
        TemplateId::ChainResponse,
        TemplateId::Precedence,
        TemplateId::AlternatePrecedence,
        TemplateId::ChainPrecedence,
        TemplateId::RespondedExistence,
        TemplateId::NotSuccession,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TemplateId::Response => "Response",
            TemplateId::AlternateResponse => "AlternateResponse",
            TemplateId::ChainResponse => "ChainResponse",
            TemplateId::Precedence => "Precedence",
            TemplateId::AlternatePrecedence => "AlternatePrecedence",
            TemplateId::ChainPrecedence => "ChainPrecedence",
            TemplateId::RespondedExistence => "RespondedExistence",
            TemplateId::NotSuccession => "NotSuccession",
            TemplateId::DirectAllocation => "DirectAllocation",
            TemplateId::RoleBasedAllocation => "RoleBasedAllocation",
            TemplateId::BindingOfDuties => "BindingOfDuties",
            TemplateId::SeparationOfDuties => "SeparationOfDuties",
            TemplateId::RoleBasedResponse => "RoleBasedResponse",
            TemplateId::RoleBasedPrecedence => "RoleBasedPrecedence",
        }
    }

    pub fn signature(self) -> Signature {
        match self {
            TemplateId::DirectAllocation => Signature::ActivityIdentity,
            TemplateId::RoleBasedAllocation => Signature::ActivityGroup,
            TemplateId::RoleBasedResponse | TemplateId::RoleBasedPrecedence => {
                Signature::ActivityPairGroup
            }
            _ => Signature::ActivityPair,
        }
    }

    /// Whether evaluation needs role memberships from an org model.
    pub fn uses_roles(self) -> bool {
        matches!(
            self,
            TemplateId::RoleBasedAllocation
                | TemplateId::RoleBasedResponse
                | TemplateId::RoleBasedPrecedence
        )
    }

    pub fn is_control_flow(self) -> bool {
        Self::CONTROL_FLOW.contains(&self)
    }

    /// True when activations are `task_b` events rather than `task_a`.
    pub fn activates_on_b(self) -> bool {
        matches!(
            self,
            TemplateId::Precedence
                | TemplateId::AlternatePrecedence
                | TemplateId::ChainPrecedence
                | TemplateId::RoleBasedPrecedence
        )
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown template {s:?}")))
    }
}

/// Parameter values of one candidate. Which fields are set is fixed by the
/// template's [`Signature`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamBinding {
    pub task_a: Option<ActivityId>,
    pub task_b: Option<ActivityId>,
    pub identity: Option<ResourceId>,
    pub group: Option<GroupId>,
}

impl ParamBinding {
    pub fn pair(a: ActivityId, b: ActivityId) -> Self {
        ParamBinding {
            task_a: Some(a),
            task_b: Some(b),
            ..Default::default()
        }
    }

    pub fn with_identity(a: ActivityId, identity: ResourceId) -> Self {
        ParamBinding {
            task_a: Some(a),
            identity: Some(identity),
            ..Default::default()
        }
    }

    pub fn with_group(a: ActivityId, group: GroupId) -> Self {
        ParamBinding {
            task_a: Some(a),
            group: Some(group),
            ..Default::default()
        }
    }

    pub fn pair_with_group(a: ActivityId, b: ActivityId, group: GroupId) -> Self {
        ParamBinding {
            task_a: Some(a),
            task_b: Some(b),
            group: Some(group),
            ..Default::default()
        }
    }

    fn matches(&self, sig: Signature) -> bool {
        let shape = (
            self.task_a.is_some(),
            self.task_b.is_some(),
            self.identity.is_some(),
            self.group.is_some(),
        );
        shape
            == match sig {
                Signature::ActivityPair => (true, true, false, false),
                Signature::ActivityIdentity => (true, false, true, false),
                Signature::ActivityGroup => (true, false, false, true),
                Signature::ActivityPairGroup => (true, true, false, true),
            }
    }
}

/// A template together with a binding that fits its signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintCandidate {
    template: TemplateId,
    binding: ParamBinding,
}

impl ConstraintCandidate {
    pub fn new(template: TemplateId, binding: ParamBinding) -> Result<Self> {
        let fail = |message: &str| Error::Binding {
            template: template.name(),
            message: message.to_string(),
        };
        if !binding.matches(template.signature()) {
            return Err(fail("parameters do not match the template signature"));
        }
        if binding.task_b.is_some() && binding.task_a == binding.task_b {
            return Err(fail("task_a and task_b must differ"));
        }
        Ok(ConstraintCandidate { template, binding })
    }

    pub fn template(&self) -> TemplateId {
        self.template
    }

    pub fn binding(&self) -> &ParamBinding {
        &self.binding
    }

    pub fn task_a(&self) -> ActivityId {
        self.binding.task_a.expect("every template binds task_a")
    }

    /// Panics for templates without a second activity.
    pub fn task_b(&self) -> ActivityId {
        self.binding.task_b.expect("template binds task_b")
    }

    pub fn identity(&self) -> ResourceId {
        self.binding.identity.expect("template binds an identity")
    }

    pub fn group(&self) -> GroupId {
        self.binding.group.expect("template binds a group")
    }

    /// The activity whose events are activations.
    pub fn condition_activity(&self) -> ActivityId {
        if self.template.activates_on_b() {
            self.task_b()
        } else {
            self.task_a()
        }
    }
}

impl fmt::Display for ConstraintCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.binding;
        write!(f, "{}(", self.template)?;
        let mut parts = Vec::new();
        if let Some(a) = b.task_a {
            parts.push(format!("#{}", a.0));
        }
        if let Some(x) = b.task_b {
            parts.push(format!("#{}", x.0));
        }
        if let Some(r) = b.identity {
            parts.push(format!("r{}", r.0));
        }
        if let Some(g) = b.group {
            parts.push(format!("g{}", g.0));
        }
        write!(f, "{})", parts.join(","))
    }
}

fn occurs(trace: &Trace, activity: ActivityId) -> bool {
    trace.events.iter().any(|e| e.activity == activity)
}

/// Positions of the activation events of `candidate` in `trace`.
pub fn activations(
    candidate: &ConstraintCandidate,
    trace: &Trace,
    roles: &RoleTable,
) -> Vec<usize> {
    use TemplateId::*;
    let positions_of = |activity: ActivityId| -> Vec<usize> {
        (0..trace.len())
            .filter(|&p| trace.activity_at(p) == activity)
            .collect()
    };
    match candidate.template {
        Response | AlternateResponse | ChainResponse | RespondedExistence | NotSuccession
        | DirectAllocation | RoleBasedAllocation => positions_of(candidate.task_a()),
        Precedence | AlternatePrecedence | ChainPrecedence => positions_of(candidate.task_b()),
        BindingOfDuties | SeparationOfDuties => {
            if occurs(trace, candidate.task_b()) {
                positions_of(candidate.task_a())
            } else {
                Vec::new()
            }
        }
        RoleBasedResponse | RoleBasedPrecedence => {
            let group = candidate.group();
            positions_of(candidate.condition_activity())
                .into_iter()
                .filter(|&p| roles.has_role(trace.resource_at(p), group))
                .collect()
        }
    }
}

/// Whether the activation at `pos` is fulfilled. `pos` must be one of
/// [`activations`] for the same candidate and trace.
pub fn is_fulfilled(
    candidate: &ConstraintCandidate,
    pos: usize,
    trace: &Trace,
    roles: &RoleTable,
) -> bool {
    use TemplateId::*;
    let n = trace.len();
    let is = |p: usize, activity: ActivityId| trace.activity_at(p) == activity;
    match candidate.template {
        Response | RoleBasedResponse => (pos + 1..n).any(|q| is(q, candidate.task_b())),
        NotSuccession => !(pos + 1..n).any(|q| is(q, candidate.task_b())),
        AlternateResponse => {
            let (a, b) = (candidate.task_a(), candidate.task_b());
            match (pos + 1..n).find(|&q| is(q, b)) {
                Some(q) => (pos + 1..q).all(|r| !is(r, a)),
                None => false,
            }
        }
        ChainResponse => pos + 1 < n && is(pos + 1, candidate.task_b()),
        Precedence | RoleBasedPrecedence => (0..pos).any(|q| is(q, candidate.task_a())),
        AlternatePrecedence => {
            let (a, b) = (candidate.task_a(), candidate.task_b());
            match (0..pos).rev().find(|&q| is(q, a)) {
                Some(q) => (q + 1..pos).all(|r| !is(r, b)),
                None => false,
            }
        }
        ChainPrecedence => pos > 0 && is(pos - 1, candidate.task_a()),
        RespondedExistence => occurs(trace, candidate.task_b()),
        DirectAllocation => trace.resource_at(pos) == candidate.identity(),
        RoleBasedAllocation => roles.has_role(trace.resource_at(pos), candidate.group()),
        BindingOfDuties => {
            let b = candidate.task_b();
            let r = trace.resource_at(pos);
            trace
                .events
                .iter()
                .filter(|e| e.activity == b)
                .all(|e| e.resource == r)
        }
        SeparationOfDuties => {
            let b = candidate.task_b();
            let r = trace.resource_at(pos);
            trace
                .events
                .iter()
                .filter(|e| e.activity == b)
                .all(|e| e.resource != r)
        }
    }
}
