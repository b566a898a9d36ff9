//! Declarative process discovery over relational event logs.
//!
//! A log of `(event, trace, activity, timestamp, resource)` rows and an
//! optional organisational model are scanned for instances of fourteen
//! constraint templates (control flow, resource assignment, and roles).
//! Every candidate gets a support and a confidence; those above both
//! thresholds are reported. The matching SQL queries can be emitted too.

pub mod decimal;
pub mod engine;
pub mod error;
pub mod event_log;
pub mod fixtures;
pub mod occurrence;
pub mod org_model;
pub mod output;
pub mod sql;
pub mod synth;
pub mod templates;

pub use decimal::Rational;
pub use engine::{
    discover, evaluate_candidate, generate_candidates, naive_oracle, ConstraintMetrics,
    DiscoveryConfig, Evaluated, Miner,
};
pub use error::{Error, Result};
pub use event_log::{
    parse_event_log, ActivityId, CsvColumns, EventLog, ResourceId, Timestamp, Trace,
};
pub use occurrence::{build_occurrence_index, OccurrenceIndex};
pub use org_model::{parse_relations, GroupId, OrgModel, RoleTable};
pub use sql::{emit_sql, emit_union, Mode, SchemaConfig, Thresholds};
pub use templates::{ConstraintCandidate, ParamBinding, TemplateId};
