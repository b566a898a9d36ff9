//! The four-trace university example log and its role relations.

use crate::event_log::{parse_event_log, EventLog};
use crate::org_model::{parse_relations, OrgModel};

pub const EXAMPLE_LOG_CSV: &str = include_str!("../data/example_log.csv");

pub const EXAMPLE_RELATIONS_CSV: &str = include_str!("../data/example_relations.csv");

pub fn example_log() -> EventLog {
    parse_event_log(EXAMPLE_LOG_CSV.as_bytes()).expect("example log parses")
}

pub fn example_org() -> OrgModel {
    parse_relations(EXAMPLE_RELATIONS_CSV.as_bytes()).expect("example relations parse")
}
