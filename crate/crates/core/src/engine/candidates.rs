use crate::event_log::EventLog;
use crate::org_model::RoleTable;
use crate::templates::{ConstraintCandidate, ParamBinding, Signature, TemplateId};

/// Instantiates every template over the symbols observed in the inputs.
///
/// Output is sorted by template (declaration order) and then binding, which
/// for interned ids is lexicographic by name.
pub fn generate_candidates(
    log: &EventLog,
    roles: &RoleTable,
    templates: &[TemplateId],
) -> Vec<ConstraintCandidate> {
    let mut templates = templates.to_vec();
    templates.sort_unstable();
    templates.dedup();

    let activities: Vec<_> = log.activity_ids().collect();
    let mut out = Vec::new();
    for template in templates {
        let mut push = |binding| {
            out.push(ConstraintCandidate::new(template, binding).expect("generated binding fits"))
        };
        match template.signature() {
            Signature::ActivityPair => {
                for &a in &activities {
                    for &b in activities.iter().filter(|&&b| b != a) {
                        push(ParamBinding::pair(a, b));
                    }
                }
            }
            Signature::ActivityIdentity => {
                for &a in &activities {
                    for r in log.resource_ids() {
                        push(ParamBinding::with_identity(a, r));
                    }
                }
            }
            Signature::ActivityGroup => {
                for &a in &activities {
                    for g in roles.group_ids() {
                        push(ParamBinding::with_group(a, g));
                    }
                }
            }
            Signature::ActivityPairGroup => {
                for &a in &activities {
                    for &b in activities.iter().filter(|&&b| b != a) {
                        for g in roles.group_ids() {
                            push(ParamBinding::pair_with_group(a, b, g));
                        }
                    }
                }
            }
        }
    }
    out
}
