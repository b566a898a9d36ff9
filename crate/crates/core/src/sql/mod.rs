//! SQL text for the discovery queries, one per template.
//!
//! Query bodies live in `templates/*.sql` with `{placeholder}` slots for
//! table and column names, thresholds, and UNION padding. `Verbatim` mode
//! renders them as published, defects included. `Corrected` mode applies the
//! entries of [`CORRECTIONS`] and nothing else, announcing each one in a
//! leading `--` comment.

use std::fmt;
use std::str::FromStr;

use crate::decimal::{render_literal, Rational};
use crate::error::{Error, Result};
use crate::templates::TemplateId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Verbatim,
    Corrected,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim" => Ok(Mode::Verbatim),
            "corrected" => Ok(Mode::Corrected),
            _ => Err(Error::Config(format!("unknown SQL mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Verbatim => "verbatim",
            Mode::Corrected => "corrected",
        })
    }
}

/// Table and column identifiers substituted into the queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaConfig {
    pub log_table: String,
    pub task: String,
    pub instance: String,
    pub time: String,
    pub resource: String,
    pub relation_table: String,
    pub relation_resource: String,
    pub relation_type: String,
    pub group: String,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        SchemaConfig {
            log_table: "Log".into(),
            task: "Task".into(),
            instance: "Instance".into(),
            time: "Time".into(),
            resource: "Resource".into(),
            relation_table: "Relation".into(),
            relation_resource: "Resource".into(),
            relation_type: "RelationType".into(),
            group: "Group".into(),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SchemaConfig {
    pub fn validate(&self) -> Result<()> {
        for id in [
            &self.log_table,
            &self.task,
            &self.instance,
            &self.time,
            &self.resource,
            &self.relation_table,
            &self.relation_resource,
            &self.relation_type,
            &self.group,
        ] {
            if !is_identifier(id) {
                return Err(Error::Identifier(id.clone()));
            }
        }
        Ok(())
    }

    fn lookup(&self, key: &str) -> Option<&str> {
        Some(match key {
            "log" => &self.log_table,
            "task" => &self.task,
            "instance" => &self.instance,
            "time" => &self.time,
            "resource" => &self.resource,
            "relation" => &self.relation_table,
            "rel_resource" => &self.relation_resource,
            "relation_type" => &self.relation_type,
            "group" => &self.group,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub min_support: Rational,
    pub min_confidence: Rational,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_support: Rational::new(7, 10),
            min_confidence: Rational::new(1, 2),
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let one = Rational::from_integer(1);
        if self.min_support > one || self.min_confidence > one {
            return Err(Error::Config("thresholds must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// One documented defect of a published query and its minimal fix, stated
/// on the unrendered template text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Correction {
    pub template: TemplateId,
    pub description: &'static str,
    pub find: &'static str,
    pub replace: &'static str,
}

pub const CORRECTIONS: [Correction; 5] = [
    Correction {
        template: TemplateId::Response,
        description: "missing AND before EXISTS",
        find: "= x.TaskA EXISTS (",
        replace: "= x.TaskA AND EXISTS (",
    },
    Correction {
        template: TemplateId::Response,
        description: "stray ']' after both Time columns",
        find: "b.{time}] > a.{time}]",
        replace: "b.{time} > a.{time}",
    },
    Correction {
        template: TemplateId::RespondedExistence,
        description: "activation filter on TaskA, existence check on TaskB",
        find: "WHERE a.{task} = x.TaskB AND EXISTS (SELECT * FROM {log} b WHERE b.{task} = x.TaskA AND",
        replace: "WHERE a.{task} = x.TaskA AND EXISTS (SELECT * FROM {log} b WHERE b.{task} = x.TaskB AND",
    },
    Correction {
        template: TemplateId::RoleBasedResponse,
        description: "missing space in 'InstanceFROM'",
        find: "(SELECT {instance}FROM {log} GROUP BY",
        replace: "(SELECT {instance} FROM {log} GROUP BY",
    },
    Correction {
        template: TemplateId::RoleBasedPrecedence,
        description: "missing space in 'InstanceFROM'",
        find: "(SELECT {instance}FROM {log} GROUP BY",
        replace: "(SELECT {instance} FROM {log} GROUP BY",
    },
];

pub fn corrections_for(template: TemplateId) -> impl Iterator<Item = &'static Correction> {
    CORRECTIONS.iter().filter(move |c| c.template == template)
}

/// Unrendered template text, exactly as stored.
pub fn template_source(template: TemplateId) -> &'static str {
    use TemplateId::*;
    match template {
        Response => include_str!("templates/response.sql"),
        AlternateResponse => include_str!("templates/alternate_response.sql"),
        ChainResponse => include_str!("templates/chain_response.sql"),
        Precedence => include_str!("templates/precedence.sql"),
        AlternatePrecedence => include_str!("templates/alternate_precedence.sql"),
        ChainPrecedence => include_str!("templates/chain_precedence.sql"),
        RespondedExistence => include_str!("templates/responded_existence.sql"),
        NotSuccession => include_str!("templates/not_succession.sql"),
        DirectAllocation => include_str!("templates/direct_allocation.sql"),
        RoleBasedAllocation => include_str!("templates/role_based_allocation.sql"),
        BindingOfDuties => include_str!("templates/binding_of_duties.sql"),
        SeparationOfDuties => include_str!("templates/separation_of_duties.sql"),
        RoleBasedResponse => include_str!("templates/role_based_response.sql"),
        RoleBasedPrecedence => include_str!("templates/role_based_precedence.sql"),
    }
}

/// Snake-case file stem used for templates and golden files.
pub fn file_stem(template: TemplateId) -> String {
    let mut out = String::new();
    for (i, ch) in template.name().chars().enumerate() {
        if ch.is_ascii_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.push(ch.to_ascii_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

fn substitute(text: &str, schema: &SchemaConfig, thresholds: &Thresholds, pad: &str) -> String {
    let mut out = String::with_capacity(text.len() + 64);
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').expect("unterminated placeholder") + open;
        let key = &rest[open + 1..close];
        match key {
            "min_support" => out.push_str(&render_literal(thresholds.min_support)),
            "min_confidence" => out.push_str(&render_literal(thresholds.min_confidence)),
            "pad" => out.push_str(pad),
            _ => out.push_str(
                schema
                    .lookup(key)
                    .unwrap_or_else(|| panic!("unknown placeholder {{{key}}}")),
            ),
        }
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

fn render(
    template: TemplateId,
    schema: &SchemaConfig,
    thresholds: &Thresholds,
    mode: Mode,
    pad_columns: usize,
) -> String {
    let mut text = template_source(template).to_string();
    let mut header = String::new();
    if mode == Mode::Corrected {
        for c in corrections_for(template) {
            debug_assert_eq!(text.matches(c.find).count(), 1, "{}", c.description);
            text = text.replacen(c.find, c.replace, 1);
            header.push_str(&format!("-- corrected: {}\n", c.description));
        }
    }
    let pad = ", ''".repeat(pad_columns);
    header + &substitute(&text, schema, thresholds, &pad)
}

/// The discovery query for one template.
pub fn emit_sql(
    template: TemplateId,
    schema: &SchemaConfig,
    thresholds: &Thresholds,
    mode: Mode,
) -> Result<String> {
    schema.validate()?;
    thresholds.validate()?;
    Ok(render(template, schema, thresholds, mode, 0))
}

/// Queries for several templates joined with `UNION`, in template order.
/// Templates with fewer parameters are padded with `''` columns so every
/// branch has the same width.
pub fn emit_union(
    templates: &[TemplateId],
    schema: &SchemaConfig,
    thresholds: &Thresholds,
    mode: Mode,
) -> Result<String> {
    schema.validate()?;
    thresholds.validate()?;
    let mut templates = templates.to_vec();
    templates.sort_unstable();
    templates.dedup();
    let width = templates
        .iter()
        .map(|t| t.signature().arity())
        .max()
        .unwrap_or(0);
    let parts: Vec<String> = templates
        .iter()
        .map(|&t| {
            let q = render(t, schema, thresholds, mode, width - t.signature().arity());
            q.trim_end_matches('\n').to_string()
        })
        .collect();
    Ok(parts.join("\nUNION\n") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults(t: TemplateId, mode: Mode) -> String {
        emit_sql(t, &SchemaConfig::default(), &Thresholds::default(), mode).unwrap()
    }

    #[test]
    fn every_correction_matches_once() {
        for c in &CORRECTIONS {
            assert_eq!(
                template_source(c.template).matches(c.find).count(),
                1,
                "{}",
                c.description
            );
        }
    }

    #[test]
    fn response_having_clause() {
        let sql = defaults(TemplateId::Response, Mode::Corrected);
        let having = &sql[sql.find("HAVING").unwrap()..];
        assert!(having.contains(") > 0.7 AND"));
        assert!(having.trim_end().ends_with("> 0.5"));
        assert!(sql.contains("x.TaskA AND EXISTS"));
        let body: String = sql.lines().filter(|l| !l.starts_with("--")).collect();
        assert!(!body.contains(']'));
    }

    #[test]
    fn table_rename() {
        let schema = SchemaConfig {
            log_table: "EventTable".into(),
            ..Default::default()
        };
        let sql = emit_sql(
            TemplateId::Response,
            &schema,
            &Thresholds::default(),
            Mode::Verbatim,
        )
        .unwrap();
        let plain = defaults(TemplateId::Response, Mode::Verbatim);
        assert_eq!(sql, plain.replace("Log", "EventTable"));
        assert!(!sql.contains("Log"));
    }

    #[test]
    fn responded_existence_delta() {
        let v = defaults(TemplateId::RespondedExistence, Mode::Verbatim);
        let c = defaults(TemplateId::RespondedExistence, Mode::Corrected);
        assert!(v.contains("WHERE a.Task = x.TaskB AND EXISTS"));
        assert!(c.contains("WHERE a.Task = x.TaskA AND EXISTS"));
        assert!(c.starts_with("-- corrected: "));
    }

    #[test]
    fn invalid_identifiers_rejected() {
        for bad in ["", "1abc", "a b", "x;DROP", "é"] {
            let schema = SchemaConfig {
                task: bad.into(),
                ..Default::default()
            };
            assert!(matches!(
                emit_sql(
                    TemplateId::Response,
                    &schema,
                    &Thresholds::default(),
                    Mode::Corrected
                ),
                Err(Error::Identifier(_))
            ));
        }
    }

    #[test]
    fn union_counts() {
        let schema = SchemaConfig::default();
        let th = Thresholds::default();
        let all = emit_union(&TemplateId::CONTROL_FLOW, &schema, &th, Mode::Corrected).unwrap();
        assert_eq!(all.matches("UNION").count(), 7);
        let one = emit_union(&[TemplateId::Precedence], &schema, &th, Mode::Corrected).unwrap();
        assert_eq!(one.matches("UNION").count(), 0);
        assert_eq!(one, defaults(TemplateId::Precedence, Mode::Corrected));
    }

    #[test]
    fn union_pads_narrow_templates() {
        let sql = emit_union(
            &[TemplateId::Response, TemplateId::RoleBasedResponse],
            &SchemaConfig::default(),
            &Thresholds::default(),
            Mode::Verbatim,
        )
        .unwrap();
        assert!(sql.starts_with("SELECT 'response', TaskA, TaskB, '',\n"));
    }

    #[test]
    fn stems() {
        assert_eq!(
            file_stem(TemplateId::RoleBasedPrecedence),
            "role_based_precedence"
        );
        assert_eq!(file_stem(TemplateId::Response), "response");
    }
}
