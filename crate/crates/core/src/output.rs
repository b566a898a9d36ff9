//! Result records and their CSV / JSON encodings.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::decimal::render_metric;
use crate::engine::{ConstraintMetrics, Evaluated, Miner};
use crate::error::{Error, Result};
use crate::templates::{ConstraintCandidate, TemplateId};

pub const COLUMNS: [&str; 10] = [
    "template",
    "task_a",
    "task_b",
    "identity",
    "group",
    "activation_count",
    "fulfilment_count",
    "condition_trace_fraction",
    "support",
    "confidence",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// One output row, with names resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultRecord {
    pub template: TemplateId,
    pub task_a: String,
    pub task_b: Option<String>,
    pub identity: Option<String>,
    pub group: Option<String>,
    pub metrics: ConstraintMetrics,
    /// Present in audit output only.
    pub passed: Option<bool>,
}

impl ResultRecord {
    fn metric_texts(&self) -> [String; 5] {
        let m = &self.metrics;
        [
            m.activation_count.to_string(),
            m.fulfilment_count.to_string(),
            render_metric(m.condition_trace_fraction()),
            render_metric(m.support()),
            render_metric(m.confidence()),
        ]
    }
}

pub fn records(miner: &Miner, evaluated: &[Evaluated], audit: bool) -> Vec<ResultRecord> {
    let log = miner.log();
    evaluated
        .iter()
        .map(|e| {
            let b = e.candidate.binding();
            ResultRecord {
                template: e.candidate.template(),
                task_a: log.activity_name(e.candidate.task_a()).to_string(),
                task_b: b.task_b.map(|x| log.activity_name(x).to_string()),
                identity: b.identity.map(|x| log.resource_name(x).to_string()),
                group: b.group.map(|g| miner.roles().group_name(g).to_string()),
                metrics: e.metrics,
                passed: audit.then_some(e.passed),
            }
        })
        .collect()
}

impl fmt::Display for ResultRecord {
    /// `Template(a, b, identity, group)` with unused slots left out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<&str> = std::iter::once(self.task_a.as_str())
            .chain(self.task_b.as_deref())
            .chain(self.identity.as_deref())
            .chain(self.group.as_deref())
            .collect();
        write!(f, "{}({})", self.template, params.join(", "))
    }
}

/// The candidate with activity, resource and group names filled in.
pub fn label(miner: &Miner, candidate: &ConstraintCandidate) -> String {
    let e = Evaluated {
        candidate: *candidate,
        metrics: ConstraintMetrics::default(),
        passed: false,
    };
    records(miner, &[e], false)[0].to_string()
}

fn write_csv<W: Write>(out: W, records: &[ResultRecord], audit: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if audit {
        header.push("passed");
    }
    w.write_record(&header)?;
    for r in records {
        let opt = |x: &Option<String>| x.clone().unwrap_or_default();
        let mut row = vec![
            r.template.name().to_string(),
            r.task_a.clone(),
            opt(&r.task_b),
            opt(&r.identity),
            opt(&r.group),
        ];
        row.extend(r.metric_texts());
        if audit {
            row.push(r.passed.unwrap_or(false).to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn number(text: &str) -> Value {
    Value::Number(Number::from_str(text).expect("rendered metrics are valid JSON numbers"))
}

fn json_value(records: &[ResultRecord], audit: bool) -> Value {
    let rows = records
        .iter()
        .map(|r| {
            let opt = |x: &Option<String>| x.clone().map_or(Value::Null, Value::String);
            let [acts, fuls, frac, sup, conf] = r.metric_texts();
            let mut obj = Map::new();
            obj.insert("template".into(), Value::String(r.template.name().into()));
            obj.insert("task_a".into(), Value::String(r.task_a.clone()));
            obj.insert("task_b".into(), opt(&r.task_b));
            obj.insert("identity".into(), opt(&r.identity));
            obj.insert("group".into(), opt(&r.group));
            obj.insert("activation_count".into(), number(&acts));
            obj.insert("fulfilment_count".into(), number(&fuls));
            obj.insert("condition_trace_fraction".into(), number(&frac));
            obj.insert("support".into(), number(&sup));
            obj.insert("confidence".into(), number(&conf));
            if audit {
                obj.insert("passed".into(), Value::Bool(r.passed.unwrap_or(false)));
            }
            Value::Object(obj)
        })
        .collect();
    Value::Array(rows)
}

/// Writes records; `audit` adds the `passed` column.
pub fn write_results<W: Write>(
    mut out: W,
    records: &[ResultRecord],
    format: Format,
    audit: bool,
) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, records, audit),
        Format::Json => {
            let text = serde_json::to_string_pretty(&json_value(records, audit))
                .map_err(|e| Error::Validation(e.to_string()))?;
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")?;
            Ok(())
        }
    }
}

pub fn results_to_string(records: &[ResultRecord], format: Format, audit: bool) -> String {
    let mut buf = Vec::new();
    write_results(&mut buf, records, format, audit).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8 output")
}
