use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde_json::json;
use sqlminer::decimal::parse_unit_interval;
use sqlminer::engine::listing::ListingCounts;
use sqlminer::output::{label, records, write_results, Format};
use sqlminer::synth::{generate as synthesize, GeneratorConfig, Plant};
use sqlminer::{
    emit_sql as render_sql, emit_union, ConstraintMetrics, CsvColumns, DiscoveryConfig, EventLog,
    Miner, Mode, OccurrenceIndex, OrgModel, SchemaConfig, TemplateId, Thresholds,
};

use crate::report::RunReport;
use crate::{
    DiscoverArgs, EmitSqlArgs, GenerateArgs, LogArgs, MiningArgs, StatsArgs, ValidateArgs,
};

/// Bad flags or flag combinations.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// The engine and the oracle disagreed.
#[derive(Debug)]
pub struct Mismatch(pub usize);

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} candidate(s) disagree with the oracle", self.0)
    }
}

impl std::error::Error for Mismatch {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<sqlminer::Error>() {
            return match e {
                sqlminer::Error::Config(_)
                | sqlminer::Error::Identifier(_)
                | sqlminer::Error::Binding { .. } => 2,
                _ => 1,
            };
        }
    }
    1
}

fn read(path: &Path, report: &mut Option<&mut RunReport>) -> Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(r) = report {
        r.input(path, &bytes);
    }
    Ok(bytes)
}

fn columns(args: &LogArgs) -> CsvColumns {
    CsvColumns {
        event_id: args.col_event_id.clone(),
        trace_id: args.col_trace_id.clone(),
        activity: args.col_activity.clone(),
        timestamp: args.col_timestamp.clone(),
        resource: args.col_resource.clone(),
    }
}

fn load_log(args: &LogArgs, report: &mut Option<&mut RunReport>) -> Result<EventLog> {
    let path = args
        .log
        .as_ref()
        .ok_or_else(|| usage("--log is required"))?;
    let bytes = read(path, report)?;
    EventLog::from_csv_reader(bytes.as_slice(), &columns(args))
        .with_context(|| format!("parsing {}", path.display()))
}

fn load_org(args: &LogArgs, report: &mut Option<&mut RunReport>) -> Result<OrgModel> {
    match &args.relations {
        None => Ok(OrgModel::new()),
        Some(path) => {
            let bytes = read(path, report)?;
            OrgModel::from_csv_reader(bytes.as_slice())
                .with_context(|| format!("parsing {}", path.display()))
        }
    }
}

fn select_templates(names: &[String], has_relations: bool) -> Result<Vec<TemplateId>> {
    if names.is_empty() {
        return Ok(TemplateId::ALL
            .into_iter()
            .filter(|t| has_relations || !t.uses_roles())
            .collect());
    }
    let mut out = Vec::new();
    for name in names {
        let t: TemplateId = name.trim().parse()?;
        if t.uses_roles() && !has_relations {
            return Err(usage(format!("{t} needs --relations")));
        }
        out.push(t);
    }
    Ok(out)
}

fn discovery_config(args: &MiningArgs, has_relations: bool) -> Result<DiscoveryConfig> {
    let config = DiscoveryConfig {
        min_support: parse_unit_interval(&args.min_support).context("--min-support")?,
        min_confidence: parse_unit_interval(&args.min_confidence).context("--min-confidence")?,
        templates: select_templates(&args.templates, has_relations)?,
        jobs: args.jobs,
    };
    config.validate()?;
    Ok(config)
}

fn write_out(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn discover(args: DiscoverArgs) -> Result<()> {
    let started = Instant::now();
    let format: Format = args.format.parse()?;
    let config = discovery_config(&args.mining, args.input.relations.is_some())?;
    let mut report = RunReport::new("discover");
    let mut tracked = args.report.is_some().then_some(&mut report);
    let log = load_log(&args.input, &mut tracked)?;
    let org = load_org(&args.input, &mut tracked)?;

    let miner = Miner::new(&log, &org);
    let audited = miner.audit(&config)?;
    let passed = audited.iter().filter(|e| e.passed).count();
    let shown: Vec<_> = if args.audit {
        audited.clone()
    } else {
        audited.iter().filter(|e| e.passed).cloned().collect()
    };
    let mut buf = Vec::new();
    write_results(
        &mut buf,
        &records(&miner, &shown, args.audit),
        format,
        args.audit,
    )?;
    write_out(args.out.as_ref(), &buf)?;

    if let Some(path) = &args.report {
        report.config = BTreeMap::from([
            ("min_support", args.mining.min_support.clone()),
            ("min_confidence", args.mining.min_confidence.clone()),
            (
                "templates",
                config
                    .templates
                    .iter()
                    .map(|t| t.name())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("format", format.to_string()),
            ("audit", args.audit.to_string()),
            (
                "jobs",
                args.mining.jobs.map_or("auto".into(), |j| j.to_string()),
            ),
        ]);
        report.counts.traces = log.trace_count();
        report.counts.events = log.event_count();
        report.counts.candidates = audited.len();
        report.counts.results = passed;
        report.finish(started.elapsed());
        report.write(path)?;
    }
    Ok(())
}

pub fn emit_sql(args: EmitSqlArgs) -> Result<()> {
    let mode: Mode = args.mode.parse()?;
    let thresholds = Thresholds {
        min_support: parse_unit_interval(&args.min_support).context("--min-support")?,
        min_confidence: parse_unit_interval(&args.min_confidence).context("--min-confidence")?,
    };
    let schema = SchemaConfig {
        log_table: args.table,
        task: args.col_task,
        instance: args.col_instance,
        time: args.col_time,
        resource: args.col_resource,
        relation_table: args.relation_table,
        relation_resource: args.col_rel_resource,
        relation_type: args.col_relation_type,
        group: args.col_group,
    };
    let templates: Vec<TemplateId> = if args.all {
        TemplateId::ALL.to_vec()
    } else {
        args.template
            .iter()
            .map(|n| n.trim().parse())
            .collect::<sqlminer::Result<_>>()?
    };
    let text = if let [single] = templates.as_slice() {
        render_sql(*single, &schema, &thresholds, mode)?
    } else if args.union {
        emit_union(&templates, &schema, &thresholds, mode)?
    } else {
        let mut parts = Vec::new();
        for t in templates {
            parts.push(format!(
                "-- {t}\n{}",
                render_sql(t, &schema, &thresholds, mode)?
            ));
        }
        parts.join("\n")
    };
    write_out(args.out.as_ref(), text.as_bytes())
}

fn counts(m: &ConstraintMetrics) -> String {
    format!(
        "{}/{}/{}/{}",
        m.activation_count, m.fulfilment_count, m.condition_traces, m.total_traces
    )
}

#[derive(Default)]
struct Tally {
    candidates: usize,
    mismatches: usize,
    lines: Vec<String>,
    /// Per template: candidates whose literal SQL counts differ, and total.
    listing: BTreeMap<TemplateId, (usize, usize)>,
}

fn check(
    miner: &Miner,
    config: &DiscoveryConfig,
    listing: Option<Mode>,
    context: &str,
    tally: &mut Tally,
) -> Result<()> {
    let candidates = miner.candidates(&config.templates);
    let fast = miner.evaluate_all(&candidates, config.jobs)?;
    for (c, m) in candidates.iter().zip(&fast) {
        let slow = miner.oracle(c);
        tally.candidates += 1;
        if *m != slow {
            tally.mismatches += 1;
            tally.lines.push(format!(
                "mismatch {context}{}: engine {} oracle {} (activations/fulfilments/condition traces/traces)",
                label(miner, c),
                counts(m),
                counts(&slow)
            ));
        }
        if let Some(mode) = listing {
            let ListingCounts {
                rows,
                denominator,
                condition_traces,
                ..
            } = miner.listing_counts(c, mode);
            let entry = tally.listing.entry(c.template()).or_default();
            entry.1 += 1;
            if (rows, denominator, condition_traces)
                != (
                    slow.fulfilment_count,
                    slow.activation_count,
                    slow.condition_traces,
                )
            {
                entry.0 += 1;
            }
        }
    }
    Ok(())
}

pub fn validate(args: ValidateArgs) -> Result<()> {
    let mode: Mode = args.mode.parse()?;
    let listing = args.listing_deltas.then_some(mode);
    let mut tally = Tally::default();
    let mut logs = 0;

    if let Some(n) = args.sweep {
        if args.inject_fault {
            return Err(usage("--inject-fault needs --log"));
        }
        for seed in args.seed..args.seed + n {
            let syn = synthesize(&GeneratorConfig::sweep(seed))?;
            let config = discovery_config(&args.mining, !syn.org.is_empty())?;
            let miner = Miner::new(&syn.log, &syn.org);
            check(
                &miner,
                &config,
                listing,
                &format!("seed {seed} "),
                &mut tally,
            )?;
            logs += 1;
        }
    } else {
        let log = load_log(&args.input, &mut None)?;
        let org = load_org(&args.input, &mut None)?;
        let config = discovery_config(&args.mining, args.input.relations.is_some())?;
        let mut index = OccurrenceIndex::build(&log);
        if args.inject_fault {
            let first = &log.traces()[0];
            index.forget_last_occurrence(0, first.activity_at(0));
        }
        let miner = Miner::with_index(&log, &org, index);
        check(&miner, &config, listing, "", &mut tally)?;
        logs = 1;
    }

    let mut text = String::new();
    for line in &tally.lines {
        text.push_str(line);
        text.push('\n');
    }
    for (t, (differ, total)) in &tally.listing {
        text.push_str(&format!(
            "listing-delta {t} ({mode}): {differ} of {total} candidates counted differently by the SQL\n"
        ));
    }
    text.push_str(&format!(
        "validated {} candidates over {logs} log(s): {} mismatches\n",
        tally.candidates, tally.mismatches
    ));
    write_out(args.out.as_ref(), text.as_bytes())?;
    if tally.mismatches > 0 {
        return Err(Mismatch(tally.mismatches).into());
    }
    Ok(())
}

fn parse_plant(spec: &str, rate: f64, coverage: f64) -> Result<Plant> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [template, a, b] = parts.as_slice() else {
        return Err(usage(format!("--plant expects Template:a:b, got {spec:?}")));
    };
    Ok(Plant {
        template: template.parse()?,
        task_a: a.to_string(),
        task_b: b.to_string(),
        rate,
        coverage,
    })
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    let config = GeneratorConfig {
        alphabet: args.alphabet,
        traces: args.traces,
        min_len: args.min_len,
        max_len: args.max_len,
        resources: args.resources,
        groups: args.groups,
        seed: args.seed,
        plant: args
            .plant
            .as_deref()
            .map(|p| parse_plant(p, args.rate, args.coverage))
            .transpose()?,
    };
    let syn = synthesize(&config)?;
    let mut buf = Vec::new();
    syn.log.write_csv(&mut buf, &CsvColumns::default())?;
    write_out(args.out.as_ref(), &buf)?;
    if let Some(path) = &args.relations_out {
        let mut buf = Vec::new();
        syn.org.write_csv(&mut buf)?;
        fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.bookkeeping {
        let text = serde_json::to_string_pretty(&syn.bookkeeping)? + "\n";
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn stats(args: StatsArgs) -> Result<()> {
    let format: Format = args.format.parse()?;
    let log = load_log(&args.input, &mut None)?;
    let mut per_activity: BTreeMap<&str, u64> = BTreeMap::new();
    for t in log.traces() {
        for e in &t.events {
            *per_activity
                .entry(log.activity_name(e.activity))
                .or_default() += 1;
        }
    }
    let lengths: Vec<usize> = log.traces().iter().map(|t| t.len()).collect();
    let min = lengths.iter().min().copied().unwrap_or(0);
    let max = lengths.iter().max().copied().unwrap_or(0);
    let text = match format {
        Format::Json => {
            let v = json!({
                "traces": log.trace_count(),
                "events": log.event_count(),
                "activities": log.alphabet().len(),
                "resources": log.identities().len(),
                "min_trace_length": min,
                "max_trace_length": max,
                "activity_counts": per_activity,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("statistic,value\n");
            s.push_str(&format!("traces,{}\n", log.trace_count()));
            s.push_str(&format!("events,{}\n", log.event_count()));
            s.push_str(&format!("activities,{}\n", log.alphabet().len()));
            s.push_str(&format!("resources,{}\n", log.identities().len()));
            s.push_str(&format!("min_trace_length,{min}\n"));
            s.push_str(&format!("max_trace_length,{max}\n"));
            for (a, n) in &per_activity {
                s.push_str(&format!("count:{a},{n}\n"));
            }
            s
        }
    };
    write_out(args.out.as_ref(), text.as_bytes())
}
