//! Denormalized event-log tables: one row per event, grouped into traces.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};

use chrono::{DateTime, NaiveDate, NaiveDateTime, SecondsFormat, Utc};

use crate::error::{Error, Result};

/// Index into [`EventLog::alphabet`]. Ids follow the lexicographic order of
/// activity names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityId(pub u32);

/// Index into [`EventLog::identities`], lexicographically ordered like
/// [`ActivityId`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResourceId(pub u32);

/// Instant in nanoseconds since the Unix epoch, UTC.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(pub i64);

impl Timestamp {
    /// Accepts RFC 3339, naive ISO-8601 date-times (read as UTC), plain dates,
    /// and integer epoch seconds.
    pub fn parse(raw: &str) -> Option<Timestamp> {
        let raw = raw.trim();
        if let Ok(secs) = raw.parse::<i64>() {
            return secs.checked_mul(1_000_000_000).map(Timestamp);
        }
        if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
            return dt.timestamp_nanos_opt().map(Timestamp);
        }
        for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
            if let Ok(dt) = NaiveDateTime::parse_from_str(raw, fmt) {
                return dt.and_utc().timestamp_nanos_opt().map(Timestamp);
            }
        }
        NaiveDate::parse_from_str(raw, "%Y-%m-%d")
            .ok()
            .and_then(|d| d.and_hms_opt(0, 0, 0))
            .and_then(|dt| dt.and_utc().timestamp_nanos_opt())
            .map(Timestamp)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dt = DateTime::<Utc>::from_timestamp_nanos(self.0);
        f.write_str(&dt.to_rfc3339_opts(SecondsFormat::AutoSi, true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub event_id: String,
    pub activity: ActivityId,
    pub resource: ResourceId,
    pub timestamp: Timestamp,
}

/// Events of one process instance, ordered by timestamp with file position
/// breaking ties. Never empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub id: String,
    pub events: Vec<Event>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn activity_at(&self, pos: usize) -> ActivityId {
        self.events[pos].activity
    }

    pub fn resource_at(&self, pos: usize) -> ResourceId {
        self.events[pos].resource
    }
}

/// Header names of the five event columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvColumns {
    pub event_id: String,
    pub trace_id: String,
    pub activity: String,
    pub timestamp: String,
    pub resource: String,
}

impl Default for CsvColumns {
    fn default() -> Self {
        CsvColumns {
            event_id: "event_id".into(),
            trace_id: "trace_id".into(),
            activity: "activity".into(),
            timestamp: "timestamp".into(),
            resource: "resource".into(),
        }
    }
}

/// An immutable, trace-partitioned event log.
///
/// Activities and resources are interned; their ids are dense and sorted so
/// that comparing ids agrees with comparing names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventLog {
    traces: Vec<Trace>,
    activities: Vec<String>,
    resources: Vec<String>,
    event_count: usize,
}

impl EventLog {
    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn trace(&self, idx: usize) -> &Trace {
        &self.traces[idx]
    }

    pub fn trace_count(&self) -> usize {
        self.traces.len()
    }

    pub fn event_count(&self) -> usize {
        self.event_count
    }

    /// Distinct activity names, sorted.
    pub fn alphabet(&self) -> &[String] {
        &self.activities
    }

    /// Distinct resource names, sorted.
    pub fn identities(&self) -> &[String] {
        &self.resources
    }

    pub fn activity_name(&self, id: ActivityId) -> &str {
        &self.activities[id.0 as usize]
    }

    pub fn resource_name(&self, id: ResourceId) -> &str {
        &self.resources[id.0 as usize]
    }

    pub fn activity_id(&self, name: &str) -> Option<ActivityId> {
        self.activities
            .binary_search_by(|a| a.as_str().cmp(name))
            .ok()
            .map(|i| ActivityId(i as u32))
    }

    pub fn resource_id(&self, name: &str) -> Option<ResourceId> {
        self.resources
            .binary_search_by(|r| r.as_str().cmp(name))
            .ok()
            .map(|i| ResourceId(i as u32))
    }

    pub fn activity_ids(&self) -> impl Iterator<Item = ActivityId> {
        (0..self.activities.len() as u32).map(ActivityId)
    }

    pub fn resource_ids(&self) -> impl Iterator<Item = ResourceId> {
        (0..self.resources.len() as u32).map(ResourceId)
    }

    pub fn from_csv_reader<R: Read>(reader: R, columns: &CsvColumns) -> Result<EventLog> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
            return Err(Error::Validation("empty file".into()));
        }
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::parse(1, format!("missing column {name:?} in header")))
        };
        let cols = [
            find(&columns.event_id)?,
            find(&columns.trace_id)?,
            find(&columns.activity)?,
            find(&columns.timestamp)?,
            find(&columns.resource)?,
        ];

        let mut builder = EventLogBuilder::default();
        let mut record = csv::StringRecord::new();
        while rdr.read_record(&mut record)? {
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != header.len() {
                return Err(Error::parse(
                    line,
                    format!("expected {} fields, found {}", header.len(), record.len()),
                ));
            }
            let field = |i: usize| &record[cols[i]];
            let timestamp = Timestamp::parse(field(3)).ok_or_else(|| {
                Error::parse(line, format!("unparseable timestamp {:?}", field(3)))
            })?;
            builder
                .push(field(0), field(1), field(2), timestamp, field(4))
                .map_err(|e| match e {
                    Error::Validation(msg) => Error::Validation(format!("line {line}: {msg}")),
                    other => other,
                })?;
        }
        builder.build()
    }

    /// Writes the log with the given header names; traces in log order,
    /// events in trace order.
    pub fn write_csv<W: Write>(&self, writer: W, columns: &CsvColumns) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            &columns.event_id,
            &columns.trace_id,
            &columns.activity,
            &columns.timestamp,
            &columns.resource,
        ])?;
        for trace in &self.traces {
            for e in &trace.events {
                w.write_record([
                    e.event_id.as_str(),
                    trace.id.as_str(),
                    self.activity_name(e.activity),
                    &e.timestamp.to_string(),
                    self.resource_name(e.resource),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, columns: &CsvColumns) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, columns)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Parses a CSV event log using the default column names.
pub fn parse_event_log(source: &[u8]) -> Result<EventLog> {
    EventLog::from_csv_reader(source, &CsvColumns::default())
}

/// Distinct activities of the log, lexicographically ordered.
pub fn activity_alphabet(log: &EventLog) -> BTreeSet<&str> {
    log.alphabet().iter().map(String::as_str).collect()
}

struct RawEvent {
    event_id: String,
    activity: String,
    resource: String,
    timestamp: Timestamp,
}

/// Accumulates events in file order and produces a validated [`EventLog`].
#[derive(Default)]
pub struct EventLogBuilder {
    traces: Vec<(String, Vec<RawEvent>)>,
    trace_slots: HashMap<String, usize>,
    event_ids: HashSet<String>,
}

impl EventLogBuilder {
    pub fn push(
        &mut self,
        event_id: &str,
        trace_id: &str,
        activity: &str,
        timestamp: Timestamp,
        resource: &str,
    ) -> Result<()> {
        let (event_id, activity, resource) = (event_id.trim(), activity.trim(), resource.trim());
        if activity.is_empty() {
            return Err(Error::Validation(format!(
                "event {event_id:?} has an empty activity"
            )));
        }
        if resource.is_empty() {
            return Err(Error::Validation(format!(
                "event {event_id:?} has an empty resource"
            )));
        }
        if !self.event_ids.insert(event_id.to_string()) {
            return Err(Error::Validation(format!(
                "duplicate event_id {event_id:?}"
            )));
        }
        let slot = match self.trace_slots.get(trace_id) {
            Some(&slot) => slot,
            None => {
                self.traces.push((trace_id.to_string(), Vec::new()));
                self.trace_slots
                    .insert(trace_id.to_string(), self.traces.len() - 1);
                self.traces.len() - 1
            }
        };
        self.traces[slot].1.push(RawEvent {
            event_id: event_id.to_string(),
            activity: activity.to_string(),
            resource: resource.to_string(),
            timestamp,
        });
        Ok(())
    }

    pub fn build(self) -> Result<EventLog> {
        if self.traces.is_empty() {
            return Err(Error::Validation("log contains no events".into()));
        }
        let mut activities = BTreeSet::new();
        let mut resources = BTreeSet::new();
        for (_, events) in &self.traces {
            for e in events {
                activities.insert(e.activity.as_str());
                resources.insert(e.resource.as_str());
            }
        }
        let activities: Vec<String> = activities.into_iter().map(str::to_string).collect();
        let resources: Vec<String> = resources.into_iter().map(str::to_string).collect();
        let activity_ids: HashMap<&str, ActivityId> = activities
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), ActivityId(i as u32)))
            .collect();
        let resource_ids: HashMap<&str, ResourceId> = resources
            .iter()
            .enumerate()
            .map(|(i, r)| (r.as_str(), ResourceId(i as u32)))
            .collect();

        let mut event_count = 0;
        let traces = self
            .traces
            .iter()
            .map(|(id, raw)| {
                let mut events: Vec<Event> = raw
                    .iter()
                    .map(|e| Event {
                        event_id: e.event_id.clone(),
                        activity: activity_ids[e.activity.as_str()],
                        resource: resource_ids[e.resource.as_str()],
                        timestamp: e.timestamp,
                    })
                    .collect();
                // stable: equal timestamps keep file order
                events.sort_by_key(|e| e.timestamp);
                event_count += events.len();
                Trace {
                    id: id.clone(),
                    events,
                }
            })
            .collect();

        Ok(EventLog {
            traces,
            activities,
            resources,
            event_count,
        })
    }
}
