//! Seeded synthetic event logs, optionally with one planted control-flow
//! constraint whose activation and fulfilment counts are known exactly.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::event_log::{EventLog, EventLogBuilder, Timestamp};
use crate::org_model::{OrgModel, ROLE};
use crate::templates::TemplateId;

const EPOCH_2020: i64 = 1_577_836_800;

#[derive(Clone, Debug, PartialEq)]
pub struct Plant {
    pub template: TemplateId,
    pub task_a: String,
    pub task_b: String,
    /// Probability that an activation is fulfilled. For RespondedExistence
    /// the draw is per trace, since fulfilment is a trace-level property.
    pub rate: f64,
    /// Probability that a trace carries the planted pattern at all.
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub alphabet: usize,
    pub traces: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub resources: usize,
    /// Role groups for the generated org model; zero yields no relations.
    pub groups: usize,
    pub seed: u64,
    pub plant: Option<Plant>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            alphabet: 8,
            traces: 100,
            min_len: 3,
            max_len: 12,
            resources: 5,
            groups: 3,
            seed: 0,
            plant: None,
        }
    }
}

impl GeneratorConfig {
    /// A small random shape (at most 10 traces, 8 activities, 5 resources,
    /// length 12) derived from `seed`, for differential sweeps.
    pub fn sweep(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        let max_len = rng.random_range(1..=12);
        GeneratorConfig {
            alphabet: rng.random_range(1..=8),
            traces: rng.random_range(1..=10),
            min_len: rng.random_range(1..=max_len),
            max_len,
            resources: rng.random_range(1..=5),
            groups: rng.random_range(0..=3),
            seed,
            plant: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: &str| Err(Error::Config(m.to_string()));
        if self.alphabet == 0 || self.traces == 0 || self.resources == 0 {
            return usage("alphabet, traces and resources must be positive");
        }
        if self.min_len == 0 || self.min_len > self.max_len {
            return usage("trace lengths must satisfy 1 <= min_len <= max_len");
        }
        if let Some(p) = &self.plant {
            if !p.template.is_control_flow() {
                return usage("only control-flow templates can be planted");
            }
            if !(0.0..=1.0).contains(&p.rate) || !(0.0..=1.0).contains(&p.coverage) {
                return usage("plant rate and coverage must lie in [0, 1]");
            }
            if p.coverage == 0.0 {
                return usage("plant coverage must be positive");
            }
            if p.task_a == p.task_b {
                return usage("planted activities must differ");
            }
            let names = activity_names(self.alphabet);
            if !names.contains(&p.task_a) || !names.contains(&p.task_b) {
                return usage("planted activities must belong to the generated alphabet");
            }
            if p.rate > 0.0 && self.max_len < 2 {
                return usage("a fulfilled activation needs traces of length >= 2");
            }
        }
        Ok(())
    }
}

/// `a`..`z`, then `act26`, `act27`, ...
pub fn activity_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("act{i}")
            }
        })
        .collect()
}

pub fn resource_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("i{i}")).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlantRecord {
    pub template: String,
    pub task_a: String,
    pub task_b: String,
    pub activations: u64,
    pub fulfilments: u64,
    pub condition_traces: u64,
    pub total_traces: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bookkeeping {
    /// Occurrences per configured activity, zeros included.
    pub activity_counts: BTreeMap<String, u64>,
    pub events: u64,
    pub planted: Option<PlantRecord>,
}

#[derive(Clone, Debug)]
pub struct Synthetic {
    pub log: EventLog,
    pub org: OrgModel,
    pub bookkeeping: Bookkeeping,
}

/// Consecutive events that filler never splits.
type Unit = Vec<usize>;

struct PlantLayout {
    units: Vec<Unit>,
    activations: u64,
    fulfilments: u64,
}

fn layout(plant: &Plant, a: usize, b: usize, slots: usize, rng: &mut ChaCha8Rng) -> PlantLayout {
    use TemplateId::*;
    let k = rng.random_range(1..=slots.max(1));
    let mut draws: Vec<bool> = (0..k).map(|_| rng.random_bool(plant.rate)).collect();
    if plant.template == RespondedExistence {
        let all = draws[0];
        draws.iter_mut().for_each(|d| *d = all);
    }
    let fulfilled = draws.iter().filter(|&&d| d).count();
    let unfulfilled = k - fulfilled;
    let repeat = |x: usize, n: usize| vec![vec![x]; n];

    let units = match plant.template {
        // fulfilled a's, one b, then a's with no b after them
        Response => {
            let mut u = repeat(a, fulfilled);
            if fulfilled > 0 {
                u.push(vec![b]);
            }
            u.extend(repeat(a, unfulfilled));
            u
        }
        NotSuccession => {
            let mut u = repeat(a, unfulfilled);
            if unfulfilled > 0 {
                u.push(vec![b]);
            }
            u.extend(repeat(a, fulfilled));
            u
        }
        // every unit starts with a, so a lone a is always cut off by the next one
        AlternateResponse | ChainResponse => {
            let mut u: Vec<Unit> = draws
                .iter()
                .map(|&d| if d { vec![a, b] } else { vec![a] })
                .collect();
            u.shuffle(rng);
            u
        }
        RespondedExistence => {
            let mut u = repeat(a, k);
            if fulfilled > 0 {
                u.push(vec![b]);
            }
            u.shuffle(rng);
            u
        }
        Precedence => {
            let mut u = repeat(b, unfulfilled);
            if fulfilled > 0 {
                u.push(vec![a]);
            }
            u.extend(repeat(b, fulfilled));
            u
        }
        // every unit ends with b
        AlternatePrecedence | ChainPrecedence => {
            let mut u: Vec<Unit> = draws
                .iter()
                .map(|&d| if d { vec![a, b] } else { vec![b] })
                .collect();
            u.shuffle(rng);
            u
        }
        _ => unreachable!("validated: control-flow templates only"),
    };
    PlantLayout {
        units,
        activations: k as u64,
        fulfilments: fulfilled as u64,
    }
}

/// Generates a log, an org model, and the bookkeeping that describes them.
pub fn generate(config: &GeneratorConfig) -> Result<Synthetic> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let activities = activity_names(config.alphabet);
    let resources = resource_names(config.resources);

    let planted = config.plant.as_ref().map(|p| {
        let a = activities
            .iter()
            .position(|x| *x == p.task_a)
            .expect("validated");
        let b = activities
            .iter()
            .position(|x| *x == p.task_b)
            .expect("validated");
        (p, a, b)
    });
    let filler: Vec<usize> = (0..config.alphabet)
        .filter(|i| planted.is_none_or(|(_, a, b)| *i != a && *i != b))
        .collect();

    let mut record = planted.map(|(p, _, _)| PlantRecord {
        template: p.template.name().to_string(),
        task_a: p.task_a.clone(),
        task_b: p.task_b.clone(),
        total_traces: config.traces as u64,
        ..Default::default()
    });

    let mut builder = EventLogBuilder::default();
    let mut counts = vec![0u64; config.alphabet];
    let mut event_no = 0u64;
    for t in 1..=config.traces {
        let len = rng.random_range(config.min_len..=config.max_len);
        let mut units: Vec<Unit> = Vec::new();
        if let Some((p, a, b)) = planted {
            if filler.is_empty() || rng.random_bool(p.coverage) {
                let slots = if p.rate > 0.0 { len / 2 } else { len };
                let plan = layout(p, a, b, slots, &mut rng);
                let rec = record.as_mut().expect("record exists with plant");
                rec.activations += plan.activations;
                rec.fulfilments += plan.fulfilments;
                rec.condition_traces += 1;
                units = plan.units;
            }
        }
        let used: usize = units.iter().map(Vec::len).sum();
        if !filler.is_empty() {
            for _ in used..len.max(used) {
                let at = rng.random_range(0..=units.len());
                units.insert(at, vec![filler[rng.random_range(0..filler.len())]]);
            }
        }
        // planted units keep their relative order; filler lands between them
        for activity in units.into_iter().flatten() {
            event_no += 1;
            counts[activity] += 1;
            let resource = &resources[rng.random_range(0..resources.len())];
            let ts = Timestamp((EPOCH_2020 + 60 * event_no as i64) * 1_000_000_000);
            builder.push(
                &format!("e{event_no}"),
                &format!("t{t}"),
                &activities[activity],
                ts,
                resource,
            )?;
        }
    }
    let log = builder.build()?;

    let mut org = OrgModel::new();
    if config.groups > 0 {
        for r in &resources {
            let g = rng.random_range(1..=config.groups);
            org.insert(r, ROLE, &format!("G{g}"));
            if rng.random_bool(0.2) {
                let extra = rng.random_range(1..=config.groups);
                org.insert(r, ROLE, &format!("G{extra}"));
            }
        }
    }

    let bookkeeping = Bookkeeping {
        activity_counts: activities.iter().cloned().zip(counts).collect(),
        events: event_no,
        planted: record,
    };
    Ok(Synthetic {
        log,
        org,
        bookkeeping,
    })
}
