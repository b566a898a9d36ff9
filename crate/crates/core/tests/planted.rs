use sqlminer::synth::{generate, GeneratorConfig, Plant};
use sqlminer::{ActivityId, ConstraintCandidate, Miner, ParamBinding, TemplateId};

fn planted_metrics(template: TemplateId, rate: f64, coverage: f64, seed: u64) {
    let cfg = GeneratorConfig {
        alphabet: 6,
        traces: 80,
        min_len: 2,
        max_len: 14,
        seed,
        plant: Some(Plant {
            template,
            task_a: "a".into(),
            task_b: "b".into(),
            rate,
            coverage,
        }),
        ..Default::default()
    };
    let syn = generate(&cfg).unwrap();
    let log = &syn.log;
    let miner = Miner::new(log, &syn.org);
    // a rate of zero can leave one side out of the log entirely
    let id = |name| log.activity_id(name).unwrap_or(ActivityId(u32::MAX));
    let c = ConstraintCandidate::new(template, ParamBinding::pair(id("a"), id("b"))).unwrap();
    let m = miner.evaluate(&c);
    let rec = syn.bookkeeping.planted.unwrap();
    let got = (
        m.activation_count,
        m.fulfilment_count,
        m.condition_traces,
        m.total_traces,
    );
    let want = (
        rec.activations,
        rec.fulfilments,
        rec.condition_traces,
        rec.total_traces,
    );
    assert_eq!(
        got, want,
        "{template} rate {rate} coverage {coverage} seed {seed}"
    );
}

#[test]
fn bookkeeping_matches_engine_for_every_plantable_template() {
    for t in TemplateId::CONTROL_FLOW {
        for (rate, coverage) in [(1.0, 1.0), (0.0, 1.0), (0.6, 0.7), (0.3, 0.4)] {
            for seed in 0..5 {
                planted_metrics(t, rate, coverage, seed);
            }
        }
    }
}

#[test]
fn two_letter_alphabet_plants_every_trace() {
    let cfg = GeneratorConfig {
        alphabet: 2,
        traces: 20,
        plant: Some(Plant {
            template: TemplateId::Response,
            task_a: "a".into(),
            task_b: "b".into(),
            rate: 0.5,
            coverage: 0.1,
        }),
        ..Default::default()
    };
    let rec = generate(&cfg).unwrap().bookkeeping.planted.unwrap();
    assert_eq!(rec.condition_traces, 20);
}
