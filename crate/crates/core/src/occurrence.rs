use crate::event_log::{ActivityId, EventLog};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    activity: ActivityId,
    start: u32,
    end: u32,
}

/// Inverted positions: for each (trace, activity) the ascending 0-based
/// positions of that activity in the trace, plus for each activity the
/// ascending list of traces that contain it.
///
/// Storage is flat. Each trace owns a run of slots sorted by activity, and
/// each slot addresses a run of `positions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceIndex {
    trace_slots: Vec<u32>,
    slots: Vec<Slot>,
    positions: Vec<u32>,
    containing: Vec<Vec<u32>>,
}

impl OccurrenceIndex {
    pub fn build(log: &EventLog) -> Self {
        let mut trace_slots = Vec::with_capacity(log.trace_count() + 1);
        let mut slots = Vec::new();
        let mut positions = Vec::with_capacity(log.event_count());
        let mut containing = vec![Vec::new(); log.alphabet().len()];

        let mut order: Vec<(ActivityId, u32)> = Vec::new();
        for (t, trace) in log.traces().iter().enumerate() {
            trace_slots.push(slots.len() as u32);
            order.clear();
            order.extend(
                trace
                    .events
                    .iter()
                    .enumerate()
                    .map(|(p, e)| (e.activity, p as u32)),
            );
            order.sort_unstable();
            for group in order.chunk_by(|x, y| x.0 == y.0) {
                let start = positions.len() as u32;
                positions.extend(group.iter().map(|&(_, p)| p));
                let activity = group[0].0;
                slots.push(Slot {
                    activity,
                    start,
                    end: positions.len() as u32,
                });
                containing[activity.0 as usize].push(t as u32);
            }
        }
        trace_slots.push(slots.len() as u32);

        OccurrenceIndex {
            trace_slots,
            slots,
            positions,
            containing,
        }
    }

    fn trace_run(&self, trace: usize) -> &[Slot] {
        let lo = self.trace_slots[trace] as usize;
        let hi = self.trace_slots[trace + 1] as usize;
        &self.slots[lo..hi]
    }

    /// Positions of `activity` in trace `trace`, or `None` when absent.
    pub fn positions(&self, trace: usize, activity: ActivityId) -> Option<&[u32]> {
        let run = self.trace_run(trace);
        run.binary_search_by_key(&activity, |s| s.activity)
            .ok()
            .map(|i| &self.positions[run[i].start as usize..run[i].end as usize])
    }

    /// Positions of `activity` in `trace`; empty when absent.
    pub fn positions_or_empty(&self, trace: usize, activity: ActivityId) -> &[u32] {
        self.positions(trace, activity).unwrap_or(&[])
    }

    /// Ascending indices of the traces in which `activity` occurs.
    pub fn traces_containing(&self, activity: ActivityId) -> &[u32] {
        self.containing
            .get(activity.0 as usize)
            .map_or(&[], Vec::as_slice)
    }

    pub fn trace_count(&self) -> usize {
        self.trace_slots.len() - 1
    }

    /// Sum of all list lengths.
    pub fn total_positions(&self) -> usize {
        self.slots.iter().map(|s| (s.end - s.start) as usize).sum()
    }

    /// Every `(trace, activity, positions)` entry in trace then activity order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, ActivityId, &[u32])> + '_ {
        (0..self.trace_count()).flat_map(move |t| {
            self.trace_run(t).iter().map(move |s| {
                (
                    t,
                    s.activity,
                    &self.positions[s.start as usize..s.end as usize],
                )
            })
        })
    }

    /// Fault injection for the validation harness: forgets the last
    /// occurrence of `activity` in `trace`. Returns false when there was
    /// nothing to forget.
    #[doc(hidden)]
    pub fn forget_last_occurrence(&mut self, trace: usize, activity: ActivityId) -> bool {
        let lo = self.trace_slots[trace] as usize;
        let hi = self.trace_slots[trace + 1] as usize;
        match self.slots[lo..hi].binary_search_by_key(&activity, |s| s.activity) {
            Ok(i) if self.slots[lo + i].end > self.slots[lo + i].start => {
                self.slots[lo + i].end -= 1;
                true
            }
            _ => false,
        }
    }
}

/// Builds the occurrence index of `log`.
pub fn build_occurrence_index(log: &EventLog) -> OccurrenceIndex {
    OccurrenceIndex::build(log)
}
