//! Greedy energy-aware time shifting. Machine assignment and the order of
//! operations on every machine stay fixed; only start times move, inside
//! windows that keep the schedule valid and the makespan unchanged or lower.

use crate::decode::Schedule;
use crate::evolve::Refiner;
use crate::model::EnrichedInstance;

/// Which objective a child minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Cost,
    Emissions,
}

/// Feasible start range `(l, u)` of flat operation `op` in `s`.
///
/// `l` is the later of the job predecessor's and machine predecessor's end;
/// `u` is the earliest of the job successor's start, the machine successor's
/// start and the makespan, minus the duration. With a valid `s` the current
/// start always lies in the window.
pub fn feasible_window(s: &Schedule, op: usize, e: &EnrichedInstance) -> (usize, usize) {
    let seqs = s.machine_sequences(e.instance().machine_count());
    window_in(s, op, e, &seqs)
}

fn window_in(s: &Schedule, op: usize, e: &EnrichedInstance, seqs: &[Vec<usize>]) -> (usize, usize) {
    let inst = e.instance();
    let spec = inst.operation(op);
    let me = &s.ops[op];
    let duration = me.end - me.start;
    let mut lo = 0;
    let mut hi = s.makespan();
    if spec.position > 0 {
        lo = lo.max(s.ops[op - 1].end);
    }
    if spec.position + 1 < inst.jobs()[spec.job].operations.len() {
        hi = hi.min(s.ops[op + 1].start);
    }
    let lane = &seqs[me.machine];
    let at = lane
        .iter()
        .position(|&o| o == op)
        .expect("op is on its machine");
    if at > 0 {
        lo = lo.max(s.ops[lane[at - 1]].end);
    }
    if let Some(&next) = lane.get(at + 1) {
        hi = hi.min(s.ops[next].start);
    }
    let hi = hi.saturating_sub(duration).max(lo.min(me.start));
    (lo.min(me.start), hi)
}

/// Operations by energy use, largest first; ties by (job, op).
pub fn refine_queue(s: &Schedule, e: &EnrichedInstance) -> Vec<usize> {
    let inst = e.instance();
    let energy = |op: usize| e.operation_energy_kwh(op, s.ops[op].option);
    let mut queue: Vec<usize> = (0..s.ops.len()).collect();
    queue.sort_by(|&a, &b| {
        energy(b)
            .total_cmp(&energy(a))
            .then_with(|| inst.op_ref(a).cmp(&inst.op_ref(b)))
    });
    queue
}

/// One greedy child: each queued operation moves to the start in its current
/// window that minimizes the target objective, earliest on ties.
pub fn refine_for(parent: &Schedule, e: &EnrichedInstance, target: Target) -> Schedule {
    let mut child = parent.clone();
    let seqs = parent.machine_sequences(e.instance().machine_count());
    for op in refine_queue(parent, e) {
        let (lo, hi) = window_in(&child, op, e, &seqs);
        let job = e.instance().operation(op).job;
        let duration = child.ops[op].end - child.ops[op].start;
        let score = |t: usize| {
            let c = e.window_cost(job, t, duration);
            match target {
                Target::Cost => c.cost,
                Target::Emissions => c.emissions,
            }
        };
        let mut best = (child.ops[op].start, score(child.ops[op].start));
        for t in lo..=hi {
            let v = score(t);
            if v < best.1 || (v == best.1 && t < best.0) {
                best = (t, v);
            }
        }
        child.ops[op].start = best.0;
        child.ops[op].end = best.0 + duration;
    }
    child
}

/// Cost-minimizing and emission-minimizing children of `parent`.
pub fn local_refine(parent: &Schedule, e: &EnrichedInstance) -> (Schedule, Schedule) {
    (
        refine_for(parent, e, Target::Cost),
        refine_for(parent, e, Target::Emissions),
    )
}

/// Plugs [`local_refine`] into the evolutionary loop.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyRefiner;

impl Refiner for GreedyRefiner {
    fn refine(&self, parent: &Schedule, e: &EnrichedInstance) -> Vec<Schedule> {
        let (a, b) = local_refine(parent, e);
        vec![a, b]
    }
}
