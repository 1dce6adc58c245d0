//! Four-string genotype, the threshold decoder that places operations at the
//! first time step satisfying their price and emission caps, objective
//! evaluation, and the inverse mapping from schedules back to genotypes.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EnergyProfile, EnrichedInstance};

/// Gene strings of one individual. `machine`, `price_cap` and `emission_cap`
/// are indexed by flat operation id; `sequence` lists zero-based job indices
/// in placement order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Genotype {
    pub sequence: Vec<usize>,
    pub machine: Vec<usize>,
    pub price_cap: Vec<f64>,
    pub emission_cap: Vec<f64>,
}

impl Genotype {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn validate(&self, e: &EnrichedInstance) -> Result<()> {
        let inst = e.instance();
        let n = inst.total_operations();
        let mut problems = Vec::new();
        for (name, len) in [
            ("sequence", self.sequence.len()),
            ("machine", self.machine.len()),
            ("price", self.price_cap.len()),
            ("emission", self.emission_cap.len()),
        ] {
            if len != n {
                problems.push(format!("{name} string has length {len}, expected {n}"));
            }
        }
        if problems.is_empty() {
            let mut counts = vec![0usize; inst.job_count()];
            for &j in &self.sequence {
                match counts.get_mut(j) {
                    Some(c) => *c += 1,
                    None => problems.push(format!("sequence names unknown job {}", j + 1)),
                }
            }
            for (j, (&have, want)) in counts.iter().zip(inst.operation_counts()).enumerate() {
                if have != want {
                    problems.push(format!(
                        "job {} occurs {have} times, expected {want}",
                        j + 1
                    ));
                }
            }
            for (op, &m) in self.machine.iter().enumerate() {
                if m >= inst.operation(op).options.len() {
                    let (i, j) = inst.op_ref(op);
                    problems.push(format!(
                        "machine gene {m} invalid for ({},{})",
                        i + 1,
                        j + 1
                    ));
                }
            }
            if self
                .price_cap
                .iter()
                .chain(&self.emission_cap)
                .any(|c| c.is_nan())
            {
                problems.push("NaN cap".into());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

/// Placement of one operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledOp {
    /// Index into the operation's eligible options.
    pub option: usize,
    /// Zero-based machine index.
    pub machine: usize,
    pub start: usize,
    pub end: usize,
}

/// Concrete start and end steps per operation, indexed by flat operation id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub ops: Vec<ScheduledOp>,
    /// Length of the (possibly tiled) horizon the schedule lives in.
    pub horizon_used: usize,
}

impl Schedule {
    pub fn makespan(&self) -> usize {
        self.ops.iter().map(|o| o.end).max().unwrap_or(0)
    }

    /// Flat operation ids per machine in start order.
    pub fn machine_sequences(&self, machine_count: usize) -> Vec<Vec<usize>> {
        let mut seqs = vec![Vec::new(); machine_count];
        for (op, s) in self.ops.iter().enumerate() {
            seqs[s.machine].push(op);
        }
        for seq in &mut seqs {
            seq.sort_by_key(|&op| (self.ops[op].start, op));
        }
        seqs
    }

    /// Every violated schedule invariant, empty when the schedule is valid.
    pub fn violations(&self, e: &EnrichedInstance) -> Vec<String> {
        let inst = e.instance();
        let mut problems = Vec::new();
        if self.ops.len() != inst.total_operations() {
            problems.push(format!(
                "{} operations placed, instance has {}",
                self.ops.len(),
                inst.total_operations()
            ));
            return problems;
        }
        if self.horizon_used < e.horizon() {
            problems.push(format!(
                "horizon {} shorter than profile {}",
                self.horizon_used,
                e.horizon()
            ));
        }
        for (op, s) in self.ops.iter().enumerate() {
            let spec = inst.operation(op);
            let tag = format!("({},{})", spec.job + 1, spec.position + 1);
            let Some(opt) = spec.options.get(s.option) else {
                problems.push(format!("{tag} uses unknown option {}", s.option));
                continue;
            };
            if opt.machine != s.machine {
                problems.push(format!("{tag} option/machine mismatch"));
            }
            if s.end != s.start + opt.duration {
                problems.push(format!(
                    "{tag} ends at {} instead of {}",
                    s.end,
                    s.start + opt.duration
                ));
            }
            if s.end > self.horizon_used {
                problems.push(format!("{tag} ends after horizon {}", self.horizon_used));
            }
            if spec.position > 0 {
                let prev = &self.ops[op - 1];
                if s.start < prev.end {
                    problems.push(format!("{tag} starts before its job predecessor ends"));
                }
            }
        }
        for seq in self.machine_sequences(inst.machine_count()) {
            for w in seq.windows(2) {
                let (a, b) = (&self.ops[w[0]], &self.ops[w[1]]);
                if b.start < a.end {
                    let (i, j) = inst.op_ref(w[0]);
                    let (i2, j2) = inst.op_ref(w[1]);
                    problems.push(format!(
                        "({},{}) and ({},{}) overlap on machine {}",
                        i + 1,
                        j + 1,
                        i2 + 1,
                        j2 + 1,
                        a.machine + 1
                    ));
                }
            }
        }
        problems
    }
}

/// Makespan (steps), energy cost (EUR) and emissions (gCO2eq); all minimized.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub makespan: usize,
    pub energy_cost: f64,
    pub emissions: f64,
}

impl ObjectiveVector {
    pub fn new(makespan: usize, energy_cost: f64, emissions: f64) -> Self {
        Self {
            makespan,
            energy_cost,
            emissions,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.makespan as f64, self.energy_cost, self.emissions]
    }

    /// Same makespan and both real components within `rel` relative error.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0);
        self.makespan == other.makespan
            && close(self.energy_cost, other.energy_cost)
            && close(self.emissions, other.emissions)
    }

    /// Lexicographic order on (makespan, cost, emissions).
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.makespan
            .cmp(&other.makespan)
            .then(self.energy_cost.total_cmp(&other.energy_cost))
            .then(self.emissions.total_cmp(&other.emissions))
    }
}

/// Escape used when an operation cannot be placed within the horizon under
/// its caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelaxMode {
    /// Tile the profile cyclically in quarter-horizon increments.
    ExtendHorizon,
    /// Raise the violated caps just enough to fit inside the horizon.
    RelaxCaps,
}

impl RelaxMode {
    /// Mode of a generation: even indices extend, odd indices relax.
    pub fn for_generation(generation: usize) -> Self {
        if generation % 2 == 0 {
            Self::ExtendHorizon
        } else {
            Self::RelaxCaps
        }
    }
}

/// How a cap gene is compared with the profile over an operation's window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapRule {
    /// Every occupied step must satisfy the cap.
    StepMax,
    /// The mean over the occupied steps must satisfy the cap; for a fixed
    /// operation this bounds its total cost and emissions.
    #[default]
    WindowMean,
}

impl CapRule {
    /// The smallest (price, emission) caps admitting `[start, start+duration)`.
    pub fn window_need(self, profile: &EnergyProfile, start: usize, duration: usize) -> (f64, f64) {
        match self {
            CapRule::StepMax => (start..start + duration)
                .fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |(p, e), s| {
                    (p.max(profile.price_at(s)), e.max(profile.emission_at(s)))
                }),
            CapRule::WindowMean => {
                let (mut p, mut e) = (0.0, 0.0);
                for s in start..start + duration {
                    p += profile.price_at(s);
                    e += profile.emission_at(s);
                }
                (p / duration as f64, e / duration as f64)
            }
        }
    }
}

/// Uniform random genotype: a uniformly shuffled multiset permutation,
/// uniform machine options, and caps uniform over each series' range.
pub fn random_genotype<R: Rng + ?Sized>(e: &EnrichedInstance, rng: &mut R) -> Genotype {
    let inst = e.instance();
    let mut sequence: Vec<usize> = inst
        .operation_counts()
        .iter()
        .enumerate()
        .flat_map(|(j, &n)| std::iter::repeat(j).take(n))
        .collect();
    sequence.shuffle(rng);
    let machine = inst
        .operations()
        .map(|op| rng.gen_range(0..op.options.len()))
        .collect();
    let n = inst.total_operations();
    let (plo, phi) = e.profile().price_range();
    let (elo, ehi) = e.profile().emission_range();
    let price_cap = (0..n).map(|_| uniform(rng, plo, phi)).collect();
    let emission_cap = (0..n).map(|_| uniform(rng, elo, ehi)).collect();
    Genotype {
        sequence,
        machine,
        price_cap,
        emission_cap,
    }
}

pub(crate) fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// Busy intervals of one machine, sorted by start.
#[derive(Debug, Default, Clone)]
struct Timeline {
    busy: Vec<(usize, usize)>,
}

impl Timeline {
    /// Earliest `t >= from` such that `[t, t+duration)` is idle.
    fn first_free(&self, from: usize, duration: usize) -> usize {
        let mut t = from;
        let first = self.busy.partition_point(|&(_, end)| end <= t);
        for &(s, e) in &self.busy[first..] {
            if t + duration <= s {
                break;
            }
            t = t.max(e);
        }
        t
    }

    fn last_end(&self) -> usize {
        self.busy.last().map_or(0, |&(_, e)| e)
    }

    fn insert(&mut self, start: usize, end: usize) {
        let at = self.busy.partition_point(|&(s, _)| s < start);
        self.busy.insert(at, (start, end));
    }
}

/// Genotype-to-schedule decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Decoder {
    pub relax: RelaxMode,
    pub cap_rule: CapRule,
}

impl Default for RelaxMode {
    fn default() -> Self {
        RelaxMode::ExtendHorizon
    }
}

impl Decoder {
    pub fn new(relax: RelaxMode, cap_rule: CapRule) -> Self {
        Self { relax, cap_rule }
    }

    /// Places operations in sequence-string order, each at the earliest step
    /// after its job predecessor where its machine has an idle gap of the
    /// operation's length and the window satisfies both caps.
    ///
    /// If no such step exists, `ExtendHorizon` keeps searching the tiled
    /// profile, growing the horizon in quarter-profile increments (an
    /// operation whose caps no phase of the profile satisfies is pushed one
    /// full profile period past the point where its machine and job are
    /// free); `RelaxCaps` raises the violated caps by the smallest common
    /// fraction of each series' range that admits a window inside the
    /// original horizon.
    pub fn decode(&self, g: &Genotype, e: &EnrichedInstance) -> Schedule {
        let inst = e.instance();
        let profile = e.profile();
        let period = profile.len();
        let increment = period.div_ceil(4).max(1);
        let mut horizon = period;
        let grow = |horizon: usize, needed: usize| -> usize {
            if needed <= horizon {
                horizon
            } else {
                horizon + (needed - horizon).div_ceil(increment) * increment
            }
        };

        let mut timelines = vec![Timeline::default(); inst.machine_count()];
        let mut next_pos = vec![0usize; inst.job_count()];
        let mut ready = vec![0usize; inst.job_count()];
        let mut ops = vec![
            ScheduledOp {
                option: 0,
                machine: 0,
                start: 0,
                end: 0
            };
            inst.total_operations()
        ];

        for &job in &g.sequence {
            let op = inst.op_id(job, next_pos[job]);
            next_pos[job] += 1;
            let option = g.machine[op];
            let opt = inst.operation(op).options[option];
            let line = &timelines[opt.machine];
            let fits = |t: usize, caps: (f64, f64)| {
                let (p, em) = self.cap_rule.window_need(profile, t, opt.duration);
                p <= caps.0 && em <= caps.1
            };
            let caps = (g.price_cap[op], g.emission_cap[op]);
            let search = |caps: (f64, f64), last: usize| -> Option<usize> {
                let mut t = ready[job];
                loop {
                    t = line.first_free(t, opt.duration);
                    if t > last {
                        return None;
                    }
                    if fits(t, caps) {
                        return Some(t);
                    }
                    t += 1;
                }
            };

            let start = match self.relax {
                RelaxMode::ExtendHorizon => {
                    let base = ready[job].max(line.last_end());
                    search(caps, base + period - 1).unwrap_or(base + period)
                }
                RelaxMode::RelaxCaps => {
                    let inside = horizon.checked_sub(opt.duration);
                    match inside.and_then(|last| search(caps, last)) {
                        Some(t) => t,
                        None => match self.relaxed_caps(e, line, ready[job], opt.duration, caps) {
                            Some(relaxed) => search(relaxed, period - opt.duration)
                                .expect("relaxed caps admit the chosen window"),
                            None => line.first_free(ready[job], opt.duration),
                        },
                    }
                }
            };
            let end = start + opt.duration;
            horizon = grow(horizon, end);
            timelines[opt.machine].insert(start, end);
            ready[job] = end;
            ops[op] = ScheduledOp {
                option,
                machine: opt.machine,
                start,
                end,
            };
        }
        Schedule {
            ops,
            horizon_used: horizon,
        }
    }

    /// Caps raised by the smallest common fraction of each series' range
    /// that admits an idle window inside the original horizon, or `None`
    /// when the machine has no idle window there at all.
    fn relaxed_caps(
        &self,
        e: &EnrichedInstance,
        line: &Timeline,
        ready: usize,
        duration: usize,
        caps: (f64, f64),
    ) -> Option<(f64, f64)> {
        let profile = e.profile();
        let last = profile.len().checked_sub(duration)?;
        let span = |(lo, hi): (f64, f64)| if hi > lo { hi - lo } else { 1.0 };
        let (rp, re) = (span(profile.price_range()), span(profile.emission_range()));
        let mut best: Option<(f64, (f64, f64))> = None;
        let mut t = ready;
        loop {
            t = line.first_free(t, duration);
            if t > last {
                break;
            }
            let need = self.cap_rule.window_need(profile, t, duration);
            let lambda = ((need.0 - caps.0) / rp)
                .max((need.1 - caps.1) / re)
                .max(0.0);
            if best.map_or(true, |(b, _)| lambda < b) {
                best = Some((lambda, need));
            }
            t += 1;
        }
        best.map(|(_, need)| (caps.0.max(need.0), caps.1.max(need.1)))
    }

    /// Genotype that decodes (under `ExtendHorizon`) to a schedule that is no
    /// worse than `s` in every objective: jobs listed by start time (ties by
    /// machine, then job), machines as in `s`, and each cap set to the
    /// smallest value admitting the operation's current window.
    pub fn encode(&self, s: &Schedule, e: &EnrichedInstance) -> Genotype {
        let inst = e.instance();
        let mut order: Vec<usize> = (0..s.ops.len()).collect();
        order.sort_by_key(|&op| (s.ops[op].start, s.ops[op].machine, inst.op_ref(op).0, op));
        let sequence = order.iter().map(|&op| inst.op_ref(op).0).collect();
        let machine = s.ops.iter().map(|o| o.option).collect();
        let (price_cap, emission_cap) = s
            .ops
            .iter()
            .map(|o| {
                self.cap_rule
                    .window_need(e.profile(), o.start, o.end - o.start)
            })
            .unzip();
        Genotype {
            sequence,
            machine,
            price_cap,
            emission_cap,
        }
    }
}

/// Decodes with the default cap rule.
pub fn decode(g: &Genotype, e: &EnrichedInstance, relax: RelaxMode) -> Schedule {
    Decoder::new(relax, CapRule::default()).decode(g, e)
}

/// Encodes with the default cap rule.
pub fn encode(s: &Schedule, e: &EnrichedInstance) -> Genotype {
    Decoder::default().encode(s, e)
}

/// Makespan plus summed per-operation cost and emissions. Refuses invalid
/// schedules with the list of violations.
pub fn evaluate(s: &Schedule, e: &EnrichedInstance) -> Result<ObjectiveVector> {
    let problems = s.violations(e);
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(evaluate_unchecked(s, e))
}

pub(crate) fn evaluate_unchecked(s: &Schedule, e: &EnrichedInstance) -> ObjectiveVector {
    let inst = e.instance();
    let (mut cost, mut emissions) = (0.0, 0.0);
    for (op, o) in s.ops.iter().enumerate() {
        let c = e.window_cost(inst.operation(op).job, o.start, o.end - o.start);
        cost += c.cost;
        emissions += c.emissions;
    }
    ObjectiveVector::new(s.makespan(), cost, emissions)
}

/// Export form of one placed operation; indices are one-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperationRecord {
    pub job: usize,
    pub op: usize,
    pub machine: usize,
    pub start: usize,
    pub end: usize,
    pub cost_eur: f64,
    pub emissions_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveRecord {
    pub makespan: usize,
    pub energy_cost_eur: f64,
    pub emissions_g: f64,
}

impl From<ObjectiveVector> for ObjectiveRecord {
    fn from(v: ObjectiveVector) -> Self {
        Self {
            makespan: v.makespan,
            energy_cost_eur: v.energy_cost,
            emissions_g: v.emissions,
        }
    }
}

impl From<ObjectiveRecord> for ObjectiveVector {
    fn from(r: ObjectiveRecord) -> Self {
        ObjectiveVector::new(r.makespan, r.energy_cost_eur, r.emissions_g)
    }
}

/// JSON export record of a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub objectives: ObjectiveRecord,
    pub horizon_used: usize,
    pub operations: Vec<OperationRecord>,
}

pub fn schedule_record(s: &Schedule, e: &EnrichedInstance) -> ScheduleRecord {
    let inst = e.instance();
    let operations = s
        .ops
        .iter()
        .enumerate()
        .map(|(op, o)| {
            let (i, j) = inst.op_ref(op);
            let c = e.window_cost(i, o.start, o.end - o.start);
            OperationRecord {
                job: i + 1,
                op: j + 1,
                machine: o.machine + 1,
                start: o.start,
                end: o.end,
                cost_eur: c.cost,
                emissions_g: c.emissions,
            }
        })
        .collect();
    ScheduleRecord {
        objectives: evaluate_unchecked(s, e).into(),
        horizon_used: s.horizon_used,
        operations,
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::model::{enrich, Instance};

    fn enriched(
        jobs: Vec<Vec<Vec<(usize, usize)>>>,
        machines: usize,
        price: Vec<f64>,
        em: Vec<f64>,
    ) -> EnrichedInstance {
        let inst = Instance::new(machines, jobs).unwrap();
        enrich(inst, EnergyProfile::new(15, price, em).unwrap(), 500.0).unwrap()
    }

    #[test]
    fn unconstrained_packing() {
        let e = enriched(
            vec![vec![vec![(0, 1)], vec![(0, 1)]]],
            1,
            vec![5.0; 8],
            vec![5.0; 8],
        );
        let g = Genotype {
            sequence: vec![0, 0],
            machine: vec![0, 0],
            price_cap: vec![f64::INFINITY; 2],
            emission_cap: vec![f64::INFINITY; 2],
        };
        for relax in [RelaxMode::ExtendHorizon, RelaxMode::RelaxCaps] {
            let s = decode(&g, &e, relax);
            assert_eq!((s.ops[0].start, s.ops[1].start), (0, 1));
            assert_eq!(s.makespan(), 2);
        }
    }

    #[test]
    fn gap_insertion() {
        // job 0 blocks machine 0 over [3,5); job 1's unit op fits before it
        let e = enriched(
            vec![vec![vec![(1, 3)], vec![(0, 2)]], vec![vec![(0, 2)]]],
            2,
            vec![1.0; 12],
            vec![1.0; 12],
        );
        let g = Genotype {
            sequence: vec![0, 0, 1],
            machine: vec![0, 0, 0],
            price_cap: vec![9.0; 3],
            emission_cap: vec![9.0; 3],
        };
        let s = decode(&g, &e, RelaxMode::ExtendHorizon);
        assert_eq!((s.ops[1].start, s.ops[1].end), (3, 5));
        assert_eq!(s.ops[2].start, 0);
        assert!(s.violations(&e).is_empty());
    }

    #[test]
    fn relax_caps_below_series_minimum() {
        let e = enriched(vec![vec![vec![(0, 2)]]], 1, vec![30.0; 8], vec![200.0; 8]);
        let g = Genotype {
            sequence: vec![0],
            machine: vec![0],
            price_cap: vec![1.0],
            emission_cap: vec![1.0],
        };
        for rule in [CapRule::StepMax, CapRule::WindowMean] {
            let s = Decoder::new(RelaxMode::RelaxCaps, rule).decode(&g, &e);
            assert_eq!(s.ops[0].start, 0);
            assert_eq!(s.horizon_used, 8);
        }
    }

    #[test]
    fn extend_horizon_tiles_in_quarters() {
        // the only admissible step is 1; the machine is busy there until step 8
        let e = enriched(
            vec![vec![vec![(0, 8)]], vec![vec![(0, 1)]]],
            1,
            vec![5.0, 1.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0],
            vec![0.0; 8],
        );
        let g = Genotype {
            sequence: vec![0, 1],
            machine: vec![0, 0],
            price_cap: vec![9.0, 1.0],
            emission_cap: vec![9.0, 9.0],
        };
        let s = Decoder::new(RelaxMode::ExtendHorizon, CapRule::StepMax).decode(&g, &e);
        assert_eq!(s.ops[1].start, 9);
        assert_eq!(s.horizon_used, 10);
        assert!(evaluate(&s, &e).is_ok());

        let s = Decoder::new(RelaxMode::RelaxCaps, CapRule::StepMax).decode(&g, &e);
        // no idle window inside the horizon: placed right after, horizon grows
        assert_eq!(s.ops[1].start, 8);
        assert_eq!(s.horizon_used, 10);
    }

    #[test]
    fn unsatisfiable_caps_wait_one_period() {
        let e = enriched(vec![vec![vec![(0, 1)]]], 1, vec![4.0; 8], vec![4.0; 8]);
        let g = Genotype {
            sequence: vec![0],
            machine: vec![0],
            price_cap: vec![1.0],
            emission_cap: vec![9.0],
        };
        let s = decode(&g, &e, RelaxMode::ExtendHorizon);
        assert_eq!(s.ops[0].start, 8);
        assert_eq!(s.horizon_used, 10);
    }

    #[test]
    fn single_option_genes_are_zero() {
        let e = enriched(
            vec![vec![vec![(0, 1)], vec![(1, 2)]], vec![vec![(1, 1)]]],
            2,
            vec![1.0, 2.0],
            vec![1.0, 2.0],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_genotype(&e, &mut rng);
        assert_eq!(g.machine, vec![0, 0, 0]);
        g.validate(&e).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_genotype(&e, &mut rng), g);
    }

    #[test]
    fn encode_takes_window_maximum() {
        let mut price = vec![10.0; 10];
        price[4..7].copy_from_slice(&[3.0, 5.0, 2.0]);
        let e = enriched(vec![vec![vec![(0, 3)]]], 1, price, vec![1.0; 10]);
        let s = Schedule {
            ops: vec![ScheduledOp {
                option: 0,
                machine: 0,
                start: 4,
                end: 7,
            }],
            horizon_used: 10,
        };
        let g = Decoder::new(RelaxMode::ExtendHorizon, CapRule::StepMax).encode(&s, &e);
        assert_eq!(g.price_cap, vec![5.0]);
        let g = Decoder::new(RelaxMode::ExtendHorizon, CapRule::WindowMean).encode(&s, &e);
        assert_eq!(g.price_cap, vec![10.0 / 3.0]);
    }

    #[test]
    fn encode_tie_rule() {
        let e = enriched(
            vec![vec![vec![(1, 2)]], vec![vec![(0, 2)]]],
            2,
            vec![1.0; 4],
            vec![1.0; 4],
        );
        let s = Schedule {
            ops: vec![
                ScheduledOp {
                    option: 0,
                    machine: 1,
                    start: 0,
                    end: 2,
                },
                ScheduledOp {
                    option: 0,
                    machine: 0,
                    start: 0,
                    end: 2,
                },
            ],
            horizon_used: 4,
        };
        assert_eq!(encode(&s, &e).sequence, vec![1, 0]);
    }

    #[test]
    fn evaluate_refuses_invalid() {
        let e = enriched(
            vec![vec![vec![(0, 2)], vec![(0, 1)]]],
            1,
            vec![1.0; 6],
            vec![1.0; 6],
        );
        let s = Schedule {
            ops: vec![
                ScheduledOp {
                    option: 0,
                    machine: 0,
                    start: 1,
                    end: 3,
                },
                ScheduledOp {
                    option: 0,
                    machine: 0,
                    start: 2,
                    end: 3,
                },
            ],
            horizon_used: 6,
        };
        match evaluate(&s, &e) {
            Err(Error::Validation(p)) => assert!(p.len() >= 2, "{p:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn evaluate_single_op() {
        let e = enriched(vec![vec![vec![(0, 2)]]], 1, vec![100.0; 4], vec![2.0; 4]);
        let s = Schedule {
            ops: vec![ScheduledOp {
                option: 0,
                machine: 0,
                start: 0,
                end: 2,
            }],
            horizon_used: 4,
        };
        let v = evaluate(&s, &e).unwrap();
        assert_eq!(v.makespan, 2);
        assert_eq!(v.energy_cost, 25.0);
        assert_eq!(v.emissions, 500.0);
    }

    #[test]
    fn evaluate_empty() {
        let inst = Instance::new(1, vec![]).unwrap();
        let e = enrich(
            inst,
            EnergyProfile::new(15, vec![1.0], vec![1.0]).unwrap(),
            500.0,
        )
        .unwrap();
        let s = Schedule {
            ops: vec![],
            horizon_used: 1,
        };
        assert_eq!(evaluate(&s, &e).unwrap(), ObjectiveVector::new(0, 0.0, 0.0));
    }

    #[test]
    fn timeline_first_free() {
        let mut t = Timeline::default();
        t.insert(2, 4);
        t.insert(6, 7);
        assert_eq!(t.first_free(0, 2), 0);
        assert_eq!(t.first_free(0, 3), 7);
        assert_eq!(t.first_free(1, 2), 4);
        assert_eq!(t.first_free(3, 1), 4);
        assert_eq!(t.first_free(5, 1), 5);
        assert_eq!(t.last_end(), 7);
    }
}
