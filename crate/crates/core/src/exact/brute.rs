use super::{dominates, FrontMember, ParetoFront};
use crate::decode::{ObjectiveVector, Schedule, ScheduledOp};
use crate::error::{Error, Result};
use crate::model::EnrichedInstance;

/// Size guard for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    pub max_ops: usize,
    pub max_horizon: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        Self {
            max_ops: 6,
            max_horizon: 24,
        }
    }
}

/// Exact Pareto front over every machine assignment and every start-time
/// combination inside the profile horizon that respects job precedence and
/// machine capacity. Among schedules with equal objectives the one found
/// first (lexicographically earliest assignment and starts) is kept.
pub fn brute_force_pareto(e: &EnrichedInstance, limits: BruteForceLimits) -> Result<ParetoFront> {
    let inst = e.instance();
    if inst.total_operations() > limits.max_ops {
        return Err(Error::Limit(format!(
            "{} operations exceed the brute-force limit of {}",
            inst.total_operations(),
            limits.max_ops
        )));
    }
    if e.horizon() > limits.max_horizon {
        return Err(Error::Limit(format!(
            "horizon of {} steps exceeds the brute-force limit of {}",
            e.horizon(),
            limits.max_horizon
        )));
    }
    let mut search = Search {
        e,
        ops: Vec::with_capacity(inst.total_operations()),
        archive: Vec::new(),
    };
    search.descend(0, 0.0, 0.0);
    let horizon = e.horizon();
    Ok(ParetoFront::from_candidates(
        search
            .archive
            .into_iter()
            .map(|(objectives, ops)| FrontMember {
                objectives,
                schedule: Schedule {
                    ops,
                    horizon_used: horizon,
                },
                genotype: None,
            }),
    ))
}

struct Search<'a> {
    e: &'a EnrichedInstance,
    ops: Vec<ScheduledOp>,
    archive: Vec<(ObjectiveVector, Vec<ScheduledOp>)>,
}

impl Search<'_> {
    fn descend(&mut self, op: usize, cost: f64, emissions: f64) {
        let inst = self.e.instance();
        if op == inst.total_operations() {
            let makespan = self.ops.iter().map(|o| o.end).max().unwrap_or(0);
            self.offer(ObjectiveVector::new(makespan, cost, emissions));
            return;
        }
        let spec = inst.operation(op);
        let ready = if spec.position == 0 {
            0
        } else {
            self.ops[op - 1].end
        };
        for (option, opt) in spec.options.iter().enumerate() {
            let Some(last) = self.e.horizon().checked_sub(opt.duration) else {
                continue;
            };
            for start in ready..=last {
                let end = start + opt.duration;
                let clash = self
                    .ops
                    .iter()
                    .any(|o| o.machine == opt.machine && o.start < end && start < o.end);
                if clash {
                    continue;
                }
                let c = self.e.window_cost(spec.job, start, opt.duration);
                self.ops.push(ScheduledOp {
                    option,
                    machine: opt.machine,
                    start,
                    end,
                });
                self.descend(op + 1, cost + c.cost, emissions + c.emissions);
                self.ops.pop();
            }
        }
    }

    fn offer(&mut self, v: ObjectiveVector) {
        if self
            .archive
            .iter()
            .any(|(a, _)| *a == v || dominates(a, &v))
        {
            return;
        }
        self.archive.retain(|(a, _)| !dominates(&v, a));
        self.archive.push((v, self.ops.clone()));
    }
}
