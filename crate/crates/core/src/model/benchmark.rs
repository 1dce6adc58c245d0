//! The Brandimarte mk01 to mk15 benchmark set.
//!
//! The original instance files are distributed separately. When the
//! directory named by `ECOFJSP_BRANDIMARTE_DIR` contains `mkNN.fjs` (or
//! `.txt`/`.data`), those files are used. Otherwise a seeded surrogate with
//! the same job, machine, operation and duration dimensions is generated.

use std::path::PathBuf;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_instance, Instance};
use crate::error::{Error, Result};

pub const BRANDIMARTE_DIR_ENV: &str = "ECOFJSP_BRANDIMARTE_DIR";

/// Published dimensions of one benchmark instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkShape {
    pub name: &'static str,
    pub jobs: usize,
    pub machines: usize,
    pub ops_per_job: (usize, usize),
    pub total_ops: usize,
    pub duration: (usize, usize),
}

impl BenchmarkShape {
    /// Per-job operation range widened just enough to reach the total. The
    /// published mk08 row (20 jobs, 5 to 10 operations, 225 in total) needs
    /// this; every other row is consistent as published.
    pub fn feasible_ops_per_job(&self) -> (usize, usize) {
        let (lo, hi) = self.ops_per_job;
        (
            lo.min(self.total_ops / self.jobs),
            hi.max(self.total_ops.div_ceil(self.jobs)),
        )
    }
}

pub const BRANDIMARTE: [BenchmarkShape; 15] = [
    shape("mk01", 10, 6, (5, 7), 55, (1, 7)),
    shape("mk02", 10, 6, (5, 7), 58, (1, 7)),
    shape("mk03", 15, 8, (10, 10), 150, (1, 20)),
    shape("mk04", 15, 8, (3, 10), 90, (1, 10)),
    shape("mk05", 15, 4, (5, 10), 106, (5, 10)),
    shape("mk06", 10, 10, (15, 15), 150, (1, 10)),
    shape("mk07", 20, 5, (5, 5), 100, (1, 20)),
    shape("mk08", 20, 10, (5, 10), 225, (5, 20)),
    shape("mk09", 20, 10, (10, 15), 240, (5, 20)),
    shape("mk10", 20, 15, (10, 15), 240, (5, 20)),
    shape("mk11", 30, 5, (5, 8), 179, (10, 30)),
    shape("mk12", 30, 10, (5, 10), 193, (10, 30)),
    shape("mk13", 30, 10, (5, 10), 231, (10, 30)),
    shape("mk14", 30, 15, (8, 12), 277, (10, 30)),
    shape("mk15", 30, 15, (8, 12), 284, (10, 30)),
];

const fn shape(
    name: &'static str,
    jobs: usize,
    machines: usize,
    ops_per_job: (usize, usize),
    total_ops: usize,
    duration: (usize, usize),
) -> BenchmarkShape {
    BenchmarkShape {
        name,
        jobs,
        machines,
        ops_per_job,
        total_ops,
        duration,
    }
}

pub fn benchmark_shape(name: &str) -> Option<&'static BenchmarkShape> {
    BRANDIMARTE
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
}

/// Where a benchmark instance came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchmarkSource {
    File(PathBuf),
    Surrogate { seed: u64 },
}

/// Loads `name` from the benchmark directory if configured, else builds the
/// surrogate with `seed`.
pub fn load_benchmark(name: &str, seed: u64) -> Result<(Instance, BenchmarkSource)> {
    if let Some(path) = benchmark_file(name) {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Parameter(format!("{}: {e}", path.display())))?;
        return Ok((parse_instance(&text)?, BenchmarkSource::File(path)));
    }
    let shape = benchmark_shape(name)
        .ok_or_else(|| Error::Parameter(format!("unknown benchmark instance {name:?}")))?;
    Ok((surrogate(shape, seed), BenchmarkSource::Surrogate { seed }))
}

fn benchmark_file(name: &str) -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os(BRANDIMARTE_DIR_ENV)?);
    ["fjs", "txt", "data"]
        .iter()
        .flat_map(|ext| {
            [
                dir.join(format!("{}.{ext}", name.to_ascii_lowercase())),
                dir.join(format!("{}.{ext}", capitalize(name))),
            ]
        })
        .find(|p| p.is_file())
}

fn capitalize(name: &str) -> String {
    let mut c = name.chars();
    c.next()
        .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
        .unwrap_or_default()
}

/// Random instance matching `shape`: per-job operation counts inside the
/// published range summing to the published total, up to half the machines
/// eligible per operation, durations uniform over the published range.
pub fn surrogate(shape: &BenchmarkShape, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (lo, hi) = shape.feasible_ops_per_job();
    let mut counts: Vec<usize> = (0..shape.jobs).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut total: usize = counts.iter().sum();
    while total != shape.total_ops {
        let i = rng.gen_range(0..shape.jobs);
        if total < shape.total_ops && counts[i] < hi {
            counts[i] += 1;
            total += 1;
        } else if total > shape.total_ops && counts[i] > lo {
            counts[i] -= 1;
            total -= 1;
        }
    }
    let max_flex = (shape.machines / 2).max(1);
    let jobs = counts
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| {
                    let k = rng.gen_range(1..=max_flex);
                    sample(&mut rng, shape.machines, k)
                        .into_iter()
                        .map(|m| (m, rng.gen_range(shape.duration.0..=shape.duration.1)))
                        .collect()
                })
                .collect()
        })
        .collect();
    Instance::new(shape.machines, jobs).expect("surrogate respects instance invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surrogates_match_published_dimensions() {
        for shape in &BRANDIMARTE {
            let inst = surrogate(shape, 1);
            assert_eq!(inst.job_count(), shape.jobs, "{}", shape.name);
            assert_eq!(inst.machine_count(), shape.machines);
            assert_eq!(inst.total_operations(), shape.total_ops, "{}", shape.name);
            let (lo, hi) = shape.feasible_ops_per_job();
            for job in inst.jobs() {
                let n = job.operations.len();
                assert!(n >= lo && n <= hi);
            }
            for op in inst.operations() {
                for o in &op.options {
                    assert!(o.duration >= shape.duration.0 && o.duration <= shape.duration.1);
                }
            }
        }
    }

    #[test]
    fn only_mk08_needs_a_wider_range() {
        for shape in &BRANDIMARTE {
            let widened = shape.feasible_ops_per_job() != shape.ops_per_job;
            assert_eq!(widened, shape.name == "mk08", "{}", shape.name);
        }
        assert_eq!(
            benchmark_shape("mk08").unwrap().feasible_ops_per_job(),
            (5, 12)
        );
    }

    #[test]
    fn surrogate_is_seeded() {
        let s = benchmark_shape("MK04").unwrap();
        assert_eq!(surrogate(s, 5), surrogate(s, 5));
        assert_ne!(surrogate(s, 5), surrogate(s, 6));
    }
}
