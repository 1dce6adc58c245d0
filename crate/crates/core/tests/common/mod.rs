#![allow(dead_code)]

pub mod oracles;

use ecofjsp::decode::{random_genotype, Decoder, RelaxMode, Schedule};
use ecofjsp::model::{enrich, EnergyProfile, EnrichedInstance, Instance};
use rand::Rng;

/// Random instance with up to `max_jobs` jobs of up to `max_ops` operations
/// on `machines` machines; every operation is eligible on a random non-empty
/// machine subset with durations in `1..=max_dur`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_jobs: usize,
    max_ops: usize,
    machines: usize,
    max_dur: usize,
) -> Instance {
    let jobs = rng.gen_range(1..=max_jobs);
    let spec = (0..jobs)
        .map(|_| {
            (0..rng.gen_range(1..=max_ops))
                .map(|_| {
                    let mut opts = Vec::new();
                    for m in 0..machines {
                        if rng.gen_bool(0.6) {
                            opts.push((m, rng.gen_range(1..=max_dur)));
                        }
                    }
                    if opts.is_empty() {
                        opts.push((rng.gen_range(0..machines), rng.gen_range(1..=max_dur)));
                    }
                    opts
                })
                .collect()
        })
        .collect();
    Instance::new(machines, spec).unwrap()
}

pub fn random_profile<R: Rng>(rng: &mut R, steps: usize) -> EnergyProfile {
    let price = (0..steps).map(|_| rng.gen_range(-20.0..200.0)).collect();
    let emission = (0..steps).map(|_| rng.gen_range(50.0..600.0)).collect();
    EnergyProfile::new(15, price, emission).unwrap()
}

/// Tiny instance of the oracle comparisons: at most 2 jobs of 3 operations
/// on at most 2 machines, with a horizon of at most 16 steps that fits a
/// serial schedule. Prices and emissions come from a random synthetic
/// hourly market, so they are constant within each hour.
pub fn tiny_enriched<R: Rng>(rng: &mut R) -> EnrichedInstance {
    loop {
        let machines = rng.gen_range(1..=2);
        let inst = random_instance(rng, 2, 3, machines, 3);
        let serial = inst.serial_horizon();
        if serial > 16 {
            continue;
        }
        let steps = rng.gen_range(serial.max(4)..=16);
        return enrich(inst, hourly_profile(rng, steps), 500.0).unwrap();
    }
}

/// A valid schedule obtained by decoding a random genotype.
pub fn random_schedule<R: Rng>(rng: &mut R, e: &EnrichedInstance) -> Schedule {
    let g = random_genotype(e, rng);
    let mode = if rng.gen_bool(0.5) {
        RelaxMode::ExtendHorizon
    } else {
        RelaxMode::RelaxCaps
    };
    Decoder::new(mode, Default::default()).decode(&g, e)
}

/// Synthetic hourly market expanded to 15-minute steps and cut to `steps`.
pub fn hourly_profile<R: Rng>(rng: &mut R, steps: usize) -> EnergyProfile {
    let params = ecofjsp::model::SyntheticMarket {
        seed: rng.gen(),
        hours: steps.div_ceil(4),
        ..Default::default()
    };
    ecofjsp::model::generate_synthetic_profile(&params)
        .unwrap()
        .resized(steps)
}

/// Instances small enough for the odometer enumerator and an exact MILP
/// solve: at most 2 jobs of 2 operations and 10 steps of per-step random
/// prices.
pub fn small_enriched<R: Rng>(rng: &mut R) -> EnrichedInstance {
    loop {
        let machines = rng.gen_range(1..=2);
        let inst = random_instance(rng, 2, 2, machines, 3);
        if inst.serial_horizon() > 10 {
            continue;
        }
        let steps = rng.gen_range(inst.serial_horizon().max(3)..=10);
        return enrich(inst, random_profile(rng, steps), 500.0).unwrap();
    }
}
