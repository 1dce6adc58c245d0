//! Memetic NSGA-III: variation with sequence repair, non-dominated sorting,
//! reference-point based environmental selection, and the generational loop.

mod operators;
mod reference;
mod sorting;

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use operators::{
    apply_move, crossover_at, mutate, repair_sequence, two_point_crossover, MutationMove,
};
pub use reference::{
    associate, das_dennis, niche, normalize, perpendicular_distance, Normalization,
    ReferencePointSet,
};
pub use sorting::{fast_nondominated_sort, ranks};

use crate::decode::{
    evaluate_unchecked, random_genotype, CapRule, Decoder, Genotype, ObjectiveVector, RelaxMode,
    Schedule,
};
use crate::error::{Error, Result};
use crate::exact::{FrontMember, ParetoFront};
use crate::model::EnrichedInstance;

/// Engine parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub population_size: usize,
    pub divisions: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub generation_limit: usize,
    pub runtime_limit_seconds: Option<f64>,
    pub seed: u64,
    /// Apply the greedy local refinement to offspring.
    pub refine: bool,
    pub cap_rule: CapRule,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            population_size: 92,
            divisions: 12,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            generation_limit: 200,
            runtime_limit_seconds: None,
            seed: 0,
            refine: true,
            cap_rule: CapRule::default(),
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 || self.population_size % 4 != 0 {
            return Err(Error::Parameter(format!(
                "population size {} must be a positive multiple of 4",
                self.population_size
            )));
        }
        if self.divisions == 0 {
            return Err(Error::Parameter("divisions must be positive".into()));
        }
        for (name, r) in [
            ("crossover", self.crossover_rate),
            ("mutation", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Parameter(format!("{name} rate {r} outside [0, 1]")));
            }
        }
        if let Some(s) = self.runtime_limit_seconds {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Parameter(format!(
                    "runtime limit {s} is not a duration"
                )));
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines; absent keys keep their defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parameter(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A population member.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: Genotype,
    pub schedule: Schedule,
    pub objectives: ObjectiveVector,
    pub mode: RelaxMode,
    pub rank: usize,
    pub niche: Option<usize>,
    pub distance: f64,
}

impl Individual {
    fn decoded(genotype: Genotype, e: &EnrichedInstance, decoder: Decoder) -> Self {
        let schedule = decoder.decode(&genotype, e);
        let objectives = evaluate_unchecked(&schedule, e);
        Self {
            genotype,
            schedule,
            objectives,
            mode: decoder.relax,
            rank: 0,
            niche: None,
            distance: f64::INFINITY,
        }
    }
}

/// Local improvement hook applied to every offspring schedule.
pub trait Refiner: Sync {
    fn refine(&self, parent: &Schedule, e: &EnrichedInstance) -> Vec<Schedule>;
}

/// Result of a run.
#[derive(Debug, Clone)]
pub struct Evolution {
    /// First front of the final population, deduplicated by objectives.
    pub front: ParetoFront,
    pub generations: usize,
    pub elapsed: Duration,
    pub stopped_by_time: bool,
}

/// Runs the engine without observing intermediate populations.
pub fn run(
    e: &EnrichedInstance,
    cfg: &EvolveConfig,
    refiner: Option<&dyn Refiner>,
) -> Result<Evolution> {
    run_observed(e, cfg, refiner, |_, _| ControlFlow::Continue(()))
}

/// Runs the engine, calling `observe(generation, population)` after every
/// generation; `ControlFlow::Break` stops the run early.
pub fn run_observed<F>(
    e: &EnrichedInstance,
    cfg: &EvolveConfig,
    refiner: Option<&dyn Refiner>,
    mut observe: F,
) -> Result<Evolution>
where
    F: FnMut(usize, &[Individual]) -> ControlFlow<()>,
{
    cfg.validate()?;
    let started = Instant::now();
    let deadline = cfg.runtime_limit_seconds.map(Duration::from_secs_f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let refs = das_dennis(cfg.divisions);
    let counts = e.instance().operation_counts();
    let n = cfg.population_size;

    let first = Decoder::new(RelaxMode::for_generation(0), cfg.cap_rule);
    let genotypes: Vec<Genotype> = (0..n).map(|_| random_genotype(e, &mut rng)).collect();
    let mut population: Vec<Individual> = genotypes
        .into_par_iter()
        .map(|g| Individual::decoded(g, e, first))
        .collect();

    let mut generations = 0;
    let mut stopped_by_time = false;
    let timed_out = |started: Instant| deadline.is_some_and(|d| started.elapsed() >= d);
    if timed_out(started) {
        stopped_by_time = true;
    }
    while generations < cfg.generation_limit && !stopped_by_time {
        let decoder = Decoder::new(RelaxMode::for_generation(generations), cfg.cap_rule);
        population = population
            .into_par_iter()
            .map(|ind| {
                if ind.mode == decoder.relax {
                    ind
                } else {
                    Individual::decoded(ind.genotype, e, decoder)
                }
            })
            .collect();
        assign_rank_and_distance(&mut population, &refs);

        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let a = tournament(&population, &mut rng);
            let b = tournament(&population, &mut rng);
            let (c1, c2) = if rng.gen_bool(cfg.crossover_rate) {
                two_point_crossover(
                    &population[a].genotype,
                    &population[b].genotype,
                    &counts,
                    &mut rng,
                )
            } else {
                (
                    population[a].genotype.clone(),
                    population[b].genotype.clone(),
                )
            };
            children.push(mutate(&c1, e, &mut rng, cfg.mutation_rate));
            children.push(mutate(&c2, e, &mut rng, cfg.mutation_rate));
        }
        let offspring: Vec<Individual> = children
            .into_par_iter()
            .map(|g| Individual::decoded(g, e, decoder))
            .collect();
        let refined: Vec<Individual> = match refiner.filter(|_| cfg.refine) {
            Some(r) => offspring
                .par_iter()
                .flat_map_iter(|child| {
                    r.refine(&child.schedule, e)
                        .into_iter()
                        .map(|s| Individual::decoded(decoder.encode(&s, e), e, decoder))
                        .collect::<Vec<_>>()
                })
                .collect(),
            None => Vec::new(),
        };

        let mut pool = population;
        pool.extend(offspring);
        pool.extend(refined);
        population = environmental_selection(pool, n, &refs, &mut rng)?;
        generations += 1;

        if observe(generations - 1, &population).is_break() {
            break;
        }
        if timed_out(started) {
            stopped_by_time = true;
        }
    }

    Ok(Evolution {
        front: first_front(&population, e),
        generations,
        elapsed: started.elapsed(),
        stopped_by_time,
    })
}

/// Binary tournament on (rank, association distance); ties keep the first.
fn tournament<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> usize {
    let a = rng.gen_range(0..population.len());
    let b = rng.gen_range(0..population.len());
    let key = |i: usize| (population[i].rank, population[i].distance);
    if key(b).0 < key(a).0 || (key(b).0 == key(a).0 && key(b).1 < key(a).1) {
        b
    } else {
        a
    }
}

fn assign_rank_and_distance(population: &mut [Individual], refs: &ReferencePointSet) {
    let objs: Vec<ObjectiveVector> = population.iter().map(|i| i.objectives).collect();
    let fronts = fast_nondominated_sort(&objs);
    let rank = ranks(&fronts, population.len());
    let norm = normalize(
        &objs
            .iter()
            .map(ObjectiveVector::as_array)
            .collect::<Vec<_>>(),
    );
    let assoc = associate(&norm.normalized, refs);
    for (i, ind) in population.iter_mut().enumerate() {
        ind.rank = rank[i];
        ind.niche = Some(assoc[i].0);
        ind.distance = assoc[i].1;
    }
}

/// Selects `n` members of `pool`: whole fronts while they fit, then niching
/// on the first front that does not.
pub fn environmental_selection<R: Rng + ?Sized>(
    pool: Vec<Individual>,
    n: usize,
    refs: &ReferencePointSet,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let objs: Vec<ObjectiveVector> = pool.iter().map(|i| i.objectives).collect();
    let fronts = fronts_with_duplicates_last(&objs);
    let mut kept: Vec<usize> = Vec::with_capacity(n);
    let mut split = None;
    for (r, front) in fronts.iter().enumerate() {
        if kept.len() + front.len() <= n {
            kept.extend(front);
            if kept.len() == n {
                break;
            }
        } else {
            split = Some(r);
            break;
        }
    }
    if let Some(r) = split {
        let last = &fronts[r];
        let members: Vec<usize> = kept.iter().chain(last).copied().collect();
        let norm = normalize(
            &members
                .iter()
                .map(|&i| objs[i].as_array())
                .collect::<Vec<_>>(),
        );
        let assoc_local = associate(&norm.normalized, refs);
        let mut assoc = vec![(0usize, f64::INFINITY); pool.len()];
        for (&i, a) in members.iter().zip(&assoc_local) {
            assoc[i] = *a;
        }
        let mut counts = vec![0usize; refs.len()];
        for &i in &kept {
            counts[assoc[i].0] += 1;
        }
        let k = n - kept.len();
        let picked = niche(last, k, &mut counts, &assoc, rng)?;
        kept.extend(picked);
    }
    kept.sort_unstable();
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    Ok(kept
        .into_iter()
        .map(|i| slots[i].take().expect("each index selected once"))
        .collect())
}

/// Non-dominated fronts of the first occurrence of every objective vector,
/// followed by one extra front holding the repeats. Without this, copies of
/// a few points can fill the whole population and crowd out the rest of the
/// first front.
fn fronts_with_duplicates_last(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut seen = std::collections::HashSet::new();
    let (mut unique, mut repeats) = (Vec::new(), Vec::new());
    for (i, o) in objs.iter().enumerate() {
        let key = (o.makespan, o.energy_cost.to_bits(), o.emissions.to_bits());
        if seen.insert(key) {
            unique.push(i);
        } else {
            repeats.push(i);
        }
    }
    let sub: Vec<ObjectiveVector> = unique.iter().map(|&i| objs[i]).collect();
    let mut fronts: Vec<Vec<usize>> = fast_nondominated_sort(&sub)
        .into_iter()
        .map(|f| f.into_iter().map(|k| unique[k]).collect())
        .collect();
    if !repeats.is_empty() {
        fronts.push(repeats);
    }
    fronts
}

/// Non-dominated members of a population, one per distinct objective vector.
///
/// Schedules that run past the profile horizon only exist because the
/// decoder tiles the profile; they are reported only when no member fits
/// inside the horizon.
pub fn first_front(population: &[Individual], e: &EnrichedInstance) -> ParetoFront {
    let inside = |ind: &&Individual| ind.schedule.makespan() <= e.horizon();
    let any_inside = population.iter().any(|ind| inside(&ind));
    ParetoFront::from_candidates(
        population
            .iter()
            .filter(|ind| !any_inside || inside(ind))
            .map(|ind| FrontMember {
                objectives: ind.objectives,
                schedule: ind.schedule.clone(),
                genotype: Some(ind.genotype.clone()),
            }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_overrides() {
        let cfg = EvolveConfig::from_config_str(
            "population_size = 16\nseed = 9\ncap_rule = \"step-max\"\n",
        )
        .unwrap();
        assert_eq!(cfg.population_size, 16);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.cap_rule, CapRule::StepMax);
        assert_eq!(cfg.divisions, 12);
        assert!(EvolveConfig::from_config_str("population_size = 10\n").is_err());
        assert!(EvolveConfig::from_config_str("bogus = 1\n").is_err());
    }

    #[test]
    fn default_population_covers_reference_points() {
        let cfg = EvolveConfig::default();
        assert!(cfg.population_size >= das_dennis(cfg.divisions).len());
        assert_eq!(cfg.population_size % 4, 0);
    }
}
