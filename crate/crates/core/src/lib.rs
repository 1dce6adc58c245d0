//! Energy-aware multi-objective flexible job shop scheduling.
//!
//! Makespan, energy cost and emissions are minimized jointly under
//! time-varying electricity prices and grid emission factors. The search
//! engine is a memetic NSGA-III over a four-string genotype; small instances
//! can be solved exactly by enumeration, or exported as a mixed-integer
//! program for an external solver.

pub mod cli;
pub mod decode;
pub mod error;
pub mod evolve;
pub mod exact;
pub mod model;
pub mod refine;

pub use decode::{decode, encode, evaluate, Genotype, ObjectiveVector, RelaxMode, Schedule};
pub use error::{Error, Result};
pub use evolve::{run, EvolveConfig};
pub use exact::{brute_force_pareto, dominates, ParetoFront};
pub use model::{enrich, EnergyProfile, EnrichedInstance, Instance};
pub use refine::{feasible_window, local_refine, GreedyRefiner};
