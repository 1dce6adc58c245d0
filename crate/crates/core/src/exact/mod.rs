//! Ground truth for small instances: Pareto dominance, exhaustive front
//! enumeration, and an LP-format emitter of the mixed-integer model.

mod brute;
mod milp;

pub use brute::{brute_force_pareto, BruteForceLimits};
pub use milp::{emit_milp, milp_counts, MilpCounts, MilpEmission, Objective};

use crate::decode::{Genotype, ObjectiveVector, Schedule};

/// True iff `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let (x, y) = (a.as_array(), b.as_array());
    x.iter().zip(&y).all(|(p, q)| p <= q) && x.iter().zip(&y).any(|(p, q)| p < q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontMember {
    pub objectives: ObjectiveVector,
    pub schedule: Schedule,
    pub genotype: Option<Genotype>,
}

/// Mutually non-dominated members, one per objective vector, sorted
/// lexicographically by (makespan, cost, emissions).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoFront {
    pub members: Vec<FrontMember>,
}

impl ParetoFront {
    /// Keeps the non-dominated candidates; of several with identical
    /// objectives the first one wins.
    pub fn from_candidates(candidates: impl IntoIterator<Item = FrontMember>) -> Self {
        let all: Vec<FrontMember> = candidates.into_iter().collect();
        let mut members: Vec<FrontMember> = Vec::new();
        for (i, c) in all.iter().enumerate() {
            let beaten = all.iter().any(|o| dominates(&o.objectives, &c.objectives));
            let repeated = all[..i].iter().any(|o| o.objectives == c.objectives);
            if !beaten && !repeated {
                members.push(c.clone());
            }
        }
        members.sort_by(|a, b| a.objectives.lex_cmp(&b.objectives));
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.members.iter().map(|m| m.objectives).collect()
    }

    /// Same objective set up to `rel` relative error in the real-valued
    /// components, after merging near-identical points on each side.
    pub fn same_objectives(&self, other: &ParetoFront, rel: f64) -> bool {
        same_objective_sets(&self.objectives(), &other.objectives(), rel)
    }
}

/// Set equality of objective vectors up to `rel` relative error.
pub fn same_objective_sets(a: &[ObjectiveVector], b: &[ObjectiveVector], rel: f64) -> bool {
    let merge = |xs: &[ObjectiveVector]| {
        let mut out: Vec<ObjectiveVector> = Vec::new();
        for x in xs {
            if !out.iter().any(|y| y.approx_eq(x, rel)) {
                out.push(*x);
            }
        }
        out
    };
    let (a, b) = (merge(a), merge(b));
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| y.approx_eq(x, rel)))
        && b.iter().all(|y| a.iter().any(|x| x.approx_eq(y, rel)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: usize, c: f64, e: f64) -> ObjectiveVector {
        ObjectiveVector::new(m, c, e)
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&v(10, 5.0, 3.0), &v(10, 6.0, 3.0)));
        assert!(!dominates(&v(10, 5.0, 3.0), &v(10, 5.0, 3.0)));
        assert!(!dominates(&v(1, 9.0, 9.0), &v(2, 1.0, 1.0)));
        assert!(!dominates(&v(2, 1.0, 1.0), &v(1, 9.0, 9.0)));
    }

    #[test]
    fn front_is_canonical() {
        let member = |o| FrontMember {
            objectives: o,
            schedule: Schedule {
                ops: vec![],
                horizon_used: 0,
            },
            genotype: None,
        };
        let f = ParetoFront::from_candidates(
            [
                v(3, 1.0, 1.0),
                v(1, 5.0, 5.0),
                v(3, 1.0, 1.0),
                v(4, 1.0, 1.0),
                v(2, 2.0, 9.0),
            ]
            .into_iter()
            .map(member),
        );
        assert_eq!(
            f.objectives(),
            vec![v(1, 5.0, 5.0), v(2, 2.0, 9.0), v(3, 1.0, 1.0)]
        );
    }

    #[test]
    fn approximate_set_equality() {
        let a = [v(1, 1.0, 2.0), v(2, 0.5, 1.0)];
        let b = [
            v(2, 0.5 + 1e-13, 1.0),
            v(1, 1.0, 2.0),
            v(1, 1.0 + 1e-14, 2.0),
        ];
        assert!(same_objective_sets(&a, &b, 1e-9));
        assert!(!same_objective_sets(&a, &b[..1], 1e-9));
    }
}
