use rand::Rng;

use crate::decode::{uniform, Genotype};
use crate::model::EnrichedInstance;

/// Two-point crossover with random distinct cut positions in `0..=len`.
pub fn two_point_crossover<R: Rng + ?Sized>(
    a: &Genotype,
    b: &Genotype,
    op_counts: &[usize],
    rng: &mut R,
) -> (Genotype, Genotype) {
    let len = a.len();
    if len == 0 {
        return (a.clone(), b.clone());
    }
    let x = rng.gen_range(0..=len);
    let mut y = rng.gen_range(0..len);
    if y >= x {
        y += 1;
    }
    crossover_at(a, b, x.min(y), x.max(y), op_counts)
}

/// Swaps positions `lo..hi` of all four strings and repairs the sequences.
pub fn crossover_at(
    a: &Genotype,
    b: &Genotype,
    lo: usize,
    hi: usize,
    op_counts: &[usize],
) -> (Genotype, Genotype) {
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    c1.sequence[lo..hi].copy_from_slice(&b.sequence[lo..hi]);
    c2.sequence[lo..hi].copy_from_slice(&a.sequence[lo..hi]);
    c1.machine[lo..hi].copy_from_slice(&b.machine[lo..hi]);
    c2.machine[lo..hi].copy_from_slice(&a.machine[lo..hi]);
    c1.price_cap[lo..hi].copy_from_slice(&b.price_cap[lo..hi]);
    c2.price_cap[lo..hi].copy_from_slice(&a.price_cap[lo..hi]);
    c1.emission_cap[lo..hi].copy_from_slice(&b.emission_cap[lo..hi]);
    c2.emission_cap[lo..hi].copy_from_slice(&a.emission_cap[lo..hi]);
    c1.sequence = repair_sequence(&c1.sequence, op_counts);
    c2.sequence = repair_sequence(&c2.sequence, op_counts);
    (c1, c2)
}

/// Keeps the first `op_counts[j]` occurrences of each job and replaces every
/// surplus occurrence, in scan order, by the lowest job still missing
/// occurrences.
pub fn repair_sequence(seq: &[usize], op_counts: &[usize]) -> Vec<usize> {
    let mut missing: Vec<isize> = op_counts.iter().map(|&n| n as isize).collect();
    for &j in seq {
        if let Some(m) = missing.get_mut(j) {
            *m -= 1;
        }
    }
    let mut seen = vec![0usize; op_counts.len()];
    seq.iter()
        .map(|&j| {
            if j < op_counts.len() && seen[j] < op_counts[j] {
                seen[j] += 1;
                return j;
            }
            match missing.iter().position(|&m| m > 0) {
                Some(r) => {
                    missing[r] -= 1;
                    seen[r] += 1;
                    r
                }
                None => j,
            }
        })
        .collect()
}

/// The mutation move applied to a genotype.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationMove {
    SwapSequence,
    ReassignMachine,
    ResampleCap,
}

/// With probability `rate` applies one uniformly chosen move.
pub fn mutate<R: Rng + ?Sized>(
    g: &Genotype,
    e: &EnrichedInstance,
    rng: &mut R,
    rate: f64,
) -> Genotype {
    if g.is_empty() || !rng.gen_bool(rate.clamp(0.0, 1.0)) {
        return g.clone();
    }
    let mv = match rng.gen_range(0..3) {
        0 => MutationMove::SwapSequence,
        1 => MutationMove::ReassignMachine,
        _ => MutationMove::ResampleCap,
    };
    apply_move(g, e, rng, mv)
}

pub fn apply_move<R: Rng + ?Sized>(
    g: &Genotype,
    e: &EnrichedInstance,
    rng: &mut R,
    mv: MutationMove,
) -> Genotype {
    let mut out = g.clone();
    let n = g.len();
    if n == 0 {
        return out;
    }
    match mv {
        MutationMove::SwapSequence => {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            out.sequence.swap(a, b);
        }
        MutationMove::ReassignMachine => {
            let op = rng.gen_range(0..n);
            out.machine[op] = rng.gen_range(0..e.instance().operation(op).options.len());
        }
        MutationMove::ResampleCap => {
            let op = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                let (lo, hi) = e.profile().price_range();
                out.price_cap[op] = uniform(rng, lo, hi);
            } else {
                let (lo, hi) = e.profile().emission_range();
                out.emission_cap[op] = uniform(rng, lo, hi);
            }
        }
    }
    out
}
