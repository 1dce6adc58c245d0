//! Reference-point machinery of the environmental selection: Das-Dennis
//! lattice, adaptive normalization, association and niching.

use nalgebra::{Matrix3, Vector3};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Points on the unit simplex in objective space.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePointSet {
    pub points: Vec<[f64; 3]>,
    pub divisions: usize,
}

impl ReferencePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Simplex lattice with `divisions` steps per axis: every `(a, b, c) / p`
/// with `a + b + c = p`.
pub fn das_dennis(divisions: usize) -> ReferencePointSet {
    let p = divisions.max(1);
    let scale = p as f64;
    let mut points = Vec::with_capacity((p + 1) * (p + 2) / 2);
    for a in (0..=p).rev() {
        for b in (0..=p - a).rev() {
            let c = p - a - b;
            points.push([a as f64 / scale, b as f64 / scale, c as f64 / scale]);
        }
    }
    ReferencePointSet {
        points,
        divisions: p,
    }
}

/// Normalized objectives of a pool and the quantities that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub ideal: [f64; 3],
    pub intercepts: [f64; 3],
    pub normalized: Vec<[f64; 3]>,
    /// True when the extreme-point hyperplane was degenerate and the
    /// translated maxima were used instead.
    pub nadir_fallback: bool,
}

const ASF_EPSILON: f64 = 1e-6;

/// Translates by the ideal point and scales by the intercepts of the
/// hyperplane through the per-axis extreme points.
pub fn normalize(objs: &[[f64; 3]]) -> Normalization {
    let mut ideal = [f64::INFINITY; 3];
    for o in objs {
        for m in 0..3 {
            ideal[m] = ideal[m].min(o[m]);
        }
    }
    if objs.is_empty() {
        ideal = [0.0; 3];
    }
    let translated: Vec<[f64; 3]> = objs
        .iter()
        .map(|o| [o[0] - ideal[0], o[1] - ideal[1], o[2] - ideal[2]])
        .collect();

    let mut extremes = [[0.0; 3]; 3];
    for (axis, extreme) in extremes.iter_mut().enumerate() {
        let mut weights = [ASF_EPSILON; 3];
        weights[axis] = 1.0;
        let asf = |t: &[f64; 3]| {
            (0..3)
                .map(|m| t[m] / weights[m])
                .fold(f64::NEG_INFINITY, f64::max)
        };
        if let Some(best) = translated.iter().min_by(|a, b| asf(a).total_cmp(&asf(b))) {
            *extreme = *best;
        }
    }

    let intercepts = hyperplane_intercepts(&extremes);
    let (intercepts, nadir_fallback) = match intercepts {
        Some(i) => (i, false),
        None => {
            let mut nadir = [0.0f64; 3];
            for t in &translated {
                for m in 0..3 {
                    nadir[m] = nadir[m].max(t[m]);
                }
            }
            for x in &mut nadir {
                if *x <= 0.0 {
                    *x = 1.0;
                }
            }
            (nadir, true)
        }
    };
    let normalized = translated
        .iter()
        .map(|t| {
            [
                t[0] / intercepts[0],
                t[1] / intercepts[1],
                t[2] / intercepts[2],
            ]
        })
        .collect();
    Normalization {
        ideal,
        intercepts,
        normalized,
        nadir_fallback,
    }
}

fn hyperplane_intercepts(extremes: &[[f64; 3]; 3]) -> Option<[f64; 3]> {
    let a = Matrix3::from_fn(|r, c| extremes[r][c]);
    let x = a.lu().solve(&Vector3::repeat(1.0))?;
    let mut out = [0.0; 3];
    for m in 0..3 {
        let intercept = 1.0 / x[m];
        if !intercept.is_finite() || intercept <= 1e-10 {
            return None;
        }
        out[m] = intercept;
    }
    Some(out)
}

/// Perpendicular distance from `point` to the ray through `direction`.
pub fn perpendicular_distance(point: &[f64; 3], direction: &[f64; 3]) -> f64 {
    let norm2: f64 = direction.iter().map(|d| d * d).sum();
    if norm2 == 0.0 {
        return point.iter().map(|p| p * p).sum::<f64>().sqrt();
    }
    let k = point.iter().zip(direction).map(|(p, d)| p * d).sum::<f64>() / norm2;
    point
        .iter()
        .zip(direction)
        .map(|(p, d)| (p - k * d).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Nearest reference line per point: `(niche, distance)`, ties to the lowest
/// reference index.
pub fn associate(normalized: &[[f64; 3]], refs: &ReferencePointSet) -> Vec<(usize, f64)> {
    normalized
        .iter()
        .map(|p| {
            let mut best = (0, f64::INFINITY);
            for (r, z) in refs.points.iter().enumerate() {
                let d = perpendicular_distance(p, z);
                if d < best.1 {
                    best = (r, d);
                }
            }
            best
        })
        .collect()
}

/// Picks `k` members of `last_front` (indices into `assoc`) by repeatedly
/// serving the least crowded reference point. `counts` holds niche counts of
/// the already selected members and is updated in place.
pub fn niche<R: Rng + ?Sized>(
    last_front: &[usize],
    k: usize,
    counts: &mut [usize],
    assoc: &[(usize, f64)],
    rng: &mut R,
) -> Result<Vec<usize>> {
    if k > last_front.len() {
        return Err(Error::Selection(format!(
            "cannot pick {k} members from a front of {}",
            last_front.len()
        )));
    }
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); counts.len()];
    for &i in last_front {
        candidates[assoc[i].0].push(i);
    }
    let mut excluded = vec![false; counts.len()];
    let mut chosen = Vec::with_capacity(k);
    while chosen.len() < k {
        let min = (0..counts.len())
            .filter(|&r| !excluded[r])
            .map(|r| counts[r])
            .min()
            .expect("a non-excluded niche remains while candidates remain");
        let tied: Vec<usize> = (0..counts.len())
            .filter(|&r| !excluded[r] && counts[r] == min)
            .collect();
        let r = *tied.choose(rng).expect("non-empty tie set");
        if candidates[r].is_empty() {
            excluded[r] = true;
            continue;
        }
        let pos = if counts[r] == 0 {
            let mut best = 0;
            for (p, &i) in candidates[r].iter().enumerate() {
                if assoc[i].1 < assoc[candidates[r][best]].1 {
                    best = p;
                }
            }
            best
        } else {
            rng.gen_range(0..candidates[r].len())
        };
        chosen.push(candidates[r].remove(pos));
        counts[r] += 1;
    }
    Ok(chosen)
}
