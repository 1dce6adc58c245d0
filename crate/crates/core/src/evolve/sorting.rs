use crate::decode::ObjectiveVector;
use crate::exact::dominates;

/// Fast non-dominated sort. Returns fronts of indices into `objs`, each in
/// ascending index order; the first front holds every non-dominated member.
pub fn fast_nondominated_sort(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for p in 0..n {
        for q in p + 1..n {
            if dominates(&objs[p], &objs[q]) {
                dominated_by_me[p].push(q);
                domination_count[q] += 1;
            } else if dominates(&objs[q], &objs[p]) {
                dominated_by_me[q].push(p);
                domination_count[p] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&p| domination_count[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by_me[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Front index of every member.
pub fn ranks(fronts: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    for (r, front) in fronts.iter().enumerate() {
        for &i in front {
            rank[i] = r;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: usize, c: f64, e: f64) -> ObjectiveVector {
        ObjectiveVector::new(m, c, e)
    }

    #[test]
    fn hand_example() {
        let fronts = fast_nondominated_sort(&[v(1, 1.0, 1.0), v(2, 2.0, 2.0), v(1, 2.0, 3.0)]);
        assert_eq!(fronts, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn identical_vectors_share_a_front() {
        let fronts = fast_nondominated_sort(&[v(3, 1.0, 1.0); 5]);
        assert_eq!(fronts, vec![vec![0, 1, 2, 3, 4]]);
        assert!(fast_nondominated_sort(&[]).is_empty());
    }

    #[test]
    fn ranks_cover_all() {
        let objs = [
            v(1, 5.0, 5.0),
            v(2, 5.0, 5.0),
            v(3, 5.0, 5.0),
            v(3, 1.0, 1.0),
        ];
        let fronts = fast_nondominated_sort(&objs);
        assert_eq!(ranks(&fronts, 4), vec![0, 1, 2, 0]);
    }
}
