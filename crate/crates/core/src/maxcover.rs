//! Max-k-cover solvers restricted to a query: the greedy approximation and an
//! exhaustive exact solver for small instances.
//!
//! Both solvers first restrict every set to the query, producing a family of
//! query *positions* (indices into `Q`). Everything after that costs
//! `O(|edges ∩ Q|)` plus `O(m)` per greedy round.

use crate::error::{Error, Result};
use crate::setsystem::{Id, Query, SetFamily, SetFamilyBuilder, Solution};

/// Largest `C(m, min(k, m))` the exact solver will enumerate.
pub const EXACT_GUARD: u128 = 10_000_000;

pub(crate) fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    Ok(())
}

/// Restricts each set to `q` by scanning all edges against a membership table.
pub fn restrict(sets: &SetFamily, q: &Query) -> SetFamily {
    let Some(&max) = q.items().last() else {
        return empty_restriction(sets.len());
    };
    let mut pos = vec![u32::MAX; max as usize + 1];
    for (j, &item) in q.items().iter().enumerate() {
        pos[item as usize] = j as u32;
    }
    let mut b = SetFamilyBuilder::with_capacity(sets.len(), 0);
    let mut buf = Vec::new();
    for list in sets.iter() {
        buf.clear();
        buf.extend(
            list.iter()
                .filter_map(|&i| pos.get(i as usize).copied().filter(|&p| p != u32::MAX)),
        );
        b.push(&buf);
    }
    b.finish()
}

/// Restricts each of `m` sets to `q` through an item-major index, touching
/// only the incidences of query items.
pub fn restrict_indexed(by_item: &SetFamily, m: usize, q: &Query) -> SetFamily {
    let mut offsets = vec![0usize; m + 1];
    for &item in q.items() {
        for &s in by_item.set(item as usize) {
            offsets[s as usize + 1] += 1;
        }
    }
    for s in 0..m {
        offsets[s + 1] += offsets[s];
    }
    let mut cursor = offsets.clone();
    let mut positions = vec![0 as Id; offsets[m]];
    // Query positions are visited in increasing order, so each list comes out sorted.
    for (j, &item) in q.items().iter().enumerate() {
        for &s in by_item.set(item as usize) {
            let slot = &mut cursor[s as usize];
            positions[*slot] = j as Id;
            *slot += 1;
        }
    }
    SetFamily::from_raw(offsets, positions)
}

fn empty_restriction(m: usize) -> SetFamily {
    SetFamily::from_raw(vec![0; m + 1], Vec::new())
}

/// Greedy over a query restriction of `q_len` positions.
pub(crate) fn greedy_restricted(restricted: &SetFamily, q_len: usize, k: usize) -> Solution {
    let m = restricted.len();
    let mut gain: Vec<usize> = restricted.iter().map(<[Id]>::len).collect();
    let by_pos = restricted.transpose(q_len);
    let mut covered = vec![false; q_len];
    let mut sol = Solution::empty();
    for _ in 0..k {
        // max gain, lowest index on ties
        let mut best = 0usize;
        let mut best_gain = 0usize;
        for (s, &g) in gain.iter().enumerate() {
            if g > best_gain {
                best = s;
                best_gain = g;
            }
        }
        if best_gain == 0 {
            break;
        }
        sol.set_ids.push(best as Id);
        sol.sketch_coverage += best_gain;
        for &p in restricted.set(best) {
            if !std::mem::replace(&mut covered[p as usize], true) {
                for &s in by_pos.set(p as usize) {
                    gain[s as usize] -= 1;
                }
            }
        }
        debug_assert_eq!(gain[best], 0);
        debug_assert!(m > 0);
    }
    sol
}

/// Greedy max-k-cover of `q`: `k` rounds, each taking the set with the most
/// still-uncovered query items (lowest index on ties), stopping early once no
/// set adds coverage.
pub fn greedy_max_k_cover(sets: &SetFamily, q: &Query, k: usize) -> Result<Solution> {
    check_k(k)?;
    Ok(greedy_restricted(&restrict(sets, q), q.len(), k))
}

pub(crate) fn binomial(n: u128, r: u128) -> u128 {
    let r = r.min(n - r.min(n));
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Exact max-k-cover of `q` by enumerating every subset of at most `k` sets.
///
/// Among maximizers the lexicographically smallest id list wins, so an
/// optimum reachable with fewer sets is returned with fewer sets.
pub fn exact_max_k_cover(sets: &SetFamily, q: &Query, k: usize) -> Result<Solution> {
    check_k(k)?;
    let m = sets.len();
    let r = k.min(m);
    let combos = binomial(m as u128, r as u128);
    if combos > EXACT_GUARD {
        return Err(Error::Size(format!(
            "exact max-k-cover would enumerate C({m}, {r}) = {combos} subsets (limit {EXACT_GUARD}); use the greedy solver"
        )));
    }
    Ok(exact_restricted(&restrict(sets, q), q.len(), k))
}

pub(crate) fn exact_restricted(restricted: &SetFamily, q_len: usize, k: usize) -> Solution {
    let m = restricted.len();
    let mut reachable = vec![false; q_len];
    for list in restricted.iter() {
        for &p in list {
            reachable[p as usize] = true;
        }
    }
    let ceiling = reachable.iter().filter(|&&r| r).count();

    struct Search<'a> {
        restricted: &'a SetFamily,
        k: usize,
        ceiling: usize,
        hits: Vec<u32>,
        cov: usize,
        path: Vec<Id>,
        best: Solution,
    }

    impl Search<'_> {
        fn visit(&mut self, from: usize) -> bool {
            if self.cov > self.best.sketch_coverage {
                self.best = Solution {
                    set_ids: self.path.clone(),
                    sketch_coverage: self.cov,
                };
                if self.cov == self.ceiling {
                    return true;
                }
            }
            if self.path.len() == self.k {
                return false;
            }
            for s in from..self.restricted.len() {
                let list = self.restricted.set(s);
                for &p in list {
                    let h = &mut self.hits[p as usize];
                    if *h == 0 {
                        self.cov += 1;
                    }
                    *h += 1;
                }
                self.path.push(s as Id);
                let done = self.visit(s + 1);
                self.path.pop();
                for &p in list {
                    let h = &mut self.hits[p as usize];
                    *h -= 1;
                    if *h == 0 {
                        self.cov -= 1;
                    }
                }
                if done {
                    return true;
                }
            }
            false
        }
    }

    let mut search = Search {
        restricted,
        k: k.min(m),
        ceiling,
        hits: vec![0; q_len],
        cov: 0,
        path: Vec::with_capacity(k.min(m)),
        best: Solution::empty(),
    };
    if ceiling > 0 {
        search.visit(0);
    }
    search.best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsystem::{coverage, SetSystem};

    fn e1() -> SetSystem {
        SetSystem::from_lists(6, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5]]).unwrap()
    }

    fn q(items: &[Id]) -> Query {
        Query::new(6, items.to_vec()).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let sys = e1();
        let sol = greedy_max_k_cover(sys.sets(), &Query::full(6), 2).unwrap();
        assert_eq!(
            sol,
            Solution {
                set_ids: vec![0, 1],
                sketch_coverage: 5
            }
        );
        let sol = greedy_max_k_cover(sys.sets(), &Query::empty(), 2).unwrap();
        assert_eq!(sol, Solution::empty());
        let sol = greedy_max_k_cover(sys.sets(), &q(&[2, 4]), 1).unwrap();
        assert_eq!(
            sol,
            Solution {
                set_ids: vec![1],
                sketch_coverage: 2
            }
        );
    }

    #[test]
    fn greedy_rejects_zero_k() {
        assert!(matches!(
            greedy_max_k_cover(e1().sets(), &Query::full(6), 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn greedy_stops_when_nothing_left() {
        let sol = greedy_max_k_cover(e1().sets(), &q(&[5]), 3).unwrap();
        assert_eq!(sol.set_ids, vec![2]);
    }

    #[test]
    fn exact_examples() {
        let sys = e1();
        let sol = exact_max_k_cover(sys.sets(), &Query::full(6), 2).unwrap();
        assert_eq!(sol.sketch_coverage, 5);
        assert_eq!(sol.set_ids, vec![0, 1]);
        let sol = exact_max_k_cover(sys.sets(), &q(&[2, 3, 5]), 1).unwrap();
        assert_eq!(
            sol,
            Solution {
                set_ids: vec![1],
                sketch_coverage: 2
            }
        );
        let sol = exact_max_k_cover(sys.sets(), &Query::full(6), 5).unwrap();
        assert_eq!(sol.sketch_coverage, 6);
        assert_eq!(sol.set_ids, vec![0, 1, 2]);
    }

    #[test]
    fn exact_prefers_fewer_sets_on_ties() {
        let sol = exact_max_k_cover(e1().sets(), &q(&[0, 1]), 3).unwrap();
        assert_eq!(sol.set_ids, vec![0]);
        let sol = exact_max_k_cover(e1().sets(), &Query::empty(), 3).unwrap();
        assert_eq!(sol, Solution::empty());
    }

    #[test]
    fn exact_guard() {
        let lists: Vec<Vec<Id>> = (0..60).map(|i| vec![i]).collect();
        let sys = SetSystem::from_lists(60, &lists).unwrap();
        let err = exact_max_k_cover(sys.sets(), &Query::full(60), 10).unwrap_err();
        assert!(matches!(err, Error::Size(_)), "{err}");
    }

    #[test]
    fn indexed_restriction_matches_scan() {
        let sys = e1();
        let by_item = sys.sets().transpose(6);
        for query in [q(&[]), q(&[2, 4]), q(&[0, 3, 5]), Query::full(6)] {
            assert_eq!(
                restrict(sys.sets(), &query),
                restrict_indexed(&by_item, 3, &query)
            );
        }
    }

    #[test]
    fn sketch_coverage_is_true_coverage() {
        let sys = e1();
        for k in 1..=3 {
            let query = q(&[1, 2, 3, 5]);
            let sol = greedy_max_k_cover(sys.sets(), &query, k).unwrap();
            assert_eq!(
                coverage(sys.sets(), &sol.set_ids, &query).unwrap(),
                sol.sketch_coverage
            );
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(64, 1), 64);
        assert_eq!(binomial(3, 5), 1);
    }
}
