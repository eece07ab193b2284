//! Partition oracles: every coverable item is kept in exactly one stored set,
//! so the sketch holds at most `n` incidences.
//!
//! Two builders share one sketch type and one answerer. The simple builder
//! hands each item to the lowest-index set containing it (an `m/k`
//! approximation); the greedy builder hands items out in max-cover order,
//! which improves the guarantee to `O(sqrt(n/k))`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::maxcover::{check_k, restrict_indexed};
use crate::setsystem::{Id, Query, SetFamily, SetFamilyBuilder, SetSystem, Solution};
use crate::sketch::Oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    Simple,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSketch {
    n: usize,
    kind: PartitionKind,
    parts: SetFamily,
    by_item: SetFamily,
}

impl PartitionSketch {
    /// Wraps decoded parts, checking the partition invariants.
    pub fn from_parts(n: usize, kind: PartitionKind, parts: SetFamily) -> Result<Self> {
        parts.validate(n)?;
        let by_item = parts.transpose(n);
        if let Some(i) = (0..n).find(|&i| by_item.set(i).len() > 1) {
            return Err(Error::Corrupt(format!(
                "item {i} appears in more than one part"
            )));
        }
        Ok(PartitionSketch {
            n,
            kind,
            parts,
            by_item,
        })
    }

    fn assemble(n: usize, kind: PartitionKind, parts: SetFamily) -> Self {
        let by_item = parts.transpose(n);
        PartitionSketch {
            n,
            kind,
            parts,
            by_item,
        }
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn parts(&self) -> &SetFamily {
        &self.parts
    }
}

/// Each item goes to the lowest-index set that contains it.
pub fn build_simple_partition(sys: &SetSystem) -> PartitionSketch {
    let mut owned = vec![false; sys.n()];
    let mut b = SetFamilyBuilder::with_capacity(sys.m(), sys.n());
    let mut part = Vec::new();
    for list in sys.sets().iter() {
        part.clear();
        for &i in list {
            if !std::mem::replace(&mut owned[i as usize], true) {
                part.push(i);
            }
        }
        b.push(&part);
    }
    PartitionSketch::assemble(sys.n(), PartitionKind::Simple, b.finish())
}

/// Repeatedly takes the unchosen set with the most uncovered items (lowest
/// index on ties) and gives it those items.
pub fn build_greedy_partition(sys: &SetSystem) -> PartitionSketch {
    let m = sys.m();
    let mut covered = vec![false; sys.n()];
    let mut parts: Vec<Vec<Id>> = vec![Vec::new(); m];
    // Uncovered counts only shrink, so stale heap keys are upper bounds.
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        (0..m).map(|s| (sys.set(s).len(), Reverse(s))).collect();
    while let Some((key, Reverse(s))) = heap.pop() {
        if key == 0 {
            break;
        }
        let fresh = sys.set(s).iter().filter(|&&i| !covered[i as usize]).count();
        if fresh < key {
            heap.push((fresh, Reverse(s)));
            continue;
        }
        let part: Vec<Id> = sys
            .set(s)
            .iter()
            .copied()
            .filter(|&i| !covered[i as usize])
            .collect();
        for &i in &part {
            covered[i as usize] = true;
        }
        parts[s] = part;
    }
    let mut b = SetFamilyBuilder::with_capacity(m, sys.n());
    for p in &parts {
        b.push(p);
    }
    PartitionSketch::assemble(sys.n(), PartitionKind::Greedy, b.finish())
}

/// Exact sketch optimum: the `k` parts with the largest overlap with `q`.
pub fn answer_partition(sk: &PartitionSketch, q: &Query, k: usize) -> Result<Solution> {
    check_k(k)?;
    q.check(sk.n)?;
    let restricted = restrict_indexed(&sk.by_item, sk.parts.len(), q);
    let mut scored: Vec<(usize, usize)> = restricted
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(s, l)| (l.len(), s))
        .collect();
    scored.sort_unstable_by_key(|&(score, s)| (Reverse(score), s));
    scored.truncate(k);
    Ok(Solution {
        sketch_coverage: scored.iter().map(|&(score, _)| score).sum(),
        set_ids: scored.into_iter().map(|(_, s)| s as Id).collect(),
    })
}

impl Oracle for PartitionSketch {
    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.parts.len()
    }

    fn edge_count(&self) -> usize {
        self.parts.edge_count()
    }

    fn answer(&self, q: &Query, k: usize) -> Result<Solution> {
        answer_partition(self, q, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> SetSystem {
        SetSystem::from_lists(6, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5]]).unwrap()
    }

    #[test]
    fn simple_partition_examples() {
        let sk = build_simple_partition(&e1());
        assert_eq!(
            sk.parts().to_lists(),
            vec![vec![0, 1, 2], vec![3, 4], vec![5]]
        );

        let all = SetSystem::from_lists(3, &[vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        let sk = build_simple_partition(&all);
        assert_eq!(sk.parts().to_lists(), vec![vec![0, 1, 2], vec![], vec![]]);

        let disjoint = SetSystem::from_lists(5, &[vec![3, 4], vec![0], vec![1, 2]]).unwrap();
        assert_eq!(build_simple_partition(&disjoint).parts(), disjoint.sets());
    }

    #[test]
    fn greedy_partition_examples() {
        let sk = build_greedy_partition(&e1());
        assert_eq!(
            sk.parts().to_lists(),
            vec![vec![0, 1, 2], vec![3, 4], vec![5]]
        );

        let nested = SetSystem::from_lists(3, &[vec![0, 1], vec![0, 1, 2]]).unwrap();
        let sk = build_greedy_partition(&nested);
        assert_eq!(sk.parts().to_lists(), vec![vec![], vec![0, 1, 2]]);

        let disjoint = SetSystem::from_lists(5, &[vec![3, 4], vec![0], vec![1, 2]]).unwrap();
        assert_eq!(build_greedy_partition(&disjoint).parts(), disjoint.sets());
    }

    #[test]
    fn greedy_partition_prefers_largest_remaining() {
        // Simple gives S0 item 2; greedy lets S1 (4 items) claim it first.
        let sys = SetSystem::from_lists(6, &[vec![0, 1, 2], vec![2, 3, 4, 5]]).unwrap();
        assert_eq!(
            build_greedy_partition(&sys).parts().to_lists(),
            vec![vec![0, 1], vec![2, 3, 4, 5]]
        );
        assert_eq!(
            build_simple_partition(&sys).parts().to_lists(),
            vec![vec![0, 1, 2], vec![3, 4, 5]]
        );
    }

    #[test]
    fn answer_examples() {
        let simple = build_simple_partition(&e1());
        let q = Query::new(6, vec![2, 3, 5]).unwrap();
        assert_eq!(
            simple.answer(&q, 1).unwrap(),
            Solution {
                set_ids: vec![0],
                sketch_coverage: 1
            }
        );
        assert_eq!(
            simple.answer(&Query::empty(), 2).unwrap(),
            Solution::empty()
        );

        let greedy = build_greedy_partition(&e1());
        let sol = greedy.answer(&Query::full(6), 3).unwrap();
        assert_eq!(
            sol,
            Solution {
                set_ids: vec![0, 1, 2],
                sketch_coverage: 6
            }
        );
    }

    #[test]
    fn answer_orders_by_score_then_index() {
        let greedy = build_greedy_partition(&e1());
        let q = Query::new(6, vec![3, 4, 5]).unwrap();
        let sol = greedy.answer(&q, 1).unwrap();
        assert_eq!(
            sol,
            Solution {
                set_ids: vec![1],
                sketch_coverage: 2
            }
        );
        let sol = greedy.answer(&q, 3).unwrap();
        assert_eq!(
            sol,
            Solution {
                set_ids: vec![1, 2],
                sketch_coverage: 3
            }
        );
        assert!(greedy.answer(&q, 0).is_err());
    }

    #[test]
    fn from_parts_rejects_overlap() {
        let parts = SetFamily::from_lists(3, &[vec![0, 1], vec![1]]).unwrap();
        assert!(PartitionSketch::from_parts(3, PartitionKind::Simple, parts).is_err());
    }
}
