//! Instance and workload generators.
//!
//! [`sample_d`] draws the hard distribution used against deterministic
//! oracles: `m` independent uniform subsets of `[0, n)`, each of size
//! `n * m^(-epsilon) * sqrt(k)`. Unions of two of its sets are the natural
//! stress queries ([`gen_candidate_queries`]).

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::setsystem::{Id, Query, SetFamilyBuilder, SetSystem};
use crate::sparsify::{check_epsilon, set_rng};

/// Stream id reserved for query generation, away from per-set streams.
const QUERY_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DParams {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub k: usize,
    pub seed: u64,
}

impl DParams {
    /// `max(1, floor(n * m^(-epsilon) * sqrt(k)))`.
    pub fn set_size(&self) -> usize {
        let x = self.n as f64 * (self.m as f64).powf(-self.epsilon) * (self.k as f64).sqrt();
        let r = x.round();
        let v = if (x - r).abs() <= 1e-9 * x.max(1.0) {
            r
        } else {
            x.floor()
        };
        (v as usize).max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Parameter("n and m must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::Parameter("k must be at least 1".into()));
        }
        check_epsilon(self.epsilon)?;
        let size = self.set_size();
        if size > self.n {
            return Err(Error::Parameter(format!(
                "set size {size} exceeds n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// `m` i.i.d. uniform `set_size`-subsets of `[0, n)`.
pub fn sample_d(p: &DParams) -> Result<SetSystem> {
    p.validate()?;
    let size = p.set_size();
    let lists: Vec<Vec<Id>> = (0..p.m)
        .into_par_iter()
        .map(|s| {
            let mut rng = set_rng(p.seed, s);
            let mut v: Vec<Id> = index::sample(&mut rng, p.n, size)
                .into_iter()
                .map(|i| i as Id)
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    SetSystem::from_lists(p.n, &lists)
}

/// Every (set, item) edge present independently with probability `density`.
pub fn gen_random_instance(n: usize, m: usize, density: f64, seed: u64) -> Result<SetSystem> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Parameter(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    if n == 0 || m == 0 {
        return Err(Error::Parameter("n and m must be positive".into()));
    }
    let geo = Geometric::new(density).map_err(|e| Error::Parameter(e.to_string()))?;
    let lists: Vec<Vec<Id>> = (0..m)
        .into_par_iter()
        .map(|s| {
            let mut rng = set_rng(seed, s);
            let mut out = Vec::new();
            // Gaps between successive present items are geometric.
            let mut next = geo.sample(&mut rng);
            while next < n as u64 {
                out.push(next as Id);
                next += 1 + geo.sample(&mut rng);
            }
            out
        })
        .collect();
    let mut b = SetFamilyBuilder::with_capacity(m, 0);
    for l in &lists {
        b.push(l);
    }
    SetSystem::new(n, b.finish())
}

/// `A_i ∪ B_j` as a query.
pub fn candidate_query(a: &SetSystem, i: usize, b: &SetSystem, j: usize) -> Query {
    let (x, y) = (a.set(i), b.set(j));
    let mut items = Vec::with_capacity(x.len() + y.len());
    items.extend_from_slice(x);
    items.extend_from_slice(y);
    Query::new(a.n().max(b.n()), items).expect("set items are in range")
}

/// `count` queries `A_i ∪ B_j` with `i != j` drawn uniformly. Passing the same
/// system twice gives self-mode candidates.
pub fn gen_candidate_queries(
    a: &SetSystem,
    b: &SetSystem,
    count: usize,
    seed: u64,
) -> Result<Vec<Query>> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!(
            "ground sets differ: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    if a.m() < 2 || b.m() < 2 {
        return Err(Error::Parameter(
            "candidate queries need at least 2 sets per system".into(),
        ));
    }
    let mut rng = set_rng(seed, 0);
    rng.set_stream(QUERY_STREAM);
    Ok((0..count)
        .map(|_| {
            let i = rng.random_range(0..a.m());
            let j = loop {
                let j = rng.random_range(0..b.m());
                if j != i {
                    break j;
                }
            };
            candidate_query(a, i, b, j)
        })
        .collect())
}

/// `count` uniform random queries of `size` distinct items each.
pub fn gen_random_queries(n: usize, count: usize, size: usize, seed: u64) -> Result<Vec<Query>> {
    if size > n {
        return Err(Error::Parameter(format!(
            "query size {size} exceeds n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(QUERY_STREAM);
    Ok((0..count)
        .map(|_| {
            let items = index::sample(&mut rng, n, size)
                .into_iter()
                .map(|i| i as Id)
                .collect();
            Query::new(n, items).expect("sampled items are in range")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_sizes() {
        let p = DParams {
            n: 4,
            m: 2,
            epsilon: 0.0,
            k: 1,
            seed: 0,
        };
        assert_eq!(p.set_size(), 4);
        let p = DParams {
            n: 16,
            m: 4,
            epsilon: 0.5,
            k: 1,
            seed: 0,
        };
        assert_eq!(p.set_size(), 8);
        let p = DParams {
            n: 400,
            m: 64,
            epsilon: 0.5,
            k: 1,
            seed: 0,
        };
        assert_eq!(p.set_size(), 50);
        let p = DParams {
            n: 400,
            m: 64,
            epsilon: 0.5,
            k: 4,
            seed: 0,
        };
        assert_eq!(p.set_size(), 100);
        let p = DParams {
            n: 3,
            m: 1000,
            epsilon: 0.5,
            k: 1,
            seed: 0,
        };
        assert_eq!(p.set_size(), 1);
    }

    #[test]
    fn d_forced_full_sets() {
        let sys = sample_d(&DParams {
            n: 4,
            m: 2,
            epsilon: 0.0,
            k: 1,
            seed: 9,
        })
        .unwrap();
        assert_eq!(
            sys.sets().to_lists(),
            vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3]]
        );
    }

    #[test]
    fn d_sizes_and_determinism() {
        let p = DParams {
            n: 16,
            m: 4,
            epsilon: 0.5,
            k: 1,
            seed: 3,
        };
        let sys = sample_d(&p).unwrap();
        assert!(sys.sets().iter().all(|s| s.len() == 8));
        assert_eq!(sys, sample_d(&p).unwrap());
    }

    #[test]
    fn d_rejects_oversized_sets() {
        let p = DParams {
            n: 4,
            m: 4,
            epsilon: 0.0,
            k: 4,
            seed: 0,
        };
        assert!(matches!(sample_d(&p), Err(Error::Parameter(_))));
    }

    #[test]
    fn candidate_examples() {
        let e1 = SetSystem::from_lists(6, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5]]).unwrap();
        assert_eq!(candidate_query(&e1, 0, &e1, 2).items(), &[0, 1, 2, 4, 5]);
        let d = SetSystem::from_lists(6, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(candidate_query(&d, 0, &d, 1).len(), 5);
        assert_eq!(candidate_query(&e1, 1, &e1, 1).items(), e1.set(1));
    }

    #[test]
    fn candidates_are_supersets_of_two_distinct_sets() {
        let p = DParams {
            n: 30,
            m: 6,
            epsilon: 0.25,
            k: 1,
            seed: 1,
        };
        let a = sample_d(&p).unwrap();
        let qs = gen_candidate_queries(&a, &a, 50, 5).unwrap();
        assert_eq!(qs.len(), 50);
        for q in &qs {
            let supersets = (0..a.m())
                .filter(|&s| a.set(s).iter().all(|i| q.position(*i).is_some()))
                .count();
            assert!(supersets >= 1);
        }
        assert_eq!(qs, gen_candidate_queries(&a, &a, 50, 5).unwrap());
        let one = SetSystem::from_lists(3, &[vec![0]]).unwrap();
        assert!(gen_candidate_queries(&one, &one, 1, 0).is_err());
    }

    #[test]
    fn random_instance_density_one() {
        let sys = gen_random_instance(5, 3, 1.0, 0).unwrap();
        assert!(sys.sets().iter().all(|s| s == [0, 1, 2, 3, 4]));
        assert!(gen_random_instance(5, 3, 0.0, 0).is_err());
        assert!(gen_random_instance(5, 3, 1.5, 0).is_err());
    }

    #[test]
    fn random_instance_reproducible() {
        let a = gen_random_instance(50, 10, 0.01, 77).unwrap();
        assert_eq!(a, gen_random_instance(50, 10, 0.01, 77).unwrap());
    }

    #[test]
    fn random_instance_edge_count_binomial() {
        // 1000 Bernoulli(0.1) edges per seed: mean 100, sd 9.49.
        let sd = (1000.0f64 * 0.1 * 0.9).sqrt();
        let total: usize = (0..100u64)
            .map(|seed| {
                gen_random_instance(100, 10, 0.1, seed)
                    .unwrap()
                    .edge_count()
            })
            .sum();
        let mean = total as f64 / 100.0;
        assert!((mean - 100.0).abs() <= 3.0 * sd / 10.0, "mean {mean}");
        for seed in 0..100u64 {
            let e = gen_random_instance(100, 10, 0.1, seed)
                .unwrap()
                .edge_count() as f64;
            assert!((e - 100.0).abs() <= 5.0 * sd, "seed {seed}: {e}");
        }
    }
}
