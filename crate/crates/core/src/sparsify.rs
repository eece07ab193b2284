//! The randomized sparsification oracle.
//!
//! Build, for a trade-off parameter `epsilon` in `[0, 1/2]` and target `k`:
//!
//! * Stage 1 peels off every set that still holds at least
//!   `n / (m^epsilon * sqrt(k))` uncovered items. Such a *significant* set keeps
//!   exactly those items, which then count as covered.
//! * Stage 2 gives every remaining set a uniform sample of
//!   `ceil(n / m^(2 epsilon))` of its Stage-1-uncovered items (or all of them
//!   if it has fewer). Samples are drawn independently per set; one set's
//!   sample never removes items from another set's pool.
//!
//! Total storage is at most `n + m * ceil(n / m^(2 epsilon))` incidences.
//! Queries run greedy max-k-cover over the stored parts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maxcover::{check_k, greedy_restricted, restrict_indexed};
use crate::setsystem::{Id, Query, SetFamily, SetFamilyBuilder, SetSystem, Solution};
use crate::sketch::Oracle;

/// Stage-1 cut-off `n / (m^epsilon * sqrt(k))`, compared as a real number.
pub fn stage1_threshold(n: usize, m: usize, epsilon: f64, k: usize) -> f64 {
    n as f64 / ((m as f64).powf(epsilon) * (k as f64).sqrt())
}

/// Stage-2 sample size `ceil(n / m^(2 epsilon))`.
///
/// Quotients within 1e-9 (relative) of an integer snap to it, so that e.g.
/// `16 / 4^1` is not pushed to 5 by a rounding error in `powf`.
pub fn stage2_sample(n: usize, m: usize, epsilon: f64) -> usize {
    let x = n as f64 / (m as f64).powf(2.0 * epsilon);
    let r = x.round();
    let v = if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x.ceil()
    };
    (v as usize).max(1)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(Error::Parameter(format!(
            "epsilon must lie in [0, 1/2], got {epsilon}"
        )));
    }
    Ok(())
}

/// Deterministic generator for one set: ChaCha8 keyed by the seed, with the set
/// index as the stream id.
pub(crate) fn set_rng(seed: u64, set: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(set as u64);
    rng
}

/// Uniform `take`-subset of `pool` via a partial Fisher-Yates shuffle; sorted.
pub(crate) fn sample_sorted(pool: &mut [Id], take: usize, rng: &mut ChaCha8Rng) -> Vec<Id> {
    let u = pool.len();
    let take = take.min(u);
    for i in 0..take {
        let j = rng.random_range(i..u);
        pool.swap(i, j);
    }
    let mut out = pool[..take].to_vec();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseSketch {
    n: usize,
    k_build: usize,
    epsilon: f64,
    seed: u64,
    parts: SetFamily,
    significant: Vec<bool>,
    by_item: SetFamily,
}

impl SparseSketch {
    /// Wraps decoded parts, checking every invariant that does not need the
    /// source system.
    pub fn from_parts(
        n: usize,
        epsilon: f64,
        k_build: usize,
        seed: u64,
        parts: SetFamily,
        significant: Vec<bool>,
    ) -> Result<Self> {
        check_epsilon(epsilon).map_err(|e| Error::Corrupt(e.to_string()))?;
        if k_build == 0 {
            return Err(Error::Corrupt("k_build must be at least 1".into()));
        }
        if significant.len() != parts.len() {
            return Err(Error::Corrupt(
                "significance flags do not match the set count".into(),
            ));
        }
        parts.validate(n)?;
        let sample = stage2_sample(n, parts.len(), epsilon);
        let mut owner = vec![false; n];
        for (s, part) in parts.iter().enumerate() {
            if significant[s] {
                for &i in part {
                    if std::mem::replace(&mut owner[i as usize], true) {
                        return Err(Error::Corrupt(format!("significant item {i} stored twice")));
                    }
                }
            }
        }
        for (s, part) in parts.iter().enumerate() {
            if significant[s] {
                continue;
            }
            if part.len() > sample {
                return Err(Error::Corrupt(format!(
                    "insignificant set {s} stores {} items, over the sample size {sample}",
                    part.len()
                )));
            }
            if let Some(&i) = part.iter().find(|&&i| owner[i as usize]) {
                return Err(Error::Corrupt(format!(
                    "insignificant set {s} stores significant item {i}"
                )));
            }
        }
        let by_item = parts.transpose(n);
        Ok(SparseSketch {
            n,
            k_build,
            epsilon,
            seed,
            parts,
            significant,
            by_item,
        })
    }

    pub fn k_build(&self) -> usize {
        self.k_build
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn parts(&self) -> &SetFamily {
        &self.parts
    }

    pub fn significant(&self) -> &[bool] {
        &self.significant
    }

    pub fn stage1_threshold(&self) -> f64 {
        stage1_threshold(self.n, self.parts.len(), self.epsilon, self.k_build)
    }

    pub fn stage2_sample(&self) -> usize {
        stage2_sample(self.n, self.parts.len(), self.epsilon)
    }

    /// `n + m * stage2_sample`, the most incidences this sketch may hold.
    pub fn edge_budget(&self) -> usize {
        self.n + self.parts.len() * self.stage2_sample()
    }
}

pub fn build_sparsified(
    sys: &SetSystem,
    epsilon: f64,
    k: usize,
    seed: u64,
) -> Result<SparseSketch> {
    check_epsilon(epsilon)?;
    check_k(k)?;
    let (n, m) = (sys.n(), sys.m());
    let threshold = stage1_threshold(n, m, epsilon, k);
    let sample = stage2_sample(n, m, epsilon);

    // Stage 1. Uncovered counts only fall, so a set skipped once never
    // qualifies later and one ascending pass picks the same sets as
    // repeatedly taking the lowest-index qualifying set.
    let mut covered = vec![false; n];
    let mut significant = vec![false; m];
    let mut peeled: Vec<Vec<Id>> = vec![Vec::new(); m];
    for s in 0..m {
        let uncovered = sys.set(s).iter().filter(|&&i| !covered[i as usize]).count();
        if uncovered as f64 >= threshold {
            let part: Vec<Id> = sys
                .set(s)
                .iter()
                .copied()
                .filter(|&i| !covered[i as usize])
                .collect();
            for &i in &part {
                covered[i as usize] = true;
            }
            significant[s] = true;
            peeled[s] = part;
        }
    }

    // Stage 2, independent per set.
    let sampled: Vec<Vec<Id>> = (0..m)
        .into_par_iter()
        .map(|s| {
            if significant[s] {
                return peeled[s].clone();
            }
            let mut pool: Vec<Id> = sys
                .set(s)
                .iter()
                .copied()
                .filter(|&i| !covered[i as usize])
                .collect();
            if pool.len() <= sample {
                return pool;
            }
            sample_sorted(&mut pool, sample, &mut set_rng(seed, s))
        })
        .collect();

    let mut b = SetFamilyBuilder::with_capacity(m, 0);
    for p in &sampled {
        b.push(p);
    }
    let parts = b.finish();
    let by_item = parts.transpose(n);
    Ok(SparseSketch {
        n,
        k_build: k,
        epsilon,
        seed,
        parts,
        significant,
        by_item,
    })
}

/// Greedy max-k-cover over the stored parts.
pub fn answer_sparsified(sk: &SparseSketch, q: &Query, k: usize) -> Result<Solution> {
    check_k(k)?;
    q.check(sk.n)?;
    if k != sk.k_build {
        log::debug!(
            "answering with k = {k} on a sketch built for k = {}",
            sk.k_build
        );
    }
    let restricted = restrict_indexed(&sk.by_item, sk.parts.len(), q);
    Ok(greedy_restricted(&restricted, q.len(), k))
}

impl Oracle for SparseSketch {
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
        answer_sparsified(self, q, k)
    }
}
