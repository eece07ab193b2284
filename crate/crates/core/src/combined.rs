//! Best-of-both oracle: a sparsified sketch plus a greedy partition of the
//! same system, answering with whichever arm covers more of the query.

use crate::error::{Error, Result};
use crate::maxcover::check_k;
use crate::partition::{build_greedy_partition, PartitionKind, PartitionSketch};
use crate::setsystem::{Query, SetSystem, Solution};
use crate::sketch::Oracle;
use crate::sparsify::{build_sparsified, SparseSketch};

/// How [`CombinedSketch`] picks an arm per query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ArmRule {
    /// Query both arms and keep the larger sketch coverage; ties go to the sparse arm.
    #[default]
    Best,
    /// Use the sparse arm iff `m^epsilon <= sqrt(n)`, otherwise the partition arm.
    Static,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinedSketch {
    sparse: SparseSketch,
    partition: PartitionSketch,
}

impl CombinedSketch {
    pub fn from_arms(sparse: SparseSketch, partition: PartitionSketch) -> Result<Self> {
        if (sparse.n(), sparse.m()) != (partition.n(), partition.m()) {
            return Err(Error::Dimension(format!(
                "arms disagree: sparse is {}x{}, partition is {}x{}",
                sparse.n(),
                sparse.m(),
                partition.n(),
                partition.m()
            )));
        }
        if partition.kind() != PartitionKind::Greedy {
            return Err(Error::Parameter(
                "the partition arm must be a greedy partition".into(),
            ));
        }
        Ok(CombinedSketch { sparse, partition })
    }

    pub fn sparse(&self) -> &SparseSketch {
        &self.sparse
    }

    pub fn partition(&self) -> &PartitionSketch {
        &self.partition
    }

    pub fn answer_with(&self, q: &Query, k: usize, rule: ArmRule) -> Result<Solution> {
        check_k(k)?;
        match rule {
            ArmRule::Best => {
                let a = self.sparse.answer(q, k)?;
                let b = self.partition.answer(q, k)?;
                Ok(if b.sketch_coverage > a.sketch_coverage {
                    b
                } else {
                    a
                })
            }
            ArmRule::Static => {
                let lhs = (self.m() as f64).powf(self.sparse.epsilon());
                if lhs <= (self.n() as f64).sqrt() {
                    self.sparse.answer(q, k)
                } else {
                    self.partition.answer(q, k)
                }
            }
        }
    }
}

pub fn build_combined(
    sys: &SetSystem,
    epsilon: f64,
    k: usize,
    seed: u64,
) -> Result<CombinedSketch> {
    let sparse = build_sparsified(sys, epsilon, k, seed)?;
    let partition = build_greedy_partition(sys);
    Ok(CombinedSketch { sparse, partition })
}

pub fn answer_combined(sk: &CombinedSketch, q: &Query, k: usize) -> Result<Solution> {
    sk.answer_with(q, k, ArmRule::Best)
}

impl Oracle for CombinedSketch {
    fn n(&self) -> usize {
        self.sparse.n()
    }

    fn m(&self) -> usize {
        self.sparse.m()
    }

    fn edge_count(&self) -> usize {
        self.sparse.edge_count() + self.partition.edge_count()
    }

    fn answer(&self, q: &Query, k: usize) -> Result<Solution> {
        answer_combined(self, q, k)
    }
}
