//! The common query surface over every sketch kind.

use std::fmt;
use std::str::FromStr;

use crate::combined::{build_combined, CombinedSketch};
use crate::error::{Error, Result};
use crate::maxcover::greedy_max_k_cover;
use crate::partition::{
    build_greedy_partition, build_simple_partition, PartitionKind, PartitionSketch,
};
use crate::setsystem::{Query, SetSystem, Solution};
use crate::sparsify::{build_sparsified, SparseSketch};

/// A static-stage data structure that answers coverage queries on its own.
pub trait Oracle: Send + Sync {
    fn n(&self) -> usize;
    fn m(&self) -> usize;
    /// Stored (set, item) incidences.
    fn edge_count(&self) -> usize;
    /// Returns at most `k` original set ids for `q`.
    fn answer(&self, q: &Query, k: usize) -> Result<Solution>;
}

/// Storing the whole system is the trivial oracle: greedy over everything.
impl Oracle for SetSystem {
    fn n(&self) -> usize {
        SetSystem::n(self)
    }

    fn m(&self) -> usize {
        SetSystem::m(self)
    }

    fn edge_count(&self) -> usize {
        SetSystem::edge_count(self)
    }

    fn answer(&self, q: &Query, k: usize) -> Result<Solution> {
        q.check(SetSystem::n(self))?;
        greedy_max_k_cover(self.sets(), q, k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sketch {
    SetSystem(SetSystem),
    Partition(PartitionSketch),
    Sparse(SparseSketch),
    Combined(CombinedSketch),
}

impl Sketch {
    pub fn as_oracle(&self) -> &dyn Oracle {
        match self {
            Sketch::SetSystem(s) => s,
            Sketch::Partition(s) => s,
            Sketch::Sparse(s) => s,
            Sketch::Combined(s) => s,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Sketch::SetSystem(_) => "set-system",
            Sketch::Partition(p) if p.kind() == PartitionKind::Simple => "simple",
            Sketch::Partition(_) => "greedy-partition",
            Sketch::Sparse(_) => "sparse",
            Sketch::Combined(_) => "combined",
        }
    }

    /// Build-time `k`, for sketch kinds that have one.
    pub fn k_build(&self) -> Option<usize> {
        match self {
            Sketch::Sparse(s) => Some(s.k_build()),
            Sketch::Combined(c) => Some(c.sparse().k_build()),
            _ => None,
        }
    }
}

impl Oracle for Sketch {
    fn n(&self) -> usize {
        self.as_oracle().n()
    }

    fn m(&self) -> usize {
        self.as_oracle().m()
    }

    fn edge_count(&self) -> usize {
        self.as_oracle().edge_count()
    }

    fn answer(&self, q: &Query, k: usize) -> Result<Solution> {
        self.as_oracle().answer(q, k)
    }
}

/// Which static stage to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Full,
    Simple,
    GreedyPartition,
    Sparse,
    Combined,
}

impl OracleKind {
    /// Whether the build consumes random coins.
    pub fn is_randomized(self) -> bool {
        matches!(self, OracleKind::Sparse | OracleKind::Combined)
    }

    pub fn build(self, sys: &SetSystem, epsilon: f64, k: usize, seed: u64) -> Result<Sketch> {
        Ok(match self {
            OracleKind::Full => {
                let mut copy = sys.clone();
                copy.take_labels();
                Sketch::SetSystem(copy)
            }
            OracleKind::Simple => Sketch::Partition(build_simple_partition(sys)),
            OracleKind::GreedyPartition => Sketch::Partition(build_greedy_partition(sys)),
            OracleKind::Sparse => Sketch::Sparse(build_sparsified(sys, epsilon, k, seed)?),
            OracleKind::Combined => Sketch::Combined(build_combined(sys, epsilon, k, seed)?),
        })
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Full => "full",
            OracleKind::Simple => "simple",
            OracleKind::GreedyPartition => "greedy-partition",
            OracleKind::Sparse => "sparse",
            OracleKind::Combined => "combined",
        })
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => OracleKind::Full,
            "simple" => OracleKind::Simple,
            "greedy-partition" => OracleKind::GreedyPartition,
            "sparse" => OracleKind::Sparse,
            "combined" => OracleKind::Combined,
            other => return Err(Error::Parameter(format!("unknown oracle {other:?}"))),
        })
    }
}
