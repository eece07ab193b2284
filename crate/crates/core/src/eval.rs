//! Empirical approximation ratios and space accounting.
//!
//! The harness keeps the source system only to score answers: an oracle's
//! returned ids are re-evaluated on the original sets, never on the sketch.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maxcover::{binomial, exact_max_k_cover, greedy_max_k_cover, EXACT_GUARD};
use crate::persist::encode_record;
use crate::setsystem::{coverage, Query, SetSystem};
use crate::sketch::{Oracle, Sketch};

/// What `opt` is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    /// True optimum by enumeration.
    Exact,
    /// Greedy on the full system; ratios are greedy-relative, not OPT-relative.
    GreedyFull,
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reference::Exact => "exact",
            Reference::GreedyFull => "greedy-full",
        })
    }
}

/// `opt / alg` with `0/0 = 1` and `x/0 = inf`.
pub fn ratio(opt: usize, alg: usize) -> f64 {
    match (opt, alg) {
        (0, _) => 1.0,
        (_, 0) => f64::INFINITY,
        (o, a) => o as f64 / a as f64,
    }
}

/// One query's outcomes across all static-stage seeds.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryRatio {
    pub index: usize,
    pub opt: usize,
    /// True coverage of the oracle's answer, one entry per seed.
    pub alg: Vec<usize>,
}

impl QueryRatio {
    /// Seeds on which the oracle covered nothing while `opt > 0`.
    pub fn infinite_seeds(&self) -> usize {
        if self.opt == 0 {
            return 0;
        }
        self.alg.iter().filter(|&&a| a == 0).count()
    }

    /// Mean over seeds of `opt / alg`; infinite if any seed scored zero.
    pub fn expected_ratio(&self) -> f64 {
        let sum: f64 = self.alg.iter().map(|&a| ratio(self.opt, a)).sum();
        sum / self.alg.len() as f64
    }

    /// `opt / mean(alg)`, the form in which per-query coverage is guaranteed
    /// in expectation. Finite whenever some seed covers something.
    pub fn ratio_of_means(&self) -> f64 {
        if self.opt == 0 {
            return 1.0;
        }
        let total: usize = self.alg.iter().sum();
        if total == 0 {
            return f64::INFINITY;
        }
        self.opt as f64 * self.alg.len() as f64 / total as f64
    }

    pub fn mean_alg(&self) -> f64 {
        self.alg.iter().sum::<usize>() as f64 / self.alg.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub reference: Reference,
    pub k: usize,
    pub seeds: usize,
    /// Build-time `k` of the oracle, when it differs from the query `k`.
    pub k_mismatch: Option<usize>,
    pub per_query: Vec<QueryRatio>,
}

fn summarize(values: impl Iterator<Item = f64>) -> (f64, f64, usize, usize) {
    let (mut sum, mut max, mut finite, mut infinite) = (0.0, 0.0f64, 0usize, 0usize);
    for v in values {
        if v.is_finite() {
            sum += v;
            max = max.max(v);
            finite += 1;
        } else {
            infinite += 1;
        }
    }
    let mean = if finite == 0 {
        f64::NAN
    } else {
        sum / finite as f64
    };
    (mean, max, finite, infinite)
}

impl RatioReport {
    /// Mean of the finite per-query expected ratios.
    pub fn mean_ratio(&self) -> f64 {
        summarize(self.per_query.iter().map(QueryRatio::expected_ratio)).0
    }

    /// Largest finite per-query expected ratio.
    pub fn max_ratio(&self) -> f64 {
        summarize(self.per_query.iter().map(QueryRatio::expected_ratio)).1
    }

    /// Queries whose expected ratio is infinite.
    pub fn infinite_count(&self) -> usize {
        summarize(self.per_query.iter().map(QueryRatio::expected_ratio)).3
    }

    pub fn mean_ratio_of_means(&self) -> f64 {
        summarize(self.per_query.iter().map(QueryRatio::ratio_of_means)).0
    }

    pub fn max_ratio_of_means(&self) -> f64 {
        summarize(self.per_query.iter().map(QueryRatio::ratio_of_means)).1
    }

    /// `key=value` summary lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "reference={}", self.reference);
        let _ = writeln!(out, "k={}", self.k);
        if let Some(kb) = self.k_mismatch {
            let _ = writeln!(out, "k_build={kb}");
            let _ = writeln!(out, "k_mismatch=true");
        }
        let _ = writeln!(out, "queries={}", self.per_query.len());
        let _ = writeln!(out, "seeds={}", self.seeds);
        let _ = writeln!(out, "mean_ratio={:.6}", self.mean_ratio());
        let _ = writeln!(out, "max_ratio={:.6}", self.max_ratio());
        let _ = writeln!(out, "infinite_count={}", self.infinite_count());
        let _ = writeln!(out, "mean_ratio_of_means={:.6}", self.mean_ratio_of_means());
        let _ = writeln!(out, "max_ratio_of_means={:.6}", self.max_ratio_of_means());
        let _ = writeln!(
            out,
            "note=max is over the evaluated queries only, not over all queries"
        );
        out
    }

    /// One tab-separated record per query, with a header row.
    pub fn to_records(&self) -> String {
        let mut out =
            String::from("query\topt\tmean_alg\texpected_ratio\tratio_of_means\tinfinite_seeds\n");
        for q in &self.per_query {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}",
                q.index,
                q.opt,
                q.mean_alg(),
                q.expected_ratio(),
                q.ratio_of_means(),
                q.infinite_seeds()
            );
        }
        out
    }
}

fn check_reference(sys: &SetSystem, k: usize, reference: Reference) -> Result<()> {
    if reference == Reference::Exact {
        let r = k.min(sys.m());
        let combos = binomial(sys.m() as u128, r as u128);
        if combos > EXACT_GUARD {
            return Err(Error::Size(format!(
                "exact reference needs C({}, {r}) = {combos} subsets (limit {EXACT_GUARD}); use --reference greedy",
                sys.m()
            )));
        }
    }
    Ok(())
}

/// Reference coverage for every query.
pub fn reference_coverages(
    sys: &SetSystem,
    queries: &[Query],
    k: usize,
    reference: Reference,
) -> Result<Vec<usize>> {
    check_reference(sys, k, reference)?;
    queries
        .par_iter()
        .map(|q| {
            let sol = match reference {
                Reference::Exact => exact_max_k_cover(sys.sets(), q, k)?,
                Reference::GreedyFull => greedy_max_k_cover(sys.sets(), q, k)?,
            };
            Ok(sol.sketch_coverage)
        })
        .collect()
}

/// True coverage on `sys` of the oracle's answer to each query.
pub fn true_coverages<O: Oracle + ?Sized>(
    sys: &SetSystem,
    oracle: &O,
    queries: &[Query],
    k: usize,
) -> Result<Vec<usize>> {
    queries
        .par_iter()
        .map(|q| {
            let sol = oracle.answer(q, k)?;
            let alg = coverage(sys.sets(), &sol.set_ids, q)?;
            debug_assert!(
                alg >= sol.sketch_coverage,
                "sketch coverage exceeds true coverage"
            );
            Ok(alg)
        })
        .collect()
}

/// Ratios of one built oracle against `reference`.
pub fn measure_ratio<O: Oracle + ?Sized>(
    sys: &SetSystem,
    oracle: &O,
    queries: &[Query],
    k: usize,
    reference: Reference,
) -> Result<RatioReport> {
    let opt = reference_coverages(sys, queries, k, reference)?;
    let alg = true_coverages(sys, oracle, queries, k)?;
    Ok(RatioReport {
        reference,
        k,
        seeds: 1,
        k_mismatch: None,
        per_query: opt
            .into_iter()
            .zip(alg)
            .enumerate()
            .map(|(index, (opt, a))| QueryRatio {
                index,
                opt,
                alg: vec![a],
            })
            .collect(),
    })
}

/// Rebuilds the oracle once per seed and averages each query's ratio over
/// the seeds before aggregating across queries. Queries are fixed up front,
/// independent of the seeds.
pub fn expected_ratio_over_seeds<F>(
    sys: &SetSystem,
    build: F,
    queries: &[Query],
    k: usize,
    seeds: &[u64],
    reference: Reference,
) -> Result<RatioReport>
where
    F: Fn(u64) -> Result<Sketch> + Sync,
{
    if seeds.is_empty() {
        return Err(Error::Parameter("at least one seed is required".into()));
    }
    let opt = reference_coverages(sys, queries, k, reference)?;
    let mut per_query: Vec<QueryRatio> = opt
        .into_iter()
        .enumerate()
        .map(|(index, opt)| QueryRatio {
            index,
            opt,
            alg: Vec::with_capacity(seeds.len()),
        })
        .collect();
    let mut k_mismatch = None;
    for &seed in seeds {
        let sketch = build(seed)?;
        if let Some(kb) = sketch.k_build().filter(|&kb| kb != k) {
            k_mismatch = Some(kb);
        }
        let alg = true_coverages(sys, &sketch, queries, k)?;
        for (q, a) in per_query.iter_mut().zip(alg) {
            q.alg.push(a);
        }
    }
    Ok(RatioReport {
        reference,
        k,
        seeds: seeds.len(),
        k_mismatch,
        per_query,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceReport {
    pub kind: &'static str,
    pub n: usize,
    pub m: usize,
    pub edge_count: usize,
    /// Size of the binary record, names excluded.
    pub encoded_bytes: usize,
    /// `edges * ceil(log2 n) + (m + 1) * ceil(log2 (n + 1))`.
    pub info_bits: u64,
    /// Incidence bound the builder guarantees, where one applies.
    pub edge_budget: Option<usize>,
}

pub fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

pub fn info_bits(n: usize, m: usize, edges: usize) -> u64 {
    edges as u64 * ceil_log2(n as u64) + (m as u64 + 1) * ceil_log2(n as u64 + 1)
}

pub fn space_report(sketch: &Sketch) -> SpaceReport {
    let (n, m, edges) = (sketch.n(), sketch.m(), sketch.edge_count());
    let edge_budget = match sketch {
        Sketch::SetSystem(_) => None,
        Sketch::Partition(_) => Some(n),
        Sketch::Sparse(s) => Some(s.edge_budget()),
        Sketch::Combined(c) => Some(c.sparse().edge_budget() + n),
    };
    SpaceReport {
        kind: sketch.kind_name(),
        n,
        m,
        edge_count: edges,
        encoded_bytes: encode_record(sketch).len(),
        info_bits: info_bits(n, m, edges),
        edge_budget,
    }
}

impl SpaceReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind={}", self.kind);
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "m={}", self.m);
        let _ = writeln!(out, "edge_count={}", self.edge_count);
        if let Some(b) = self.edge_budget {
            let _ = writeln!(out, "edge_budget={b}");
        }
        let _ = writeln!(out, "encoded_bytes={}", self.encoded_bytes);
        let _ = writeln!(out, "info_bits={}", self.info_bits);
        out
    }
}
