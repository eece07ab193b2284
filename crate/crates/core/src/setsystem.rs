//! Set systems, queries, solutions and the edge-list text format.
//!
//! A [`SetSystem`] is a ground set of `n` items and a family of `m` subsets,
//! stored as a compressed sparse row structure ([`SetFamily`]): one offset
//! array and one concatenated, per-set sorted item array.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::BufRead;

use indexmap::IndexSet;

use crate::error::{Error, Result};

/// Dense item or set index.
pub type Id = u32;

/// A family of sorted, duplicate-free item lists in CSR layout.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetFamily {
    offsets: Vec<usize>,
    items: Vec<Id>,
}

impl SetFamily {
    /// Builds a family from per-set lists, checking that each list is strictly
    /// increasing and bounded by `n`.
    pub fn from_lists<L: AsRef<[Id]>>(n: usize, lists: &[L]) -> Result<Self> {
        let mut builder = SetFamilyBuilder::with_capacity(lists.len(), 0);
        for list in lists {
            builder.push(list.as_ref());
        }
        let family = builder.finish();
        family.validate(n)?;
        Ok(family)
    }

    /// Assembles a family from raw CSR arrays without validation.
    pub(crate) fn from_raw(offsets: Vec<usize>, items: Vec<Id>) -> Self {
        debug_assert!(!offsets.is_empty());
        SetFamily { offsets, items }
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn set(&self, idx: usize) -> &[Id] {
        &self.items[self.offsets[idx]..self.offsets[idx + 1]]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[Id]> + '_ {
        self.offsets
            .windows(2)
            .map(move |w| &self.items[w[0]..w[1]])
    }

    /// Total number of (set, item) incidences.
    pub fn edge_count(&self) -> usize {
        self.items.len()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn to_lists(&self) -> Vec<Vec<Id>> {
        self.iter().map(<[Id]>::to_vec).collect()
    }

    /// Returns the item-major view: entry `i` lists the sets containing item
    /// `i`, in increasing order.
    pub fn transpose(&self, n: usize) -> SetFamily {
        let mut counts = vec![0usize; n + 1];
        for &item in &self.items {
            counts[item as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cursor = counts.clone();
        let mut sets = vec![0 as Id; self.items.len()];
        for (s, list) in self.iter().enumerate() {
            for &item in list {
                let slot = &mut cursor[item as usize];
                sets[*slot] = s as Id;
                *slot += 1;
            }
        }
        SetFamily::from_raw(counts, sets)
    }

    /// Checks the CSR shape and that every list is strictly increasing in `[0, n)`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.offsets.first() != Some(&0) {
            return Err(Error::Corrupt("offsets must start at 0".into()));
        }
        if self.offsets.last() != Some(&self.items.len()) {
            return Err(Error::Corrupt(
                "last offset must equal the edge count".into(),
            ));
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Corrupt("offsets must be non-decreasing".into()));
        }
        for (s, list) in self.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Corrupt(format!(
                    "set {s} is not strictly increasing"
                )));
            }
            if let Some(&last) = list.last() {
                if last as usize >= n {
                    return Err(Error::Bounds(format!(
                        "set {s} holds item {last} but n = {n}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Incremental CSR construction, one set at a time.
#[derive(Debug)]
pub struct SetFamilyBuilder {
    offsets: Vec<usize>,
    items: Vec<Id>,
}

impl SetFamilyBuilder {
    pub fn with_capacity(sets: usize, edges: usize) -> Self {
        let mut offsets = Vec::with_capacity(sets + 1);
        offsets.push(0);
        SetFamilyBuilder {
            offsets,
            items: Vec::with_capacity(edges),
        }
    }

    pub fn push(&mut self, items: &[Id]) {
        self.items.extend_from_slice(items);
        self.offsets.push(self.items.len());
    }

    pub fn finish(self) -> SetFamily {
        SetFamily::from_raw(self.offsets, self.items)
    }
}

/// External string ids for items and sets, in dense-index order.
///
/// Either dictionary may be shorter than the corresponding dimension: trailing
/// isolated items and trailing empty sets pinned by a header have no name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    pub items: IndexSet<String>,
    pub sets: IndexSet<String>,
}

impl Labels {
    pub fn item_name(&self, idx: usize) -> String {
        self.items
            .get_index(idx)
            .cloned()
            .unwrap_or_else(|| format!("i{idx}"))
    }

    pub fn set_name(&self, idx: usize) -> String {
        self.sets
            .get_index(idx)
            .cloned()
            .unwrap_or_else(|| format!("s{idx}"))
    }
}

/// The offline input: `n` items and a family of `m` subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    sets: SetFamily,
    labels: Option<Labels>,
}

impl SetSystem {
    pub fn new(n: usize, sets: SetFamily) -> Result<Self> {
        if n == 0 || sets.is_empty() {
            return Err(Error::Dimension(format!(
                "a set system needs n >= 1 and m >= 1 (got n = {n}, m = {})",
                sets.len()
            )));
        }
        sets.validate(n)?;
        let sys = SetSystem {
            n,
            sets,
            labels: None,
        };
        let orphans = sys.orphan_count();
        if orphans > 0 {
            log::warn!("{orphans} of {n} items belong to no set and can never be covered");
        }
        Ok(sys)
    }

    pub fn from_lists<L: AsRef<[Id]>>(n: usize, lists: &[L]) -> Result<Self> {
        Self::new(n, SetFamily::from_lists(n, lists)?)
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &SetFamily {
        &self.sets
    }

    pub fn set(&self, idx: usize) -> &[Id] {
        self.sets.set(idx)
    }

    pub fn edge_count(&self) -> usize {
        self.sets.edge_count()
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn take_labels(&mut self) -> Option<Labels> {
        self.labels.take()
    }

    /// Number of items contained in no set.
    pub fn orphan_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        for &i in &self.sets.items {
            seen[i as usize] = true;
        }
        seen.iter().filter(|&&s| !s).count()
    }

    /// Items belonging to at least one set, ascending.
    pub fn covered_items(&self) -> Vec<Id> {
        let mut seen = vec![false; self.n];
        for &i in &self.sets.items {
            seen[i as usize] = true;
        }
        (0..self.n as Id).filter(|&i| seen[i as usize]).collect()
    }
}

/// A query: a sorted, duplicate-free subset of the ground set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Query {
    items: Vec<Id>,
}

impl Query {
    /// Sorts and dedups `items`, then checks every id is below `n`.
    pub fn new(n: usize, mut items: Vec<Id>) -> Result<Self> {
        items.sort_unstable();
        items.dedup();
        if let Some(&last) = items.last() {
            if last as usize >= n {
                return Err(Error::Bounds(format!("query item {last} but n = {n}")));
            }
        }
        Ok(Query { items })
    }

    /// The whole ground set `[0, n)`.
    pub fn full(n: usize) -> Self {
        Query {
            items: (0..n as Id).collect(),
        }
    }

    pub fn empty() -> Self {
        Query::default()
    }

    pub fn items(&self) -> &[Id] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Position of `item` within the query, if present.
    #[inline]
    pub fn position(&self, item: Id) -> Option<usize> {
        self.items.binary_search(&item).ok()
    }

    /// Checks the query against a system of `n` items.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.items.last() {
            Some(&last) if last as usize >= n => {
                Err(Error::Bounds(format!("query item {last} but n = {n}")))
            }
            _ => Ok(()),
        }
    }
}

/// Up to `k` distinct original set indices plus the coverage measured on
/// whatever structure produced them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub set_ids: Vec<Id>,
    pub sketch_coverage: usize,
}

impl Solution {
    pub fn empty() -> Self {
        Solution::default()
    }
}

/// `|(union of the chosen sets) ∩ q|`, counting each query item once.
pub fn coverage(sets: &SetFamily, set_ids: &[Id], q: &Query) -> Result<usize> {
    let mut covered = vec![false; q.len()];
    let mut total = 0;
    for &s in set_ids {
        if s as usize >= sets.len() {
            return Err(Error::Bounds(format!("set id {s} but m = {}", sets.len())));
        }
        for &item in sets.set(s as usize) {
            if let Some(pos) = q.position(item) {
                if !covered[pos] {
                    covered[pos] = true;
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}

/// Parses the `#n=<int> m=<int>` header comment.
fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut parts = rest.split_whitespace();
    let n = parts.next()?.strip_prefix("n=")?.parse().ok()?;
    let m = parts.next()?.strip_prefix("m=")?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((n, m))
}

/// Reads a tab-separated `set_id<TAB>item_id` edge list.
///
/// Dense ids follow first appearance. Duplicate edges collapse. A
/// `#n=<int> m=<int>` comment pins the dimensions; other `#` lines are ignored.
pub fn ingest_edge_list<R: BufRead>(reader: R) -> Result<SetSystem> {
    let mut items: IndexSet<String> = IndexSet::new();
    let mut sets: IndexSet<String> = IndexSet::new();
    let mut edges: Vec<Vec<Id>> = Vec::new();
    let mut header: Option<(usize, usize, usize)> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some((n, m)) = parse_header(line) {
                match header {
                    Some((hn, hm, at)) if (hn, hm) != (n, m) => {
                        return Err(Error::Dimension(format!(
                            "line {lineno}: header n={n} m={m} contradicts n={hn} m={hm} from line {at}"
                        )));
                    }
                    Some(_) => {}
                    None => header = Some((n, m, lineno)),
                }
            }
            continue;
        }
        let mut tokens = line.split('\t');
        let (Some(set), Some(item), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::parse(
                lineno,
                "expected exactly two tab-separated tokens",
            ));
        };
        if set.is_empty() || item.is_empty() {
            return Err(Error::parse(lineno, "empty id token"));
        }
        let (s, _) = sets.insert_full(set.to_owned());
        let (i, _) = items.insert_full(item.to_owned());
        if s == edges.len() {
            edges.push(Vec::new());
        }
        edges[s].push(i as Id);
    }

    let (n, m) = match header {
        Some((n, m, _)) => {
            if n > Id::MAX as usize || m > Id::MAX as usize {
                return Err(Error::Dimension(format!(
                    "header n={n} m={m} exceeds the 32-bit id range"
                )));
            }
            if items.len() > n || sets.len() > m {
                return Err(Error::Dimension(format!(
                    "header declares n={n} m={m} but the edges name {} items and {} sets",
                    items.len(),
                    sets.len()
                )));
            }
            (n, m)
        }
        None => (items.len(), sets.len()),
    };
    if n == 0 || m == 0 {
        return Err(Error::Dimension(
            "empty input: a set system needs n >= 1 and m >= 1".into(),
        ));
    }
    edges.resize_with(m, Vec::new);
    for list in &mut edges {
        list.sort_unstable();
        list.dedup();
    }
    Ok(SetSystem::from_lists(n, &edges)?.with_labels(Labels { items, sets }))
}

/// Convenience wrapper over [`ingest_edge_list`] for in-memory text.
pub fn parse_edge_list(text: &str) -> Result<SetSystem> {
    ingest_edge_list(text.as_bytes())
}

/// Orders edges so that re-ingesting them reproduces the dense numbering.
///
/// Walks the numbering forward, each step introducing the next set or item
/// through an edge whose other endpoint is already known. Returns `None`
/// when no such order exists (non-trailing empty sets or isolated items).
fn introduction_order(sys: &SetSystem) -> Option<Vec<(Id, Id)>> {
    let by_item = sys.sets.transpose(sys.n);
    let live_sets = (0..sys.m()).filter(|&s| !sys.set(s).is_empty()).count();
    let live_items = (0..sys.n).filter(|&i| !by_item.set(i).is_empty()).count();
    let (mut next_set, mut next_item) = (0usize, 0usize);
    let mut order = Vec::new();
    while next_set < live_sets || next_item < live_items {
        let set_min = (next_set < live_sets)
            .then(|| sys.set(next_set).first().copied())
            .flatten();
        let item_min = (next_item < live_items)
            .then(|| by_item.set(next_item).first().copied())
            .flatten();
        match (set_min, item_min) {
            (Some(i), _) if (i as usize) < next_item => {
                order.push((next_set as Id, i));
                next_set += 1;
            }
            (_, Some(s)) if (s as usize) < next_set => {
                order.push((s, next_item as Id));
                next_item += 1;
            }
            (Some(i), Some(s)) if i as usize == next_item && s as usize == next_set => {
                order.push((s, i));
                next_set += 1;
                next_item += 1;
            }
            _ => return None,
        }
    }
    Some(order)
}

/// Writes the system as an edge list with a dimension header.
///
/// For any system produced by [`ingest_edge_list`], ingesting the output
/// yields the same dense structure.
pub fn write_edge_list(sys: &SetSystem) -> String {
    let fallback = Labels::default();
    let labels = sys.labels.as_ref().unwrap_or(&fallback);
    let mut out = String::new();
    let _ = writeln!(out, "#n={} m={}", sys.n, sys.m());
    let mut emitted = HashSet::new();
    let emit = |out: &mut String, s: Id, i: Id| {
        let _ = writeln!(
            out,
            "{}\t{}",
            labels.set_name(s as usize),
            labels.item_name(i as usize)
        );
    };
    match introduction_order(sys) {
        Some(order) => {
            for &(s, i) in &order {
                emit(&mut out, s, i);
                emitted.insert((s, i));
            }
        }
        None => log::warn!(
            "dense numbering is not first-appearance consistent; re-ingest will renumber"
        ),
    }
    for (s, list) in sys.sets.iter().enumerate() {
        for &i in list {
            if !emitted.contains(&(s as Id, i)) {
                emit(&mut out, s as Id, i);
            }
        }
    }
    out
}

/// Reads one query per line, whitespace-separated external item ids.
///
/// Without labels, ids are parsed as dense integers. Blank lines are empty
/// queries; `#` lines are comments.
pub fn parse_queries<R: BufRead>(
    reader: R,
    n: usize,
    labels: Option<&Labels>,
) -> Result<Vec<Query>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut ids = Vec::new();
        for tok in line.split_whitespace() {
            let id = match labels {
                Some(l) if !l.items.is_empty() => l
                    .items
                    .get_index_of(tok)
                    .ok_or_else(|| Error::parse(lineno, format!("unknown item id {tok:?}")))?,
                _ => tok.parse::<usize>().map_err(|_| {
                    Error::parse(lineno, format!("item id {tok:?} is not an integer"))
                })?,
            };
            if id >= n {
                return Err(Error::parse(
                    lineno,
                    format!("item {tok:?} out of range (n = {n})"),
                ));
            }
            ids.push(id as Id);
        }
        out.push(Query::new(n, ids)?);
    }
    Ok(out)
}
