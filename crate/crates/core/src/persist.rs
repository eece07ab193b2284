//! Binary `.sdcs` encoding for set systems and every sketch kind.
//!
//! ```text
//! record   := magic "SDCSKCH1" | version u8 (=1) | kind u8 | n u64le | m u64le | body
//! kind     := 0 set-system | 1 simple partition | 2 greedy partition | 3 sparse | 4 combined
//! body     := [sparse only: epsilon f64-bits u64le | k_build u64le | seed u64le | flags ceil(m/8) bytes]
//!             offsets: (m+1) x varint | items: per part, first id then gaps, varint each
//! combined := header (no body) | sparse record | greedy-partition record
//! file     := record | names
//! names    := 0x00 | 0x01 varint(#items) str* varint(#sets) str*      str := varint(len) utf8
//! ```
//!
//! Varints are unsigned LEB128. Significance flags are LSB-first; unused bits
//! must be zero. Every stream has exactly one encoding, so re-encoding a
//! decoded stream reproduces it byte for byte.

use std::io::{Read, Write};

use indexmap::IndexSet;

use crate::combined::CombinedSketch;
use crate::error::{Error, Result};
use crate::partition::{PartitionKind, PartitionSketch};
use crate::setsystem::{Id, Labels, SetFamily, SetSystem};
use crate::sketch::{Oracle, Sketch};
use crate::sparsify::SparseSketch;

pub const MAGIC: &[u8; 8] = b"SDCSKCH1";
pub const VERSION: u8 = 1;
pub const EXTENSION: &str = "sdcs";

const KIND_SET_SYSTEM: u8 = 0;
const KIND_SIMPLE: u8 = 1;
const KIND_GREEDY: u8 = 2;
const KIND_SPARSE: u8 = 3;
const KIND_COMBINED: u8 = 4;

/// Decoder resource limits.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Largest ground set accepted; the decoder allocates `O(n)` while validating.
    pub max_n: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_n: 1 << 28 }
    }
}

/// A decoded file: the sketch plus any external ids stored alongside it.
#[derive(Clone, Debug, PartialEq)]
pub struct SketchFile {
    pub sketch: Sketch,
    pub labels: Option<Labels>,
}

pub fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

fn kind_tag(sk: &Sketch) -> u8 {
    match sk {
        Sketch::SetSystem(_) => KIND_SET_SYSTEM,
        Sketch::Partition(p) if p.kind() == PartitionKind::Simple => KIND_SIMPLE,
        Sketch::Partition(_) => KIND_GREEDY,
        Sketch::Sparse(_) => KIND_SPARSE,
        Sketch::Combined(_) => KIND_COMBINED,
    }
}

fn put_header(out: &mut Vec<u8>, kind: u8, n: usize, m: usize) {
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(kind);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(m as u64).to_le_bytes());
}

fn put_family(out: &mut Vec<u8>, family: &SetFamily) {
    for &o in family.offsets() {
        write_varint(out, o as u64);
    }
    for part in family.iter() {
        let mut prev: Option<Id> = None;
        for &i in part {
            write_varint(out, u64::from(i - prev.unwrap_or(0)));
            prev = Some(i);
        }
    }
}

fn put_record(out: &mut Vec<u8>, sk: &Sketch) {
    put_header(out, kind_tag(sk), sk.n(), sk.m());
    match sk {
        Sketch::SetSystem(s) => put_family(out, s.sets()),
        Sketch::Partition(p) => put_family(out, p.parts()),
        Sketch::Sparse(s) => {
            out.extend_from_slice(&s.epsilon().to_bits().to_le_bytes());
            out.extend_from_slice(&(s.k_build() as u64).to_le_bytes());
            out.extend_from_slice(&s.seed().to_le_bytes());
            let mut flags = vec![0u8; s.m().div_ceil(8)];
            for (i, _) in s.significant().iter().enumerate().filter(|(_, &f)| f) {
                flags[i / 8] |= 1 << (i % 8);
            }
            out.extend_from_slice(&flags);
            put_family(out, s.parts());
        }
        Sketch::Combined(c) => {
            put_record(out, &Sketch::Sparse(c.sparse().clone()));
            put_record(out, &Sketch::Partition(c.partition().clone()));
        }
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    write_varint(out, s.len() as u64);
    out.extend_from_slice(s.as_bytes());
}

/// The bare record for `sk`, without the trailing names section.
pub fn encode_record(sk: &Sketch) -> Vec<u8> {
    let mut out = Vec::new();
    put_record(&mut out, sk);
    out
}

/// The full file image: record followed by the names section.
pub fn encode_sketch(sk: &Sketch, labels: Option<&Labels>) -> Vec<u8> {
    let mut out = encode_record(sk);
    match labels {
        None => out.push(0),
        Some(l) => {
            out.push(1);
            write_varint(&mut out, l.items.len() as u64);
            for s in &l.items {
                put_str(&mut out, s);
            }
            write_varint(&mut out, l.sets.len() as u64);
            for s in &l.sets {
                put_str(&mut out, s);
            }
        }
    }
    out
}

/// Writes the file image to `sink` and returns the number of bytes written.
pub fn write_sketch<W: Write>(sk: &Sketch, labels: Option<&Labels>, mut sink: W) -> Result<usize> {
    let bytes = encode_sketch(sk, labels);
    sink.write_all(&bytes)?;
    sink.flush()?;
    Ok(bytes.len())
}

/// Reads a whole `.sdcs` stream, validating every sketch invariant.
pub fn read_sketch<R: Read>(mut source: R) -> Result<SketchFile> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode_sketch(&bytes)
}

pub fn decode_sketch(bytes: &[u8]) -> Result<SketchFile> {
    decode_sketch_with_limits(bytes, Limits::default())
}

pub fn decode_sketch_with_limits(bytes: &[u8], limits: Limits) -> Result<SketchFile> {
    let mut cur = Cursor {
        buf: bytes,
        pos: 0,
        limits,
    };
    let sketch = cur.record()?;
    let labels = cur.names(sketch.n(), sketch.m())?;
    if cur.pos != bytes.len() {
        return Err(corrupt(format!("{} trailing bytes", bytes.len() - cur.pos)));
    }
    Ok(SketchFile { sketch, labels })
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::Corrupt(msg.into())
}

/// Invariant failures from the sketch constructors become corruption errors.
fn as_corrupt(e: Error) -> Error {
    match e {
        Error::Corrupt(_) => e,
        other => Error::Corrupt(other.to_string()),
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
    limits: Limits,
}

impl Cursor<'_> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, len: usize) -> Result<&[u8]> {
        if self.remaining() < len {
            return Err(corrupt(format!("truncated stream at byte {}", self.pos)));
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    fn varint(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        for shift in (0..64).step_by(7) {
            let b = self.u8()?;
            let bits = u64::from(b & 0x7f);
            if shift == 63 && bits > 1 {
                return Err(corrupt(format!("varint overflow at byte {start}")));
            }
            v |= bits << shift;
            if b & 0x80 == 0 {
                // A trailing zero group would give a second encoding of `v`.
                if b == 0 && shift > 0 {
                    return Err(corrupt(format!("non-canonical varint at byte {start}")));
                }
                return Ok(v);
            }
        }
        Err(corrupt(format!("varint overflow at byte {start}")))
    }

    fn header(&mut self) -> Result<(u8, usize, usize)> {
        let avail = self.remaining().min(MAGIC.len());
        let magic = &self.buf[self.pos..self.pos + avail];
        if magic != &MAGIC[..avail] {
            return Err(Error::Format(format!(
                "expected magic {:?}, found {:?}",
                String::from_utf8_lossy(MAGIC),
                String::from_utf8_lossy(magic)
            )));
        }
        let magic = self.take(MAGIC.len())?;
        if magic != MAGIC {
            return Err(Error::Format(format!(
                "expected magic {:?}, found {:?}",
                String::from_utf8_lossy(MAGIC),
                String::from_utf8_lossy(magic)
            )));
        }
        let version = self.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "unsupported version {version} (expected {VERSION})"
            )));
        }
        let kind = self.u8()?;
        if kind > KIND_COMBINED {
            return Err(Error::Format(format!("unknown sketch kind {kind}")));
        }
        let n = self.u64()?;
        let m = self.u64()?;
        if n > self.limits.max_n || n > u64::from(Id::MAX) {
            return Err(corrupt(format!("n = {n} exceeds the decoder limit")));
        }
        // Each set needs at least one offset byte.
        if m > self.remaining() as u64 || m > u64::from(Id::MAX) {
            return Err(corrupt(format!(
                "m = {m} cannot fit in the remaining stream"
            )));
        }
        Ok((kind, n as usize, m as usize))
    }

    fn family(&mut self, n: usize, m: usize) -> Result<SetFamily> {
        let mut offsets = Vec::with_capacity(m + 1);
        for _ in 0..=m {
            let o = self.varint()?;
            if o > self.buf.len() as u64 {
                return Err(corrupt(format!("offset {o} is larger than the stream")));
            }
            offsets.push(o as usize);
        }
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(corrupt("offsets must start at 0 and never decrease"));
        }
        let edges = offsets[m];
        if edges > self.remaining() {
            return Err(corrupt(format!(
                "{edges} edges cannot fit in the remaining stream"
            )));
        }
        let mut items = Vec::with_capacity(edges);
        for w in offsets.windows(2) {
            let mut prev: Option<u64> = None;
            for _ in w[0]..w[1] {
                let d = self.varint()?;
                let item = match prev {
                    None => d,
                    Some(_) if d == 0 => {
                        return Err(corrupt("zero gap: part is not strictly increasing"))
                    }
                    Some(p) => p
                        .checked_add(d)
                        .ok_or_else(|| corrupt("item id overflow"))?,
                };
                if item >= n as u64 {
                    return Err(corrupt(format!("item {item} out of range (n = {n})")));
                }
                items.push(item as Id);
                prev = Some(item);
            }
        }
        Ok(SetFamily::from_raw(offsets, items))
    }

    fn record(&mut self) -> Result<Sketch> {
        let (kind, n, m) = self.header()?;
        match kind {
            KIND_SET_SYSTEM => {
                let fam = self.family(n, m)?;
                Ok(Sketch::SetSystem(
                    SetSystem::new(n, fam).map_err(as_corrupt)?,
                ))
            }
            KIND_SIMPLE | KIND_GREEDY => {
                let fam = self.family(n, m)?;
                let pk = if kind == KIND_SIMPLE {
                    PartitionKind::Simple
                } else {
                    PartitionKind::Greedy
                };
                Ok(Sketch::Partition(
                    PartitionSketch::from_parts(n, pk, fam).map_err(as_corrupt)?,
                ))
            }
            KIND_SPARSE => {
                let epsilon = f64::from_bits(self.u64()?);
                let k_build = self.u64()?;
                let seed = self.u64()?;
                let flags = self.take(m.div_ceil(8))?;
                if m % 8 != 0 && flags[m / 8] >> (m % 8) != 0 {
                    return Err(corrupt("unused significance bits are set"));
                }
                let significant: Vec<bool> =
                    (0..m).map(|i| flags[i / 8] >> (i % 8) & 1 == 1).collect();
                let k_build =
                    usize::try_from(k_build).map_err(|_| corrupt("k_build overflows usize"))?;
                let fam = self.family(n, m)?;
                let sk = SparseSketch::from_parts(n, epsilon, k_build, seed, fam, significant)
                    .map_err(as_corrupt)?;
                Ok(Sketch::Sparse(sk))
            }
            _ => {
                let Sketch::Sparse(sparse) = self.record()? else {
                    return Err(corrupt("combined record must embed a sparse record first"));
                };
                let Sketch::Partition(partition) = self.record()? else {
                    return Err(corrupt(
                        "combined record must embed a partition record second",
                    ));
                };
                if (sparse.n(), sparse.m()) != (n, m) {
                    return Err(corrupt(
                        "embedded records disagree with the combined header",
                    ));
                }
                Ok(Sketch::Combined(
                    CombinedSketch::from_arms(sparse, partition).map_err(as_corrupt)?,
                ))
            }
        }
    }

    fn string(&mut self) -> Result<String> {
        let len = self.varint()?;
        if len > self.remaining() as u64 {
            return Err(corrupt("truncated string"));
        }
        let raw = self.take(len as usize)?;
        String::from_utf8(raw.to_vec()).map_err(|_| corrupt("name is not valid UTF-8"))
    }

    fn dictionary(&mut self, cap: usize, what: &str) -> Result<IndexSet<String>> {
        let count = self.varint()?;
        if count > cap as u64 || count > self.remaining() as u64 {
            return Err(corrupt(format!("{count} {what} names for {cap} {what}s")));
        }
        let mut out = IndexSet::with_capacity(count as usize);
        for _ in 0..count {
            let s = self.string()?;
            if !out.insert(s) {
                return Err(corrupt(format!("duplicate {what} name")));
            }
        }
        Ok(out)
    }

    fn names(&mut self, n: usize, m: usize) -> Result<Option<Labels>> {
        match self.u8()? {
            0 => Ok(None),
            1 => {
                let items = self.dictionary(n, "item")?;
                let sets = self.dictionary(m, "set")?;
                Ok(Some(Labels { items, sets }))
            }
            t => Err(corrupt(format!("bad names tag {t}"))),
        }
    }
}
