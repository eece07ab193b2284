//! Succinct dynamic covering.
//!
//! A static stage compresses a set system into a sketch within a space
//! budget and then discards the input. A dynamic stage answers arbitrary
//! queries `Q` from the sketch alone, returning at most `k` set ids whose
//! union covers as much of `Q` as possible.
//!
//! | oracle | stored incidences | approximation |
//! |---|---|---|
//! | [`partition::build_simple_partition`] | `<= n` | `O(m/k)` |
//! | [`partition::build_greedy_partition`] | `<= n` | `O(sqrt(n/k))` |
//! | [`sparsify::build_sparsified`] | `<= n + m ceil(n/m^(2 eps))` | `O(m^eps/sqrt(k))` in expectation |
//! | [`combined::build_combined`] | sum of the two | `O(min(m^eps, sqrt(n))/sqrt(k))` in expectation |

pub mod advgen;
pub mod combined;
pub mod error;
pub mod eval;
pub mod guarantees;
pub mod maxcover;
pub mod partition;
pub mod persist;
pub mod setsystem;
pub mod sketch;
pub mod sparsify;

pub use error::{Error, Result};
pub use setsystem::{coverage, Id, Labels, Query, SetFamily, SetSystem, Solution};
pub use sketch::{Oracle, OracleKind, Sketch};
