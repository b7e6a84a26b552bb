//! Antichains of subsets of a finite set, intervals between them, and exact
//! interval sizes by level decomposition.
//!
//! An antichain over `N = {1..n}` is stored as a sorted list of bit masks
//! (bit `i - 1` stands for element `i`), so `n` is capped at 64.

mod antichain;
mod count;
pub mod counting;
pub mod decomp;
mod error;
pub mod interval;
pub mod mask;
pub mod oracle;
mod text;
pub mod verify;

pub use antichain::{Antichain, Permutation, Subset, Universe, MAX_UNIVERSE};
pub use count::Count;
pub use counting::{
    canonical_decomposition, size_auto, size_even_odd, size_multilevel, size_pivot, LevelDecomposition, Parity,
};
pub use error::{Error, Result};
pub use interval::{
    interval_from_poset, is_interval_poset, lift_interval, pred, strip_common, underlying_poset, Interval, IntervalPoset,
};
pub use text::{parse_antichain, parse_family, parse_family_max_ac};
