//! Word problems and rational-subset membership for free inverse monoids,
//! for plain words and for words compressed by straight-line programs.

pub mod alphabet;
pub mod cli;
pub mod error;
pub mod fim_compressed;
pub mod fixtures;
pub mod free_group;
pub mod munn;
pub mod presentations;
pub mod rational;
pub mod slp;

#[cfg(test)]
pub(crate) mod testutil;

use num_bigint::BigInt;

pub use alphabet::{Alphabet, Letter, Word};
pub use error::{Error, Result};
pub use fim_compressed::RankOneTriple;
pub use slp::{parse_slp, Slp, DEFAULT_DECOMPRESS_CAP};

/// Rank-one triples with unbounded coordinates.
pub type RankOne = RankOneTriple<BigInt>;
/// Rank-one triples for words whose walks stay within `i64`.
pub type RankOne64 = RankOneTriple<i64>;

/// Default bound on Munn tree size for streamed constructions.
pub const DEFAULT_NODE_CAP: usize = 1 << 16;
/// Default bound on explored search states.
pub const DEFAULT_STATE_CAP: usize = 1 << 22;

/// Resource bounds for the procedures that can blow up. Exceeding a bound
/// is reported as an error, never as a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub node_cap: usize,
    pub decompress_cap: u64,
    pub state_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            node_cap: DEFAULT_NODE_CAP,
            decompress_cap: DEFAULT_DECOMPRESS_CAP,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// Three-valued answer of the bounded procedures. `Yes` and `No` are
/// always correct; `Unknown` means the bound ran out first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    /// Conjunction: `No` dominates, then `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}
