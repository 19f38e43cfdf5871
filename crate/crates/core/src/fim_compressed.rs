//! The compressed word problem for free inverse monoids, and the
//! polynomial algebra for rank one.

use std::collections::HashMap;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::free_group::fg_equal;
use crate::munn::munn_tree_streamed;
use crate::slp::{Rule, Slp};
use crate::Caps;

/// `ρ(val(A)) = ρ(val(B))`: equal in the free group and equal Munn trees.
///
/// Equality of the trees is the same as the two prefix conditions "every
/// prefix of one word equals some prefix of the other in the free group".
pub fn fim_equal_compressed(a: &Slp, b: &Slp, caps: &Caps) -> Result<bool> {
    if !fg_equal(a, b)? {
        return Ok(false);
    }
    let x = munn_tree_streamed(a, caps.node_cap)?;
    let y = munn_tree_streamed(b, caps.node_cap)?;
    Ok(x.tree == y.tree)
}

/// `val(A)[1, i] = val(B)[1, j]` in the free group; `i`, `j` may be huge.
pub fn prefix_witness_check(a: &Slp, i: &BigUint, b: &Slp, j: &BigUint) -> Result<bool> {
    fg_equal(&a.prefix(i)?, &b.prefix(j)?)
}

/// An element of `FIM({a})`: the walk covers `[i, k]` and ends at `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RankOneTriple<T> {
    pub i: T,
    pub j: T,
    pub k: T,
}

impl<T> RankOneTriple<T>
where
    T: Clone + Ord + Signed,
    for<'x> &'x T: Add<&'x T, Output = T>,
{
    /// Checks `i ≤ j ≤ k` and `i ≤ 0 ≤ k`.
    pub fn new(i: T, j: T, k: T) -> Option<Self> {
        (i <= j && j <= k && !i.is_positive() && !k.is_negative()).then_some(RankOneTriple { i, j, k })
    }

    pub fn identity() -> Self {
        RankOneTriple {
            i: T::zero(),
            j: T::zero(),
            k: T::zero(),
        }
    }

    /// `a ↦ (0,1,1)`, `a⁻¹ ↦ (−1,−1,0)`.
    pub fn letter(inverse: bool) -> Self {
        if inverse {
            RankOneTriple {
                i: -T::one(),
                j: -T::one(),
                k: T::zero(),
            }
        } else {
            RankOneTriple {
                i: T::zero(),
                j: T::one(),
                k: T::one(),
            }
        }
    }

    /// `(min{i₁, j₁+i₂}, j₁+j₂, max{k₁, j₁+k₂})`.
    pub fn multiply(&self, other: &Self) -> Self {
        RankOneTriple {
            i: self.i.clone().min(&self.j + &other.i),
            j: &self.j + &other.j,
            k: self.k.clone().max(&self.j + &other.k),
        }
    }
}

/// Triple of `ρ(val(A))` for a program over a single generator.
pub fn rank_one_eval(a: &Slp) -> Result<RankOneTriple<BigInt>> {
    if a.alphabet().len() != 1 {
        return Err(Error::AlphabetMismatch);
    }
    let g = a.grammar();
    let mut memo: HashMap<u32, RankOneTriple<BigInt>> = HashMap::new();
    for id in g.reachable(a.root()) {
        let t = match g.rule(id) {
            Rule::Empty => RankOneTriple::identity(),
            Rule::Letter(l) => RankOneTriple::letter(l.is_inverse()),
            Rule::Pair(x, y) => memo[&x].multiply(&memo[&y]),
        };
        memo.insert(id, t);
    }
    Ok(memo.remove(&a.root()).unwrap())
}

pub fn rank_one_equal(a: &Slp, b: &Slp) -> Result<bool> {
    Ok(rank_one_eval(a)? == rank_one_eval(b)?)
}

impl<T: Zero + Clone> Default for RankOneTriple<T> {
    fn default() -> Self {
        RankOneTriple {
            i: T::zero(),
            j: T::zero(),
            k: T::zero(),
        }
    }
}
