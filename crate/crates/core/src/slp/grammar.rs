//! Hash-consed arena of binary productions shared by every compressed-word
//! operation.
//!
//! Rule ids are assigned in creation order and a rule only ever refers to
//! older ids, so ascending id order is a topological order. Every rule
//! caches its expansion length, height and a Karp–Rabin fingerprint.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::Letter;

pub(crate) type Id = u32;

/// The empty word. Always present at id 0.
pub(crate) const EMPTY: Id = 0;

const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1d8e_4e27_c47d_124f % MODULUS;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn letter_fingerprint(letter: Letter) -> u64 {
    // splitmix64 finalizer
    let mut z = (letter.code() as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) % MODULUS
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Rule {
    Empty,
    Letter(Letter),
    /// Both children are non-empty.
    Pair(Id, Id),
}

#[derive(Clone, Debug)]
pub(crate) struct Grammar {
    rules: Vec<Rule>,
    lens: Vec<BigUint>,
    heights: Vec<u32>,
    hashes: Vec<u64>,
    powers: Vec<u64>,
    dedup: HashMap<Rule, Id>,
    inverses: HashMap<Id, Id>,
}

impl Default for Grammar {
    fn default() -> Self {
        Self::new()
    }
}

impl Grammar {
    pub fn new() -> Self {
        let mut g = Grammar {
            rules: Vec::new(),
            lens: Vec::new(),
            heights: Vec::new(),
            hashes: Vec::new(),
            powers: Vec::new(),
            dedup: HashMap::new(),
            inverses: HashMap::new(),
        };
        g.push(Rule::Empty);
        g.inverses.insert(EMPTY, EMPTY);
        g
    }

    pub fn rule(&self, id: Id) -> Rule {
        self.rules[id as usize]
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn len(&self, id: Id) -> &BigUint {
        &self.lens[id as usize]
    }

    pub fn height(&self, id: Id) -> u32 {
        self.heights[id as usize]
    }

    pub fn fingerprint(&self, id: Id) -> u64 {
        self.hashes[id as usize]
    }

    fn push(&mut self, rule: Rule) -> Id {
        if let Some(&id) = self.dedup.get(&rule) {
            return id;
        }
        let (len, height, hash, power) = match rule {
            Rule::Empty => (BigUint::zero(), 0, 0, 1),
            Rule::Letter(l) => (BigUint::one(), 1, letter_fingerprint(l), BASE),
            Rule::Pair(a, b) => {
                let (a, b) = (a as usize, b as usize);
                (
                    &self.lens[a] + &self.lens[b],
                    self.heights[a].max(self.heights[b]) + 1,
                    add_mod(mul_mod(self.hashes[a], self.powers[b]), self.hashes[b]),
                    mul_mod(self.powers[a], self.powers[b]),
                )
            }
        };
        let id = self.rules.len() as Id;
        self.rules.push(rule);
        self.lens.push(len);
        self.heights.push(height);
        self.hashes.push(hash);
        self.powers.push(power);
        self.dedup.insert(rule, id);
        id
    }

    pub fn letter(&mut self, letter: Letter) -> Id {
        self.push(Rule::Letter(letter))
    }

    pub fn pair(&mut self, a: Id, b: Id) -> Id {
        if a == EMPTY {
            b
        } else if b == EMPTY {
            a
        } else {
            self.push(Rule::Pair(a, b))
        }
    }

    /// Balanced concatenation of a sequence of rules.
    pub fn concat_all(&mut self, ids: &[Id]) -> Id {
        match ids.len() {
            0 => EMPTY,
            1 => ids[0],
            n => {
                let left = self.concat_all(&ids[..n / 2]);
                let right = self.concat_all(&ids[n / 2..]);
                self.pair(left, right)
            }
        }
    }

    pub fn word(&mut self, letters: &[Letter]) -> Id {
        let ids: Vec<Id> = letters.iter().map(|&l| self.letter(l)).collect();
        self.concat_all(&ids)
    }

    /// `val(id)^k` by binary powering: `O(log k)` new rules.
    pub fn power(&mut self, id: Id, k: &BigUint) -> Id {
        let mut result = EMPTY;
        let mut square = id;
        let bits = k.bits();
        for bit in 0..bits {
            if k.bit(bit) {
                result = self.pair(result, square);
            }
            if bit + 1 < bits {
                square = self.pair(square, square);
            }
        }
        result
    }

    /// Rules reachable from `root`, children before parents.
    pub fn reachable(&self, root: Id) -> Vec<Id> {
        let mut seen = vec![false; self.rules.len()];
        let mut order = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
                continue;
            }
            if seen[id as usize] {
                continue;
            }
            seen[id as usize] = true;
            stack.push((id, true));
            if let Rule::Pair(a, b) = self.rules[id as usize] {
                if !seen[b as usize] {
                    stack.push((b, false));
                }
                if !seen[a as usize] {
                    stack.push((a, false));
                }
            }
        }
        order
    }

    /// Letterwise inverse of the reversal, memoized per rule.
    pub fn inverse(&mut self, root: Id) -> Id {
        if let Some(&id) = self.inverses.get(&root) {
            return id;
        }
        for id in self.reachable(root) {
            if self.inverses.contains_key(&id) {
                continue;
            }
            let inv = match self.rules[id as usize] {
                Rule::Empty => EMPTY,
                Rule::Letter(l) => self.letter(l.inverse()),
                Rule::Pair(a, b) => {
                    let (ia, ib) = (self.inverses[&a], self.inverses[&b]);
                    self.pair(ib, ia)
                }
            };
            self.inverses.insert(id, inv);
            self.inverses.insert(inv, id);
        }
        self.inverses[&root]
    }

    /// The first `k` symbols, `0 ≤ k ≤ len(id)`.
    pub fn prefix(&mut self, id: Id, k: &BigUint) -> Id {
        debug_assert!(k <= self.len(id));
        let mut pieces = Vec::new();
        let mut node = id;
        let mut k = k.clone();
        while !k.is_zero() {
            if &k == self.len(node) {
                pieces.push(node);
                break;
            }
            match self.rules[node as usize] {
                Rule::Pair(l, r) => {
                    let ll = self.len(l);
                    if &k >= ll {
                        k -= ll;
                        pieces.push(l);
                        node = r;
                    } else {
                        node = l;
                    }
                }
                _ => unreachable!("prefix length exceeds rule length"),
            }
        }
        let mut acc = EMPTY;
        for p in pieces.into_iter().rev() {
            acc = self.pair(p, acc);
        }
        acc
    }

    /// The last `k` symbols, `0 ≤ k ≤ len(id)`.
    pub fn suffix(&mut self, id: Id, k: &BigUint) -> Id {
        debug_assert!(k <= self.len(id));
        let mut pieces = Vec::new();
        let mut node = id;
        let mut k = k.clone();
        while !k.is_zero() {
            if &k == self.len(node) {
                pieces.push(node);
                break;
            }
            match self.rules[node as usize] {
                Rule::Pair(l, r) => {
                    let rl = self.len(r);
                    if &k >= rl {
                        k -= rl;
                        pieces.push(r);
                        node = l;
                    } else {
                        node = r;
                    }
                }
                _ => unreachable!("suffix length exceeds rule length"),
            }
        }
        let mut acc = EMPTY;
        for p in pieces.into_iter().rev() {
            acc = self.pair(acc, p);
        }
        acc
    }

    /// Symbols `i..=j` (1-based); empty when `i > j`. Bounds are the caller's job.
    pub fn slice(&mut self, id: Id, i: &BigUint, j: &BigUint) -> Id {
        if i > j {
            return EMPTY;
        }
        let p = self.prefix(id, j);
        let width = j - i + 1u32;
        self.suffix(p, &width)
    }

    /// Symbol at 0-based `index < len(id)`.
    pub fn symbol_at(&self, id: Id, index: &BigUint) -> Letter {
        let mut node = id;
        let mut index = index.clone();
        loop {
            match self.rules[node as usize] {
                Rule::Letter(l) => return l,
                Rule::Pair(l, r) => {
                    let ll = self.len(l);
                    if &index >= ll {
                        index -= ll;
                        node = r;
                    } else {
                        node = l;
                    }
                }
                Rule::Empty => unreachable!("index past end of word"),
            }
        }
    }

    /// Fingerprint of the first `k` symbols without building the prefix.
    pub fn prefix_fingerprint(&self, id: Id, k: &BigUint) -> u64 {
        let mut acc = 0u64;
        let mut node = id;
        let mut k = k.clone();
        while !k.is_zero() {
            if &k == self.len(node) {
                acc = add_mod(
                    mul_mod(acc, self.powers[node as usize]),
                    self.hashes[node as usize],
                );
                break;
            }
            match self.rules[node as usize] {
                Rule::Pair(l, r) => {
                    let ll = self.len(l);
                    if &k >= ll {
                        k -= ll;
                        acc = add_mod(mul_mod(acc, self.powers[l as usize]), self.hashes[l as usize]);
                        node = r;
                    } else {
                        node = l;
                    }
                }
                _ => unreachable!(),
            }
        }
        acc
    }

    /// Copies the rules reachable from `root` in `other` into `self`.
    pub fn import(&mut self, other: &Grammar, root: Id, memo: &mut HashMap<Id, Id>) -> Id {
        for id in other.reachable(root) {
            if memo.contains_key(&id) {
                continue;
            }
            let new = match other.rules[id as usize] {
                Rule::Empty => EMPTY,
                Rule::Letter(l) => self.letter(l),
                Rule::Pair(a, b) => {
                    let (na, nb) = (memo[&a], memo[&b]);
                    self.pair(na, nb)
                }
            };
            memo.insert(id, new);
        }
        memo[&root]
    }

    /// `|A| = Σ |rhs|` over the rules reachable from `root`.
    pub fn size(&self, root: Id) -> usize {
        self.reachable(root)
            .into_iter()
            .map(|id| match self.rules[id as usize] {
                Rule::Empty => 0,
                Rule::Letter(_) => 1,
                Rule::Pair(..) => 2,
            })
            .sum()
    }

    pub fn symbols(&self, root: Id) -> Symbols<'_> {
        Symbols {
            grammar: self,
            stack: if root == EMPTY { vec![] } else { vec![root] },
        }
    }
}

/// Streaming expansion with an explicit stack; memory is bounded by the grammar height.
pub struct Symbols<'a> {
    grammar: &'a Grammar,
    stack: Vec<Id>,
}

impl Iterator for Symbols<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        while let Some(id) = self.stack.pop() {
            match self.grammar.rules[id as usize] {
                Rule::Letter(l) => return Some(l),
                Rule::Pair(a, b) => {
                    self.stack.push(b);
                    self.stack.push(a);
                }
                Rule::Empty => {}
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(g: &Grammar, id: Id) -> Vec<u32> {
        g.symbols(id).map(|l| l.code()).collect()
    }

    fn lit(g: &mut Grammar, codes: &[u32]) -> Id {
        let letters: Vec<Letter> = codes.iter().map(|&c| Letter::from_code(c)).collect();
        g.word(&letters)
    }

    #[test]
    fn hash_consing_shares_rules() {
        let mut g = Grammar::new();
        let x = lit(&mut g, &[0, 2]);
        let y = lit(&mut g, &[0, 2]);
        assert_eq!(x, y);
    }

    #[test]
    fn prefix_suffix_slice() {
        let mut g = Grammar::new();
        let w = lit(&mut g, &[0, 2, 2, 0, 4, 6]);
        for k in 0..=6u32 {
            let p = g.prefix(w, &BigUint::from(k));
            assert_eq!(expand(&g, p), [0, 2, 2, 0, 4, 6][..k as usize]);
            let s = g.suffix(w, &BigUint::from(k));
            assert_eq!(expand(&g, s), [0, 2, 2, 0, 4, 6][6 - k as usize..]);
        }
        let s = g.slice(w, &BigUint::from(2u32), &BigUint::from(3u32));
        assert_eq!(expand(&g, s), [2, 2]);
    }

    #[test]
    fn power_and_inverse() {
        let mut g = Grammar::new();
        let w = lit(&mut g, &[0, 3]);
        let p = g.power(w, &BigUint::from(5u32));
        assert_eq!(g.len(p), &BigUint::from(10u32));
        assert_eq!(expand(&g, p), [0, 3].repeat(5));
        let inv = g.inverse(p);
        assert_eq!(expand(&g, inv), [2, 1].repeat(5));
        assert_eq!(g.power(w, &BigUint::zero()), EMPTY);
    }

    #[test]
    fn prefix_fingerprint_matches_built_prefix() {
        let mut g = Grammar::new();
        let w = lit(&mut g, &[0, 1, 2, 3, 0, 0, 2]);
        let w = g.power(w, &BigUint::from(3u32));
        for k in 0..=21u32 {
            let k = BigUint::from(k);
            let p = g.prefix(w, &k);
            assert_eq!(g.prefix_fingerprint(w, &k), g.fingerprint(p));
        }
    }
}
