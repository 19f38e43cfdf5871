//! Straight-line programs: grammar-compressed words over a doubled alphabet.
//!
//! Internally every production has at most two symbols on its right-hand
//! side and identical productions are shared, so structurally equal
//! programs have identical rule listings. Lengths and indices are
//! arbitrary precision throughout.

mod grammar;
mod recompress;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};

pub(crate) use grammar::{Grammar, Id, Rule, EMPTY};
pub use text::parse_slp;
pub(crate) use text::strip_comment;

/// Default bound on the number of symbols [`Slp::decompress`] may produce.
pub const DEFAULT_DECOMPRESS_CAP: u64 = 1 << 20;

/// An immutable straight-line program. Cheap to clone.
#[derive(Clone)]
pub struct Slp {
    alphabet: Alphabet,
    grammar: Arc<Grammar>,
    root: Id,
}

impl Slp {
    pub(crate) fn from_parts(alphabet: Alphabet, grammar: Grammar, root: Id) -> Self {
        Slp {
            alphabet,
            grammar: Arc::new(grammar),
            root,
        }
    }

    pub(crate) fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub(crate) fn root(&self) -> Id {
        self.root
    }

    /// Imports this program into `g`, returning its root there.
    pub(crate) fn import_into(&self, g: &mut Grammar) -> Id {
        g.import(&self.grammar, self.root, &mut HashMap::new())
    }

    /// The empty word.
    pub fn empty(alphabet: &Alphabet) -> Self {
        Slp::from_parts(alphabet.clone(), Grammar::new(), EMPTY)
    }

    /// A balanced program for a plain word.
    pub fn literal(alphabet: &Alphabet, word: &Word) -> Self {
        let mut g = Grammar::new();
        let root = g.word(word.letters());
        Slp::from_parts(alphabet.clone(), g, root)
    }

    /// Parses the whitespace-separated token syntax, e.g. `a b' a`.
    pub fn from_tokens(alphabet: &Alphabet, text: &str) -> Result<Self> {
        Ok(Slp::literal(alphabet, &alphabet.parse_word(text)?))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `|val(A)|`, computed from cached rule lengths.
    pub fn length(&self) -> BigUint {
        self.grammar.len(self.root).clone()
    }

    pub fn is_empty(&self) -> bool {
        self.root == EMPTY
    }

    /// `|A|`: total right-hand-side length over reachable productions.
    pub fn size(&self) -> usize {
        self.grammar.size(self.root)
    }

    pub fn height(&self) -> u32 {
        self.grammar.height(self.root)
    }

    fn check_alphabet(&self, other: &Slp) -> Result<()> {
        if self.alphabet.same_as(&other.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Applies `f` to a fresh grammar holding this program.
    fn rebuild(&self, f: impl FnOnce(&mut Grammar, Id) -> Id) -> Slp {
        let mut g = Grammar::new();
        let a = self.import_into(&mut g);
        let root = f(&mut g, a);
        Slp::from_parts(self.alphabet.clone(), g, root).compacted()
    }

    /// Drops rules no longer reachable from the root.
    pub(crate) fn compacted(self) -> Slp {
        if self.grammar.reachable(self.root).len() == self.grammar.num_rules() {
            return self;
        }
        let mut g = Grammar::new();
        let root = self.import_into(&mut g);
        Slp::from_parts(self.alphabet, g, root)
    }

    pub fn concat(&self, other: &Slp) -> Result<Slp> {
        self.check_alphabet(other)?;
        let mut g = Grammar::new();
        let a = self.import_into(&mut g);
        let b = other.import_into(&mut g);
        let root = g.pair(a, b);
        Ok(Slp::from_parts(self.alphabet.clone(), g, root))
    }

    /// Concatenation of many programs sharing one alphabet.
    pub fn concat_all(alphabet: &Alphabet, parts: &[Slp]) -> Result<Slp> {
        let mut g = Grammar::new();
        let mut roots = Vec::with_capacity(parts.len());
        for p in parts {
            if !p.alphabet.same_as(alphabet) {
                return Err(Error::AlphabetMismatch);
            }
            roots.push(p.import_into(&mut g));
        }
        let root = g.concat_all(&roots);
        Ok(Slp::from_parts(alphabet.clone(), g, root))
    }

    /// `val(A)^k` with `O(log k)` new productions.
    pub fn power(&self, k: &BigUint) -> Slp {
        self.rebuild(|g, a| g.power(a, k))
    }

    /// `val(A)⁻¹`.
    pub fn invert(&self) -> Slp {
        self.rebuild(|g, a| g.inverse(a))
    }

    /// `val(A)[i, j]`, 1-based and inclusive; empty when `i > j`.
    pub fn slice(&self, i: &BigUint, j: &BigUint) -> Result<Slp> {
        if i > j {
            return Ok(Slp::empty(&self.alphabet));
        }
        if i.is_zero() || j > self.grammar.len(self.root) {
            return Err(Error::IndexOutOfRange {
                i: i.clone(),
                j: j.clone(),
                len: self.length(),
            });
        }
        Ok(self.rebuild(|g, a| g.slice(a, i, j)))
    }

    /// The first `k` symbols.
    pub fn prefix(&self, k: &BigUint) -> Result<Slp> {
        if k.is_zero() {
            return Ok(Slp::empty(&self.alphabet));
        }
        self.slice(&BigUint::one(), k)
    }

    /// `val(A)[i]`, 1-based, without expanding the word.
    pub fn symbol_at(&self, i: &BigUint) -> Result<Letter> {
        if i.is_zero() || i > self.grammar.len(self.root) {
            return Err(Error::IndexOutOfRange {
                i: i.clone(),
                j: i.clone(),
                len: self.length(),
            });
        }
        Ok(self.grammar.symbol_at(self.root, &(i - 1u32)))
    }

    /// Letterwise equality of the denoted words, without decompression.
    pub fn equal(&self, other: &Slp) -> Result<bool> {
        self.check_alphabet(other)?;
        if Arc::ptr_eq(&self.grammar, &other.grammar) {
            return Ok(equal_in(&self.grammar, self.root, other.root));
        }
        let (ga, gb) = (&*self.grammar, &*other.grammar);
        let (a, b) = (self.root, other.root);
        if ga.len(a) != gb.len(b) {
            return Ok(false);
        }
        if ga.fingerprint(a) != gb.fingerprint(b) {
            return Ok(false);
        }
        if a == EMPTY {
            return Ok(true);
        }
        Ok(recompress::equal(ga, a, gb, b))
    }

    /// Length of the longest common prefix.
    pub fn lcp(&self, other: &Slp) -> Result<BigUint> {
        self.check_alphabet(other)?;
        let mut g = Grammar::new();
        let a = self.import_into(&mut g);
        let b = other.import_into(&mut g);
        Ok(lcp_in(&mut g, a, b))
    }

    /// Expands the word, refusing when it is longer than `cap`.
    pub fn decompress(&self, cap: u64) -> Result<Word> {
        let len = self.length();
        if len > BigUint::from(cap) {
            return Err(Error::CapExceeded(len));
        }
        Ok(self.symbols().collect())
    }

    /// Streams the symbols of `val(A)` left to right.
    pub fn symbols(&self) -> impl Iterator<Item = Letter> + '_ {
        self.grammar.symbols(self.root)
    }

    /// Re-expresses the program over a larger alphabet containing this one.
    pub fn embed(&self, target: &Alphabet) -> Result<Slp> {
        let map = self.alphabet.embedding_into(target)?;
        let mut g = Grammar::new();
        let mut memo: HashMap<Id, Id> = HashMap::new();
        for id in self.grammar.reachable(self.root) {
            let new = match self.grammar.rule(id) {
                Rule::Empty => EMPTY,
                Rule::Letter(l) => {
                    let gen = map[l.generator()];
                    g.letter(if l.is_inverse() {
                        Letter::negative(gen)
                    } else {
                        Letter::positive(gen)
                    })
                }
                Rule::Pair(x, y) => g.pair(memo[&x], memo[&y]),
            };
            memo.insert(id, new);
        }
        Ok(Slp::from_parts(target.clone(), g, memo[&self.root]))
    }

    /// Reachable productions renumbered in discovery order.
    fn canonical(&self) -> Vec<Rule> {
        let order = self.grammar.reachable(self.root);
        let pos: HashMap<Id, u32> = order.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
        order
            .iter()
            .map(|&id| match self.grammar.rule(id) {
                Rule::Pair(a, b) => Rule::Pair(pos[&a], pos[&b]),
                r => r,
            })
            .collect()
    }
}

/// Structural equality: same alphabet and the same production graph.
/// Use [`Slp::equal`] to compare denoted words.
impl PartialEq for Slp {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.canonical() == other.canonical()
    }
}

impl fmt::Debug for Slp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Slp")
            .field("alphabet", &self.alphabet)
            .field("length", &self.length())
            .field("size", &self.size())
            .finish()
    }
}

pub(crate) fn equal_in(g: &Grammar, a: Id, b: Id) -> bool {
    if a == b {
        return true;
    }
    if g.len(a) != g.len(b) || g.fingerprint(a) != g.fingerprint(b) {
        return false;
    }
    recompress::equal(g, a, g, b)
}

/// Longest common prefix of two rules of one grammar.
///
/// A fingerprint binary search proposes the answer, which is then
/// certified exactly; an exact binary search is the fallback when a hash
/// collision spoils the proposal.
pub(crate) fn lcp_in(g: &mut Grammar, a: Id, b: Id) -> BigUint {
    let max = g.len(a).clone().min(g.len(b).clone());
    if a == b {
        return max;
    }
    let mut lo = BigUint::zero();
    let mut hi = max.clone();
    while lo < hi {
        let mid: BigUint = (&lo + &hi + 1u32) >> 1;
        if g.prefix_fingerprint(a, &mid) == g.prefix_fingerprint(b, &mid) {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    if lcp_certified(g, a, b, &lo, &max) {
        return lo;
    }
    let mut lo = BigUint::zero();
    let mut hi = max;
    while lo < hi {
        let mid: BigUint = (&lo + &hi + 1u32) >> 1;
        let pa = g.prefix(a, &mid);
        let pb = g.prefix(b, &mid);
        if equal_in(g, pa, pb) {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    lo
}

fn lcp_certified(g: &mut Grammar, a: Id, b: Id, k: &BigUint, max: &BigUint) -> bool {
    if k < max && g.symbol_at(a, k) == g.symbol_at(b, k) {
        return false;
    }
    let pa = g.prefix(a, k);
    let pb = g.prefix(b, k);
    equal_in(g, pa, pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_slp;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn text(s: &Slp) -> String {
        s.alphabet()
            .format_word(&s.decompress(DEFAULT_DECOMPRESS_CAP).unwrap())
    }

    fn doubling_chain(alphabet: &Alphabet, depth: u32) -> Slp {
        let mut s = Slp::from_tokens(alphabet, "a").unwrap();
        for _ in 0..depth {
            s = s.concat(&s).unwrap();
        }
        s
    }

    /// `a^n` built one letter at a time, a deliberately different shape.
    fn literal_chain(alphabet: &Alphabet, n: usize) -> Slp {
        let a = Slp::from_tokens(alphabet, "a").unwrap();
        let mut s = a.clone();
        for _ in 1..n {
            s = s.concat(&a).unwrap();
        }
        s
    }

    #[test]
    fn parse_examples() {
        let s = parse_slp("alphabet: a b\nstart: $S\n$S := a b\n", None).unwrap();
        assert_eq!(text(&s), "a b");
        let s = parse_slp("alphabet: a\nstart: $S\n$S := $X $X\n$X := a a\n", None).unwrap();
        assert_eq!(text(&s), "a a a a");
        assert!(matches!(
            parse_slp("alphabet: a\nstart: $S\n$S := $S a\n", None),
            Err(Error::CyclicGrammar(_))
        ));
    }

    #[test]
    fn lengths_of_chains() {
        let al = ab();
        assert_eq!(Slp::from_tokens(&al, "a b").unwrap().length(), big(2));
        assert_eq!(doubling_chain(&al, 10).length(), big(1024));
    }

    #[test]
    fn slices() {
        let al = ab();
        let s = Slp::from_tokens(&al, "a b b a").unwrap();
        assert_eq!(text(&s.slice(&big(2), &big(3)).unwrap()), "b b");
        assert!(s.slice(&big(5), &big(2)).unwrap().is_empty());
        assert!(matches!(
            s.slice(&big(0), &big(2)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            s.slice(&big(1), &big(5)),
            Err(Error::IndexOutOfRange { .. })
        ));
        let long = doubling_chain(&al, 10);
        let cut = long.slice(&big(1), &big(1000)).unwrap();
        assert_eq!(cut.length(), big(1000));
        let a = al.gen("a").unwrap();
        for i in [1u64, 17, 500, 999, 1000] {
            assert_eq!(cut.symbol_at(&big(i)).unwrap(), a);
        }
    }

    #[test]
    fn builders() {
        let al = ab();
        let a = Slp::from_tokens(&al, "a").unwrap();
        assert!(a.power(&BigUint::zero()).is_empty());
        let x = Slp::from_tokens(&al, "a b'").unwrap();
        assert_eq!(text(&x.invert()), "b a'");
        let y = Slp::from_tokens(&al, "a b b' a").unwrap();
        assert_eq!(text(&y.power(&big(2))), "a b b' a a b b' a");
        let other = Alphabet::new(["a"]).unwrap();
        assert!(matches!(
            x.concat(&Slp::empty(&other)),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn equality_examples() {
        let al = ab();
        let d = doubling_chain(&al, 4);
        let l = literal_chain(&al, 16);
        assert!(d.equal(&d).unwrap());
        assert!(d.equal(&l).unwrap());
        assert!(!d.equal(&literal_chain(&al, 15)).unwrap());
    }

    #[test]
    fn lcp_examples() {
        let al = ab();
        let a8 = doubling_chain(&al, 3);
        let x = a8.concat(&Slp::from_tokens(&al, "b").unwrap()).unwrap();
        let y = a8.concat(&Slp::from_tokens(&al, "c").unwrap()).unwrap();
        assert_eq!(x.lcp(&y).unwrap(), big(8));
        assert_eq!(x.lcp(&x).unwrap(), big(9));
    }

    #[test]
    fn decompress_and_access() {
        let al = ab();
        let s = Slp::from_tokens(&al, "a b").unwrap();
        assert_eq!(al.format_word(&s.decompress(10).unwrap()), "a b");
        let long = doubling_chain(&al, 10);
        assert_eq!(long.decompress(100), Err(Error::CapExceeded(big(1024))));
        let t = long.concat(&Slp::from_tokens(&al, "b").unwrap()).unwrap();
        assert_eq!(t.symbol_at(&big(1025)).unwrap(), al.gen("b").unwrap());
    }

    #[test]
    fn random_slices_match_oracle() {
        let al = ab();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let s = random_slp(&mut rng, &al, 2000);
            let w = s.decompress(DEFAULT_DECOMPRESS_CAP).unwrap();
            if w.is_empty() {
                continue;
            }
            let i = rng.gen_range(1..=w.len());
            let j = rng.gen_range(i..=w.len());
            let cut = s.slice(&big(i as u64), &big(j as u64)).unwrap();
            assert_eq!(cut.decompress(DEFAULT_DECOMPRESS_CAP).unwrap().0, w.0[i - 1..j]);
        }
    }

    #[test]
    fn random_equality_and_lcp_match_oracle() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let x = random_slp(&mut rng, &al, 3000);
            // Bias towards equal or nearly equal pairs.
            let y = match rng.gen_range(0..3) {
                0 => random_slp(&mut rng, &al, 3000),
                1 => Slp::literal(&al, &x.decompress(DEFAULT_DECOMPRESS_CAP).unwrap()),
                _ => x.invert().invert().concat(&random_slp(&mut rng, &al, 4)).unwrap(),
            };
            let wx = x.decompress(DEFAULT_DECOMPRESS_CAP).unwrap();
            let wy = y.decompress(DEFAULT_DECOMPRESS_CAP).unwrap();
            assert_eq!(x.equal(&y).unwrap(), wx == wy);
            let common = wx.iter().zip(wy.iter()).take_while(|(p, q)| p == q).count();
            assert_eq!(x.lcp(&y).unwrap(), big(common as u64));
        }
    }

    #[test]
    fn huge_powers_compare_without_expansion() {
        let al = ab();
        let d = doubling_chain(&al, 30);
        let a = Slp::from_tokens(&al, "a").unwrap();
        let p = a.power(&(big(1) << 30usize));
        let q = Slp::from_tokens(&al, "a a a")
            .unwrap()
            .power(&((big(1) << 30usize) / 3u32));
        let q = q.concat(&a).unwrap();
        assert!(d.equal(&p).unwrap());
        assert!(d.equal(&q).unwrap());
        let r = d
            .slice(&big(1), &((big(1) << 30usize) - 1u32))
            .unwrap()
            .concat(&Slp::from_tokens(&al, "b").unwrap())
            .unwrap();
        assert!(!d.equal(&r).unwrap());
    }
}
