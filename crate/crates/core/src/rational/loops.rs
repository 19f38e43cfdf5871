//! Covering ε-loops in Munn trees and rational-subset membership.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{Letter, Word};
use crate::error::{Error, Result};
use crate::munn::{munn_tree, munn_tree_streamed, MunnTree};
use crate::slp::Slp;
use crate::Caps;

use super::nfa::WordNFA;

/// `nodes(ℓ) = { r(v) | v a prefix of ℓ }`.
pub fn nodes(l: &Word) -> MunnTree {
    munn_tree(l).tree
}

/// `r(ℓ) = ε` and every prefix of `ℓ` reduces into `t`.
pub fn is_eps_loop(l: &Word, t: &MunnTree) -> bool {
    let x = munn_tree(l);
    x.endpoint.is_empty() && x.tree.is_subset(t)
}

/// A Munn tree with numbered nodes; node 0 is the root.
pub(crate) struct IndexedTree {
    pub words: Vec<Word>,
    /// `step[u][c]`: the neighbour of `u` along the letter with code `c`.
    pub step: Vec<Vec<Option<usize>>>,
    /// Children `(a, ua)` in letter order.
    pub children: Vec<Vec<(Letter, usize)>>,
}

impl IndexedTree {
    pub fn new(t: &MunnTree, letters: usize) -> Self {
        // BTreeSet order is shortlex on codes, so the root comes first.
        let words: Vec<Word> = t.iter().cloned().collect();
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut step = vec![vec![None; 2 * letters]; words.len()];
        let mut children = vec![Vec::new(); words.len()];
        for (i, w) in words.iter().enumerate() {
            for (a, v) in t.neighbours(w) {
                let j = index[&v];
                step[i][a.code() as usize] = Some(j);
                if v.len() > w.len() {
                    children[i].push((a, j));
                }
            }
        }
        IndexedTree {
            words,
            step,
            children,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }
}

/// Appends to `L(a)` the irreducible words that begin with `last⁻¹`.
///
/// One gadget state per letter remembers the previous letter; a gadget
/// state for `c` has no transition on `c⁻¹`. Every old final state enters
/// the gadget on `last⁻¹`, and every gadget state is final.
pub fn build_marked_nfa(a: &WordNFA, last: Letter) -> WordNFA {
    let taken: BTreeSet<&str> = a.states.iter().map(String::as_str).collect();
    let mut stem = "g".to_string();
    while taken.iter().any(|s| s.starts_with(&stem)) {
        stem.push('g');
    }
    let k = 2 * a.alphabet.len();
    let base = a.len();
    let mut states = a.states.clone();
    states.extend((0..k).map(|c| format!("{stem}{c}")));
    let gadget = |l: Letter| base + l.code() as usize;
    let mut transitions = a.transitions.clone();
    for &f in &a.finals {
        transitions.insert((f, last.inverse(), gadget(last.inverse())));
    }
    for c in a.alphabet.letters() {
        for d in a.alphabet.letters() {
            if d != c.inverse() {
                transitions.insert((gadget(c), d, gadget(d)));
            }
        }
    }
    WordNFA {
        alphabet: a.alphabet.clone(),
        states,
        initial: a.initial,
        finals: (base..base + k).collect(),
        transitions,
    }
}

/// Breadth-first search over (node, state, visited set) for a loop of
/// length at most `bound`, accepted by `a`, visiting every node of `t`.
/// The witness is the lexicographically least among the shortest.
pub fn covering_loop_search(
    t: &MunnTree,
    a: &WordNFA,
    bound: usize,
    state_cap: usize,
) -> Result<Option<Word>> {
    if t.len() > 128 {
        return Err(Error::StateSpaceCapExceeded(128));
    }
    let tree = IndexedTree::new(t, a.alphabet.len());
    let table = a.table();
    let full: u128 = if tree.len() == 128 {
        u128::MAX
    } else {
        (1u128 << tree.len()) - 1
    };
    type State = (u32, u32, u128);
    let goal = |s: &State| s.0 == 0 && s.2 == full && a.is_final(s.1 as usize);
    let start: State = (0, a.initial as u32, 1);
    // Discovered states with their parent and the letter that reached them.
    let mut seen: HashMap<State, usize> = HashMap::from([(start, 0)]);
    let mut trail: Vec<(State, usize, Option<Letter>)> = vec![(start, 0, None)];
    let mut found = goal(&start).then_some(0);
    let mut level = 0..1;
    let mut depth = 0;
    while found.is_none() && depth < bound && !level.is_empty() {
        let next_start = trail.len();
        'level: for i in level.clone() {
            let (node, q, mask) = trail[i].0;
            for (c, targets) in table[q as usize].iter().enumerate() {
                let Some(v) = tree.step[node as usize][c] else {
                    continue;
                };
                for &r in targets {
                    let s: State = (v as u32, r as u32, mask | 1u128 << v);
                    if seen.contains_key(&s) {
                        continue;
                    }
                    seen.insert(s, trail.len());
                    trail.push((s, i, Some(Letter::from_code(c as u32))));
                    if seen.len() > state_cap {
                        return Err(Error::StateSpaceCapExceeded(state_cap));
                    }
                    if goal(&s) {
                        found = Some(trail.len() - 1);
                        break 'level;
                    }
                }
            }
        }
        level = next_start..trail.len();
        depth += 1;
    }
    Ok(found.map(|mut i| {
        let mut letters = Vec::new();
        while let Some(l) = trail[i].2 {
            letters.push(l);
            i = trail[i].1;
        }
        letters.reverse();
        let w = Word(letters);
        debug_assert!(is_eps_loop(&w, t) && nodes(&w) == *t && a.accepts(&w));
        w
    }))
}

/// Result of a membership query: a word of `L(𝒜)` equal to the subject in
/// the free inverse monoid, if there is one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Membership {
    pub witness: Option<Word>,
    /// The pumping bound `N = |states(𝒜′)|·|T|²` of the instance.
    pub bound: usize,
}

impl Membership {
    pub fn holds(&self) -> bool {
        self.witness.is_some()
    }
}

/// `ρ(u) ∈ ρ(L(a))` for a plain word over the automaton's alphabet.
pub fn rat_member(u: &Word, a: &WordNFA, caps: &Caps, bound: Option<usize>) -> Result<Membership> {
    let (z, marked) = marked_instance(a)?;
    let mut uz = u.clone();
    uz.push(z);
    member_in_tree(&munn_tree(&uz).tree, z, &marked, caps, bound)
}

/// `ρ(val(s)) ∈ ρ(L(a))`; the Munn tree is built from the grammar directly.
pub fn rat_member_slp(s: &Slp, a: &WordNFA, caps: &Caps, bound: Option<usize>) -> Result<Membership> {
    let (z, marked) = marked_instance(a)?;
    let s = s.embed(&marked.alphabet)?;
    let sz = s.concat(&Slp::literal(&marked.alphabet, &Word(vec![z])))?;
    let t = munn_tree_streamed(&sz, caps.node_cap)?.tree;
    member_in_tree(&t, z, &marked, caps, bound)
}

/// A fresh marker `z` and the automaton for `L(a)·z·(IRR ∩ z⁻¹(Γ ∪ Γ⁻¹)*)`.
fn marked_instance(a: &WordNFA) -> Result<(Letter, WordNFA)> {
    let al = a.alphabet.extended(&a.alphabet.fresh_name("z"))?;
    let z = Letter::positive(al.len() - 1);
    let az = a.embed(&al)?.append_letter(z);
    Ok((z, build_marked_nfa(&az, z)))
}

fn member_in_tree(
    t: &MunnTree,
    z: Letter,
    marked: &WordNFA,
    caps: &Caps,
    bound: Option<usize>,
) -> Result<Membership> {
    let n = marked.len() * t.len() * t.len();
    let l = covering_loop_search(t, marked, bound.unwrap_or(n), caps.state_cap)?;
    // Cut the loop before the marker: the left part is the word of L(a).
    let witness = l.map(|l| Word(l.0.iter().copied().take_while(|&c| c != z).collect()));
    Ok(Membership { witness, bound: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::munn::fim_equal;
    use crate::testutil::{random_nfa, random_word};
    use rand::{rngs::StdRng, SeedableRng};

    fn tree(al: &Alphabet, words: &[&str]) -> MunnTree {
        let ws: Vec<Word> = words.iter().map(|w| al.parse_word(w).unwrap()).collect();
        MunnTree::from_words(&ws)
    }

    #[test]
    fn eps_loops() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let t = tree(&al, &["a"]);
        assert!(is_eps_loop(&Word::empty(), &t));
        assert_eq!(nodes(&Word::empty()), MunnTree::root());
        let aa = al.parse_word("a a'").unwrap();
        assert!(is_eps_loop(&aa, &t));
        assert_eq!(nodes(&aa), t);
        assert!(!is_eps_loop(&al.parse_word("a").unwrap(), &t));
        assert!(!is_eps_loop(&al.parse_word("b b'").unwrap(), &t));
    }

    /// All words of length ≤ n over the doubled alphabet.
    fn all_words(al: &Alphabet, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w| {
                    al.letters().map(move |l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn marked_nfa_language() {
        let al = Alphabet::new(["a", "b", "z"]).unwrap();
        let z = al.gen("z").unwrap();
        let ab = al.parse_word("a b").unwrap();
        let m = build_marked_nfa(&WordNFA::single_word(&al, &ab), z);
        assert_eq!(m.len(), 3 + 6);
        assert!(m.accepts(&al.parse_word("a b z'").unwrap()));
        assert!(m.accepts(&al.parse_word("a b z' a").unwrap()));
        assert!(!m.accepts(&al.parse_word("a b z' z").unwrap()));
        assert!(!m.accepts(&ab));
        // Exhaustive: after `ab`, exactly the irreducible words starting z⁻¹.
        for w in all_words(&al, 4) {
            let full = ab.concat(&w);
            let expect = w.0.first() == Some(&z.inverse()) && w.is_reduced();
            assert_eq!(m.accepts(&full), expect, "{}", al.format_word(&full));
        }
        let eps = build_marked_nfa(&WordNFA::single_word(&al, &Word::empty()), z);
        for w in all_words(&al, 4) {
            let expect = w.0.first() == Some(&z.inverse()) && w.is_reduced();
            assert_eq!(eps.accepts(&w), expect);
        }
    }

    #[test]
    fn search_examples() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let eps = WordNFA::single_word(&al, &Word::empty());
        let cap = 1 << 20;
        assert_eq!(
            covering_loop_search(&MunnTree::root(), &eps, 0, cap).unwrap(),
            Some(Word::empty())
        );
        let aa = al.parse_word("a a'").unwrap();
        let a_aa = WordNFA::single_word(&al, &aa);
        let t = tree(&al, &["a"]);
        assert_eq!(covering_loop_search(&t, &a_aa, 8, cap).unwrap(), Some(aa.clone()));
        assert_eq!(covering_loop_search(&t, &a_aa, 1, cap).unwrap(), None);
        let tb = tree(&al, &["a", "b"]);
        assert_eq!(covering_loop_search(&tb, &a_aa, 100, cap).unwrap(), None);
    }

    #[test]
    fn least_witness() {
        // Both a a' b b' and b b' a a' cover {ε, a, b}; the first is least.
        let al = Alphabet::new(["a", "b"]).unwrap();
        let text =
            "states: p\ninitial: p\nfinal: p\ntrans: p a p\ntrans: p a' p\ntrans: p b p\ntrans: p b' p\n";
        let all = WordNFA::parse(text, Some(&al)).unwrap();
        let t = tree(&al, &["a", "b"]);
        let w = covering_loop_search(&t, &all, 100, 1 << 20).unwrap().unwrap();
        assert_eq!(al.format_word(&w), "a a' b b'");
    }

    #[test]
    fn membership_examples() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let caps = Caps::default();
        let ab = al.parse_word("a b").unwrap();
        let m = rat_member(&ab, &WordNFA::single_word(&al, &ab), &caps, None).unwrap();
        assert_eq!(m.witness, Some(ab.clone()));
        let star = WordNFA::parse(
            "states: p q\ninitial: p\nfinal: p\ntrans: p a q\ntrans: q a' p\n",
            Some(&al),
        )
        .unwrap();
        let aa = al.parse_word("a a'").unwrap();
        assert!(rat_member(&aa, &star, &caps, None).unwrap().holds());
        let a = WordNFA::single_word(&al, &al.parse_word("a").unwrap());
        assert!(!rat_member(&ab, &a, &caps, None).unwrap().holds());
        // Compressed subject.
        let s = Slp::from_tokens(&al, "a b").unwrap();
        let m = rat_member_slp(&s, &WordNFA::single_word(&al, &ab), &caps, None).unwrap();
        assert!(m.holds());
    }

    /// Small automata and words: membership agrees with enumerating the
    /// accepted words up to the pumping bound.
    #[test]
    fn membership_matches_enumeration() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = StdRng::seed_from_u64(21);
        let words = all_words(&al, 6);
        for _ in 0..150 {
            let a = random_nfa(&mut rng, &al, 2);
            let u = random_word(&mut rng, &al, 3);
            let m = rat_member(&u, &a, &Caps::default(), None).unwrap();
            if let Some(w) = &m.witness {
                assert!(a.accepts(w) && fim_equal(w, &u));
            }
            let by_enum = words.iter().any(|w| a.accepts(w) && fim_equal(w, &u));
            if by_enum {
                assert!(m.holds());
            }
        }
    }

    #[test]
    fn pumping_bound_is_stable() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let a = random_nfa(&mut rng, &al, 3);
            let u = random_word(&mut rng, &al, 3);
            let t = munn_tree(&u).tree;
            let n = a.len() * t.len() * t.len();
            let x = covering_loop_search(&t, &a, n, 1 << 22).unwrap();
            let y = covering_loop_search(&t, &a, n + 2 * t.len(), 1 << 22).unwrap();
            assert_eq!(x.is_some(), y.is_some());
            if let Some(l) = x {
                assert!(is_eps_loop(&l, &t) && nodes(&l) == t && a.accepts(&l) && l.len() <= n);
            }
        }
    }
}
