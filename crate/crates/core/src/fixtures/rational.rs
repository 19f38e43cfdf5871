//! A finite set `K` and a word `w` with `ρ(w) ∈ ρ(K*)` exactly when a DFA
//! accepts `x ⊗ y`.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::rational::WordNFA;

use super::dfa::ConvolutionDFA;
use super::idempotent::{joint_alphabet, spike, Gens};

#[derive(Clone, Debug)]
pub struct RationalFixture {
    /// States of the encoded automaton: the original ones, then a final copy
    /// of every final state that had outgoing transitions.
    pub states: Vec<String>,
    pub finals: BTreeSet<usize>,
    /// `((q, a, b), p)`; nondeterministic once copies exist.
    pub transitions: BTreeSet<((usize, usize, usize), usize)>,
    /// `Σ`, `Θ`, `Q`, then `A`, `B`.
    pub alphabet: Alphabet,
    pub k1: Vec<Word>,
    pub k2: Vec<Word>,
    pub w: Word,
    /// Accepts `(K₁ ∪ K₂)*`.
    pub nfa: WordNFA,
}

impl RationalFixture {
    /// Splits a word of `K*` into factors, as indices into `k1 ++ k2`.
    pub fn factor_k_star(&self, word: &Word) -> Option<Vec<usize>> {
        let k: Vec<&Word> = self.k1.iter().chain(&self.k2).collect();
        let n = word.len();
        // back[i]: a factor ending at position i and where it starts.
        let mut back: Vec<Option<(usize, usize)>> = vec![None; n + 1];
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for i in 0..n {
            if !reach[i] {
                continue;
            }
            for (j, f) in k.iter().enumerate() {
                let end = i + f.len();
                if end <= n && !reach[end] && word.0[i..end] == f.0[..] {
                    reach[end] = true;
                    back[end] = Some((j, i));
                }
            }
        }
        if !reach[n] {
            return None;
        }
        let mut out = Vec::new();
        let mut i = n;
        while i > 0 {
            let (j, start) = back[i].unwrap();
            out.push(j);
            i = start;
        }
        out.reverse();
        Some(out)
    }

    /// Whether the factorization lies in `K₁^{n−1} K₂`.
    pub fn is_k1_power_k2(&self, factors: &[usize], n: usize) -> bool {
        let k1 = self.k1.len();
        factors.len() == n
            && factors[..n - 1].iter().all(|&j| j < k1)
            && factors.last().is_some_and(|&j| j >= k1)
    }
}

type Relation = BTreeSet<((usize, usize, usize), usize)>;

/// Gives every final state with outgoing transitions a final copy without
/// any; transitions into it go nondeterministically to either, and the
/// original stops being final.
fn copy_finals(dfa: &ConvolutionDFA) -> (Vec<String>, BTreeSet<usize>, Relation) {
    let busy: BTreeSet<usize> = dfa
        .delta
        .keys()
        .map(|k| k.0)
        .filter(|q| dfa.finals.contains(q))
        .collect();
    let taken: BTreeSet<&String> = dfa.sigma.iter().chain(&dfa.theta).chain(&dfa.states).collect();
    let mut states = dfa.states.clone();
    let mut copy = vec![None; dfa.states.len()];
    for &f in &busy {
        let name = (0..)
            .map(|i| {
                format!(
                    "{}_fin{}",
                    dfa.states[f],
                    if i == 0 { String::new() } else { i.to_string() }
                )
            })
            .find(|n| !taken.contains(n) && !states.contains(n) && n != "A" && n != "B")
            .unwrap();
        states.push(name);
        copy[f] = Some(states.len() - 1);
    }
    let mut rel = BTreeSet::new();
    for (&k, &p) in &dfa.delta {
        if let Some(c) = copy[p] {
            rel.insert((k, c));
        }
        rel.insert((k, p));
    }
    let finals = dfa.finals.iter().map(|&f| copy[f].unwrap_or(f)).collect();
    (states, finals, rel)
}

/// Builds `K = K₁ ∪ K₂`, `w` and an automaton for `K*`. Requires `|x| ≥ 1`.
pub fn gen_rational_pspace(dfa: &ConvolutionDFA, x: &[usize], y: &[usize]) -> Result<RationalFixture> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::InvalidInstance("the input words must be non-empty".into()));
    }
    let (states, finals, rel) = copy_finals(dfa);
    let alphabet = joint_alphabet(dfa, &states, &["A", "B"])?;
    let g = Gens::new(dfa, states.len());
    let (big_a, big_b) = (g.extra(0), g.extra(1));
    let nq = states.len();
    let is_final = |q: usize| finals.contains(&q);
    let mut k1 = BTreeSet::new();
    let mut k2 = BTreeSet::new();
    for &((q, a, b), p) in &rel {
        if is_final(q) {
            continue;
        }
        let mut word: Vec<Letter> = Vec::new();
        word.extend(spike(g.a(a)));
        word.extend(spike(g.b(b)));
        word.extend(spike(g.q(q)));
        word.push(big_a);
        if is_final(p) {
            word.extend(spike(big_b));
            k2.insert(Word(word));
        } else {
            for s in (0..nq).filter(|&s| s != p) {
                word.extend(spike(g.q(s)));
            }
            k1.insert(Word(word));
        }
    }
    let n = x.len();
    let mut w: Vec<Letter> = spike(g.q(dfa.initial)).to_vec();
    w.extend(spike(g.a(x[0])));
    for &a in &x[1..] {
        w.push(big_a);
        w.extend(spike(g.a(a)));
        for q in 0..nq {
            w.extend(spike(g.q(q)));
        }
    }
    w.push(big_a);
    w.extend(spike(big_b));
    for &b in y.iter().rev() {
        w.push(big_a.inverse());
        w.extend(spike(g.b(b)));
    }
    w.extend(std::iter::repeat_n(big_a, n));
    let k1: Vec<Word> = k1.into_iter().collect();
    let k2: Vec<Word> = k2.into_iter().collect();
    let nfa = star_nfa(&alphabet, k1.iter().chain(&k2));
    Ok(RationalFixture {
        states,
        finals,
        transitions: rel,
        alphabet,
        k1,
        k2,
        w: Word(w),
        nfa,
    })
}

/// One hub state, initial and final, with a loop spelling each word.
fn star_nfa<'a>(alphabet: &Alphabet, words: impl Iterator<Item = &'a Word>) -> WordNFA {
    let mut states = vec!["h".to_string()];
    let mut trans = Vec::new();
    for w in words {
        let mut cur = 0;
        for (i, &l) in w.iter().enumerate() {
            let next = if i + 1 == w.len() {
                0
            } else {
                states.push(format!("s{}", states.len()));
                states.len() - 1
            };
            trans.push((cur, l, next));
            cur = next;
        }
    }
    WordNFA::new(alphabet, states, 0, [0], trans).expect("well formed")
}
