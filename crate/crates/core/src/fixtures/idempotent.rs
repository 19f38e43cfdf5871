//! An idempotent presentation simulating a DFA on `x ⊗ y`: `w = CC⁻¹w`
//! holds in the quotient exactly when the automaton accepts.

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::presentations::IdempotentPresentation;

use super::dfa::ConvolutionDFA;

#[derive(Clone, Debug)]
pub struct IdempotentFixture {
    /// `Σ`, `Θ`, `Q`, then `A`, `B`, `C`.
    pub alphabet: Alphabet,
    pub presentation: IdempotentPresentation,
    pub w: Word,
    pub w_prime: Word,
}

/// Generators of `Σ ∪ Θ ∪ Q` followed by `extra`, all distinct.
pub(super) fn joint_alphabet(dfa: &ConvolutionDFA, states: &[String], extra: &[&str]) -> Result<Alphabet> {
    let mut names: Vec<&str> = Vec::new();
    for n in dfa
        .sigma
        .iter()
        .chain(&dfa.theta)
        .chain(states)
        .map(String::as_str)
        .chain(extra.iter().copied())
    {
        if names.contains(&n) {
            return Err(Error::AlphabetCollision(n.to_string()));
        }
        names.push(n);
    }
    Alphabet::new(names)
}

/// Letter lookup in the joint alphabet.
pub(super) struct Gens {
    sigma: usize,
    theta: usize,
    states: usize,
}

impl Gens {
    pub fn new(dfa: &ConvolutionDFA, states: usize) -> Self {
        Gens {
            sigma: dfa.sigma.len(),
            theta: dfa.theta.len(),
            states,
        }
    }

    pub fn a(&self, i: usize) -> Letter {
        Letter::positive(i)
    }

    pub fn b(&self, i: usize) -> Letter {
        Letter::positive(self.sigma + i)
    }

    pub fn q(&self, i: usize) -> Letter {
        Letter::positive(self.sigma + self.theta + i)
    }

    /// The `k`-th generator after the states.
    pub fn extra(&self, k: usize) -> Letter {
        Letter::positive(self.sigma + self.theta + self.states + k)
    }
}

/// `x x⁻¹`.
pub(super) fn spike(l: Letter) -> [Letter; 2] {
    [l, l.inverse()]
}

pub fn gen_idempotent_pspace(dfa: &ConvolutionDFA, x: &[usize], y: &[usize]) -> Result<IdempotentFixture> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let alphabet = joint_alphabet(dfa, &dfa.states, &["A", "B", "C"])?;
    let g = Gens::new(dfa, dfa.states.len());
    let (big_a, big_b, big_c) = (g.extra(0), g.extra(1), g.extra(2));
    let mut relators = Vec::new();
    for (&(q, a, b), &p) in &dfa.delta {
        let mut base = Vec::new();
        base.extend(spike(g.a(a)));
        base.extend(spike(g.b(b)));
        base.extend(spike(g.q(q)));
        let mut lhs = base.clone();
        lhs.extend(spike(big_a));
        let mut rhs = base;
        rhs.push(big_a);
        rhs.extend(spike(g.q(p)));
        rhs.push(big_a.inverse());
        relators.push((Word(lhs), Word(rhs)));
    }
    for &f in &dfa.finals {
        let lhs: Vec<Letter> = spike(big_b).into_iter().chain(spike(g.q(f))).collect();
        let rhs: Vec<Letter> = spike(big_b)
            .into_iter()
            .chain(spike(big_c))
            .chain(spike(g.q(f)))
            .collect();
        relators.push((Word(lhs), Word(rhs)));
    }
    relators.push((
        Word(vec![big_a, big_c, big_c.inverse(), big_a.inverse()]),
        Word(vec![
            big_a,
            big_c,
            big_c.inverse(),
            big_a.inverse(),
            big_c,
            big_c.inverse(),
        ]),
    ));
    let presentation = IdempotentPresentation::new_normalized(&alphabet, relators)?;

    let mut w: Vec<Letter> = spike(g.q(dfa.initial)).to_vec();
    for &a in x {
        w.extend(spike(g.a(a)));
        w.push(big_a);
    }
    w.extend(spike(big_b));
    for &b in y.iter().rev() {
        w.push(big_a.inverse());
        w.extend(spike(g.b(b)));
    }
    let w = Word(w);
    let w_prime = Word(spike(big_c).to_vec()).concat(&w);
    Ok(IdempotentFixture {
        alphabet,
        presentation,
        w,
        w_prime,
    })
}
