//! Shared generators for the unit tests.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{rngs::StdRng, Rng};

use crate::rational::WordNFA;
use crate::{Alphabet, Letter, Slp, Word};

/// Random program with a bounded expansion, built from random
/// concatenations, powers, slices and inversions.
pub(crate) fn random_slp(rng: &mut StdRng, alphabet: &Alphabet, max_len: u64) -> Slp {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut pool: Vec<Slp> = (0..4)
        .map(|_| {
            let n = rng.gen_range(0..4);
            let w: Word = (0..n).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            Slp::literal(alphabet, &w)
        })
        .collect();
    for _ in 0..rng.gen_range(1..12) {
        let x = pool[rng.gen_range(0..pool.len())].clone();
        let y = pool[rng.gen_range(0..pool.len())].clone();
        let next = match rng.gen_range(0..5) {
            0 | 1 => x.concat(&y).unwrap(),
            2 => x.power(&BigUint::from(rng.gen_range(0u64..6))),
            3 => x.invert(),
            _ => {
                let len = x.length();
                if len.is_zero() {
                    x
                } else {
                    let n: u64 = len.try_into().unwrap();
                    let i = rng.gen_range(1..=n);
                    let j = rng.gen_range(i..=n);
                    x.slice(&BigUint::from(i), &BigUint::from(j)).unwrap()
                }
            }
        };
        if next.length() <= BigUint::from(max_len) {
            pool.push(next);
        }
    }
    pool.pop().unwrap()
}

/// Uniform random word over the doubled alphabet, length at most `max_len`.
pub(crate) fn random_word(rng: &mut StdRng, alphabet: &Alphabet, max_len: usize) -> Word {
    let letters: Vec<Letter> = alphabet.letters().collect();
    (0..rng.gen_range(0..=max_len))
        .map(|_| letters[rng.gen_range(0..letters.len())])
        .collect()
}

/// A random automaton with `n` states; each transition is present with probability 0.3.
pub fn random_nfa(rng: &mut StdRng, al: &Alphabet, n: usize) -> WordNFA {
    let states = (0..n).map(|i| format!("q{i}")).collect();
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let mut trans = Vec::new();
    for p in 0..n {
        for l in al.letters() {
            for q in 0..n {
                if rng.gen_bool(0.3) {
                    trans.push((p, l, q));
                }
            }
        }
    }
    WordNFA::new(al, states, 0, finals, trans).unwrap()
}
