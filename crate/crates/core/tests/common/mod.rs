//! Random generators shared by the integration tests.
#![allow(dead_code)]

use munnkit::fixtures::ConvolutionDFA;
use munnkit::rational::WordNFA;
use munnkit::{Alphabet, Letter, Slp, Word};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::Rng;

/// Program built from random concatenations, powers, slices and inversions,
/// keeping every intermediate expansion at most `max_len` long.
pub fn random_slp(rng: &mut StdRng, al: &Alphabet, max_len: u64) -> Slp {
    let mut pool: Vec<Slp> = (0..4)
        .map(|_| Slp::literal(al, &random_word(rng, al, 3)))
        .collect();
    for _ in 0..rng.gen_range(1..16) {
        let x = pool[rng.gen_range(0..pool.len())].clone();
        let y = pool[rng.gen_range(0..pool.len())].clone();
        let next = match rng.gen_range(0..5) {
            0 | 1 => x.concat(&y).unwrap(),
            2 => x.power(&BigUint::from(rng.gen_range(0u64..8))),
            3 => x.invert(),
            _ => {
                let n: u64 = x.length().try_into().unwrap();
                if n == 0 {
                    x
                } else {
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

pub fn random_word(rng: &mut StdRng, al: &Alphabet, max_len: usize) -> Word {
    let letters: Vec<Letter> = al.letters().collect();
    (0..rng.gen_range(0..=max_len))
        .map(|_| letters[rng.gen_range(0..letters.len())])
        .collect()
}

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

/// Uniform over partial transition tables with `k` states and final sets.
pub fn random_dfa(
    rng: &mut StdRng,
    sigma: usize,
    theta: usize,
    k: usize,
    outgoing_free: bool,
) -> ConvolutionDFA {
    let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    let finals: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
    let mut delta = Vec::new();
    for q in 0..k {
        if outgoing_free && finals.contains(&q) {
            continue;
        }
        for a in 0..sigma {
            for b in 0..theta {
                let c = rng.gen_range(0..=k);
                if c > 0 {
                    delta.push(((q, a, b), c - 1));
                }
            }
        }
    }
    ConvolutionDFA::new(
        names("x", sigma),
        names("y", theta),
        names("q", k),
        0,
        finals,
        delta,
    )
    .unwrap()
}

/// All words of length `n` over `0..k`.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}
