//! Free reduction: plain words by a stack scan, compressed words bottom-up.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::alphabet::Word;
use crate::error::Result;
use crate::slp::{equal_in, lcp_in, Grammar, Id, Rule, Slp, EMPTY};

/// `r(u)`: cancels every factor `b b⁻¹` in one left-to-right pass.
pub fn reduce(u: &Word) -> Word {
    let mut out = Vec::with_capacity(u.len());
    for &l in u {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// A program for `r(val(A))`.
///
/// For each production `X → Y Z` the reduced forms of `Y` and `Z` are
/// glued after cutting the cancelling overlap, whose length is the
/// longest common prefix of `r(Y)⁻¹` and `r(Z)`.
pub fn reduced_slp(a: &Slp) -> Slp {
    let mut g = Grammar::new();
    let root = a.import_into(&mut g);
    let red = reduce_in(&mut g, root);
    Slp::from_parts(a.alphabet().clone(), g, red).compacted()
}

pub(crate) fn reduce_in(g: &mut Grammar, root: Id) -> Id {
    let mut red: HashMap<Id, Id> = HashMap::new();
    for id in g.reachable(root) {
        let r = match g.rule(id) {
            Rule::Empty => EMPTY,
            Rule::Letter(_) => id,
            Rule::Pair(y, z) => {
                let (ry, rz) = (red[&y], red[&z]);
                let iy = g.inverse(ry);
                let k = lcp_in(g, iy, rz);
                let left_len: BigUint = g.len(ry) - &k;
                let right_len: BigUint = g.len(rz) - &k;
                let left = g.prefix(ry, &left_len);
                let right = g.suffix(rz, &right_len);
                g.pair(left, right)
            }
        };
        red.insert(id, r);
    }
    red[&root]
}

/// Equality in the free group.
pub fn fg_equal(a: &Slp, b: &Slp) -> Result<bool> {
    if !a.alphabet().same_as(b.alphabet()) {
        return Err(crate::Error::AlphabetMismatch);
    }
    let mut g = Grammar::new();
    let ra = a.import_into(&mut g);
    let rb = b.import_into(&mut g);
    let ra = reduce_in(&mut g, ra);
    let rb = reduce_in(&mut g, rb);
    Ok(equal_in(&g, ra, rb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_slp;
    use crate::Alphabet;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn word(al: &Alphabet, s: &str) -> Word {
        al.parse_word(s).unwrap()
    }

    #[test]
    fn plain_examples() {
        let al = Alphabet::new(["a", "b", "c"]).unwrap();
        assert_eq!(reduce(&word(&al, "b b' a b b' a")), word(&al, "a a"));
        assert_eq!(reduce(&Word::empty()), Word::empty());
        assert_eq!(reduce(&word(&al, "a b b' a' c")), word(&al, "c"));
    }

    #[test]
    fn plain_laws() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let letters: Vec<_> = al.letters().collect();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..500 {
            let rand_word = |rng: &mut StdRng| -> Word {
                (0..rng.gen_range(0..20))
                    .map(|_| letters[rng.gen_range(0..4)])
                    .collect()
            };
            let u = rand_word(&mut rng);
            let v = rand_word(&mut rng);
            let r = reduce(&u);
            assert!(r.is_reduced());
            assert_eq!(reduce(&r), r);
            assert!(reduce(&u.concat(&u.inverse())).is_empty());
            assert_eq!(reduce(&u.concat(&v)), reduce(&r.concat(&reduce(&v))));
        }
    }

    #[test]
    fn compressed_examples() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let aa = Slp::from_tokens(&al, "a a'").unwrap();
        let p = aa.power(&BigUint::from(1024u32));
        assert!(reduced_slp(&p).is_empty());
        let s = Slp::from_tokens(&al, "b b' a b b' a").unwrap();
        assert_eq!(reduced_slp(&s).decompress(100).unwrap(), word(&al, "a a"));
        let x = Slp::from_tokens(&al, "a b' b b").unwrap();
        assert!(fg_equal(&x, &x.concat(&aa).unwrap()).unwrap());
        let ab = Slp::from_tokens(&al, "a b").unwrap();
        let ba = Slp::from_tokens(&al, "b a").unwrap();
        assert!(!fg_equal(&ab, &ba).unwrap());
    }

    #[test]
    fn compressed_matches_plain() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..300 {
            let s = random_slp(&mut rng, &al, 5000);
            let r = reduced_slp(&s);
            let got = r.decompress(1 << 20).unwrap();
            assert!(got.is_reduced());
            assert_eq!(got, reduce(&s.decompress(1 << 20).unwrap()));
        }
    }
}
