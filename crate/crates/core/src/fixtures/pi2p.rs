//! Subset-sum instances as pairs of programs over `{a, b}` that are equal in
//! the free inverse monoid exactly when `∀x ∃y: u·x + v·y = t`.

use num_bigint::BigUint;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::slp::Slp;

/// `∀x ∈ {0,1}^m ∃y ∈ {0,1}^n : u·x + v·y = t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsetSumInstance {
    pub u: Vec<u64>,
    pub v: Vec<u64>,
    pub t: u64,
}

impl SubsetSumInstance {
    pub fn new(u: Vec<u64>, v: Vec<u64>, t: u64) -> Result<Self> {
        let inst = SubsetSumInstance { u, v, t };
        if inst.t >= inst.s() {
            return Err(Error::InvalidInstance(format!(
                "need t < s, got t = {} and s = {}",
                inst.t,
                inst.s()
            )));
        }
        Ok(inst)
    }

    pub fn s_u(&self) -> u64 {
        self.u.iter().sum()
    }

    pub fn s_v(&self) -> u64 {
        self.v.iter().sum()
    }

    pub fn s(&self) -> u64 {
        self.s_u() + self.s_v()
    }
}

/// Exhaustive evaluation over all bit vectors.
pub fn brute_forall_exists(inst: &SubsetSumInstance) -> Result<bool> {
    let (m, n) = (inst.u.len(), inst.v.len());
    if m + n > 24 {
        return Err(Error::TooLarge(format!("m + n = {} > 24", m + n)));
    }
    let dot = |w: &[u64], bits: u64| -> u64 {
        w.iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, c)| c)
            .sum()
    };
    let ys: Vec<u64> = (0..1u64 << n).map(|y| dot(&inst.v, y)).collect();
    Ok((0..1u64 << m).all(|x| {
        let ux = dot(&inst.u, x);
        ys.iter().any(|&vy| ux + vy == inst.t)
    }))
}

/// The intermediate programs of the construction. `a1` and `a2` use a third
/// generator `c` standing for the placeholder that is substituted later.
#[derive(Clone, Debug)]
pub struct Pi2pStages {
    pub a1: Slp,
    pub a2: Slp,
    pub a3: Slp,
    pub a: Slp,
    pub b: Slp,
}

fn a_power(al: &Alphabet, e: i128) -> Slp {
    let l = if e < 0 {
        Letter::negative(0)
    } else {
        Letter::positive(0)
    };
    Slp::literal(al, &Word(vec![l])).power(&BigUint::from(e.unsigned_abs()))
}

/// `∏_{x ∈ {0,1}^k} a^{w·x} C a^{γ − w·x}`, with the tuples ordered by
/// `n(x) = Σ x_i 2^{i−1}`.
///
/// Consecutive factors meet in `a^{γ − w·x + w·x'}`. Writing `H_i` for the
/// product over the first `i` coordinates with both outer powers dropped,
/// `H_i = H_{i−1} a^{γ − (w_1+…+w_{i−1}) + w_i} H_{i−1}`, so the program has
/// size linear in `k`.
fn staged_product(al: &Alphabet, w: &[u64], gamma: u64, center: &Slp) -> Result<Slp> {
    let mut h = center.clone();
    let mut prefix_sum = 0u64;
    for &wi in w {
        let gap = a_power(al, gamma as i128 - prefix_sum as i128 + wi as i128);
        h = Slp::concat_all(al, &[h.clone(), gap, h])?;
        prefix_sum += wi;
    }
    // The first tuple is all zeros and the last all ones.
    h.concat(&a_power(al, gamma as i128 - prefix_sum as i128))
}

pub fn pi2p_stages(inst: &SubsetSumInstance) -> Result<Pi2pStages> {
    if inst.t >= inst.s() {
        return Err(Error::InvalidInstance(format!(
            "need t < s, got t = {} and s = {}",
            inst.t,
            inst.s()
        )));
    }
    let ab = Alphabet::new(["a", "b"])?;
    let abc = Alphabet::new(["a", "b", "c"])?;
    let (s, s_u, s_v) = (inst.s() as i128, inst.s_u(), inst.s_v());
    let c = Slp::from_tokens(&abc, "c")?;
    let a1 = staged_product(&abc, &inst.u, s_u, &c)?;
    // Replacing the placeholder by (placeholder) a^{s_v} shifts every gap by s_v.
    let a2 = staged_product(&abc, &inst.u, s_u + s_v, &c)?;
    let center3 = Slp::from_tokens(&ab, "b b'")?.concat(&a_power(&ab, -(s_v as i128)))?;
    let a3 = staged_product(&ab, &inst.v, s_v, &center3)?;
    let a = staged_product(&ab, &inst.u, s_u + s_v, &a3)?;
    let rounds = BigUint::from(1u32) << inst.u.len();
    let tail = Slp::concat_all(
        &ab,
        &[
            a_power(&ab, inst.t as i128),
            Slp::from_tokens(&ab, "b b'")?,
            a_power(&ab, s - inst.t as i128),
        ],
    )?
    .power(&rounds);
    let back = Slp::literal(&ab, &ab.parse_word("a'")?).power(&(BigUint::from(s as u64) * &rounds));
    let b = Slp::concat_all(&ab, &[a.clone(), back, tail])?;
    Ok(Pi2pStages { a1, a2, a3, a, b })
}

/// The pair `(𝔸, 𝔹)`.
pub fn gen_pi2p(inst: &SubsetSumInstance) -> Result<(Slp, Slp)> {
    let st = pi2p_stages(inst)?;
    Ok((st.a, st.b))
}
