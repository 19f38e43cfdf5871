//! Equality of two grammar-compressed words by recompression.
//!
//! Both words are loaded into one working grammar whose right-hand sides
//! are arbitrary sequences. Each phase first replaces maximal blocks `aˡ`
//! by fresh letters, then picks a partition of the letters into a left and
//! a right half and replaces every `ab` with `a` left and `b` right by a
//! fresh letter. Letters that would straddle a rule boundary are popped
//! out of the rule into its parents first. Fresh letters are shared
//! between the two words, so the words stay equal iff they were equal,
//! and a phase at least shortens the word by a constant fraction.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::grammar::{Grammar, Id, Rule};

#[derive(Clone, PartialEq, Eq, Debug)]
enum Sym {
    T(u32),
    N(u32),
    /// `aᶜ`; only exists during block compression.
    Run(u32, BigUint),
}

struct Recompressor {
    rules: Vec<Vec<Sym>>,
    roots: [usize; 2],
    next_letter: u32,
    blocks: HashMap<(u32, BigUint), u32>,
    pairs: HashMap<(u32, u32), u32>,
}

/// Decides `val(a) = val(b)` for two non-empty words of equal length.
pub(crate) fn equal(ga: &Grammar, a: Id, gb: &Grammar, b: Id) -> bool {
    let mut r = Recompressor {
        rules: Vec::new(),
        roots: [0, 0],
        next_letter: 0,
        blocks: HashMap::new(),
        pairs: HashMap::new(),
    };
    let sa = r.load(ga, a);
    let sb = r.load(gb, b);
    r.roots = [r.rules.len(), r.rules.len() + 1];
    r.rules.push(vec![sa]);
    r.rules.push(vec![sb]);
    r.run()
}

impl Recompressor {
    fn load(&mut self, g: &Grammar, root: Id) -> Sym {
        let mut map: HashMap<Id, Sym> = HashMap::new();
        for id in g.reachable(root) {
            let sym = match g.rule(id) {
                Rule::Empty => unreachable!("empty word is handled by the caller"),
                Rule::Letter(l) => {
                    self.next_letter = self.next_letter.max(l.code() + 1);
                    Sym::T(l.code())
                }
                Rule::Pair(x, y) => {
                    self.rules.push(vec![map[&x].clone(), map[&y].clone()]);
                    Sym::N(self.rules.len() as u32 - 1)
                }
            };
            map.insert(id, sym);
        }
        map.remove(&root).unwrap()
    }

    fn is_root(&self, x: usize) -> bool {
        self.roots.contains(&x)
    }

    fn lengths(&self) -> Vec<BigUint> {
        let mut lens: Vec<BigUint> = Vec::with_capacity(self.rules.len());
        for rhs in &self.rules {
            let mut total = BigUint::zero();
            for s in rhs {
                match s {
                    Sym::T(_) => total += 1u32,
                    Sym::N(y) => total += &lens[*y as usize],
                    Sym::Run(_, c) => total += c,
                }
            }
            lens.push(total);
        }
        lens
    }

    fn root_letter(&self, root: usize) -> u32 {
        let mut x = root;
        loop {
            match &self.rules[x][0] {
                Sym::T(a) => return *a,
                Sym::N(y) => x = *y as usize,
                Sym::Run(..) => unreachable!(),
            }
        }
    }

    fn fresh(&mut self) -> u32 {
        let l = self.next_letter;
        self.next_letter += 1;
        l
    }

    fn run(&mut self) -> bool {
        loop {
            let lens = self.lengths();
            let (l0, l1) = (&lens[self.roots[0]], &lens[self.roots[1]]);
            if l0 != l1 {
                return false;
            }
            if l0.is_one() {
                return self.root_letter(self.roots[0]) == self.root_letter(self.roots[1]);
            }
            self.block_comp();
            self.compact();
            let lens = self.lengths();
            let (l0, l1) = (&lens[self.roots[0]], &lens[self.roots[1]]);
            if l0 != l1 {
                return false;
            }
            if l0.is_one() {
                return self.root_letter(self.roots[0]) == self.root_letter(self.roots[1]);
            }
            self.pair_comp();
            self.compact();
        }
    }

    /// Drops empty and unreachable rules, keeping children before parents.
    fn compact(&mut self) {
        let n = self.rules.len();
        let mut live = vec![false; n];
        for &r in &self.roots {
            live[r] = true;
        }
        for x in (0..n).rev() {
            if !live[x] {
                continue;
            }
            for s in &self.rules[x] {
                if let Sym::N(y) = s {
                    live[*y as usize] = true;
                }
            }
        }
        let mut renumber = vec![u32::MAX; n];
        let mut kept = Vec::new();
        for (x, rhs) in std::mem::take(&mut self.rules).into_iter().enumerate() {
            if !live[x] {
                continue;
            }
            renumber[x] = kept.len() as u32;
            let rhs = rhs
                .into_iter()
                .map(|s| match s {
                    Sym::N(y) => Sym::N(renumber[y as usize]),
                    other => other,
                })
                .collect();
            kept.push(rhs);
        }
        self.roots = [renumber[self.roots[0]] as usize, renumber[self.roots[1]] as usize];
        self.rules = kept;
    }

    fn block_comp(&mut self) {
        let n = self.rules.len();
        let mut pre: Vec<Option<(u32, BigUint)>> = vec![None; n];
        let mut suf: Vec<Option<(u32, BigUint)>> = vec![None; n];
        let mut empty = vec![false; n];
        for x in 0..n {
            let old = std::mem::take(&mut self.rules[x]);
            let mut rhs = Vec::with_capacity(old.len() + 4);
            for s in old {
                match s {
                    Sym::N(y) => {
                        let y = y as usize;
                        if let Some((a, c)) = &pre[y] {
                            rhs.push(Sym::Run(*a, c.clone()));
                        }
                        if !empty[y] {
                            rhs.push(Sym::N(y as u32));
                        }
                        if let Some((a, c)) = &suf[y] {
                            rhs.push(Sym::Run(*a, c.clone()));
                        }
                    }
                    other => rhs.push(other),
                }
            }
            if !self.is_root(x) {
                if let Some((a, c, i)) = leading_run(&rhs) {
                    if i == rhs.len() {
                        rhs.clear();
                        empty[x] = true;
                    } else {
                        rhs.drain(..i);
                        if let Some((b, d, j)) = trailing_run(&rhs) {
                            rhs.truncate(rhs.len() - j);
                            suf[x] = Some((b, d));
                        }
                        empty[x] = rhs.is_empty();
                    }
                    pre[x] = Some((a, c));
                }
            }
            self.rules[x] = rhs;
        }
        for x in 0..n {
            let old = std::mem::take(&mut self.rules[x]);
            let mut rhs = Vec::with_capacity(old.len());
            let mut pending: Option<(u32, BigUint)> = None;
            for s in old {
                let (a, c) = match s {
                    Sym::N(_) => {
                        if let Some((a, c)) = pending.take() {
                            rhs.push(self.block_letter(a, c));
                        }
                        rhs.push(s);
                        continue;
                    }
                    Sym::T(a) => (a, BigUint::one()),
                    Sym::Run(a, c) => (a, c),
                };
                match &mut pending {
                    Some((b, d)) if *b == a => *d += c,
                    _ => {
                        if let Some((b, d)) = pending.take() {
                            rhs.push(self.block_letter(b, d));
                        }
                        pending = Some((a, c));
                    }
                }
            }
            if let Some((a, c)) = pending {
                rhs.push(self.block_letter(a, c));
            }
            self.rules[x] = rhs;
        }
    }

    fn block_letter(&mut self, a: u32, count: BigUint) -> Sym {
        if count.is_one() {
            return Sym::T(a);
        }
        let key = (a, count);
        if let Some(&l) = self.blocks.get(&key) {
            return Sym::T(l);
        }
        let l = self.fresh();
        self.blocks.insert(key, l);
        Sym::T(l)
    }

    fn pair_comp(&mut self) {
        let n = self.rules.len();
        let mut first = vec![0u32; n];
        let mut last = vec![0u32; n];
        for x in 0..n {
            let rhs = &self.rules[x];
            first[x] = match rhs[0] {
                Sym::T(a) => a,
                Sym::N(y) => first[y as usize],
                Sym::Run(..) => unreachable!(),
            };
            last[x] = match rhs[rhs.len() - 1] {
                Sym::T(a) => a,
                Sym::N(y) => last[y as usize],
                Sym::Run(..) => unreachable!(),
            };
        }
        let mut occ = vec![BigUint::zero(); n];
        for &r in &self.roots {
            occ[r] = BigUint::one();
        }
        for x in (0..n).rev() {
            if occ[x].is_zero() {
                continue;
            }
            let ox = occ[x].clone();
            for s in &self.rules[x] {
                if let Sym::N(y) = s {
                    occ[*y as usize] += &ox;
                }
            }
        }
        // Weighted counts of adjacent letter pairs in the two words.
        let mut weight: BTreeMap<(u32, u32), BigUint> = BTreeMap::new();
        for (rhs, count) in self.rules.iter().zip(&occ) {
            for w in rhs.windows(2) {
                let a = match w[0] {
                    Sym::T(a) => a,
                    Sym::N(y) => last[y as usize],
                    Sym::Run(..) => unreachable!(),
                };
                let b = match w[1] {
                    Sym::T(b) => b,
                    Sym::N(y) => first[y as usize],
                    Sym::Run(..) => unreachable!(),
                };
                if a != b {
                    *weight.entry((a, b)).or_default() += count;
                }
            }
        }
        let left = partition(&weight);
        let in_left = |a: u32| left.get(&a).copied().unwrap_or(false);

        // Pop right letters from the front and left letters from the back.
        let mut pre: Vec<Option<u32>> = vec![None; n];
        let mut suf: Vec<Option<u32>> = vec![None; n];
        let mut empty = vec![false; n];
        for x in 0..n {
            let old = std::mem::take(&mut self.rules[x]);
            let mut rhs = Vec::with_capacity(old.len() + 2);
            for s in old {
                match s {
                    Sym::N(y) => {
                        let y = y as usize;
                        if let Some(a) = pre[y] {
                            rhs.push(Sym::T(a));
                        }
                        if !empty[y] {
                            rhs.push(Sym::N(y as u32));
                        }
                        if let Some(a) = suf[y] {
                            rhs.push(Sym::T(a));
                        }
                    }
                    other => rhs.push(other),
                }
            }
            if !self.is_root(x) {
                if let Some(&Sym::T(a)) = rhs.first() {
                    if !in_left(a) {
                        rhs.remove(0);
                        pre[x] = Some(a);
                    }
                }
                if let Some(&Sym::T(a)) = rhs.last() {
                    if in_left(a) {
                        rhs.pop();
                        suf[x] = Some(a);
                    }
                }
                empty[x] = rhs.is_empty();
            }
            self.rules[x] = rhs;
        }
        for x in 0..n {
            let old = std::mem::take(&mut self.rules[x]);
            let mut rhs = Vec::with_capacity(old.len());
            let mut i = 0;
            while i < old.len() {
                if let (Sym::T(a), Some(Sym::T(b))) = (&old[i], old.get(i + 1)) {
                    if in_left(*a) && !in_left(*b) {
                        let (a, b) = (*a, *b);
                        let l = match self.pairs.get(&(a, b)) {
                            Some(&l) => l,
                            None => {
                                let l = self.fresh();
                                self.pairs.insert((a, b), l);
                                l
                            }
                        };
                        rhs.push(Sym::T(l));
                        i += 2;
                        continue;
                    }
                }
                rhs.push(old[i].clone());
                i += 1;
            }
            self.rules[x] = rhs;
        }
    }
}

fn run_of(s: &Sym) -> Option<(u32, BigUint)> {
    match s {
        Sym::T(a) => Some((*a, BigUint::one())),
        Sym::Run(a, c) => Some((*a, c.clone())),
        Sym::N(_) => None,
    }
}

/// Letter, total count and number of symbols of the maximal leading run.
fn leading_run(rhs: &[Sym]) -> Option<(u32, BigUint, usize)> {
    let (a, mut count) = run_of(rhs.first()?)?;
    let mut i = 1;
    while let Some((b, c)) = rhs.get(i).and_then(run_of) {
        if b != a {
            break;
        }
        count += c;
        i += 1;
    }
    Some((a, count, i))
}

fn trailing_run(rhs: &[Sym]) -> Option<(u32, BigUint, usize)> {
    let (a, mut count) = run_of(rhs.last()?)?;
    let mut j = 1;
    while j < rhs.len() {
        match run_of(&rhs[rhs.len() - 1 - j]) {
            Some((b, c)) if b == a => {
                count += c;
                j += 1;
            }
            _ => break,
        }
    }
    Some((a, count, j))
}

/// Greedy max-cut on the pair graph: each letter joins the side that
/// covers more already-placed weight. Returns letter -> is-left, oriented
/// so that left-right pairs carry at least half of the cut weight.
fn partition(weight: &BTreeMap<(u32, u32), BigUint>) -> HashMap<u32, bool> {
    let mut adjacent: BTreeMap<u32, Vec<(u32, &BigUint)>> = BTreeMap::new();
    for ((a, b), w) in weight {
        adjacent.entry(*a).or_default().push((*b, w));
        adjacent.entry(*b).or_default().push((*a, w));
    }
    let mut left: HashMap<u32, bool> = HashMap::new();
    for (&a, nbrs) in &adjacent {
        let mut to_left = BigUint::zero();
        let mut to_right = BigUint::zero();
        for (b, w) in nbrs {
            match left.get(b) {
                Some(true) => to_left += *w,
                Some(false) => to_right += *w,
                None => {}
            }
        }
        // Joining the right side cuts the edges to left letters.
        left.insert(a, to_left < to_right);
    }
    let mut lr = BigUint::zero();
    let mut rl = BigUint::zero();
    for ((a, b), w) in weight {
        match (left[a], left[b]) {
            (true, false) => lr += w,
            (false, true) => rl += w,
            _ => {}
        }
    }
    if rl > lr {
        for v in left.values_mut() {
            *v = !*v;
        }
    }
    left
}
