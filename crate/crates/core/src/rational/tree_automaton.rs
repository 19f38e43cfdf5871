//! The tree automaton over `(M, s)` states that recognizes the Munn trees
//! carrying a covering loop of bounded length.
//!
//! A state `(M, s)` at node `u` asserts that `T|u` has loops `Λ_{p,q}`
//! from `p` to `q`, `s(p,q)` of them (empty loops allowed when `p = q`),
//! of total length `M`, jointly visiting every node. A transition splits
//! these loops at `u` into good words: sequences of excursions
//! `p -a-> q`, a loop of the child `ua` from `q` to `p'`, `p' -a⁻¹-> q'`.
//!
//! The automaton is run top-down on demand: for a node and a multiset `s`
//! we compute the least `M` it can carry, memoized, and then rebuild the
//! run and check every transition against the definition.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::munn::MunnTree;

use super::loops::IndexedTree;
use super::multiset::Multiset;
use super::nfa::WordNFA;

/// `(M, s)`: a length budget and a multiset of state pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LoopCoverState {
    pub m: usize,
    pub s: Multiset<(usize, usize)>,
}

impl LoopCoverState {
    pub fn in_bounds(&self, n: usize) -> bool {
        let k = self.s.size();
        self.m <= n && 1 <= k && k <= n
    }
}

/// Whether `(f, target)` is a transition: multisets `W_{p,q}` of good words
/// exist with `|W_{p,q}| ≤ s(p,q)` (equality off the diagonal), first and
/// last states `p`, `q`, letters in `dom f`, `Σ M_a + 2‖W‖ = M`, and
/// `s_a(q',p') = ‖π(W)‖_{(q',a,p')}`.
pub fn ta_transition_check(
    f: &BTreeMap<Letter, LoopCoverState>,
    target: &LoopCoverState,
    a: &WordNFA,
    n: usize,
) -> bool {
    if !target.in_bounds(n) || f.values().any(|c| !c.in_bounds(n)) {
        return false;
    }
    let child_m: usize = f.values().map(|c| c.m).sum();
    if child_m > target.m || (target.m - child_m) % 2 == 1 {
        return false;
    }
    // Each excursion into `a` contributes one π-letter (q', a, p').
    let mut pool: Vec<((Letter, usize, usize), u32)> = Vec::new();
    for (&l, c) in f {
        for (&(y, y2), k) in c.s.iter() {
            pool.push(((l, y, y2), k as u32));
        }
    }
    let excursions: u32 = pool.iter().map(|e| e.1).sum();
    if 2 * excursions as usize != target.m - child_m {
        return false;
    }
    let requests: Vec<(usize, usize)> = target
        .s
        .iter()
        .flat_map(|(&pq, k)| std::iter::repeat_n(pq, k))
        .collect();
    let mut search = Arrange {
        a,
        requests: &requests,
        pool,
        failed: HashSet::new(),
    };
    let start = requests[0].0;
    search.run(0, start)
}

/// Backtracking over good words: walk `ri` is in progress at `pos`.
struct Arrange<'a> {
    a: &'a WordNFA,
    requests: &'a [(usize, usize)],
    pool: Vec<((Letter, usize, usize), u32)>,
    failed: HashSet<(usize, usize, Vec<u32>)>,
}

impl Arrange<'_> {
    fn run(&mut self, ri: usize, pos: usize) -> bool {
        if ri == self.requests.len() {
            return self.pool.iter().all(|e| e.1 == 0);
        }
        let key = (ri, pos, self.pool.iter().map(|e| e.1).collect::<Vec<_>>());
        if self.failed.contains(&key) {
            return false;
        }
        let (_, q) = self.requests[ri];
        // Close the current walk here; for p = q without any excursion this
        // is an empty loop.
        if pos == q {
            let next = self.requests.get(ri + 1).map_or(0, |r| r.0);
            if self.run(ri + 1, next) {
                return true;
            }
        }
        for e in 0..self.pool.len() {
            let ((l, y, y2), k) = self.pool[e];
            if k == 0 || !self.a.transitions.contains(&(pos, l, y)) {
                continue;
            }
            let targets: Vec<usize> = self.a.step(y2, l.inverse()).collect();
            self.pool[e].1 -= 1;
            for z in targets {
                if self.run(ri, z) {
                    self.pool[e].1 += 1;
                    return true;
                }
            }
            self.pool[e].1 += 1;
        }
        self.failed.insert(key);
        false
    }
}

const INF: usize = usize::MAX / 4;

/// What is known about the least `M` for a (node, s) pair.
#[derive(Clone)]
enum Known {
    /// Least cost and the child multisets realizing it.
    Exact(usize, Vec<Multiset<(usize, usize)>>),
    /// No solution of cost below this.
    AtLeast(usize),
}

struct Evaluator<'a> {
    a: &'a WordNFA,
    tree: IndexedTree,
    table: Vec<Vec<Vec<usize>>>,
    q: usize,
    /// Shortest (not necessarily covering) loop cost per node and pair.
    dist: Vec<Vec<usize>>,
    /// `2·(|T|u| − 1)`: every edge is walked down and up.
    floor: Vec<usize>,
    memo: HashMap<(usize, Multiset<(usize, usize)>), Known>,
    work: usize,
    state_cap: usize,
}

impl<'a> Evaluator<'a> {
    fn new(t: &MunnTree, a: &'a WordNFA, state_cap: usize) -> Self {
        let tree = IndexedTree::new(t, a.alphabet.len());
        let table = a.table();
        let q = a.len();
        let mut dist = vec![Vec::new(); tree.len()];
        let mut floor = vec![0; tree.len()];
        // Children have larger indices than parents in shortlex order.
        for u in (0..tree.len()).rev() {
            let mut d = vec![INF; q * q];
            for p in 0..q {
                d[p * q + p] = 0;
            }
            for &(l, c) in &tree.children[u] {
                floor[u] += floor[c] + 2;
                for x in 0..q {
                    for &y in &table[x][l.code() as usize] {
                        for y2 in 0..q {
                            let inner = dist[c][y * q + y2];
                            if inner >= INF {
                                continue;
                            }
                            for &z in &table[y2][l.inverse().code() as usize] {
                                let v = &mut d[x * q + z];
                                *v = (*v).min(inner + 2);
                            }
                        }
                    }
                }
            }
            for k in 0..q {
                for i in 0..q {
                    for j in 0..q {
                        let via = d[i * q + k].saturating_add(d[k * q + j]);
                        if via < d[i * q + j] {
                            d[i * q + j] = via;
                        }
                    }
                }
            }
            dist[u] = d;
        }
        Evaluator {
            a,
            tree,
            table,
            q,
            dist,
            floor,
            memo: HashMap::new(),
            work: 0,
            state_cap,
        }
    }

    /// Least `M ≤ budget` such that node `u` carries `(M, s)`.
    fn min_cost(&mut self, u: usize, s: &Multiset<(usize, usize)>, budget: usize) -> Result<Option<usize>> {
        let key = (u, s.clone());
        match self.memo.get(&key) {
            Some(Known::Exact(c, _)) => return Ok((*c <= budget).then_some(*c)),
            Some(Known::AtLeast(b)) if budget < *b => return Ok(None),
            _ => {}
        }
        let found = self.search(u, s, budget)?;
        let known = match found {
            Some((c, split)) => Known::Exact(c, split),
            None => Known::AtLeast(budget + 1),
        };
        let out = match &known {
            Known::Exact(c, _) => Some(*c),
            Known::AtLeast(_) => None,
        };
        self.memo.insert(key, known);
        Ok(out)
    }

    /// Breadth-first over the number of excursions. A search state is the
    /// walk in progress, its current NFA state, and the child loop pairs
    /// collected so far; the order of excursions does not matter for the
    /// cost, so these states merge.
    #[allow(clippy::type_complexity)]
    fn search(
        &mut self,
        u: usize,
        s: &Multiset<(usize, usize)>,
        budget: usize,
    ) -> Result<Option<(usize, Vec<Multiset<(usize, usize)>>)>> {
        let q = self.q;
        let requests: Vec<(usize, usize)> =
            s.iter().flat_map(|(&pq, k)| std::iter::repeat_n(pq, k)).collect();
        let kids = self.tree.children[u].clone();
        let width = kids.len() * q * q;
        let d_u = self.dist[u].clone();
        let later: Vec<usize> = (0..=requests.len())
            .map(|i| {
                requests[i.min(requests.len())..]
                    .iter()
                    .map(|&(p, r)| d_u[p * q + r])
                    .fold(0usize, |x, y| x.saturating_add(y))
            })
            .collect();
        let mut best: Option<(usize, Vec<Multiset<(usize, usize)>>)> = None;
        let mut limit = budget;
        type S = (usize, usize, Vec<u16>);
        let mut layer: Vec<S> = vec![(0, requests[0].0, vec![0; width])];
        let mut hops = 0usize;
        while !layer.is_empty() && 2 * hops <= limit {
            // Zero-cost moves: close a walk that sits at its target.
            let mut seen: HashSet<S> = HashSet::new();
            let mut stack = layer;
            let mut states = Vec::new();
            while let Some(st) = stack.pop() {
                if !seen.insert(st.clone()) {
                    continue;
                }
                if st.0 < requests.len() && st.1 == requests[st.0].1 {
                    let next = requests.get(st.0 + 1).map_or(0, |r| r.0);
                    stack.push((st.0 + 1, next, st.2.clone()));
                }
                states.push(st);
            }
            self.work += states.len();
            if self.work > self.state_cap {
                return Err(Error::StateSpaceCapExceeded(self.state_cap));
            }
            states.sort();
            let mut next: Vec<S> = Vec::new();
            for (ri, pos, acc) in states {
                let lb = self.lower_bound(u, &kids, &acc, hops, ri, pos, &requests, &later);
                if lb > limit {
                    continue;
                }
                if ri == requests.len() {
                    if let Some(c) = self.finish(&kids, &acc, hops, limit)? {
                        if c <= limit {
                            limit = c.saturating_sub(1);
                            best = Some((c, self.split(&kids, &acc)));
                        }
                    }
                    continue;
                }
                for (ci, &(l, child)) in kids.iter().enumerate() {
                    for &y in &self.table[pos][l.code() as usize] {
                        for y2 in 0..q {
                            if self.dist[child][y * q + y2] >= INF {
                                continue;
                            }
                            for &z in &self.table[y2][l.inverse().code() as usize] {
                                let mut acc2 = acc.clone();
                                acc2[ci * q * q + y * q + y2] += 1;
                                next.push((ri, z, acc2));
                            }
                        }
                    }
                }
            }
            next.sort();
            next.dedup();
            layer = next;
            hops += 1;
        }
        Ok(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn lower_bound(
        &self,
        u: usize,
        kids: &[(Letter, usize)],
        acc: &[u16],
        hops: usize,
        ri: usize,
        pos: usize,
        requests: &[(usize, usize)],
        later: &[usize],
    ) -> usize {
        let q = self.q;
        let _ = u;
        let mut cover = 0usize;
        let mut loops = 0usize;
        for (ci, &(_, child)) in kids.iter().enumerate() {
            let part = &acc[ci * q * q..(ci + 1) * q * q];
            let used: usize = part
                .iter()
                .enumerate()
                .map(|(i, &k)| k as usize * self.dist[child][i])
                .sum();
            loops += used;
            if part.iter().all(|&k| k == 0) {
                cover += 2 + self.floor[child];
            } else {
                cover += self.floor[child].max(used);
            }
        }
        let rest = if ri < requests.len() {
            self.dist[u][pos * q + requests[ri].1].saturating_add(later[ri + 1])
        } else {
            0
        };
        (2 * hops).saturating_add(cover.max(loops.saturating_add(rest)))
    }

    fn split(&self, kids: &[(Letter, usize)], acc: &[u16]) -> Vec<Multiset<(usize, usize)>> {
        let q = self.q;
        (0..kids.len())
            .map(|ci| {
                let mut m = Multiset::new();
                for y in 0..q {
                    for y2 in 0..q {
                        m.add((y, y2), acc[ci * q * q + y * q + y2] as usize);
                    }
                }
                m
            })
            .collect()
    }

    /// Total cost once every walk is complete: all children must be entered.
    fn finish(
        &mut self,
        kids: &[(Letter, usize)],
        acc: &[u16],
        hops: usize,
        limit: usize,
    ) -> Result<Option<usize>> {
        let parts = self.split(kids, acc);
        if parts.iter().any(Multiset::is_empty) {
            return Ok(None);
        }
        let mut floors: usize = kids.iter().map(|&(_, c)| self.floor[c]).sum();
        let mut total = 2 * hops;
        for (&(_, child), part) in kids.iter().zip(&parts) {
            floors -= self.floor[child];
            let Some(room) = limit.checked_sub(total + floors) else {
                return Ok(None);
            };
            match self.min_cost(child, part, room)? {
                Some(c) => total += c,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    /// Rebuilds the run below `u` from the memo and checks every transition.
    fn verify(&self, u: usize, s: &Multiset<(usize, usize)>, n: usize) -> bool {
        let Some(Known::Exact(m, split)) = self.memo.get(&(u, s.clone())) else {
            return false;
        };
        let mut f = BTreeMap::new();
        for (&(l, child), part) in self.tree.children[u].iter().zip(split) {
            let Some(Known::Exact(mc, _)) = self.memo.get(&(child, part.clone())) else {
                return false;
            };
            f.insert(
                l,
                LoopCoverState {
                    m: *mc,
                    s: part.clone(),
                },
            );
        }
        let target = LoopCoverState { m: *m, s: s.clone() };
        ta_transition_check(&f, &target, self.a, n)
            && self.tree.children[u]
                .iter()
                .zip(split)
                .all(|(&(_, c), part)| self.verify(c, part, n))
    }
}

/// Whether the automaton with initial states `(M, s_f)`, `s_f = {(q₀, f)}`,
/// `f` final, `M ≤ n`, accepts `t`.
pub fn ta_accepts(t: &MunnTree, a: &WordNFA, n: usize, state_cap: usize) -> Result<bool> {
    if n == 0 {
        return Ok(false);
    }
    let mut ev = Evaluator::new(t, a, state_cap);
    for &f in &a.finals {
        let s = Multiset::singleton((a.initial, f));
        if ev.min_cost(0, &s, n)?.is_some() {
            assert!(ev.verify(0, &s, n), "reconstructed run violates a transition");
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, Word};
    use crate::munn::munn_tree;
    use crate::rational::loops::covering_loop_search;
    use crate::testutil::{random_nfa, random_word};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn state(m: usize, pairs: &[(usize, usize)]) -> LoopCoverState {
        LoopCoverState {
            m,
            s: pairs.iter().copied().collect(),
        }
    }

    #[test]
    fn leaf_transitions() {
        let al = Alphabet::new(["a"]).unwrap();
        let a = WordNFA::single_word(&al, &Word::empty());
        let none = BTreeMap::new();
        assert!(ta_transition_check(&none, &state(0, &[(0, 0)]), &a, 4));
        assert!(!ta_transition_check(&none, &state(2, &[(0, 0)]), &a, 4));
        let two = WordNFA::single_word(&al, &al.parse_word("a").unwrap());
        assert!(!ta_transition_check(&none, &state(0, &[(0, 1)]), &two, 4));
        // Budget equation cannot hold when the children already exceed M.
        let mut f = BTreeMap::new();
        f.insert(al.gen("a").unwrap(), state(4, &[(0, 0)]));
        assert!(!ta_transition_check(&f, &state(2, &[(0, 0)]), &a, 8));
    }

    #[test]
    fn one_letter_transitions() {
        // p -a-> q, q -a'-> p: the excursion p a (loop q..q) a' p.
        let al = Alphabet::new(["a"]).unwrap();
        let a = WordNFA::parse(
            "states: p q\ninitial: p\nfinal: p\ntrans: p a q\ntrans: q a' p\n",
            Some(&al),
        )
        .unwrap();
        let l = al.gen("a").unwrap();
        let mut f = BTreeMap::new();
        f.insert(l, state(0, &[(1, 1)]));
        assert!(ta_transition_check(&f, &state(2, &[(0, 0)]), &a, 8));
        assert!(!ta_transition_check(&f, &state(4, &[(0, 0)]), &a, 8));
        f.insert(l, state(0, &[(1, 1), (1, 1)]));
        assert!(ta_transition_check(&f, &state(4, &[(0, 0)]), &a, 8));
        assert!(ta_transition_check(&f, &state(4, &[(0, 0), (0, 0)]), &a, 8));
        assert!(!ta_transition_check(&f, &state(4, &[(0, 1)]), &a, 8));
    }

    /// Exhaustive oracle for a single letter: enumerate every multiset of
    /// good words directly.
    #[test]
    fn transitions_match_enumeration() {
        let al = Alphabet::new(["a"]).unwrap();
        let l = al.gen("a").unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..60 {
            let a = random_nfa(&mut rng, &al, 2);
            // Good words of length ≤ 2 as (first, last, π-multiset).
            let mut excursions = Vec::new();
            for &(x, c, y) in &a.transitions {
                if c != l {
                    continue;
                }
                for &(y2, c2, z) in &a.transitions {
                    if c2 == l.inverse() {
                        excursions.push((x, z, (y, y2)));
                    }
                }
            }
            // (from, to, cancellation pairs)
            type Good = (usize, usize, Vec<(usize, usize)>);
            let mut good: Vec<Good> = excursions.iter().map(|&(x, z, p)| (x, z, vec![p])).collect();
            for &(x, z, p) in &excursions {
                for &(x2, z2, p2) in &excursions {
                    if z == x2 {
                        good.push((x, z2, vec![p, p2]));
                    }
                }
            }
            for _ in 0..10 {
                let sp: (usize, usize) = (rng.gen_range(0..2), rng.gen_range(0..2));
                let target_pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..3)).map(|_| sp).collect();
                let child: Vec<(usize, usize)> = (0..rng.gen_range(1..3))
                    .map(|_| (rng.gen_range(0..2), rng.gen_range(0..2)))
                    .collect();
                let mut f = BTreeMap::new();
                f.insert(l, state(0, &child));
                let target = state(2 * child.len(), &target_pairs);
                let want: Multiset<(usize, usize)> = child.iter().copied().collect();
                // Pick one good word or none per requested pair.
                let k = target_pairs.len();
                let mut expect = false;
                let options = good.len() + 1;
                for code in 0..options.pow(k as u32) {
                    let mut c = code;
                    let mut got = Multiset::new();
                    let mut ok = true;
                    for _ in 0..k {
                        let pick = c % options;
                        c /= options;
                        if pick == good.len() {
                            ok &= sp.0 == sp.1;
                        } else {
                            let (x, z, ref ps) = good[pick];
                            ok &= (x, z) == sp;
                            for &p in ps {
                                got.add(p, 1);
                            }
                        }
                    }
                    if ok && got == want {
                        expect = true;
                        break;
                    }
                }
                assert_eq!(ta_transition_check(&f, &target, &a, 16), expect);
            }
        }
    }

    #[test]
    fn acceptance_examples() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let eps = WordNFA::single_word(&al, &Word::empty());
        assert!(ta_accepts(&MunnTree::root(), &eps, 1, 1 << 20).unwrap());
        let aa = WordNFA::single_word(&al, &al.parse_word("a a'").unwrap());
        let ta = munn_tree(&al.parse_word("a").unwrap()).tree;
        assert!(ta_accepts(&ta, &aa, 12, 1 << 20).unwrap());
        let tab = munn_tree(&al.parse_word("a a' b").unwrap()).tree;
        assert!(!ta_accepts(&tab, &aa, 27, 1 << 20).unwrap());
    }

    #[test]
    fn agrees_with_loop_search() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..80 {
            let k = rng.gen_range(1..=3);
            let a = random_nfa(&mut rng, &al, k);
            let u = random_word(&mut rng, &al, 4);
            let t = munn_tree(&u).tree;
            if t.len() > 4 {
                continue;
            }
            let n = a.len() * t.len() * t.len();
            let oracle = covering_loop_search(&t, &a, n, 1 << 22).unwrap().is_some();
            assert_eq!(ta_accepts(&t, &a, n, 1 << 22).unwrap(), oracle, "{}", a.to_text());
        }
    }
}
