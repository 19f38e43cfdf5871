//! Idempotent presentations, closure of Munn trees under relator
//! pasting, and the word problem of the quotient by bounded saturation.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::free_group::{fg_equal, reduce};
use crate::munn::{munn_tree, munn_tree_streamed, MunnTree};
use crate::slp::Slp;
use crate::{Caps, Verdict};

/// Finitely many relations `e = f` between idempotents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdempotentPresentation {
    alphabet: Alphabet,
    relators: Vec<(Word, Word)>,
    normalized: bool,
    prepared: Arc<Prepared>,
}

/// Pasting rules of the normalized relators, computed once per presentation.
#[derive(PartialEq, Eq, Debug)]
struct Prepared {
    rules: Vec<Pasting>,
    max_depth: usize,
}

impl Prepared {
    fn new(relators: &[(Word, Word)], normalized: bool) -> Self {
        let rule = |e: &Word, f: &Word| {
            let te = munn_tree(e).tree;
            let tf = munn_tree(f).tree;
            Pasting {
                lhs: te.iter().cloned().collect(),
                extra: tf.iter().filter(|n| !te.contains(n)).cloned().collect(),
            }
        };
        let mut rules = Vec::new();
        for (e, f) in relators {
            if normalized {
                rules.push(rule(e, f));
            } else {
                let ef = e.concat(f);
                rules.push(rule(e, &ef));
                rules.push(rule(f, &ef));
            }
        }
        let max_depth = relators
            .iter()
            .flat_map(|(_, f)| munn_tree(f).tree.iter().map(Word::len).max())
            .max()
            .unwrap_or(0);
        Prepared { rules, max_depth }
    }
}

impl IdempotentPresentation {
    /// Validates that both sides of every relator reduce to the empty word.
    pub fn new(alphabet: &Alphabet, relators: Vec<(Word, Word)>) -> Result<Self> {
        Self::check_idempotent(alphabet, &relators)?;
        Ok(Self::build(alphabet, relators, false))
    }

    fn check_idempotent(alphabet: &Alphabet, relators: &[(Word, Word)]) -> Result<()> {
        for (e, f) in relators {
            if !reduce(e).is_empty() || !reduce(f).is_empty() {
                return Err(Error::NonIdempotentRelator(format!(
                    "{} = {}",
                    alphabet.format_word(e),
                    alphabet.format_word(f)
                )));
            }
        }
        Ok(())
    }

    fn build(alphabet: &Alphabet, relators: Vec<(Word, Word)>, normalized: bool) -> Self {
        IdempotentPresentation {
            alphabet: alphabet.clone(),
            prepared: Arc::new(Prepared::new(&relators, normalized)),
            relators,
            normalized,
        }
    }

    /// Like [`new`](Self::new) but for relators that already satisfy
    /// `MT(e) ⊆ MT(f)`; they are checked and kept as given.
    pub fn new_normalized(alphabet: &Alphabet, relators: Vec<(Word, Word)>) -> Result<Self> {
        Self::check_idempotent(alphabet, &relators)?;
        for (e, f) in &relators {
            if !munn_tree(e).tree.is_subset(&munn_tree(f).tree) {
                return Err(Error::InvalidInstance(format!(
                    "relator {} = {} is not normalized",
                    alphabet.format_word(e),
                    alphabet.format_word(f)
                )));
            }
        }
        Ok(Self::build(alphabet, relators, true))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[(Word, Word)] {
        &self.relators
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `{(e, ef), (f, ef)}`: presents the same quotient with `MT(e) ⊆ MT(f)`.
    pub fn normalize(&self) -> Self {
        if self.normalized {
            return self.clone();
        }
        let mut relators = Vec::with_capacity(2 * self.relators.len());
        for (e, f) in &self.relators {
            let ef = e.concat(f);
            relators.push((e.clone(), ef.clone()));
            relators.push((f.clone(), ef));
        }
        Self::build(&self.alphabet, relators, true)
    }

    /// Largest node depth over the right-hand trees.
    pub fn max_depth(&self) -> usize {
        self.prepared.max_depth
    }

    /// Parses `rel: <word> = <word>` lines after an `alphabet:` line. An
    /// optional `normalized: true` line keeps relators as written
    /// (after checking them); otherwise they are normalized.
    pub fn parse(text: &str, alphabet: Option<&Alphabet>) -> Result<Self> {
        let mut declared: Option<Alphabet> = None;
        let mut normalized = false;
        let mut raw: Vec<(usize, String, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let n = n + 1;
            let line = crate::slp::strip_comment(line);
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("alphabet:") {
                declared = Some(Alphabet::new(rest.split_whitespace())?);
            } else if let Some(rest) = line.strip_prefix("normalized:") {
                normalized = match rest.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(Error::parse(n, format!("bad flag `{other}`"))),
                };
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let (l, r) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(n, "relator needs `=`"))?;
                raw.push((n, l.to_string(), r.to_string()));
            } else {
                return Err(Error::parse(n, format!("unrecognized line `{line}`")));
            }
        }
        let alphabet = match (declared, alphabet) {
            (Some(d), Some(g)) if !d.same_as(g) => return Err(Error::AlphabetMismatch),
            (Some(d), _) => d,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(Error::parse(1, "missing alphabet line")),
        };
        let mut relators = Vec::with_capacity(raw.len());
        for (_, l, r) in raw {
            relators.push((alphabet.parse_word(&l)?, alphabet.parse_word(&r)?));
        }
        if normalized {
            Self::new_normalized(&alphabet, relators)
        } else {
            Ok(Self::new(&alphabet, relators)?.normalize())
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "alphabet: {}", self.alphabet.names().join(" ")).unwrap();
        if self.normalized {
            out.push_str("normalized: true\n");
        }
        for (e, f) in &self.relators {
            writeln!(
                out,
                "rel: {} = {}",
                self.alphabet.format_word(e),
                self.alphabet.format_word(f)
            )
            .unwrap();
        }
        out
    }
}

/// Result of a bounded saturation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureSet {
    pub nodes: MunnTree,
    /// No further step, bounded or not, adds a node: `nodes` is the closure.
    pub saturated: bool,
}

/// One relator prepared for pasting: the nodes of `MT(e)` and `MT(f) ∖ MT(e)`.
#[derive(PartialEq, Eq, Debug)]
struct Pasting {
    lhs: Vec<Word>,
    extra: Vec<Word>,
}

struct Saturation<'a> {
    seed: &'a MunnTree,
    rules: &'a [Pasting],
    radius: usize,
    nodes: BTreeSet<Word>,
}

impl<'a> Saturation<'a> {
    fn new(seed: &'a MunnTree, p: &'a IdempotentPresentation, radius: usize) -> Self {
        Saturation {
            seed,
            rules: &p.prepared.rules,
            radius,
            nodes: seed.nodes().clone(),
        }
    }

    /// `|u|` minus the length of its longest prefix in the seed.
    fn distance(&self, u: &Word) -> usize {
        (0..=u.len())
            .rev()
            .find(|&k| self.seed.contains(&Word(u.0[..k].to_vec())))
            .map(|k| u.len() - k)
            .unwrap_or(u.len())
    }

    /// Nodes one sweep would add. With `bounded`, an application is skipped
    /// when any node it adds lies beyond the radius.
    fn sweep(&self, bounded: bool) -> BTreeSet<Word> {
        let mut added = BTreeSet::new();
        for u in &self.nodes {
            for rule in self.rules {
                if !rule
                    .lhs
                    .iter()
                    .all(|n| self.nodes.contains(&reduce(&u.concat(n))))
                {
                    continue;
                }
                let new: Vec<Word> = rule
                    .extra
                    .iter()
                    .map(|n| reduce(&u.concat(n)))
                    .filter(|w| !self.nodes.contains(w))
                    .collect();
                if bounded && new.iter().any(|w| self.distance(w) > self.radius) {
                    continue;
                }
                added.extend(new);
            }
        }
        added
    }

    /// Bounded sweeps until nothing changes or `target` is covered.
    /// Returns whether `target` is covered.
    fn run(&mut self, target: Option<&MunnTree>) -> bool {
        let covered = |nodes: &BTreeSet<Word>| target.is_some_and(|t| t.nodes().is_subset(nodes));
        loop {
            if covered(&self.nodes) {
                return true;
            }
            let added = self.sweep(true);
            if added.is_empty() {
                return false;
            }
            self.nodes.extend(added);
            debug_assert!(MunnTree::from_words(&self.nodes).len() == self.nodes.len());
        }
    }

    fn saturated(&self) -> bool {
        self.sweep(false).is_empty()
    }
}

/// `|seed| + max relator depth + 2`.
pub fn default_radius(seed: &MunnTree, p: &IdempotentPresentation) -> usize {
    seed.len() + p.max_depth() + 2
}

/// Least fixpoint of the radius-bounded pasting steps starting from `u`.
pub fn saturate(u: &MunnTree, p: &IdempotentPresentation, radius: usize) -> ClosureSet {
    let mut s = Saturation::new(u, p, radius);
    s.run(None);
    let saturated = s.saturated();
    ClosureSet {
        nodes: MunnTree::from_words(&s.nodes),
        saturated,
    }
}

/// Is `x ⊆ cl_P(seed)`? `Unknown` when the bounded saturation neither
/// covers `x` nor reaches the true closure.
pub fn closure_contains(x: &MunnTree, seed: &MunnTree, p: &IdempotentPresentation, radius: usize) -> Verdict {
    if x.is_subset(seed) {
        return Verdict::Yes;
    }
    let mut s = Saturation::new(seed, p, radius);
    if s.run(Some(x)) {
        Verdict::Yes
    } else if s.saturated() {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}

fn mutual_containment(
    tu: &MunnTree,
    tv: &MunnTree,
    p: &IdempotentPresentation,
    radius: Option<usize>,
) -> Verdict {
    let one = closure_contains(tu, tv, p, radius.unwrap_or_else(|| default_radius(tv, p)));
    if one == Verdict::No {
        return Verdict::No;
    }
    let two = closure_contains(tv, tu, p, radius.unwrap_or_else(|| default_radius(tu, p)));
    one.and(two)
}

/// `τ_P(u) = τ_P(v)`: equal reduced forms and equal closures. `None`
/// picks the default radius for each containment.
pub fn wp_mod_p(u: &Word, v: &Word, p: &IdempotentPresentation, radius: Option<usize>) -> Verdict {
    let (mu, mv) = (munn_tree(u), munn_tree(v));
    if mu.endpoint != mv.endpoint {
        return Verdict::No;
    }
    mutual_containment(&mu.tree, &mv.tree, p, radius)
}

/// [`wp_mod_p`] for compressed words, with streamed Munn trees.
pub fn wp_mod_p_compressed(
    a: &Slp,
    b: &Slp,
    p: &IdempotentPresentation,
    caps: &Caps,
    radius: Option<usize>,
) -> Result<Verdict> {
    if !a.alphabet().same_as(p.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    if !fg_equal(a, b)? {
        return Ok(Verdict::No);
    }
    let ta = munn_tree_streamed(a, caps.node_cap)?;
    let tb = munn_tree_streamed(b, caps.node_cap)?;
    Ok(mutual_containment(&ta.tree, &tb.tree, p, radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_word;
    use rand::{rngs::StdRng, SeedableRng};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    fn two_rays() -> IdempotentPresentation {
        IdempotentPresentation::new(
            &ab(),
            vec![(w("a a'"), w("a a a' a'")), (w("b b'"), w("b b b' b'"))],
        )
        .unwrap()
        .normalize()
    }

    fn seed() -> MunnTree {
        munn_tree(&w("a a' b b'")).tree
    }

    fn ray(l: &str, n: usize) -> Vec<Word> {
        (0..=n).map(|k| w(&vec![l; k].join(" "))).collect()
    }

    #[test]
    fn normalization() {
        let p = IdempotentPresentation::new(&ab(), vec![(w("a a'"), w("b b'"))]).unwrap();
        let q = p.normalize();
        assert_eq!(
            q.relators(),
            &[(w("a a'"), w("a a' b b'")), (w("b b'"), w("a a' b b'"))]
        );
        for (e, f) in q.relators() {
            assert!(munn_tree(e).tree.is_subset(&munn_tree(f).tree));
        }
        let empty = IdempotentPresentation::new(&ab(), vec![]).unwrap();
        assert!(empty.normalize().relators().is_empty());
        assert!(matches!(
            IdempotentPresentation::new(&ab(), vec![(w("a"), w("a a'"))]),
            Err(Error::NonIdempotentRelator(_))
        ));
    }

    #[test]
    fn saturation_grows_two_rays() {
        let c = saturate(&seed(), &two_rays(), 3);
        let mut expect = ray("a", 4);
        expect.extend(ray("b", 4));
        assert_eq!(c.nodes, MunnTree::from_words(&expect));
        assert!(!c.saturated);
        let empty = IdempotentPresentation::new(&ab(), vec![]).unwrap();
        let c = saturate(&seed(), &empty, 3);
        assert_eq!(c.nodes, seed());
        assert!(c.saturated);
    }

    #[test]
    fn ray_membership() {
        let p = two_rays();
        let a5 = munn_tree(&w("a a a a a a' a' a' a' a'")).tree;
        assert_eq!(closure_contains(&a5, &seed(), &p, 6), Verdict::Yes);
        assert_eq!(closure_contains(&a5, &seed(), &p, 5), Verdict::Yes);
        let abba = munn_tree(&w("a b b' a'")).tree;
        assert_eq!(closure_contains(&abba, &seed(), &p, 8), Verdict::Unknown);
        for r in 0..5 {
            assert_eq!(closure_contains(&seed(), &seed(), &p, r), Verdict::Yes);
        }
    }

    /// Every set reachable by unrestricted steps within a depth bound is
    /// a pair of rays, so `ab` is never reached.
    #[test]
    fn closure_stays_on_rays() {
        let p = two_rays();
        let mut frontier = vec![seed().nodes().clone()];
        let mut seen = BTreeSet::new();
        while let Some(set) = frontier.pop() {
            if !seen.insert(set.clone()) {
                continue;
            }
            assert!(set.iter().all(|n| n.iter().all(|&l| l == n.0[0])));
            assert!(set.iter().all(|n| n.iter().all(|l| !l.is_inverse())));
            let root = seed();
            let s = Saturation {
                seed: &root,
                rules: &p.prepared.rules,
                radius: usize::MAX,
                nodes: set.clone(),
            };
            for u in &set {
                for rule in s.rules {
                    if rule.lhs.iter().all(|n| set.contains(&reduce(&u.concat(n)))) {
                        let mut next = set.clone();
                        next.extend(rule.extra.iter().map(|n| reduce(&u.concat(n))));
                        if next.iter().all(|n| n.len() <= 8) {
                            frontier.push(next);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn word_problem_examples() {
        let p = two_rays();
        assert_eq!(
            wp_mod_p(&w("a a' b b'"), &w("a a a' a' b b b' b'"), &p, Some(4)),
            Verdict::Yes
        );
        assert_eq!(wp_mod_p(&w("a"), &w("b"), &p, None), Verdict::No);
        assert_eq!(wp_mod_p(&w("a b'"), &w("a b'"), &p, None), Verdict::Yes);
        let al = ab();
        let s = Slp::from_tokens(&al, "a a' b").unwrap();
        assert_eq!(
            wp_mod_p_compressed(&s, &s, &p, &Caps::default(), None).unwrap(),
            Verdict::Yes
        );
    }

    #[test]
    fn verdicts_stable_under_larger_radius() {
        let al = ab();
        let p = IdempotentPresentation::new(
            &al,
            vec![(w("a a'"), w("a b b' a'")), (w("b' b"), w("b' a a' b"))],
        )
        .unwrap();
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..200 {
            let u = random_word(&mut rng, &al, 6);
            let v = random_word(&mut rng, &al, 6);
            for r in 0..4 {
                let here = wp_mod_p(&u, &v, &p, Some(r));
                if here != Verdict::Unknown {
                    assert_eq!(wp_mod_p(&u, &v, &p, Some(r + 1)), here);
                    assert_eq!(wp_mod_p(&u, &v, &p, Some(r + 2)), here);
                }
            }
        }
    }

    #[test]
    fn saturation_is_monotone() {
        let p = two_rays();
        let mut prev = saturate(&seed(), &p, 0).nodes;
        assert!(seed().is_subset(&prev));
        for r in 1..6 {
            let next = saturate(&seed(), &p, r).nodes;
            assert!(prev.is_subset(&next) && next.is_prefix_closed());
            prev = next;
        }
    }

    #[test]
    fn text_round_trip() {
        let p = two_rays();
        let back = IdempotentPresentation::parse(&p.to_text(), None).unwrap();
        assert_eq!(back, p);
        let raw = "alphabet: a b\nrel: a a' = b b'\n";
        let q = IdempotentPresentation::parse(raw, None).unwrap();
        assert!(q.is_normalized());
        assert_eq!(q.relators().len(), 2);
        let bad = "alphabet: a b\nnormalized: true\nrel: a a' = b b'\n";
        assert!(IdempotentPresentation::parse(bad, None).is_err());
    }
}
