//! Munn trees and the pair representation of free inverse monoid elements.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::free_group::reduce;
use crate::slp::{Rule, Slp, EMPTY};

/// A finite prefix-closed set of reduced words, rooted at the empty word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MunnTree {
    nodes: BTreeSet<Word>,
}

impl Default for MunnTree {
    fn default() -> Self {
        Self::root()
    }
}

impl MunnTree {
    /// The one-node tree `{ε}`.
    pub fn root() -> Self {
        let mut nodes = BTreeSet::new();
        nodes.insert(Word::empty());
        MunnTree { nodes }
    }

    /// Builds a tree from reduced words, adding every prefix.
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut t = MunnTree::root();
        for w in words {
            t.insert_path(w);
        }
        t
    }

    /// Inserts a reduced word and all its prefixes; returns how many were new.
    pub fn insert_path(&mut self, w: &Word) -> usize {
        debug_assert!(w.is_reduced());
        let mut added = 0;
        for k in (1..=w.len()).rev() {
            let p = Word(w.0[..k].to_vec());
            if !self.nodes.insert(p) {
                break;
            }
            added += 1;
        }
        added
    }

    pub fn nodes(&self) -> &BTreeSet<Word> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Never true: the root is always present.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.nodes.contains(w)
    }

    pub fn is_subset(&self, other: &MunnTree) -> bool {
        self.nodes.is_subset(&other.nodes)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.nodes.iter()
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.nodes.contains(&Word::empty())
            && self
                .nodes
                .iter()
                .all(|w| w.is_empty() || self.nodes.contains(&Word(w.0[..w.len() - 1].to_vec())))
    }

    /// Neighbours `r(u a)` of `u` inside the tree, one per letter.
    pub fn neighbours<'a>(&'a self, u: &'a Word) -> impl Iterator<Item = (Letter, Word)> + 'a {
        let back = u.0.last().map(|l| l.inverse());
        let parent = (!u.is_empty()).then(|| Word(u.0[..u.len() - 1].to_vec()));
        let children = self
            .nodes
            .range(u.clone()..)
            .skip(1)
            .take_while(move |w| w.0.starts_with(&u.0))
            .filter(move |w| w.len() == u.len() + 1)
            .map(|w| (*w.0.last().unwrap(), w.clone()));
        back.zip(parent).into_iter().chain(children)
    }

    /// `r(v · T)`: the tree translated by a reduced word.
    pub fn translate(&self, v: &Word) -> impl Iterator<Item = Word> + '_ {
        let v = v.clone();
        self.nodes.iter().map(move |n| reduce(&v.concat(n)))
    }
}

/// An element of the free inverse monoid as the pair `(MT(u), r(u))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FimElement {
    pub tree: MunnTree,
    pub endpoint: Word,
}

impl FimElement {
    pub fn identity() -> Self {
        FimElement {
            tree: MunnTree::root(),
            endpoint: Word::empty(),
        }
    }
}

/// Prefix trie walked by a word; every step is O(1).
struct Walker {
    parent: Vec<usize>,
    via: Vec<Option<Letter>>,
    children: Vec<HashMap<Letter, usize>>,
    cur: usize,
}

impl Walker {
    fn new() -> Self {
        Walker {
            parent: vec![0],
            via: vec![None],
            children: vec![HashMap::new()],
            cur: 0,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn step(&mut self, l: Letter) {
        let cur = self.cur;
        if self.via[cur] == Some(l.inverse()) {
            self.cur = self.parent[cur];
            return;
        }
        if let Some(&c) = self.children[cur].get(&l) {
            self.cur = c;
            return;
        }
        let c = self.parent.len();
        self.parent.push(cur);
        self.via.push(Some(l));
        self.children.push(HashMap::new());
        self.children[cur].insert(l, c);
        self.cur = c;
    }

    fn word(&self, mut node: usize) -> Word {
        let mut letters = Vec::new();
        while let Some(l) = self.via[node] {
            letters.push(l);
            node = self.parent[node];
        }
        letters.reverse();
        Word(letters)
    }

    fn finish(&self) -> FimElement {
        let mut nodes = BTreeSet::new();
        let mut words: Vec<Word> = vec![Word::empty(); self.len()];
        // Nodes are created after their parents.
        for n in 1..self.len() {
            let mut w = words[self.parent[n]].clone();
            w.push(self.via[n].unwrap());
            words[n] = w;
        }
        let endpoint = self.word(self.cur);
        nodes.extend(words);
        FimElement {
            tree: MunnTree { nodes },
            endpoint,
        }
    }
}

/// `(MT(u), r(u))`.
pub fn munn_tree(u: &Word) -> FimElement {
    let mut w = Walker::new();
    for &l in u {
        w.step(l);
    }
    w.finish()
}

/// `(MT(val(A)), r(val(A)))` without decompressing `A`.
///
/// Symbols are consumed through an explicit stack. A rule that has
/// already been walked from the same tree node is skipped: replaying it
/// would revisit the same nodes and end at the same place.
pub fn munn_tree_streamed(a: &Slp, node_cap: usize) -> Result<FimElement> {
    let g = a.grammar();
    let mut w = Walker::new();
    let mut memo: HashMap<(u32, usize), usize> = HashMap::new();
    enum Frame {
        Enter(u32),
        Leave(u32, usize),
    }
    let mut stack = vec![Frame::Enter(a.root())];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Leave(id, start) => {
                memo.insert((id, start), w.cur);
            }
            Frame::Enter(id) => match g.rule(id) {
                Rule::Empty => {}
                Rule::Letter(l) => {
                    w.step(l);
                    if w.len() > node_cap {
                        return Err(Error::NodeCapExceeded(node_cap));
                    }
                }
                Rule::Pair(x, y) => {
                    if let Some(&end) = memo.get(&(id, w.cur)) {
                        w.cur = end;
                        continue;
                    }
                    stack.push(Frame::Leave(id, w.cur));
                    stack.push(Frame::Enter(y));
                    stack.push(Frame::Enter(x));
                }
            },
        }
    }
    if w.len() > node_cap {
        return Err(Error::NodeCapExceeded(node_cap));
    }
    debug_assert!(a.root() != EMPTY || w.len() == 1);
    Ok(w.finish())
}

/// Munn's theorem: equal reduced forms and equal Munn trees.
pub fn fim_equal(u: &Word, v: &Word) -> bool {
    munn_tree(u) == munn_tree(v)
}

/// `(U, v)(V, w) = (U ∪ r(vV), r(vw))`.
pub fn pair_multiply(x: &FimElement, y: &FimElement) -> FimElement {
    let mut tree = x.tree.clone();
    for n in y.tree.translate(&x.endpoint) {
        tree.nodes.insert(n);
    }
    FimElement {
        tree,
        endpoint: reduce(&x.endpoint.concat(&y.endpoint)),
    }
}

/// `u` is idempotent in the free inverse monoid iff `r(u) = ε`.
pub fn is_idempotent(u: &Word) -> bool {
    reduce(u).is_empty()
}

/// Graphviz rendering: the root is drawn larger, the endpoint is double
/// circled, and each inverse pair of edges appears once, with its
/// positive label.
pub fn to_dot(x: &FimElement, alphabet: &Alphabet) -> String {
    let index: HashMap<&Word, usize> = x.tree.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut out = String::new();
    out.push_str("digraph munn {\n  node [shape=circle, label=\"\", width=0.2];\n");
    for (i, w) in x.tree.iter().enumerate() {
        let mut attrs = vec![format!("tooltip=\"{}\"", alphabet.format_word(w))];
        if w.is_empty() {
            attrs.push("width=0.35".into());
        }
        if *w == x.endpoint {
            attrs.push("peripheries=2".into());
        }
        writeln!(out, "  n{i} [{}];", attrs.join(", ")).unwrap();
    }
    for w in x.tree.iter().filter(|w| !w.is_empty()) {
        let l = *w.0.last().unwrap();
        let parent = index[&Word(w.0[..w.len() - 1].to_vec())];
        let child = index[w];
        let (from, to, label) = if l.is_inverse() {
            (child, parent, l.inverse())
        } else {
            (parent, child, l)
        };
        writeln!(
            out,
            "  n{from} -> n{to} [label=\"{}\"];",
            alphabet.letter_name(label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
