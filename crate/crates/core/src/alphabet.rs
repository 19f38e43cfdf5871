//! Generators, the doubled alphabet and plain group words.
//!
//! A [`Letter`] packs a generator index and an inversion bit, so the
//! involution is a single xor and the derived order lists every generator
//! immediately before its inverse, in declaration order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A letter of the doubled alphabet: generator `g` or its formal inverse `g'`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(u32);

impl Letter {
    pub fn positive(generator: usize) -> Self {
        Letter((generator as u32) << 1)
    }

    pub fn negative(generator: usize) -> Self {
        Letter(((generator as u32) << 1) | 1)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Dense code in `0..2 * |generators|`.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn from_code(code: u32) -> Self {
        Letter(code)
    }
}

/// An ordered set of generator names.
///
/// Cloning is cheap; two alphabets are equal when they declare the same
/// names in the same order.
#[derive(Clone)]
pub struct Alphabet {
    inner: Arc<AlphabetInner>,
}

struct AlphabetInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::InvalidGenerator(name.to_string()));
            }
            if index.insert(name.to_string(), list.len()).is_some() {
                return Err(Error::DuplicateGenerator(name.to_string()));
            }
            list.push(name.to_string());
        }
        Ok(Alphabet {
            inner: Arc::new(AlphabetInner { names: list, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    /// The positive letter for a generator name.
    pub fn gen(&self, name: &str) -> Result<Letter> {
        self.index_of(name)
            .map(Letter::positive)
            .ok_or_else(|| Error::UndefinedSymbol(name.to_string()))
    }

    /// All letters of the doubled alphabet in canonical order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.len() as u32).map(Letter::from_code)
    }

    pub fn letter_name(&self, letter: Letter) -> String {
        let base = &self.inner.names[letter.generator()];
        if letter.is_inverse() {
            format!("{base}'")
        } else {
            base.clone()
        }
    }

    /// Parses one token: `g` or `g'`.
    pub fn parse_letter(&self, token: &str) -> Result<Letter> {
        let (name, inverse) = match token.strip_suffix('\'') {
            Some(stripped) => (stripped, true),
            None => (token, false),
        };
        let g = self
            .index_of(name)
            .ok_or_else(|| Error::UndefinedSymbol(token.to_string()))?;
        Ok(if inverse {
            Letter::negative(g)
        } else {
            Letter::positive(g)
        })
    }

    /// Parses a whitespace separated word. `1` and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" || token == "ε" {
                continue;
            }
            letters.push(self.parse_letter(token)?);
        }
        Ok(Word(letters))
    }

    /// Space separated tokens; the empty word prints as `1`.
    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Infers an alphabet from the tokens of a word, in order of first appearance.
    pub fn infer(text: &str) -> Result<Self> {
        let mut names: Vec<&str> = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" || token == "ε" {
                continue;
            }
            let name = token.strip_suffix('\'').unwrap_or(token);
            if !names.contains(&name) {
                names.push(name);
            }
        }
        Alphabet::new(names)
    }

    /// A fresh generator name of the form `{stem}`, `{stem}1`, ... not yet in use.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.index_of(stem).is_none() {
            return stem.to_string();
        }
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| self.index_of(n).is_none())
            .expect("unbounded")
    }

    /// This alphabet with one more generator appended.
    pub fn extended(&self, name: &str) -> Result<Self> {
        Alphabet::new(self.names().iter().map(String::as_str).chain([name]))
    }

    pub fn same_as(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.names == other.inner.names
    }

    /// Letter mapping into a larger alphabet that contains every generator of `self`.
    pub(crate) fn embedding_into(&self, other: &Alphabet) -> Result<Vec<usize>> {
        self.names()
            .iter()
            .map(|n| other.index_of(n).ok_or_else(|| Error::UndefinedSymbol(n.clone())))
            .collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// A word over the doubled alphabet.
///
/// Words compare lexicographically in letter order, prefixes first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// `(a₁⋯aₙ)⁻¹ = aₙ⁻¹⋯a₁⁻¹`.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// No factor `b b⁻¹`.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }
}

impl AsRef<[Letter]> for Word {
    fn as_ref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
