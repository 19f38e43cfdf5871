//! Nondeterministic automata over the doubled alphabet.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::alphabet::{is_identifier, Alphabet, Letter, Word};
use crate::error::{Error, Result};

/// `(Q, Γ ∪ Γ⁻¹, δ, q₀, F)` with states numbered `0..states.len()`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordNFA {
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub transitions: BTreeSet<(usize, Letter, usize)>,
}

impl WordNFA {
    pub fn new(
        alphabet: &Alphabet,
        states: Vec<String>,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, Letter, usize)>,
    ) -> Result<Self> {
        let nfa = WordNFA {
            alphabet: alphabet.clone(),
            states,
            initial,
            finals: finals.into_iter().collect(),
            transitions: transitions.into_iter().collect(),
        };
        nfa.validate()?;
        Ok(nfa)
    }

    /// The automaton accepting exactly one word, along a path of fresh states.
    pub fn single_word(alphabet: &Alphabet, w: &Word) -> Self {
        let states = (0..=w.len()).map(|i| format!("s{i}")).collect();
        let trans = w.iter().enumerate().map(|(i, &l)| (i, l, i + 1));
        WordNFA::new(alphabet, states, 0, [w.len()], trans).expect("well formed")
    }

    fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if self.initial >= n || self.finals.iter().any(|&f| f >= n) {
            return Err(Error::UndefinedSymbol("state index".into()));
        }
        let mut seen = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if !is_identifier(s) {
                return Err(Error::InvalidGenerator(s.clone()));
            }
            if seen.insert(s.as_str(), i).is_some() {
                return Err(Error::DuplicateGenerator(s.clone()));
            }
        }
        for &(p, l, q) in &self.transitions {
            if p >= n || q >= n || l.generator() >= self.alphabet.len() {
                return Err(Error::UndefinedSymbol(format!(
                    "transition ({p}, {}, {q})",
                    l.code()
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    /// Targets of `q` on `a`.
    pub fn step(&self, q: usize, a: Letter) -> impl Iterator<Item = usize> + '_ {
        self.transitions
            .range((q, a, 0)..=(q, a, usize::MAX))
            .map(|&(_, _, r)| r)
    }

    /// Per state and letter code, the sorted target list.
    pub(crate) fn table(&self) -> Vec<Vec<Vec<usize>>> {
        let mut t = vec![vec![Vec::new(); 2 * self.alphabet.len()]; self.len()];
        for &(p, l, q) in &self.transitions {
            t[p][l.code() as usize].push(q);
        }
        t
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut cur: BTreeSet<usize> = [self.initial].into();
        for &l in w.iter() {
            cur = cur.iter().flat_map(|&q| self.step(q, l)).collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.is_final(q))
    }

    /// The same automaton read over a larger alphabet.
    pub fn embed(&self, target: &Alphabet) -> Result<Self> {
        let map = self.alphabet.embedding_into(target)?;
        let relabel = |l: Letter| {
            let g = map[l.generator()];
            if l.is_inverse() {
                Letter::negative(g)
            } else {
                Letter::positive(g)
            }
        };
        Ok(WordNFA {
            alphabet: target.clone(),
            states: self.states.clone(),
            initial: self.initial,
            finals: self.finals.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|&(p, l, q)| (p, relabel(l), q))
                .collect(),
        })
    }

    /// Accepts `L(self) · z`: one new final state entered by `z` from every old final.
    pub fn append_letter(&self, z: Letter) -> Self {
        let mut states = self.states.clone();
        let names: BTreeSet<&str> = states.iter().map(String::as_str).collect();
        let end = (0..)
            .map(|i| format!("end{i}"))
            .find(|n| !names.contains(n.as_str()))
            .unwrap();
        states.push(end);
        let e = states.len() - 1;
        let mut transitions = self.transitions.clone();
        transitions.extend(self.finals.iter().map(|&f| (f, z, e)));
        WordNFA {
            alphabet: self.alphabet.clone(),
            states,
            initial: self.initial,
            finals: [e].into(),
            transitions,
        }
    }

    /// Reads the text format. Without an `alphabet:` line the generators are
    /// taken from `alphabet`, or collected from the transition labels.
    pub fn parse(text: &str, alphabet: Option<&Alphabet>) -> Result<Self> {
        let mut declared: Option<Alphabet> = None;
        let mut states: Option<Vec<String>> = None;
        let mut initial: Option<(usize, String)> = None;
        let mut finals: Option<(usize, Vec<String>)> = None;
        let mut trans: Vec<(usize, String, String, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let n = n + 1;
            let line = crate::slp::strip_comment(line);
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(n, format!("unrecognized line `{line}`")))?;
            let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            match key.trim() {
                "alphabet" => declared = Some(Alphabet::new(&words)?),
                "states" => states = Some(words),
                "initial" => match words.as_slice() {
                    [q] => initial = Some((n, q.clone())),
                    _ => return Err(Error::parse(n, "exactly one initial state expected")),
                },
                "final" => finals = Some((n, words)),
                "trans" => match words.as_slice() {
                    [p, x, q] => trans.push((n, p.clone(), x.clone(), q.clone())),
                    _ => return Err(Error::parse(n, "expected `trans: p x q`")),
                },
                other => return Err(Error::parse(n, format!("unknown key `{other}`"))),
            }
        }
        let alphabet = match (declared, alphabet) {
            (Some(d), Some(g)) if !d.same_as(g) => return Err(Error::AlphabetMismatch),
            (Some(d), _) => d,
            (None, Some(g)) => g.clone(),
            (None, None) => {
                let mut names: Vec<String> = Vec::new();
                for (_, _, x, _) in &trans {
                    let g = x.trim_end_matches('\'').to_string();
                    if !names.contains(&g) {
                        names.push(g);
                    }
                }
                Alphabet::new(&names)?
            }
        };
        let states = states.ok_or_else(|| Error::parse(1, "missing `states:` line"))?;
        let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |n: usize, s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::parse(n, format!("undeclared state `{s}`")))
        };
        let (ni, q0) = initial.ok_or_else(|| Error::parse(1, "missing `initial:` line"))?;
        let q0 = lookup(ni, &q0)?;
        let finals = match finals {
            Some((nf, fs)) => fs.iter().map(|f| lookup(nf, f)).collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let mut transitions = Vec::new();
        for (n, p, x, q) in &trans {
            let l = alphabet
                .parse_letter(x)
                .map_err(|e| Error::parse(*n, e.to_string()))?;
            transitions.push((lookup(*n, p)?, l, lookup(*n, q)?));
        }
        WordNFA::new(&alphabet, states, q0, finals, transitions)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "alphabet: {}", self.alphabet.names().join(" ")).unwrap();
        writeln!(out, "states: {}", self.states.join(" ")).unwrap();
        writeln!(out, "initial: {}", self.states[self.initial]).unwrap();
        let fs: Vec<&str> = self.finals.iter().map(|&f| self.states[f].as_str()).collect();
        writeln!(out, "final: {}", fs.join(" ")).unwrap();
        for &(p, l, q) in &self.transitions {
            writeln!(
                out,
                "trans: {} {} {}",
                self.states[p],
                self.alphabet.letter_name(l),
                self.states[q]
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_accept() {
        let text = "states: p q\ninitial: p\nfinal: p\ntrans: p a q\ntrans: q a' p # back\n";
        let a = WordNFA::parse(text, None).unwrap();
        let al = &a.alphabet;
        assert!(a.accepts(&Word::empty()));
        assert!(a.accepts(&al.parse_word("a a' a a'").unwrap()));
        assert!(!a.accepts(&al.parse_word("a").unwrap()));
        assert_eq!(WordNFA::parse(&a.to_text(), None).unwrap(), a);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            WordNFA::parse("states: p\ninitial: r\n", None),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            WordNFA::parse("states: p\ninitial: p\ntrans: p a\n", None),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(WordNFA::parse("initial: p\n", None).is_err());
        let al = Alphabet::new(["a"]).unwrap();
        assert!(WordNFA::parse("states: p\ninitial: p\ntrans: p b p\n", Some(&al)).is_err());
    }

    #[test]
    fn single_word_and_append() {
        let al = Alphabet::new(["a", "b", "z"]).unwrap();
        let w = al.parse_word("a b").unwrap();
        let a = WordNFA::single_word(&al, &w);
        assert!(a.accepts(&w));
        assert!(!a.accepts(&al.parse_word("a").unwrap()));
        let az = a.append_letter(al.gen("z").unwrap());
        assert!(az.accepts(&al.parse_word("a b z").unwrap()));
        assert!(!az.accepts(&w));
    }
}
