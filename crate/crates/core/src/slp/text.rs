//! The line-oriented SLP file format.
//!
//! ```text
//! alphabet: a b
//! start: $S
//! $S := $X $X b'
//! $X := a a
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use super::grammar::{Grammar, Id, Rule, EMPTY};
use super::Slp;
use crate::alphabet::{is_identifier, Alphabet};
use crate::error::{Error, Result};

enum Token {
    Terminal(crate::alphabet::Letter),
    Nonterminal(String),
}

/// Strips a `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn nonterminal_name(token: &str) -> Option<&str> {
    token.strip_prefix('$').filter(|n| is_identifier(n))
}

/// Parses an SLP file. When `alphabet` is given the file's `alphabet:`
/// line may be omitted, and if present must agree with it.
pub fn parse_slp(text: &str, alphabet: Option<&Alphabet>) -> Result<Slp> {
    let mut declared: Option<Alphabet> = None;
    let mut start: Option<(String, usize)> = None;
    let mut raw: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let n = n + 1;
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if declared.is_some() {
                return Err(Error::parse(n, "repeated alphabet line"));
            }
            declared = Some(Alphabet::new(rest.split_whitespace())?);
        } else if let Some(rest) = line.strip_prefix("start:") {
            let name = rest.trim();
            let name = nonterminal_name(name)
                .ok_or_else(|| Error::parse(n, format!("bad start symbol `{name}`")))?;
            if start.is_some() {
                return Err(Error::parse(n, "repeated start line"));
            }
            start = Some((name.to_string(), n));
        } else if let Some((lhs, rhs)) = line.split_once(":=") {
            let lhs = lhs.trim();
            let name =
                nonterminal_name(lhs).ok_or_else(|| Error::parse(n, format!("bad nonterminal `{lhs}`")))?;
            raw.push((
                n,
                name.to_string(),
                rhs.split_whitespace().map(str::to_string).collect(),
            ));
        } else {
            return Err(Error::parse(n, format!("unrecognized line `{line}`")));
        }
    }
    let alphabet = match (declared, alphabet) {
        (Some(d), Some(given)) if !d.same_as(given) => return Err(Error::AlphabetMismatch),
        (Some(d), _) => d,
        (None, Some(given)) => given.clone(),
        (None, None) => return Err(Error::parse(1, "missing alphabet line")),
    };
    let (start, _) = start.ok_or_else(|| Error::parse(1, "missing start line"))?;

    let mut productions: HashMap<String, Vec<Token>> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    for (n, name, tokens) in raw {
        if productions.contains_key(&name) {
            return Err(Error::DuplicateProduction(format!("${name}")));
        }
        let mut rhs = Vec::with_capacity(tokens.len());
        for t in tokens {
            if t.starts_with('$') {
                let nt =
                    nonterminal_name(&t).ok_or_else(|| Error::parse(n, format!("bad nonterminal `{t}`")))?;
                rhs.push(Token::Nonterminal(nt.to_string()));
            } else if t == "1" || t == "ε" {
                continue;
            } else {
                rhs.push(Token::Terminal(alphabet.parse_letter(&t)?));
            }
        }
        order.push(name.clone());
        productions.insert(name, rhs);
    }
    for rhs in productions.values() {
        for t in rhs {
            if let Token::Nonterminal(nt) = t {
                if !productions.contains_key(nt) {
                    return Err(Error::UndefinedSymbol(format!("${nt}")));
                }
            }
        }
    }
    if !productions.contains_key(&start) {
        return Err(Error::UndefinedSymbol(format!("${start}")));
    }

    // Iterative depth-first evaluation; a grey node reached again is a cycle.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black(Id),
    }
    let index: HashMap<&str, usize> = order.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut mark = vec![Mark::White; order.len()];
    let mut g = Grammar::new();
    for root in 0..order.len() {
        if mark[root] != Mark::White {
            continue;
        }
        let mut stack = vec![(root, false)];
        while let Some((x, done)) = stack.pop() {
            let rhs = &productions[&order[x]];
            if done {
                let mut ids = Vec::with_capacity(rhs.len());
                for t in rhs {
                    ids.push(match t {
                        Token::Terminal(l) => g.letter(*l),
                        Token::Nonterminal(nt) => match mark[index[nt.as_str()]] {
                            Mark::Black(id) => id,
                            _ => unreachable!(),
                        },
                    });
                }
                mark[x] = Mark::Black(g.concat_all(&ids));
                continue;
            }
            match mark[x] {
                Mark::Black(_) => continue,
                Mark::Grey => return Err(Error::CyclicGrammar(format!("${}", order[x]))),
                Mark::White => {}
            }
            mark[x] = Mark::Grey;
            stack.push((x, true));
            for t in rhs.iter().rev() {
                if let Token::Nonterminal(nt) = t {
                    let y = index[nt.as_str()];
                    match mark[y] {
                        Mark::Grey => return Err(Error::CyclicGrammar(format!("${nt}"))),
                        Mark::White => stack.push((y, false)),
                        Mark::Black(_) => {}
                    }
                }
            }
        }
    }
    let root = match mark[index[start.as_str()]] {
        Mark::Black(id) => id,
        _ => unreachable!(),
    };
    Ok(Slp::from_parts(alphabet, g, root).compacted())
}

impl Slp {
    /// Serializes in the file format; [`parse_slp`] reads it back to an equal value.
    pub fn to_text(&self) -> String {
        let g = self.grammar();
        let al = self.alphabet();
        let mut out = String::new();
        writeln!(out, "alphabet: {}", al.names().join(" ")).unwrap();
        writeln!(out, "start: $S").unwrap();
        let order = g.reachable(self.root());
        let mut names: HashMap<Id, String> = HashMap::new();
        let mut k = 0;
        for &id in &order {
            if let Rule::Pair(..) = g.rule(id) {
                let name = if id == self.root() {
                    "$S".to_string()
                } else {
                    k += 1;
                    format!("$X{k}")
                };
                names.insert(id, name);
            }
        }
        let token = |id: Id| match g.rule(id) {
            Rule::Letter(l) => al.letter_name(l),
            _ => names[&id].clone(),
        };
        match g.rule(self.root()) {
            Rule::Empty => writeln!(out, "$S :=").unwrap(),
            Rule::Letter(l) => writeln!(out, "$S := {}", al.letter_name(l)).unwrap(),
            Rule::Pair(..) => {}
        }
        for &id in order.iter().rev() {
            if let Rule::Pair(a, b) = g.rule(id) {
                writeln!(out, "{} := {} {}", names[&id], token(a), token(b)).unwrap();
            }
        }
        debug_assert!(self.root() != EMPTY || order.len() == 1);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "alphabet: a b\nstart: $S\n$S := $X $X b' $Y\n$X := a a b\n$Y := $X a'\n";
        let s = parse_slp(src, None).unwrap();
        let back = parse_slp(&s.to_text(), None).unwrap();
        assert_eq!(s, back);
        let al = s.alphabet().clone();
        for w in ["1", "a", "a b"] {
            let s = Slp::from_tokens(&al, w).unwrap();
            assert_eq!(parse_slp(&s.to_text(), None).unwrap(), s);
        }
    }

    #[test]
    fn errors() {
        let dup = "alphabet: a\nstart: $S\n$S := a\n$S := a a\n";
        assert!(matches!(parse_slp(dup, None), Err(Error::DuplicateProduction(_))));
        let undef = "alphabet: a\nstart: $S\n$S := $T\n";
        assert!(matches!(parse_slp(undef, None), Err(Error::UndefinedSymbol(_))));
        let bad_letter = "alphabet: a\nstart: $S\n$S := b\n";
        assert!(matches!(
            parse_slp(bad_letter, None),
            Err(Error::UndefinedSymbol(_))
        ));
        let cycle = "alphabet: a\nstart: $S\n$S := $X\n$X := $Y a\n$Y := $X\n";
        assert!(matches!(parse_slp(cycle, None), Err(Error::CyclicGrammar(_))));
    }

    #[test]
    fn comments_and_empty_rhs() {
        let s = parse_slp("# header\nalphabet: a\nstart: $S # root\n$S := # nothing\n", None).unwrap();
        assert!(s.is_empty());
    }
}
