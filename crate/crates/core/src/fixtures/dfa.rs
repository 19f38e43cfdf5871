//! Deterministic automata over a paired alphabet `Σ × Θ`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write;

use crate::alphabet::is_identifier;
use crate::error::{Error, Result};

/// `x ⊗ y = (x[1], y[1]) ⋯ (x[n], y[n])`.
pub fn convolve<S: Clone, T: Clone>(x: &[S], y: &[T]) -> Result<Vec<(S, T)>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter().cloned().zip(y.iter().cloned()).collect())
}

/// A partial deterministic automaton reading pairs `(a, b)`, with letters
/// and states given by index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvolutionDFA {
    pub sigma: Vec<String>,
    pub theta: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    /// `(q, a, b) ↦ p`.
    pub delta: BTreeMap<(usize, usize, usize), usize>,
}

impl ConvolutionDFA {
    pub fn new(
        sigma: Vec<String>,
        theta: Vec<String>,
        states: Vec<String>,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        delta: impl IntoIterator<Item = ((usize, usize, usize), usize)>,
    ) -> Result<Self> {
        let mut dfa = ConvolutionDFA {
            sigma,
            theta,
            states,
            initial,
            finals: finals.into_iter().collect(),
            delta: BTreeMap::new(),
        };
        for (k, p) in delta {
            if dfa.delta.insert(k, p).is_some() {
                return Err(Error::parse(0, "two transitions for one state and letter"));
            }
        }
        dfa.validate()?;
        Ok(dfa)
    }

    fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if self.initial >= n || self.finals.iter().any(|&f| f >= n) {
            return Err(Error::UndefinedSymbol("state index".into()));
        }
        for (&(q, a, b), &p) in &self.delta {
            if q >= n || p >= n || a >= self.sigma.len() || b >= self.theta.len() {
                return Err(Error::UndefinedSymbol(format!(
                    "transition ({q}, {a}, {b}) -> {p}"
                )));
            }
        }
        let mut seen = HashSet::new();
        for name in self.sigma.iter().chain(&self.theta).chain(&self.states) {
            if !is_identifier(name) {
                return Err(Error::InvalidGenerator(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::AlphabetCollision(name.clone()));
            }
        }
        Ok(())
    }

    pub fn step(&self, q: usize, a: usize, b: usize) -> Option<usize> {
        self.delta.get(&(q, a, b)).copied()
    }

    /// The states `q_0, …, q_k` along `x ⊗ y` while the run is defined.
    pub fn run(&self, x: &[usize], y: &[usize]) -> Result<Vec<usize>> {
        let mut states = vec![self.initial];
        for (a, b) in convolve(x, y)? {
            match self.step(*states.last().unwrap(), a, b) {
                Some(p) => states.push(p),
                None => break,
            }
        }
        Ok(states)
    }

    pub fn accepts(&self, x: &[usize], y: &[usize]) -> Result<bool> {
        let run = self.run(x, y)?;
        Ok(run.len() == x.len() + 1 && self.finals.contains(run.last().unwrap()))
    }

    pub fn finals_have_no_outgoing(&self) -> bool {
        self.delta.keys().all(|(q, _, _)| !self.finals.contains(q))
    }

    pub fn parse_sigma_word(&self, text: &str) -> Result<Vec<usize>> {
        parse_indices(&self.sigma, text)
    }

    pub fn parse_theta_word(&self, text: &str) -> Result<Vec<usize>> {
        parse_indices(&self.theta, text)
    }

    /// Every partial automaton with `k` states, initial state 0, up to
    /// renaming of the other states. With `outgoing_free`, final states have
    /// no outgoing transitions.
    pub fn enumerate(sigma: usize, theta: usize, k: usize, outgoing_free: bool) -> Vec<ConvolutionDFA> {
        let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let letters: Vec<(usize, usize)> = (0..sigma).flat_map(|a| (0..theta).map(move |b| (a, b))).collect();
        let slots = k * letters.len();
        let mut out = Vec::new();
        let mut seen: HashSet<(Vec<usize>, u32)> = HashSet::new();
        for finals in 0u32..1 << k {
            let mut choice = vec![0usize; slots];
            loop {
                let ok = !outgoing_free
                    || (0..slots).all(|i| choice[i] == 0 || finals >> (i / letters.len()) & 1 == 0);
                if ok && seen.insert(canonical(&choice, finals, k, letters.len())) {
                    let delta = (0..slots).filter(|&i| choice[i] > 0).map(|i| {
                        let (a, b) = letters[i % letters.len()];
                        ((i / letters.len(), a, b), choice[i] - 1)
                    });
                    out.push(
                        ConvolutionDFA::new(
                            names("x", sigma),
                            names("y", theta),
                            names("q", k),
                            0,
                            (0..k).filter(|q| finals >> q & 1 == 1),
                            delta,
                        )
                        .expect("well formed"),
                    );
                }
                // Odometer over "no transition" (0) or target p (p + 1).
                let mut i = 0;
                while i < slots && choice[i] == k {
                    choice[i] = 0;
                    i += 1;
                }
                if i == slots {
                    break;
                }
                choice[i] += 1;
            }
        }
        out
    }

    /// Reads the text format: `sigma:`, `theta:`, `states:`, `initial:`,
    /// `final:` and `trans: q a b p` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
        let mut trans = Vec::new();
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
                "trans" => {
                    if words.len() != 4 {
                        return Err(Error::parse(n, "expected `trans: q a b p`"));
                    }
                    trans.push((n, words));
                }
                k @ ("sigma" | "theta" | "states" | "initial" | "final") => {
                    fields.insert(k.to_string(), (n, words));
                }
                other => return Err(Error::parse(n, format!("unknown key `{other}`"))),
            }
        }
        let mut take = |k: &str| {
            fields
                .remove(k)
                .ok_or_else(|| Error::parse(1, format!("missing `{k}:` line")))
        };
        let sigma = take("sigma")?.1;
        let theta = take("theta")?.1;
        let states = take("states")?.1;
        let (ni, initial) = take("initial")?;
        let finals = take("final").map(|f| f.1).unwrap_or_default();
        let find = |list: &[String], n: usize, x: &str| {
            list.iter()
                .position(|s| s == x)
                .ok_or_else(|| Error::parse(n, format!("undeclared symbol `{x}`")))
        };
        let q0 = match initial.as_slice() {
            [q] => find(&states, ni, q)?,
            _ => return Err(Error::parse(ni, "exactly one initial state expected")),
        };
        let finals = finals
            .iter()
            .map(|f| find(&states, ni, f))
            .collect::<Result<Vec<_>>>()?;
        let mut delta = Vec::new();
        for (n, w) in &trans {
            delta.push((
                (
                    find(&states, *n, &w[0])?,
                    find(&sigma, *n, &w[1])?,
                    find(&theta, *n, &w[2])?,
                ),
                find(&states, *n, &w[3])?,
            ));
        }
        ConvolutionDFA::new(sigma, theta, states, q0, finals, delta)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "sigma: {}", self.sigma.join(" ")).unwrap();
        writeln!(out, "theta: {}", self.theta.join(" ")).unwrap();
        writeln!(out, "states: {}", self.states.join(" ")).unwrap();
        writeln!(out, "initial: {}", self.states[self.initial]).unwrap();
        let fs: Vec<&str> = self.finals.iter().map(|&f| self.states[f].as_str()).collect();
        writeln!(out, "final: {}", fs.join(" ")).unwrap();
        for (&(q, a, b), &p) in &self.delta {
            writeln!(
                out,
                "trans: {} {} {} {}",
                self.states[q], self.sigma[a], self.theta[b], self.states[p]
            )
            .unwrap();
        }
        out
    }
}

fn parse_indices(names: &[String], text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .filter(|t| *t != "1" && *t != "ε")
        .map(|t| {
            names
                .iter()
                .position(|n| n == t)
                .ok_or_else(|| Error::UndefinedSymbol(t.to_string()))
        })
        .collect()
}

/// Least encoding over the renamings that fix state 0.
fn canonical(choice: &[usize], finals: u32, k: usize, width: usize) -> (Vec<usize>, u32) {
    let mut best: Option<(Vec<usize>, u32)> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        // perm[old] = new
        let mut c = vec![0; choice.len()];
        for q in 0..k {
            for l in 0..width {
                let t = choice[q * width + l];
                c[perm[q] * width + l] = if t == 0 { 0 } else { perm[t - 1] + 1 };
            }
        }
        let f = (0..k)
            .filter(|&q| finals >> q & 1 == 1)
            .map(|q| 1 << perm[q])
            .sum();
        if best.as_ref().is_none_or(|b| (&c, f) < (&b.0, b.1)) {
            best = Some((c, f));
        }
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
    best.unwrap()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
