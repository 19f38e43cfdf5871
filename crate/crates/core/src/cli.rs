//! The `munnkit` command line: argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::alphabet::{Alphabet, Word};
use crate::fim_compressed::{fim_equal_compressed, rank_one_equal};
use crate::fixtures::{
    gen_idempotent_pspace, gen_pi2p, gen_rational_pspace, ConvolutionDFA, SubsetSumInstance,
};
use crate::free_group::{fg_equal, reduce, reduced_slp};
use crate::munn::{munn_tree_streamed, to_dot};
use crate::presentations::{
    closure_contains, default_radius, saturate, wp_mod_p_compressed, IdempotentPresentation,
};
use crate::rational::{rat_member_slp, WordNFA};
use crate::slp::{parse_slp, Slp, DEFAULT_DECOMPRESS_CAP};
use crate::{Caps, Error, Result, Verdict, DEFAULT_NODE_CAP, DEFAULT_STATE_CAP};

const EXIT_CODES: &str = "\
Exit status:
  0  verdict YES or UNKNOWN, or the requested output was written
  1  verdict NO
  2  malformed arguments or input files (one line `error: <kind>: <detail>` on stderr)
  3  a resource cap was exhausted before an answer was found

Words on the command line are space-separated generator names, with a
trailing ' for inverses and 1 for the empty word, e.g. \"a a' b\".";

#[derive(Parser, Debug)]
#[command(
    name = "munnkit",
    version,
    about = "Word problems in free inverse monoids over compressed words"
)]
#[command(after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest Munn tree built from a compressed word.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,

    /// Longest word ever materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_DECOMPRESS_CAP)]
    decompress_cap: u64,

    /// Most states explored by the loop searches.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,

    /// Saturation radius for closures (default: derived from the input).
    #[arg(long, global = true)]
    radius: Option<usize>,

    /// Length bound on covering loops (default: the pumping bound).
    #[arg(long, global = true)]
    loop_bound: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free reduction of a word or program.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Do two programs denote the same word?
    SlpEq(Pair),
    /// Equality in the free group.
    FgEq(Pair),
    /// Equality in the free inverse monoid.
    WpFim(Pair),
    /// Equality in the free inverse monoid of rank one.
    WpFim1(Pair),
    /// Equality modulo an idempotent presentation.
    WpFimP {
        #[arg(long)]
        presentation: PathBuf,
        #[command(flatten)]
        pair: Pair,
    },
    /// Membership in the rational subset accepted by an automaton.
    RatMember {
        #[arg(long)]
        nfa: PathBuf,
        #[command(flatten)]
        input: Input,
        /// Write a witness word of the language here when one exists.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Graphviz rendering of the Munn tree.
    MunnDot {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closure of a Munn tree under a presentation, or a membership query
    /// against it.
    Closure {
        #[arg(long)]
        presentation: PathBuf,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        member: Member,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate reduction instances.
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Two programs equal in the free inverse monoid iff ∀x∃y u·x + v·y = t.
    Pi2p {
        #[arg(long, value_delimiter = ',')]
        u: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        v: Vec<u64>,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        out_a: PathBuf,
        #[arg(long)]
        out_b: PathBuf,
    },
    /// A presentation and two words, equal iff the automaton accepts x ⊗ y.
    IdemPspace {
        #[command(flatten)]
        run: DfaRun,
        #[arg(long)]
        out_presentation: PathBuf,
        #[arg(long)]
        out_lhs: PathBuf,
        #[arg(long)]
        out_rhs: PathBuf,
    },
    /// An automaton for K* and a word in it iff the automaton accepts x ⊗ y.
    RatPspace {
        #[command(flatten)]
        run: DfaRun,
        #[arg(long)]
        out_nfa: PathBuf,
        #[arg(long)]
        out_word: PathBuf,
    },
}

#[derive(Args, Debug)]
struct DfaRun {
    /// Automaton reading convolutions.
    #[arg(long)]
    dfa: PathBuf,
    /// First component, letters of the first alphabet.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Second component, letters of the second alphabet.
    #[arg(long, allow_hyphen_values = true)]
    y: String,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Program file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Plain word.
    #[arg(long)]
    word: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct Member {
    /// Program whose Munn tree is tested for membership in the closure.
    #[arg(long)]
    member: Option<PathBuf>,
    #[arg(long)]
    member_word: Option<String>,
}

#[derive(Args, Debug)]
struct Pair {
    #[command(flatten)]
    lhs: Lhs,
    #[command(flatten)]
    rhs: Rhs,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Lhs {
    #[arg(long)]
    lhs: Option<PathBuf>,
    #[arg(long)]
    lhs_word: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Rhs {
    #[arg(long)]
    rhs: Option<PathBuf>,
    #[arg(long)]
    rhs_word: Option<String>,
}

enum Operand {
    File(PathBuf),
    Word(String),
}

fn operand(file: &Option<PathBuf>, word: &Option<String>) -> Operand {
    match (file, word) {
        (Some(f), _) => Operand::File(f.clone()),
        (None, Some(w)) => Operand::Word(w.clone()),
        // clap enforces that one of the two is present
        (None, None) => unreachable!("argument group is required"),
    }
}

impl Input {
    fn operand(&self) -> Operand {
        operand(&self.input, &self.word)
    }
}

impl Pair {
    fn operands(&self) -> [Operand; 2] {
        [
            operand(&self.lhs.lhs, &self.lhs.lhs_word),
            operand(&self.rhs.rhs, &self.rhs.rhs_word),
        ]
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loads the operands over one common alphabet: the names of `base` first,
/// then new names in order of appearance.
fn load(ops: &[Operand], base: Option<&Alphabet>) -> Result<(Alphabet, Vec<Slp>)> {
    let mut names: Vec<String> = base.map(|a| a.names().to_vec()).unwrap_or_default();
    let mut add = |al: &Alphabet| {
        for n in al.names() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    };
    let mut files = Vec::new();
    for op in ops {
        match op {
            Operand::File(p) => {
                let s = parse_slp(&read(p)?, None)?;
                add(s.alphabet());
                files.push(Some(s));
            }
            Operand::Word(w) => {
                add(&Alphabet::infer(w)?);
                files.push(None);
            }
        }
    }
    let al = Alphabet::new(&names)?;
    let slps = ops
        .iter()
        .zip(files)
        .map(|(op, f)| match (op, f) {
            (_, Some(s)) => s.embed(&al),
            (Operand::Word(w), None) => Ok(Slp::literal(&al, &al.parse_word(w)?)),
            (Operand::File(_), None) => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((al, slps))
}

/// The presentation over a possibly larger alphabet.
fn widen(p: &IdempotentPresentation, al: &Alphabet) -> Result<IdempotentPresentation> {
    if p.alphabet().same_as(al) {
        return Ok(p.clone());
    }
    let relators = p
        .relators()
        .iter()
        .map(|(e, f)| {
            let re = |w: &Word| al.parse_word(&p.alphabet().format_word(w));
            Ok((re(e)?, re(f)?))
        })
        .collect::<Result<Vec<_>>>()?;
    IdempotentPresentation::new_normalized(al, relators)
}

fn load_presentation(path: &Path) -> Result<IdempotentPresentation> {
    IdempotentPresentation::parse(&read(path)?, None)
}

enum Outcome {
    Verdict(Verdict),
    Done,
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<Outcome> {
    match path {
        Some(p) => write(p, text)?,
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(Outcome::Done)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let caps = Caps {
        node_cap: cli.node_cap,
        decompress_cap: cli.decompress_cap,
        state_cap: cli.state_cap,
    };
    let pair = |p: &Pair| -> Result<(Slp, Slp)> {
        let (_, mut v) = load(&p.operands(), None)?;
        let b = v.pop().unwrap();
        Ok((v.pop().unwrap(), b))
    };
    let verdict = |b: bool| Ok(Outcome::Verdict(b.into()));
    match &cli.command {
        Command::Reduce { input, out: path } => match input.operand() {
            Operand::Word(w) => {
                let al = Alphabet::infer(&w)?;
                let r = reduce(&al.parse_word(&w)?);
                emit(out, path, &format!("{}\n", al.format_word(&r)))
            }
            op @ Operand::File(_) => {
                let (_, v) = load(&[op], None)?;
                emit(out, path, &reduced_slp(&v[0]).to_text())
            }
        },
        Command::SlpEq(p) => {
            let (a, b) = pair(p)?;
            verdict(a.equal(&b)?)
        }
        Command::FgEq(p) => {
            let (a, b) = pair(p)?;
            verdict(fg_equal(&a, &b)?)
        }
        Command::WpFim(p) => {
            let (a, b) = pair(p)?;
            verdict(fim_equal_compressed(&a, &b, &caps)?)
        }
        Command::WpFim1(p) => {
            let (a, b) = pair(p)?;
            verdict(rank_one_equal(&a, &b)?)
        }
        Command::WpFimP { presentation, pair } => {
            let pres = load_presentation(presentation)?;
            let (al, v) = load(&pair.operands(), Some(pres.alphabet()))?;
            let pres = widen(&pres, &al)?;
            let v = wp_mod_p_compressed(&v[0], &v[1], &pres, &caps, cli.radius)?;
            Ok(Outcome::Verdict(v))
        }
        Command::RatMember { nfa, input, witness } => {
            let a = WordNFA::parse(&read(nfa)?, None)?;
            let (al, v) = load(&[input.operand()], Some(&a.alphabet))?;
            let a = a.embed(&al)?;
            let m = rat_member_slp(&v[0], &a, &caps, cli.loop_bound)?;
            if let (Some(path), Some(w)) = (witness, &m.witness) {
                write(path, &format!("{}\n", al.format_word(w)))?;
            }
            let _ = writeln!(err, "pumping bound {}", m.bound);
            verdict(m.holds())
        }
        Command::MunnDot { input, out: path } => {
            let (al, v) = load(&[input.operand()], None)?;
            let t = munn_tree_streamed(&v[0], caps.node_cap)?;
            emit(out, path, &to_dot(&t, &al))
        }
        Command::Closure {
            presentation,
            input,
            member,
            out: path,
        } => {
            let pres = load_presentation(presentation)?;
            let mut ops = vec![input.operand()];
            if member.member.is_some() || member.member_word.is_some() {
                ops.push(operand(&member.member, &member.member_word));
            }
            let (al, v) = load(&ops, Some(pres.alphabet()))?;
            let pres = widen(&pres, &al)?;
            let seed = munn_tree_streamed(&v[0], caps.node_cap)?.tree;
            let radius = cli.radius.unwrap_or_else(|| default_radius(&seed, &pres));
            if let Some(m) = v.get(1) {
                let x = munn_tree_streamed(m, caps.node_cap)?.tree;
                return Ok(Outcome::Verdict(closure_contains(&x, &seed, &pres, radius)));
            }
            let cl = saturate(&seed, &pres, radius);
            let _ = writeln!(err, "radius {radius}, saturated: {}", cl.saturated);
            let text: String = cl
                .nodes
                .iter()
                .map(|w| format!("{}\n", al.format_word(w)))
                .collect();
            emit(out, path, &text)
        }
        Command::Gen(g) => generate(g),
    }
}

fn generate(g: &Gen) -> Result<Outcome> {
    match g {
        Gen::Pi2p {
            u,
            v,
            t,
            out_a,
            out_b,
        } => {
            let inst = SubsetSumInstance::new(u.clone(), v.clone(), *t)?;
            let (a, b) = gen_pi2p(&inst)?;
            write(out_a, &a.to_text())?;
            write(out_b, &b.to_text())?;
        }
        Gen::IdemPspace {
            run,
            out_presentation,
            out_lhs,
            out_rhs,
        } => {
            let (dfa, x, y) = run.load()?;
            let fx = gen_idempotent_pspace(&dfa, &x, &y)?;
            write(out_presentation, &fx.presentation.to_text())?;
            write(out_lhs, &Slp::literal(&fx.alphabet, &fx.w).to_text())?;
            write(out_rhs, &Slp::literal(&fx.alphabet, &fx.w_prime).to_text())?;
        }
        Gen::RatPspace {
            run,
            out_nfa,
            out_word,
        } => {
            let (dfa, x, y) = run.load()?;
            let fx = gen_rational_pspace(&dfa, &x, &y)?;
            write(out_nfa, &fx.nfa.to_text())?;
            write(out_word, &Slp::literal(&fx.alphabet, &fx.w).to_text())?;
        }
    }
    Ok(Outcome::Done)
}

impl DfaRun {
    fn load(&self) -> Result<(ConvolutionDFA, Vec<usize>, Vec<usize>)> {
        let dfa = ConvolutionDFA::parse(&read(&self.dfa)?)?;
        let x = dfa.parse_sigma_word(&self.x)?;
        let y = dfa.parse_theta_word(&self.y)?;
        Ok((dfa, x, y))
    }
}

/// Runs one invocation and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(Outcome::Verdict(v)) => {
            let _ = writeln!(out, "{v}");
            if v == Verdict::No {
                1
            } else {
                0
            }
        }
        Ok(Outcome::Done) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.kind(), e.to_string().replace('\n', " "));
            if e.is_cap() {
                3
            } else {
                2
            }
        }
    }
}
