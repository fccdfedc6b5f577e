//! Dispatch from parsed arguments to the library, producing the report text
//! and exit code.

use crate::{Cli, Command, CorpusAction, Format, Problem, Reading, Semantics, SentenceArgs};
use epsilogic::corpus::{self, CorpusEntry};
use epsilogic::decide::{
    decide_monadic, decide_monadic_coerced, decide_zero, semi_decide_finite_sat, Certificate, DecideError,
    DecisionOutcome, Mode, SemiOptions, Verdict, ZeroProblem,
};
use epsilogic::encode::{encode_tm_with, witness_model, EncodeOptions, Group, Simulation, TmError, TuringMachine};
use epsilogic::model::{parse_model, quotient_monadic, FiniteModel};
use epsilogic::rat::{fmt_rational, Rational};
use epsilogic::semantics::{e_holds, f_holds, find_qtree, q_holds, verify_qtree, SemanticsError};
use epsilogic::syntax::{e_coerce, f_coerce, parse_formula, parse_signature, Formula, Parsed, QSentence, Signature, SyntaxError};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{path}:{pos}: {msg}")]
    InputAt { path: String, pos: String, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

pub struct Output {
    pub text: String,
    pub code: u8,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: show(path), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: show(path), source })
}

fn input_error(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Input { path: show(path), msg: msg.to_string() }
}

fn at(path: &Path, pos: String, msg: impl std::fmt::Display) -> CliError {
    CliError::InputAt { path: show(path), pos, msg: msg.to_string() }
}

fn syntax_error(path: &Path, e: SyntaxError) -> CliError {
    at(path, format!("{}:{}", e.line, e.col), e.msg)
}

fn load_sig(path: &Path) -> Result<Signature, CliError> {
    parse_signature(&read(path)?).map_err(|e| syntax_error(path, e))
}

fn load_sentence(args: &SentenceArgs) -> Result<(Signature, Parsed), CliError> {
    let sig = load_sig(&args.sig)?;
    let parsed = parse_formula(&read(&args.formula)?, &sig).map_err(|e| syntax_error(&args.formula, e))?;
    Ok((sig, parsed))
}

fn load_model(path: &Path, sig: &Signature) -> Result<FiniteModel, CliError> {
    parse_model(&read(path)?, sig).map_err(|e| at(path, e.line.to_string(), e.msg))
}

fn plain(parsed: Parsed, path: &Path) -> Result<Formula, CliError> {
    match parsed {
        Parsed::Formula(f) => Ok(f),
        Parsed::QSentence(_) => usage(format!("--formula: {} holds a q-sentence; this command needs a plain formula", show(path))),
    }
}

/// What to do with the input: a q-sentence stands alone, any other formula
/// is read in a logic at a threshold.
enum Reads {
    Q(QSentence),
    Coerced(Formula, Mode, Rational),
}

fn reading(parsed: Parsed, r: &Reading) -> Result<Reads, CliError> {
    match parsed {
        Parsed::QSentence(q) => {
            if r.semantics.is_some() {
                return usage("--semantics: not allowed with a q-sentence");
            }
            if r.epsilon.is_some() {
                return usage("--epsilon: not allowed with a q-sentence");
            }
            Ok(Reads::Q(q))
        }
        Parsed::Formula(f) => match (r.semantics, r.epsilon.clone()) {
            (Some(s), Some(eps)) => Ok(Reads::Coerced(f, mode(s), eps)),
            (Some(_), None) => usage("--epsilon: required with --semantics"),
            (None, Some(_)) => usage("--epsilon: needs --semantics"),
            // a prenex formula without a reading is a q-sentence with classical kinds
            (None, None) => match Parsed::Formula(f).into_qsentence() {
                Some(q) => Ok(Reads::Q(q)),
                None => usage("--semantics: required for a formula that is not prenex"),
            },
        },
    }
}

fn mode(s: Semantics) -> Mode {
    match s {
        Semantics::E => Mode::E,
        Semantics::F => Mode::F,
    }
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Satisfiable | Verdict::Valid => 0,
        Verdict::Unsatisfiable | Verdict::Invalid => 1,
        Verdict::BudgetExhausted => 2,
    }
}

fn verdict_line(kind: &str, witness: Option<&Path>) -> String {
    format!("VERDICT kind={kind} witness={}\n", witness.map(show).unwrap_or_else(|| "-".into()))
}

fn reading_label(r: &Reads) -> String {
    match r {
        Reads::Q(_) => "q-sentence".into(),
        Reads::Coerced(_, m, eps) => format!("{m}, ε = {}", fmt_rational(eps)),
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Check { input, model, reading: r, witness } => check(fmt, input, model, r, witness.as_deref()),
        Command::DecideMonadic { input, reading: r, witness, tree } => {
            decide_monadic_cmd(fmt, input, r, witness.as_deref(), tree.as_deref())
        }
        Command::DecideZero { input, problem, witness } => decide_zero_cmd(fmt, input, *problem, witness.as_deref()),
        Command::EnumSat { input, semantics, epsilon, budget, max_size, jobs, witness } => {
            let (sig, parsed) = load_sentence(input)?;
            let f = plain(parsed, &input.formula)?;
            let mut opts = SemiOptions::new(*budget);
            if let Some(n) = max_size {
                if *n == 0 {
                    return usage("--max-size: must be at least 1");
                }
                opts.max_size = *n;
            }
            opts.jobs = *jobs as usize;
            let out = semi_decide_finite_sat(&sig, &f, epsilon, mode(*semantics), opts)?;
            let label = format!("{}, ε = {}, budget {}", mode(*semantics), fmt_rational(epsilon), budget);
            outcome_report(fmt, &label, out, witness.as_deref(), None)
        }
        Command::EncodeTm { tm, max_steps, verify, strict_order, witness, emit } => {
            encode_cmd(fmt, tm, *max_steps, *verify, *strict_order, witness.as_deref(), emit.as_deref())
        }
        Command::Quotient { sig, model, output } => {
            let sig = load_sig(sig)?;
            let m = load_model(model, &sig)?;
            let q = quotient_monadic(&m)
                .map_err(|_| input_error(model, "signature is not monadic relational"))?;
            match output {
                Some(p) => {
                    write(p, &q.to_text())?;
                    let text = match fmt {
                        Format::Text => format!("quotient with {} elements written to {}\n", q.size(), show(p)),
                        Format::Machine => format!("WROTE {}\n", show(p)),
                    };
                    Ok(Output { text, code: 0 })
                }
                None => Ok(Output { text: q.to_text(), code: 0 }),
            }
        }
        Command::Corpus { action } => corpus_cmd(fmt, action),
    }
}

fn check(fmt: Format, input: &SentenceArgs, model: &Path, r: &Reading, witness: Option<&Path>) -> Result<Output, CliError> {
    let (sig, parsed) = load_sentence(input)?;
    let reads = reading(parsed, r)?;
    let m = load_model(model, &sig)?;
    let (holds, q) = match &reads {
        Reads::Q(q) => (q_holds(&m, q)?, Some(q.clone())),
        Reads::Coerced(f, mode, eps) => {
            let holds = match mode {
                Mode::E => e_holds(&m, f, eps)?,
                Mode::F => f_holds(&m, f, eps)?,
            };
            let q = if witness.is_some() {
                match mode {
                    Mode::E => e_coerce(f, eps).ok(),
                    Mode::F => f_coerce(f, eps).ok(),
                }
            } else {
                None
            };
            (holds, q)
        }
    };
    // a tree is written only when it certifies the verdict
    let mut written = None;
    if let (true, Some(path), Some(q)) = (holds, witness, q) {
        if let Some(t) = find_qtree(&m, &q)? {
            if verify_qtree(&m, &q, &t).unwrap_or(false) {
                write(path, &t.to_text(&m.universe))?;
                written = Some(path);
            }
        }
    }
    let kind = if holds { "true" } else { "false" };
    let text = match fmt {
        Format::Machine => verdict_line(kind, written),
        Format::Text => {
            let mut s = format!("{kind} ({})\n", reading_label(&reads));
            if let Some(p) = written {
                let _ = writeln!(s, "witness tree written to {}", show(p));
            } else if holds && witness.is_some() {
                s.push_str("no witness tree for this reading\n");
            }
            s
        }
    };
    Ok(Output { text, code: if holds { 0 } else { 1 } })
}

fn decide_monadic_cmd(
    fmt: Format,
    input: &SentenceArgs,
    r: &Reading,
    witness: Option<&Path>,
    tree: Option<&Path>,
) -> Result<Output, CliError> {
    let (sig, parsed) = load_sentence(input)?;
    let reads = reading(parsed, r)?;
    let out = match &reads {
        Reads::Q(q) => decide_monadic(&sig, q)?,
        Reads::Coerced(f, mode, eps) => decide_monadic_coerced(&sig, f, *mode, eps)?,
    };
    outcome_report(fmt, &reading_label(&reads), out, witness, tree)
}

fn decide_zero_cmd(fmt: Format, input: &SentenceArgs, problem: Problem, witness: Option<&Path>) -> Result<Output, CliError> {
    let (sig, parsed) = load_sentence(input)?;
    let f = plain(parsed, &input.formula)?;
    let (p, label) = match problem {
        Problem::FValid => (ZeroProblem::FValidity, "0F-validity"),
        Problem::ESat => (ZeroProblem::ESatisfiability, "0E-satisfiability"),
        Problem::FValidCountable => (ZeroProblem::CountableFValidity, "countable 0F-validity"),
        Problem::ESatCountable => (ZeroProblem::CountableESatisfiability, "countable 0E-satisfiability"),
    };
    let out = decide_zero(&sig, &f, p)?;
    outcome_report(fmt, label, out, witness, None)
}

/// Writes the model (and tree) backing a verdict and renders the report.
fn outcome_report(
    fmt: Format,
    label: &str,
    out: DecisionOutcome,
    witness: Option<&Path>,
    tree: Option<&Path>,
) -> Result<Output, CliError> {
    let model = out.witness.as_ref().or(out.counter.as_ref());
    let mut written = None;
    if let (Some(path), Some(m)) = (witness, model) {
        write(path, &m.to_text())?;
        written = Some(path);
    }
    let mut tree_written = None;
    if let (Some(path), Some(Certificate::Tree(t)), Some(m)) = (tree, &out.certificate, model) {
        write(path, &t.to_text(&m.universe))?;
        tree_written = Some(path);
    }
    let kind = out.verdict.to_string();
    let text = match fmt {
        Format::Machine => {
            let mut s = verdict_line(&kind, written);
            if let Some(p) = tree_written {
                let _ = writeln!(s, "TREE {}", show(p));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{kind} ({label})\n");
            let what = if out.witness.is_some() { "witness" } else { "countermodel" };
            match (written, model) {
                (Some(p), _) => {
                    let _ = writeln!(s, "{what} written to {}", show(p));
                }
                (None, Some(m)) => {
                    let _ = write!(s, "{what}:\n{}", indent(&m.to_text()));
                }
                (None, None) => {}
            }
            if let Some(p) = tree_written {
                let _ = writeln!(s, "tree written to {}", show(p));
            }
            s
        }
    };
    Ok(Output { text, code: exit_code(out.verdict) })
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

fn group_name(g: Group) -> &'static str {
    match g {
        Group::Zero => "zero",
        Group::Forcing => "forcing",
        Group::Half => "half",
    }
}

fn encode_cmd(
    fmt: Format,
    tm_path: &Path,
    max_steps: usize,
    verify: bool,
    strict: bool,
    witness: Option<&Path>,
    emit: Option<&Path>,
) -> Result<Output, CliError> {
    let tm = TuringMachine::parse(&read(tm_path)?).map_err(|e| match e {
        TmError::Parse { line, msg } if line > 0 => at(tm_path, line.to_string(), msg),
        TmError::Parse { msg, .. } => input_error(tm_path, msg),
        e => input_error(tm_path, e),
    })?;
    let enc = encode_tm_with(&tm, EncodeOptions { strict_order_axiom: strict });
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: show(dir), source })?;
        write(&dir.join("encoding.sig"), &enc.sig.to_text())?;
        for (i, p) in enc.parts.iter().enumerate() {
            let body = format!("; {} ({})\n{}\n", p.name, group_name(p.group), p.q);
            write(&dir.join(format!("part-{:02}.sx", i + 1)), &body)?;
        }
    }
    let halt = match tm.simulate(max_steps) {
        Simulation::Halted { m, .. } => Some(m),
        Simulation::NotHalted => None,
    };
    let w = halt.and_then(|_| witness_model(&tm, max_steps));
    let mut written: Option<&Path> = None;
    if let (Some(path), Some(w)) = (witness, &w) {
        write(path, &w.to_text())?;
        written = Some(path);
    }
    let checks: Vec<Option<bool>> = match (&w, verify) {
        (Some(w), true) => enc.parts.iter().map(|p| q_holds(w, &p.q).map(Some)).collect::<Result<_, _>>()?,
        _ => vec![None; enc.parts.len()],
    };
    let (kind, code) = match (halt, verify) {
        (None, _) => ("budget_exhausted", 2),
        (Some(_), false) => ("halted", 0),
        (Some(_), true) if checks.iter().all(|c| *c == Some(true)) => ("verified", 0),
        (Some(_), true) => ("failed", 1),
    };
    let mut s = String::new();
    match fmt {
        Format::Machine => {
            s.push_str(&verdict_line(kind, written));
            if let Some(m) = halt {
                let _ = writeln!(s, "HALT m={m}");
            }
            for (i, (p, c)) in enc.parts.iter().zip(&checks).enumerate() {
                let holds = c.map(|b| format!(" holds={b}")).unwrap_or_default();
                let _ = writeln!(s, "PART index={} group={}{holds} name={}", i + 1, group_name(p.group), p.name);
            }
            if let Some(dir) = emit {
                let _ = writeln!(s, "EMIT {}", show(dir));
            }
        }
        Format::Text => {
            match halt {
                Some(m) => {
                    let _ = writeln!(s, "machine halts at time {m}");
                }
                None => {
                    let _ = writeln!(s, "machine does not halt within {max_steps} steps");
                }
            }
            let _ = writeln!(
                s,
                "encoding: {} parts over {} predicates",
                enc.parts.len(),
                enc.sig.predicates().len()
            );
            for (i, (p, c)) in enc.parts.iter().zip(&checks).enumerate() {
                let status = match c {
                    Some(true) => ": holds",
                    Some(false) => ": FAILS",
                    None => "",
                };
                let _ = writeln!(s, "  {:2} [{}] {}{status}", i + 1, group_name(p.group), p.name);
            }
            match kind {
                "verified" => {
                    let _ = writeln!(s, "verified: every part holds on the witness");
                }
                "failed" => {
                    let n = checks.iter().filter(|c| **c == Some(false)).count();
                    let _ = writeln!(s, "failed: {n} parts do not hold on the witness");
                }
                _ => {}
            }
            if let Some(p) = written {
                let _ = writeln!(s, "witness written to {}", show(p));
            }
            if let Some(dir) = emit {
                let _ = writeln!(s, "encoding written to {}", show(dir));
            }
        }
    }
    Ok(Output { text: s, code })
}

fn entry_files(e: &CorpusEntry) -> (String, String, Vec<String>) {
    let header = format!("; {} ({}-semantics)\n; {}\n", e.name, e.mode, e.note);
    let mut all = header.clone();
    if e.sentences.len() == 1 {
        let _ = writeln!(all, "{}", e.sentences[0]);
    } else {
        all.push_str("(and\n");
        for f in &e.sentences {
            let _ = writeln!(all, "  {f}");
        }
        all.push_str(")\n");
    }
    let each = e.sentences.iter().map(|f| format!("{header}{f}\n")).collect();
    (e.sig.to_text(), all, each)
}

fn corpus_cmd(fmt: Format, action: &CorpusAction) -> Result<Output, CliError> {
    match action {
        CorpusAction::List => Ok(Output { text: corpus::NAMES.iter().map(|n| format!("{n}\n")).collect(), code: 0 }),
        CorpusAction::Emit { name, s, tmax, out } => {
            let Some(e) = corpus::by_name(name, *s as usize, *tmax as usize) else {
                return usage(format!("unknown corpus entry `{name}`; try `corpus list`"));
            };
            let (sig, all, each) = entry_files(&e);
            let Some(dir) = out else {
                return Ok(Output { text: format!("{sig}\n{all}"), code: 0 });
            };
            fs::create_dir_all(dir).map_err(|source| CliError::Io { path: show(dir), source })?;
            let mut files: Vec<(PathBuf, &str)> =
                vec![(dir.join(format!("{name}.sig")), sig.as_str()), (dir.join(format!("{name}.sx")), all.as_str())];
            for (k, text) in each.iter().enumerate() {
                files.push((dir.join(format!("{name}-{}.sx", k + 1)), text));
            }
            for (path, text) in &files {
                write(path, text)?;
            }
            let text = match fmt {
                Format::Text => format!(
                    "{} sentence{} ({}-semantics) written to {}\n",
                    e.sentences.len(),
                    if e.sentences.len() == 1 { "" } else { "s" },
                    e.mode,
                    show(dir)
                ),
                Format::Machine => files.iter().map(|(p, _)| format!("WROTE {}\n", show(p))).collect(),
            };
            Ok(Output { text, code: 0 })
        }
    }
}
