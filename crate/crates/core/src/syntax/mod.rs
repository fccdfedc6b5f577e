//! Formulas, q-sentences and signatures.

mod parse;
mod prop;
mod transform;

pub use parse::{parse_formula, parse_signature, Parsed, SyntaxError};
pub use prop::{propositionalize, PropFormula, PropVar};
pub use transform::{
    e_coerce, f_coerce, relativize, to_nnf, to_prenex, validity_convert, TransformError,
};

use crate::rat::{fmt_rational, in_unit_interval, Rational};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }
    pub fn cst(s: &str) -> Term {
        Term::Const(s.to_string())
    }
    pub fn name(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Short constructors used by the builders and tests.
pub mod build {
    use super::{Formula, Term};

    pub fn atom(p: &str, args: &[Term]) -> Formula {
        Formula::Atom(p.to_string(), args.to_vec())
    }
    pub fn app(p: &str, vars: &[&str]) -> Formula {
        Formula::Atom(p.to_string(), vars.iter().map(|v| Term::var(v)).collect())
    }
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Equal(a, b)
    }
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(fs: Vec<Formula>) -> Formula {
        Formula::And(fs)
    }
    pub fn or(fs: Vec<Formula>) -> Formula {
        Formula::Or(fs)
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }
    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }
    pub fn foralls(xs: &[&str], f: Formula) -> Formula {
        xs.iter().rev().fold(f, |acc, x| forall(x, acc))
    }
    pub fn xor(a: Formula, b: Formula) -> Formula {
        not(iff(a, b))
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<String>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::Atom(_, ts) => ts.iter().for_each(|t| term(t, bound)),
            Formula::Equal(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().for_each(|g| g.collect_free(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                bound.push(x.clone());
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Equal(..) => true,
            Formula::Not(g) => g.is_quantifier_free(),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().all(|g| g.is_quantifier_free()),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Leading quantifier chain and the body under it.
    pub fn split_prefix(&self) -> (Vec<(bool, &str)>, &Formula) {
        let mut out = Vec::new();
        let mut f = self;
        loop {
            match f {
                Formula::Forall(x, g) => {
                    out.push((true, x.as_str()));
                    f = g;
                }
                Formula::Exists(x, g) => {
                    out.push((false, x.as_str()));
                    f = g;
                }
                _ => return (out, f),
            }
        }
    }

    pub fn is_prenex(&self) -> bool {
        self.split_prefix().1.is_quantifier_free()
    }

    pub fn contains_equality(&self) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Equal(..) => true,
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => {
                g.contains_equality()
            }
            Formula::And(gs) | Formula::Or(gs) => gs.iter().any(|g| g.contains_equality()),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.contains_equality() || b.contains_equality()
            }
        }
    }

    /// Every identifier occurring anywhere (variables, constants, binders).
    pub fn names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, ts) => out.extend(ts.iter().map(|t| t.name().to_string())),
            Formula::Equal(a, b) => {
                out.insert(a.name().to_string());
                out.insert(b.name().to_string());
            }
            Formula::Not(g) => g.names(out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.names(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.names(out);
                b.names(out);
            }
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                out.insert(x.clone());
                g.names(out);
            }
        }
    }

    pub fn constants(&self, out: &mut BTreeSet<String>) {
        let mut t = |x: &Term| {
            if let Term::Const(c) = x {
                out.insert(c.clone());
            }
        };
        match self {
            Formula::Atom(_, ts) => ts.iter().for_each(&mut t),
            Formula::Equal(a, b) => {
                t(a);
                t(b);
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.constants(out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.constants(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.constants(out);
                b.constants(out);
            }
        }
    }

    /// Replaces free occurrences of variable `from` by `to`.
    pub fn substitute(&self, from: &str, to: &Term) -> Formula {
        let st = |t: &Term| match t {
            Term::Var(v) if v == from => to.clone(),
            _ => t.clone(),
        };
        match self {
            Formula::Atom(p, ts) => Formula::Atom(p.clone(), ts.iter().map(st).collect()),
            Formula::Equal(a, b) => Formula::Equal(st(a), st(b)),
            Formula::Not(g) => Formula::Not(Box::new(g.substitute(from, to))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.substitute(from, to)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.substitute(from, to)).collect()),
            Formula::Implies(a, b) => Formula::Implies(
                Box::new(a.substitute(from, to)),
                Box::new(b.substitute(from, to)),
            ),
            Formula::Iff(a, b) => Formula::Iff(
                Box::new(a.substitute(from, to)),
                Box::new(b.substitute(from, to)),
            ),
            Formula::Forall(x, _) | Formula::Exists(x, _) if x == from => self.clone(),
            Formula::Forall(x, g) => Formula::Forall(x.clone(), Box::new(g.substitute(from, to))),
            Formula::Exists(x, g) => Formula::Exists(x.clone(), Box::new(g.substitute(from, to))),
        }
    }

    /// Quantifier nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Equal(..) => 0,
            Formula::Not(g) => g.depth(),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().map(|g| g.depth()).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.depth().max(b.depth()),
            Formula::Forall(_, g) | Formula::Exists(_, g) => 1 + g.depth(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, gs: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for g in gs {
        write!(f, " {g}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, ts) => {
                write!(f, "({p}")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
            Formula::Equal(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) => write_list(f, "and", gs),
            Formula::Or(gs) => write_list(f, "or", gs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Forall(x, g) => write!(f, "(forall {x} {g})"),
            Formula::Exists(x, g) => write!(f, "(exists {x} {g})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuantifierKind {
    Exists,
    Forall,
    WeakAtLeast(Rational),
    StrongGreater(Rational),
}

impl QuantifierKind {
    pub fn threshold(&self) -> Option<&Rational> {
        match self {
            QuantifierKind::WeakAtLeast(r) | QuantifierKind::StrongGreater(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for QuantifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantifierKind::Exists => f.write_str("exists"),
            QuantifierKind::Forall => f.write_str("forall"),
            QuantifierKind::WeakAtLeast(r) => write!(f, "qgeq {}", fmt_rational(r)),
            QuantifierKind::StrongGreater(r) => write!(f, "qgt {}", fmt_rational(r)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QSentenceError {
    #[error("matrix contains a quantifier")]
    MatrixNotQuantifierFree,
    #[error("variable `{0}` is free in the matrix but not bound by the prefix")]
    UnboundVariable(String),
    #[error("prefix binds `{0}` twice")]
    DuplicateVariable(String),
    #[error("threshold {0} outside [0,1]")]
    ThresholdRange(String),
}

/// A prenex sentence whose prefix may mix classical and threshold quantifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSentence {
    pub prefix: Vec<(QuantifierKind, String)>,
    pub matrix: Formula,
}

impl QSentence {
    pub fn new(
        prefix: Vec<(QuantifierKind, String)>,
        matrix: Formula,
    ) -> Result<QSentence, QSentenceError> {
        if !matrix.is_quantifier_free() {
            return Err(QSentenceError::MatrixNotQuantifierFree);
        }
        let mut seen = BTreeSet::new();
        for (k, x) in &prefix {
            if !seen.insert(x.clone()) {
                return Err(QSentenceError::DuplicateVariable(x.clone()));
            }
            if let Some(r) = k.threshold() {
                if !in_unit_interval(r) {
                    return Err(QSentenceError::ThresholdRange(fmt_rational(r)));
                }
            }
        }
        if let Some(v) = matrix.free_vars().into_iter().find(|v| !seen.contains(v)) {
            return Err(QSentenceError::UnboundVariable(v));
        }
        Ok(QSentence { prefix, matrix })
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn kinds(&self) -> Vec<QuantifierKind> {
        self.prefix.iter().map(|(k, _)| k.clone()).collect()
    }

    /// qE: only `Exists` and weak thresholds.
    pub fn is_qe(&self) -> bool {
        self.prefix.iter().all(|(k, _)| {
            matches!(k, QuantifierKind::Exists | QuantifierKind::WeakAtLeast(_))
        })
    }

    /// qF: only `Forall` and strong thresholds.
    pub fn is_qf(&self) -> bool {
        self.prefix.iter().all(|(k, _)| {
            matches!(k, QuantifierKind::Forall | QuantifierKind::StrongGreater(_))
        })
    }

    /// Both sentences hold at once iff this one does. Variables of `other`
    /// are renamed away from those of `self`.
    pub fn conjoin(&self, other: &QSentence) -> QSentence {
        let mut used = BTreeSet::new();
        self.matrix.names(&mut used);
        other.matrix.names(&mut used);
        for (_, x) in self.prefix.iter().chain(&other.prefix) {
            used.insert(x.clone());
        }
        let mut taken: BTreeSet<String> = self.prefix.iter().map(|(_, x)| x.clone()).collect();
        let mut matrix2 = other.matrix.clone();
        let mut prefix = self.prefix.clone();
        for (k, x) in &other.prefix {
            let name = if taken.contains(x) {
                let fresh = fresh_name(x, &used);
                used.insert(fresh.clone());
                matrix2 = matrix2.substitute(x, &Term::Var(fresh.clone()));
                fresh
            } else {
                x.clone()
            };
            taken.insert(name.clone());
            prefix.push((k.clone(), name));
        }
        QSentence { prefix, matrix: Formula::And(vec![self.matrix.clone(), matrix2]) }
    }
}

pub fn conjoin_qsentences(a: &QSentence, b: &QSentence) -> QSentence {
    a.conjoin(b)
}

/// Smallest `base_k` (k ≥ 1) not in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|c| !used.contains(c))
        .expect("unbounded search")
}

impl fmt::Display for QSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in &self.prefix {
            write!(f, "({k} {x} ")?;
        }
        write!(f, "{}", self.matrix)?;
        for _ in &self.prefix {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("predicate `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("`{0}` is not an identifier")]
    BadName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    predicates: Vec<(String, usize)>,
    constants: Vec<String>,
    equality: bool,
}

pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Signature {
    pub fn new(
        predicates: Vec<(String, usize)>,
        constants: Vec<String>,
        equality: bool,
    ) -> Result<Signature, SignatureError> {
        let mut seen = BTreeSet::new();
        for (p, a) in &predicates {
            if !is_identifier(p) {
                return Err(SignatureError::BadName(p.clone()));
            }
            if *a == 0 {
                return Err(SignatureError::ZeroArity(p.clone()));
            }
            if !seen.insert(p.clone()) {
                return Err(SignatureError::Duplicate(p.clone()));
            }
        }
        for c in &constants {
            if !is_identifier(c) {
                return Err(SignatureError::BadName(c.clone()));
            }
            if !seen.insert(c.clone()) {
                return Err(SignatureError::Duplicate(c.clone()));
            }
        }
        Ok(Signature { predicates, constants, equality })
    }

    /// Unary predicates only; panics on bad names, meant for literals.
    pub fn monadic(names: &[&str]) -> Signature {
        Signature::new(names.iter().map(|n| (n.to_string(), 1)).collect(), vec![], false)
            .expect("valid monadic signature")
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn has_equality(&self) -> bool {
        self.equality
    }

    pub fn with_equality(mut self, on: bool) -> Signature {
        self.equality = on;
        self
    }

    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.predicates.iter().find(|(p, _)| p == pred).map(|(_, a)| *a)
    }

    pub fn pred_index(&self, pred: &str) -> Option<usize> {
        self.predicates.iter().position(|(p, _)| p == pred)
    }

    pub fn const_index(&self, c: &str) -> Option<usize> {
        self.constants.iter().position(|x| x == c)
    }

    pub fn is_constant(&self, c: &str) -> bool {
        self.const_index(c).is_some()
    }

    pub fn is_monadic_relational(&self) -> bool {
        !self.equality && self.constants.is_empty() && self.predicates.iter().all(|(_, a)| *a == 1)
    }

    /// Signature file text.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, a) in &self.predicates {
            s.push_str(&format!("pred {p} {a}\n"));
        }
        for c in &self.constants {
            s.push_str(&format!("const {c}\n"));
        }
        if self.equality {
            s.push_str("equality\n");
        }
        s
    }

    /// Checks arity and declaration of every symbol in `f`.
    pub fn check(&self, f: &Formula) -> Result<(), String> {
        let term = |t: &Term| match t {
            Term::Const(c) if !self.is_constant(c) => Err(format!("undeclared constant `{c}`")),
            _ => Ok(()),
        };
        match f {
            Formula::Atom(p, ts) => match self.arity(p) {
                None => Err(format!("undeclared predicate `{p}`")),
                Some(a) if a != ts.len() => {
                    Err(format!("`{p}` has arity {a} but is applied to {} terms", ts.len()))
                }
                Some(_) => ts.iter().try_for_each(term),
            },
            Formula::Equal(a, b) => {
                if !self.equality {
                    return Err("equality is not declared in the signature".into());
                }
                term(a)?;
                term(b)
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => self.check(g),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| self.check(g)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check(a)?;
                self.check(b)
            }
        }
    }
}
