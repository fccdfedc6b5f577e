//! Lowering of formulas to an index-based tree with quantifiers pushed as
//! far inward as the semantics allows.

use super::SemanticsError;
use crate::rat::{fmt_rational, in_unit_interval, Rational};
use crate::syntax::{to_nnf, Formula, QSentence, QuantifierKind, Signature, Term};
use num_traits::{One, Zero};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Arg {
    Var(usize),
    Const(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum QKind {
    Exists,
    Forall,
    /// Mass of the satisfying set must reach the model-specific target
    /// stored for this threshold index.
    Mass(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    Bool(bool),
    Lit { rel: usize, args: Vec<Arg>, pos: bool },
    Eq { a: Arg, b: Arg, pos: bool },
    And(Vec<Node>),
    Or(Vec<Node>),
    Quant { kind: QKind, var: usize, body: Box<Node> },
}

impl Node {
    pub(crate) fn mentions(&self, v: usize) -> bool {
        match self {
            Node::Bool(_) => false,
            Node::Lit { args, .. } => args.contains(&Arg::Var(v)),
            Node::Eq { a, b, .. } => *a == Arg::Var(v) || *b == Arg::Var(v),
            Node::And(gs) | Node::Or(gs) => gs.iter().any(|g| g.mentions(v)),
            Node::Quant { var, body, .. } => *var != v && body.mentions(v),
        }
    }

    pub(crate) fn size(&self) -> usize {
        match self {
            Node::Bool(_) | Node::Lit { .. } | Node::Eq { .. } => 1,
            Node::And(gs) | Node::Or(gs) => 1 + gs.iter().map(Node::size).sum::<usize>(),
            Node::Quant { body, .. } => 1 + body.size(),
        }
    }
}

pub(crate) fn and(parts: Vec<Node>) -> Node {
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            Node::Bool(true) => {}
            Node::Bool(false) => return Node::Bool(false),
            Node::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Bool(true),
        1 => out.pop().unwrap(),
        _ => Node::And(out),
    }
}

pub(crate) fn or(parts: Vec<Node>) -> Node {
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            Node::Bool(false) => {}
            Node::Bool(true) => return Node::Bool(true),
            Node::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Bool(false),
        1 => out.pop().unwrap(),
        _ => Node::Or(out),
    }
}

/// Quantifier over `body`, pushed inward.
///
/// `Q x (A ∧ B)` with `x` not in `A` is `A ∧ Q x B` whenever `Q x false` is
/// false, and dually `Q x (A ∨ B)` is `A ∨ Q x B` whenever `Q x true` holds.
/// Both hold for every kind except `qgeq 0` (always true) and `qgt 1`
/// (always false), which are folded to constants first.
pub(crate) fn quant(kind: QKind, always: Option<bool>, var: usize, body: Node) -> Node {
    if let Some(b) = always {
        return Node::Bool(b);
    }
    if !body.mentions(var) {
        return body;
    }
    match body {
        Node::And(parts) => {
            let (with, without): (Vec<Node>, Vec<Node>) = parts.into_iter().partition(|p| p.mentions(var));
            if !without.is_empty() {
                let mut out = without;
                out.push(quant(kind, None, var, and(with)));
                and(out)
            } else if kind == QKind::Forall {
                and(with.into_iter().map(|p| quant(kind, None, var, p)).collect())
            } else {
                Node::Quant { kind, var, body: Box::new(Node::And(with)) }
            }
        }
        Node::Or(parts) => {
            let (with, without): (Vec<Node>, Vec<Node>) = parts.into_iter().partition(|p| p.mentions(var));
            if !without.is_empty() {
                let mut out = without;
                out.push(quant(kind, None, var, or(with)));
                or(out)
            } else if kind == QKind::Exists {
                or(with.into_iter().map(|p| quant(kind, None, var, p)).collect())
            } else {
                Node::Quant { kind, var, body: Box::new(Node::Or(with)) }
            }
        }
        other => Node::Quant { kind, var, body: Box::new(other) },
    }
}

/// A formula lowered against a signature, ready to run on any model over
/// that signature.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub(crate) root: Node,
    pub(crate) nvars: usize,
    pub(crate) free: Vec<String>,
    /// `(θ, strict)`: weak thresholds need mass `≥ θ`, strict ones `> θ`.
    pub(crate) thresholds: Vec<(Rational, bool)>,
}

impl Compiled {
    /// Free variables in the order their values are expected.
    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn node_count(&self) -> usize {
        self.root.size()
    }
}

#[derive(Clone, Copy)]
pub(crate) enum Mode<'a> {
    E(&'a Rational),
    F(&'a Rational),
    Classical,
}

pub(crate) struct Lowering<'a> {
    sig: &'a Signature,
    scope: Vec<(String, usize)>,
    nvars: usize,
    thresholds: Vec<(Rational, bool)>,
}

impl<'a> Lowering<'a> {
    pub(crate) fn new(sig: &'a Signature, free: &[String]) -> Self {
        let scope = free.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Lowering { sig, scope, nvars: free.len(), thresholds: Vec::new() }
    }

    pub(crate) fn finish(self, root: Node, free: Vec<String>) -> Compiled {
        Compiled { root, nvars: self.nvars, free, thresholds: self.thresholds }
    }

    fn lookup(&self, x: &str) -> Result<usize, SemanticsError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, i)| *i)
            .ok_or_else(|| SemanticsError::Unbound(x.to_string()))
    }

    fn arg(&self, t: &Term) -> Result<Arg, SemanticsError> {
        match t {
            Term::Var(v) => self.lookup(v).map(Arg::Var),
            Term::Const(c) => self
                .sig
                .const_index(c)
                .map(Arg::Const)
                .ok_or_else(|| SemanticsError::Signature(format!("undeclared constant `{c}`"))),
        }
    }

    fn threshold(&mut self, theta: &Rational, strict: bool) -> usize {
        let key = (theta.clone(), strict);
        if let Some(i) = self.thresholds.iter().position(|t| *t == key) {
            return i;
        }
        self.thresholds.push(key);
        self.thresholds.len() - 1
    }

    /// Kind for the evaluator plus a constant when the quantifier is
    /// trivially decided.
    pub(crate) fn kind(&mut self, k: &QuantifierKind) -> (QKind, Option<bool>) {
        match k {
            QuantifierKind::Exists => (QKind::Exists, None),
            QuantifierKind::Forall => (QKind::Forall, None),
            QuantifierKind::WeakAtLeast(t) => {
                let i = self.threshold(t, false);
                (QKind::Mass(i), if t.is_zero() { Some(true) } else { None })
            }
            QuantifierKind::StrongGreater(t) => {
                let i = self.threshold(t, true);
                (QKind::Mass(i), if *t >= Rational::one() { Some(false) } else { None })
            }
        }
    }

    pub(crate) fn bind(&mut self, x: &str) -> usize {
        let v = self.nvars;
        self.nvars += 1;
        self.scope.push((x.to_string(), v));
        v
    }

    pub(crate) fn unbind(&mut self) {
        self.scope.pop();
    }

    /// Lowers an NNF formula.
    pub(crate) fn lower(&mut self, f: &Formula, mode: Mode<'_>) -> Result<Node, SemanticsError> {
        Ok(match f {
            Formula::Atom(p, ts) => self.atom(p, ts, true)?,
            Formula::Equal(a, b) => Node::Eq { a: self.arg(a)?, b: self.arg(b)?, pos: true },
            Formula::Not(g) => match &**g {
                Formula::Atom(p, ts) => self.atom(p, ts, false)?,
                Formula::Equal(a, b) => Node::Eq { a: self.arg(a)?, b: self.arg(b)?, pos: false },
                _ => unreachable!("input is in negation normal form"),
            },
            Formula::And(gs) => and(gs.iter().map(|g| self.lower(g, mode)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => or(gs.iter().map(|g| self.lower(g, mode)).collect::<Result<_, _>>()?),
            Formula::Implies(..) | Formula::Iff(..) => unreachable!("input is in negation normal form"),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let is_all = matches!(f, Formula::Forall(..));
                let qk = match (mode, is_all) {
                    (Mode::E(eps), true) => QuantifierKind::WeakAtLeast(Rational::one() - eps),
                    (Mode::F(eps), false) => QuantifierKind::StrongGreater(eps.clone()),
                    (_, true) => QuantifierKind::Forall,
                    (_, false) => QuantifierKind::Exists,
                };
                let (kind, always) = self.kind(&qk);
                let v = self.bind(x);
                let body = self.lower(g, mode);
                self.unbind();
                quant(kind, always, v, body?)
            }
        })
    }

    fn atom(&self, p: &str, ts: &[Term], pos: bool) -> Result<Node, SemanticsError> {
        let rel = self
            .sig
            .pred_index(p)
            .ok_or_else(|| SemanticsError::Signature(format!("undeclared predicate `{p}`")))?;
        let arity = self.sig.predicates()[rel].1;
        if arity != ts.len() {
            return Err(SemanticsError::Signature(format!(
                "`{p}` has arity {arity} but is applied to {} terms",
                ts.len()
            )));
        }
        let args = ts.iter().map(|t| self.arg(t)).collect::<Result<_, _>>()?;
        Ok(Node::Lit { rel, args, pos })
    }
}

fn check_eps(eps: &Rational) -> Result<(), SemanticsError> {
    if in_unit_interval(eps) {
        Ok(())
    } else {
        Err(SemanticsError::Epsilon(fmt_rational(eps)))
    }
}

fn compile_formula(
    sig: &Signature,
    f: &Formula,
    mode: Mode<'_>,
    free: Vec<String>,
) -> Result<Compiled, SemanticsError> {
    let g = to_nnf(f);
    let mut lw = Lowering::new(sig, &free);
    let root = lw.lower(&g, mode)?;
    Ok(lw.finish(root, free))
}

/// εE reading of `f`; `free` fixes the order of values for free variables.
pub fn compile_e(sig: &Signature, f: &Formula, eps: &Rational, free: &[String]) -> Result<Compiled, SemanticsError> {
    check_eps(eps)?;
    compile_formula(sig, f, Mode::E(eps), free.to_vec())
}

/// εF reading of `f`.
pub fn compile_f(sig: &Signature, f: &Formula, eps: &Rational, free: &[String]) -> Result<Compiled, SemanticsError> {
    check_eps(eps)?;
    compile_formula(sig, f, Mode::F(eps), free.to_vec())
}

/// Classical reading of `f`.
pub fn compile_classical(sig: &Signature, f: &Formula, free: &[String]) -> Result<Compiled, SemanticsError> {
    compile_formula(sig, f, Mode::Classical, free.to_vec())
}

/// A q-sentence, or the suffix of its prefix starting at `from` with the
/// earlier prefix variables free (in prefix order).
pub fn compile_q_suffix(
    sig: &Signature,
    q: &QSentence,
    from: usize,
    extra_free: &[String],
) -> Result<Compiled, SemanticsError> {
    let mut free: Vec<String> = extra_free.to_vec();
    free.extend(q.prefix[..from].iter().map(|(_, x)| x.clone()));
    let mut lw = Lowering::new(sig, &free);
    let matrix = to_nnf(&q.matrix);
    let mut binders = Vec::new();
    for (k, x) in &q.prefix[from..] {
        let (kind, always) = lw.kind(k);
        let v = lw.bind(x);
        binders.push((kind, always, v));
    }
    let mut node = lw.lower(&matrix, Mode::Classical)?;
    for (kind, always, v) in binders.into_iter().rev() {
        node = quant(kind, always, v, node);
    }
    Ok(lw.finish(node, free))
}

/// Map from free variable names to the value order `compiled.free_vars()`.
pub(crate) fn env_vector(c: &Compiled, env: &HashMap<String, usize>) -> Result<Vec<usize>, SemanticsError> {
    let mut out = vec![0; c.nvars.max(1)];
    for (i, x) in c.free.iter().enumerate() {
        out[i] = *env.get(x).ok_or_else(|| SemanticsError::Unbound(x.clone()))?;
    }
    Ok(out)
}
