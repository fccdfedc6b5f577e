//! The halting encoding: vocabulary, axiom groups and their coercions.

use super::{Move, TuringMachine};
use crate::rat::{int, rat, Rational};
use crate::syntax::build::*;
use crate::syntax::{e_coerce, Formula, QSentence, QuantifierKind, Signature, Term};

/// Which satisfaction threshold a part is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    /// Coerced at ε = 0: every ∀ needs mass 1.
    Zero,
    /// The pair pinning the mass of `minc`'s class to 1/4.
    Forcing,
    /// Coerced at ε = 1/2.
    Half,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub name: String,
    pub group: Group,
    pub q: QSentence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMEncoding {
    pub sig: Signature,
    pub parts: Vec<Part>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Adds `(∀x ¬lt(x,x))^N` to the order axioms. Off by default.
    pub strict_order_axiom: bool,
}

pub(crate) fn state_pred(q: &str) -> String {
    format!("S_{q}")
}

pub(crate) fn signature(tm: &TuringMachine) -> Signature {
    let mut preds: Vec<(String, usize)> =
        vec![("N".into(), 1), ("eq".into(), 2), ("lt".into(), 2), ("R".into(), 2), ("T".into(), 2), ("H".into(), 2)];
    preds.extend(tm.states.iter().map(|q| (state_pred(q), 1)));
    Signature::new(preds, vec!["minc".into(), "maxc".into()], false).expect("encoding vocabulary is well-formed")
}

fn v(x: &str) -> Term {
    Term::var(x)
}

fn c(x: &str) -> Term {
    Term::cst(x)
}

fn a2(p: &str, x: Term, y: Term) -> Formula {
    atom(p, &[x, y])
}

fn a1(p: &str, x: Term) -> Formula {
    atom(p, &[x])
}

/// `later ≻ earlier`: `later` is the immediate successor of `earlier`.
pub fn succ(later: &str, earlier: &str) -> Formula {
    let (l, e) = (v(later), v(earlier));
    and(vec![
        a2("lt", e.clone(), l.clone()),
        forall("s", iff(a2("lt", v("s"), l.clone()), or(vec![a2("lt", v("s"), e.clone()), a2("eq", v("s"), e.clone())]))),
        forall("s", iff(a2("lt", e, v("s")), or(vec![a2("lt", l.clone(), v("s")), a2("eq", l, v("s"))]))),
    ])
}

/// Guards every quantifier with `N`.
fn rel_n(f: &Formula) -> Formula {
    let guard = |x: &str| a1("N", v(x));
    match f {
        Formula::Forall(x, g) => forall(x, implies(guard(x), rel_n(g))),
        Formula::Exists(x, g) => exists(x, and(vec![guard(x), rel_n(g)])),
        Formula::Not(g) => not(rel_n(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(rel_n).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(rel_n).collect()),
        Formula::Implies(a, b) => implies(rel_n(a), rel_n(b)),
        Formula::Iff(a, b) => iff(rel_n(a), rel_n(b)),
        other => other.clone(),
    }
}

/// `φ(t+1)`: `∀t1 (t1 ≻ t → φ(t1))`, relativized by the caller.
fn at_next(t: &str, phi: impl Fn(&str) -> Formula) -> Formula {
    forall("t1", implies(succ("t1", t), phi("t1")))
}

fn tape(p: Term, t: Term, symbol: u8) -> Formula {
    let f = a2("T", p, t);
    if symbol == 1 {
        f
    } else {
        not(f)
    }
}

fn transition(q: &str, w: u8, q2: &str, w2: u8, mv: Move) -> Formula {
    let cond = and(vec![a1(&state_pred(q), v("t")), a2("H", v("p"), v("t")), tape(v("p"), v("t"), w)]);
    let state = at_next("t", |t1| a1(&state_pred(q2), v(t1)));
    let step = |from: &str, to: &str| {
        forall(
            "p1",
            forall("t1", implies(and(vec![succ(from, to), succ("t1", "t")]), a2("H", v("p1"), v("t1")))),
        )
    };
    let head = match mv {
        Move::R => step("p1", "p"),
        Move::L => and(vec![
            implies(a2("eq", v("p"), c("minc")), at_next("t", |t1| a2("H", v("p"), v(t1)))),
            implies(not(a2("eq", v("p"), c("minc"))), step("p", "p1")),
        ]),
    };
    let write = at_next("t", |t1| tape(v("p"), v(t1), w2));
    let moved = match mv {
        Move::R => succ("p1", "p"),
        Move::L => succ("p", "p1"),
    };
    let locality = forall(
        "p1",
        implies(
            and(vec![not(a2("eq", v("p1"), v("p"))), not(moved)]),
            iff(a2("T", v("p1"), v("t")), at_next("t", |t1| a2("T", v("p1"), v(t1)))),
        ),
    );
    rel_n(&foralls(&["p", "t"], implies(cond, and(vec![state, head, write, locality]))))
}

/// First-order sentences of the ε = 0 group, named.
pub(crate) fn zero_group(tm: &TuringMachine, sig: &Signature, opts: EncodeOptions) -> Vec<(String, Formula)> {
    let mut out: Vec<(String, Formula)> = Vec::new();
    let eqv = |x: &str, y: &str| a2("eq", v(x), v(y));
    out.push(("eq reflexive".into(), forall("x", eqv("x", "x"))));
    out.push(("eq symmetric".into(), foralls(&["x", "y"], implies(eqv("x", "y"), eqv("y", "x")))));
    out.push((
        "eq transitive".into(),
        foralls(&["x", "y", "z"], implies(and(vec![eqv("x", "y"), eqv("y", "z")]), eqv("x", "z"))),
    ));
    for (p, arity) in sig.predicates() {
        for i in 0..*arity {
            let xs: Vec<String> = (1..=*arity).map(|k| format!("x{k}")).collect();
            let before: Vec<Term> = xs.iter().map(|x| v(x)).collect();
            let mut after = before.clone();
            after[i] = v("y");
            let mut vars: Vec<&str> = xs.iter().map(String::as_str).collect();
            vars.push("y");
            let body = implies(and(vec![atom(p, &before), eqv(&xs[i], "y")]), atom(p, &after));
            out.push((format!("indiscernible {p}@{}", i + 1), foralls(&vars, body)));
        }
    }
    let lt = |x: Term, y: Term| a2("lt", x, y);
    out.push((
        "order total".into(),
        rel_n(&foralls(&["x", "y"], or(vec![eqv("x", "y"), lt(v("x"), v("y")), lt(v("y"), v("x"))]))),
    ));
    out.push((
        "order asymmetric".into(),
        rel_n(&foralls(
            &["x", "y"],
            implies(not(eqv("x", "y")), iff(lt(v("x"), v("y")), not(lt(v("y"), v("x"))))),
        )),
    ));
    out.push((
        "order transitive".into(),
        rel_n(&foralls(
            &["x", "y", "z"],
            implies(and(vec![lt(v("x"), v("y")), lt(v("y"), v("z"))]), lt(v("x"), v("z"))),
        )),
    ));
    if opts.strict_order_axiom {
        out.push(("order irreflexive".into(), rel_n(&forall("x", not(lt(v("x"), v("x")))))));
    }
    out.push(("min max in N".into(), and(vec![a1("N", c("minc")), a1("N", c("maxc"))])));
    out.push((
        "min is least".into(),
        rel_n(&forall("x", or(vec![a2("eq", v("x"), c("minc")), lt(c("minc"), v("x"))]))),
    ));
    out.push((
        "max is greatest".into(),
        rel_n(&forall("x", or(vec![a2("eq", v("x"), c("maxc")), lt(v("x"), c("maxc"))]))),
    ));
    out.push(("init state".into(), a1(&state_pred(&tm.init), c("minc"))));
    out.push(("init head".into(), forall("p", iff(a2("eq", v("p"), c("minc")), a2("H", v("p"), c("minc"))))));
    out.push(("init tape".into(), rel_n(&forall("p", not(a2("T", v("p"), c("minc")))))));
    let some = or(tm.states.iter().map(|q| a1(&state_pred(q), v("t"))).collect());
    let mut excl = Vec::new();
    for (i, q) in tm.states.iter().enumerate() {
        for q2 in &tm.states[i + 1..] {
            excl.push(not(and(vec![a1(&state_pred(q), v("t")), a1(&state_pred(q2), v("t"))])));
        }
    }
    let mut unique = vec![some];
    unique.extend(excl);
    out.push(("unique state".into(), rel_n(&forall("t", and(unique)))));
    for ((q, w), (q2, w2, mv)) in &tm.delta {
        out.push((format!("transition {q} {w}"), transition(q, *w, q2, *w2, *mv)));
    }
    let halting: Vec<Formula> = tm
        .states
        .iter()
        .filter(|q| tm.is_halting(q))
        .map(|q| a1(&state_pred(q), c("maxc")))
        .collect();
    out.push(("halts at max".into(), or(halting)));
    out.push(("padding outside N".into(), foralls(&["x", "y"], implies(a2("R", v("x"), v("y")), not(a1("N", v("y")))))));
    out
}

/// `Pr_y[ψ] = 1/2` as `∀y ψ ∧ ∀y ¬ψ`, read at ε = 1/2.
fn half(psi: Formula) -> Formula {
    and(vec![forall("y", psi.clone()), forall("y", not(psi))])
}

pub(crate) fn half_group() -> Vec<(String, Formula)> {
    let in_n = |phi: Formula| forall("x", and(vec![a1("N", v("x")), phi]));
    let not_max = |phi: Formula| or(vec![a2("eq", v("x"), c("maxc")), phi]);
    vec![
        ("N has mass 1/2".into(), and(vec![forall("x", a1("N", v("x"))), forall("x", not(a1("N", v("x"))))])),
        (
            "tail mass".into(),
            in_n(not_max(half(or(vec![
                a2("R", v("x"), v("y")),
                and(vec![a1("N", v("y")), a2("lt", v("x"), v("y"))]),
            ])))),
        ),
        (
            "point mass".into(),
            in_n(not_max(half(or(vec![a2("R", v("x"), v("y")), a2("eq", v("x"), v("y"))])))),
        ),
    ]
}

pub fn encode_tm(tm: &TuringMachine) -> TMEncoding {
    encode_tm_with(tm, EncodeOptions::default())
}

pub fn encode_tm_with(tm: &TuringMachine, opts: EncodeOptions) -> TMEncoding {
    let sig = signature(tm);
    let mut parts = Vec::new();
    for (name, f) in zero_group(tm, &sig, opts) {
        let q = e_coerce(&f, &int(0)).expect("encoding sentences are closed");
        parts.push(Part { name, group: Group::Zero, q });
    }
    let minc_class = |neg: bool| {
        let f = a2("eq", v("x"), c("minc"));
        if neg {
            not(f)
        } else {
            f
        }
    };
    let forcing: [(&str, Rational, bool); 2] =
        [("minc class at least 1/4", rat(1, 4), false), ("rest at least 3/4", rat(3, 4), true)];
    for (name, t, neg) in forcing {
        let q = QSentence::new(vec![(QuantifierKind::WeakAtLeast(t), "x".into())], minc_class(neg))
            .expect("forcing sentence is well-formed");
        parts.push(Part { name: name.into(), group: Group::Forcing, q });
    }
    for (name, f) in half_group() {
        let q = e_coerce(&f, &rat(1, 2)).expect("encoding sentences are closed");
        parts.push(Part { name, group: Group::Half, q });
    }
    TMEncoding { sig, parts }
}
