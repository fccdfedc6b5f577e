//! Direct, unoptimized readings of the three truth definitions. Slow but
//! simple enough to audit; used to cross-check the compiled evaluator.

use crate::model::FiniteModel;
use crate::rat::Rational;
use crate::syntax::{Formula, QSentence, QuantifierKind, Term};
use num_traits::{One, Zero};
use std::collections::HashMap;

type Env = HashMap<String, usize>;

fn val(m: &FiniteModel, t: &Term, env: &Env) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => m.constants[c],
    }
}

fn mass_where(m: &FiniteModel, x: &str, env: &mut Env, mut pred: impl FnMut(&mut Env) -> bool) -> (Rational, usize) {
    let saved = env.get(x).copied();
    let mut mass = Rational::zero();
    let mut count = 0;
    for a in 0..m.size() {
        env.insert(x.to_string(), a);
        if pred(env) {
            mass += &m.measure[a];
            count += 1;
        }
    }
    match saved {
        Some(v) => env.insert(x.to_string(), v),
        None => env.remove(x),
    };
    (mass, count)
}

/// εE truth, walking the formula with negation handled case by case.
pub fn eval_e(m: &FiniteModel, f: &Formula, eps: &Rational, env: &mut Env) -> bool {
    ev(m, f, eps, env, true, true)
}

/// εF truth.
pub fn eval_f(m: &FiniteModel, f: &Formula, eps: &Rational, env: &mut Env) -> bool {
    ev(m, f, eps, env, true, false)
}

/// `pos` tracks negation parity; `e_mode` selects which quantifier is
/// read through the measure.
fn ev(m: &FiniteModel, f: &Formula, eps: &Rational, env: &mut Env, pos: bool, e_mode: bool) -> bool {
    match f {
        Formula::Atom(p, ts) => {
            let args: Vec<usize> = ts.iter().map(|t| val(m, t, env)).collect();
            m.holds(p, &args) == pos
        }
        Formula::Equal(a, b) => (val(m, a, env) == val(m, b, env)) == pos,
        Formula::Not(g) => ev(m, g, eps, env, !pos, e_mode),
        Formula::And(gs) | Formula::Or(gs) => {
            let conj = matches!(f, Formula::And(_)) == pos;
            if conj {
                gs.iter().all(|g| ev(m, g, eps, env, pos, e_mode))
            } else {
                gs.iter().any(|g| ev(m, g, eps, env, pos, e_mode))
            }
        }
        Formula::Implies(a, b) => {
            let rewritten = Formula::Or(vec![Formula::Not(a.clone()), (**b).clone()]);
            ev(m, &rewritten, eps, env, pos, e_mode)
        }
        Formula::Iff(a, b) => {
            let rewritten = Formula::And(vec![
                Formula::Implies(a.clone(), b.clone()),
                Formula::Implies(b.clone(), a.clone()),
            ]);
            ev(m, &rewritten, eps, env, pos, e_mode)
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let universal = matches!(f, Formula::Forall(..)) == pos;
            let (mass, count) = mass_where(m, x, env, |e| ev(m, g, eps, e, pos, e_mode));
            match (universal, e_mode) {
                (true, true) => mass >= Rational::one() - eps,
                (true, false) => count == m.size(),
                (false, true) => count > 0,
                (false, false) => mass > *eps,
            }
        }
    }
}

/// q-truth by recursion on the prefix.
pub fn eval_q(m: &FiniteModel, q: &QSentence, env: &mut Env) -> bool {
    evq(m, &q.prefix, &q.matrix, env)
}

fn evq(m: &FiniteModel, prefix: &[(QuantifierKind, String)], matrix: &Formula, env: &mut Env) -> bool {
    let Some(((k, x), rest)) = prefix.split_first() else {
        return ev(m, matrix, &Rational::zero(), env, true, true);
    };
    let (mass, count) = mass_where(m, x, env, |e| evq(m, rest, matrix, e));
    match k {
        QuantifierKind::Exists => count > 0,
        QuantifierKind::Forall => count == m.size(),
        QuantifierKind::WeakAtLeast(t) => mass >= *t,
        QuantifierKind::StrongGreater(t) => mass > *t,
    }
}
