#![allow(dead_code)]

use epsilogic::model::FiniteModel;
use epsilogic::rat::{int, rat, Rational};
use epsilogic::syntax::{Formula, QSentence, QuantifierKind, Signature, Term};
use proptest::prelude::*;

pub mod fm;
pub mod machines;
pub mod pool;
pub mod trees;
use std::collections::{BTreeMap, BTreeSet};

pub fn sig() -> Signature {
    Signature::new(
        vec![("P".into(), 1), ("Q".into(), 1), ("R".into(), 2)],
        vec!["c".into()],
        true,
    )
    .unwrap()
}

pub fn eps_grid() -> Vec<Rational> {
    vec![int(0), rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(3, 4), int(1)]
}

fn term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    let vs: Vec<Term> = vars.iter().map(|v| Term::var(v)).collect();
    prop_oneof![4 => proptest::sample::select(vs), 1 => Just(Term::cst("c"))]
}

fn atom(vars: &'static [&'static str], equality: bool) -> BoxedStrategy<Formula> {
    let p = term(vars).prop_map(|t| Formula::Atom("P".into(), vec![t]));
    let q = term(vars).prop_map(|t| Formula::Atom("Q".into(), vec![t]));
    let r = (term(vars), term(vars)).prop_map(|(a, b)| Formula::Atom("R".into(), vec![a, b]));
    if equality {
        let e = (term(vars), term(vars)).prop_map(|(a, b)| Formula::Equal(a, b));
        prop_oneof![3 => p, 2 => q, 3 => r, 1 => e].boxed()
    } else {
        prop_oneof![3 => p, 2 => q, 3 => r].boxed()
    }
}

const VARS: &[&str] = &["x", "y", "z"];

/// Formulas over P/1, Q/1, R/2, constant `c` and equality, quantifier depth ≤ `depth`.
pub fn formula(depth: u32) -> BoxedStrategy<Formula> {
    let leaf = atom(VARS, true);
    leaf.prop_recursive(depth * 2 + 1, 24, 3, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
            (proptest::sample::select(VARS), inner.clone()).prop_map(|(x, f)| Formula::Forall(x.into(), Box::new(f))),
            (proptest::sample::select(VARS), inner).prop_map(|(x, f)| Formula::Exists(x.into(), Box::new(f))),
        ]
    })
    .prop_filter("depth bound", move |f| f.depth() <= depth as usize)
    .boxed()
}

/// Closes the free variables of `f` with the given quantifier choices.
pub fn close(f: Formula, universal: &[bool]) -> Formula {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    free.iter().enumerate().rev().fold(f, |acc, (i, x)| {
        if universal.get(i).copied().unwrap_or(true) {
            Formula::Forall(x.clone(), Box::new(acc))
        } else {
            Formula::Exists(x.clone(), Box::new(acc))
        }
    })
}

pub fn sentence(depth: u32) -> BoxedStrategy<Formula> {
    (formula(depth), proptest::collection::vec(any::<bool>(), 3))
        .prop_map(|(f, u)| close(f, &u))
        .prop_filter("depth bound", move |f| f.depth() <= depth as usize)
        .boxed()
}

/// Models over [`sig`] with at most `max_n` elements; weights may be zero.
pub fn model(max_n: usize) -> BoxedStrategy<FiniteModel> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(0u32..=4, n),
                proptest::collection::vec(any::<bool>(), n + n + n * n),
                0..n,
            )
        })
        .prop_filter("some positive weight", |(_, w, _, _)| w.iter().any(|&x| x > 0))
        .prop_map(|(n, w, bits, c)| build_model(&sig(), n, &w, &bits, &[c]))
        .boxed()
}

/// Models with strictly positive weights.
pub fn positive_model(max_n: usize) -> BoxedStrategy<FiniteModel> {
    model(max_n).prop_filter("positive", |m| m.measure.iter().all(|w| *w > int(0))).boxed()
}

pub fn build_model(sig: &Signature, n: usize, weights: &[u32], bits: &[bool], consts: &[usize]) -> FiniteModel {
    let total: u32 = weights.iter().sum();
    let mut relations = BTreeMap::new();
    let mut k = 0;
    for (p, a) in sig.predicates() {
        let mut set = BTreeSet::new();
        let count = n.pow(*a as u32);
        for idx in 0..count {
            if bits[k + idx] {
                let mut t = vec![0; *a];
                let mut r = idx;
                for s in t.iter_mut().rev() {
                    *s = r % n;
                    r /= n;
                }
                set.insert(t);
            }
        }
        k += count;
        relations.insert(p.clone(), set);
    }
    FiniteModel::new(
        sig.clone(),
        (1..=n).map(|i| format!("e{i}")).collect(),
        relations,
        sig.constants().iter().cloned().zip(consts.iter().copied()).collect(),
        weights.iter().map(|&w| rat(w as i64, total as i64)).collect(),
    )
    .unwrap()
}

pub fn kind() -> impl Strategy<Value = QuantifierKind> {
    let grid = vec![int(0), rat(1, 4), rat(1, 3), rat(1, 2), rat(3, 4), int(1)];
    prop_oneof![
        Just(QuantifierKind::Exists),
        Just(QuantifierKind::Forall),
        proptest::sample::select(grid.clone()).prop_map(QuantifierKind::WeakAtLeast),
        proptest::sample::select(grid).prop_map(QuantifierKind::StrongGreater),
    ]
}

const QVARS: &[&str] = &["x1", "x2", "x3"];

fn matrix_over(vars: &'static [&'static str]) -> BoxedStrategy<Formula> {
    atom(vars, true)
        .prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
                proptest::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
                proptest::collection::vec(inner, 2..=3).prop_map(Formula::Or),
            ]
        })
        .boxed()
}

/// q-sentences with up to `max_len` prefix entries.
pub fn qsentence(max_len: usize) -> BoxedStrategy<QSentence> {
    (0..=max_len)
        .prop_flat_map(|len| {
            let vars: &'static [&'static str] = &QVARS[..len.max(1)];
            (proptest::collection::vec(kind(), len), matrix_over(vars))
        })
        .prop_map(|(kinds, matrix)| {
            let prefix: Vec<(QuantifierKind, String)> =
                kinds.into_iter().enumerate().map(|(i, k)| (k, QVARS[i].to_string())).collect();
            let bound: BTreeSet<String> = prefix.iter().map(|(_, x)| x.clone()).collect();
            let mut matrix = matrix;
            for v in matrix.free_vars() {
                if !bound.contains(&v) {
                    matrix = matrix.substitute(&v, &Term::cst("c"));
                }
            }
            QSentence::new(prefix, matrix).unwrap()
        })
        .boxed()
}
