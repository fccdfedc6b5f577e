mod common;

use common::pool::*;
use epsilogic::decide::{decide_zero, semi_decide_finite_sat, Mode, SemiOptions, Verdict, ZeroProblem};
use epsilogic::rat::int;
use epsilogic::semantics::{e_holds, f_holds};
use epsilogic::syntax::build;
use proptest::prelude::*;

#[test]
fn zero_pool_agrees_with_enumeration() {
    let sig = pool_sig(true);
    let pool = sentence_pool(7, 200, true, 2);
    let mut sat = 0;
    for f in &pool {
        if zero_agrees_with_semi(&sig, f, 2).unwrap() == Verdict::Satisfiable {
            sat += 1;
        }
    }
    // zero masses make most sentences satisfiable; both directions still occur
    assert!(sat > 0 && sat < 200, "{sat} of 200 satisfiable");
}

#[test]
fn unary_pool_agrees_exactly() {
    let sig = pool_sig(false);
    for f in sentence_pool(11, 200, false, 4) {
        zero_matches_semi_exactly(&sig, &f, 2).unwrap();
    }
}

#[test]
fn monadic_family_matches_grid() {
    let grid = monadic_grid(3, 8);
    let n = monadic_cross_check(&grid).unwrap();
    assert!(n > 2000, "{n}");
}

#[test]
fn zero_examples() {
    let sig = pool_sig(false);
    let p = |x: &str| build::app("P", &[x]);
    let excluded_middle = build::forall("x", build::or(vec![p("x"), build::not(p("x"))]));
    assert_eq!(decide_zero(&sig, &excluded_middle, ZeroProblem::FValidity).unwrap().verdict, Verdict::Valid);

    let some = build::exists("x", p("x"));
    let out = decide_zero(&sig, &some, ZeroProblem::FValidity).unwrap();
    assert_eq!(out.verdict, Verdict::Invalid);
    let c = out.counter.unwrap();
    assert_eq!(c.size(), 1);
    assert!(c.relations["P"].is_empty());
    assert!(!f_holds(&c, &some, &int(0)).unwrap());

    let para = build::exists("x", build::forall("y", build::and(vec![p("x"), build::not(p("y"))])));
    let out = decide_zero(&sig, &para, ZeroProblem::ESatisfiability).unwrap();
    assert_eq!(out.verdict, Verdict::Satisfiable);
    let semi = semi_decide_finite_sat(&sig, &para, &int(0), Mode::E, SemiOptions::new(6)).unwrap();
    let w = semi.witness.unwrap();
    assert!(w.measure.iter().any(|m| *m == int(0)));
    assert!(e_holds(&w, &para, &int(0)).unwrap());
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(200))]

    /// A valid verdict holds on every model; a countermodel refutes.
    #[test]
    fn zero_verdicts_are_sound(f in pool_sentence(true, 3), m in pool_model(3)) {
        let sig = pool_sig(true);
        let out = decide_zero(&sig, &f, ZeroProblem::FValidity).unwrap();
        if out.verdict == Verdict::Valid {
            prop_assert!(f_holds(&m, &f, &int(0)).unwrap());
        } else {
            let c = out.counter.expect("invalid verdicts carry a countermodel");
            prop_assert!(!f_holds(&c, &f, &int(0)).unwrap());
        }
    }

    /// E-satisfiability at 0 is the negation of F-validity of the negation.
    #[test]
    fn zero_duality(f in pool_sentence(true, 3)) {
        let sig = pool_sig(true);
        let sat = decide_zero(&sig, &f, ZeroProblem::ESatisfiability).unwrap().verdict == Verdict::Satisfiable;
        let valid = decide_zero(&sig, &build::not(f), ZeroProblem::FValidity).unwrap().verdict == Verdict::Valid;
        prop_assert_eq!(sat, !valid);
    }
}
