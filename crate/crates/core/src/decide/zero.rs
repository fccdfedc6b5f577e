//! ε = 0: F-validity by reduction to propositional tautologies, and
//! E-satisfiability by duality.

use super::{taut_check, Assignment, Certificate, DecideError, DecisionOutcome, Taut, Verdict};
use crate::model::FiniteModel;
use crate::rat::{int, Rational};
use crate::semantics::{e_holds, f_holds};
use crate::syntax::{
    propositionalize, to_prenex, validity_convert, Formula, Signature, Term, TransformError,
};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroProblem {
    FValidity,
    ESatisfiability,
    CountableFValidity,
    CountableESatisfiability,
}

/// Finite and countable variants share one code path and so always agree.
pub fn decide_zero(sig: &Signature, f: &Formula, problem: ZeroProblem) -> Result<DecisionOutcome, DecideError> {
    sig.check(f).map_err(|e| DecideError::Semantics(crate::semantics::SemanticsError::Signature(e)))?;
    if f.contains_equality() {
        return Err(DecideError::Equality);
    }
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(TransformError::FreeVariables(free.into_iter().collect::<Vec<_>>().join(", ")).into());
    }
    match problem {
        ZeroProblem::FValidity | ZeroProblem::CountableFValidity => f_validity(sig, f),
        ZeroProblem::ESatisfiability | ZeroProblem::CountableESatisfiability => e_satisfiability(sig, f),
    }
}

fn f_validity(sig: &Signature, f: &Formula) -> Result<DecisionOutcome, DecideError> {
    let converted = validity_convert(&to_prenex(f))?;
    match taut_check(&propositionalize(&converted)?)? {
        Taut::Tautology => Ok(DecisionOutcome::bare(Verdict::Valid)),
        Taut::Falsified(a) => {
            let counter = countermodel(sig, &converted, &a);
            let zero = Rational::zero();
            let counter = counter.filter(|m| !f_holds(m, f, &zero).unwrap_or(true));
            Ok(DecisionOutcome {
                verdict: Verdict::Invalid,
                witness: None,
                counter,
                certificate: Some(Certificate::Assignment(a)),
            })
        }
    }
}

fn e_satisfiability(sig: &Signature, f: &Formula) -> Result<DecisionOutcome, DecideError> {
    let neg = Formula::Not(Box::new(f.clone()));
    let out = f_validity(sig, &neg)?;
    Ok(match out.verdict {
        Verdict::Valid => DecisionOutcome { verdict: Verdict::Unsatisfiable, ..out },
        _ => {
            // a model refuting ¬φ under F satisfies φ under E
            let witness = out.counter.filter(|m| e_holds(m, f, &int(0)).unwrap_or(false));
            DecisionOutcome { verdict: Verdict::Satisfiable, witness, counter: None, certificate: out.certificate }
        }
    })
}

/// One element per variable of the converted prefix and per constant, the
/// first (the fresh `y`) carrying all the mass; relations read off `a`.
fn countermodel(sig: &Signature, converted: &Formula, a: &Assignment) -> Option<FiniteModel> {
    let (prefix, matrix) = converted.split_prefix();
    let mut names: Vec<String> = prefix.iter().map(|(_, x)| x.to_string()).collect();
    let mut consts = BTreeSet::new();
    matrix.constants(&mut consts);
    names.extend(consts.iter().cloned());
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> =
        sig.predicates().iter().map(|(p, _)| (p.clone(), BTreeSet::new())).collect();
    for (v, &on) in a {
        if on {
            let tuple = v.args.iter().map(|t: &Term| index[t.name()]).collect();
            relations.get_mut(&v.pred)?.insert(tuple);
        }
    }
    let constants = sig
        .constants()
        .iter()
        .map(|c| (c.clone(), index.get(c.as_str()).copied().unwrap_or(0)))
        .collect();
    let mut measure = vec![Rational::zero(); names.len()];
    measure[0] = Rational::one();
    FiniteModel::new(sig.clone(), names, relations, constants, measure).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;

    fn p() -> Signature {
        Signature::monadic(&["P"])
    }

    #[test]
    fn excluded_middle_is_valid() {
        let f = forall("x", or(vec![app("P", &["x"]), not(app("P", &["x"]))]));
        assert_eq!(decide_zero(&p(), &f, ZeroProblem::FValidity).unwrap().verdict, Verdict::Valid);
    }

    #[test]
    fn existential_has_point_countermodel() {
        let f = exists("x", app("P", &["x"]));
        let out = decide_zero(&p(), &f, ZeroProblem::FValidity).unwrap();
        assert_eq!(out.verdict, Verdict::Invalid);
        let m = out.counter.unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.relations["P"].is_empty());
        assert_eq!(m.measure, vec![int(1)]);
        assert!(!f_holds(&m, &f, &int(0)).unwrap());
    }

    #[test]
    fn paraconsistent_sentence_is_satisfiable() {
        let f = exists("x", forall("y", and(vec![app("P", &["x"]), not(app("P", &["y"]))])));
        let out = decide_zero(&p(), &f, ZeroProblem::ESatisfiability).unwrap();
        assert_eq!(out.verdict, Verdict::Satisfiable);
        let w = out.witness.unwrap();
        assert!(e_holds(&w, &f, &int(0)).unwrap());
        assert!(w.measure.iter().any(Zero::is_zero));
    }

    #[test]
    fn countable_variants_match() {
        let fs = [
            exists("x", app("P", &["x"])),
            forall("x", app("P", &["x"])),
            exists("x", forall("y", and(vec![app("P", &["x"]), not(app("P", &["y"]))]))),
        ];
        for f in &fs {
            assert_eq!(
                decide_zero(&p(), f, ZeroProblem::FValidity).unwrap(),
                decide_zero(&p(), f, ZeroProblem::CountableFValidity).unwrap()
            );
            assert_eq!(
                decide_zero(&p(), f, ZeroProblem::ESatisfiability).unwrap(),
                decide_zero(&p(), f, ZeroProblem::CountableESatisfiability).unwrap()
            );
        }
    }

    #[test]
    fn rejects_equality_and_open_formulas() {
        let sig = p().with_equality(true);
        let f = forall("x", eq(Term::var("x"), Term::var("x")));
        assert_eq!(decide_zero(&sig, &f, ZeroProblem::FValidity), Err(DecideError::Equality));
        assert!(decide_zero(&p(), &app("P", &["x"]), ZeroProblem::FValidity).is_err());
    }
}
