//! Finite satisfiability by enumerating models of bounded weight.

use super::{DecideError, DecisionOutcome, Mode, Verdict};
use crate::model::{enumerate_models_with, EnumOptions, FiniteModel};
use crate::rat::{fmt_rational, in_unit_interval, Rational};
use crate::semantics::{compile_e, compile_f, e_holds, f_holds, ModelView};
use crate::syntax::{Formula, Signature};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiOptions {
    /// Largest weight total `‖t‖`.
    pub budget: u64,
    pub max_size: usize,
    /// Worker threads; 1 evaluates sequentially.
    pub jobs: usize,
}

impl SemiOptions {
    pub fn new(budget: u64) -> SemiOptions {
        SemiOptions { budget, max_size: budget.max(3) as usize, jobs: 1 }
    }
}

const BATCH: usize = 256;

/// The first model in enumeration order (weight total, size, weights,
/// relations, constants) on which `f` holds. Zero masses are included.
pub fn semi_decide_finite_sat(
    sig: &Signature,
    f: &Formula,
    eps: &Rational,
    mode: Mode,
    opts: SemiOptions,
) -> Result<DecisionOutcome, DecideError> {
    if opts.budget == 0 {
        return Err(DecideError::Budget);
    }
    if !in_unit_interval(eps) {
        return Err(DecideError::Epsilon(fmt_rational(eps)));
    }
    let c = match mode {
        Mode::E => compile_e(sig, f, eps, &[])?,
        Mode::F => compile_f(sig, f, eps, &[])?,
    };
    let holds = |m: &FiniteModel| c.holds_in(&ModelView::new(m));
    let mut models = enumerate_models_with(
        sig,
        EnumOptions { max_size: opts.max_size, max_denominator: opts.budget, zero_masses: true },
    );
    let found = if opts.jobs <= 1 {
        models.find(|m| holds(m))
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| loop {
            let batch: Vec<FiniteModel> = models.by_ref().take(BATCH).collect();
            if batch.is_empty() {
                break None;
            }
            // lowest index in the batch wins, so the answer matches the
            // sequential order
            if let Some(m) = batch.into_par_iter().find_first(|m| holds(m)) {
                break Some(m);
            }
        })
    };
    let Some(w) = found else {
        return Ok(DecisionOutcome::bare(Verdict::BudgetExhausted));
    };
    let ok = match mode {
        Mode::E => e_holds(&w, f, eps)?,
        Mode::F => f_holds(&w, f, eps)?,
    };
    if !ok {
        return Err(DecideError::Unverified);
    }
    Ok(DecisionOutcome { verdict: Verdict::Satisfiable, witness: Some(w), counter: None, certificate: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::syntax::build::*;
    use crate::syntax::Term;

    #[test]
    fn singleton_found_first() {
        let sig = Signature::new(vec![], vec![], true).unwrap();
        let f = exists("x", forall("y", eq(Term::var("x"), Term::var("y"))));
        let out = semi_decide_finite_sat(&sig, &f, &rat(1, 2), Mode::E, SemiOptions::new(2)).unwrap();
        assert_eq!(out.verdict, Verdict::Satisfiable);
        assert_eq!(out.witness.unwrap().measure, vec![int(1)]);
    }

    #[test]
    fn contradiction_exhausts() {
        let sig = Signature::new(vec![("P".into(), 1)], vec!["c".into()], false).unwrap();
        let f = and(vec![atom("P", &[Term::cst("c")]), not(atom("P", &[Term::cst("c")]))]);
        for b in 1..=3 {
            let out = semi_decide_finite_sat(&sig, &f, &rat(1, 2), Mode::E, SemiOptions::new(b)).unwrap();
            assert_eq!(out.verdict, Verdict::BudgetExhausted);
        }
    }

    #[test]
    fn uniform_pair_under_f() {
        let sig = Signature::new(vec![], vec![], true).unwrap();
        let f = forall("x", exists("y", not(eq(Term::var("x"), Term::var("y")))));
        let out = semi_decide_finite_sat(&sig, &f, &rat(1, 3), Mode::F, SemiOptions::new(3)).unwrap();
        assert_eq!(out.witness.unwrap().measure, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn parallel_matches_sequential() {
        let sig = Signature::new(vec![("R".into(), 2)], vec![], false).unwrap();
        let f = forall("x", exists("y", and(vec![app("R", &["x", "y"]), not(app("R", &["y", "x"]))])));
        let seq = semi_decide_finite_sat(&sig, &f, &rat(1, 4), Mode::E, SemiOptions::new(4)).unwrap();
        let par = semi_decide_finite_sat(&sig, &f, &rat(1, 4), Mode::E, SemiOptions { jobs: 4, ..SemiOptions::new(4) }).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.verdict, Verdict::Satisfiable);
    }
}
