//! εE-, εF- and q-truth on finite models, and q-tree witnesses.

mod compile;
mod engine;
mod partial;
mod qtree;
pub mod reference;

pub use compile::{compile_classical, compile_e, compile_f, compile_q_suffix, Compiled};
pub use engine::ModelView;
pub use partial::{PartialModel, Probe};
pub use qtree::{find_qtree, verify_qtree, wedge, Bran, QNode, QTree, TreeError};

use crate::model::FiniteModel;
use crate::rat::Rational;
use crate::syntax::{Formula, QSentence};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error("{0}")]
    Signature(String),
    #[error("ε = {0} is outside [0,1]")]
    Epsilon(String),
}

fn run(m: &FiniteModel, c: &Compiled, env: &HashMap<String, usize>) -> Result<bool, SemanticsError> {
    let values = compile::env_vector(c, env)?;
    Ok(c.holds(&ModelView::new(m), &values[..c.free_vars().len()]))
}

fn free_order(f: &Formula) -> Vec<String> {
    f.free_vars().into_iter().collect()
}

/// εE truth: `∀x ψ` holds when the set of `a` satisfying `ψ` has mass at
/// least `1 - ε`; everything else is classical on the negation normal form.
pub fn eval_e(m: &FiniteModel, f: &Formula, eps: &Rational, env: &HashMap<String, usize>) -> Result<bool, SemanticsError> {
    let c = compile_e(&m.sig, f, eps, &free_order(f))?;
    run(m, &c, env)
}

/// εF truth: `∃x ψ` holds when the satisfying set has mass greater than `ε`.
pub fn eval_f(m: &FiniteModel, f: &Formula, eps: &Rational, env: &HashMap<String, usize>) -> Result<bool, SemanticsError> {
    let c = compile_f(&m.sig, f, eps, &free_order(f))?;
    run(m, &c, env)
}

/// q-truth, judged on the maximal satisfying set at each prefix position.
pub fn eval_q(m: &FiniteModel, q: &QSentence, env: &HashMap<String, usize>) -> Result<bool, SemanticsError> {
    let extra: Vec<String> = env
        .keys()
        .filter(|x| !q.prefix.iter().any(|(_, y)| y == *x))
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let c = compile_q_suffix(&m.sig, q, 0, &extra)?;
    run(m, &c, env)
}

/// Sentences only; shorthand for the empty environment.
pub fn e_holds(m: &FiniteModel, f: &Formula, eps: &Rational) -> Result<bool, SemanticsError> {
    eval_e(m, f, eps, &HashMap::new())
}

pub fn f_holds(m: &FiniteModel, f: &Formula, eps: &Rational) -> Result<bool, SemanticsError> {
    eval_f(m, f, eps, &HashMap::new())
}

pub fn q_holds(m: &FiniteModel, q: &QSentence) -> Result<bool, SemanticsError> {
    eval_q(m, q, &HashMap::new())
}
