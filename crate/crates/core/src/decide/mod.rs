//! Decision procedures: ε = 0 validity and satisfiability, monadic
//! satisfiability for rational ε, and a bounded enumeration semi-decider.

mod monadic;
mod semi;
mod zero;

pub use monadic::{decide_monadic, decide_monadic_coerced};
pub use semi::{semi_decide_finite_sat, SemiOptions};
pub use zero::{decide_zero, ZeroProblem};

use crate::model::FiniteModel;
use crate::semantics::{QTree, SemanticsError};
use crate::syntax::{PropFormula, PropVar, TransformError};
use std::collections::BTreeMap;
use std::fmt;

/// Largest number of propositional variables the truth table accepts.
pub const TAUT_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    E,
    F,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::E => "E",
            Mode::F => "F",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Satisfiable,
    Unsatisfiable,
    Valid,
    Invalid,
    BudgetExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfiable => "satisfiable",
            Verdict::Unsatisfiable => "unsatisfiable",
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::BudgetExhausted => "budget_exhausted",
        })
    }
}

pub type Assignment = BTreeMap<PropVar, bool>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Tree(QTree),
    Assignment(Assignment),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOutcome {
    pub verdict: Verdict,
    /// A model on which the sentence holds.
    pub witness: Option<FiniteModel>,
    /// A model on which the sentence fails.
    pub counter: Option<FiniteModel>,
    pub certificate: Option<Certificate>,
}

impl DecisionOutcome {
    pub fn bare(verdict: Verdict) -> DecisionOutcome {
        DecisionOutcome { verdict, witness: None, counter: None, certificate: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("{0} propositional variables exceed the limit of {TAUT_LIMIT}")]
    TooManyVariables(usize),
    #[error("equality is not supported by this procedure")]
    Equality,
    #[error("signature is not monadic relational")]
    NotMonadic,
    #[error("{0} unary predicates exceed the monadic search limit of 4")]
    TooManyPredicates(usize),
    #[error("F-mode needs ε < 1")]
    EpsilonOne,
    #[error("ε = {0} is outside [0,1]")]
    Epsilon(String),
    #[error("budget must be at least 1")]
    Budget,
    #[error("internal: produced model failed re-verification")]
    Unverified,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Taut {
    Tautology,
    Falsified(Assignment),
}

enum Lit {
    Var(usize),
    Not(Box<Lit>),
    And(Vec<Lit>),
    Or(Vec<Lit>),
    Implies(Box<Lit>, Box<Lit>),
    Iff(Box<Lit>, Box<Lit>),
}

impl Lit {
    fn eval(&self, bits: u32) -> bool {
        match self {
            Lit::Var(i) => bits >> i & 1 == 1,
            Lit::Not(g) => !g.eval(bits),
            Lit::And(gs) => gs.iter().all(|g| g.eval(bits)),
            Lit::Or(gs) => gs.iter().any(|g| g.eval(bits)),
            Lit::Implies(a, b) => !a.eval(bits) || b.eval(bits),
            Lit::Iff(a, b) => a.eval(bits) == b.eval(bits),
        }
    }
}

fn index(p: &PropFormula, vars: &[PropVar]) -> Lit {
    let sub = |g: &PropFormula| Box::new(index(g, vars));
    match p {
        PropFormula::Var(v) => Lit::Var(vars.binary_search(v).expect("collected variable")),
        PropFormula::Not(g) => Lit::Not(sub(g)),
        PropFormula::And(gs) => Lit::And(gs.iter().map(|g| index(g, vars)).collect()),
        PropFormula::Or(gs) => Lit::Or(gs.iter().map(|g| index(g, vars)).collect()),
        PropFormula::Implies(a, b) => Lit::Implies(sub(a), sub(b)),
        PropFormula::Iff(a, b) => Lit::Iff(sub(a), sub(b)),
    }
}

/// Truth-table decision. Rows are visited in binary order over the sorted
/// variables, so the falsifying assignment returned is the first one.
pub fn taut_check(p: &PropFormula) -> Result<Taut, DecideError> {
    let vars: Vec<PropVar> = p.vars().into_iter().collect();
    if vars.len() > TAUT_LIMIT {
        return Err(DecideError::TooManyVariables(vars.len()));
    }
    let lit = index(p, &vars);
    for bits in 0..1u32 << vars.len() {
        if !lit.eval(bits) {
            let a = vars.iter().enumerate().map(|(i, v)| (v.clone(), bits >> i & 1 == 1)).collect();
            return Ok(Taut::Falsified(a));
        }
    }
    Ok(Taut::Tautology)
}
