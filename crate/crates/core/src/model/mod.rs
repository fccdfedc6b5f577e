//! Finite probability models with exact point measures.

mod enumerate;
mod file;

pub use enumerate::{enumerate_models, enumerate_models_with, EnumOptions, ModelEnumerator};
pub use file::{parse_model, ModelParseError};

use crate::rat::{fmt_rational, Rational};
use crate::syntax::{Formula, Signature, Term};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// Elements are referred to by index into `universe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    pub sig: Signature,
    pub universe: Vec<String>,
    pub relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    pub constants: BTreeMap<String, usize>,
    pub measure: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelIssue {
    EmptyUniverse,
    DuplicateLabel(String),
    MeasureLength { expected: usize, found: usize },
    NegativeMass(String),
    MeasureSum(Rational),
    UnknownPredicate(String),
    Arity { pred: String, expected: usize, found: usize },
    TupleOutOfRange(String),
    MissingRelation(String),
    MissingConstant(String),
    DanglingConstant(String),
    UnknownConstant(String),
}

impl fmt::Display for ModelIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelIssue::EmptyUniverse => write!(f, "empty universe"),
            ModelIssue::DuplicateLabel(a) => write!(f, "element `{a}` listed twice"),
            ModelIssue::MeasureLength { expected, found } => {
                write!(f, "measure has {found} entries for {expected} elements")
            }
            ModelIssue::NegativeMass(a) => write!(f, "negative mass on `{a}`"),
            ModelIssue::MeasureSum(s) => write!(f, "sum {} ≠ 1", fmt_rational(s)),
            ModelIssue::UnknownPredicate(p) => write!(f, "relation for undeclared predicate `{p}`"),
            ModelIssue::Arity { pred, expected, found } => {
                write!(f, "arity: `{pred}` expects {expected}-tuples, found a {found}-tuple")
            }
            ModelIssue::TupleOutOfRange(p) => write!(f, "tuple of `{p}` names a missing element"),
            ModelIssue::MissingRelation(p) => write!(f, "no interpretation for `{p}`"),
            ModelIssue::MissingConstant(c) => write!(f, "constant `{c}` is not interpreted"),
            ModelIssue::DanglingConstant(c) => write!(f, "constant `{c}` maps outside the universe"),
            ModelIssue::UnknownConstant(c) => write!(f, "interpretation for undeclared constant `{c}`"),
        }
    }
}

/// Every problem found by [`validate_model`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ModelReport(pub Vec<ModelIssue>);

impl fmt::Display for ModelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

pub fn validate_model(m: &FiniteModel) -> Result<(), ModelReport> {
    let mut issues = Vec::new();
    let n = m.universe.len();
    if n == 0 {
        issues.push(ModelIssue::EmptyUniverse);
    }
    let mut seen = BTreeSet::new();
    for a in &m.universe {
        if !seen.insert(a) {
            issues.push(ModelIssue::DuplicateLabel(a.clone()));
        }
    }
    if m.measure.len() != n {
        issues.push(ModelIssue::MeasureLength { expected: n, found: m.measure.len() });
    }
    let mut sum = Rational::zero();
    for (i, w) in m.measure.iter().enumerate() {
        if w.is_negative() {
            let label = m.universe.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
            issues.push(ModelIssue::NegativeMass(label));
        }
        sum += w;
    }
    if !sum.is_one() {
        issues.push(ModelIssue::MeasureSum(sum));
    }
    for (p, tuples) in &m.relations {
        let Some(a) = m.sig.arity(p) else {
            issues.push(ModelIssue::UnknownPredicate(p.clone()));
            continue;
        };
        for t in tuples {
            if t.len() != a {
                issues.push(ModelIssue::Arity { pred: p.clone(), expected: a, found: t.len() });
            } else if t.iter().any(|&e| e >= n) {
                issues.push(ModelIssue::TupleOutOfRange(p.clone()));
            }
        }
    }
    for (p, _) in m.sig.predicates() {
        if !m.relations.contains_key(p) {
            issues.push(ModelIssue::MissingRelation(p.clone()));
        }
    }
    for c in m.sig.constants() {
        match m.constants.get(c) {
            None => issues.push(ModelIssue::MissingConstant(c.clone())),
            Some(&e) if e >= n => issues.push(ModelIssue::DanglingConstant(c.clone())),
            _ => {}
        }
    }
    for c in m.constants.keys() {
        if !m.sig.is_constant(c) {
            issues.push(ModelIssue::UnknownConstant(c.clone()));
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(ModelReport(issues))
    }
}

impl FiniteModel {
    /// Builds and validates a model.
    pub fn new(
        sig: Signature,
        universe: Vec<String>,
        relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
        constants: BTreeMap<String, usize>,
        measure: Vec<Rational>,
    ) -> Result<FiniteModel, ModelReport> {
        let mut relations = relations;
        for (p, _) in sig.predicates() {
            relations.entry(p.clone()).or_default();
        }
        let m = FiniteModel { sig, universe, relations, constants, measure };
        validate_model(&m)?;
        Ok(m)
    }

    /// `n` elements labelled `e1..en`, empty relations, uniform measure.
    /// Constants all denote the first element.
    pub fn uniform(sig: Signature, n: usize) -> FiniteModel {
        assert!(n > 0, "universe must be nonempty");
        let universe = (1..=n).map(|i| format!("e{i}")).collect();
        let relations = sig.predicates().iter().map(|(p, _)| (p.clone(), BTreeSet::new())).collect();
        let constants = sig.constants().iter().map(|c| (c.clone(), 0)).collect();
        let measure = vec![Rational::new(1.into(), (n as i64).into()); n];
        FiniteModel { sig, universe, relations, constants, measure }
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn holds(&self, pred: &str, args: &[usize]) -> bool {
        self.relations.get(pred).is_some_and(|r| r.contains(args))
    }

    pub fn set(&mut self, pred: &str, args: &[usize], on: bool) {
        let r = self.relations.entry(pred.to_string()).or_default();
        if on {
            r.insert(args.to_vec());
        } else {
            r.remove(args);
        }
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.universe.iter().position(|a| a == label)
    }

    pub fn mass_of(&self, set: impl IntoIterator<Item = usize>) -> Rational {
        set.into_iter().fold(Rational::zero(), |acc, i| acc + &self.measure[i])
    }

    /// Canonical model-file text.
    pub fn to_text(&self) -> String {
        file::print_model(self)
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error("constant `{0}` is not interpreted")]
    Constant(String),
}

/// Standard Tarskian truth; equality is identity of elements.
pub fn classical_eval(
    m: &FiniteModel,
    f: &Formula,
    env: &HashMap<String, usize>,
) -> Result<bool, EvalError> {
    let mut env = env.clone();
    ceval(m, f, &mut env)
}

fn term_value(m: &FiniteModel, t: &Term, env: &HashMap<String, usize>) -> Result<usize, EvalError> {
    match t {
        Term::Var(v) => env.get(v).copied().ok_or_else(|| EvalError::Unbound(v.clone())),
        Term::Const(c) => m.constants.get(c).copied().ok_or_else(|| EvalError::Constant(c.clone())),
    }
}

fn ceval(m: &FiniteModel, f: &Formula, env: &mut HashMap<String, usize>) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Atom(p, ts) => {
            let args = ts.iter().map(|t| term_value(m, t, env)).collect::<Result<Vec<_>, _>>()?;
            m.holds(p, &args)
        }
        Formula::Equal(a, b) => term_value(m, a, env)? == term_value(m, b, env)?,
        Formula::Not(g) => !ceval(m, g, env)?,
        Formula::And(gs) => {
            for g in gs {
                if !ceval(m, g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if ceval(m, g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !ceval(m, a, env)? || ceval(m, b, env)?,
        Formula::Iff(a, b) => ceval(m, a, env)? == ceval(m, b, env)?,
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let want = matches!(f, Formula::Exists(..));
            let saved = env.get(x).copied();
            let mut result = !want;
            for a in 0..m.size() {
                env.insert(x.clone(), a);
                if ceval(m, g, env)? == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(v) => env.insert(x.clone(), v),
                None => env.remove(x),
            };
            result
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("quotient needs a monadic relational signature")]
pub struct NotMonadic;

/// Label of the cell with predicate bitmask `mask`: `_` when empty, else the
/// predicate names joined by `+`.
pub fn cell_label(sig: &Signature, mask: u64) -> String {
    let names: Vec<&str> = sig
        .predicates()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, (p, _))| p.as_str())
        .collect();
    if names.is_empty() {
        "_".to_string()
    } else {
        names.join("+")
    }
}

/// Collapses elements with identical predicate sets into one element per
/// nonempty cell, carrying the cell's total mass.
pub fn quotient_monadic(m: &FiniteModel) -> Result<FiniteModel, NotMonadic> {
    if !m.sig.is_monadic_relational() || m.sig.predicates().len() > 63 {
        return Err(NotMonadic);
    }
    let preds = m.sig.predicates();
    let mut cells: BTreeMap<u64, Rational> = BTreeMap::new();
    for a in 0..m.size() {
        let mask = preds
            .iter()
            .enumerate()
            .filter(|(_, (p, _))| m.holds(p, &[a]))
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        *cells.entry(mask).or_insert_with(Rational::zero) += &m.measure[a];
    }
    let universe = cells.keys().map(|&c| cell_label(&m.sig, c)).collect();
    let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> =
        preds.iter().map(|(p, _)| (p.clone(), BTreeSet::new())).collect();
    for (j, &mask) in cells.keys().enumerate() {
        for (i, (p, _)) in preds.iter().enumerate() {
            if mask >> i & 1 == 1 {
                relations.get_mut(p).unwrap().insert(vec![j]);
            }
        }
    }
    Ok(FiniteModel {
        sig: m.sig.clone(),
        universe,
        relations,
        constants: BTreeMap::new(),
        measure: cells.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::syntax::build::*;

    fn pq() -> Signature {
        Signature::monadic(&["P", "Q"])
    }

    #[test]
    fn validate_reports() {
        let sig = Signature::monadic(&["P"]);
        let mut m = FiniteModel::uniform(sig.clone(), 1);
        assert!(validate_model(&m).is_ok());
        m = FiniteModel::uniform(sig.clone(), 2);
        m.measure = vec![rat(1, 2), rat(1, 3)];
        let e = validate_model(&m).unwrap_err();
        assert_eq!(e.to_string(), "sum 5/6 ≠ 1");
        m.measure = vec![rat(1, 2), rat(1, 2)];
        m.set("P", &[0, 1], true);
        let e = validate_model(&m).unwrap_err();
        assert!(e.to_string().contains("arity"));
    }

    #[test]
    fn classical_examples() {
        let mut m = FiniteModel::uniform(Signature::monadic(&["P"]).with_equality(true), 2);
        m.set("P", &[0], true);
        let env = HashMap::new();
        assert!(!classical_eval(&m, &forall("x", app("P", &["x"])), &env).unwrap());
        assert!(classical_eval(&m, &exists("x", app("P", &["x"])), &env).unwrap());
        let f = forall("x", exists("y", not(eq(Term::var("x"), Term::var("y")))));
        assert!(classical_eval(&m, &f, &env).unwrap());
        assert_eq!(classical_eval(&m, &app("P", &["z"]), &env), Err(EvalError::Unbound("z".into())));
    }

    #[test]
    fn quotient_examples() {
        let mut m = FiniteModel::uniform(pq(), 3);
        m.set("P", &[0], true);
        m.set("P", &[1], true);
        m.set("Q", &[2], true);
        let q = quotient_monadic(&m).unwrap();
        assert_eq!(q.universe, vec!["P", "Q"]);
        assert_eq!(q.measure, vec![rat(2, 3), rat(1, 3)]);
        assert!(q.holds("P", &[0]) && !q.holds("Q", &[0]) && q.holds("Q", &[1]));

        let qq = quotient_monadic(&q).unwrap();
        assert_eq!(qq, q);

        let blank = FiniteModel::uniform(pq(), 4);
        let q = quotient_monadic(&blank).unwrap();
        assert_eq!(q.universe, vec!["_"]);
        assert_eq!(q.measure, vec![rat(1, 1)]);
    }
}
