//! Propositional skeletons of universal sentences.

use super::transform::TransformError;
use super::{Formula, Term};
use std::collections::BTreeSet;
use std::fmt;

/// The variable `p(π, x⃗)` for a prime formula `π(x⃗)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropVar {
    pub pred: String,
    pub args: Vec<Term>,
}

impl fmt::Display for PropVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({}", self.pred)?;
        for a in &self.args {
            write!(f, ",{a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropFormula {
    Var(PropVar),
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn vars(&self) -> BTreeSet<PropVar> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<PropVar>) {
        match self {
            PropFormula::Var(v) => {
                out.insert(v.clone());
            }
            PropFormula::Not(g) => g.collect(out),
            PropFormula::And(gs) | PropFormula::Or(gs) => gs.iter().for_each(|g| g.collect(out)),
            PropFormula::Implies(a, b) | PropFormula::Iff(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn eval(&self, val: &dyn Fn(&PropVar) -> bool) -> bool {
        match self {
            PropFormula::Var(v) => val(v),
            PropFormula::Not(g) => !g.eval(val),
            PropFormula::And(gs) => gs.iter().all(|g| g.eval(val)),
            PropFormula::Or(gs) => gs.iter().any(|g| g.eval(val)),
            PropFormula::Implies(a, b) => !a.eval(val) || b.eval(val),
            PropFormula::Iff(a, b) => a.eval(val) == b.eval(val),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, gs: &[PropFormula]| {
            write!(f, "({op}")?;
            for g in gs {
                write!(f, " {g}")?;
            }
            write!(f, ")")
        };
        match self {
            PropFormula::Var(v) => write!(f, "{v}"),
            PropFormula::Not(g) => write!(f, "(not {g})"),
            PropFormula::And(gs) => list(f, "and", gs),
            PropFormula::Or(gs) => list(f, "or", gs),
            PropFormula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            PropFormula::Iff(a, b) => write!(f, "(iff {a} {b})"),
        }
    }
}

/// Strips a universal prefix and maps each atom to its propositional
/// variable. Equality is rejected.
pub fn propositionalize(f: &Formula) -> Result<PropFormula, TransformError> {
    let (prefix, body) = f.split_prefix();
    if prefix.iter().any(|(all, _)| !all) || !body.is_quantifier_free() {
        return Err(TransformError::NotUniversal);
    }
    conv(body)
}

fn conv(f: &Formula) -> Result<PropFormula, TransformError> {
    Ok(match f {
        Formula::Atom(p, ts) => PropFormula::Var(PropVar { pred: p.clone(), args: ts.clone() }),
        Formula::Equal(..) => return Err(TransformError::Equality),
        Formula::Not(g) => PropFormula::Not(Box::new(conv(g)?)),
        Formula::And(gs) => PropFormula::And(gs.iter().map(conv).collect::<Result<_, _>>()?),
        Formula::Or(gs) => PropFormula::Or(gs.iter().map(conv).collect::<Result<_, _>>()?),
        Formula::Implies(a, b) => PropFormula::Implies(Box::new(conv(a)?), Box::new(conv(b)?)),
        Formula::Iff(a, b) => PropFormula::Iff(Box::new(conv(a)?), Box::new(conv(b)?)),
        Formula::Forall(..) | Formula::Exists(..) => return Err(TransformError::NotUniversal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;

    #[test]
    fn shapes() {
        let f = forall("x", or(vec![app("P", &["x"]), not(app("P", &["x"]))]));
        let p = propositionalize(&f).unwrap();
        assert_eq!(p.vars().len(), 1);
        assert_eq!(p.to_string(), "(or p(P,x) (not p(P,x)))");

        let f = foralls(&["x", "y"], implies(app("R", &["x", "y"]), app("R", &["y", "x"])));
        assert_eq!(propositionalize(&f).unwrap().vars().len(), 2);

        let f = forall("x", app("R", &["x", "x"]));
        assert_eq!(propositionalize(&f).unwrap().vars().len(), 1);
    }

    #[test]
    fn rejects() {
        assert_eq!(
            propositionalize(&forall("x", eq(Term::var("x"), Term::var("x")))),
            Err(TransformError::Equality)
        );
        assert_eq!(propositionalize(&exists("x", app("P", &["x"]))), Err(TransformError::NotUniversal));
    }
}
