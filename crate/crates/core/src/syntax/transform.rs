//! Normal forms, coercions, relativization and validity conversion.

use super::{fresh_name, Formula, QSentence, QuantifierKind, Term};
use crate::rat::Rational;
use num_traits::One;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("formula has free variables: {0}")]
    FreeVariables(String),
    #[error("formula is not in prenex form")]
    NotPrenex,
    #[error("formula is not universal prenex")]
    NotUniversal,
    #[error("equality atoms are not supported here")]
    Equality,
}

/// Negation normal form: `Not` only above atoms, no `Implies`/`Iff`.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, pos: bool) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Equal(..) => {
            if pos {
                f.clone()
            } else {
                Formula::Not(Box::new(f.clone()))
            }
        }
        Formula::Not(g) => nnf(g, !pos),
        Formula::And(gs) => {
            let hs = gs.iter().map(|g| nnf(g, pos)).collect();
            if pos {
                Formula::And(hs)
            } else {
                Formula::Or(hs)
            }
        }
        Formula::Or(gs) => {
            let hs = gs.iter().map(|g| nnf(g, pos)).collect();
            if pos {
                Formula::Or(hs)
            } else {
                Formula::And(hs)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                Formula::Or(vec![nnf(a, false), nnf(b, true)])
            } else {
                Formula::And(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            if pos {
                Formula::And(vec![
                    Formula::Or(vec![nnf(a, false), nnf(b, true)]),
                    Formula::Or(vec![nnf(b, false), nnf(a, true)]),
                ])
            } else {
                Formula::Or(vec![
                    Formula::And(vec![nnf(a, true), nnf(b, false)]),
                    Formula::And(vec![nnf(b, true), nnf(a, false)]),
                ])
            }
        }
        Formula::Forall(x, g) => {
            let h = Box::new(nnf(g, pos));
            if pos {
                Formula::Forall(x.clone(), h)
            } else {
                Formula::Exists(x.clone(), h)
            }
        }
        Formula::Exists(x, g) => {
            let h = Box::new(nnf(g, pos));
            if pos {
                Formula::Exists(x.clone(), h)
            } else {
                Formula::Forall(x.clone(), h)
            }
        }
    }
}

/// Gives every binder a distinct name, also distinct from free variables.
fn rename_apart(f: &Formula, used: &mut BTreeSet<String>, all: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Equal(..) => f.clone(),
        Formula::Not(g) => Formula::Not(Box::new(rename_apart(g, used, all))),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_apart(g, used, all)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_apart(g, used, all)).collect()),
        Formula::Implies(a, b) => {
            let a = rename_apart(a, used, all);
            Formula::Implies(Box::new(a), Box::new(rename_apart(b, used, all)))
        }
        Formula::Iff(a, b) => {
            let a = rename_apart(a, used, all);
            Formula::Iff(Box::new(a), Box::new(rename_apart(b, used, all)))
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let (name, body) = if used.contains(x) {
                let y = fresh_name(x, all);
                all.insert(y.clone());
                let body = g.substitute(x, &Term::Var(y.clone()));
                (y, body)
            } else {
                (x.clone(), (**g).clone())
            };
            used.insert(name.clone());
            let body = Box::new(rename_apart(&body, used, all));
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(name, body)
            } else {
                Formula::Exists(name, body)
            }
        }
    }
}

fn pull(f: Formula, prefix: &mut Vec<(bool, String)>) -> Formula {
    match f {
        Formula::Forall(x, g) => {
            prefix.push((true, x));
            pull(*g, prefix)
        }
        Formula::Exists(x, g) => {
            prefix.push((false, x));
            pull(*g, prefix)
        }
        Formula::And(gs) => Formula::And(gs.into_iter().map(|g| pull(g, prefix)).collect()),
        Formula::Or(gs) => Formula::Or(gs.into_iter().map(|g| pull(g, prefix)).collect()),
        other => other,
    }
}

/// Prenex form of the NNF, binders renamed apart, quantifiers pulled out
/// left to right.
pub fn to_prenex(f: &Formula) -> Formula {
    let g = to_nnf(f);
    let mut all = BTreeSet::new();
    g.names(&mut all);
    let mut scope: BTreeSet<String> = g.free_vars();
    g.constants(&mut scope);
    let renamed = rename_apart(&g, &mut scope, &mut all);
    let mut prefix = Vec::new();
    let matrix = pull(renamed, &mut prefix);
    wrap(prefix, matrix)
}

fn wrap(prefix: Vec<(bool, String)>, matrix: Formula) -> Formula {
    prefix.into_iter().rev().fold(matrix, |acc, (all, x)| {
        if all {
            Formula::Forall(x, Box::new(acc))
        } else {
            Formula::Exists(x, Box::new(acc))
        }
    })
}

fn require_sentence(f: &Formula) -> Result<(), TransformError> {
    let free = f.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        Err(TransformError::FreeVariables(free.into_iter().collect::<Vec<_>>().join(", ")))
    }
}

fn coerce(
    f: &Formula,
    on_forall: QuantifierKind,
    on_exists: QuantifierKind,
) -> Result<QSentence, TransformError> {
    require_sentence(f)?;
    let p = to_prenex(f);
    let (prefix, matrix) = p.split_prefix();
    let prefix = prefix
        .into_iter()
        .map(|(all, x)| {
            let k = if all { on_forall.clone() } else { on_exists.clone() };
            (k, x.to_string())
        })
        .collect();
    Ok(QSentence::new(prefix, matrix.clone()).expect("prenex sentence is a valid q-sentence"))
}

/// Every ∀ becomes `qgeq (1-ε)`; ∃ stays.
pub fn e_coerce(f: &Formula, eps: &Rational) -> Result<QSentence, TransformError> {
    coerce(f, QuantifierKind::WeakAtLeast(Rational::one() - eps), QuantifierKind::Exists)
}

/// Every ∃ becomes `qgt ε`; ∀ stays.
pub fn f_coerce(f: &Formula, eps: &Rational) -> Result<QSentence, TransformError> {
    coerce(f, QuantifierKind::Forall, QuantifierKind::StrongGreater(eps.clone()))
}

/// Relativizes a prenex formula to the unary predicate `n`.
pub fn relativize(f: &Formula, n: &str) -> Result<Formula, TransformError> {
    if !f.is_prenex() {
        return Err(TransformError::NotPrenex);
    }
    Ok(rel(f, n))
}

fn rel(f: &Formula, n: &str) -> Formula {
    let guard = |x: &str| Formula::Atom(n.to_string(), vec![Term::Var(x.to_string())]);
    match f {
        Formula::Forall(x, g) => {
            Formula::Forall(x.clone(), Box::new(Formula::Implies(Box::new(guard(x)), Box::new(rel(g, n)))))
        }
        Formula::Exists(x, g) => {
            Formula::Exists(x.clone(), Box::new(Formula::And(vec![guard(x), rel(g, n)])))
        }
        other => other.clone(),
    }
}

/// Replaces all existentially bound variables by one new universally bound
/// `y` placed first; universal quantifiers keep their order.
pub fn validity_convert(f: &Formula) -> Result<Formula, TransformError> {
    if !f.is_prenex() {
        return Err(TransformError::NotPrenex);
    }
    let (prefix, matrix) = f.split_prefix();
    let mut avoid: BTreeSet<String> = f.free_vars();
    f.constants(&mut avoid);
    for (all, x) in &prefix {
        if *all {
            avoid.insert(x.to_string());
        }
    }
    let y = if avoid.contains("y") { fresh_name("y", &avoid) } else { "y".to_string() };
    let mut body = matrix.clone();
    let mut univ = Vec::new();
    for (all, x) in &prefix {
        if *all {
            univ.push((true, x.to_string()));
        } else {
            body = body.substitute(x, &Term::Var(y.clone()));
        }
    }
    let mut full = vec![(true, y)];
    full.extend(univ);
    Ok(wrap(full, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::syntax::build::*;

    #[test]
    fn nnf_examples() {
        assert_eq!(to_nnf(&not(forall("x", app("P", &["x"])))), exists("x", not(app("P", &["x"]))));
        let pa = atom("P", &[Term::cst("a")]);
        assert_eq!(to_nnf(&not(not(pa.clone()))), pa);
        assert_eq!(
            to_nnf(&not(and(vec![app("P", &["x"]), app("Q", &["y"])]))),
            or(vec![not(app("P", &["x"])), not(app("Q", &["y"]))])
        );
    }

    #[test]
    fn prenex_examples() {
        let f = and(vec![forall("x", app("P", &["x"])), exists("y", app("Q", &["y"]))]);
        assert_eq!(
            to_prenex(&f),
            forall("x", exists("y", and(vec![app("P", &["x"]), app("Q", &["y"])])))
        );
        let pa = atom("P", &[Term::cst("a")]);
        assert_eq!(to_prenex(&pa), pa);
        let f = exists("x", or(vec![app("P", &["x"]), forall("x", app("Q", &["x"]))]));
        assert_eq!(
            to_prenex(&f),
            exists("x", forall("x_1", or(vec![app("P", &["x"]), app("Q", &["x_1"])])))
        );
    }

    #[test]
    fn prenex_avoids_free_and_constants() {
        let sig_c = Term::cst("x");
        let f = and(vec![atom("P", &[sig_c]), app("Q", &["z"]), forall("z", app("P", &["z"]))]);
        let p = to_prenex(&f);
        let (pre, _) = p.split_prefix();
        assert_eq!(pre, vec![(true, "z_1")]);
    }

    #[test]
    fn coercions() {
        let f = exists("x", forall("y", app("R", &["x", "y"])));
        let q = e_coerce(&f, &rat(1, 4)).unwrap();
        assert_eq!(q.kinds(), vec![QuantifierKind::Exists, QuantifierKind::WeakAtLeast(rat(3, 4))]);
        let f = forall("x", exists("y", app("E", &["x", "y"])));
        let q = f_coerce(&f, &rat(1, 2)).unwrap();
        assert_eq!(q.kinds(), vec![QuantifierKind::Forall, QuantifierKind::StrongGreater(rat(1, 2))]);
        let q = e_coerce(&forall("x", app("P", &["x"])), &rat(0, 1)).unwrap();
        assert_eq!(q.kinds(), vec![QuantifierKind::WeakAtLeast(rat(1, 1))]);
        let q = f_coerce(&exists("x", app("P", &["x"])), &rat(0, 1)).unwrap();
        assert_eq!(q.kinds(), vec![QuantifierKind::StrongGreater(rat(0, 1))]);
        let qf = atom("P", &[Term::cst("a")]);
        assert!(e_coerce(&qf, &rat(1, 2)).unwrap().is_empty());
        assert!(f_coerce(&qf, &rat(1, 2)).unwrap().is_empty());
        assert!(e_coerce(&app("P", &["x"]), &rat(1, 2)).is_err());
    }

    #[test]
    fn relativize_examples() {
        assert_eq!(
            relativize(&forall("x", app("P", &["x"])), "N").unwrap(),
            forall("x", implies(app("N", &["x"]), app("P", &["x"])))
        );
        let qf = app("P", &["x"]);
        assert_eq!(relativize(&qf, "N").unwrap(), qf);
        assert_eq!(
            relativize(&exists("x", forall("y", app("R", &["x", "y"]))), "N").unwrap(),
            exists(
                "x",
                and(vec![app("N", &["x"]), forall("y", implies(app("N", &["y"]), app("R", &["x", "y"])))])
            )
        );
        assert!(relativize(&and(vec![forall("x", app("P", &["x"]))]), "N").is_err());
    }

    #[test]
    fn validity_convert_examples() {
        assert_eq!(
            validity_convert(&exists("x1", forall("x2", app("R", &["x1", "x2"])))).unwrap(),
            forall("y", forall("x2", app("R", &["y", "x2"])))
        );
        assert_eq!(
            validity_convert(&forall("x", app("P", &["x"]))).unwrap(),
            forall("y", forall("x", app("P", &["x"])))
        );
        assert_eq!(validity_convert(&exists("x", app("P", &["x"]))).unwrap(), forall("y", app("P", &["y"])));
        assert_eq!(
            validity_convert(&forall("y", exists("x", app("R", &["y", "x"])))).unwrap(),
            forall("y_1", forall("y", app("R", &["y", "y_1"])))
        );
    }
}
