//! Line-oriented model files.
//!
//! ```text
//! universe: a b c
//! measure: a=1/4 b=1/2 c=1/4
//! const minc=a
//! rel P: a c
//! rel R: (a b) (b c)
//! ```

use super::{validate_model, FiniteModel};
use crate::rat::{fmt_rational, parse_rational, Rational};
use crate::syntax::Signature;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ModelParseError {
    pub line: usize,
    pub msg: String,
}

fn label_ok(s: &str) -> bool {
    !s.is_empty() && !s.contains(['(', ')', '=', ':', '#'])
}

/// Parses a model over `sig` and validates it.
pub fn parse_model(text: &str, sig: &Signature) -> Result<FiniteModel, ModelParseError> {
    let mut universe: Option<Vec<String>> = None;
    let mut measure: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut have_measure = false;
    let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut constants = BTreeMap::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last = ln;
        let fail = |msg: String| ModelParseError { line: ln, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let elem = |u: &Option<Vec<String>>, a: &str| -> Result<usize, ModelParseError> {
            let u = u.as_ref().ok_or_else(|| fail("element used before `universe:`".into()))?;
            u.iter().position(|x| x == a).ok_or_else(|| fail(format!("undeclared element `{a}`")))
        };
        if let Some(rest) = line.strip_prefix("universe:") {
            if universe.is_some() {
                return Err(fail("second `universe:` line".into()));
            }
            let labels: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if let Some(bad) = labels.iter().find(|a| !label_ok(a)) {
                return Err(fail(format!("bad element label `{bad}`")));
            }
            universe = Some(labels);
        } else if let Some(rest) = line.strip_prefix("measure:") {
            have_measure = true;
            for item in rest.split_whitespace() {
                let (a, w) = item.split_once('=').ok_or_else(|| fail(format!("expected `elem=rational`, found `{item}`")))?;
                let e = elem(&universe, a)?;
                let r = parse_rational(w).map_err(|er| fail(er.to_string()))?;
                if measure.insert(e, r).is_some() {
                    return Err(fail(format!("mass for `{a}` given twice")));
                }
            }
        } else if let Some(rest) = line.strip_prefix("const ") {
            let (c, a) = rest.trim().split_once('=').ok_or_else(|| fail("expected `const name=elem`".into()))?;
            let (c, a) = (c.trim(), a.trim());
            if !sig.is_constant(c) {
                return Err(fail(format!("undeclared constant `{c}`")));
            }
            constants.insert(c.to_string(), elem(&universe, a)?);
        } else if let Some(rest) = line.strip_prefix("rel ") {
            let (p, body) = rest.split_once(':').ok_or_else(|| fail("expected `rel NAME: tuples`".into()))?;
            let p = p.trim();
            let arity = sig.arity(p).ok_or_else(|| fail(format!("undeclared predicate `{p}`")))?;
            let set = relations.entry(p.to_string()).or_default();
            for tuple in split_tuples(body).map_err(fail)? {
                if tuple.len() != arity {
                    return Err(fail(format!("arity: `{p}` expects {arity}-tuples, found {}", tuple.len())));
                }
                let t = tuple.iter().map(|a| elem(&universe, a)).collect::<Result<Vec<_>, _>>()?;
                set.insert(t);
            }
        } else {
            return Err(fail(format!("unrecognized line `{line}`")));
        }
    }
    let fail = |msg: String| ModelParseError { line: last, msg };
    let universe = universe.ok_or_else(|| fail("missing `universe:` line".into()))?;
    if !have_measure {
        return Err(fail("missing `measure:` line".into()));
    }
    let mut weights = Vec::with_capacity(universe.len());
    for (i, a) in universe.iter().enumerate() {
        weights.push(measure.remove(&i).ok_or_else(|| fail(format!("no mass given for `{a}`")))?);
    }
    for (p, _) in sig.predicates() {
        relations.entry(p.clone()).or_default();
    }
    let m = FiniteModel { sig: sig.clone(), universe, relations, constants, measure: weights };
    validate_model(&m).map_err(|r| fail(r.to_string()))?;
    Ok(m)
}

fn split_tuples(body: &str) -> Result<Vec<Vec<String>>, String> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or("unclosed `(` in tuple")?;
            out.push(r[..close].split_whitespace().map(str::to_string).collect());
            rest = r[close + 1..].trim_start();
        } else {
            let end = rest.find(|c: char| c.is_whitespace() || c == '(').unwrap_or(rest.len());
            out.push(vec![rest[..end].to_string()]);
            rest = rest[end..].trim_start();
        }
    }
    Ok(out)
}

pub(super) fn print_model(m: &FiniteModel) -> String {
    let mut s = format!("universe: {}\n", m.universe.join(" "));
    let masses: Vec<String> = m
        .universe
        .iter()
        .zip(&m.measure)
        .map(|(a, w)| format!("{a}={}", fmt_rational(w)))
        .collect();
    s.push_str(&format!("measure: {}\n", masses.join(" ")));
    for c in m.sig.constants() {
        if let Some(&e) = m.constants.get(c) {
            s.push_str(&format!("const {c}={}\n", m.universe[e]));
        }
    }
    for (p, arity) in m.sig.predicates() {
        let tuples: Vec<String> = m
            .relations
            .get(p)
            .map(|r| {
                r.iter()
                    .map(|t| {
                        let names: Vec<&str> = t.iter().map(|&e| m.universe[e].as_str()).collect();
                        if *arity == 1 {
                            names[0].to_string()
                        } else {
                            format!("({})", names.join(" "))
                        }
                    })
                    .collect()
            })
            .unwrap_or_default();
        if tuples.is_empty() {
            s.push_str(&format!("rel {p}:\n"));
        } else {
            s.push_str(&format!("rel {p}: {}\n", tuples.join(" ")));
        }
    }
    s
}
