//! Three-valued evaluation on models whose relations are only partly known.

use super::compile::{Arg, Compiled, Node, QKind};
use crate::model::FiniteModel;
use crate::rat::Rational;
use crate::syntax::Signature;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet};

/// An unknown atom met while evaluating: relation index and dense tuple
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Probe {
    pub rel: usize,
    pub index: usize,
}

/// Relations with three-valued entries over a fixed universe, integer
/// weights and fixed constants.
#[derive(Debug, Clone)]
pub struct PartialModel {
    n: usize,
    weights: Vec<u64>,
    total: u64,
    consts: Vec<usize>,
    arities: Vec<usize>,
    tables: Vec<Vec<Option<bool>>>,
}

impl PartialModel {
    /// Everything unknown. `consts` follows the signature's constant order.
    pub fn new(sig: &Signature, weights: Vec<u64>, consts: Vec<usize>) -> PartialModel {
        let n = weights.len();
        let arities: Vec<usize> = sig.predicates().iter().map(|(_, a)| *a).collect();
        let tables = arities.iter().map(|&a| vec![None; n.pow(a as u32)]).collect();
        let total = weights.iter().sum();
        PartialModel { n, weights, total, consts, arities, tables }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: Probe) -> Option<bool> {
        self.tables[p.rel][p.index]
    }

    pub fn set(&mut self, p: Probe, v: Option<bool>) {
        self.tables[p.rel][p.index] = v;
    }

    /// Argument tuple of a dense index.
    pub fn tuple(&self, p: Probe) -> Vec<usize> {
        let mut t = vec![0; self.arities[p.rel]];
        let mut r = p.index;
        for s in t.iter_mut().rev() {
            *s = r % self.n;
            r /= self.n;
        }
        t
    }

    /// The completion with every unknown atom false.
    pub fn complete(&self, sig: &Signature, labels: Vec<String>) -> FiniteModel {
        let mut relations = BTreeMap::new();
        for (r, (p, _)) in sig.predicates().iter().enumerate() {
            let set: BTreeSet<Vec<usize>> = (0..self.tables[r].len())
                .filter(|&i| self.tables[r][i] == Some(true))
                .map(|i| self.tuple(Probe { rel: r, index: i }))
                .collect();
            relations.insert(p.clone(), set);
        }
        let constants = sig.constants().iter().cloned().zip(self.consts.iter().copied()).collect();
        let measure = self.weights.iter().map(|&w| Rational::new((w as i64).into(), (self.total as i64).into())).collect();
        FiniteModel::new(sig.clone(), labels, relations, constants, measure).expect("well-formed partial model")
    }
}

struct Run3<'a> {
    pm: &'a PartialModel,
    targets: Vec<u64>,
    probe: Option<Probe>,
}

impl Run3<'_> {
    fn eval(&mut self, node: &Node, env: &mut [usize]) -> Option<bool> {
        match node {
            Node::Bool(b) => Some(*b),
            Node::Lit { rel, args, pos } => {
                let n = self.pm.n;
                let index = args.iter().fold(0, |acc, a| {
                    acc * n
                        + match *a {
                            Arg::Var(v) => env[v],
                            Arg::Const(c) => self.pm.consts[c],
                        }
                });
                let p = Probe { rel: *rel, index };
                match self.pm.get(p) {
                    Some(v) => Some(v == *pos),
                    None => {
                        self.probe.get_or_insert(p);
                        None
                    }
                }
            }
            Node::Eq { a, b, pos } => {
                let v = |x: &Arg| match *x {
                    Arg::Var(i) => env[i],
                    Arg::Const(c) => self.pm.consts[c],
                };
                Some((v(a) == v(b)) == *pos)
            }
            Node::And(gs) => {
                let mut all = true;
                for g in gs {
                    match self.eval(g, env) {
                        Some(false) => return Some(false),
                        None => all = false,
                        Some(true) => {}
                    }
                }
                all.then_some(true)
            }
            Node::Or(gs) => {
                let mut none = true;
                for g in gs {
                    match self.eval(g, env) {
                        Some(true) => return Some(true),
                        None => none = false,
                        Some(false) => {}
                    }
                }
                if none {
                    Some(false)
                } else {
                    None
                }
            }
            Node::Quant { kind, var, body } => match kind {
                QKind::Exists | QKind::Forall => {
                    let want = *kind == QKind::Exists;
                    let mut open = false;
                    for a in 0..self.pm.n {
                        env[*var] = a;
                        match self.eval(body, env) {
                            Some(v) if v == want => return Some(want),
                            None => open = true,
                            Some(_) => {}
                        }
                    }
                    if open {
                        None
                    } else {
                        Some(!want)
                    }
                }
                QKind::Mass(t) => {
                    let k = self.targets[*t];
                    let (mut sure, mut maybe) = (0u64, 0u64);
                    for a in 0..self.pm.n {
                        let w = self.pm.weights[a];
                        if w == 0 {
                            continue;
                        }
                        env[*var] = a;
                        match self.eval(body, env) {
                            Some(true) => {
                                sure += w;
                                maybe += w;
                            }
                            None => maybe += w,
                            Some(false) => {}
                        }
                        if sure >= k {
                            return Some(true);
                        }
                    }
                    if maybe < k {
                        Some(false)
                    } else {
                        None
                    }
                }
            },
        }
    }
}

impl Compiled {
    /// Kleene truth on `pm`, and the first unknown atom consulted when the
    /// answer is undetermined. Zero-weight elements are never consulted by
    /// threshold quantifiers.
    pub fn holds3(&self, pm: &PartialModel) -> (Option<bool>, Option<Probe>) {
        let total = Rational::from_integer(pm.total.into());
        let targets = self
            .thresholds
            .iter()
            .map(|(t, strict)| {
                let scaled = t * &total;
                let k = if *strict { scaled.floor().to_integer() + 1 } else { scaled.ceil().to_integer() };
                k.to_i64().unwrap_or(i64::MAX).clamp(0, pm.total as i64 + 1) as u64
            })
            .collect();
        let mut run = Run3 { pm, targets, probe: None };
        let mut env = vec![0; self.nvars.max(1)];
        let v = run.eval(&self.root, &mut env);
        (v, if v.is_none() { run.probe } else { None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::semantics::compile_q_suffix;
    use crate::syntax::build::*;
    use crate::syntax::{QSentence, QuantifierKind};

    #[test]
    fn kleene_thresholds() {
        let sig = Signature::monadic(&["P"]);
        let q = QSentence::new(vec![(QuantifierKind::WeakAtLeast(rat(1, 2)), "x".into())], app("P", &["x"])).unwrap();
        let c = compile_q_suffix(&sig, &q, 0, &[]).unwrap();
        let mut pm = PartialModel::new(&sig, vec![1, 1, 0], vec![]);
        let (v, p) = c.holds3(&pm);
        assert_eq!(v, None);
        let p = p.unwrap();
        assert_eq!(p, Probe { rel: 0, index: 0 });
        pm.set(p, Some(true));
        assert_eq!(c.holds3(&pm).0, Some(true));
        pm.set(p, Some(false));
        assert_eq!(c.holds3(&pm).0, None);
        pm.set(Probe { rel: 0, index: 1 }, Some(false));
        // the zero-weight element is never consulted
        assert_eq!(c.holds3(&pm), (Some(false), None));
    }
}
