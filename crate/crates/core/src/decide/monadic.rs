//! Satisfiability of q-sentences over monadic relational signatures, by
//! search over tree skeletons on simple models with one linear program per
//! skeleton.

use super::{Certificate, DecideError, DecisionOutcome, Mode, Verdict};
use crate::lp::{feasible, LinSystem};
use crate::model::{cell_label, FiniteModel};
use crate::rat::{fmt_rational, in_unit_interval, Rational};
use crate::semantics::{q_holds, verify_qtree, QNode, QTree};
use crate::syntax::{e_coerce, f_coerce, Formula, QSentence, QuantifierKind, Signature, Term};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

const MAX_PREDICATES: usize = 4;

/// Coerces `f` for `mode` at `eps`, then decides the result. F-mode
/// searches positive measures only.
pub fn decide_monadic_coerced(
    sig: &Signature,
    f: &Formula,
    mode: Mode,
    eps: &Rational,
) -> Result<DecisionOutcome, DecideError> {
    if !in_unit_interval(eps) {
        return Err(DecideError::Epsilon(fmt_rational(eps)));
    }
    let q = match mode {
        Mode::E => e_coerce(f, eps)?,
        Mode::F => {
            if eps.is_one() {
                return Err(DecideError::EpsilonOne);
            }
            f_coerce(f, eps)?
        }
    };
    search(sig, &q, mode == Mode::F)
}

/// Decides a q-sentence over all finite measures, zero masses included.
pub fn decide_monadic(sig: &Signature, q: &QSentence) -> Result<DecisionOutcome, DecideError> {
    search(sig, q, false)
}

fn search(sig: &Signature, q: &QSentence, positive: bool) -> Result<DecisionOutcome, DecideError> {
    if !sig.is_monadic_relational() {
        return Err(DecideError::NotMonadic);
    }
    let s = sig.predicates().len();
    if s > MAX_PREDICATES {
        return Err(DecideError::TooManyPredicates(s));
    }
    sig.check(&q.matrix).map_err(|e| DecideError::Semantics(crate::semantics::SemanticsError::Signature(e)))?;
    let cells: Vec<u64> = (0..1u64 << s).collect();
    let has_forall = q.prefix.iter().any(|(k, _)| *k == QuantifierKind::Forall);
    // zero-mass elements only matter to ∀ and ∃ nodes, and without ∀ they
    // can only help
    let universes: Vec<Vec<u64>> = if !positive && !has_forall {
        vec![cells.clone()]
    } else {
        let mut us: Vec<Vec<u64>> = (1..1u64 << cells.len())
            .map(|m| cells.iter().copied().filter(|c| m >> c & 1 == 1).collect())
            .collect();
        us.sort_by_key(|u: &Vec<u64>| u.len());
        us
    };
    for u in universes {
        let mut sk = Skeleton::new(sig, q, u, positive);
        if let Some((mu, tree)) = sk.solve() {
            let w = sk.model(mu);
            let ok = q_holds(&w, q)? && verify_qtree(&w, q, &tree).map_err(|_| DecideError::Unverified)?;
            if !ok {
                return Err(DecideError::Unverified);
            }
            return Ok(DecisionOutcome {
                verdict: Verdict::Satisfiable,
                witness: Some(w),
                counter: None,
                certificate: Some(Certificate::Tree(tree)),
            });
        }
    }
    Ok(DecisionOutcome::bare(Verdict::Unsatisfiable))
}

/// A measure row `Σ_{a∈V} μ_a ≥ θ` or `> θ`.
type MassRow = (Vec<usize>, bool, Rational);

struct Skeleton<'a> {
    sig: &'a Signature,
    q: &'a QSentence,
    kinds: Vec<QuantifierKind>,
    universe: Vec<u64>,
    positive: bool,
    /// Whether any level at or after `k` adds a measure row.
    rows_below: Vec<bool>,
    viable_memo: HashMap<Vec<usize>, bool>,
}

impl<'a> Skeleton<'a> {
    fn new(sig: &'a Signature, q: &'a QSentence, universe: Vec<u64>, positive: bool) -> Skeleton<'a> {
        let kinds = q.kinds();
        let mut rows_below = vec![false; kinds.len() + 1];
        for k in (0..kinds.len()).rev() {
            rows_below[k] = rows_below[k + 1] || kinds[k].threshold().is_some();
        }
        Skeleton { sig, q, kinds, universe, positive, rows_below, viable_memo: HashMap::new() }
    }

    fn matrix_holds(&self, prefix: &[usize]) -> bool {
        let env: HashMap<&str, u64> =
            self.q.prefix.iter().zip(prefix).map(|((_, x), &a)| (x.as_str(), self.universe[a])).collect();
        eval_cell(self.sig, &self.q.matrix, &env)
    }

    /// Some completion below `prefix` meets every node's non-measure
    /// condition and the matrix on every bran.
    fn viable(&mut self, prefix: &[usize]) -> bool {
        if let Some(&v) = self.viable_memo.get(prefix) {
            return v;
        }
        let level = prefix.len();
        let v = if level == self.kinds.len() {
            self.matrix_holds(prefix)
        } else {
            let n = self.universe.len();
            let mut child = prefix.to_vec();
            let mut ok_child = |me: &mut Self, a: usize| {
                child.push(a);
                let r = me.viable(&child);
                child.pop();
                r
            };
            match &self.kinds[level] {
                QuantifierKind::Forall => (0..n).all(|a| ok_child(self, a)),
                QuantifierKind::WeakAtLeast(t) if t.is_zero() => true,
                QuantifierKind::StrongGreater(t) if t.is_one() => false,
                _ => (0..n).any(|a| ok_child(self, a)),
            }
        };
        self.viable_memo.insert(prefix.to_vec(), v);
        v
    }

    fn candidates(&mut self, prefix: &[usize]) -> Vec<Vec<usize>> {
        let level = prefix.len();
        let n = self.universe.len();
        let mut good = Vec::new();
        let mut child = prefix.to_vec();
        for a in 0..n {
            child.push(a);
            if self.viable(&child) {
                good.push(a);
            }
            child.pop();
        }
        let free_below = !self.rows_below[level + 1];
        match &self.kinds[level] {
            QuantifierKind::Forall => {
                if good.len() == n {
                    vec![good]
                } else {
                    Vec::new()
                }
            }
            QuantifierKind::Exists => {
                let take = if free_below { good.len().min(1) } else { good.len() };
                good.iter().take(take).map(|&a| vec![a]).collect()
            }
            kind => {
                if free_below {
                    return vec![good];
                }
                let allow_empty = matches!(kind, QuantifierKind::WeakAtLeast(t) if t.is_zero());
                let mut subs: Vec<Vec<usize>> = (0..1u64 << good.len())
                    .map(|m| good.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &a)| a).collect())
                    .filter(|s: &Vec<usize>| allow_empty || !s.is_empty())
                    .collect();
                subs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
                subs
            }
        }
    }

    fn lp(&self, rows: &[MassRow]) -> Option<Vec<Rational>> {
        let n = self.universe.len();
        let mut s = LinSystem::new(self.universe.iter().map(|&c| format!("mu[{}]", cell_label(self.sig, c))).collect());
        s.equal(vec![Rational::one(); n], Rational::one());
        for a in 0..n {
            let u = s.unit(a, Rational::one());
            if self.positive {
                s.gt(u, Rational::zero());
            } else {
                s.ge(u, Rational::zero());
            }
        }
        for (set, strict, t) in rows {
            let mut co = vec![Rational::zero(); n];
            for &a in set {
                co[a] = Rational::one();
            }
            if *strict {
                s.gt(co, t.clone());
            } else {
                s.ge(co, t.clone());
            }
        }
        feasible(&s)
    }

    fn solve(&mut self) -> Option<(Vec<Rational>, QTree)> {
        if self.kinds.is_empty() {
            return if self.viable(&[]) { self.lp(&[]).map(|mu| (mu, QTree::empty())) } else { None };
        }
        if !self.viable(&[]) {
            return None;
        }
        let mut pending = vec![Vec::new()];
        let mut rows = Vec::new();
        let mut chosen = BTreeMap::new();
        let mu = self.dfs(&mut pending, &mut rows, &mut chosen)?;
        let root = build_node(&chosen, &mut Vec::new(), self.kinds.len());
        Some((mu, QTree { levels: self.kinds.clone(), root: Some(root) }))
    }

    fn dfs(
        &mut self,
        pending: &mut Vec<Vec<usize>>,
        rows: &mut Vec<MassRow>,
        chosen: &mut BTreeMap<Vec<usize>, Vec<usize>>,
    ) -> Option<Vec<Rational>> {
        let Some(prefix) = pending.pop() else {
            return self.lp(rows);
        };
        let level = prefix.len();
        for set in self.candidates(&prefix) {
            let row = match &self.kinds[level] {
                QuantifierKind::WeakAtLeast(t) => Some((set.clone(), false, t.clone())),
                QuantifierKind::StrongGreater(t) => Some((set.clone(), true, t.clone())),
                _ => None,
            };
            let added = match row {
                Some(r) if !rows.contains(&r) => {
                    rows.push(r);
                    if self.lp(rows).is_none() {
                        rows.pop();
                        continue;
                    }
                    true
                }
                _ => false,
            };
            let before = pending.len();
            if level + 1 < self.kinds.len() {
                for &a in set.iter().rev() {
                    let mut c = prefix.clone();
                    c.push(a);
                    pending.push(c);
                }
            }
            chosen.insert(prefix.clone(), set);
            if let Some(mu) = self.dfs(pending, rows, chosen) {
                return Some(mu);
            }
            chosen.remove(&prefix);
            pending.truncate(before);
            if added {
                rows.pop();
            }
        }
        pending.push(prefix);
        None
    }

    fn model(&self, mu: Vec<Rational>) -> FiniteModel {
        let universe = self.universe.iter().map(|&c| cell_label(self.sig, c)).collect();
        let relations = self
            .sig
            .predicates()
            .iter()
            .enumerate()
            .map(|(i, (p, _))| {
                let set: BTreeSet<Vec<usize>> =
                    self.universe.iter().enumerate().filter(|(_, &c)| c >> i & 1 == 1).map(|(a, _)| vec![a]).collect();
                (p.clone(), set)
            })
            .collect();
        FiniteModel::new(self.sig.clone(), universe, relations, BTreeMap::new(), mu).expect("LP point is a probability measure")
    }
}

fn build_node(chosen: &BTreeMap<Vec<usize>, Vec<usize>>, prefix: &mut Vec<usize>, height: usize) -> QNode {
    let members = &chosen[prefix.as_slice()];
    if prefix.len() + 1 == height {
        return QNode::leaf(members.iter().copied());
    }
    let children: Vec<(usize, QNode)> = members
        .iter()
        .map(|&a| {
            prefix.push(a);
            let c = build_node(chosen, prefix, height);
            prefix.pop();
            (a, c)
        })
        .collect();
    let mut node = QNode::with_children(children);
    node.members = members.iter().copied().collect();
    node
}

fn eval_cell(sig: &Signature, f: &Formula, env: &HashMap<&str, u64>) -> bool {
    match f {
        Formula::Atom(p, args) => {
            let i = sig.pred_index(p).expect("checked against the signature");
            match &args[0] {
                Term::Var(x) => env[x.as_str()] >> i & 1 == 1,
                Term::Const(_) => unreachable!("monadic relational signatures have no constants"),
            }
        }
        Formula::Equal(..) => unreachable!("monadic relational signatures have no equality"),
        Formula::Not(g) => !eval_cell(sig, g, env),
        Formula::And(gs) => gs.iter().all(|g| eval_cell(sig, g, env)),
        Formula::Or(gs) => gs.iter().any(|g| eval_cell(sig, g, env)),
        Formula::Implies(a, b) => !eval_cell(sig, a, env) || eval_cell(sig, b, env),
        Formula::Iff(a, b) => eval_cell(sig, a, env) == eval_cell(sig, b, env),
        Formula::Forall(..) | Formula::Exists(..) => unreachable!("matrix is quantifier-free"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::syntax::build::*;

    fn p() -> Signature {
        Signature::monadic(&["P"])
    }

    #[test]
    fn paraconsistent_at_half() {
        let f = exists("x", forall("y", and(vec![app("P", &["x"]), not(app("P", &["y"]))])));
        let out = decide_monadic_coerced(&p(), &f, Mode::E, &rat(1, 2)).unwrap();
        assert_eq!(out.verdict, Verdict::Satisfiable);
        let w = out.witness.unwrap();
        let neg = w.element("_").unwrap();
        assert!(w.measure[neg] >= rat(1, 2));
    }

    #[test]
    fn forced_singleton_under_f() {
        let f = forall("x", exists("y", and(vec![app("P", &["x"]), app("P", &["y"])])));
        let out = decide_monadic_coerced(&p(), &f, Mode::F, &int(0)).unwrap();
        assert_eq!(out.verdict, Verdict::Satisfiable);
        let w = out.witness.unwrap();
        assert_eq!(w.universe, vec!["P".to_string()]);
        assert_eq!(w.measure, vec![int(1)]);
    }

    #[test]
    fn overfull_thresholds_are_unsatisfiable() {
        let q = QSentence::new(
            vec![
                (QuantifierKind::WeakAtLeast(rat(3, 4)), "x".into()),
                (QuantifierKind::WeakAtLeast(rat(3, 4)), "y".into()),
            ],
            and(vec![app("P", &["x"]), not(app("P", &["y"]))]),
        )
        .unwrap();
        assert_eq!(decide_monadic(&p(), &q).unwrap().verdict, Verdict::Unsatisfiable);
    }

    #[test]
    fn sibling_subtrees_share_the_measure() {
        // both children want 3/4 of a different cell; only one may be kept
        let q = QSentence::new(
            vec![(QuantifierKind::WeakAtLeast(int(0)), "x".into()), (QuantifierKind::WeakAtLeast(rat(3, 4)), "y".into())],
            iff(app("P", &["x"]), app("P", &["y"])),
        )
        .unwrap();
        let out = decide_monadic(&p(), &q).unwrap();
        assert_eq!(out.verdict, Verdict::Satisfiable);
        let Some(Certificate::Tree(t)) = out.certificate else { panic!("tree certificate expected") };
        assert!(t.root.unwrap().members.len() < 2);
    }

    #[test]
    fn errors() {
        let sig = Signature::new(vec![("R".into(), 2)], vec![], false).unwrap();
        let q = QSentence::new(vec![], Formula::And(vec![])).unwrap();
        assert_eq!(decide_monadic(&sig, &q), Err(DecideError::NotMonadic));
        let f = exists("x", app("P", &["x"]));
        assert_eq!(decide_monadic_coerced(&p(), &f, Mode::F, &int(1)), Err(DecideError::EpsilonOne));
    }
}
