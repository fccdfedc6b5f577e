//! Evaluation of compiled formulas on a model with integer weights.

use super::compile::{Arg, Compiled, Node, QKind};
use crate::model::FiniteModel;
use crate::rat::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashSet;
use std::ops::AddAssign;

const DENSE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone)]
pub(crate) enum Table {
    Dense { n: usize, bits: Vec<bool> },
    Sparse(HashSet<Vec<usize>>),
}

impl Table {
    fn build(m: &FiniteModel, pred: &str, arity: usize) -> Table {
        let n = m.size();
        let cells = n.checked_pow(arity as u32).filter(|&c| c <= DENSE_LIMIT);
        let tuples = m.relations.get(pred);
        match cells {
            Some(c) => {
                let mut bits = vec![false; c];
                for t in tuples.into_iter().flatten() {
                    bits[t.iter().fold(0, |acc, &e| acc * n + e)] = true;
                }
                Table::Dense { n, bits }
            }
            None => Table::Sparse(tuples.into_iter().flatten().cloned().collect()),
        }
    }

    #[inline]
    pub(crate) fn get(&self, args: &[Arg], env: &[usize], consts: &[usize]) -> bool {
        let val = |a: &Arg| match *a {
            Arg::Var(v) => env[v],
            Arg::Const(c) => consts[c],
        };
        match self {
            Table::Dense { n, bits } => bits[args.iter().fold(0, |acc, a| acc * n + val(a))],
            Table::Sparse(set) => set.contains(&args.iter().map(val).collect::<Vec<_>>()),
        }
    }
}

pub(crate) trait Weight: Clone + Ord + Zero + for<'a> AddAssign<&'a Self> + Send + Sync {
    fn from_big(b: &BigInt) -> Self;
}

impl Weight for i64 {
    fn from_big(b: &BigInt) -> i64 {
        b.to_i64().expect("weight fits")
    }
}

impl Weight for BigInt {
    fn from_big(b: &BigInt) -> BigInt {
        b.clone()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Masses<W> {
    /// Elements of positive mass, heaviest first.
    pub order: Vec<usize>,
    pub weights: Vec<W>,
    /// `suffix[j]` is the total weight of `order[j..]`.
    pub suffix: Vec<W>,
    pub total_big: BigInt,
}

impl<W: Weight> Masses<W> {
    fn new(big: &[BigInt]) -> Self {
        let mut order: Vec<usize> = (0..big.len()).filter(|&i| !big[i].is_zero()).collect();
        order.sort_by(|&a, &b| big[b].cmp(&big[a]).then(a.cmp(&b)));
        let weights: Vec<W> = order.iter().map(|&i| W::from_big(&big[i])).collect();
        let mut suffix = vec![W::zero(); weights.len() + 1];
        for j in (0..weights.len()).rev() {
            let mut s = suffix[j + 1].clone();
            s += &weights[j];
            suffix[j] = s;
        }
        let total_big = big.iter().sum();
        Masses { order, weights, suffix, total_big }
    }

    /// Smallest integer mass meeting the threshold.
    fn target(&self, theta: &Rational, strict: bool) -> W {
        let scaled = theta * Rational::from_integer(self.total_big.clone());
        let k = if strict { scaled.floor().to_integer() + BigInt::one() } else { scaled.ceil().to_integer() };
        let k = k.max(BigInt::zero()).min(&self.total_big + BigInt::one());
        W::from_big(&k)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum WeightSet {
    Small(Masses<i64>),
    Big(Masses<BigInt>),
}

/// A model prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ModelView {
    pub(crate) n: usize,
    pub(crate) tables: Vec<Table>,
    pub(crate) consts: Vec<usize>,
    pub(crate) weights: WeightSet,
}

impl ModelView {
    /// `m` is assumed valid.
    pub fn new(m: &FiniteModel) -> ModelView {
        let tables = m.sig.predicates().iter().map(|(p, a)| Table::build(m, p, *a)).collect();
        let consts = m.sig.constants().iter().map(|c| m.constants.get(c).copied().unwrap_or(0)).collect();
        let lcm = m.measure.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let big: Vec<BigInt> = m.measure.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let total: BigInt = big.iter().sum();
        let weights = if total.bits() < 62 {
            WeightSet::Small(Masses::new(&big))
        } else {
            WeightSet::Big(Masses::new(&big))
        };
        ModelView { n: m.size(), tables, consts, weights }
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

pub(crate) struct Run<'a, W> {
    pub view: &'a ModelView,
    pub masses: &'a Masses<W>,
    pub targets: Vec<W>,
}

impl<W: Weight> Run<'_, W> {
    pub(crate) fn eval(&self, node: &Node, env: &mut [usize]) -> bool {
        match node {
            Node::Bool(b) => *b,
            Node::Lit { rel, args, pos } => self.view.tables[*rel].get(args, env, &self.view.consts) == *pos,
            Node::Eq { a, b, pos } => {
                let v = |x: &Arg| match *x {
                    Arg::Var(i) => env[i],
                    Arg::Const(c) => self.view.consts[c],
                };
                (v(a) == v(b)) == *pos
            }
            Node::And(gs) => gs.iter().all(|g| self.eval(g, env)),
            Node::Or(gs) => gs.iter().any(|g| self.eval(g, env)),
            Node::Quant { kind, var, body } => match kind {
                QKind::Exists => (0..self.view.n).any(|a| {
                    env[*var] = a;
                    self.eval(body, env)
                }),
                QKind::Forall => (0..self.view.n).all(|a| {
                    env[*var] = a;
                    self.eval(body, env)
                }),
                QKind::Mass(t) => self.mass_at_least(&self.targets[*t], *var, body, env),
            },
        }
    }

    fn mass_at_least(&self, k: &W, var: usize, body: &Node, env: &mut [usize]) -> bool {
        let ms = self.masses;
        if *k <= W::zero() {
            return true;
        }
        if ms.suffix[0] < *k {
            return false;
        }
        let mut sum = W::zero();
        for (j, &a) in ms.order.iter().enumerate() {
            let mut reach = sum.clone();
            reach += &ms.suffix[j];
            if reach < *k {
                return false;
            }
            env[var] = a;
            if self.eval(body, env) {
                sum += &ms.weights[j];
                if sum >= *k {
                    return true;
                }
            }
        }
        false
    }
}

/// Runs `f` with the run set up for whichever weight width the view uses.
pub(crate) fn with_run<R>(view: &ModelView, c: &Compiled, f: impl FnOnce(&dyn Evaluate) -> R) -> R {
    match &view.weights {
        WeightSet::Small(ms) => {
            let targets = c.thresholds.iter().map(|(t, s)| ms.target(t, *s)).collect();
            f(&Run { view, masses: ms, targets })
        }
        WeightSet::Big(ms) => {
            let targets = c.thresholds.iter().map(|(t, s)| ms.target(t, *s)).collect();
            f(&Run { view, masses: ms, targets })
        }
    }
}

pub(crate) trait Evaluate {
    fn eval_node(&self, node: &Node, env: &mut [usize]) -> bool;
}

impl<W: Weight> Evaluate for Run<'_, W> {
    fn eval_node(&self, node: &Node, env: &mut [usize]) -> bool {
        self.eval(node, env)
    }
}

impl Compiled {
    /// Truth on `view` with free variables taking the values in `env`
    /// (ordered as [`Compiled::free_vars`]).
    pub fn holds(&self, view: &ModelView, env: &[usize]) -> bool {
        let mut slots = vec![0; self.nvars.max(1)];
        slots[..env.len()].copy_from_slice(env);
        with_run(view, self, |r| r.eval_node(&self.root, &mut slots))
    }

    pub fn holds_in(&self, view: &ModelView) -> bool {
        self.holds(view, &[])
    }
}
