//! Exhaustive enumeration of small finite models.

use super::FiniteModel;
use crate::rat::Rational;
use crate::syntax::Signature;
use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub max_size: usize,
    pub max_denominator: u64,
    /// Also yield measures that put mass 0 on some elements.
    pub zero_masses: bool,
}

/// Models with at most `max_size` elements and positive weights `t_j/‖t‖`,
/// `‖t‖ ≤ max_denominator`.
pub fn enumerate_models(sig: &Signature, max_size: usize, max_denominator: u64) -> ModelEnumerator {
    enumerate_models_with(sig, EnumOptions { max_size, max_denominator, zero_masses: false })
}

pub fn enumerate_models_with(sig: &Signature, opts: EnumOptions) -> ModelEnumerator {
    ModelEnumerator {
        sig: sig.clone(),
        opts,
        total: 1,
        len: 0,
        shapes: Vec::new(),
        shape_idx: 0,
        cur: None,
    }
}

/// Order: weight total, then universe size, then weights lexicographically,
/// then relation bits, then constant interpretations.
pub struct ModelEnumerator {
    sig: Signature,
    opts: EnumOptions,
    total: u64,
    len: usize,
    shapes: Vec<Vec<u64>>,
    shape_idx: usize,
    cur: Option<Current>,
}

struct Current {
    weights: Vec<u64>,
    bits: Vec<bool>,
    consts: Vec<usize>,
}

fn compositions(total: u64, parts: usize, min: u64, out: &mut Vec<Vec<u64>>, acc: &mut Vec<u64>) {
    if parts == 1 {
        if total >= min {
            acc.push(total);
            out.push(acc.clone());
            acc.pop();
        }
        return;
    }
    let reserve = min * (parts as u64 - 1);
    if total < reserve {
        return;
    }
    for first in min..=total - reserve {
        acc.push(first);
        compositions(total - first, parts - 1, min, out, acc);
        acc.pop();
    }
}

impl ModelEnumerator {
    fn next_shape(&mut self) -> Option<Vec<u64>> {
        if self.opts.max_size == 0 {
            return None;
        }
        loop {
            if self.shape_idx < self.shapes.len() {
                self.shape_idx += 1;
                return Some(self.shapes[self.shape_idx - 1].clone());
            }
            self.len += 1;
            let len_cap = if self.opts.zero_masses {
                self.opts.max_size
            } else {
                self.opts.max_size.min(self.total as usize)
            };
            if self.len > len_cap {
                self.len = 1;
                self.total += 1;
            }
            if self.total > self.opts.max_denominator {
                return None;
            }
            let min = if self.opts.zero_masses { 0 } else { 1 };
            let mut all = Vec::new();
            compositions(self.total, self.len, min, &mut all, &mut Vec::new());
            all.retain(|w| w.iter().fold(0u64, |g, &x| g.gcd(&x)) == 1);
            self.shapes = all;
            self.shape_idx = 0;
        }
    }

    fn bit_count(&self, n: usize) -> usize {
        self.sig.predicates().iter().map(|(_, a)| n.pow(*a as u32)).sum()
    }

    fn build(&self, c: &Current) -> FiniteModel {
        let n = c.weights.len();
        let total: u64 = c.weights.iter().sum();
        let universe = (1..=n).map(|i| format!("e{i}")).collect();
        let mut relations = BTreeMap::new();
        let mut offset = 0;
        for (p, a) in self.sig.predicates() {
            let count = n.pow(*a as u32);
            let mut set = BTreeSet::new();
            for idx in 0..count {
                if c.bits[offset + idx] {
                    set.insert(decode(idx, n, *a));
                }
            }
            offset += count;
            relations.insert(p.clone(), set);
        }
        let constants = self.sig.constants().iter().cloned().zip(c.consts.iter().copied()).collect();
        let measure = c
            .weights
            .iter()
            .map(|&w| Rational::new(BigInt::from(w), BigInt::from(total)))
            .collect();
        FiniteModel { sig: self.sig.clone(), universe, relations, constants, measure }
    }
}

/// Tuple with index `idx` in base-`n` order, most significant first.
pub(crate) fn decode(mut idx: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

fn bump_bits(bits: &mut [bool]) -> bool {
    for b in bits.iter_mut() {
        if *b {
            *b = false;
        } else {
            *b = true;
            return true;
        }
    }
    false
}

fn bump_digits(d: &mut [usize], base: usize) -> bool {
    for x in d.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

impl Iterator for ModelEnumerator {
    type Item = FiniteModel;

    fn next(&mut self) -> Option<FiniteModel> {
        if self.cur.is_none() {
            let weights = self.next_shape()?;
            let n = weights.len();
            self.cur = Some(Current {
                bits: vec![false; self.bit_count(n)],
                consts: vec![0; self.sig.constants().len()],
                weights,
            });
        }
        let c = self.cur.as_mut().unwrap();
        let n = c.weights.len();
        let snapshot = Current { weights: c.weights.clone(), bits: c.bits.clone(), consts: c.consts.clone() };
        if !bump_digits(&mut c.consts, n) && !bump_bits(&mut c.bits) {
            self.cur = None;
        }
        Some(self.build(&snapshot))
    }
}
