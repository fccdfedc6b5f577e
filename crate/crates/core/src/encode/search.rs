//! Bounded search for a model satisfying every part at once.

use super::{Group, TMEncoding};
use crate::model::FiniteModel;
use crate::semantics::{compile_q_suffix, q_holds, Compiled, PartialModel};
use num_integer::Integer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_size: usize,
    /// Largest weight total; zero weights are allowed.
    pub max_denominator: u64,
}

/// A model on at most `max_size` elements with weights summing to at most
/// `max_denominator` on which every part holds, found by splitting on the
/// first unknown atom a three-valued evaluation consults.
pub fn bounded_search(enc: &TMEncoding, opts: SearchOptions) -> Option<FiniteModel> {
    let mut order: Vec<usize> = (0..enc.parts.len()).collect();
    // cheap measure constraints first
    order.sort_by_key(|&i| match enc.parts[i].group {
        Group::Forcing => 0,
        Group::Half => 1,
        Group::Zero => 2,
    });
    let compiled: Vec<Compiled> = order
        .iter()
        .map(|&i| compile_q_suffix(&enc.sig, &enc.parts[i].q, 0, &[]).expect("parts match their signature"))
        .collect();
    let nconst = enc.sig.constants().len();
    for n in 1..=opts.max_size {
        for weights in weight_vectors(n, opts.max_denominator) {
            for k in 0..n.pow(nconst as u32) {
                let consts: Vec<usize> = (0..nconst).map(|j| k / n.pow(j as u32) % n).collect();
                let mut pm = PartialModel::new(&enc.sig, weights.clone(), consts);
                let open: Vec<usize> = (0..compiled.len()).collect();
                if dfs(&compiled, &mut pm, &open) {
                    let labels = (1..=n).map(|i| format!("e{i}")).collect();
                    let m = pm.complete(&enc.sig, labels);
                    debug_assert!(enc.parts.iter().all(|p| q_holds(&m, &p.q).unwrap_or(false)));
                    return Some(m);
                }
            }
        }
    }
    None
}

fn dfs(compiled: &[Compiled], pm: &mut PartialModel, open: &[usize]) -> bool {
    let mut still = Vec::with_capacity(open.len());
    let mut probe = None;
    for &i in open {
        match compiled[i].holds3(pm) {
            (Some(true), _) => {}
            (Some(false), _) => return false,
            (None, p) => {
                still.push(i);
                if probe.is_none() {
                    probe = p;
                }
            }
        }
    }
    let Some(p) = probe else { return still.is_empty() };
    for v in [false, true] {
        pm.set(p, Some(v));
        if dfs(compiled, pm, &still) {
            return true;
        }
    }
    pm.set(p, None);
    false
}

/// Weight vectors of length `n` with total in `1..=max_total` and gcd 1.
fn weight_vectors(n: usize, max_total: u64) -> Vec<Vec<u64>> {
    fn rec(left: usize, total: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for w in 0..=total {
            acc.push(w);
            rec(left - 1, total - w, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=max_total {
        let mut here = Vec::new();
        rec(n, total, &mut Vec::new(), &mut here);
        out.extend(here.into_iter().filter(|w| w.iter().fold(0u64, |g, &x| g.gcd(&x)) == 1));
    }
    out
}
