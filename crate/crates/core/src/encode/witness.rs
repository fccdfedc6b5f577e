//! The model of a halting run.

use super::sentences::{signature, state_pred};
use super::{Simulation, TuringMachine};
use crate::model::FiniteModel;
use crate::rat::{rat, Rational};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

fn pow2(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Universe `1..=2m` for a run halting at time `m`: `N = {1..m}`, masses
/// `2^-(i+1)` on `i` and `i+m` for `i < m`, `2^-m` on `m` and `2m`, and
/// `R(i, j)` iff `i ≥ j-m ≥ 1`. A run halting at time 1 is stretched to
/// `m = 2` by repeating its only configuration, since `minc` needs mass 1/4.
pub fn witness_model(tm: &TuringMachine, max_steps: usize) -> Option<FiniteModel> {
    let Simulation::Halted { mut history, .. } = tm.simulate(max_steps) else { return None };
    while history.len() < 2 {
        history.push(history[history.len() - 1].clone());
    }
    let m = history.len();
    let sig = signature(tm);
    let universe: Vec<String> = (1..=2 * m).map(|i| i.to_string()).collect();
    let mut measure = vec![rat(0, 1); 2 * m];
    for i in 1..m {
        measure[i - 1] = pow2(i + 1);
        measure[i + m - 1] = pow2(i + 1);
    }
    measure[m - 1] = pow2(m);
    measure[2 * m - 1] = pow2(m);
    let mut rel: BTreeMap<String, BTreeSet<Vec<usize>>> =
        sig.predicates().iter().map(|(p, _)| (p.clone(), BTreeSet::new())).collect();
    let mut put = |p: &str, t: Vec<usize>| {
        rel.get_mut(p).expect("predicate of the encoding").insert(t.into_iter().map(|e| e - 1).collect());
    };
    for i in 1..=2 * m {
        put("eq", vec![i, i]);
        for j in i + 1..=2 * m {
            put("lt", vec![i, j]);
        }
        for j in 1..=2 * m {
            if j > m && i + m >= j {
                put("R", vec![i, j]);
            }
        }
    }
    for i in 1..=m {
        put("N", vec![i]);
    }
    for (k, cfg) in history.iter().enumerate() {
        let time = k + 1;
        put(&state_pred(&cfg.state), vec![time]);
        put("H", vec![cfg.head, time]);
        for cell in 1..=2 * m {
            if cfg.symbol(cell) == 1 {
                put("T", vec![cell, time]);
            }
        }
    }
    let constants = BTreeMap::from([("minc".to_string(), 0), ("maxc".to_string(), m - 1)]);
    Some(FiniteModel::new(sig, universe, rel, constants, measure).expect("witness construction is a valid model"))
}
