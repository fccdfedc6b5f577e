//! A strictness-aware Fourier–Motzkin oracle and random small systems.

use epsilogic::lp::{LinSystem, Rel};
use epsilogic::rat::{int, rat, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Fourier–Motzkin elimination tracking strictness; rows are `a·x ≥ b` or
/// `a·x > b`.
pub fn fm_feasible(s: &LinSystem) -> bool {
    let mut rows: Vec<(Vec<Rational>, bool, Rational)> = Vec::new();
    for r in &s.rows {
        match r.rel {
            Rel::Ge => rows.push((r.coeffs.clone(), false, r.rhs.clone())),
            Rel::Gt => rows.push((r.coeffs.clone(), true, r.rhs.clone())),
            Rel::Eq => {
                rows.push((r.coeffs.clone(), false, r.rhs.clone()));
                rows.push((r.coeffs.iter().map(|c| -c).collect(), false, -r.rhs.clone()));
            }
        }
    }
    for j in 0..s.nvars() {
        let (zero, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r.0[j].is_zero());
        let (pos, neg): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r.0[j].is_positive());
        rows = zero;
        for p in &pos {
            for n in &neg {
                let fp = -n.0[j].clone();
                let fnn = p.0[j].clone();
                let co = p.0.iter().zip(&n.0).map(|(a, b)| a * &fp + b * &fnn).collect();
                rows.push((co, p.1 || n.1, &p.2 * &fp + &n.2 * &fnn));
            }
        }
    }
    rows.iter().all(|(_, strict, b)| if *strict { b.is_negative() } else { !b.is_positive() })
}

pub fn system(max_vars: usize, max_rows: usize) -> impl Strategy<Value = LinSystem> {
    (1..=max_vars).prop_flat_map(move |n| {
        let row = (
            proptest::collection::vec(-3i64..=3, n),
            prop_oneof![2 => Just(Rel::Ge), 2 => Just(Rel::Gt), 1 => Just(Rel::Eq)],
            -4i64..=4,
            1i64..=3,
        );
        proptest::collection::vec(row, 1..=max_rows).prop_map(move |rows| {
            let mut s = LinSystem::with_vars(n, "x");
            for (co, rel, num, den) in rows {
                s.push(co.into_iter().map(int).collect(), rel, rat(num, den));
            }
            s
        })
    })
}

pub fn relaxed(s: &LinSystem) -> LinSystem {
    let mut r = s.clone();
    for row in r.rows.iter_mut() {
        if row.rel == Rel::Gt {
            row.rel = Rel::Ge;
        }
    }
    r
}
