//! Phase-I simplex over exact rationals with Bland's rule.

use crate::rat::Rational;
use num_traits::{Signed, Zero};

/// A point with `A x = b`, `x ≥ 0`, or `None` when there is none.
pub(crate) fn phase1(a: &[Vec<Rational>], b: &[Rational], nvars: usize) -> Option<Vec<Rational>> {
    let m = a.len();
    if m == 0 {
        return Some(vec![Rational::zero(); nvars]);
    }
    let width = nvars + m;
    // tableau rows: coefficients over original and artificial columns, then rhs
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (row, rhs) in a.iter().zip(b) {
        let flip = rhs.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|c| if flip { -c } else { c.clone() }).collect();
        r.resize(width + 1, Rational::zero());
        r[width] = if flip { -rhs } else { rhs.clone() };
        t.push(r);
    }
    for (i, r) in t.iter_mut().enumerate() {
        r[nvars + i] = Rational::from_integer(1.into());
    }
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();
    // reduced gains of the phase-one objective (minimize the artificial sum)
    let mut z = vec![Rational::zero(); width + 1];
    for r in &t {
        for j in 0..nvars {
            z[j] += &r[j];
        }
        z[width] += &r[width];
    }
    while let Some(enter) = (0..width).find(|&j| z[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            // the phase-one objective is bounded below by zero, so an
            // improving column always has a positive entry
            unreachable!("phase one cannot be unbounded");
        };
        pivot(&mut t, &mut z, p, enter);
        basis[p] = enter;
    }
    if !z[width].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); nvars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nvars {
            x[bv] = t[i][width].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], z: &mut [Rational], p: usize, q: usize) {
    let piv = t[p][q].clone();
    for v in t[p].iter_mut() {
        if !v.is_zero() {
            *v /= &piv;
        }
    }
    let prow = t[p].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for &j in &nz {
            let d = &f * &prow[j];
            row[j] -= d;
        }
    }
    if !z[q].is_zero() {
        let f = z[q].clone();
        for &j in &nz {
            let d = &f * &prow[j];
            z[j] -= d;
        }
    }
}
