//! Exact feasibility of linear systems with weak, strict and equality rows.

mod simplex;

use crate::rat::{fmt_rational, int, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Ge,
    Gt,
    Eq,
}

/// `coeffs · x rel rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

impl Row {
    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = self.coeffs.iter().zip(x).fold(Rational::zero(), |acc, (c, v)| acc + c * v);
        match self.rel {
            Rel::Ge => lhs >= self.rhs,
            Rel::Gt => lhs > self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinSystem {
    pub vars: Vec<String>,
    pub rows: Vec<Row>,
}

impl LinSystem {
    pub fn new(vars: Vec<String>) -> LinSystem {
        LinSystem { vars, rows: Vec::new() }
    }

    pub fn with_vars(n: usize, prefix: &str) -> LinSystem {
        LinSystem::new((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rel: Rel, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars.len(), "row length must match the variable count");
        self.rows.push(Row { coeffs, rel, rhs });
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Rel::Ge, rhs);
    }

    pub fn gt(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Rel::Gt, rhs);
    }

    pub fn equal(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Rel::Eq, rhs);
    }

    pub fn le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs.into_iter().map(|c| -c).collect(), Rel::Ge, -rhs);
    }

    pub fn lt(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs.into_iter().map(|c| -c).collect(), Rel::Gt, -rhs);
    }

    pub fn has_strict(&self) -> bool {
        self.rows.iter().any(|r| r.rel == Rel::Gt)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.nvars() && self.rows.iter().all(|r| r.holds_at(x))
    }

    /// Unit vector scaled by `c` at position `i`.
    pub fn unit(&self, i: usize, c: Rational) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.nvars()];
        v[i] = c;
        v
    }
}

impl fmt::Display for LinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let mut terms = Vec::new();
            for (c, x) in r.coeffs.iter().zip(&self.vars) {
                if c.is_zero() {
                    continue;
                }
                if c.is_one() {
                    terms.push(x.clone());
                } else {
                    terms.push(format!("{}*{x}", fmt_rational(c)));
                }
            }
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let op = match r.rel {
                Rel::Ge => ">=",
                Rel::Gt => ">",
                Rel::Eq => "=",
            };
            writeln!(f, "{lhs} {op} {}", fmt_rational(&r.rhs))?;
        }
        Ok(())
    }
}

/// `x = base + basis · free`, the solution space of the equality rows.
struct Affine {
    /// For each original variable: constant term and coefficients over the
    /// free variables.
    exprs: Vec<(Rational, Vec<Rational>)>,
    nfree: usize,
}

impl Affine {
    fn eval(&self, free: &[Rational]) -> Vec<Rational> {
        self.exprs
            .iter()
            .map(|(c, co)| co.iter().zip(free).fold(c.clone(), |acc, (a, v)| acc + a * v))
            .collect()
    }

    /// Rewrites `coeffs · x` as `coeffs' · free + k`.
    fn substitute(&self, coeffs: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut out = vec![Rational::zero(); self.nfree];
        let mut k = Rational::zero();
        for (c, (base, co)) in coeffs.iter().zip(&self.exprs) {
            if c.is_zero() {
                continue;
            }
            k += c * base;
            for (o, a) in out.iter_mut().zip(co) {
                *o += c * a;
            }
        }
        (out, k)
    }
}

/// Gaussian elimination of the equality rows, pivoting on the leftmost
/// nonzero column. `None` when the equalities are inconsistent.
fn eliminate(n: usize, eqs: &[&Row]) -> Option<Affine> {
    let mut rows: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(r.rhs.clone());
            v
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for col in 0..n {
        let Some(p) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(next, p);
        let piv = rows[next][col].clone();
        for v in rows[next].iter_mut() {
            *v /= &piv;
        }
        let prow = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != next && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push((next, col));
        next += 1;
    }
    if rows[next..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let nfree = free_cols.len();
    let mut exprs = vec![(Rational::zero(), vec![Rational::zero(); nfree]); n];
    for (k, &c) in free_cols.iter().enumerate() {
        exprs[c].1[k] = Rational::one();
    }
    for &(r, c) in &pivots {
        let base = rows[r][n].clone();
        let co = free_cols.iter().map(|&fc| -rows[r][fc].clone()).collect();
        exprs[c] = (base, co);
    }
    Some(Affine { exprs, nfree })
}

/// Rows `a·y ≥ b` over free variables `y`; a point or `None`.
fn weak_free(n: usize, rows: &[(Vec<Rational>, Rational)]) -> Option<Vec<Rational>> {
    // y = y⁺ − y⁻, one surplus per row: a·y⁺ − a·y⁻ − s = b
    let m = rows.len();
    let nv = 2 * n + m;
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (i, (co, rhs)) in rows.iter().enumerate() {
        let mut r = vec![Rational::zero(); nv];
        for j in 0..n {
            r[j] = co[j].clone();
            r[n + j] = -co[j].clone();
        }
        r[2 * n + i] = int(-1);
        a.push(r);
        b.push(rhs.clone());
    }
    let x = simplex::phase1(&a, &b, nv)?;
    Some((0..n).map(|j| &x[j] - &x[n + j]).collect())
}

/// Equalities eliminated, remaining rows over the free variables.
struct Reduced {
    affine: Affine,
    weak: Vec<(Vec<Rational>, Rational)>,
    strict: Vec<(Vec<Rational>, Rational)>,
}

fn reduce(s: &LinSystem) -> Option<Reduced> {
    let eqs: Vec<&Row> = s.rows.iter().filter(|r| r.rel == Rel::Eq).collect();
    let affine = eliminate(s.nvars(), &eqs)?;
    let mut weak = Vec::new();
    let mut strict = Vec::new();
    for r in s.rows.iter().filter(|r| r.rel != Rel::Eq) {
        let (co, k) = affine.substitute(&r.coeffs);
        let rhs = &r.rhs - k;
        if co.iter().all(Zero::is_zero) {
            let ok = if r.rel == Rel::Gt { rhs.is_negative() } else { !rhs.is_positive() };
            if !ok {
                return None;
            }
            continue;
        }
        if r.rel == Rel::Gt {
            strict.push((co, rhs));
        } else {
            weak.push((co, rhs));
        }
    }
    Some(Reduced { affine, weak, strict })
}

/// A point satisfying every row, or `None`. Strict rows are treated as
/// weak, so callers wanting strictness should use [`feasible`].
pub fn feasible_weak(s: &LinSystem) -> Option<Vec<Rational>> {
    let mut relaxed = s.clone();
    for r in relaxed.rows.iter_mut() {
        if r.rel == Rel::Gt {
            r.rel = Rel::Ge;
        }
    }
    let red = reduce(&relaxed)?;
    let y = weak_free(red.affine.nfree, &red.weak)?;
    Some(red.affine.eval(&y))
}

/// Motzkin's transposition: `{W y ≥ w, S y > s}` with `S` nonempty has no
/// solution iff some `u, v ≥ 0` give `uW + vS = 0` and either
/// `Σv = 1, u·w + v·s ≥ 0` or `u·w + v·s ≥ 1`.
fn strict_infeasible(n: usize, weak: &[(Vec<Rational>, Rational)], strict: &[(Vec<Rational>, Rational)]) -> bool {
    let mw = weak.len();
    let ms = strict.len();
    let all: Vec<&(Vec<Rational>, Rational)> = weak.iter().chain(strict).collect();
    // variables: u (mw), v (ms), t (one surplus)
    let nv = mw + ms + 1;
    let mut base_a = Vec::new();
    let mut base_b = Vec::new();
    for j in 0..n {
        let mut r = vec![Rational::zero(); nv];
        for (i, row) in all.iter().enumerate() {
            r[i] = row.0[j].clone();
        }
        base_a.push(r);
        base_b.push(Rational::zero());
    }
    let mut obj = vec![Rational::zero(); nv];
    for (i, row) in all.iter().enumerate() {
        obj[i] = row.1.clone();
    }
    obj[nv - 1] = int(-1);
    // case 1: Σv = 1 and u·w + v·s − t = 0
    let mut a1 = base_a.clone();
    let mut b1 = base_b.clone();
    let mut norm = vec![Rational::zero(); nv];
    for v in norm.iter_mut().skip(mw).take(ms) {
        *v = Rational::one();
    }
    a1.push(norm);
    b1.push(Rational::one());
    a1.push(obj.clone());
    b1.push(Rational::zero());
    if simplex::phase1(&a1, &b1, nv).is_some() {
        return true;
    }
    // case 2: u·w + v·s − t = 1
    let mut a2 = base_a;
    let mut b2 = base_b;
    a2.push(obj);
    b2.push(Rational::one());
    simplex::phase1(&a2, &b2, nv).is_some()
}

/// A point satisfying every row (strict rows strictly), or `None`.
pub fn feasible(s: &LinSystem) -> Option<Vec<Rational>> {
    let red = reduce(s)?;
    let n = red.affine.nfree;
    if red.strict.is_empty() {
        let y = weak_free(n, &red.weak)?;
        return Some(red.affine.eval(&y));
    }
    if strict_infeasible(n, &red.weak, &red.strict) {
        return None;
    }
    // some positive margin works; halve until one does
    let mut delta = Rational::one();
    loop {
        let mut rows = red.weak.clone();
        rows.extend(red.strict.iter().map(|(co, rhs)| (co.clone(), rhs + &delta)));
        if let Some(y) = weak_free(n, &rows) {
            let x = red.affine.eval(&y);
            debug_assert!(s.satisfied_by(&x));
            return Some(x);
        }
        delta /= int(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn sys(n: usize) -> LinSystem {
        LinSystem::with_vars(n, "x")
    }

    #[test]
    fn weak_examples() {
        let mut s = sys(1);
        s.ge(vec![int(1)], int(0));
        s.le(vec![int(1)], int(1));
        s.equal(vec![int(1)], rat(1, 2));
        assert_eq!(feasible_weak(&s), Some(vec![rat(1, 2)]));

        let mut s = sys(1);
        s.ge(vec![int(1)], int(1));
        s.le(vec![int(1)], int(0));
        assert_eq!(feasible_weak(&s), None);

        let mut s = sys(2);
        s.ge(vec![int(1), int(0)], int(0));
        s.ge(vec![int(0), int(1)], int(0));
        s.equal(vec![int(1), int(1)], int(1));
        s.ge(vec![int(1), int(0)], rat(3, 4));
        let x = feasible_weak(&s).unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn strict_examples() {
        let mut s = sys(1);
        s.gt(vec![int(1)], int(0));
        s.lt(vec![int(1)], int(0));
        assert_eq!(feasible(&s), None);

        let mut s = sys(2);
        s.gt(vec![int(1), int(0)], int(0));
        s.gt(vec![int(0), int(1)], int(0));
        s.equal(vec![int(1), int(1)], int(1));
        let x = feasible(&s).unwrap();
        assert!(s.satisfied_by(&x));

        let mut s = sys(3);
        s.equal(vec![int(1), int(1), int(1)], int(1));
        for i in 0..3 {
            let u = s.unit(i, int(1));
            s.gt(u, int(0));
        }
        s.gt(vec![int(1), int(1), int(0)], rat(1, 2));
        s.ge(vec![int(0), int(0), int(1)], rat(1, 4));
        let x = feasible(&s).unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn tight_strict_needs_small_margin() {
        // 0 < x < 1/1000
        let mut s = sys(1);
        s.gt(vec![int(1)], int(0));
        s.lt(vec![int(1)], rat(1, 1000));
        let x = feasible(&s).unwrap();
        assert!(s.satisfied_by(&x));
        // x > 0, x ≤ 0
        let mut s = sys(1);
        s.gt(vec![int(1)], int(0));
        s.le(vec![int(1)], int(0));
        assert_eq!(feasible(&s), None);
    }

    #[test]
    fn inconsistent_equalities() {
        let mut s = sys(2);
        s.equal(vec![int(1), int(1)], int(1));
        s.equal(vec![int(2), int(2)], int(3));
        assert_eq!(feasible(&s), None);
        assert_eq!(feasible_weak(&s), None);
    }

    #[test]
    fn prints_rows() {
        let mut s = sys(2);
        s.ge(vec![int(1), rat(1, 2)], int(1));
        s.gt(vec![int(0), int(0)], int(-1));
        assert_eq!(s.to_string(), "x1 + 1/2*x2 >= 1\n0 > -1\n");
    }
}
