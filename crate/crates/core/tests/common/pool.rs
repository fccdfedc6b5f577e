//! Seeded sentence pools and the exhaustive monadic family shared by the
//! decider tests and the acceptance harness.

use epsilogic::decide::{
    decide_monadic, decide_monadic_coerced, decide_zero, semi_decide_finite_sat, Mode, SemiOptions, Verdict,
    ZeroProblem,
};
use epsilogic::model::{enumerate_models_with, EnumOptions, FiniteModel};
use epsilogic::rat::{int, rat, Rational};
use epsilogic::semantics::{e_holds, f_holds, q_holds};
use epsilogic::syntax::build::*;
use epsilogic::syntax::{e_coerce, f_coerce, Formula, QSentence, QuantifierKind, Signature, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 2] = ["x", "y"];

/// `P/1` and, when `binary`, `R/2`; no constants, no equality.
pub fn pool_sig(binary: bool) -> Signature {
    let mut preds = vec![("P".to_string(), 1)];
    if binary {
        preds.push(("R".to_string(), 2));
    }
    Signature::new(preds, vec![], false).unwrap()
}

fn gen(rng: &mut ChaCha8Rng, preds: &[(&str, usize)], depth: usize, quants: &mut usize, scope: &mut Vec<&'static str>, size: usize) -> Formula {
    let can_quantify = depth > 0 && *quants > 0;
    let choice = if scope.is_empty() {
        0
    } else if size == 0 {
        3
    } else {
        rng.gen_range(0..if can_quantify { 6 } else { 4 })
    };
    match choice {
        0 | 4 | 5 if can_quantify || scope.is_empty() => {
            let x = VARS[rng.gen_range(0..VARS.len())];
            *quants = quants.saturating_sub(1);
            scope.push(x);
            let body = gen(rng, preds, depth.saturating_sub(1), quants, scope, size.saturating_sub(1));
            scope.pop();
            if rng.gen_bool(0.5) {
                forall(x, body)
            } else {
                exists(x, body)
            }
        }
        1 => not(gen(rng, preds, depth, quants, scope, size - 1)),
        2 => {
            let a = gen(rng, preds, depth, quants, scope, size / 2);
            let b = gen(rng, preds, depth, quants, scope, size / 2);
            match rng.gen_range(0..3) {
                0 => and(vec![a, b]),
                1 => or(vec![a, b]),
                _ => implies(a, b),
            }
        }
        _ => {
            let (p, arity) = preds[rng.gen_range(0..preds.len())];
            let args: Vec<Term> = (0..arity).map(|_| Term::var(scope[rng.gen_range(0..scope.len())])).collect();
            atom(p, &args)
        }
    }
}

/// `n` distinct sentences of quantifier depth at most 2 and at most
/// `max_quantifiers` quantifier occurrences.
pub fn sentence_pool(seed: u64, n: usize, binary: bool, max_quantifiers: usize) -> Vec<Formula> {
    let preds: &[(&str, usize)] = if binary { &[("P", 1), ("R", 2)] } else { &[("P", 1)] };
    sentence_pool_over(seed, n, preds, max_quantifiers)
}

/// As [`sentence_pool`] over the given predicates and arities.
pub fn sentence_pool_over(seed: u64, n: usize, preds: &[(&str, usize)], max_quantifiers: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Formula> = Vec::new();
    while out.len() < n {
        let mut quants = max_quantifiers;
        let size = rng.gen_range(2..7);
        let f = gen(&mut rng, preds, 2, &mut quants, &mut Vec::new(), size);
        if f.is_sentence() && f.depth() <= 2 && !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Checks one pool sentence against the enumerator: a satisfiable verdict
/// must ship a witness that the enumerator matches within its size, and an
/// unsatisfiable one must leave the enumerator empty at `unsat_size`.
pub fn zero_agrees_with_semi(sig: &Signature, f: &Formula, unsat_size: usize) -> Result<Verdict, String> {
    let out = decide_zero(sig, f, ZeroProblem::ESatisfiability).map_err(|e| format!("{f}: {e}"))?;
    let countable = decide_zero(sig, f, ZeroProblem::CountableESatisfiability).map_err(|e| format!("{f}: {e}"))?;
    if countable.verdict != out.verdict {
        return Err(format!("{f}: finite and countable verdicts differ"));
    }
    let zero = int(0);
    match out.verdict {
        Verdict::Satisfiable => {
            let w = out.witness.ok_or_else(|| format!("{f}: satisfiable without a witness"))?;
            if !e_holds(&w, f, &zero).unwrap() {
                return Err(format!("{f}: witness does not verify"));
            }
            let opts = SemiOptions { budget: 6, max_size: w.size(), jobs: 1 };
            let semi = semi_decide_finite_sat(sig, f, &zero, Mode::E, opts).unwrap();
            if semi.verdict != Verdict::Satisfiable {
                return Err(format!("{f}: enumerator found no model within {} elements", w.size()));
            }
        }
        Verdict::Unsatisfiable => {
            let opts = SemiOptions { budget: 6, max_size: unsat_size, jobs: 1 };
            let semi = semi_decide_finite_sat(sig, f, &zero, Mode::E, opts).unwrap();
            if let Some(m) = semi.witness {
                return Err(format!("{f}: unsatisfiable yet the enumerator found\n{m}"));
            }
        }
        v => return Err(format!("{f}: unexpected verdict {v}")),
    }
    Ok(out.verdict)
}

/// Same as [`zero_agrees_with_semi`] but both directions at `max_size`.
pub fn zero_matches_semi_exactly(sig: &Signature, f: &Formula, max_size: usize) -> Result<(), String> {
    let out = decide_zero(sig, f, ZeroProblem::ESatisfiability).map_err(|e| format!("{f}: {e}"))?;
    let opts = SemiOptions { budget: 6, max_size, jobs: 1 };
    let semi = semi_decide_finite_sat(sig, f, &int(0), Mode::E, opts).unwrap();
    let a = out.verdict == Verdict::Satisfiable;
    let b = semi.verdict == Verdict::Satisfiable;
    if a != b {
        return Err(format!("{f}: decider says {}, enumerator says {}", out.verdict, semi.verdict));
    }
    Ok(())
}

pub fn monadic_eps() -> Vec<Rational> {
    vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4)]
}

/// All matrices over the atoms `P(x)` and `P(y)` (or just `P(x)`), as
/// truth tables in disjunctive normal form.
fn matrices(two: bool) -> Vec<Formula> {
    let atoms: Vec<Formula> = if two {
        vec![atom("P", &[Term::var("x")]), atom("P", &[Term::var("y")])]
    } else {
        vec![atom("P", &[Term::var("x")])]
    };
    let rows = 1usize << atoms.len();
    (0..1u32 << rows)
        .map(|table| {
            let terms: Vec<Formula> = (0..rows)
                .filter(|r| table >> r & 1 == 1)
                .map(|r| {
                    and(atoms
                        .iter()
                        .enumerate()
                        .map(|(i, a)| if r >> i & 1 == 1 { a.clone() } else { not(a.clone()) })
                        .collect())
                })
                .collect();
            or(terms)
        })
        .collect()
}

/// Sentences with a prefix of at most two `∀`/`∃` over `x`, `y` and a
/// matrix over `P(x)`, `P(y)`.
pub fn monadic_sentences() -> Vec<Formula> {
    let mut out = Vec::new();
    // the closed matrices ⊤ and ⊥ stand for the empty prefix
    out.extend(matrices(false).into_iter().filter(|m| m.is_sentence()));
    for q in [true, false] {
        for m in matrices(false) {
            out.push(if q { forall("x", m) } else { exists("x", m) });
        }
    }
    for q1 in [true, false] {
        for q2 in [true, false] {
            for m in matrices(true) {
                let inner = if q2 { forall("y", m) } else { exists("y", m) };
                out.push(if q1 { forall("x", inner) } else { exists("x", inner) });
            }
        }
    }
    out
}

/// Raw q-sentences: every prefix of length ≤ 2 over `∃`, `∀` and both
/// threshold kinds at each grid value, with every matrix.
pub fn monadic_qsentences() -> Vec<QSentence> {
    let mut kinds = vec![QuantifierKind::Exists, QuantifierKind::Forall];
    for t in monadic_eps().into_iter().chain([int(1)]) {
        kinds.push(QuantifierKind::WeakAtLeast(t.clone()));
        kinds.push(QuantifierKind::StrongGreater(t));
    }
    let mut out = Vec::new();
    for k in &kinds {
        for m in matrices(false) {
            out.push(QSentence::new(vec![(k.clone(), "x".into())], m).unwrap());
        }
    }
    for k1 in &kinds {
        for k2 in &kinds {
            for m in matrices(true) {
                out.push(QSentence::new(vec![(k1.clone(), "x".into()), (k2.clone(), "y".into())], m).unwrap());
            }
        }
    }
    out
}

/// Every model over `P` with at most `max_size` elements and weight total
/// at most `den`, zero weights included.
pub fn monadic_grid(max_size: usize, den: u64) -> Vec<FiniteModel> {
    let sig = Signature::monadic(&["P"]);
    enumerate_models_with(&sig, EnumOptions { max_size, max_denominator: den, zero_masses: true }).collect()
}

/// Decides `q` (optionally the coercion of `f`) and compares with the grid:
/// a grid model makes the decider answer satisfiable, and any witness it
/// returns verifies.
fn compare(grid: &[FiniteModel], q: &QSentence, decided: (Verdict, Option<FiniteModel>), plain: Option<(&Formula, Mode, &Rational)>) -> Result<bool, String> {
    let (verdict, witness) = decided;
    let grid_sat = grid.iter().any(|m| q_holds(m, q).unwrap());
    match verdict {
        Verdict::Satisfiable => {
            let w = witness.ok_or_else(|| format!("{q}: satisfiable without a witness"))?;
            if !q_holds(&w, q).unwrap() {
                return Err(format!("{q}: witness fails the q-sentence"));
            }
            if let Some((f, mode, eps)) = plain {
                let ok = match mode {
                    Mode::E => e_holds(&w, f, eps).unwrap(),
                    Mode::F => f_holds(&w, f, eps).unwrap(),
                };
                if !ok {
                    return Err(format!("{f} ({mode:?}, {eps}): witness fails the sentence"));
                }
            }
        }
        Verdict::Unsatisfiable => {
            if grid_sat {
                return Err(format!("{q}: unsatisfiable but the grid has a model"));
            }
        }
        v => return Err(format!("{q}: unexpected verdict {v}")),
    }
    Ok(verdict == Verdict::Satisfiable)
}

/// Runs the whole monadic family; returns the number of cases checked.
pub fn monadic_cross_check(grid: &[FiniteModel]) -> Result<usize, String> {
    let sig = Signature::monadic(&["P"]);
    let mut n = 0;
    for f in monadic_sentences() {
        for eps in monadic_eps() {
            for mode in [Mode::E, Mode::F] {
                let q = match mode {
                    Mode::E => e_coerce(&f, &eps).unwrap(),
                    Mode::F => f_coerce(&f, &eps).unwrap(),
                };
                let out = decide_monadic_coerced(&sig, &f, mode, &eps).map_err(|e| format!("{f}: {e}"))?;
                compare(grid, &q, (out.verdict, out.witness), Some((&f, mode, &eps)))?;
                n += 1;
            }
        }
    }
    for q in monadic_qsentences() {
        let out = decide_monadic(&sig, &q).map_err(|e| format!("{q}: {e}"))?;
        compare(grid, &q, (out.verdict, out.witness), None)?;
        n += 1;
    }
    Ok(n)
}

/// One pool sentence per seed, for property tests.
pub fn pool_sentence(binary: bool, max_quantifiers: usize) -> impl proptest::strategy::Strategy<Value = Formula> {
    use proptest::prelude::*;
    any::<u64>().prop_map(move |seed| sentence_pool(seed, 1, binary, max_quantifiers).remove(0))
}

/// Models over [`pool_sig`]`(true)` with at most `max_n` elements.
pub fn pool_model(max_n: usize) -> impl proptest::strategy::Strategy<Value = FiniteModel> {
    use proptest::prelude::*;
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(0u32..=4, n), proptest::collection::vec(any::<bool>(), n + n * n)))
        .prop_filter("some positive weight", |(_, w, _)| w.iter().any(|&x| x > 0))
        .prop_map(|(n, w, bits)| super::build_model(&pool_sig(true), n, &w, &bits, &[]))
}
