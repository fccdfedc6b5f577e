//! Builders for application sentences: PAC assumptions, weighted-graph
//! axioms and the neural-network update rule.

use crate::decide::Mode;
use crate::syntax::build::*;
use crate::syntax::{Formula, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub sig: Signature,
    pub sentences: Vec<Formula>,
    /// The logic the sentences are meant to be read in.
    pub mode: Mode,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PacKind {
    Point,
    Parity,
    /// As printed: the second implication reads `¬Pᵢ(x) ∧ ¬Pᵢ(z) → ¬Pᵢ(z)`.
    Conjunction,
    /// With `¬Pᵢ(x) ∧ ¬Pᵢ(y) → ¬Pᵢ(z)`.
    ConjunctionCorrected,
    DecisionList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    VertexWeighted,
    EdgeWeighted,
}

/// The label predicate of the PAC entries.
pub const LABEL: &str = "c";

fn p(i: usize, x: &str) -> Formula {
    atom(&format!("P{i}"), &[Term::var(x)])
}

fn a1(pred: &str, x: &str) -> Formula {
    atom(pred, &[Term::var(x)])
}

fn a2(pred: &str, x: &str, y: &str) -> Formula {
    atom(pred, &[Term::var(x), Term::var(y)])
}

/// `⋀`, leaving a single operand bare.
fn conj(mut fs: Vec<Formula>) -> Formula {
    if fs.len() == 1 {
        fs.remove(0)
    } else {
        and(fs)
    }
}

/// `⨁`, folded left; a single operand stays bare.
fn xors(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(xor).expect("at least one operand")
}

pub fn pac_signature(s: usize) -> Signature {
    let mut preds: Vec<(String, usize)> = (1..=s).map(|i| (format!("P{i}"), 1)).collect();
    preds.push((LABEL.into(), 1));
    Signature::new(preds, vec![], false).expect("PAC vocabulary is well-formed")
}

/// The sentence expressing that some concept of the class fits the labels.
/// Panics if `s` is 0.
pub fn build_pac(kind: PacKind, s: usize) -> CorpusEntry {
    assert!(s >= 1, "s must be positive");
    let idx = 1..=s;
    let label = |x: &str| a1(LABEL, x);
    let (name, f) = match kind {
        PacKind::Point => (
            "pac-point",
            exists("x", forall("y", iff(label("y"), conj(idx.map(|i| iff(p(i, "x"), p(i, "y"))).collect())))),
        ),
        PacKind::Parity => (
            "pac-parity",
            exists("x", forall("y", iff(label("y"), xors(idx.map(|i| and(vec![p(i, "x"), p(i, "y")])).collect())))),
        ),
        PacKind::Conjunction | PacKind::ConjunctionCorrected => {
            let second = if kind == PacKind::Conjunction { "z" } else { "y" };
            let clause = |i: usize| {
                and(vec![
                    implies(and(vec![p(i, "x"), p(i, "y")]), p(i, "z")),
                    implies(and(vec![not(p(i, "x")), not(p(i, second))]), not(p(i, "z"))),
                ])
            };
            let name = if kind == PacKind::Conjunction { "pac-conjunction" } else { "pac-conjunction-corrected" };
            (name, exists("x", exists("y", forall("z", iff(label("z"), conj(idx.map(clause).collect()))))))
        }
        PacKind::DecisionList => {
            let differ = |j: usize| xor(p(j, "x"), p(j, "w"));
            let psi = |i: usize| {
                let mut guard: Vec<Formula> = (1..i).map(differ).collect();
                guard.push(iff(p(i, "x"), p(i, "w")));
                implies(conj(guard), iff(label("w"), p(i, "y")))
            };
            let phi = implies(conj((1..=s).map(differ).collect()), iff(label("w"), p(1, "z")));
            let mut body = vec![phi];
            body.extend((1..=s).map(psi));
            ("pac-decision-list", exists("x", exists("y", exists("z", forall("w", and(body))))))
        }
    };
    CorpusEntry {
        name: name.into(),
        sig: pac_signature(s),
        sentences: vec![f],
        mode: Mode::E,
        note: "E-logic; ε is the tolerated labeling error".into(),
    }
}

fn equivalence(r: &str) -> Vec<Formula> {
    vec![
        forall("x", a2(r, "x", "x")),
        foralls(&["x", "y"], iff(a2(r, "x", "y"), a2(r, "y", "x"))),
        // transitivity as printed, with the conclusion reversed
        foralls(&["x", "y", "z"], implies(and(vec![a2(r, "x", "y"), a2(r, "y", "z")]), a2(r, "z", "x"))),
    ]
}

pub fn build_graph_axioms(kind: GraphKind) -> CorpusEntry {
    match kind {
        GraphKind::VertexWeighted => {
            let sig = Signature::new(vec![("E".into(), 2), ("A".into(), 1)], vec![], false)
                .expect("graph vocabulary is well-formed");
            let e = |x: &str, y: &str| a2("E", x, y);
            let sentences = vec![
                forall("x", not(e("x", "x"))),
                foralls(&["x", "y"], iff(e("x", "y"), e("y", "x"))),
                foralls(&["x", "y"], and(vec![e("x", "y"), e("y", "x")])),
                foralls(
                    &["x", "y"],
                    implies(iff(a1("A", "x"), a1("A", "y")), and(vec![not(e("x", "y")), not(e("y", "x"))])),
                ),
                exists("x", forall("y", e("x", "y"))),
            ];
            CorpusEntry {
                name: "graph-vertex".into(),
                sig,
                sentences,
                mode: Mode::F,
                note: "F-logic: loopless, undirected, complete, bipartite over A, heavy initial set".into(),
            }
        }
        GraphKind::EdgeWeighted => {
            let i = |x: &str, y: &str| a2("I", x, y);
            let mut sentences = equivalence("C");
            sentences.extend(equivalence("D"));
            sentences.extend([
                foralls(&["x", "y"], implies(a2("C", "x", "y"), forall("z", iff(i("x", "z"), i("y", "z"))))),
                foralls(&["x", "y"], implies(a2("D", "x", "y"), forall("z", iff(i("z", "x"), i("z", "y"))))),
                foralls(&["x", "y"], implies(i("x", "y"), forall("z", iff(a2("C", "z", "x"), i("z", "y"))))),
                foralls(&["x", "y"], implies(i("x", "y"), forall("z1", iff(a2("D", "z1", "y"), i("x", "z1"))))),
                foralls(&["x", "y", "z"], implies(and(vec![i("x", "y"), i("x", "z")]), a2("D", "y", "z"))),
                foralls(&["x", "y", "z"], implies(and(vec![i("y", "x"), i("z", "x")]), a2("C", "y", "z"))),
            ]);
            CorpusEntry {
                name: "graph-edge".into(),
                sig: edge_signature(&[]),
                sentences,
                mode: Mode::F,
                note: "F-logic at ε = 0: the axioms of a graph with weighted edges".into(),
            }
        }
    }
}

fn edge_signature(extra: &[String]) -> Signature {
    let mut preds: Vec<(String, usize)> = vec![("I".into(), 2), ("C".into(), 2), ("D".into(), 2)];
    preds.extend(extra.iter().map(|p| (p.clone(), 1)));
    Signature::new(preds, vec![], false).expect("graph vocabulary is well-formed")
}

pub fn actv(t: usize) -> String {
    format!("actv_{t}")
}

/// For each `t < t_max`, the presynaptic consistency clause and the update
/// rule from `t` to `t + 1`. Read in F-logic at ε = 𝔗, the threshold, so
/// the ∃ of the update rule is the `> 𝔗` quantifier. Panics if `t_max` is 0.
pub fn build_ann(t_max: usize) -> CorpusEntry {
    assert!(t_max >= 1, "t_max must be positive");
    let names: Vec<String> = (0..=t_max).map(actv).collect();
    let mut sentences = Vec::new();
    for t in 0..t_max {
        let (now, next) = (&names[t], &names[t + 1]);
        sentences.push(foralls(&["x", "y"], implies(a2("D", "x", "y"), iff(a1(now, "x"), a1(now, "y")))));
        sentences.push(forall("x", iff(a1(next, "x"), exists("y", and(vec![a2("I", "y", "x"), a1(now, "y")])))));
    }
    CorpusEntry {
        name: "ann".into(),
        sig: edge_signature(&names),
        sentences,
        mode: Mode::F,
        note: "F-logic at ε = threshold: ∃ in the update rule means weight > threshold".into(),
    }
}

pub const NAMES: [&str; 8] = [
    "pac-point",
    "pac-parity",
    "pac-conjunction",
    "pac-conjunction-corrected",
    "pac-decision-list",
    "graph-vertex",
    "graph-edge",
    "ann",
];

/// Looks an entry up by its name; `s` feeds the PAC builders and `t_max`
/// the network builder.
pub fn by_name(name: &str, s: usize, t_max: usize) -> Option<CorpusEntry> {
    Some(match name {
        "pac-point" => build_pac(PacKind::Point, s),
        "pac-parity" => build_pac(PacKind::Parity, s),
        "pac-conjunction" => build_pac(PacKind::Conjunction, s),
        "pac-conjunction-corrected" => build_pac(PacKind::ConjunctionCorrected, s),
        "pac-decision-list" => build_pac(PacKind::DecisionList, s),
        "graph-vertex" => build_graph_axioms(GraphKind::VertexWeighted),
        "graph-edge" => build_graph_axioms(GraphKind::EdgeWeighted),
        "ann" => build_ann(t_max),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FiniteModel;
    use crate::rat::{int, rat};
    use crate::semantics::f_holds;
    use crate::syntax::parse_formula;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn pac_shapes_at_one() {
        let point = build_pac(PacKind::Point, 1);
        assert_eq!(
            point.sentences[0],
            exists("x", forall("y", iff(a1("c", "y"), iff(p(1, "x"), p(1, "y")))))
        );
        let parity = build_pac(PacKind::Parity, 1);
        assert_eq!(
            parity.sentences[0],
            exists("x", forall("y", iff(a1("c", "y"), and(vec![p(1, "x"), p(1, "y")]))))
        );
        let dl = build_pac(PacKind::DecisionList, 1);
        let (prefix, _) = dl.sentences[0].split_prefix();
        assert_eq!(prefix, vec![(false, "x"), (false, "y"), (false, "z"), (true, "w")]);
        let expected_matrix = and(vec![
            implies(xor(p(1, "x"), p(1, "w")), iff(a1("c", "w"), p(1, "z"))),
            implies(iff(p(1, "x"), p(1, "w")), iff(a1("c", "w"), p(1, "y"))),
        ]);
        assert_eq!(*dl.sentences[0].split_prefix().1, expected_matrix);
    }

    #[test]
    fn parity_folds_xor() {
        let f = build_pac(PacKind::Parity, 3).sentences.remove(0);
        let term = |i| and(vec![p(i, "x"), p(i, "y")]);
        let expected = exists("x", forall("y", iff(a1("c", "y"), xor(xor(term(1), term(2)), term(3)))));
        assert_eq!(f, expected);
    }

    #[test]
    fn conjunction_variants_differ_in_one_atom() {
        let printed = build_pac(PacKind::Conjunction, 1).sentences.remove(0).to_string();
        let fixed = build_pac(PacKind::ConjunctionCorrected, 1).sentences.remove(0).to_string();
        assert!(printed.contains("(and (not (P1 x)) (not (P1 z)))"));
        assert!(fixed.contains("(and (not (P1 x)) (not (P1 y)))"));
    }

    #[test]
    fn counts() {
        assert_eq!(build_graph_axioms(GraphKind::EdgeWeighted).sentences.len(), 12);
        assert_eq!(build_graph_axioms(GraphKind::VertexWeighted).sentences.len(), 5);
        assert_eq!(build_ann(1).sentences.len(), 2);
        assert_eq!(build_ann(3).sentences.len(), 6);
        assert!(build_graph_axioms(GraphKind::EdgeWeighted).sentences.contains(&forall("x", a2("C", "x", "x"))));
        assert!(build_graph_axioms(GraphKind::VertexWeighted)
            .sentences
            .contains(&forall("x", not(a2("E", "x", "x")))));
    }

    #[test]
    fn every_entry_round_trips() {
        for name in NAMES {
            for s in 1..=3 {
                let e = by_name(name, s, s).unwrap();
                for f in &e.sentences {
                    e.sig.check(f).unwrap();
                    let back = parse_formula(&f.to_string(), &e.sig).unwrap().into_formula().unwrap();
                    assert_eq!(&back, f, "{name}");
                }
            }
        }
        assert!(by_name("nope", 1, 1).is_none());
    }

    fn model(sig: Signature, weights: &[(i64, i64)], rels: &[(&str, &[&[usize]])]) -> FiniteModel {
        let n = weights.len();
        let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> =
            sig.predicates().iter().map(|(p, _)| (p.clone(), BTreeSet::new())).collect();
        for (p, ts) in rels {
            relations.insert(p.to_string(), ts.iter().map(|t| t.to_vec()).collect());
        }
        let measure = weights.iter().map(|&(a, b)| rat(a, b)).collect();
        FiniteModel::new(sig, (1..=n).map(|i| format!("e{i}")).collect(), relations, BTreeMap::new(), measure).unwrap()
    }

    #[test]
    fn directed_triangle_satisfies_the_edge_axioms() {
        let e = build_graph_axioms(GraphKind::EdgeWeighted);
        let id: &[&[usize]] = &[&[0, 0], &[1, 1], &[2, 2]];
        let m = model(e.sig.clone(), &[(1, 3); 3], &[("I", &[&[0, 1], &[1, 2], &[2, 0]]), ("C", id), ("D", id)]);
        for f in &e.sentences {
            assert!(f_holds(&m, f, &int(0)).unwrap(), "{f}");
        }
        // reversing one incidence breaks uniqueness of domains
        let bad = model(e.sig.clone(), &[(1, 3); 3], &[("I", &[&[0, 1], &[1, 2], &[0, 2]]), ("C", id), ("D", id)]);
        assert!(!e.sentences.iter().all(|f| f_holds(&bad, f, &int(0)).unwrap()));
    }

    #[test]
    fn ann_threshold_boundary() {
        let e = build_ann(1);
        let id: &[&[usize]] = &[&[0, 0], &[1, 1]];
        let net = |downstream_active: bool| {
            let on: &[&[usize]] = if downstream_active { &[&[1]] } else { &[] };
            model(
                e.sig.clone(),
                &[(3, 4), (1, 4)],
                &[("I", &[&[0, 1]]), ("C", id), ("D", id), ("actv_0", &[&[0]]), ("actv_1", on)],
            )
        };
        let all = |m: &FiniteModel, t| e.sentences.iter().all(|f| f_holds(m, f, &t).unwrap());
        assert!(all(&net(true), rat(1, 2)));
        assert!(!all(&net(false), rat(1, 2)));
        // at 3/4 the forward direction needs weight > 3/4, while the negated
        // ∃ of the backward direction is read classically, so neither works
        assert!(!all(&net(false), rat(3, 4)));
        assert!(!all(&net(true), rat(3, 4)));
    }
}
