//! Witness trees for q-sentences.

use super::compile::compile_q_suffix;
use super::engine::ModelView;
use super::SemanticsError;
use crate::model::FiniteModel;
use crate::rat::{parse_rational, Rational};
use crate::syntax::{QSentence, QuantifierKind};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QNode {
    pub members: BTreeSet<usize>,
    /// One child per member, except at the last level.
    pub children: BTreeMap<usize, QNode>,
}

impl QNode {
    pub fn leaf(members: impl IntoIterator<Item = usize>) -> QNode {
        QNode { members: members.into_iter().collect(), children: BTreeMap::new() }
    }

    pub fn with_children(children: impl IntoIterator<Item = (usize, QNode)>) -> QNode {
        let children: BTreeMap<usize, QNode> = children.into_iter().collect();
        QNode { members: children.keys().copied().collect(), children }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTree {
    pub levels: Vec<QuantifierKind>,
    /// `None` exactly when there are no levels.
    pub root: Option<QNode>,
}

/// A root-to-leaf choice sequence `(a_i, V_i)` with `a_i ∈ V_i`.
pub type Bran = Vec<(usize, BTreeSet<usize>)>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("tree has {tree} levels but the sentence has {sentence} quantifiers")]
    Height { tree: usize, sentence: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl QTree {
    pub fn empty() -> QTree {
        QTree { levels: Vec::new(), root: None }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Checks the shape: children exactly below non-final levels, one per
    /// member, and every element inside a universe of size `n`.
    pub fn check_shape(&self, n: usize) -> Result<(), TreeError> {
        match (&self.root, self.levels.len()) {
            (None, 0) => Ok(()),
            (None, _) => Err(TreeError::Malformed("missing root".into())),
            (Some(_), 0) => Err(TreeError::Malformed("root present in a tree without levels".into())),
            (Some(r), h) => shape(r, 1, h, n),
        }
    }

    pub fn brans(&self) -> Vec<Bran> {
        let mut out = Vec::new();
        match &self.root {
            None => out.push(Vec::new()),
            Some(r) => collect_brans(r, &mut Vec::new(), &mut out),
        }
        out
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &QNode) -> usize {
            1 + n.children.values().map(count).sum::<usize>()
        }
        self.root.as_ref().map_or(0, count)
    }

    /// Indented text, one node per line.
    pub fn to_text(&self, labels: &[String]) -> String {
        let kinds: Vec<String> = self.levels.iter().map(|k| k.to_string()).collect();
        let mut s = format!("levels: {}\n", kinds.join(", "));
        if let Some(r) = &self.root {
            write_node(r, 1, None, labels, &mut s);
        }
        s
    }

    /// Reads the output of [`QTree::to_text`] against the labels of `m`.
    pub fn parse(text: &str, m: &FiniteModel) -> Result<QTree, TreeError> {
        let bad = |ln: usize, msg: &str| TreeError::Malformed(format!("line {ln}: {msg}"));
        let mut levels = None;
        // (level, via, node) in file order
        let mut flat: Vec<(usize, Option<usize>, BTreeSet<usize>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("levels:") {
                let ks = rest
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(parse_kind)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad(ln, "bad quantifier in `levels:`"))?;
                levels = Some(ks);
                continue;
            }
            let rest = line.strip_prefix("level ").ok_or_else(|| bad(ln, "expected `level`"))?;
            let (k, rest) = rest.split_once(' ').ok_or_else(|| bad(ln, "expected level number"))?;
            let k: usize = k.parse().map_err(|_| bad(ln, "bad level number"))?;
            let open = rest.find("[set:").ok_or_else(|| bad(ln, "expected `[set:`"))?;
            let close = rest.find(']').ok_or_else(|| bad(ln, "expected `]`"))?;
            let elem = |a: &str| m.element(a).ok_or_else(|| bad(ln, &format!("unknown element `{a}`")));
            let members = rest[open + 5..close].split_whitespace().map(elem).collect::<Result<BTreeSet<_>, _>>()?;
            let tail = rest[close + 1..].trim();
            let via = if tail.is_empty() {
                None
            } else {
                let inner = tail
                    .strip_prefix("(via ")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad(ln, "expected `(via element)`"))?;
                Some(elem(inner.trim())?)
            };
            flat.push((k, via, members));
        }
        let levels = levels.ok_or_else(|| TreeError::Malformed("missing `levels:` line".into()))?;
        if flat.is_empty() {
            return Ok(QTree { levels, root: None });
        }
        let mut pos = 0;
        let root = build_from_flat(&flat, &mut pos, 1)?;
        if pos != flat.len() {
            return Err(TreeError::Malformed("more than one root".into()));
        }
        let t = QTree { levels, root: Some(root) };
        t.check_shape(m.size())?;
        Ok(t)
    }
}

fn parse_kind(s: &str) -> Option<QuantifierKind> {
    match s.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["exists"] => Some(QuantifierKind::Exists),
        ["forall"] => Some(QuantifierKind::Forall),
        ["qgeq", r] => parse_rational(r).ok().map(QuantifierKind::WeakAtLeast),
        ["qgt", r] => parse_rational(r).ok().map(QuantifierKind::StrongGreater),
        _ => None,
    }
}

fn build_from_flat(
    flat: &[(usize, Option<usize>, BTreeSet<usize>)],
    pos: &mut usize,
    level: usize,
) -> Result<QNode, TreeError> {
    let (k, _, members) = &flat[*pos];
    if *k != level {
        return Err(TreeError::Malformed(format!("expected a level {level} node, found level {k}")));
    }
    *pos += 1;
    let mut node = QNode { members: members.clone(), children: BTreeMap::new() };
    while *pos < flat.len() && flat[*pos].0 == level + 1 {
        let via = flat[*pos].1.ok_or_else(|| TreeError::Malformed("child without `(via ...)`".into()))?;
        let child = build_from_flat(flat, pos, level + 1)?;
        if node.children.insert(via, child).is_some() {
            return Err(TreeError::Malformed("two children for one element".into()));
        }
    }
    Ok(node)
}

fn write_node(node: &QNode, level: usize, via: Option<usize>, labels: &[String], s: &mut String) {
    let indent = "  ".repeat(level - 1);
    let set: Vec<&str> = node.members.iter().map(|&a| labels[a].as_str()).collect();
    let _ = write!(s, "{indent}level {level} [set: {}]", set.join(" "));
    if let Some(v) = via {
        let _ = write!(s, " (via {})", labels[v]);
    }
    s.push('\n');
    for (&a, child) in &node.children {
        write_node(child, level + 1, Some(a), labels, s);
    }
}

fn shape(node: &QNode, level: usize, height: usize, n: usize) -> Result<(), TreeError> {
    if let Some(&a) = node.members.iter().find(|&&a| a >= n) {
        return Err(TreeError::Malformed(format!("element #{a} outside the universe")));
    }
    if level == height {
        if !node.children.is_empty() {
            return Err(TreeError::Malformed(format!("leaf at level {level} has children")));
        }
        return Ok(());
    }
    let keys: BTreeSet<usize> = node.children.keys().copied().collect();
    if keys != node.members {
        return Err(TreeError::Malformed(format!("level {level} node needs exactly one child per member")));
    }
    node.children.values().try_for_each(|c| shape(c, level + 1, height, n))
}

fn collect_brans(node: &QNode, path: &mut Bran, out: &mut Vec<Bran>) {
    for &a in &node.members {
        path.push((a, node.members.clone()));
        match node.children.get(&a) {
            Some(c) => collect_brans(c, path, out),
            None => out.push(path.clone()),
        }
        path.pop();
    }
}

fn node_ok(m: &FiniteModel, k: &QuantifierKind, members: &BTreeSet<usize>) -> bool {
    let mass = || members.iter().fold(Rational::zero(), |acc, &a| acc + &m.measure[a]);
    match k {
        QuantifierKind::Exists => !members.is_empty(),
        QuantifierKind::Forall => members.len() == m.size(),
        QuantifierKind::WeakAtLeast(t) => mass() >= *t,
        QuantifierKind::StrongGreater(t) => mass() > *t,
    }
}

/// Whether `t` witnesses `q` in `m`: every node meets its level's
/// condition, the tree's levels are those of `q`, and every bran satisfies
/// the matrix.
pub fn verify_qtree(m: &FiniteModel, q: &QSentence, t: &QTree) -> Result<bool, TreeError> {
    if t.height() != q.len() {
        return Err(TreeError::Height { tree: t.height(), sentence: q.len() });
    }
    t.check_shape(m.size())?;
    if t.levels != q.kinds() {
        return Ok(false);
    }
    fn nodes_ok(m: &FiniteModel, levels: &[QuantifierKind], node: &QNode, level: usize) -> bool {
        node_ok(m, &levels[level], &node.members) && node.children.values().all(|c| nodes_ok(m, levels, c, level + 1))
    }
    if let Some(r) = &t.root {
        if !nodes_ok(m, &t.levels, r, 0) {
            return Ok(false);
        }
    }
    let matrix = compile_q_suffix(&m.sig, q, q.len(), &[])?;
    let view = ModelView::new(m);
    Ok(t.brans().iter().all(|b| {
        let env: Vec<usize> = b.iter().map(|(a, _)| *a).collect();
        matrix.holds(&view, &env)
    }))
}

/// The maximal witness tree, with existential levels cut down to their
/// first element; `None` when `q` is false in `m`.
pub fn find_qtree(m: &FiniteModel, q: &QSentence) -> Result<Option<QTree>, SemanticsError> {
    let n = q.len();
    let suffixes = (0..=n).map(|i| compile_q_suffix(&m.sig, q, i, &[])).collect::<Result<Vec<_>, _>>()?;
    let view = ModelView::new(m);
    if !suffixes[0].holds(&view, &[]) {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(QTree::empty()));
    }
    fn build(q: &QSentence, suffixes: &[super::Compiled], view: &ModelView, env: &mut Vec<usize>) -> QNode {
        let i = env.len();
        let mut members: BTreeSet<usize> = BTreeSet::new();
        for a in 0..view.size() {
            env.push(a);
            let ok = suffixes[i + 1].holds(view, env);
            env.pop();
            if ok {
                members.insert(a);
                if q.prefix[i].0 == QuantifierKind::Exists {
                    break;
                }
            }
        }
        let mut children = BTreeMap::new();
        if i + 1 < q.len() {
            for &a in &members {
                env.push(a);
                children.insert(a, build(q, suffixes, view, env));
                env.pop();
            }
        }
        QNode { members, children }
    }
    let root = build(q, &suffixes, &view, &mut Vec::new());
    Ok(Some(QTree { levels: q.kinds(), root: Some(root) }))
}

/// `t ∧ u`: a copy of `u` hangs below every member of every leaf of `t`.
pub fn wedge(t: &QTree, u: &QTree) -> QTree {
    let mut levels = t.levels.clone();
    levels.extend(u.levels.iter().cloned());
    let root = match (&t.root, &u.root) {
        (None, r) => r.clone(),
        (Some(r), None) => Some(r.clone()),
        (Some(r), Some(ur)) => {
            fn graft(node: &mut QNode, level: usize, height: usize, sub: &QNode) {
                if level == height {
                    node.children = node.members.iter().map(|&a| (a, sub.clone())).collect();
                } else {
                    for c in node.children.values_mut() {
                        graft(c, level + 1, height, sub);
                    }
                }
            }
            let mut r = r.clone();
            graft(&mut r, 1, t.height(), ur);
            Some(r)
        }
    };
    QTree { levels, root }
}
