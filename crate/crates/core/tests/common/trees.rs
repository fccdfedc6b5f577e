//! Every q-tree over a small universe, for brute-force comparison.

use epsilogic::semantics::{QNode, QTree};
use epsilogic::syntax::QuantifierKind;

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

/// Every node of height `h` over `n` elements.
fn nodes(n: usize, h: usize) -> Vec<QNode> {
    if h == 1 {
        return subsets(n).into_iter().map(QNode::leaf).collect();
    }
    let below = nodes(n, h - 1);
    let mut out = Vec::new();
    for members in subsets(n) {
        // choose a subtree for every member
        let mut idx = vec![0usize; members.len()];
        loop {
            let children = members.iter().zip(&idx).map(|(&a, &i)| (a, below[i].clone()));
            let mut node = QNode::with_children(children);
            node.members = members.iter().copied().collect();
            out.push(node);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < below.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

/// Every tree with the given levels over `n` elements.
pub fn all_trees(n: usize, levels: &[QuantifierKind]) -> Vec<QTree> {
    if levels.is_empty() {
        return vec![QTree::empty()];
    }
    nodes(n, levels.len()).into_iter().map(|r| QTree { levels: levels.to_vec(), root: Some(r) }).collect()
}
