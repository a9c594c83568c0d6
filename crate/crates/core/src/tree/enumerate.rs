use std::collections::BTreeSet;

use super::{BubbleTree, TreeNode};

/// Every valid non-root subtree of total charge `w`, for `w = 0..=max`.
/// Index 0 is empty: a valid non-root subtree always carries positive charge.
pub fn nonroot_subtrees(max: u64) -> Vec<Vec<TreeNode>> {
    let mut table: Vec<Vec<TreeNode>> = vec![Vec::new()];
    for w in 1..=max {
        let mut out = Vec::new();
        for a in 0..=w {
            let rest = w - a;
            if rest == 0 {
                out.push(TreeNode::leaf(a));
                continue;
            }
            let min_children = if a == 0 { 2 } else { 1 };
            for children in child_multisets(&table, rest) {
                if children.len() >= min_children {
                    let mut n = TreeNode::with_children(a, children);
                    n.canonicalize();
                    out.push(n);
                }
            }
        }
        out.sort();
        out.dedup();
        table.push(out);
    }
    table
}

/// Multisets of subtrees (drawn from `table`) with charges summing to `total`.
fn child_multisets(table: &[Vec<TreeNode>], total: u64) -> Vec<Vec<TreeNode>> {
    let pool: Vec<(u64, &TreeNode)> = table
        .iter()
        .enumerate()
        .take(total as usize + 1)
        .flat_map(|(w, ts)| ts.iter().map(move |t| (w as u64, t)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    pick(&pool, 0, total, &mut current, &mut out);
    out
}

fn pick(
    pool: &[(u64, &TreeNode)],
    start: usize,
    remaining: u64,
    current: &mut Vec<TreeNode>,
    out: &mut Vec<Vec<TreeNode>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for i in start..pool.len() {
        let (w, t) = pool[i];
        if w > remaining {
            continue;
        }
        current.push(t.clone());
        pick(pool, i, remaining - w, current, out);
        current.pop();
    }
}

/// All bubble trees of total charge `k`, sorted by vertex count then canonical
/// string. The root may have any weight `0..=k` and any number of children.
pub fn enumerate_trees(k: u64) -> Vec<BubbleTree> {
    let table = nonroot_subtrees(k);
    let mut set = BTreeSet::new();
    for a in 0..=k {
        for children in child_multisets(&table, k - a) {
            set.insert(BubbleTree::from_node(TreeNode::with_children(a, children)));
        }
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Independent census: every parent array on n vertices (vertex 0 the root,
    /// parent index smaller than child), every weight assignment summing to k,
    /// filtered by the bubble-tree condition and deduplicated canonically.
    fn brute_force(k: u64) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        // a valid tree has at most 2k vertices
        for n in 1..=(2 * k as usize) {
            let mut parents = vec![0usize; n];
            parent_arrays(1, &mut parents, k, &mut out);
        }
        out
    }

    fn parent_arrays(i: usize, parents: &mut Vec<usize>, k: u64, out: &mut BTreeSet<String>) {
        if i == parents.len() {
            let mut weights = vec![0u64; parents.len()];
            assign(&mut weights, 0, k, parents, out);
            return;
        }
        for p in 0..i {
            parents[i] = p;
            parent_arrays(i + 1, parents, k, out);
        }
    }

    fn assign(
        weights: &mut Vec<u64>,
        idx: usize,
        remaining: u64,
        parents: &[usize],
        out: &mut BTreeSet<String>,
    ) {
        let n = weights.len();
        if idx == n {
            if remaining == 0 {
                let t = BubbleTree::from_node(build(0, weights, parents));
                if t.validate().is_ok() {
                    out.insert(t.canonical_form().to_string());
                }
            }
            return;
        }
        for w in 0..=remaining {
            weights[idx] = w;
            assign(weights, idx + 1, remaining - w, parents, out);
        }
        weights[idx] = 0;
    }

    fn build(v: usize, weights: &[u64], parents: &[usize]) -> TreeNode {
        let children = (1..weights.len())
            .filter(|&c| parents[c] == v)
            .map(|c| build(c, weights, parents))
            .collect();
        TreeNode::with_children(weights[v], children)
    }

    #[test]
    fn matches_brute_force() {
        for k in 1..=3 {
            let fast: BTreeSet<String> = enumerate_trees(k)
                .iter()
                .map(|t| t.canonical_form().to_string())
                .collect();
            assert_eq!(fast, brute_force(k), "k = {k}");
        }
    }

    #[test]
    fn small_censuses() {
        let k1: Vec<String> = enumerate_trees(1).iter().map(|t| t.to_string()).collect();
        assert_eq!(k1, vec!["[1]", "[0[1]]"]);
        let k2 = enumerate_trees(2);
        assert_eq!(k2.len(), 6);
        let ghosts: Vec<_> = k2.iter().filter(|t| t.is_ghost_tree()).collect();
        assert_eq!(ghosts.len(), 1);
        assert_eq!(ghosts[0].canonical_form(), "[0[0[1,1]]]");
        let k3 = enumerate_trees(3);
        assert_eq!(k3.len(), 20);
        assert_eq!(k3.iter().filter(|t| t.is_ghost_tree()).count(), 7);
    }

    #[test]
    fn all_valid() {
        for k in 1..=6 {
            for t in enumerate_trees(k) {
                assert!(t.validate().is_ok(), "{t}");
                assert_eq!(t.charge(), k);
            }
        }
    }
}
