use std::collections::BTreeSet;

use super::FmError;
use crate::tree::{BubbleTree, TreeNode};

/// True for trees with root weight 0, no marks, and every non-root vertex
/// either a leaf or a ghost with at least two children.
pub fn is_w_type(t: &BubbleTree) -> bool {
    let vs = t.vertices();
    vs[0].weight == 0
        && vs.iter().all(|v| v.marks.is_empty())
        && vs[1..]
            .iter()
            .all(|v| v.children.is_empty() || (v.weight == 0 && v.children.len() >= 2))
        && vs[1..].iter().all(|v| !v.children.is_empty() || v.weight > 0)
}

/// Leaf weights in ascending order.
pub fn leaf_weights(t: &BubbleTree) -> Vec<u64> {
    let mut w: Vec<u64> = t
        .vertices()
        .iter()
        .skip(1)
        .filter(|v| v.children.is_empty())
        .map(|v| v.weight)
        .collect();
    w.sort_unstable();
    w
}

/// The same nesting with every leaf weight set to 1.
pub fn unit_shape(t: &BubbleTree) -> BubbleTree {
    fn go(n: TreeNode, root: bool) -> TreeNode {
        if n.children.is_empty() && !root {
            return TreeNode::leaf(1);
        }
        TreeNode {
            weight: n.weight,
            marks: n.marks,
            children: n.children.into_iter().map(|c| go(c, false)).collect(),
        }
    }
    BubbleTree::from_node(go(t.to_node(), true))
}

/// Every stratum of the weighted configuration space with weights `w`: nested
/// collision patterns of the points, recorded as trees over a weight-0 root.
pub fn enumerate_fm_strata(weights: &[u64]) -> Result<Vec<BubbleTree>, FmError> {
    if weights.iter().any(|&w| w == 0) {
        return Err(FmError::ZeroWeight);
    }
    let idx: Vec<usize> = (0..weights.len()).collect();
    let set: BTreeSet<BubbleTree> = forests(&idx, weights, 1)
        .into_iter()
        .map(|f| BubbleTree::from_node(TreeNode::with_children(0, f)))
        .collect();
    Ok(set.into_iter().collect())
}

/// All forests on the index set: a set partition into blocks, each block a
/// leaf (size 1) or a ghost over a forest with at least two components.
fn forests(items: &[usize], weights: &[u64], min_blocks: usize) -> Vec<Vec<TreeNode>> {
    let mut out = Vec::new();
    for blocks in set_partitions(items) {
        if blocks.len() < min_blocks {
            continue;
        }
        let per_block: Vec<Vec<TreeNode>> = blocks.iter().map(|b| trees(b, weights)).collect();
        let mut acc: Vec<Vec<TreeNode>> = vec![Vec::new()];
        for options in per_block {
            let mut next = Vec::new();
            for partial in &acc {
                for t in &options {
                    let mut p = partial.clone();
                    p.push(t.clone());
                    next.push(p);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}

fn trees(block: &[usize], weights: &[u64]) -> Vec<TreeNode> {
    if block.len() == 1 {
        return vec![TreeNode::leaf(weights[block[0]])];
    }
    let mut seen = BTreeSet::new();
    for f in forests(block, weights, 2) {
        let mut n = TreeNode::with_children(0, f);
        n.canonicalize();
        seen.insert(n);
    }
    seen.into_iter().collect()
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

/// Point-label template with one letter per depth (`x`, `y`, `z`, `w`, ...)
/// and a running index per depth, e.g. `[x1[y1[z1,z2],y2]]`.
pub fn stratum_format(t: &BubbleTree) -> Result<String, FmError> {
    if !is_w_type(t) {
        return Err(FmError::NotWType(t.to_string()));
    }
    let mut counters: Vec<usize> = Vec::new();
    let mut out = String::new();
    write_level(t, 0, 0, &mut counters, &mut out);
    Ok(out)
}

fn depth_letter(d: usize) -> String {
    const LETTERS: [char; 6] = ['x', 'y', 'z', 'w', 'v', 's'];
    match LETTERS.get(d - 1) {
        Some(c) => c.to_string(),
        None => format!("p{}_", d),
    }
}

fn write_level(t: &BubbleTree, v: usize, depth: usize, counters: &mut Vec<usize>, out: &mut String) {
    out.push('[');
    let d = depth + 1;
    if counters.len() < d {
        counters.push(0);
    }
    for (i, &c) in t.vertices()[v].children.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        counters[d - 1] += 1;
        out.push_str(&format!("{}{}", depth_letter(d), counters[d - 1]));
        if !t.vertices()[c].children.is_empty() {
            write_level(t, c, d, counters, out);
        }
    }
    out.push(']');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_config, parse_tree};
    use crate::tree::enumerate_trees;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_fm_strata(&[1, 1]).unwrap().len(), 2);
        assert_eq!(enumerate_fm_strata(&[1, 1, 1]).unwrap().len(), 4);
        assert_eq!(enumerate_fm_strata(&[1, 2]).unwrap().len(), 2);
    }

    /// Filters the full bubble-tree census for the configuration shape.
    fn brute(weights: &[u64]) -> BTreeSet<BubbleTree> {
        let mut want = weights.to_vec();
        want.sort_unstable();
        enumerate_trees(weights.iter().sum())
            .into_iter()
            .filter(|t| is_w_type(t) && leaf_weights(t) == want)
            .collect()
    }

    #[test]
    fn matches_census_filter() {
        for n in 1..=5 {
            let w = vec![1; n];
            let fast: BTreeSet<_> = enumerate_fm_strata(&w).unwrap().into_iter().collect();
            assert_eq!(fast, brute(&w), "n = {n}");
        }
        for w in [vec![1, 2], vec![1, 1, 2], vec![2, 3], vec![1, 2, 3]] {
            let fast: BTreeSet<_> = enumerate_fm_strata(&w).unwrap().into_iter().collect();
            assert_eq!(fast, brute(&w), "{w:?}");
        }
    }

    #[test]
    fn format_examples() {
        let f = |s: &str| stratum_format(&parse_tree(s).unwrap()).unwrap();
        assert_eq!(f("[0[1,1,1]]"), "[x1,x2,x3]");
        assert_eq!(f("[0[0[1,1,1]]]"), "[x1[y1,y2,y3]]");
        assert_eq!(f("[0[0[0[1,1],1]]]"), "[x1[y1[z1,z2],y2]]");
        assert!(stratum_format(&parse_tree("[1[1]]").unwrap()).is_err());
    }

    #[test]
    fn formats_parse_back() {
        for n in 1..=5 {
            for t in enumerate_fm_strata(&vec![1; n]).unwrap() {
                let s = stratum_format(&t).unwrap();
                let c = parse_config(&s).unwrap();
                assert_eq!(c.to_tree(&|_| 1), t, "{s}");
            }
        }
    }
}
