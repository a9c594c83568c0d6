//! Bubble trees: rooted, weighted, unordered trees indexing strata of the
//! compactified moduli space.
//!
//! A [`BubbleTree`] is always stored in canonical form: children are sorted by
//! the structural key `(weight, marks, children)` and vertices are numbered in
//! preorder. Two trees are equal exactly when they are isomorphic as weighted
//! rooted trees with unordered children, and the canonical bracket string is
//! cached so equality, hashing and ordering are string operations.

mod dimension;
mod enumerate;
mod json;

pub use dimension::{AffineDim, StratumInfo};
pub use enumerate::{enumerate_trees, nonroot_subtrees};
pub use json::{hasse_dot, TreeJson, VertexJson};

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

pub type VertexId = usize;

/// An edge, identified by its endpoints. Every non-root vertex has exactly one
/// parent edge, so `child` alone determines the edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub parent: VertexId,
    pub child: VertexId,
}

/// Owned recursive form used to build trees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TreeNode {
    pub weight: u64,
    pub marks: Vec<u64>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn leaf(weight: u64) -> Self {
        Self {
            weight,
            ..Self::default()
        }
    }

    pub fn with_children(weight: u64, children: Vec<TreeNode>) -> Self {
        Self {
            weight,
            marks: Vec::new(),
            children,
        }
    }

    pub fn charge(&self) -> u64 {
        self.weight + self.marks.iter().sum::<u64>() + self.children.iter().map(Self::charge).sum::<u64>()
    }

    /// Sorts marks and children recursively so that derived `Ord` is the
    /// canonical structural order.
    pub fn canonicalize(&mut self) {
        self.marks.sort_unstable();
        for c in &mut self.children {
            c.canonicalize();
        }
        self.children.sort();
    }

    fn write_bracket(&self, out: &mut String) {
        out.push_str(&self.weight.to_string());
        if self.marks.is_empty() && self.children.is_empty() {
            return;
        }
        out.push('[');
        let mut first = true;
        for m in &self.marks {
            if !first {
                out.push(',');
            }
            first = false;
            out.push('★');
            out.push_str(&m.to_string());
        }
        for c in &self.children {
            if !first {
                out.push(',');
            }
            first = false;
            c.write_bracket(out);
        }
        out.push(']');
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub weight: u64,
    pub marks: Vec<u64>,
    pub parent: Option<VertexId>,
    pub children: Vec<VertexId>,
}

impl Vertex {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("({}, {}) is not an edge", .0.parent, .0.child)]
    NotAnEdge(Edge),
    #[error("vertex {0} is not a ghost vertex")]
    NotGhost(VertexId),
    #[error("χ + σ = {0} is odd; the stratum dimension would not be an integer")]
    Parity(i64),
    #[error("invalid bubble tree: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("malformed tree: {0}")]
    Malformed(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Which half of the bubble-tree condition failed at a weight-0 vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Fewer than two children (marked points count as children).
    TooFewChildren { count: usize },
    /// A child subtree carries zero total charge.
    ZeroChargeChild { child: VertexId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: VertexId,
    pub clause: Clause,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.clause {
            Clause::TooFewChildren { count } => write!(
                f,
                "vertex {} has weight 0 but only {} child(ren)",
                self.vertex, count
            ),
            Clause::ZeroChargeChild { child } => write!(
                f,
                "vertex {} has weight 0 and child {} of total charge 0",
                self.vertex, child
            ),
        }
    }
}

/// Ghost vertices of minimal total charge and that charge (the energy).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ends {
    pub vertices: Vec<VertexId>,
    pub energy: u64,
}

/// Image of a simultaneous contraction. `identity` is set when the support was
/// empty, i.e. the zero gluing parameter, which maps the tree to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiImage {
    pub tree: BubbleTree,
    pub identity: bool,
}

#[derive(Clone, Debug)]
pub struct BubbleTree {
    vertices: Vec<Vertex>,
    canon: String,
}

impl PartialEq for BubbleTree {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for BubbleTree {}

impl Hash for BubbleTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

impl PartialOrd for BubbleTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by vertex count, then canonical string.
impl Ord for BubbleTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.canon.cmp(&other.canon))
    }
}

impl fmt::Display for BubbleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canon)
    }
}

impl BubbleTree {
    /// Builds the canonical tree without validating the bubble-tree condition.
    pub fn from_node(mut node: TreeNode) -> Self {
        node.canonicalize();
        let mut canon = String::from("[");
        node.write_bracket(&mut canon);
        canon.push(']');
        let mut vertices = Vec::new();
        flatten(&node, None, &mut vertices);
        Self { vertices, canon }
    }

    /// Builds and validates.
    pub fn new(node: TreeNode) -> Result<Self, TreeError> {
        let t = Self::from_node(node);
        t.validate().map_err(TreeError::Invalid)?;
        Ok(t)
    }

    /// The single-vertex tree `[k]`.
    pub fn top(k: u64) -> Self {
        Self::from_node(TreeNode::leaf(k))
    }

    pub fn root(&self) -> VertexId {
        0
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex, TreeError> {
        self.vertices.get(v).ok_or(TreeError::UnknownVertex(v))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Canonical bracket string, e.g. `[0[0[1,1]]]`.
    pub fn canonical_form(&self) -> &str {
        &self.canon
    }

    pub fn to_node(&self) -> TreeNode {
        self.subtree_node(self.root())
    }

    pub fn subtree_node(&self, v: VertexId) -> TreeNode {
        let vx = &self.vertices[v];
        TreeNode {
            weight: vx.weight,
            marks: vx.marks.clone(),
            children: vx.children.iter().map(|&c| self.subtree_node(c)).collect(),
        }
    }

    /// Parent→child edges in child preorder.
    pub fn edges(&self) -> Vec<Edge> {
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(child, v)| v.parent.map(|parent| Edge { parent, child }))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn has_marks(&self) -> bool {
        self.vertices.iter().any(|v| !v.marks.is_empty())
    }

    /// `W(v)`: weights plus marked weights over the subtree rooted at `v`.
    pub fn total_charge(&self, v: VertexId) -> Result<u64, TreeError> {
        let vx = self.vertex(v)?;
        let own = vx.weight + vx.marks.iter().sum::<u64>();
        let below: u64 = vx
            .children
            .iter()
            .map(|&c| self.total_charge(c).unwrap_or(0))
            .sum();
        Ok(own + below)
    }

    pub fn charge(&self) -> u64 {
        self.total_charge(self.root()).unwrap_or(0)
    }

    /// Checks every non-root vertex: nonzero weight, or at least two children
    /// each carrying positive total charge. Marked points count as children.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        for (id, v) in self.vertices.iter().enumerate() {
            if v.is_root() || v.weight != 0 {
                continue;
            }
            let count = v.children.len() + v.marks.len();
            if count < 2 {
                violations.push(Violation {
                    vertex: id,
                    clause: Clause::TooFewChildren { count },
                });
            }
            for &c in &v.children {
                if self.total_charge(c).unwrap_or(0) == 0 {
                    violations.push(Violation {
                        vertex: id,
                        clause: Clause::ZeroChargeChild { child: c },
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn is_ghost_vertex(&self, v: VertexId) -> bool {
        self.vertices
            .get(v)
            .is_some_and(|x| !x.is_root() && x.weight == 0)
    }

    /// Weight-0 non-root vertices.
    pub fn ghost_vertices(&self) -> Vec<VertexId> {
        (0..self.vertices.len())
            .filter(|&v| self.is_ghost_vertex(v))
            .collect()
    }

    pub fn ghost_count(&self) -> usize {
        self.ghost_vertices().len()
    }

    pub fn is_ghost_tree(&self) -> bool {
        self.ghost_count() > 0
    }

    /// Ghost vertices of minimal total charge; `None` without ghosts.
    pub fn ends(&self) -> Option<Ends> {
        let ghosts = self.ghost_vertices();
        let energy = ghosts
            .iter()
            .map(|&g| self.total_charge(g).unwrap_or(0))
            .min()?;
        let vertices = ghosts
            .into_iter()
            .filter(|&g| self.total_charge(g).unwrap_or(0) == energy)
            .collect();
        Some(Ends { vertices, energy })
    }

    fn check_edge(&self, e: Edge) -> Result<(), TreeError> {
        match self.vertices.get(e.child) {
            Some(v) if v.parent == Some(e.parent) => Ok(()),
            _ => Err(TreeError::NotAnEdge(e)),
        }
    }

    /// Merges `e.child` into `e.parent`: weights add, marks and children move up.
    pub fn contract(&self, e: Edge) -> Result<BubbleTree, TreeError> {
        self.check_edge(e)?;
        Ok(self.contract_children(&[e.child].into_iter().collect()))
    }

    /// Every tree obtained by one contraction, deduplicated.
    pub fn single_contractions(&self) -> BTreeSet<BubbleTree> {
        self.edges()
            .into_iter()
            .map(|e| self.contract_children(&[e.child].into_iter().collect()))
            .collect()
    }

    fn contract_children(&self, merged: &HashSet<VertexId>) -> BubbleTree {
        BubbleTree::from_node(self.merged_node(self.root(), merged))
    }

    fn merged_node(&self, v: VertexId, merged: &HashSet<VertexId>) -> TreeNode {
        let vx = &self.vertices[v];
        let mut node = TreeNode {
            weight: vx.weight,
            marks: vx.marks.clone(),
            children: Vec::new(),
        };
        for &c in &vx.children {
            let cn = self.merged_node(c, merged);
            if merged.contains(&c) {
                node.weight += cn.weight;
                node.marks.extend(cn.marks);
                node.children.extend(cn.children);
            } else {
                node.children.push(cn);
            }
        }
        node
    }

    /// Simultaneous contraction of every edge in `support` (the map ψ from
    /// gluing parameters to strata, nonzero coordinates ↦ contracted edges).
    pub fn psi_contraction(&self, support: &[Edge]) -> Result<PsiImage, TreeError> {
        for &e in support {
            self.check_edge(e)?;
        }
        if support.is_empty() {
            return Ok(PsiImage {
                tree: self.clone(),
                identity: true,
            });
        }
        let merged = support.iter().map(|e| e.child).collect();
        Ok(PsiImage {
            tree: self.contract_children(&merged),
            identity: false,
        })
    }

    /// Deletes the ghost `v` with everything below it and records `W(v)` as a
    /// marked weight on its parent.
    pub fn cut_at_end(&self, v: VertexId) -> Result<BubbleTree, TreeError> {
        self.cut_at_ends(&[v])
    }

    pub fn cut_at_ends(&self, ends: &[VertexId]) -> Result<BubbleTree, TreeError> {
        for &v in ends {
            self.vertex(v)?;
            if !self.is_ghost_vertex(v) {
                return Err(TreeError::NotGhost(v));
            }
        }
        let cut: HashSet<VertexId> = ends.iter().copied().collect();
        Ok(BubbleTree::from_node(self.cut_node(self.root(), &cut)))
    }

    fn cut_node(&self, v: VertexId, cut: &HashSet<VertexId>) -> TreeNode {
        let vx = &self.vertices[v];
        let mut node = TreeNode {
            weight: vx.weight,
            marks: vx.marks.clone(),
            children: Vec::new(),
        };
        for &c in &vx.children {
            if cut.contains(&c) {
                node.marks.push(self.total_charge(c).unwrap_or(0));
            } else {
                node.children.push(self.cut_node(c, cut));
            }
        }
        node
    }

    /// Replaces each child subtree of `v` by a single leaf carrying its total
    /// charge. Used when the moduli of those subtrees are already resolved.
    pub fn collapse_children(&self, v: VertexId) -> Result<BubbleTree, TreeError> {
        self.vertex(v)?;
        Ok(BubbleTree::from_node(self.collapse_node(self.root(), v)))
    }

    fn collapse_node(&self, v: VertexId, target: VertexId) -> TreeNode {
        let vx = &self.vertices[v];
        let children = if v == target {
            vx.children
                .iter()
                .map(|&c| TreeNode::leaf(self.total_charge(c).unwrap_or(0)))
                .collect()
        } else {
            vx.children
                .iter()
                .map(|&c| self.collapse_node(c, target))
                .collect()
        };
        TreeNode {
            weight: vx.weight,
            marks: vx.marks.clone(),
            children,
        }
    }

    /// Depth of `v` (root = 0).
    pub fn depth(&self, v: VertexId) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.vertices[cur].parent {
            d += 1;
            cur = p;
        }
        d
    }
}

fn flatten(node: &TreeNode, parent: Option<VertexId>, out: &mut Vec<Vertex>) -> VertexId {
    let id = out.len();
    out.push(Vertex {
        weight: node.weight,
        marks: node.marks.clone(),
        parent,
        children: Vec::new(),
    });
    for c in &node.children {
        let cid = flatten(c, Some(id), out);
        out[id].children.push(cid);
    }
    id
}

/// `t1 ≤ t2` iff `t2` is reachable from `t1` by zero or more contractions.
pub fn tree_leq(t1: &BubbleTree, t2: &BubbleTree) -> bool {
    if t1.charge() != t2.charge() || t2.edge_count() > t1.edge_count() {
        return false;
    }
    let mut frontier: BTreeSet<BubbleTree> = [t1.clone()].into_iter().collect();
    for _ in t2.edge_count()..t1.edge_count() {
        frontier = frontier
            .iter()
            .flat_map(|t| t.single_contractions())
            .collect();
    }
    frontier.contains(t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_tree;

    fn t(s: &str) -> BubbleTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(t("[0[0[1,1]]]").validate().is_ok());
        let single = BubbleTree::from_node(TreeNode::with_children(
            0,
            vec![TreeNode::with_children(0, vec![TreeNode::leaf(2)])],
        ));
        let v = single.validate().unwrap_err();
        assert_eq!(v[0].clause, Clause::TooFewChildren { count: 1 });
        // ghost whose second child is a charge-0 subtree
        let zero = BubbleTree::from_node(TreeNode::with_children(
            0,
            vec![TreeNode::with_children(
                0,
                vec![TreeNode::leaf(1), TreeNode::leaf(0)],
            )],
        ));
        let v = zero.validate().unwrap_err();
        assert!(v
            .iter()
            .any(|x| matches!(x.clause, Clause::ZeroChargeChild { .. })));
    }

    #[test]
    fn total_charge_examples() {
        assert_eq!(t("[1]").total_charge(0).unwrap(), 1);
        assert_eq!(t("[1[0[1,1]]]").total_charge(0).unwrap(), 3);
        let g = t("[0[0[1,2]]]");
        assert_eq!(g.total_charge(1).unwrap(), 3);
        assert!(matches!(g.total_charge(9), Err(TreeError::UnknownVertex(9))));
    }

    #[test]
    fn contraction_examples() {
        let a = t("[1[0[1,1]]]");
        assert_eq!(a.contract(Edge { parent: 0, child: 1 }).unwrap(), t("[1[1,1]]"));
        let t1 = t("[0[0[0[1,1],1]]]");
        // vertices: 0 root, 1 outer ghost, 2 inner ghost, 3,4 leaves, 5 leaf
        assert_eq!(t1.vertex(2).unwrap().weight, 0);
        assert_eq!(t1.contract(Edge { parent: 1, child: 2 }).unwrap(), t("[0[0[1,1,1]]]"));
        assert_eq!(t("[2[1]]").contract(Edge { parent: 0, child: 1 }).unwrap(), t("[3]"));
        assert!(matches!(
            a.contract(Edge { parent: 1, child: 0 }),
            Err(TreeError::NotAnEdge(_))
        ));
    }

    #[test]
    fn order_examples() {
        assert!(tree_leq(&t("[0[0[1,1]]]"), &t("[2]")));
        assert!(!tree_leq(&t("[1[1]]"), &t("[0[1,1]]")));
        let x = t("[0[1,1[1]]]");
        assert!(tree_leq(&x, &x));
    }

    #[test]
    fn ghosts_and_ends() {
        let a = t("[0[0[1,1]]]");
        assert_eq!(a.ghost_vertices(), vec![1]);
        assert_eq!(a.ends().unwrap(), Ends { vertices: vec![1], energy: 2 });
        let b = t("[0[0[0[1,1],1]]]");
        assert_eq!(b.ghost_vertices(), vec![1, 2]);
        assert_eq!(b.ends().unwrap(), Ends { vertices: vec![2], energy: 2 });
        assert!(t("[1[1,1]]").ends().is_none());
    }

    #[test]
    fn psi_examples() {
        let g = t("[0[0[1,1]]]");
        let all = g.psi_contraction(&g.edges()).unwrap();
        assert_eq!(all.tree, t("[2]"));
        let parent = g.psi_contraction(&[Edge { parent: 0, child: 1 }]).unwrap();
        assert_eq!(parent.tree, t("[0[1,1]]"));
        let none = g.psi_contraction(&[]).unwrap();
        assert!(none.identity);
        assert_eq!(none.tree, g);
    }

    #[test]
    fn cut_examples() {
        let g = t("[0[0[1,1]]]");
        let c = g.cut_at_end(1).unwrap();
        assert_eq!(c.canonical_form(), "[0[★2]]");
        assert!(c.validate().is_ok());
        let t1 = t("[0[0[0[1,1],1]]]");
        assert_eq!(t1.cut_at_end(2).unwrap().canonical_form(), "[0[0[★2,1]]]");
        assert!(t1.cut_at_end(2).unwrap().validate().is_ok());
        assert_eq!(t("[1[0[1,1]]]").cut_at_end(1).unwrap().canonical_form(), "[1[★2]]");
        assert!(matches!(t("[1[1]]").cut_at_end(1), Err(TreeError::NotGhost(1))));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(t("[1[2,1]]"), t("[1[1,2]]"));
        assert_ne!(t("[1[1[1]]]").canonical_form(), t("[1[1,1]]").canonical_form());
        let x = t("[0[1,1[1]]]");
        assert_eq!(t(x.canonical_form()), x);
    }
}
