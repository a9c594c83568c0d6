//! Vertex/edge-list JSON for trees.
//!
//! ```json
//! {"schema":1,"vertices":[{"id":0,"weight":0,"marks":[],"root":true},...],
//!  "edges":[[0,1],...]}
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BubbleTree, TreeError, TreeNode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: usize,
    pub weight: u64,
    #[serde(default)]
    pub marks: Vec<u64>,
    #[serde(default)]
    pub root: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub schema: u32,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeJson {
    pub fn from_tree(t: &BubbleTree) -> Self {
        Self {
            schema: 1,
            vertices: t
                .vertices()
                .iter()
                .enumerate()
                .map(|(id, v)| VertexJson {
                    id,
                    weight: v.weight,
                    marks: v.marks.clone(),
                    root: v.is_root(),
                })
                .collect(),
            edges: t.edges().iter().map(|e| (e.parent, e.child)).collect(),
        }
    }

    /// Checks structure (one root, every other vertex one parent, connected)
    /// and builds the canonical tree. Does not check the bubble condition.
    pub fn to_tree(&self) -> Result<BubbleTree, TreeError> {
        let bad = |m: String| TreeError::Malformed(m);
        if self.schema != 1 {
            return Err(bad(format!("unsupported schema {}", self.schema)));
        }
        let mut by_id = BTreeMap::new();
        for v in &self.vertices {
            if by_id.insert(v.id, v).is_some() {
                return Err(bad(format!("duplicate vertex id {}", v.id)));
            }
        }
        let roots: Vec<usize> = self.vertices.iter().filter(|v| v.root).map(|v| v.id).collect();
        let [root] = roots[..] else {
            return Err(bad(format!("expected exactly one root, found {}", roots.len())));
        };
        let mut parent = BTreeMap::new();
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(p, c) in &self.edges {
            if !by_id.contains_key(&p) || !by_id.contains_key(&c) {
                return Err(bad(format!("edge ({p}, {c}) names an unknown vertex")));
            }
            if c == root {
                return Err(bad("the root has a parent".into()));
            }
            if parent.insert(c, p).is_some() {
                return Err(bad(format!("vertex {c} has two parents")));
            }
            children.entry(p).or_default().push(c);
        }
        let mut seen = BTreeSet::new();
        let node = build(root, &by_id, &children, &mut seen)?;
        if seen.len() != by_id.len() {
            return Err(bad("tree is not connected".into()));
        }
        Ok(BubbleTree::from_node(node))
    }
}

fn build(
    v: usize,
    by_id: &BTreeMap<usize, &VertexJson>,
    children: &BTreeMap<usize, Vec<usize>>,
    seen: &mut BTreeSet<usize>,
) -> Result<TreeNode, TreeError> {
    if !seen.insert(v) {
        return Err(TreeError::Malformed(format!("cycle through vertex {v}")));
    }
    let vx = by_id[&v];
    let mut kids = Vec::new();
    for &c in children.get(&v).map(Vec::as_slice).unwrap_or_default() {
        kids.push(build(c, by_id, children, seen)?);
    }
    Ok(TreeNode {
        weight: vx.weight,
        marks: vx.marks.clone(),
        children: kids,
    })
}

impl Serialize for BubbleTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeJson::from_tree(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BubbleTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        TreeJson::deserialize(d)?
            .to_tree()
            .map_err(serde::de::Error::custom)
    }
}

/// Hasse diagram of the contraction order on `trees` in DOT. An arrow
/// `a -> b` means `b` is obtained from `a` by one contraction.
pub fn hasse_dot(trees: &[BubbleTree]) -> String {
    let set: BTreeSet<&BubbleTree> = trees.iter().collect();
    let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
    for t in trees {
        let shape = if t.is_ghost_tree() { "box" } else { "ellipse" };
        out.push_str(&format!("  \"{t}\" [shape={shape}];\n"));
    }
    for t in trees {
        for c in t.single_contractions() {
            if set.contains(&c) {
                out.push_str(&format!("  \"{t}\" -> \"{c}\";\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_trees;

    #[test]
    fn json_round_trip() {
        for t in enumerate_trees(4) {
            let js = serde_json::to_string(&t).unwrap();
            let back: BubbleTree = serde_json::from_str(&js).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn rejects_two_roots_and_cycles() {
        let two = r#"{"schema":1,"vertices":[{"id":0,"weight":1,"root":true},{"id":1,"weight":1,"root":true}],"edges":[]}"#;
        assert!(serde_json::from_str::<BubbleTree>(two).is_err());
        let cyc = r#"{"schema":1,"vertices":[{"id":0,"weight":1,"root":true},{"id":1,"weight":1},{"id":2,"weight":1}],"edges":[[1,2],[2,1]]}"#;
        assert!(serde_json::from_str::<BubbleTree>(cyc).is_err());
    }

    #[test]
    fn hasse_has_edge_to_top() {
        let dot = hasse_dot(&enumerate_trees(2));
        assert!(dot.contains("\"[1[1]]\" -> \"[2]\""));
    }
}
