//! Flip resolution of ghost strata, run as surgery on the stratum poset.
//!
//! Ghost trees are processed in rounds `m = 2..=K` by the energy of their ends.
//! Every end of a tree is flipped at once: the sphere bundle of its normal
//! slice (dimension `4(n+1) − 1` for an end with `n` children) is divided by the
//! free `SU(2)` action and the quotient becomes the exceptional divisor, whose
//! points are distributed to the strata reached by the support pattern of the
//! gluing parameter.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{format_rational, Rational};
use crate::tree::{enumerate_trees, hasse_dot, tree_leq, BubbleTree, Edge, StratumInfo, TreeError, TreeNode, VertexId};

pub const GROUP_LABEL: &str = "SU(2)";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlipError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("round {m}: tree {tree} still has an unresolved end of energy {energy}")]
    Precondition { m: u64, tree: String, energy: u64 },
    #[error("dimension audit failed for {tree}: {reason}")]
    Audit { tree: String, reason: String },
    #[error("assignment from {from} to {target} is incompatible: {reason}")]
    Compatibility {
        from: String,
        target: String,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Active,
    /// Removed from the active poset by the event with this index.
    Flipped(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumRecord {
    pub info: StratumInfo,
    pub status: Status,
    /// `(event index, end vertex, support pattern)` triples landing here.
    pub exceptional: Vec<(usize, VertexId, Vec<usize>)>,
}

#[derive(Debug, Clone)]
pub struct StratumPoset {
    pub k: u64,
    pub chi: i64,
    pub sigma: i64,
    pub strata: BTreeMap<BubbleTree, StratumRecord>,
}

impl StratumPoset {
    pub fn active(&self) -> impl Iterator<Item = &StratumRecord> {
        self.strata.values().filter(|r| r.status == Status::Active)
    }

    pub fn active_trees(&self) -> Vec<BubbleTree> {
        self.active().map(|r| r.info.tree.clone()).collect()
    }

    pub fn contains(&self, t: &BubbleTree) -> bool {
        self.strata.contains_key(t)
    }

    /// Covering relations `a → b` (b one contraction above a) among all strata.
    pub fn hasse(&self) -> Vec<(BubbleTree, BubbleTree)> {
        let mut out = Vec::new();
        for t in self.strata.keys() {
            for c in t.single_contractions() {
                if self.strata.contains_key(&c) {
                    out.push((t.clone(), c));
                }
            }
        }
        out
    }

    /// Maximal elements among all strata.
    pub fn maxima(&self) -> Vec<BubbleTree> {
        self.strata
            .keys()
            .filter(|t| t.edge_count() == 0)
            .cloned()
            .collect()
    }

    /// DOT of the active poset; strata carrying exceptional points are doubled.
    pub fn to_dot(&self) -> String {
        let active = self.active_trees();
        let mut dot = hasse_dot(&active);
        for r in self.active().filter(|r| !r.exceptional.is_empty()) {
            let line = format!("  \"{}\" [peripheries=2];\n", r.info.tree);
            let at = dot.rfind('}').unwrap_or(dot.len());
            dot.insert_str(at, &line);
        }
        dot
    }
}

pub fn build_poset(k: u64, chi: i64, sigma: i64) -> Result<StratumPoset, FlipError> {
    let mut strata = BTreeMap::new();
    for t in enumerate_trees(k) {
        let info = t.stratum_info(chi, sigma)?;
        strata.insert(
            t,
            StratumRecord {
                info,
                status: Status::Active,
                exceptional: Vec::new(),
            },
        );
    }
    Ok(StratumPoset { k, chi, sigma, strata })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub end: VertexId,
    /// Incident edge indices: 0 is the parent edge, `1..=k` the child edges in
    /// canonical child order.
    pub pattern: Vec<usize>,
    pub target: BubbleTree,
}

/// Image of every nonempty support pattern over the incident edges of `v`.
pub fn exceptional_assignment(t: &BubbleTree, v: VertexId) -> Result<Vec<Assignment>, FlipError> {
    if !t.is_ghost_vertex(v) {
        t.vertex(v)?;
        return Err(TreeError::NotGhost(v).into());
    }
    let vx = t.vertex(v)?;
    let mut incident = vec![Edge {
        parent: vx.parent.expect("ghost vertices are not the root"),
        child: v,
    }];
    incident.extend(vx.children.iter().map(|&c| Edge { parent: v, child: c }));
    let n = incident.len();
    let mut out = Vec::with_capacity((1 << n) - 1);
    for mask in 1u32..(1 << n) {
        let pattern: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let support: Vec<Edge> = pattern.iter().map(|&i| incident[i]).collect();
        out.push(Assignment {
            end: v,
            pattern,
            target: t.psi_contraction(&support)?.tree,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndRecord {
    pub vertex: VertexId,
    pub children: usize,
    pub sphere_dim: i64,
    pub fiber_dim: i64,
    /// Orbifold weight `1/2^{n+1}` from the ℤ₂ in each gluing factor.
    pub multiplicity: Rational,
}

impl EndRecord {
    pub fn new(vertex: VertexId, children: usize) -> Self {
        let sphere_dim = 4 * (children as i64 + 1) - 1;
        Self {
            vertex,
            children,
            sphere_dim,
            fiber_dim: sphere_dim - 3,
            multiplicity: Rational::new(1.into(), (1i64 << (children + 1)).into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionAudit {
    /// Ghost moduli + incident gluing parameters − isotropy.
    pub before: i64,
    /// Cut vertex with its marked point + exceptional fiber.
    pub after: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipEvent {
    pub round: u64,
    /// The tree with every end's subtrees replaced by leaves.
    pub tree: BubbleTree,
    /// Ghost trees of this round handled by this event.
    pub sources: Vec<BubbleTree>,
    pub energy: u64,
    pub ends: Vec<EndRecord>,
    pub group: &'static str,
    /// The representative with every end cut off and recorded as a mark.
    pub cut: BubbleTree,
    pub assignments: Vec<Assignment>,
    pub audits: Vec<DimensionAudit>,
}

impl FlipEvent {
    pub fn multiplicity(&self) -> Rational {
        self.ends.iter().map(|e| e.multiplicity.clone()).product()
    }
}

/// Checks the sphere and fiber dimensions and that the flip keeps the local
/// dimension of a neighbourhood of each end.
pub fn audit_dimensions(e: &FlipEvent) -> Result<(), FlipError> {
    let fail = |reason: String| FlipError::Audit {
        tree: e.tree.to_string(),
        reason,
    };
    if e.audits.len() != e.ends.len() {
        return Err(fail("one audit record per end expected".into()));
    }
    for (end, a) in e.ends.iter().zip(&e.audits) {
        let n = end.children as i64;
        if end.sphere_dim != 4 * (n + 1) - 1 {
            return Err(fail(format!(
                "end {}: sphere dimension {} ≠ 4(n+1)−1 = {}",
                end.vertex,
                end.sphere_dim,
                4 * (n + 1) - 1
            )));
        }
        if end.fiber_dim != end.sphere_dim - 3 {
            return Err(fail(format!(
                "end {}: fiber dimension {} ≠ sphere dimension − 3",
                end.vertex, end.fiber_dim
            )));
        }
        if a.before != a.after {
            return Err(fail(format!(
                "end {}: neighbourhood dimension {} before, {} after",
                end.vertex, a.before, a.after
            )));
        }
    }
    Ok(())
}

fn audit_for(end: &EndRecord) -> DimensionAudit {
    let n = end.children as i64;
    DimensionAudit {
        before: (4 * n - 5) + 4 * (n + 1) - 3,
        after: (4 * n - 4) + end.fiber_dim,
    }
}

/// Replaces the children of each end by leaves of the same charge.
fn leafify(t: &BubbleTree, ends: &[VertexId]) -> BubbleTree {
    fn go(t: &BubbleTree, v: VertexId, ends: &BTreeSet<VertexId>) -> TreeNode {
        let vx = &t.vertices()[v];
        let children = if ends.contains(&v) {
            vx.children
                .iter()
                .map(|&c| TreeNode::leaf(t.total_charge(c).unwrap_or(0)))
                .collect()
        } else {
            vx.children.iter().map(|&c| go(t, c, ends)).collect()
        };
        TreeNode {
            weight: vx.weight,
            marks: vx.marks.clone(),
            children,
        }
    }
    let set = ends.iter().copied().collect();
    BubbleTree::from_node(go(t, t.root(), &set))
}

/// Runs round `m`: every active ghost tree whose ends have energy `m` is
/// flipped and removed from the active poset.
pub fn flip_step(p: &StratumPoset, m: u64, first_event: usize) -> Result<(StratumPoset, Vec<FlipEvent>), FlipError> {
    let mut next = p.clone();
    let mut groups: BTreeMap<BubbleTree, Vec<BubbleTree>> = BTreeMap::new();
    for r in p.active() {
        let t = &r.info.tree;
        let Some(ends) = t.ends() else { continue };
        if ends.energy < m {
            return Err(FlipError::Precondition {
                m,
                tree: t.to_string(),
                energy: ends.energy,
            });
        }
        if ends.energy == m {
            groups.entry(leafify(t, &ends.vertices)).or_default().push(t.clone());
        }
    }
    let mut events = Vec::new();
    for (rep, sources) in groups {
        let ends = rep.ends().expect("leafified ghost tree keeps its ends");
        let records: Vec<EndRecord> = ends
            .vertices
            .iter()
            .map(|&v| EndRecord::new(v, rep.vertices()[v].children.len()))
            .collect();
        let mut assignments = Vec::new();
        for &v in &ends.vertices {
            assignments.extend(exceptional_assignment(&rep, v)?);
        }
        let event = FlipEvent {
            round: m,
            cut: rep.cut_at_ends(&ends.vertices)?,
            audits: records.iter().map(audit_for).collect(),
            ends: records,
            energy: m,
            group: GROUP_LABEL,
            sources,
            tree: rep,
            assignments,
        };
        audit_dimensions(&event)?;
        check_assignments(&next, &event)?;
        let idx = first_event + events.len();
        for s in &event.sources {
            if let Some(r) = next.strata.get_mut(s) {
                r.status = Status::Flipped(idx);
            }
        }
        for a in &event.assignments {
            if let Some(r) = next.strata.get_mut(&a.target) {
                r.exceptional.push((idx, a.end, a.pattern.clone()));
            }
        }
        events.push(event);
    }
    Ok((next, events))
}

/// Every target is a stratum of the poset, lies above the event tree, and has
/// no end of energy below the round.
fn check_assignments(p: &StratumPoset, e: &FlipEvent) -> Result<(), FlipError> {
    for a in &e.assignments {
        let fail = |reason: &str| FlipError::Compatibility {
            from: e.tree.to_string(),
            target: a.target.to_string(),
            reason: reason.into(),
        };
        if !p.contains(&a.target) {
            return Err(fail("target is not a stratum"));
        }
        if !tree_leq(&e.tree, &a.target) {
            return Err(fail("target is not above the source"));
        }
        if a.target.ends().is_some_and(|x| x.energy < e.energy) {
            return Err(fail("target has an end of lower energy"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub initial: StratumPoset,
    pub poset: StratumPoset,
    pub events: Vec<FlipEvent>,
    /// Number of events per round `m = 2..=K`.
    pub rounds: Vec<(u64, usize)>,
}

pub fn resolve(k: u64, chi: i64, sigma: i64) -> Result<Resolution, FlipError> {
    let initial = build_poset(k, chi, sigma)?;
    let mut poset = initial.clone();
    let mut events = Vec::new();
    let mut rounds = Vec::new();
    for m in 2..=k {
        let (next, evs) = flip_step(&poset, m, events.len())?;
        rounds.push((m, evs.len()));
        events.extend(evs);
        poset = next;
    }
    if let Some(r) = poset.active().find(|r| r.info.isotropy_dim != 0) {
        return Err(FlipError::Audit {
            tree: r.info.tree.to_string(),
            reason: "ghost stratum left after the last round".into(),
        });
    }
    Ok(Resolution {
        initial,
        poset,
        events,
        rounds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EventJson {
    pub round: u64,
    pub tree: String,
    pub sources: Vec<String>,
    pub energy: u64,
    pub group: String,
    pub cut: String,
    pub multiplicity: String,
    pub ends: Vec<EndJson>,
    pub assignments: Vec<AssignmentJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndJson {
    pub vertex: VertexId,
    pub children: usize,
    pub sphere_dim: i64,
    pub fiber_dim: i64,
    pub multiplicity: String,
    pub dim_before: i64,
    pub dim_after: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssignmentJson {
    pub end: VertexId,
    pub pattern: Vec<usize>,
    pub target: String,
}

impl From<&FlipEvent> for EventJson {
    fn from(e: &FlipEvent) -> Self {
        Self {
            round: e.round,
            tree: e.tree.to_string(),
            sources: e.sources.iter().map(ToString::to_string).collect(),
            energy: e.energy,
            group: e.group.to_string(),
            cut: e.cut.to_string(),
            multiplicity: format_rational(&e.multiplicity()),
            ends: e
                .ends
                .iter()
                .zip(&e.audits)
                .map(|(x, a)| EndJson {
                    vertex: x.vertex,
                    children: x.children,
                    sphere_dim: x.sphere_dim,
                    fiber_dim: x.fiber_dim,
                    multiplicity: format_rational(&x.multiplicity),
                    dim_before: a.before,
                    dim_after: a.after,
                })
                .collect(),
            assignments: e
                .assignments
                .iter()
                .map(|a| AssignmentJson {
                    end: a.end,
                    pattern: a.pattern.clone(),
                    target: a.target.to_string(),
                })
                .collect(),
        }
    }
}
