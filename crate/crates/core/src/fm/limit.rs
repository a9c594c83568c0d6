use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{norm_sq, zero4, FmError, Vec4};
use crate::algebra::{format_rational, parse_rational, Rational};
use crate::tree::{BubbleTree, TreeNode, VertexId};

/// Polynomial in the degeneration parameter `t`, coefficients ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPoly(Vec<Rational>);

impl TPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `t`-adic valuation; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn at_zero(&self) -> Rational {
        self.0.first().cloned().unwrap_or_else(Rational::zero)
    }

    /// Divides by `t^m`; the caller guarantees the valuation is at least `m`.
    pub fn shift_down(&self, m: usize) -> Self {
        Self::new(self.0.iter().skip(m).cloned().collect())
    }

    /// Substitutes `t ↦ c·t`.
    pub fn rescale(&self, c: &Rational) -> Self {
        let mut f = Rational::from_integer(1.into());
        let mut out = Vec::with_capacity(self.0.len());
        for a in &self.0 {
            out.push(a * &f);
            f *= c;
        }
        Self::new(out)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    fn add(&self, other: &Self) -> Self {
        self.sub(&other.scale(&Rational::from_integer((-1).into())))
    }
}

pub type PathT = [TPoly; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFamily {
    pub points: Vec<PathT>,
    pub weights: Vec<u64>,
}

impl PolynomialFamily {
    pub fn new(points: Vec<PathT>, weights: Vec<u64>) -> Result<Self, FmError> {
        if points.is_empty() {
            return Err(FmError::Empty);
        }
        if points.len() != weights.len() {
            return Err(FmError::Malformed(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(FmError::ZeroWeight);
        }
        Ok(Self { points, weights })
    }

    /// The family with `t` replaced by `c·t`.
    pub fn reparametrized(&self, c: &Rational) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| std::array::from_fn(|i| p[i].rescale(c)))
                .collect(),
            weights: self.weights.clone(),
        }
    }
}

/// One collision point inside a screen: the points of the family that merge
/// there, their total weight and the (centred) position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScreenPoint {
    pub members: Vec<usize>,
    pub weight: u64,
    pub position: Vec4,
}

/// The rescaled configuration seen at a collision, up to positive scaling.
/// `scale_squared` is `λ²` making `λ·position` balanced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Screen {
    pub vertex: VertexId,
    pub members: Vec<usize>,
    /// Cumulative `t`-order at which this screen separates its points.
    pub order: usize,
    pub points: Vec<ScreenPoint>,
    pub scale_squared: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitStratum {
    pub tree: BubbleTree,
    pub screens: Vec<Screen>,
}

enum Cluster {
    Leaf(usize),
    Ghost {
        members: Vec<usize>,
        order: usize,
        points: Vec<ScreenPoint>,
        scale_squared: Rational,
        children: Vec<Cluster>,
    },
}

/// Groups indices by an exact key, keeping first-appearance order.
fn group_by<K: Ord + Clone>(items: &[usize], key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
    let mut order: Vec<K> = Vec::new();
    let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for &i in items {
        let k = key(i);
        if !groups.contains_key(&k) {
            order.push(k.clone());
        }
        groups.entry(k).or_default().push(i);
    }
    order.into_iter().map(|k| groups.remove(&k).unwrap()).collect()
}

fn at_zero(p: &PathT) -> Vec4 {
    std::array::from_fn(|i| p[i].at_zero())
}

/// Degeneration limit of the family as `t → 0⁺`.
pub fn limit_stratum(f: &PolynomialFamily) -> Result<LimitStratum, FmError> {
    let all: Vec<usize> = (0..f.points.len()).collect();
    let mut top = Vec::new();
    for g in group_by(&all, |i| at_zero(&f.points[i])) {
        top.push(if g.len() == 1 {
            Cluster::Leaf(g[0])
        } else {
            resolve_cluster(f, &g, &f.points, 0)?
        });
    }
    let mut screens = Vec::new();
    let node = assemble(f, top, &mut screens);
    Ok(LimitStratum {
        tree: BubbleTree::from_node(node),
        screens,
    })
}

/// `paths` holds, for every index in `members`, the current normalised path.
/// All members agree at `t = 0`.
fn resolve_cluster(
    f: &PolynomialFamily,
    members: &[usize],
    paths: &[PathT],
    order_so_far: usize,
) -> Result<Cluster, FmError> {
    let total: u64 = members.iter().map(|&i| f.weights[i]).sum();
    let total_q = Rational::from_integer(total.into());
    let mut bary: PathT = Default::default();
    for &i in members {
        let w = Rational::from_integer(f.weights[i].into());
        for (k, b) in bary.iter_mut().enumerate() {
            *b = b.add(&paths[i][k].scale(&w));
        }
    }
    let inv = Rational::from_integer(1.into()) / &total_q;
    let bary: PathT = std::array::from_fn(|k| bary[k].scale(&inv));
    let rel: BTreeMap<usize, PathT> = members
        .iter()
        .map(|&i| (i, std::array::from_fn(|k| paths[i][k].sub(&bary[k]))))
        .collect();
    let m = rel
        .values()
        .flat_map(|p| p.iter().filter_map(TPoly::valuation))
        .min()
        .ok_or(FmError::NotEventuallyDistinct(members[0], members[1]))?;
    if m == 0 {
        // members agree at t = 0, so relative paths vanish there
        return Err(FmError::OrderGuard(members.to_vec()));
    }
    let mut next: Vec<PathT> = paths.to_vec();
    for (&i, p) in &rel {
        next[i] = std::array::from_fn(|k| p[k].shift_down(m));
    }
    let order = order_so_far + m;
    let groups = group_by(members, |i| at_zero(&next[i]));
    let mut points = Vec::new();
    let mut children = Vec::new();
    let mut moment = Rational::zero();
    for g in groups {
        let weight: u64 = g.iter().map(|&i| f.weights[i]).sum();
        let position = at_zero(&next[g[0]]);
        moment += Rational::from_integer(weight.into()) * norm_sq(&position);
        points.push(ScreenPoint {
            members: g.clone(),
            weight,
            position,
        });
        children.push(if g.len() == 1 {
            Cluster::Leaf(g[0])
        } else {
            let sub = resolve_cluster(f, &g, &next, order)?;
            if let Cluster::Ghost { order: o, .. } = &sub {
                if *o <= order {
                    return Err(FmError::OrderGuard(g));
                }
            }
            sub
        });
    }
    if points.len() < 2 {
        return Err(FmError::OrderGuard(members.to_vec()));
    }
    Ok(Cluster::Ghost {
        members: members.to_vec(),
        order,
        points,
        scale_squared: total_q / moment,
        children,
    })
}

fn cluster_node(f: &PolynomialFamily, c: &Cluster) -> TreeNode {
    match c {
        Cluster::Leaf(i) => TreeNode::leaf(f.weights[*i]),
        Cluster::Ghost { children, .. } => {
            TreeNode::with_children(0, children.iter().map(|c| cluster_node(f, c)).collect())
        }
    }
}

/// Sorts clusters exactly as [`BubbleTree::from_node`] sorts children and
/// assigns preorder vertex ids to the screens.
fn assemble(f: &PolynomialFamily, top: Vec<Cluster>, screens: &mut Vec<Screen>) -> TreeNode {
    let root = TreeNode::with_children(0, top.iter().map(|c| cluster_node(f, c)).collect());
    let mut next_id = 1;
    let sorted: Vec<Cluster> = sort_clusters(f, top).into_iter().map(|p| p.1).collect();
    number(&sorted, &mut next_id, screens);
    screens.sort_by_key(|s| s.vertex);
    root
}

fn sort_clusters(f: &PolynomialFamily, cs: Vec<Cluster>) -> Vec<(TreeNode, Cluster)> {
    let mut keyed: Vec<(TreeNode, Cluster)> = cs
        .into_iter()
        .map(|c| {
            let c = match c {
                Cluster::Ghost {
                    members,
                    order,
                    points,
                    scale_squared,
                    children,
                } => Cluster::Ghost {
                    members,
                    order,
                    points,
                    scale_squared,
                    children: sort_clusters(f, children).into_iter().map(|p| p.1).collect(),
                },
                leaf => leaf,
            };
            let mut n = cluster_node(f, &c);
            n.canonicalize();
            (n, c)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed
}

fn number(cs: &[Cluster], next_id: &mut usize, screens: &mut Vec<Screen>) {
    for c in cs {
        let id = *next_id;
        *next_id += 1;
        if let Cluster::Ghost {
            members,
            order,
            points,
            scale_squared,
            children,
        } = c
        {
            screens.push(Screen {
                vertex: id,
                members: members.clone(),
                order: *order,
                points: points.clone(),
                scale_squared: scale_squared.clone(),
            });
            number(children, next_id, screens);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyPointJson {
    /// Four coordinate polynomials, each a list of rational coefficient
    /// strings in ascending powers of `t`.
    pub coords: [Vec<String>; 4],
    #[serde(default = "one")]
    pub weight: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub schema: u32,
    pub points: Vec<FamilyPointJson>,
}

impl FamilyJson {
    pub fn to_family(&self) -> Result<PolynomialFamily, FmError> {
        if self.schema != 1 {
            return Err(FmError::Malformed(format!("unsupported schema {}", self.schema)));
        }
        let mut points = Vec::new();
        for p in &self.points {
            let mut path: PathT = Default::default();
            for (k, cs) in p.coords.iter().enumerate() {
                let coeffs = cs
                    .iter()
                    .map(|s| parse_rational(s).map_err(|e| FmError::Malformed(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                path[k] = TPoly::new(coeffs);
            }
            points.push(path);
        }
        PolynomialFamily::new(points, self.points.iter().map(|p| p.weight).collect())
    }

    pub fn from_family(f: &PolynomialFamily) -> Self {
        Self {
            schema: 1,
            points: f
                .points
                .iter()
                .zip(&f.weights)
                .map(|(p, &weight)| FamilyPointJson {
                    coords: std::array::from_fn(|k| p[k].coeffs().iter().map(format_rational).collect()),
                    weight,
                })
                .collect(),
        }
    }
}

impl LimitStratum {
    pub fn to_json(&self) -> serde_json::Value {
        let fmt4 = |v: &Vec4| v.iter().map(format_rational).collect::<Vec<_>>();
        serde_json::json!({
            "tree": self.tree.canonical_form(),
            "screens": self.screens.iter().map(|s| serde_json::json!({
                "vertex": s.vertex,
                "members": s.members,
                "order": s.order,
                "scale_squared": format_rational(&s.scale_squared),
                "points": s.points.iter().map(|p| serde_json::json!({
                    "members": p.members,
                    "weight": p.weight,
                    "position": fmt4(&p.position),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Weighted barycentre of a screen, which must vanish.
pub fn screen_center(s: &Screen) -> Vec4 {
    let mut c = zero4();
    for p in &s.points {
        let w = Rational::from_integer(p.weight.into());
        for (ci, x) in c.iter_mut().zip(&p.position) {
            *ci += &w * x;
        }
    }
    c
}
