//! Valued meet-trees and their correspondence with ultrametric spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ultrametric_violation, UltraError};
use crate::space::FiniteMetricSpace;
use crate::values::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub value: Rational,
    /// The point a leaf stands for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

/// A finite ramified tree with a strictly decreasing valuation; leaves
/// carry value 0 and name points.
///
/// Nodes are stored parent-first: every node's parent has a smaller index,
/// so index 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct ValuedTree {
    nodes: Vec<TreeNode>,
    children: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    nodes: Vec<TreeNode>,
}

impl TryFrom<TreeJson> for ValuedTree {
    type Error = UltraError;
    fn try_from(json: TreeJson) -> Result<Self, UltraError> {
        ValuedTree::new(json.nodes)
    }
}

impl From<ValuedTree> for TreeJson {
    fn from(tree: ValuedTree) -> Self {
        TreeJson { nodes: tree.nodes }
    }
}

impl ValuedTree {
    pub fn new(nodes: Vec<TreeNode>) -> Result<Self, UltraError> {
        let invalid = |msg: String| Err(UltraError::InvalidTree(msg));
        if nodes.is_empty() {
            return invalid("no nodes".into());
        }
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            match (i, node.parent) {
                (0, None) => {}
                (0, Some(_)) => return invalid("node 0 must be the root".into()),
                (_, None) => return invalid(format!("node {i} has no parent")),
                (_, Some(p)) if p >= i => {
                    return invalid(format!("node {i} precedes its parent {p}"))
                }
                (_, Some(p)) => {
                    if node.value >= nodes[p].value {
                        return invalid(format!("value of node {i} is not below its parent's"));
                    }
                    children[p].push(i);
                }
            }
        }
        let mut points = BTreeSet::new();
        for (i, node) in nodes.iter().enumerate() {
            match (&node.point, children[i].len()) {
                (Some(p), 0) => {
                    if !node.value.is_zero() {
                        return invalid(format!("leaf {i} has nonzero value"));
                    }
                    if !points.insert(p.clone()) {
                        return invalid(format!("point {p:?} appears twice"));
                    }
                }
                (Some(_), _) => return invalid(format!("node {i} names a point but has children")),
                (None, 0) => return invalid(format!("node {i} is below no leaf")),
                (None, 1) => return Err(UltraError::NotRamified(i)),
                (None, _) => {}
            }
        }
        Ok(ValuedTree { nodes, children })
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn value(&self, node: usize) -> &Rational {
        &self.nodes[node].value
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.children[node].is_empty()
    }

    /// Leaves in node order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    /// Leaves below (or equal to) `node`, in node order.
    pub fn leaves_below(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if self.is_leaf(x) {
                out.push(x);
            }
            stack.extend(self.children[x].iter().rev());
        }
        out
    }

    /// Root-to-node path.
    pub fn path(&self, node: usize) -> Vec<usize> {
        let mut path = vec![node];
        let mut x = node;
        while let Some(p) = self.nodes[x].parent {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (self.path(a), self.path(b));
        pa.iter()
            .zip(&pb)
            .take_while(|(x, y)| x == y)
            .last()
            .map(|(x, _)| *x)
            .expect("common root")
    }

    /// Number of children; 0 for leaves.
    pub fn degree(&self, node: usize) -> Result<usize, UltraError> {
        self.children
            .get(node)
            .map(Vec::len)
            .ok_or(UltraError::UnknownNode(node))
    }

    /// A string equal for two trees exactly when they are isomorphic as
    /// valued trees; with `labels`, leaves must also name the same points.
    pub fn canonical_form(&self, labels: bool) -> String {
        self.canon(0, labels)
    }

    fn canon(&self, node: usize, labels: bool) -> String {
        if self.is_leaf(node) {
            return match (&self.nodes[node].point, labels) {
                (Some(p), true) => format!("{p:?}"),
                _ => "*".into(),
            };
        }
        let mut kids: Vec<String> = self.children[node]
            .iter()
            .map(|&c| self.canon(c, labels))
            .collect();
        kids.sort();
        format!("{}[{}]", self.nodes[node].value, kids.join(","))
    }

    pub fn is_isomorphic(&self, other: &ValuedTree) -> bool {
        self.canonical_form(false) == other.canonical_form(false)
    }

    /// Graphviz rendering: internal nodes show their value, leaves their
    /// point.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let label = node.point.clone().unwrap_or_else(|| node.value.to_string());
            let _ = writeln!(out, "  n{i} [label={label:?}];");
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                let _ = writeln!(out, "  n{p} -> n{i};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The closed balls `B(a, s)`, `s` in the spectrum of `a`, ordered by
/// reverse inclusion and valued by diameter.
///
/// Nodes are listed depth-first, children by their least point index.
pub fn nerve(space: &FiniteMetricSpace) -> Result<ValuedTree, UltraError> {
    if space.is_empty() {
        return Err(UltraError::InvalidTree(
            "the empty space has no nerve".into(),
        ));
    }
    if let Some([x, y, z]) = ultrametric_violation(space) {
        return Err(UltraError::NotUltrametric(
            space.label(x).into(),
            space.label(y).into(),
            space.label(z).into(),
        ));
    }
    let (balls, parent) = ball_parents(space);
    let mut kids: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut root = None;
    for (b, p) in parent.iter().enumerate() {
        match p {
            Some(p) => kids.entry(*p).or_default().push(b),
            None => root = Some(b),
        }
    }
    for v in kids.values_mut() {
        v.sort_by_key(|&b| balls[b][0]);
    }
    let mut nodes = Vec::with_capacity(balls.len());
    let mut stack = vec![(root.expect("whole space is a ball"), None)];
    while let Some((b, par)) = stack.pop() {
        let id = nodes.len();
        let pts = &balls[b];
        let diameter = pts
            .iter()
            .flat_map(|&x| pts.iter().map(move |&y| space.d(x, y)))
            .max()
            .cloned();
        nodes.push(TreeNode {
            parent: par,
            value: diameter.unwrap_or_else(Rational::zero),
            point: (pts.len() == 1).then(|| space.label(pts[0]).to_string()),
        });
        for &c in kids
            .get(&b)
            .map(Vec::as_slice)
            .unwrap_or_default()
            .iter()
            .rev()
        {
            stack.push((c, Some(id)));
        }
    }
    ValuedTree::new(nodes)
}

/// Distinct closed balls as sorted point lists, and each ball's least
/// strict superset.
fn ball_parents(space: &FiniteMetricSpace) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
    let n = space.len();
    let mut set = BTreeSet::new();
    for a in 0..n {
        for s in space.spectrum_at(a).values() {
            set.insert((0..n).filter(|&x| space.d(a, x) <= s).collect::<Vec<_>>());
        }
    }
    let balls: Vec<Vec<usize>> = set.into_iter().collect();
    let parent = balls
        .iter()
        .map(|b| {
            (0..balls.len())
                .filter(|&c| {
                    balls[c].len() > b.len() && b.iter().all(|x| balls[c].binary_search(x).is_ok())
                })
                .min_by_key(|&c| balls[c].len())
        })
        .collect();
    (balls, parent)
}

/// Leaves become points, in node order, with `d(x, y)` the value of their
/// meet.
pub fn tree_to_space(tree: &ValuedTree) -> Result<FiniteMetricSpace, UltraError> {
    let leaves = tree.leaves();
    let labels: Vec<String> = leaves
        .iter()
        .map(|&l| {
            tree.nodes[l]
                .point
                .clone()
                .ok_or_else(|| UltraError::InvalidTree(format!("leaf {l} has no point")))
        })
        .collect::<Result<_, _>>()?;
    Ok(FiniteMetricSpace::from_fn(labels, |i, j| {
        tree.value(tree.meet(leaves[i], leaves[j])).clone()
    })?)
}

/// Why a tree fails the homogeneity condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Homogeneity {
    Holds,
    /// Two nodes of equal value with different degrees.
    DegreeMismatch {
        a: usize,
        b: usize,
    },
    /// Two leaves whose root paths carry different value sets.
    PathMismatch {
        a: usize,
        b: usize,
    },
}

impl Homogeneity {
    pub fn holds(&self) -> bool {
        matches!(self, Homogeneity::Holds)
    }
}

/// Equal values force equal degrees, and every leaf sees the same set of
/// values on its way to the root.
pub fn homogeneity_check(tree: &ValuedTree) -> Homogeneity {
    let mut by_value: BTreeMap<&Rational, usize> = BTreeMap::new();
    for i in 0..tree.len() {
        let first = *by_value.entry(tree.value(i)).or_insert(i);
        if tree.children(first).len() != tree.children(i).len() {
            return Homogeneity::DegreeMismatch { a: first, b: i };
        }
    }
    let leaves = tree.leaves();
    let values = |l: usize| {
        tree.path(l)
            .into_iter()
            .map(|x| tree.value(x).clone())
            .collect::<BTreeSet<_>>()
    };
    if let Some(&first) = leaves.first() {
        let want = values(first);
        if let Some(&l) = leaves.iter().find(|&&l| values(l) != want) {
            return Homogeneity::PathMismatch { a: first, b: l };
        }
    }
    Homogeneity::Holds
}
