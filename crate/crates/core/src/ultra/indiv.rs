//! Indivisibility diagnostics and monochromatic copies in ultrametric
//! spaces.

use serde::Serialize;

use super::tree::{homogeneity_check, nerve, Homogeneity, ValuedTree};
use super::UltraError;
use crate::space::{Embedding, EmbeddingSearch, FiniteMetricSpace};
use crate::values::{Rational, ValueSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapStatus {
    BelowCap,
    AtCap,
    AboveCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeDegree {
    pub node: usize,
    pub value: Rational,
    pub degree: usize,
    pub status: CapStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndivisibilityReport {
    pub homogeneity: Homogeneity,
    pub spectrum: ValueSet,
    pub diameter: Rational,
    pub diameter_attained: bool,
    /// Internal nodes of the nerve.
    pub nodes: Vec<NodeDegree>,
    /// Internal nodes whose degree is below the cap.
    pub blocking: Vec<usize>,
    /// Homogeneous with no blocking node.
    pub candidate: bool,
}

/// How far a finite ultrametric space is from the indivisible shape:
/// homogeneity of its nerve and the degrees of internal nodes against
/// `cap`.
pub fn indivisibility_report(
    space: &FiniteMetricSpace,
    cap: usize,
) -> Result<IndivisibilityReport, UltraError> {
    let tree = nerve(space)?;
    let homogeneity = homogeneity_check(&tree);
    let nodes: Vec<NodeDegree> = (0..tree.len())
        .filter(|&i| !tree.is_leaf(i))
        .map(|i| {
            let degree = tree.children(i).len();
            let status = match degree.cmp(&cap) {
                std::cmp::Ordering::Less => CapStatus::BelowCap,
                std::cmp::Ordering::Equal => CapStatus::AtCap,
                std::cmp::Ordering::Greater => CapStatus::AboveCap,
            };
            NodeDegree {
                node: i,
                value: tree.value(i).clone(),
                degree,
                status,
            }
        })
        .collect();
    let blocking: Vec<usize> = nodes
        .iter()
        .filter(|n| n.status == CapStatus::BelowCap)
        .map(|n| n.node)
        .collect();
    let diameter = space.diameter();
    let diameter_attained = (0..space.len()).any(|i| space.row(i).contains(&diameter));
    Ok(IndivisibilityReport {
        candidate: homogeneity.holds() && blocking.is_empty(),
        homogeneity,
        spectrum: space.spectrum().clone(),
        diameter,
        diameter_attained,
        nodes,
        blocking,
    })
}

/// A ball where the greedy construction of a copy in color 1 ran out of
/// room.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityWitness {
    pub ball: Vec<String>,
    pub value: Rational,
    /// Sub-balls that needed a home.
    pub needed: usize,
    /// Sub-balls available outside the color-0 family.
    pub available: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum GreedyOutcome {
    Monochromatic { color: u8, embedding: Embedding },
    Witness(DivisibilityWitness),
}

/// Looks for a copy of `space` inside one color class of `coloring`.
///
/// First computes, bottom-up on the nerve, the balls that embed into
/// their own color-0 part; a ball whose sub-balls all do is settled
/// without search. If the whole space is such a ball, the copy is in
/// color 0. Otherwise each ball is mapped into a ball of the same shape
/// outside that family, sub-ball by sub-ball, landing in color 1; when
/// the sub-balls run out the stuck ball is returned as a witness.
pub fn greedy_monochromatic_embedding(
    space: &FiniteMetricSpace,
    coloring: &[u8],
) -> Result<GreedyOutcome, UltraError> {
    if coloring.len() != space.len() {
        return Err(UltraError::InvalidSpec(
            "coloring must cover every point".into(),
        ));
    }
    let tree = nerve(space)?;
    let point_of = |leaf: usize| {
        space
            .index_of(tree.nodes()[leaf].point.as_deref().expect("leaf"))
            .expect("point")
    };
    let balls: Vec<Vec<usize>> = (0..tree.len())
        .map(|b| tree.leaves_below(b).into_iter().map(point_of).collect())
        .collect();

    // f0[b]: images of the points of ball b inside its color-0 part.
    let mut f0: Vec<Option<Vec<usize>>> = vec![None; tree.len()];
    for b in (0..tree.len()).rev() {
        f0[b] = if tree.is_leaf(b) {
            (coloring[balls[b][0]] == 0).then(|| balls[b].clone())
        } else if tree.children(b).iter().all(|&c| f0[c].is_some()) {
            Some(
                tree.children(b)
                    .iter()
                    .flat_map(|&c| f0[c].clone().expect("checked"))
                    .collect(),
            )
        } else {
            let sub = space.subspace(&balls[b]);
            let mut allowed = vec![false; space.len()];
            for &x in &balls[b] {
                allowed[x] = coloring[x] == 0;
            }
            EmbeddingSearch::new(&sub, space)
                .within(allowed)
                .limit(1)
                .run()
                .pop()
                .map(|e| e.map)
        };
    }
    let finish = |pairs: Vec<(usize, usize)>, color: u8| {
        let mut map = vec![0; space.len()];
        for (x, y) in pairs {
            map[x] = y;
        }
        let embedding = Embedding { map };
        assert!(
            embedding.is_isometric(space, space),
            "greedy produced a non-isometry"
        );
        assert!(
            embedding.map.iter().all(|&y| coloring[y] == color),
            "greedy left the color class"
        );
        GreedyOutcome::Monochromatic { color, embedding }
    };
    if let Some(images) = &f0[0] {
        return Ok(finish(
            balls[0]
                .iter()
                .copied()
                .zip(images.iter().copied())
                .collect(),
            0,
        ));
    }
    let greedy = Greedy {
        tree: &tree,
        balls: &balls,
        in_f0: f0.iter().map(Option::is_some).collect(),
    };
    match greedy.map(0, 0) {
        Ok(pairs) => Ok(finish(pairs, 1)),
        Err((t, needed, available)) => Ok(GreedyOutcome::Witness(DivisibilityWitness {
            ball: balls[t]
                .iter()
                .map(|&x| space.label(x).to_string())
                .collect(),
            value: tree.value(t).clone(),
            needed,
            available,
        })),
    }
}

struct Greedy<'a> {
    tree: &'a ValuedTree,
    balls: &'a [Vec<usize>],
    in_f0: Vec<bool>,
}

impl Greedy<'_> {
    /// Maps ball `b` into ball `t` (not in the color-0 family), returning
    /// point pairs, or the stuck target with needed/available counts.
    fn map(&self, b: usize, t: usize) -> Result<Vec<(usize, usize)>, (usize, usize, usize)> {
        let tree = self.tree;
        if tree.is_leaf(b) {
            return if tree.is_leaf(t) {
                Ok(vec![(self.balls[b][0], self.balls[t][0])])
            } else {
                Err((t, 1, 0))
            };
        }
        if tree.is_leaf(t) || tree.value(b) != tree.value(t) {
            return Err((t, tree.children(b).len(), 0));
        }
        let free: Vec<usize> = tree
            .children(t)
            .iter()
            .copied()
            .filter(|&c| !self.in_f0[c])
            .collect();
        let mut used = vec![false; free.len()];
        let mut pairs = Vec::new();
        for &c in tree.children(b) {
            let found = (0..free.len())
                .filter(|&k| !used[k])
                .find_map(|k| self.map(c, free[k]).ok().map(|p| (k, p)));
            match found {
                Some((k, p)) => {
                    used[k] = true;
                    pairs.extend(p);
                }
                None => return Err((t, tree.children(b).len(), free.len())),
            }
        }
        Ok(pairs)
    }
}
