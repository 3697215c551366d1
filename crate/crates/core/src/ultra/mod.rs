//! Ultrametric spaces, their valued trees, sequence spaces and
//! indivisibility.

mod indiv;
mod omega;
mod tree;

use crate::space::{FiniteMetricSpace, SpaceError};

pub use indiv::{
    greedy_monochromatic_embedding, indivisibility_report, CapStatus, DivisibilityWitness,
    GreedyOutcome, IndivisibilityReport, NodeDegree,
};
pub use omega::{
    omega_level_partition, omega_sequence_space, Degree, OmegaSpec, UnboundedMarker,
    DEFAULT_SIZE_LIMIT,
};
pub use tree::{homogeneity_check, nerve, tree_to_space, Homogeneity, TreeNode, ValuedTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UltraError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("not ultrametric: d({0},{2}) > max(d({0},{1}), d({1},{2}))")]
    NotUltrametric(String, String, String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("internal node {0} has a single child")]
    NotRamified(usize),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("invalid sequence-space spec: {0}")]
    InvalidSpec(String),
    #[error("the space would exceed {limit} points")]
    SizeLimitExceeded { limit: usize },
}

/// The first triple `(x, y, z)`, scanning `x < z` then `y`, with
/// `d(x, z) > max(d(x, y), d(y, z))`.
pub fn ultrametric_violation(space: &FiniteMetricSpace) -> Option<[usize; 3]> {
    let n = space.len();
    for x in 0..n {
        for z in x + 1..n {
            for y in 0..n {
                if space.d(x, z) > std::cmp::max(space.d(x, y), space.d(y, z)) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

pub fn is_ultrametric(space: &FiniteMetricSpace) -> bool {
    ultrametric_violation(space).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::Rational;

    fn tri(d: [[u64; 3]; 3]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(["a", "b", "c"], |i, j| Rational::from(d[i][j])).unwrap()
    }

    #[test]
    fn strong_triangle() {
        assert!(is_ultrametric(&tri([[0, 1, 2], [1, 0, 2], [2, 2, 0]])));
        assert_eq!(
            ultrametric_violation(&tri([[0, 1, 3], [1, 0, 2], [3, 2, 0]])),
            Some([0, 1, 2])
        );
        let pair =
            FiniteMetricSpace::from_fn(["a", "b"], |i, j| Rational::from((i != j) as u64 * 7))
                .unwrap();
        assert!(is_ultrametric(&pair));
    }
}
