//! ε-chains, Cantor connectivity and the subdominant ultrametric.

use serde::{Deserialize, Serialize};

use crate::space::{FiniteMetricSpace, SpaceError};
use crate::union_find::UnionFind;
use crate::values::Rational;

/// Disjoint blocks of point labels covering a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<String>>,
}

impl Partition {
    pub fn from_indices(space: &FiniteMetricSpace, blocks: &[Vec<usize>]) -> Self {
        Partition {
            blocks: blocks
                .iter()
                .map(|b| b.iter().map(|&i| space.label(i).to_string()).collect())
                .collect(),
        }
    }

    /// Resolves labels, checking that the blocks are disjoint and cover the
    /// space. Empty blocks are allowed.
    pub fn to_indices(&self, space: &FiniteMetricSpace) -> Result<Vec<Vec<usize>>, SpaceError> {
        let mut seen = vec![false; space.len()];
        let mut out = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let mut idx = Vec::with_capacity(block.len());
            for l in block {
                let i = space.point(l)?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(SpaceError::InvalidArgument(format!("{l} is in two blocks")));
                }
                idx.push(i);
            }
            out.push(idx);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(SpaceError::InvalidArgument(format!(
                "{} is in no block",
                space.label(i)
            )));
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn components(space: &FiniteMetricSpace, eps: &Rational) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if space.d(i, j) <= eps {
                uf.union(i, j);
            }
        }
    }
    uf.blocks()
}

/// Classes of points joined by chains with steps at most `eps`, ordered by
/// their first point.
pub fn eps_components(space: &FiniteMetricSpace, eps: &Rational) -> Partition {
    Partition::from_indices(space, &components(space, eps))
}

/// `min(1, diameter of the eps-component of a)`.
pub fn lambda_eps(
    space: &FiniteMetricSpace,
    a: usize,
    eps: &Rational,
) -> Result<Rational, SpaceError> {
    if a >= space.len() {
        return Err(SpaceError::UnknownPoint(a.to_string()));
    }
    if !eps.is_positive() {
        return Err(SpaceError::InvalidArgument("eps must be positive".into()));
    }
    let block = components(space, eps)
        .into_iter()
        .find(|b| b.contains(&a))
        .expect("a is in some block");
    let diameter = block
        .iter()
        .flat_map(|&x| block.iter().map(move |&y| space.d(x, y)))
        .max()
        .cloned();
    Ok(diameter.unwrap_or_else(Rational::zero).min(Rational::one()))
}

/// The infimum of `lambda_eps` over `eps > 0`; the thresholds that matter
/// are the positive distances and one value below all of them.
pub fn lambda(space: &FiniteMetricSpace, a: usize) -> Result<Rational, SpaceError> {
    let below = space
        .min_positive_distance()
        .map_or_else(Rational::one, Rational::half);
    let mut best = lambda_eps(space, a, &below)?;
    for eps in space.spectrum().positive() {
        best = best.min(lambda_eps(space, a, eps)?);
    }
    Ok(best)
}

/// The largest ultrametric below `d`: the least `eps` such that `x` and `y`
/// are joined by a chain with steps at most `eps`.
///
/// Computed by single linkage: pairs are merged in increasing distance
/// order (ties by index), and a merge at `w` sets every cross distance to
/// `w`.
pub fn subdominant_ultrametric(space: &FiniteMetricSpace) -> FiniteMetricSpace {
    let n = space.len();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    pairs.sort_by(|&(a, b), &(c, e)| space.d(a, b).cmp(space.d(c, e)).then((a, b).cmp(&(c, e))));
    let mut uf = UnionFind::new(n);
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut dist = vec![Rational::zero(); n * n];
    for (i, j) in pairs {
        let (ri, rj) = (uf.find(i), uf.find(j));
        if ri == rj {
            continue;
        }
        let w = space.d(i, j);
        for &x in &members[ri] {
            for &y in &members[rj] {
                dist[x * n + y] = w.clone();
                dist[y * n + x] = w.clone();
            }
        }
        uf.union(ri, rj);
        let root = uf.find(ri);
        let (a, b) = (
            std::mem::take(&mut members[ri]),
            std::mem::take(&mut members[rj]),
        );
        members[root] = a.into_iter().chain(b).collect();
    }
    FiniteMetricSpace::from_flat_unchecked(
        space.labels().to_vec(),
        dist,
        space.value_set().cloned(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorLevel {
    pub eps: Rational,
    pub components: usize,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorReport {
    pub levels: Vec<CantorLevel>,
    /// Joined by chains at every scale; for a finite space, only a single
    /// point.
    pub cantor_connected: bool,
}

/// Number of eps-components at each positive distance.
pub fn cantor_report(space: &FiniteMetricSpace) -> CantorReport {
    let levels = space
        .spectrum()
        .positive()
        .iter()
        .map(|eps| {
            let components = components(space, eps).len();
            CantorLevel {
                eps: eps.clone(),
                components,
                connected: components <= 1,
            }
        })
        .collect();
    CantorReport {
        levels,
        cantor_connected: space.len() <= 1,
    }
}
