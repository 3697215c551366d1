//! Sub-isolated points and the derivative sequence they generate.

use serde::{Deserialize, Serialize};

use crate::space::{numbered_labels, EmbeddingSearch, FiniteMetricSpace};
use crate::values::{Rational, ValueSet};

/// Every metric on `k` points with distances in `dists`.
fn patterns(k: usize, dists: &[Rational]) -> Vec<FiniteMetricSpace> {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; pairs.len()];
    if dists.is_empty() {
        return out;
    }
    loop {
        let mut m = vec![Rational::zero(); k * k];
        for (&(i, j), &c) in pairs.iter().zip(&choice) {
            m[i * k + j] = dists[c].clone();
            m[j * k + i] = dists[c].clone();
        }
        if let Ok(s) = FiniteMetricSpace::from_flat(numbered_labels(k), m, None) {
            out.push(s);
        }
        let Some(p) = choice.iter().rposition(|&c| c + 1 < dists.len()) else {
            break;
        };
        choice[p] += 1;
        choice[p + 1..].iter_mut().for_each(|c| *c = 0);
    }
    out
}

fn avoids(pattern: &FiniteMetricSpace, space: &FiniteMetricSpace, a: usize) -> bool {
    (0..pattern.len()).all(|i| !EmbeddingSearch::new(pattern, space).pin(i, a).exists())
}

/// Points `a` such that at every positive distance `eps` of the space some
/// pattern with at least two points, distances in `W`, and diameter at most
/// `eps` has no copy through `a`. Patterns are enumerated over
/// `pattern_sizes`; for two-point patterns this asks for a `delta` in
/// `W ∩ (0, eps]` that is not a distance from `a`.
pub fn sub_isolated_points(
    space: &FiniteMetricSpace,
    w: &ValueSet,
    pattern_sizes: &[usize],
) -> Vec<usize> {
    let spectrum = space.spectrum().positive();
    let mut catalog: Vec<(Rational, Vec<FiniteMetricSpace>)> = Vec::new();
    for eps in spectrum {
        let dists: Vec<Rational> = w.positive().iter().filter(|d| *d <= eps).cloned().collect();
        let pats = pattern_sizes
            .iter()
            .filter(|&&k| k > 2)
            .flat_map(|&k| patterns(k, &dists))
            .collect();
        catalog.push((eps.clone(), pats));
    }
    let pairs = pattern_sizes.contains(&2);
    (0..space.len())
        .filter(|&a| {
            let own = space.spectrum_at(a);
            catalog.iter().all(|(eps, pats)| {
                let by_pair = pairs && w.positive().iter().any(|d| d <= eps && !own.contains(d));
                by_pair || pats.iter().any(|p| avoids(p, space, a))
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatterReport {
    /// The space, then each derivative, ending at the fixpoint.
    pub chain: Vec<Vec<String>>,
    pub sub_scattered: bool,
}

/// Removes sub-isolated points until none are left to remove.
pub fn scattered_fixpoint(
    space: &FiniteMetricSpace,
    w: &ValueSet,
    pattern_sizes: &[usize],
) -> ScatterReport {
    let mut current = space.clone();
    let mut chain = vec![current.labels().to_vec()];
    loop {
        let gone = sub_isolated_points(&current, w, pattern_sizes);
        if gone.is_empty() {
            break;
        }
        let keep: Vec<usize> = (0..current.len()).filter(|i| !gone.contains(i)).collect();
        current = current.subspace(&keep);
        chain.push(current.labels().to_vec());
    }
    ScatterReport {
        sub_scattered: current.is_empty(),
        chain,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::line_space;

    fn r(n: u64) -> Rational {
        Rational::from(n)
    }

    fn clique(n: usize) -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(numbered_labels(n), |i, j| r((i != j) as u64)).unwrap()
    }

    #[test]
    fn pattern_enumeration() {
        assert_eq!(patterns(2, &[r(1), r(2)]).len(), 2);
        // (1,1,1) (1,1,2) and permutations (1,2,2) and permutations, (2,2,2)
        assert_eq!(patterns(3, &[r(1), r(2)]).len(), 8);
        assert_eq!(patterns(3, &[r(1), r(3)]).len(), 5);
    }

    #[test]
    fn clique_is_not_scattered() {
        let w = ValueSet::from_integers(&[0, 1]);
        assert!(sub_isolated_points(&clique(3), &w, &[2]).is_empty());
        let rep = scattered_fixpoint(&clique(3), &w, &[2]);
        assert_eq!(rep.chain.len(), 1);
        assert!(!rep.sub_scattered);
        let bigger = sub_isolated_points(&clique(3), &w, &[2, 3, 4]);
        assert_eq!(bigger, vec![0, 1, 2]);
    }

    #[test]
    fn isolated_points_go_at_once() {
        let w = ValueSet::from_integers(&[0, 1, 5]);
        let s = line_space(&[r(0), r(5), r(10)]).unwrap();
        let rep = scattered_fixpoint(&s, &w, &[2]);
        assert_eq!(rep.chain.len(), 2);
        assert!(rep.sub_scattered);
    }

    #[test]
    fn degenerate_spaces() {
        let w = ValueSet::from_integers(&[0, 1]);
        assert_eq!(sub_isolated_points(&clique(1), &w, &[2]), vec![0]);
        assert!(scattered_fixpoint(&clique(0), &w, &[2]).sub_scattered);
    }
}
