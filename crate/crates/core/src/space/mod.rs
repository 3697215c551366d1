//! Finite metric spaces with exact rational distances.
//!
//! Points are identified by label; the distance matrix is indexed in label
//! order. A space may be bound to a [`ValueSet`], in which case every
//! distance must belong to it.

mod embed;
mod fixtures;
mod product;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::values::{Rational, ValueSet};

pub use embed::{embeds, isometric_embeddings, monochromatic_part, Embedding, EmbeddingSearch};
pub use fixtures::{chain_space, example_space_mn, line_space};
pub use product::{
    combinatorial_lines, sup_power, sup_power_index, sup_product, CombinatorialLine, LineCoord,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("distance matrix is not {0}x{0}")]
    DimensionMismatch(usize),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("d({0},{0}) must be 0")]
    NonZeroDiagonal(String),
    #[error("d({0},{1}) != d({1},{0})")]
    SymmetryViolation(String, String),
    #[error("distinct points {0} and {1} at distance 0")]
    SeparationViolation(String, String),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(String, String, String),
    #[error("d({0},{1}) is not in the value set")]
    SpectrumViolation(String, String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("sup-product needs at least one nonempty factor")]
    EmptyFactor,
    #[error("no admissible chain value near step {k}")]
    ValueSetTooSparse { k: usize },
    #[error("{0} is not a positive element of the value set")]
    NotInValueSet(Rational),
    #[error("the value set fails the four-values condition")]
    FourValuesFailure,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A finite metric space whose distances are exact rationals.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
    value_set: Option<ValueSet>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    #[serde(skip)]
    spectrum: ValueSet,
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value_set: Option<ValueSet>,
}

impl TryFrom<SpaceJson> for FiniteMetricSpace {
    type Error = SpaceError;
    fn try_from(json: SpaceJson) -> Result<Self, Self::Error> {
        FiniteMetricSpace::build(json.labels, json.dist, json.value_set)
    }
}

impl From<FiniteMetricSpace> for SpaceJson {
    fn from(space: FiniteMetricSpace) -> Self {
        let n = space.len();
        let dist = (0..n).map(|i| space.row(i).to_vec()).collect();
        SpaceJson {
            labels: space.labels,
            dist,
            value_set: space.value_set,
        }
    }
}

impl FiniteMetricSpace {
    /// Validates and builds a space from labels and a square matrix.
    pub fn build(
        labels: Vec<String>,
        dist: Vec<Vec<Rational>>,
        value_set: Option<ValueSet>,
    ) -> Result<Self, SpaceError> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(SpaceError::DimensionMismatch(n));
        }
        let flat = dist.into_iter().flatten().collect();
        Self::from_flat(labels, flat, value_set)
    }

    pub fn new(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        Self::build(labels, dist, None)
    }

    /// Builds a space with `d(i, j) = f(i, j)`; `f` is consulted for every
    /// ordered pair, so asymmetric closures are caught.
    pub fn from_fn<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Result<Self, SpaceError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let flat = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_flat(labels, flat, None)
    }

    pub(crate) fn from_flat(
        labels: Vec<String>,
        dist: Vec<Rational>,
        value_set: Option<ValueSet>,
    ) -> Result<Self, SpaceError> {
        let n = labels.len();
        if dist.len() != n * n {
            return Err(SpaceError::DimensionMismatch(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        let space = FiniteMetricSpace {
            labels,
            dist,
            value_set,
            index,
            spectrum: ValueSet::singleton_zero(),
        };
        space.validate()?;
        let spectrum = ValueSet::with_zero(space.dist.iter().cloned());
        Ok(FiniteMetricSpace { spectrum, ..space })
    }

    /// Builds without checking the axioms; callers guarantee them by
    /// construction.
    pub(crate) fn from_flat_unchecked(
        labels: Vec<String>,
        dist: Vec<Rational>,
        value_set: Option<ValueSet>,
    ) -> Self {
        debug_assert_eq!(dist.len(), labels.len() * labels.len());
        let index = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let spectrum = ValueSet::with_zero(dist.iter().cloned());
        FiniteMetricSpace {
            labels,
            dist,
            value_set,
            index,
            spectrum,
        }
    }

    fn validate(&self) -> Result<(), SpaceError> {
        let n = self.len();
        let l = |i: usize| self.labels[i].clone();
        for i in 0..n {
            if !self.d(i, i).is_zero() {
                return Err(SpaceError::NonZeroDiagonal(l(i)));
            }
            for j in i + 1..n {
                if self.d(i, j) != self.d(j, i) {
                    return Err(SpaceError::SymmetryViolation(l(i), l(j)));
                }
                if self.d(i, j).is_zero() {
                    return Err(SpaceError::SeparationViolation(l(i), l(j)));
                }
            }
        }
        if let Some(v) = &self.value_set {
            for i in 0..n {
                for j in i + 1..n {
                    if !v.contains(self.d(i, j)) {
                        return Err(SpaceError::SpectrumViolation(l(i), l(j)));
                    }
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                let dik = self.d(i, k);
                for j in 0..n {
                    if j != i && j != k && dik > &(self.d(i, j) + self.d(j, k)) {
                        return Err(SpaceError::TriangleViolation(l(i), l(j), l(k)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Binds (or rebinds) a value set, checking the spectrum against it.
    pub fn with_value_set(self, v: ValueSet) -> Result<Self, SpaceError> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if !v.contains(self.d(i, j)) {
                    return Err(SpaceError::SpectrumViolation(
                        self.labels[i].clone(),
                        self.labels[j].clone(),
                    ));
                }
            }
        }
        Ok(FiniteMetricSpace {
            value_set: Some(v),
            ..self
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn point(&self, label: &str) -> Result<usize, SpaceError> {
        self.index_of(label)
            .ok_or_else(|| SpaceError::UnknownPoint(label.to_string()))
    }

    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn value_set(&self) -> Option<&ValueSet> {
        self.value_set.as_ref()
    }

    /// All realized distances, `0` included.
    pub fn spectrum(&self) -> &ValueSet {
        &self.spectrum
    }

    /// Distances realized from point `a`, `0` included.
    pub fn spectrum_at(&self, a: usize) -> ValueSet {
        ValueSet::with_zero(self.row(a).iter().cloned())
    }

    pub fn spectrum_at_label(&self, label: &str) -> Result<ValueSet, SpaceError> {
        Ok(self.spectrum_at(self.point(label)?))
    }

    pub fn diameter(&self) -> Rational {
        self.spectrum.max().clone()
    }

    /// Smallest nonzero distance, if any.
    pub fn min_positive_distance(&self) -> Option<&Rational> {
        self.spectrum.positive().first()
    }

    /// The subspace induced by `points`, in the given order.
    pub fn subspace(&self, points: &[usize]) -> FiniteMetricSpace {
        let labels: Vec<String> = points.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = points
            .iter()
            .flat_map(|&i| points.iter().map(move |&j| self.d(i, j).clone()))
            .collect();
        let index = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let spectrum = ValueSet::with_zero(
            points
                .iter()
                .flat_map(|&i| points.iter().map(move |&j| self.d(i, j).clone())),
        );
        FiniteMetricSpace {
            labels,
            dist,
            value_set: self.value_set.clone(),
            index,
            spectrum,
        }
    }

    /// The subspace on every point not in `removed`, in index order.
    pub fn complement(&self, removed: &BTreeSet<usize>) -> (FiniteMetricSpace, Vec<usize>) {
        let kept: Vec<usize> = (0..self.len()).filter(|i| !removed.contains(i)).collect();
        (self.subspace(&kept), kept)
    }

    /// Relabels points; distances are unchanged.
    pub fn relabeled<S: Into<String>>(
        &self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, SpaceError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.len() {
            return Err(SpaceError::DimensionMismatch(self.len()));
        }
        Self::from_flat(labels, self.dist.clone(), self.value_set.clone())
    }

    /// True iff `perm` (a map from points to points) preserves distances.
    pub fn is_isometry_into(&self, target: &FiniteMetricSpace, map: &[usize]) -> bool {
        let n = self.len();
        map.len() == n
            && (0..n).all(|i| {
                (i + 1..n).all(|j| map[i] != map[j] && self.d(i, j) == target.d(map[i], map[j]))
            })
    }

    /// Same labels and the same distance matrix.
    pub fn same_metric(&self, other: &FiniteMetricSpace) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FiniteMetricSpace {:?}", self.labels)?;
        for i in 0..self.len() {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Point labels `p0, p1, ...`.
pub fn numbered_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::q;

    fn r(n: u64) -> Rational {
        Rational::from(n)
    }

    fn triangle(ab: Rational, bc: Rational, ac: Rational) -> Result<FiniteMetricSpace, SpaceError> {
        let z = Rational::zero;
        FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![z(), ab.clone(), ac.clone()],
                vec![ab, z(), bc.clone()],
                vec![ac, bc, z()],
            ],
        )
    }

    #[test]
    fn two_points() {
        let s = FiniteMetricSpace::from_fn(["a", "b"], |i, j| if i == j { r(0) } else { r(1) })
            .unwrap();
        assert_eq!(s.spectrum(), &ValueSet::from_integers(&[1]));
        assert_eq!(
            s.spectrum_at_label("a").unwrap(),
            ValueSet::from_integers(&[1])
        );
        assert!(matches!(
            s.spectrum_at_label("z"),
            Err(SpaceError::UnknownPoint(_))
        ));
    }

    #[test]
    fn triangle_violation() {
        assert_eq!(
            triangle(r(1), r(1), r(3)).unwrap_err(),
            SpaceError::TriangleViolation("a".into(), "b".into(), "c".into())
        );
    }

    #[test]
    fn sample_triangle_is_valid() {
        // x1, y, y' with d(x1,y) = 1, d(y,y') = 4, d(x1,y') = 5.
        let s = triangle(r(1), r(4), r(5)).unwrap();
        assert_eq!(s.spectrum(), &ValueSet::from_integers(&[1, 4, 5]));
    }

    #[test]
    fn axiom_errors() {
        let z = Rational::zero;
        let labels = || vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            FiniteMetricSpace::new(labels(), vec![vec![z(), r(1)], vec![r(2), z()]]),
            Err(SpaceError::SymmetryViolation(..))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(labels(), vec![vec![z(), z()], vec![z(), z()]]),
            Err(SpaceError::SeparationViolation(..))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(labels(), vec![vec![r(1), r(1)], vec![r(1), z()]]),
            Err(SpaceError::NonZeroDiagonal(_))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(labels(), vec![vec![z(), r(1)]]),
            Err(SpaceError::DimensionMismatch(2))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(
                vec!["a".into(), "a".into()],
                vec![vec![z(), r(1)], vec![r(1), z()]]
            ),
            Err(SpaceError::DuplicateLabel(_))
        ));
        assert!(matches!(
            FiniteMetricSpace::build(
                labels(),
                vec![vec![z(), r(2)], vec![r(2), z()]],
                Some(ValueSet::from_integers(&[1]))
            ),
            Err(SpaceError::SpectrumViolation(..))
        ));
    }

    #[test]
    fn value_set_as_a_space() {
        // (V; max{x, y}) realizes exactly V.
        let v = ValueSet::with_zero([q(1, 3), q(1, 2), r(2)]);
        let vals = v.values().to_vec();
        let s = FiniteMetricSpace::from_fn(vals.iter().map(|x| x.to_string()), |i, j| {
            if i == j {
                Rational::zero()
            } else {
                std::cmp::max(vals[i].clone(), vals[j].clone())
            }
        })
        .unwrap();
        assert_eq!(s.spectrum(), &v);
    }

    #[test]
    fn single_point() {
        let s = FiniteMetricSpace::from_fn(["a"], |_, _| r(0)).unwrap();
        assert_eq!(s.spectrum(), &ValueSet::singleton_zero());
        assert_eq!(s.diameter(), r(0));
    }

    #[test]
    fn json_roundtrip() {
        let s = triangle(q(1, 2), q(1, 2), r(1))
            .unwrap()
            .with_value_set(ValueSet::with_zero([q(1, 2), r(1)]))
            .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"labels":["a","b","c"],"dist":[["0","1/2","1"],["1/2","0","1/2"],["1","1/2","0"]],"value_set":{"values":["0","1/2","1"]}}"#
        );
        let back: FiniteMetricSpace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"labels":["a","b"],"dist":[["0","1"],["2","0"]]}"#;
        assert!(serde_json::from_str::<FiniteMetricSpace>(bad).is_err());
    }

    #[test]
    fn subspace_keeps_order() {
        let s = triangle(r(1), r(4), r(5)).unwrap();
        let sub = s.subspace(&[2, 0]);
        assert_eq!(sub.labels(), &["c".to_string(), "a".to_string()]);
        assert_eq!(sub.d(0, 1), &r(5));
        assert_eq!(sub.spectrum(), &ValueSet::from_integers(&[5]));
    }
}
