//! Amalgamation of finite spaces over a value set, distance sockets and
//! finite Urysohn approximants.

mod holes;
mod socket;
mod urysohn;

use serde::Serialize;

use crate::space::{FiniteMetricSpace, SpaceError};
use crate::values::{Rational, ValueSet};

pub use holes::{holes_check, HoleViolation, HolesReport};
pub use socket::{
    orbit, orbit_diameter_check, realize_socket, rim_extend, validate_dsocket, DSocket, Realized,
    SocketEntry,
};
pub use urysohn::{urysohn_approximant, Provenance, UrysohnBuilder, UrysohnReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AmalgamError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("no admissible distance between {x1} and {x2}: V meets [{lo}, {}] only in 0", hi.as_ref().map_or("inf".to_string(), ToString::to_string))]
    NoAmalgam {
        x1: String,
        x2: String,
        lo: Rational,
        hi: Option<Rational>,
    },
    #[error("expected exactly one point on each side of the intersection")]
    NotOnePoint,
    #[error("the two spaces disagree on d({0},{1})")]
    Disagreement(String, String),
    #[error("invalid socket: {0}")]
    InvalidSocket(String),
    #[error("the socket has an empty orbit")]
    EmptyOrbit,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("centers {0} and {1} are too close for their radii")]
    HypothesisViolated(usize, usize),
    #[error("the value set fails the four-values condition")]
    FourValuesFailure,
}

/// The outcome of an amalgamation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamResult {
    pub space: FiniteMetricSpace,
    /// Distances decided by the amalgamation, as `(x, y, d)`.
    pub chosen: Vec<(String, String, Rational)>,
    /// For a one-point amalgam, every admissible positive value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible: Option<Vec<Rational>>,
}

/// Bounds `[max |d1 - d2|, min (d1 + d2)]` for a new distance, over pairs
/// of known distances from the two points to a common witness. `None` as
/// upper bound means no witness.
pub(crate) fn bounds<'a>(
    pairs: impl IntoIterator<Item = (&'a Rational, &'a Rational)>,
) -> (Rational, Option<Rational>) {
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for (d1, d2) in pairs {
        lo = lo.max(d1.abs_diff(d2));
        let s = d1 + d2;
        hi = Some(match hi {
            Some(h) => h.min(s),
            None => s,
        });
    }
    (lo, hi)
}

pub(crate) fn admissible<'v>(
    v: &'v ValueSet,
    lo: &Rational,
    hi: Option<&Rational>,
) -> impl Iterator<Item = &'v Rational> {
    let lo = lo.clone();
    let hi = hi.cloned();
    v.positive()
        .iter()
        .filter(move |x| **x >= lo && hi.as_ref().is_none_or(|h| *x <= h))
}

fn check_spectrum(space: &FiniteMetricSpace, v: &ValueSet) -> Result<(), AmalgamError> {
    space.clone().with_value_set(v.clone())?;
    Ok(())
}

fn check_agreement(
    m1: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
) -> Result<Vec<(usize, usize)>, AmalgamError> {
    let shared: Vec<(usize, usize)> = (0..m1.len())
        .filter_map(|i| m2.index_of(m1.label(i)).map(|j| (i, j)))
        .collect();
    for (a, &(i1, j1)) in shared.iter().enumerate() {
        for &(i2, j2) in &shared[a + 1..] {
            if m1.d(i1, i2) != m2.d(j1, j2) {
                return Err(AmalgamError::Disagreement(
                    m1.label(i1).into(),
                    m1.label(i2).into(),
                ));
            }
        }
    }
    Ok(shared)
}

/// Amalgamates two spaces that differ by one point on each side.
///
/// The new distance `w` between the two extra points is the least
/// positive element of `V` in `[a', a]`, where `a'` and `a` are the
/// triangle-inequality bounds over the shared points. The result lists
/// the points of `m1` followed by the extra point of `m2`.
pub fn one_point_amalgam(
    m1: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    v: &ValueSet,
) -> Result<AmalgamResult, AmalgamError> {
    let only1: Vec<usize> = (0..m1.len())
        .filter(|&i| m2.index_of(m1.label(i)).is_none())
        .collect();
    let only2: Vec<usize> = (0..m2.len())
        .filter(|&j| m1.index_of(m2.label(j)).is_none())
        .collect();
    let (&[x1], &[x2]) = (only1.as_slice(), only2.as_slice()) else {
        return Err(AmalgamError::NotOnePoint);
    };
    check_spectrum(m1, v)?;
    check_spectrum(m2, v)?;
    let shared = check_agreement(m1, m2)?;
    let (lo, hi) = bounds(shared.iter().map(|&(i, j)| (m1.d(x1, i), m2.d(x2, j))));
    let adm: Vec<Rational> = admissible(v, &lo, hi.as_ref()).cloned().collect();
    let Some(w) = adm.first().cloned() else {
        return Err(AmalgamError::NoAmalgam {
            x1: m1.label(x1).into(),
            x2: m2.label(x2).into(),
            lo,
            hi,
        });
    };
    let n = m1.len();
    let mut labels = m1.labels().to_vec();
    labels.push(m2.label(x2).to_string());
    let row_new = |i: usize| -> Rational {
        if i == x1 {
            w.clone()
        } else if i == n {
            Rational::zero()
        } else {
            m2.d(x2, m2.index_of(m1.label(i)).expect("shared point"))
                .clone()
        }
    };
    let space = FiniteMetricSpace::from_fn(labels, |i, j| match (i == n, j == n) {
        (false, false) => m1.d(i, j).clone(),
        (true, _) => row_new(j),
        (false, true) => row_new(i),
    })?
    .with_value_set(v.clone())?;
    Ok(AmalgamResult {
        space,
        chosen: vec![(m1.label(x1).into(), m2.label(x2).into(), w)],
        admissible: Some(adm),
    })
}

/// Amalgamates two spaces agreeing on their intersection by repeated
/// one-point steps.
///
/// The result starts from `m1`; the points of `m2` missing from `m1` are
/// added in the order of `m2`, and each one's distances to the points
/// only in `m1` are decided in the order of `m1`, each by the least
/// admissible value over everything decided so far.
pub fn disjoint_amalgam(
    m1: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    v: &ValueSet,
) -> Result<AmalgamResult, AmalgamError> {
    check_spectrum(m1, v)?;
    check_spectrum(m2, v)?;
    check_agreement(m1, m2)?;
    if m1.labels().iter().all(|l| m2.index_of(l).is_some()) {
        return Ok(AmalgamResult {
            space: m2.clone().with_value_set(v.clone())?,
            chosen: vec![],
            admissible: None,
        });
    }
    let only1: Vec<usize> = (0..m1.len())
        .filter(|&i| m2.index_of(m1.label(i)).is_none())
        .collect();
    let only2: Vec<usize> = (0..m2.len())
        .filter(|&j| m1.index_of(m2.label(j)).is_none())
        .collect();

    let n1 = m1.len();
    let total = n1 + only2.len();
    let mut labels = m1.labels().to_vec();
    labels.extend(only2.iter().map(|&j| m2.label(j).to_string()));
    // Indices in the result of the points of m2.
    let pos2 = |j: usize| -> usize {
        m1.index_of(m2.label(j))
            .unwrap_or_else(|| n1 + only2.iter().position(|&k| k == j).expect("m2-only"))
    };
    let mut dist: Vec<Option<Rational>> = vec![None; total * total];
    for i in 0..n1 {
        for j in 0..n1 {
            dist[i * total + j] = Some(m1.d(i, j).clone());
        }
    }
    for a in 0..m2.len() {
        for b in 0..m2.len() {
            dist[pos2(a) * total + pos2(b)] = Some(m2.d(a, b).clone());
        }
    }
    let mut chosen = Vec::new();
    for &j in &only2 {
        let p = pos2(j);
        for &y in &only1 {
            let (lo, hi) = {
                let pairs = (0..total).filter_map(|z| {
                    let dy = dist[y * total + z].as_ref()?;
                    let dp = dist[p * total + z].as_ref()?;
                    (z != y && z != p).then_some((dy, dp))
                });
                bounds(pairs)
            };
            let Some(w) = admissible(v, &lo, hi.as_ref()).next().cloned() else {
                return Err(AmalgamError::NoAmalgam {
                    x1: labels[y].clone(),
                    x2: labels[p].clone(),
                    lo,
                    hi,
                });
            };
            dist[y * total + p] = Some(w.clone());
            dist[p * total + y] = Some(w.clone());
            chosen.push((labels[y].clone(), labels[p].clone(), w));
        }
    }
    let flat = dist
        .into_iter()
        .map(|d| d.expect("every distance decided"))
        .collect();
    let space = FiniteMetricSpace::from_flat(labels, flat, Some(v.clone()))?;
    Ok(AmalgamResult {
        space,
        chosen,
        admissible: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::line_space;

    fn r(n: u64) -> Rational {
        Rational::from(n)
    }

    fn space(labels: &[&str], d: &[&[u64]]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(labels.iter().copied(), |i, j| r(d[i][j])).unwrap()
    }

    /// The two triangles over {y, y'}: x1 at (1, 5), x2 at (1, 3).
    fn triangles() -> (FiniteMetricSpace, FiniteMetricSpace) {
        let m1 = space(&["x1", "y", "y'"], &[&[0, 1, 5], &[1, 0, 4], &[5, 4, 0]]);
        let m2 = space(&["x2", "y", "y'"], &[&[0, 1, 3], &[1, 0, 4], &[3, 4, 0]]);
        (m1, m2)
    }

    #[test]
    fn forced_value_two() {
        let (m1, m2) = triangles();
        let v = ValueSet::from_integers(&[1, 2, 3, 4, 5]);
        let res = one_point_amalgam(&m1, &m2, &v).unwrap();
        assert_eq!(res.admissible, Some(vec![r(2)]));
        assert_eq!(res.space.d(0, 3), &r(2));
        assert_eq!(res.chosen, vec![("x1".into(), "x2".into(), r(2))]);
    }

    #[test]
    fn missing_value_blocks() {
        let (m1, m2) = triangles();
        let v = ValueSet::from_integers(&[1, 3, 4, 5]);
        let err = one_point_amalgam(&m1, &m2, &v).unwrap_err();
        assert_eq!(
            err,
            AmalgamError::NoAmalgam {
                x1: "x1".into(),
                x2: "x2".into(),
                lo: r(2),
                hi: Some(r(2))
            }
        );
    }

    #[test]
    fn least_admissible_tie_break() {
        let m1 = space(&["x1", "y"], &[&[0, 1], &[1, 0]]);
        let m2 = space(&["x2", "y"], &[&[0, 1], &[1, 0]]);
        let res = one_point_amalgam(&m1, &m2, &ValueSet::from_integers(&[1, 2])).unwrap();
        assert_eq!(res.admissible, Some(vec![r(1), r(2)]));
        assert_eq!(res.space.d(0, 2), &r(1));
    }

    #[test]
    fn one_point_shape_errors() {
        let (m1, _) = triangles();
        let v = ValueSet::from_integers(&[1, 2, 3, 4, 5]);
        assert_eq!(
            one_point_amalgam(&m1, &m1, &v).unwrap_err(),
            AmalgamError::NotOnePoint
        );
        let bad = space(&["x2", "y", "y'"], &[&[0, 1, 3], &[1, 0, 2], &[3, 2, 0]]);
        assert!(matches!(
            one_point_amalgam(&m1, &bad, &v),
            Err(AmalgamError::Disagreement(..))
        ));
    }

    #[test]
    fn disjoint_over_a_subset() {
        let (m1, _) = triangles();
        let sub = m1.subspace(&[1, 2]);
        let v = ValueSet::from_integers(&[1, 2, 3, 4, 5]);
        let res = disjoint_amalgam(&sub, &m1, &v).unwrap();
        assert!(res.space.same_metric(&m1));
        assert!(res.chosen.is_empty());
    }

    #[test]
    fn disjoint_triangles() {
        let (m1, m2) = triangles();
        let res = disjoint_amalgam(&m1, &m2, &ValueSet::from_integers(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(res.space.labels(), &["x1", "y", "y'", "x2"]);
        assert_eq!(res.space.d(0, 3), &r(2));
    }

    #[test]
    fn disjoint_pairs_over_nothing() {
        let a = space(&["a", "b"], &[&[0, 1], &[1, 0]]);
        let b = space(&["c", "d"], &[&[0, 1], &[1, 0]]);
        let res = disjoint_amalgam(&a, &b, &ValueSet::from_integers(&[1])).unwrap();
        assert_eq!(res.space.len(), 4);
        assert_eq!(res.space.spectrum(), &ValueSet::from_integers(&[1]));
        assert_eq!(res.chosen.len(), 4);
    }

    #[test]
    fn restrictions_are_the_inputs() {
        let a = line_space(&[r(0), r(1), r(3)]).unwrap();
        let b = line_space(&[r(1), r(3), r(4), r(6)]).unwrap();
        let v = ValueSet::from_integers(&[1, 2, 3, 4, 5, 6]);
        let res = disjoint_amalgam(&a, &b, &v).unwrap();
        for m in [&a, &b] {
            let idx: Vec<usize> = m
                .labels()
                .iter()
                .map(|l| res.space.index_of(l).unwrap())
                .collect();
            assert!(m.is_isometry_into(&res.space, &idx));
        }
    }
}
