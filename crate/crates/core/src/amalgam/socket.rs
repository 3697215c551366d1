//! Distance sockets: one-point extension requests over a finite set of
//! vertices.

use serde::{Deserialize, Serialize};

use super::{disjoint_amalgam, AmalgamError};
use crate::space::FiniteMetricSpace;
use crate::values::{Rational, ValueSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SocketEntry {
    pub b: String,
    pub d: Rational,
}

/// A list of constraints `d(s, b_i) = d_i` on a prospective point `s`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DSocket {
    pub entries: Vec<SocketEntry>,
}

impl DSocket {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, Rational)>) -> Self {
        DSocket {
            entries: entries
                .into_iter()
                .map(|(b, d)| SocketEntry { b: b.into(), d })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn with(mut self, b: impl Into<String>, d: Rational) -> Self {
        self.entries.push(SocketEntry { b: b.into(), d });
        self
    }

    /// Vertices as point indices, paired with their distances.
    pub fn resolve(
        &self,
        space: &FiniteMetricSpace,
    ) -> Result<Vec<(usize, Rational)>, AmalgamError> {
        self.entries
            .iter()
            .map(|e| Ok((space.point(&e.b)?, e.d.clone())))
            .collect()
    }
}

pub(crate) fn valid_resolved(space: &FiniteMetricSpace, entries: &[(usize, Rational)]) -> bool {
    entries.iter().all(|(bi, di)| {
        entries.iter().all(|(bj, dj)| {
            let dij = space.d(*bi, *bj);
            &(di + dj) >= dij && &(di + dij) >= dj
        })
    })
}

pub(crate) fn orbit_resolved(
    space: &FiniteMetricSpace,
    entries: &[(usize, Rational)],
) -> Vec<usize> {
    (0..space.len())
        .filter(|&s| entries.iter().all(|(b, d)| space.d(s, *b) == d))
        .collect()
}

/// Checks `d_i + d_j >= d(b_i, b_j)` and `d_i + d(b_i, b_j) >= d_j` for all
/// pairs of entries, and membership in the bound value set, if any.
pub fn validate_dsocket(space: &FiniteMetricSpace, socket: &DSocket) -> Result<bool, AmalgamError> {
    let entries = socket.resolve(space)?;
    let in_v = space
        .value_set()
        .is_none_or(|v| entries.iter().all(|(_, d)| v.contains(d)));
    Ok(in_v && valid_resolved(space, &entries))
}

/// The points `s` with `d(s, b_i) = d_i` for every entry.
pub fn orbit(space: &FiniteMetricSpace, socket: &DSocket) -> Result<Vec<usize>, AmalgamError> {
    Ok(orbit_resolved(space, &socket.resolve(space)?))
}

/// A space extended by one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realized {
    pub space: FiniteMetricSpace,
    pub point: usize,
    pub chosen: Vec<(String, String, Rational)>,
}

pub(crate) fn fresh_label(space: &FiniteMetricSpace) -> String {
    (space.len()..)
        .map(|n| format!("p{n}"))
        .find(|l| space.index_of(l).is_none())
        .expect("unbounded")
}

/// Adds a point realizing `socket`; its remaining distances are fixed by
/// amalgamating the socket's vertices plus the new point against the
/// whole space.
pub fn realize_socket(
    space: &FiniteMetricSpace,
    socket: &DSocket,
    v: &ValueSet,
) -> Result<Realized, AmalgamError> {
    let entries = socket.resolve(space)?;
    if let Some((_, d)) = entries
        .iter()
        .find(|(_, d)| !d.is_positive() || !v.contains(d))
    {
        return Err(AmalgamError::InvalidSocket(format!(
            "{d} is not a positive element of the value set"
        )));
    }
    if !valid_resolved(space, &entries) {
        return Err(AmalgamError::InvalidSocket(
            "triangle conditions fail".into(),
        ));
    }
    let mut vertices: Vec<usize> = entries.iter().map(|(b, _)| *b).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let label = fresh_label(space);
    let local = space.subspace(&vertices);
    let k = vertices.len();
    let d_new = |i: usize| {
        entries
            .iter()
            .find(|(b, _)| *b == vertices[i])
            .expect("vertex")
            .1
            .clone()
    };
    let mut labels = local.labels().to_vec();
    labels.push(label);
    let m2 = FiniteMetricSpace::from_fn(labels, |i, j| match (i == k, j == k) {
        (false, false) => local.d(i, j).clone(),
        (true, true) => Rational::zero(),
        (true, false) => d_new(j),
        (false, true) => d_new(i),
    })?;
    let res = disjoint_amalgam(space, &m2, v)?;
    let point = res.space.len() - 1;
    Ok(Realized {
        space: res.space,
        point,
        chosen: res.chosen,
    })
}

/// Extends `socket` by `(a, r)`, after checking that some orbit point `x`
/// has `d(a, x) <= r` and that every vertex is at least `r` from `a`.
pub fn rim_extend(
    space: &FiniteMetricSpace,
    socket: &DSocket,
    a: &str,
    r: &Rational,
) -> Result<DSocket, AmalgamError> {
    let entries = socket.resolve(space)?;
    let ai = space.point(a)?;
    if !valid_resolved(space, &entries) {
        return Err(AmalgamError::PreconditionViolated(
            "the socket is not valid".into(),
        ));
    }
    if let Some((b, _)) = entries.iter().find(|(b, _)| space.d(ai, *b) < r) {
        return Err(AmalgamError::PreconditionViolated(format!(
            "d({a},{}) < {r}",
            space.label(*b)
        )));
    }
    if !orbit_resolved(space, &entries)
        .into_iter()
        .any(|x| space.d(ai, x) <= r)
    {
        return Err(AmalgamError::PreconditionViolated(format!(
            "no orbit point within {r} of {a}"
        )));
    }
    for (b, d) in &entries {
        let dab = space.d(ai, *b);
        if &(r + d) < dab || &(d + dab) < r || &(r + dab) < d {
            return Err(AmalgamError::InvalidSocket(format!(
                "extension fails at {}",
                space.label(*b)
            )));
        }
    }
    Ok(socket.clone().with(a, r.clone()))
}

/// The least socket distance and whether the orbit has diameter at most
/// twice that.
pub fn orbit_diameter_check(
    space: &FiniteMetricSpace,
    socket: &DSocket,
) -> Result<(Rational, bool), AmalgamError> {
    let entries = socket.resolve(space)?;
    let ell = entries
        .iter()
        .map(|(_, d)| d.clone())
        .min()
        .ok_or_else(|| AmalgamError::InvalidSocket("empty socket".into()))?;
    let orb = orbit_resolved(space, &entries);
    if orb.is_empty() {
        return Err(AmalgamError::EmptyOrbit);
    }
    let bound = ell.mul_int(2);
    let ok = orb
        .iter()
        .all(|&x| orb.iter().all(|&y| space.d(x, y) <= &bound));
    Ok((ell, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::q;

    fn r(n: u64) -> Rational {
        Rational::from(n)
    }

    fn space(labels: &[&str], d: &[&[u64]]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(labels.iter().copied(), |i, j| r(d[i][j])).unwrap()
    }

    fn sample_triangle() -> FiniteMetricSpace {
        space(&["x1", "y", "y'"], &[&[0, 1, 5], &[1, 0, 4], &[5, 4, 0]])
    }

    #[test]
    fn empty_socket() {
        let s = sample_triangle();
        assert!(validate_dsocket(&s, &DSocket::default()).unwrap());
        assert_eq!(orbit(&s, &DSocket::default()).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn socket_validity() {
        let s = space(&["b", "b'"], &[&[0, 4], &[4, 0]]);
        assert!(validate_dsocket(&s, &DSocket::new([("b", r(1)), ("b'", r(5))])).unwrap());
        let t = space(&["b", "b'"], &[&[0, 3], &[3, 0]]);
        assert!(!validate_dsocket(&t, &DSocket::new([("b", r(1)), ("b'", r(1))])).unwrap());
        assert!(matches!(
            orbit(&t, &DSocket::new([("z", r(1))])),
            Err(AmalgamError::Space(_))
        ));
    }

    #[test]
    fn socket_json() {
        let s = DSocket::new([("p3", q(1, 2))]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"entries":[{"b":"p3","d":"1/2"}]}"#);
        assert_eq!(serde_json::from_str::<DSocket>(&text).unwrap(), s);
    }

    #[test]
    fn realize_on_a_point() {
        let s = space(&["b"], &[&[0]]);
        let out = realize_socket(
            &s,
            &DSocket::new([("b", r(1))]),
            &ValueSet::from_integers(&[1]),
        )
        .unwrap();
        assert_eq!(out.space.len(), 2);
        assert_eq!(out.space.label(1), "p1");
        assert_eq!(out.space.d(0, 1), &r(1));
    }

    #[test]
    fn realize_on_the_triangle() {
        let v = ValueSet::from_integers(&[1, 2, 3, 4, 5]);
        let out = realize_socket(
            &sample_triangle(),
            &DSocket::new([("y", r(1)), ("y'", r(3))]),
            &v,
        )
        .unwrap();
        assert_eq!(out.space.d(0, out.point), &r(2));
        assert!(out
            .space
            .subspace(&[0, 1, 2])
            .same_metric(&sample_triangle()));
    }

    #[test]
    fn realize_on_a_clique() {
        let s = FiniteMetricSpace::from_fn(
            ["a", "b", "c", "d"],
            |i, j| if i == j { r(0) } else { r(1) },
        )
        .unwrap();
        let out = realize_socket(
            &s,
            &DSocket::new([("a", r(1))]),
            &ValueSet::from_integers(&[1]),
        )
        .unwrap();
        assert_eq!(out.space.len(), 5);
        assert!((0..4).all(|i| out.space.d(i, 4) == &r(1)));
    }

    #[test]
    fn realize_rejects_bad_sockets() {
        let v = ValueSet::from_integers(&[1, 2, 3, 4, 5]);
        let s = sample_triangle();
        assert!(matches!(
            realize_socket(&s, &DSocket::new([("y", r(1)), ("y'", r(1))]), &v),
            Err(AmalgamError::InvalidSocket(_))
        ));
        assert!(matches!(
            realize_socket(&s, &DSocket::new([("y", r(0))]), &v),
            Err(AmalgamError::InvalidSocket(_))
        ));
        assert!(matches!(
            realize_socket(&s, &DSocket::new([("y", r(7))]), &v),
            Err(AmalgamError::InvalidSocket(_))
        ));
    }

    #[test]
    fn rim_examples() {
        // b, a, x with d(a,b) = 1, d(b,x) = 1/2, d(a,x) = 1/2.
        let s = FiniteMetricSpace::from_fn(["b", "a", "x"], |i, j| match (i.min(j), i.max(j)) {
            (i, j) if i == j => Rational::zero(),
            (0, 1) => r(1),
            _ => q(1, 2),
        })
        .unwrap();
        let ext = rim_extend(&s, &DSocket::new([("b", q(1, 2))]), "a", &q(1, 2)).unwrap();
        assert_eq!(ext, DSocket::new([("b", q(1, 2)), ("a", q(1, 2))]));
        assert!(validate_dsocket(&s, &ext).unwrap());
        assert!(matches!(
            rim_extend(&s, &DSocket::new([("b", q(1, 2))]), "b", &q(1, 2)),
            Err(AmalgamError::PreconditionViolated(_))
        ));
        assert_eq!(
            rim_extend(&s, &DSocket::default(), "a", &q(1, 2)).unwrap(),
            DSocket::new([("a", q(1, 2))])
        );
    }

    #[test]
    fn orbit_diameter() {
        let s = space(
            &["b", "b'", "u", "w"],
            &[&[0, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 0, 2], &[1, 1, 2, 0]],
        );
        let (ell, ok) = orbit_diameter_check(&s, &DSocket::new([("b", r(1))])).unwrap();
        assert_eq!(ell, r(1));
        assert!(ok);
        let (ell, _) =
            orbit_diameter_check(&s, &DSocket::new([("b", r(1)), ("b'", r(1))])).unwrap();
        assert_eq!(ell, r(1));
        assert_eq!(
            orbit_diameter_check(&s, &DSocket::new([("b", r(2))])).unwrap_err(),
            AmalgamError::EmptyOrbit
        );
    }
}
