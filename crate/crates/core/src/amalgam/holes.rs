//! Realizing sockets outside a union of separated open balls.

use serde::Serialize;

use super::socket::{orbit_resolved, valid_resolved};
use super::urysohn::{for_each_vector, subsets};
use super::{AmalgamError, DSocket};
use crate::space::FiniteMetricSpace;
use crate::values::{Rational, ValueSet};

/// A socket realized in the space but only inside the balls, with the
/// rim extension that is not realized outside them either.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleViolation {
    pub socket: DSocket,
    pub rim: DSocket,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HolesReport {
    /// Points in the union of the open balls.
    pub removed: Vec<String>,
    pub checked: usize,
    pub direct: usize,
    pub via_rim: usize,
    pub unrealized: usize,
    /// Sockets realized in the space but not in the complement.
    pub violations: Vec<HoleViolation>,
}

impl HolesReport {
    /// True when every socket realized in the space is realized in the
    /// complement.
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Removes the open balls `B(a_i, r_i)` and checks every valid socket with
/// at most `socket_size` vertices in the complement, with distances in
/// `v`, for an orbit point in the complement.
pub fn holes_check(
    space: &FiniteMetricSpace,
    centers: &[String],
    radii: &[Rational],
    v: &ValueSet,
    socket_size: usize,
) -> Result<HolesReport, AmalgamError> {
    if centers.len() != radii.len() {
        return Err(AmalgamError::PreconditionViolated(
            "one radius per center".into(),
        ));
    }
    if let Some(r) = radii.iter().find(|r| !r.is_positive()) {
        return Err(AmalgamError::PreconditionViolated(format!(
            "radius {r} is not positive"
        )));
    }
    let idx: Vec<usize> = centers
        .iter()
        .map(|c| space.point(c))
        .collect::<Result<_, _>>()?;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if space.d(idx[i], idx[j]) < &(&radii[i] + &radii[j]) {
                return Err(AmalgamError::HypothesisViolated(i, j));
            }
        }
    }
    let inside = |x: usize| idx.iter().zip(radii).position(|(&a, r)| space.d(a, x) < r);
    let removed: Vec<usize> = (0..space.len()).filter(|&x| inside(x).is_some()).collect();
    let complement: Vec<usize> = (0..space.len()).filter(|&x| inside(x).is_none()).collect();

    let mut report = HolesReport {
        removed: removed
            .iter()
            .map(|&x| space.label(x).to_string())
            .collect(),
        checked: 0,
        direct: 0,
        via_rim: 0,
        unrealized: 0,
        violations: Vec::new(),
    };
    for size in 1..=socket_size.min(complement.len()) {
        for pick in subsets(complement.len(), size) {
            let vertices: Vec<usize> = pick.iter().map(|&i| complement[i]).collect();
            for_each_vector(v.positive(), size, &mut |dists| {
                let entries: Vec<(usize, Rational)> = vertices
                    .iter()
                    .copied()
                    .zip(dists.iter().cloned())
                    .collect();
                if !valid_resolved(space, &entries) {
                    return;
                }
                report.checked += 1;
                let orb = orbit_resolved(space, &entries);
                if orb.is_empty() {
                    report.unrealized += 1;
                    return;
                }
                if orb.iter().any(|&x| inside(x).is_none()) {
                    report.direct += 1;
                    return;
                }
                let ball = inside(orb[0]).expect("orbit inside the balls");
                let (a, r) = (idx[ball], &radii[ball]);
                let mut extended = entries.clone();
                extended.push((a, r.clone()));
                let socket = |es: &[(usize, Rational)]| {
                    DSocket::new(
                        es.iter()
                            .map(|(b, d)| (space.label(*b).to_string(), d.clone())),
                    )
                };
                let rim_ok = valid_resolved(space, &extended)
                    && orbit_resolved(space, &extended)
                        .into_iter()
                        .any(|y| inside(y).is_none());
                if rim_ok {
                    report.via_rim += 1;
                } else {
                    report.violations.push(HoleViolation {
                        socket: socket(&entries),
                        rim: socket(&extended),
                    });
                }
            });
        }
    }
    Ok(report)
}
