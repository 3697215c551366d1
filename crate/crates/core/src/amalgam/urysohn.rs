//! Finite approximants of the Urysohn space over a value set.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::socket::{orbit_resolved, valid_resolved};
use super::{realize_socket, AmalgamError, DSocket};
use crate::space::FiniteMetricSpace;
use crate::values::{four_values_check, Rational, ValueSet};

/// One realization step of the builder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub step: usize,
    pub point: String,
    pub socket: DSocket,
    pub tier: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UrysohnReport {
    pub space: FiniteMetricSpace,
    /// Every socket (within the size cap) over the first `complete_tiers`
    /// points is realized.
    pub complete_tiers: usize,
    /// True when every socket over every point is realized, so the space
    /// cannot grow further under the size cap.
    pub closed: bool,
    pub log: Vec<Provenance>,
}

/// Grows a space by realizing sockets tier by tier.
///
/// Tier `k` holds the sockets whose vertices lie among the first `k`
/// points and include point `k - 1`. Within a tier, sockets are served by
/// vertex count, then vertex set, then distance vector; the seed only
/// shuffles sockets sharing a tier and a vertex count.
#[derive(Debug, Clone)]
pub struct UrysohnBuilder {
    v: ValueSet,
    seed_space: Option<FiniteMetricSpace>,
    max_points: usize,
    rng_seed: u64,
    socket_size: Option<usize>,
}

impl UrysohnBuilder {
    pub fn new(v: ValueSet, max_points: usize, rng_seed: u64) -> Self {
        UrysohnBuilder {
            v,
            seed_space: None,
            max_points,
            rng_seed,
            socket_size: None,
        }
    }

    pub fn seed_space(mut self, space: FiniteMetricSpace) -> Self {
        self.seed_space = Some(space);
        self
    }

    /// Caps the number of vertices per socket. Unbounded by default.
    pub fn socket_size(mut self, cap: usize) -> Self {
        self.socket_size = Some(cap);
        self
    }

    pub fn build(&self) -> Result<UrysohnReport, AmalgamError> {
        if !four_values_check(&self.v).holds() {
            return Err(AmalgamError::FourValuesFailure);
        }
        if self.max_points == 0 {
            return Err(AmalgamError::PreconditionViolated(
                "max_points must be at least 1".into(),
            ));
        }
        let mut space = match &self.seed_space {
            Some(s) => s.clone().with_value_set(self.v.clone())?,
            None => FiniteMetricSpace::from_fn(["p0"], |_, _| Rational::zero())?
                .with_value_set(self.v.clone())?,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        let mut log = Vec::new();
        let mut complete = 0;
        let mut k = 1;
        let mut budget_hit = false;
        'tiers: while k <= space.len() {
            let cap = self.socket_size.unwrap_or(k).min(k);
            for size in 1..=cap {
                let mut group = tier_group(&space, &self.v, k, size);
                group.shuffle(&mut rng);
                for entries in group {
                    if !orbit_resolved(&space, &entries).is_empty() {
                        continue;
                    }
                    if space.len() >= self.max_points {
                        budget_hit = true;
                        break 'tiers;
                    }
                    let socket = DSocket::new(
                        entries
                            .iter()
                            .map(|(b, d)| (space.label(*b).to_string(), d.clone())),
                    );
                    let out = realize_socket(&space, &socket, &self.v)?;
                    log.push(Provenance {
                        step: log.len() + 1,
                        point: out.space.label(out.point).to_string(),
                        socket,
                        tier: k,
                    });
                    space = out.space;
                }
            }
            complete = k;
            k += 1;
        }
        let closed = !budget_hit && complete == space.len();
        Ok(UrysohnReport {
            space,
            complete_tiers: complete,
            closed,
            log,
        })
    }
}

/// Valid sockets with `size` vertices among the first `k` points, always
/// including point `k - 1`, in canonical order.
fn tier_group(
    space: &FiniteMetricSpace,
    v: &ValueSet,
    k: usize,
    size: usize,
) -> Vec<Vec<(usize, Rational)>> {
    let mut out = Vec::new();
    for rest in subsets(k - 1, size - 1) {
        let mut vertices = rest;
        vertices.push(k - 1);
        for_each_vector(v.positive(), size, &mut |dists: &[Rational]| {
            let entries: Vec<(usize, Rational)> = vertices
                .iter()
                .copied()
                .zip(dists.iter().cloned())
                .collect();
            if valid_resolved(space, &entries) {
                out.push(entries);
            }
        });
    }
    out
}

/// Size-`m` subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Calls `f` on every length-`m` vector over `values`, lexicographically.
pub(crate) fn for_each_vector(values: &[Rational], m: usize, f: &mut dyn FnMut(&[Rational])) {
    fn go(values: &[Rational], m: usize, cur: &mut Vec<Rational>, f: &mut dyn FnMut(&[Rational])) {
        if cur.len() == m {
            f(cur);
            return;
        }
        for x in values {
            cur.push(x.clone());
            go(values, m, cur, f);
            cur.pop();
        }
    }
    go(values, m, &mut Vec::with_capacity(m), f);
}

/// Builds an approximant with unbounded socket size.
pub fn urysohn_approximant(
    v: &ValueSet,
    seed: Option<FiniteMetricSpace>,
    max_points: usize,
    rng_seed: u64,
) -> Result<UrysohnReport, AmalgamError> {
    let mut b = UrysohnBuilder::new(v.clone(), max_points, rng_seed);
    if let Some(s) = seed {
        b = b.seed_space(s);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_values_fill_the_budget() {
        let rep = urysohn_approximant(&ValueSet::from_integers(&[1]), None, 5, 7).unwrap();
        assert_eq!(rep.space.len(), 5);
        assert_eq!(rep.space.spectrum(), &ValueSet::from_integers(&[1]));
        assert_eq!(rep.log.len(), 4);
        assert_eq!(rep.log[0].point, "p1");
    }

    #[test]
    fn bad_value_set() {
        let v = ValueSet::from_integers(&[1, 3, 4, 5]);
        assert_eq!(
            urysohn_approximant(&v, None, 10, 0).unwrap_err(),
            AmalgamError::FourValuesFailure
        );
    }

    #[test]
    fn zero_only_closes_at_once() {
        let rep = urysohn_approximant(&ValueSet::singleton_zero(), None, 5, 0).unwrap();
        assert_eq!(rep.space.len(), 1);
        assert!(rep.closed);
    }

    #[test]
    fn small_cap_closes() {
        let rep = UrysohnBuilder::new(ValueSet::from_integers(&[1]), 10, 0)
            .socket_size(2)
            .build()
            .unwrap();
        assert_eq!(rep.space.len(), 3);
        assert!(rep.closed);
        assert_eq!(rep.complete_tiers, 3);
    }

    #[test]
    fn deterministic_in_the_seed() {
        let v = ValueSet::from_integers(&[1, 2]);
        let a = urysohn_approximant(&v, None, 9, 42).unwrap();
        let b = urysohn_approximant(&v, None, 9, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        let mut n = 0;
        for_each_vector(&[Rational::one(), Rational::from(2)], 3, &mut |_| n += 1);
        assert_eq!(n, 8);
    }
}
