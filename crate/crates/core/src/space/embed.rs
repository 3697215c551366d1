//! Backtracking search for isometric embeddings.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::FiniteMetricSpace;
use crate::values::Rational;

/// An injective distance-preserving map, stored as target indices in
/// source order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn identity(n: usize) -> Self {
        Embedding {
            map: (0..n).collect(),
        }
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Source label to target label.
    pub fn to_labels(
        &self,
        source: &FiniteMetricSpace,
        target: &FiniteMetricSpace,
    ) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| (source.label(i).to_string(), target.label(j).to_string()))
            .collect()
    }

    pub fn is_isometric(&self, source: &FiniteMetricSpace, target: &FiniteMetricSpace) -> bool {
        source.is_isometry_into(target, &self.map)
    }
}

/// Configurable embedding search from `source` into `target`.
///
/// Results come in a canonical order: lexicographic in the images of the
/// source points taken in search order. Parallel runs split on the image of
/// the first point and merge in that order, so the output does not depend
/// on the worker count.
#[derive(Debug, Clone)]
pub struct EmbeddingSearch<'a> {
    source: &'a FiniteMetricSpace,
    target: &'a FiniteMetricSpace,
    limit: Option<usize>,
    parallel: bool,
    allowed: Option<Vec<bool>>,
    pin: Option<(usize, usize)>,
}

impl<'a> EmbeddingSearch<'a> {
    pub fn new(source: &'a FiniteMetricSpace, target: &'a FiniteMetricSpace) -> Self {
        EmbeddingSearch {
            source,
            target,
            limit: None,
            parallel: false,
            allowed: None,
            pin: None,
        }
    }

    /// Only embeddings sending source point `i` to target point `j`.
    pub fn pin(mut self, i: usize, j: usize) -> Self {
        self.pin = Some((i, j));
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// Restricts images to target points with `allowed[j]`.
    pub fn within(mut self, allowed: Vec<bool>) -> Self {
        assert_eq!(allowed.len(), self.target.len());
        self.allowed = Some(allowed);
        self
    }

    pub fn run(&self) -> Vec<Embedding> {
        let Some(plan) = Plan::new(
            self.source,
            self.target,
            self.allowed.as_deref(),
            self.pin.map(|p| p.0),
        ) else {
            return Vec::new();
        };
        if plan.order.is_empty() {
            return vec![Embedding { map: Vec::new() }];
        }
        let limit = self.limit.unwrap_or(usize::MAX);
        if limit == 0 {
            return Vec::new();
        }
        let first: Vec<usize> = match self.pin {
            Some((_, j)) => plan.candidates().filter(|&b| b == j).collect(),
            None => plan.candidates().collect(),
        };
        let mut found: Vec<Embedding> = if self.parallel {
            first
                .par_iter()
                .map(|&b| plan.search_from(b, limit))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        } else {
            let mut out = Vec::new();
            for b in first {
                if out.len() >= limit {
                    break;
                }
                out.extend(plan.search_from(b, limit - out.len()));
            }
            out
        };
        found.truncate(limit);
        found
    }

    pub fn exists(&self) -> bool {
        !self.clone().limit(1).run().is_empty()
    }
}

struct Plan {
    /// Source points in search order.
    order: Vec<usize>,
    /// Source distances as ids, indexed by search position.
    src: Vec<u32>,
    tgt: Vec<u32>,
    n_src: usize,
    n_tgt: usize,
    allowed: Vec<bool>,
}

const NO_MATCH: u32 = u32::MAX;

impl Plan {
    fn new(
        source: &FiniteMetricSpace,
        target: &FiniteMetricSpace,
        allowed: Option<&[bool]>,
        first: Option<usize>,
    ) -> Option<Plan> {
        let allowed = allowed
            .map(<[bool]>::to_vec)
            .unwrap_or_else(|| vec![true; target.len()]);
        let n_src = source.len();
        let n_tgt = target.len();
        if n_src > allowed.iter().filter(|&&a| a).count() {
            return None;
        }
        if !source.spectrum().is_subset_of(target.spectrum()) {
            return None;
        }
        let ids: HashMap<&Rational, u32> = target
            .spectrum()
            .values()
            .iter()
            .enumerate()
            .map(|(i, r)| (r, i as u32))
            .collect();
        let id = |r: &Rational| ids.get(r).copied().unwrap_or(NO_MATCH);

        let mut order: Vec<usize> = (0..n_src).collect();
        let diversity = |i: usize| source.spectrum_at(i).len();
        order.sort_by_key(|&i| (first != Some(i), std::cmp::Reverse(diversity(i)), i));

        let mut src = vec![0; n_src * n_src];
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                src[a * n_src + b] = id(source.d(i, j));
            }
        }
        let tgt = (0..n_tgt * n_tgt)
            .map(|k| id(target.d(k / n_tgt, k % n_tgt)))
            .collect();
        Some(Plan {
            order,
            src,
            tgt,
            n_src,
            n_tgt,
            allowed,
        })
    }

    fn candidates(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_tgt).filter(|&j| self.allowed[j])
    }

    fn search_from(&self, first: usize, limit: usize) -> Vec<Embedding> {
        let mut assign = vec![first];
        let mut used = vec![false; self.n_tgt];
        used[first] = true;
        let mut out = Vec::new();
        self.extend(&mut assign, &mut used, limit, &mut out);
        out
    }

    fn extend(
        &self,
        assign: &mut Vec<usize>,
        used: &mut [bool],
        limit: usize,
        out: &mut Vec<Embedding>,
    ) {
        let k = assign.len();
        if k == self.n_src {
            let mut map = vec![0; self.n_src];
            for (pos, &i) in self.order.iter().enumerate() {
                map[i] = assign[pos];
            }
            out.push(Embedding { map });
            return;
        }
        let row = &self.src[k * self.n_src..k * self.n_src + k];
        for b in 0..self.n_tgt {
            if used[b] || !self.allowed[b] {
                continue;
            }
            let trow = &self.tgt[b * self.n_tgt..(b + 1) * self.n_tgt];
            if row
                .iter()
                .zip(assign.iter())
                .all(|(&want, &a)| trow[a] == want)
            {
                assign.push(b);
                used[b] = true;
                self.extend(assign, used, limit, out);
                used[b] = false;
                assign.pop();
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
}

/// All isometric embeddings of `a` into `b`, up to `limit`.
pub fn isometric_embeddings(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    limit: Option<usize>,
) -> Vec<Embedding> {
    let search = EmbeddingSearch::new(a, b);
    match limit {
        Some(l) => search.limit(l).run(),
        None => search.run(),
    }
}

pub fn embeds(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> bool {
    EmbeddingSearch::new(a, b).exists()
}

/// The colors `c` in `{0, 1}` such that the points of `g` colored `c`
/// contain a copy of `f`. `coloring` is indexed by the points of `g`.
pub fn monochromatic_part(
    f: &FiniteMetricSpace,
    g: &FiniteMetricSpace,
    coloring: &[u8],
) -> Vec<u8> {
    assert_eq!(coloring.len(), g.len(), "coloring must cover every point");
    [0u8, 1]
        .into_iter()
        .filter(|&c| {
            EmbeddingSearch::new(f, g)
                .within(coloring.iter().map(|&x| x == c).collect())
                .exists()
        })
        .collect()
}
