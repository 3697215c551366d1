//! Rings, stripes and the partitions built from them, plus the harness
//! that tests whether a partition divides a space.

mod scatter;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connect::Partition;
use crate::space::{EmbeddingSearch, FiniteMetricSpace, SpaceError};
use crate::ultra::{ultrametric_violation, UltraError};
use crate::values::Rational;

pub use scatter::{scattered_fixpoint, sub_isolated_points, ScatterReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivideError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Ultra(#[from] UltraError),
    #[error("ring bounds need 0 <= lo < hi, got [{0}, {1})")]
    BadBounds(Rational, Rational),
    #[error("invalid radius sequence: {0}")]
    BadSequence(String),
    #[error("the construction produced {rings} ring(s); at least 2 are needed")]
    Degenerate { rings: usize },
}

/// `{x : lo <= d(c, x) < hi}`, in index order.
pub fn ring(
    space: &FiniteMetricSpace,
    c: usize,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<usize>, DivideError> {
    if c >= space.len() {
        return Err(SpaceError::UnknownPoint(c.to_string()).into());
    }
    if lo >= hi {
        return Err(DivideError::BadBounds(lo.clone(), hi.clone()));
    }
    Ok((0..space.len())
        .filter(|&x| space.d(c, x) >= lo && space.d(c, x) < hi)
        .collect())
}

/// The `n` with `l(n-1)/n <= d < ln/(n+1)`, for `d < l`.
pub fn stripe_index(d: &Rational, l: &Rational) -> Option<u64> {
    let gap = l.checked_sub(d).filter(Rational::is_positive)?;
    (d / &gap).to_u64_floor().map(|k| k + 1)
}

/// Two complementary sets of points.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenOdd {
    pub even: Vec<String>,
    pub odd: Vec<String>,
}

impl EvenOdd {
    fn from_indices(space: &FiniteMetricSpace, even: &[usize], odd: &[usize]) -> Self {
        let labels = |xs: &[usize]| xs.iter().map(|&i| space.label(i).to_string()).collect();
        EvenOdd {
            even: labels(even),
            odd: labels(odd),
        }
    }

    pub fn to_partition(&self) -> Partition {
        Partition {
            blocks: vec![self.even.clone(), self.odd.clone()],
        }
    }
}

fn stripe_split(space: &FiniteMetricSpace, c: usize, l: &Rational) -> (Vec<usize>, Vec<usize>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for x in 0..space.len() {
        match stripe_index(space.d(c, x), l) {
            Some(n) if n % 2 == 0 => even.push(x),
            Some(_) => odd.push(x),
            None => {}
        }
    }
    (even, odd)
}

/// Splits the open ball of radius `l` around `c` into the even and odd
/// stripes `[l(n-1)/n, ln/(n+1))`.
pub fn stripes(space: &FiniteMetricSpace, c: usize, l: &Rational) -> Result<EvenOdd, DivideError> {
    if c >= space.len() {
        return Err(SpaceError::UnknownPoint(c.to_string()).into());
    }
    if !l.is_positive() {
        return Err(SpaceError::InvalidArgument("stripe radius must be positive".into()).into());
    }
    let (even, odd) = stripe_split(space, c, l);
    Ok(EvenOdd::from_indices(space, &even, &odd))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub center: String,
    pub radius: Rational,
    pub members: Vec<String>,
}

/// Disjoint open balls covering a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCover {
    pub balls: Vec<Ball>,
}

impl BallCover {
    /// Checks disjointness, coverage, `2 l < lambda` and that no radius is a
    /// realized distance.
    pub fn verify(&self, space: &FiniteMetricSpace, lambda: &Rational) -> Result<(), String> {
        let mut seen = vec![false; space.len()];
        for ball in &self.balls {
            let c = space.point(&ball.center).map_err(|e| e.to_string())?;
            if &ball.radius.mul_int(2) >= lambda {
                return Err(format!(
                    "radius {} at {} is too large",
                    ball.radius, ball.center
                ));
            }
            if space.spectrum().contains(&ball.radius) {
                return Err(format!("radius {} is a realized distance", ball.radius));
            }
            let inside: Vec<usize> = (0..space.len())
                .filter(|&x| space.d(c, x) < &ball.radius)
                .collect();
            let members: Vec<usize> = ball
                .members
                .iter()
                .map(|l| space.point(l))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            if inside != members {
                return Err(format!("members of the ball at {} are wrong", ball.center));
            }
            for x in inside {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(format!("{} is in two balls", space.label(x)));
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(x) => Err(format!("{} is uncovered", space.label(x))),
            None => Ok(()),
        }
    }
}

/// Greedy cover by open balls of radius below `lambda / 2`.
///
/// Each uncovered point (in `order`, default index order) becomes a center.
/// Its radius stays below `lambda / 2` and below the distance to every
/// covered point, avoids realized distances, and is the midpoint of the
/// widest gap between realized distances under that bound (the upper gap
/// on ties).
pub fn ball_cover(
    space: &FiniteMetricSpace,
    lambda: &Rational,
    order: Option<&[usize]>,
) -> Result<BallCover, DivideError> {
    if !lambda.is_positive() {
        return Err(SpaceError::InvalidArgument("lambda must be positive".into()).into());
    }
    let default: Vec<usize> = (0..space.len()).collect();
    let order = order.unwrap_or(&default);
    if order.len() != space.len() || order.iter().any(|&i| i >= space.len()) {
        return Err(
            SpaceError::InvalidArgument("the order must list every point once".into()).into(),
        );
    }
    let mut covered = vec![false; space.len()];
    let mut balls = Vec::new();
    for &c in order {
        if covered[c] {
            continue;
        }
        let mut bound = lambda.half();
        for x in (0..space.len()).filter(|&x| covered[x]) {
            bound = bound.min(space.d(c, x).clone());
        }
        let mut cuts = vec![Rational::zero()];
        cuts.extend(
            space
                .spectrum()
                .positive()
                .iter()
                .filter(|d| **d < bound)
                .cloned(),
        );
        cuts.push(bound);
        let (lo, hi) = cuts
            .windows(2)
            .map(|w| (&w[0], &w[1]))
            .rev()
            .max_by(|a, b| {
                a.1.abs_diff(a.0)
                    .cmp(&b.1.abs_diff(b.0))
                    .then(std::cmp::Ordering::Greater)
            })
            .expect("at least one gap");
        let radius = (lo + hi).half();
        let members: Vec<usize> = (0..space.len())
            .filter(|&x| space.d(c, x) < &radius)
            .collect();
        for &x in &members {
            covered[x] = true;
        }
        balls.push(Ball {
            center: space.label(c).to_string(),
            radius,
            members: members
                .iter()
                .map(|&x| space.label(x).to_string())
                .collect(),
        });
    }
    let cover = BallCover { balls };
    cover
        .verify(space, lambda)
        .map_err(SpaceError::InvalidArgument)?;
    Ok(cover)
}

/// Even and odd stripes taken inside every ball of the cover.
pub fn divisibility_partition(
    space: &FiniteMetricSpace,
    cover: &BallCover,
) -> Result<EvenOdd, DivideError> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for ball in &cover.balls {
        let c = space.point(&ball.center)?;
        let (e, o) = stripe_split(space, c, &ball.radius);
        even.extend(e);
        odd.extend(o);
    }
    even.sort_unstable();
    odd.sort_unstable();
    Ok(EvenOdd::from_indices(space, &even, &odd))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnboundedReport {
    pub r_seq: Vec<Rational>,
    pub a_seq: Vec<String>,
    pub steps: usize,
    #[serde(flatten)]
    pub partition: EvenOdd,
}

/// Rings around `a0` with radii `r_0 = 0`, `r_{n+1} = d(a0, a_{n+1}) + r_n + g`
/// where `a_{n+1}` is the nearest point beyond `2 r_n` and `g` the least
/// positive distance. Even rings, and the unbounded tail when it follows
/// an even count of rings, form the even part.
pub fn unbounded_partition(
    space: &FiniteMetricSpace,
    a0: usize,
) -> Result<UnboundedReport, DivideError> {
    if a0 >= space.len() {
        return Err(SpaceError::UnknownPoint(a0.to_string()).into());
    }
    let g = space
        .min_positive_distance()
        .cloned()
        .ok_or(DivideError::Degenerate { rings: 0 })?;
    let mut r_seq = vec![Rational::zero()];
    let mut a_seq = Vec::new();
    loop {
        let r = r_seq.last().expect("nonempty").clone();
        let twice = r.mul_int(2);
        let next = (0..space.len())
            .filter(|&x| space.d(a0, x) > &twice)
            .min_by(|&x, &y| space.d(a0, x).cmp(space.d(a0, y)));
        let Some(a) = next else { break };
        r_seq.push(&(space.d(a0, a) + &r) + &g);
        a_seq.push(a);
    }
    let rings = r_seq.len() - 1;
    if rings < 2 {
        return Err(DivideError::Degenerate { rings });
    }
    let ring_of = |x: usize| {
        r_seq
            .iter()
            .rposition(|r| space.d(a0, x) >= r)
            .expect("r_0 = 0")
    };
    let (even, odd): (Vec<usize>, Vec<usize>) =
        (0..space.len()).partition(|&x| ring_of(x) % 2 == 0);
    Ok(UnboundedReport {
        steps: a_seq.len(),
        a_seq: a_seq.iter().map(|&a| space.label(a).to_string()).collect(),
        partition: EvenOdd::from_indices(space, &even, &odd),
        r_seq,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecPartition {
    pub balls: Vec<Ball>,
    #[serde(flatten)]
    pub partition: EvenOdd,
}

/// For an ultrametric space: cover by the open balls of radius `s` (the
/// last element of `r_seq`), centered greedily in index order starting at
/// `a`, and split each ball into the rings `[r_i, r_{i+1})` around its
/// center, even `i` to the even part.
pub fn ultra_spec_partition(
    space: &FiniteMetricSpace,
    a: usize,
    r_seq: &[Rational],
) -> Result<SpecPartition, DivideError> {
    if let Some([x, y, z]) = ultrametric_violation(space) {
        let l = |i: usize| space.label(i).to_string();
        return Err(UltraError::NotUltrametric(l(x), l(y), l(z)).into());
    }
    if a >= space.len() {
        return Err(SpaceError::UnknownPoint(a.to_string()).into());
    }
    match r_seq.first() {
        Some(r) if r.is_zero() => {}
        _ => return Err(DivideError::BadSequence("must start at 0".into())),
    }
    if r_seq.len() < 2 || r_seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DivideError::BadSequence(
            "must increase strictly past 0".into(),
        ));
    }
    let spec = space.spectrum_at(a);
    if let Some(r) = r_seq[..r_seq.len() - 1].iter().find(|r| !spec.contains(r)) {
        return Err(DivideError::BadSequence(format!(
            "{r} is not a distance from {}",
            space.label(a)
        )));
    }
    let s = r_seq.last().expect("nonempty");
    let mut covered = vec![false; space.len()];
    let mut balls = Vec::new();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for c in std::iter::once(a).chain(0..space.len()) {
        if covered[c] {
            continue;
        }
        let members: Vec<usize> = (0..space.len()).filter(|&x| space.d(c, x) < s).collect();
        for &x in &members {
            covered[x] = true;
            let i = r_seq
                .iter()
                .rposition(|r| space.d(c, x) >= r)
                .expect("r_0 = 0");
            if i % 2 == 0 {
                even.push(x)
            } else {
                odd.push(x)
            }
        }
        balls.push(Ball {
            center: space.label(c).to_string(),
            radius: s.clone(),
            members: members
                .iter()
                .map(|&x| space.label(x).to_string())
                .collect(),
        });
    }
    even.sort_unstable();
    odd.sort_unstable();
    Ok(SpecPartition {
        balls,
        partition: EvenOdd::from_indices(space, &even, &odd),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockVerdict {
    pub block: Vec<String>,
    pub contains_copy: bool,
    /// Point of the space to point of the block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<std::collections::BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub blocks: Vec<BlockVerdict>,
    /// No block contains a copy of the space.
    pub divisible: bool,
}

/// Searches each block for an isometric copy of the whole space.
pub fn divisibility_experiment(
    space: &FiniteMetricSpace,
    partition: &Partition,
    parallel: bool,
) -> Result<ExperimentReport, DivideError> {
    let blocks = partition.to_indices(space)?;
    let verdict = |(block, idx): (&Vec<String>, &Vec<usize>)| {
        let mut allowed = vec![false; space.len()];
        for &i in idx {
            allowed[i] = true;
        }
        let found = EmbeddingSearch::new(space, space)
            .within(allowed)
            .limit(1)
            .run()
            .pop();
        BlockVerdict {
            block: block.clone(),
            contains_copy: found.is_some(),
            witness: found.map(|e| e.to_labels(space, space)),
        }
    };
    let verdicts: Vec<BlockVerdict> = if parallel {
        partition
            .blocks
            .par_iter()
            .zip(blocks.par_iter())
            .map(verdict)
            .collect()
    } else {
        partition
            .blocks
            .iter()
            .zip(blocks.iter())
            .map(verdict)
            .collect()
    };
    Ok(ExperimentReport {
        divisible: verdicts.iter().all(|v| !v.contains_copy),
        blocks: verdicts,
    })
}
