//! Sequence spaces: tuples below a degree bound, at the weight of their
//! first difference.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::UltraError;
use crate::space::FiniteMetricSpace;
use crate::values::Rational;

/// Largest sequence space [`omega_sequence_space`] builds by default.
pub const DEFAULT_SIZE_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Degree {
    Finite(usize),
    Unbounded(UnboundedMarker),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnboundedMarker {
    Unbounded,
}

impl Degree {
    pub const UNBOUNDED: Degree = Degree::Unbounded(UnboundedMarker::Unbounded);

    pub fn effective(&self, cap: usize) -> usize {
        match self {
            Degree::Finite(n) => *n,
            Degree::Unbounded(_) => cap,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Unbounded(_) => write!(f, "unbounded"),
        }
    }
}

/// Weights `w(0) > w(1) > ...` and per-coordinate degrees; `cap` stands in
/// for unbounded degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSpec {
    pub weights: Vec<Rational>,
    pub degrees: Vec<Degree>,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    4
}

impl OmegaSpec {
    pub fn finite(weights: Vec<Rational>, degrees: Vec<usize>) -> Self {
        OmegaSpec {
            weights,
            degrees: degrees.into_iter().map(Degree::Finite).collect(),
            cap: default_cap(),
        }
    }

    pub fn validate(&self) -> Result<(), UltraError> {
        let bad = |m: &str| Err(UltraError::InvalidSpec(m.into()));
        if self.weights.len() != self.degrees.len() {
            return bad("weights and degrees differ in length");
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return bad("weights must be positive");
        }
        if self.weights.windows(2).any(|w| w[0] <= w[1]) {
            return bad("weights must be strictly decreasing");
        }
        if self.degrees.iter().any(|d| d.effective(self.cap) < 2) {
            return bad("degrees must be at least 2");
        }
        Ok(())
    }

    pub fn effective_degrees(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.effective(self.cap)).collect()
    }

    /// Number of points, or `None` on overflow.
    pub fn size(&self) -> Option<usize> {
        self.effective_degrees()
            .into_iter()
            .try_fold(1usize, |acc, d| acc.checked_mul(d))
    }
}

/// All tuples `b` with `b_i < a_i`, lexicographically, labeled `(b0,b1,...)`,
/// at distance `w(i)` for the first index `i` where they differ.
pub fn omega_sequence_space(
    spec: &OmegaSpec,
    size_limit: usize,
) -> Result<FiniteMetricSpace, UltraError> {
    spec.validate()?;
    let degrees = spec.effective_degrees();
    let size = spec.size().filter(|&s| s <= size_limit);
    let Some(size) = size else {
        return Err(UltraError::SizeLimitExceeded { limit: size_limit });
    };
    let tuples: Vec<Vec<usize>> = (0..size)
        .map(|mut k| {
            let mut t = vec![0; degrees.len()];
            for i in (0..degrees.len()).rev() {
                t[i] = k % degrees[i];
                k /= degrees[i];
            }
            t
        })
        .collect();
    let labels = tuples
        .iter()
        .map(|t| {
            format!(
                "({})",
                t.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    let mut dist = Vec::with_capacity(size * size);
    for x in &tuples {
        for y in &tuples {
            let d = x
                .iter()
                .zip(y)
                .position(|(a, b)| a != b)
                .map_or_else(Rational::zero, |i| spec.weights[i].clone());
            dist.push(d);
        }
    }
    Ok(FiniteMetricSpace::from_flat_unchecked(labels, dist, None))
}

/// Blocks of points sharing coordinate `level`, one block per coordinate
/// value, as labels of [`omega_sequence_space`].
pub fn omega_level_partition(
    spec: &OmegaSpec,
    level: usize,
) -> Result<Vec<Vec<String>>, UltraError> {
    spec.validate()?;
    let degrees = spec.effective_degrees();
    if level >= degrees.len() {
        return Err(UltraError::InvalidSpec(format!("no coordinate {level}")));
    }
    let space = omega_sequence_space(spec, usize::MAX)?;
    let stride: usize = degrees[level + 1..].iter().product();
    let mut blocks = vec![Vec::new(); degrees[level]];
    for (k, label) in space.labels().iter().enumerate() {
        blocks[(k / stride) % degrees[level]].push(label.clone());
    }
    Ok(blocks)
}
