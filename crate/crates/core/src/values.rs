//! Value sets, the four-values condition, residuation and the canonical
//! distance `d_V` on a value set.
//!
//! A [`ValueSet`] is a finite, sorted set of nonnegative rationals that
//! contains `0`. It is the set of distances a metric space is allowed to use.
//! The four-values condition on `V` is exactly what makes finite metric
//! spaces over `V` amalgamate (see [`crate::amalgam`]).

use std::fmt;

use serde::{Deserialize, Serialize};

pub use crate::rational::{q, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuesError {
    #[error("value set must contain 0")]
    MissingZero,
    #[error("{0} is not in the value set")]
    NotInValueSet(Rational),
    #[error("residuation needs x <= y, got x = {x}, y = {y}")]
    OrderViolation { x: Rational, y: Rational },
    #[error("d_V violates the triangle inequality: d_V({x},{z}) > d_V({x},{y}) + d_V({y},{z})")]
    TriangleFailure {
        x: Rational,
        y: Rational,
        z: Rational,
    },
}

/// A finite set of distances, always containing `0`, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ValueSetJson", into = "ValueSetJson")]
pub struct ValueSet {
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct ValueSetJson {
    values: Vec<Rational>,
}

impl TryFrom<ValueSetJson> for ValueSet {
    type Error = ValuesError;
    fn try_from(json: ValueSetJson) -> Result<Self, Self::Error> {
        ValueSet::new(json.values)
    }
}

impl From<ValueSet> for ValueSetJson {
    fn from(v: ValueSet) -> Self {
        ValueSetJson { values: v.values }
    }
}

impl ValueSet {
    /// Sorts and deduplicates; fails unless `0` is present.
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Result<Self, ValuesError> {
        let mut values: Vec<Rational> = values.into_iter().collect();
        values.sort();
        values.dedup();
        if values.first().is_none_or(|v| !v.is_zero()) {
            return Err(ValuesError::MissingZero);
        }
        Ok(ValueSet { values })
    }

    /// Like [`ValueSet::new`] but inserts `0` when missing.
    pub fn with_zero(values: impl IntoIterator<Item = Rational>) -> Self {
        let mut values: Vec<Rational> = values.into_iter().collect();
        values.push(Rational::zero());
        ValueSet::new(values).expect("zero was inserted")
    }

    pub fn from_integers(values: &[u64]) -> Self {
        ValueSet::with_zero(values.iter().map(|&v| Rational::from(v)))
    }

    /// `{0, step, 2·step, ...}` up to and including `max`.
    pub fn multiples(step: &Rational, max: &Rational) -> Self {
        assert!(step.is_positive(), "step must be positive");
        let mut values = vec![Rational::zero()];
        let mut k = 1;
        loop {
            let v = step.mul_int(k);
            if &v > max {
                break;
            }
            values.push(v);
            k += 1;
        }
        ValueSet { values }
    }

    pub fn singleton_zero() -> Self {
        ValueSet {
            values: vec![Rational::zero()],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Elements other than `0`, increasing.
    pub fn positive(&self) -> &[Rational] {
        &self.values[1..]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Never true: a value set always holds `0`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> &Rational {
        self.values.last().expect("value set holds 0")
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.values.binary_search(r).is_ok()
    }

    pub fn is_subset_of(&self, other: &ValueSet) -> bool {
        self.values.iter().all(|v| other.contains(v))
    }

    /// Least element `>= r`.
    pub fn least_at_least(&self, r: &Rational) -> Option<&Rational> {
        let i = self.values.partition_point(|v| v < r);
        self.values.get(i)
    }

    /// Elements lying in `interval`, increasing.
    pub fn in_interval(&self, interval: &Interval) -> &[Rational] {
        if interval.is_empty() {
            return &[];
        }
        let lo = self.values.partition_point(|v| v < &interval.lo);
        let hi = self.values.partition_point(|v| v <= &interval.hi);
        &self.values[lo..hi]
    }

    pub fn meets(&self, interval: &Interval) -> bool {
        !self.in_interval(interval).is_empty()
    }

    fn require(&self, r: &Rational) -> Result<(), ValuesError> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(ValuesError::NotInValueSet(r.clone()))
        }
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.values).finish()
    }
}

/// A closed interval `[lo, hi]`; empty when `lo > hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }
}

/// `[max{|u1-u2|, |u1'-u2'|}, min{u1+u2, u1'+u2'}]`: the range of values a
/// distance can take between the two apexes of triangles with sides
/// `(u1, u2)` and `(u1', u2')`.
pub fn phi_interval(u1: &Rational, u2: &Rational, u1p: &Rational, u2p: &Rational) -> Interval {
    let lo = std::cmp::max(u1.abs_diff(u2), u1p.abs_diff(u2p));
    let hi = std::cmp::min(u1 + u2, u1p + u2p);
    Interval { lo, hi }
}

/// True iff some element of `v` lies in [`phi_interval`].
pub fn rho(
    v: &ValueSet,
    u1: &Rational,
    u2: &Rational,
    u1p: &Rational,
    u2p: &Rational,
) -> Result<bool, ValuesError> {
    for u in [u1, u2, u1p, u2p] {
        v.require(u)?;
    }
    Ok(rho_unchecked(v, u1, u2, u1p, u2p))
}

fn rho_unchecked(
    v: &ValueSet,
    u1: &Rational,
    u2: &Rational,
    u1p: &Rational,
    u2p: &Rational,
) -> bool {
    v.meets(&phi_interval(u1, u2, u1p, u2p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FourValues {
    Holds,
    /// `[u1, u2, u1', u2']` with `rho(u1, u2, u1', u2')` true and
    /// `rho(u1, u1', u2, u2')` false.
    CounterExample([Rational; 4]),
}

impl FourValues {
    pub fn holds(&self) -> bool {
        matches!(self, FourValues::Holds)
    }
}

/// Exhaustive check of the four-values condition.
///
/// Only nonzero arguments are scanned: a zero argument pins both intervals to
/// a single point and the implication holds trivially. Swapping the two pairs
/// `(u1, u2) <-> (u1', u2')` leaves both sides of the implication unchanged,
/// so the scan visits each mirror pair once, through the representative with
/// `(u1, u2) >= (u1', u2')`, in lexicographic order. The first failure is
/// reported.
pub fn four_values_check(v: &ValueSet) -> FourValues {
    let nz = v.positive();
    for a in nz {
        for b in nz {
            for c in nz {
                for d in nz {
                    if (a, b) < (c, d) {
                        continue;
                    }
                    if rho_unchecked(v, a, b, c, d) && !rho_unchecked(v, a, c, b, d) {
                        return FourValues::CounterExample([
                            a.clone(),
                            b.clone(),
                            c.clone(),
                            d.clone(),
                        ]);
                    }
                }
            }
        }
    }
    FourValues::Holds
}

/// Whether `u1 - u1' <= u2 + u2'` always has a witness `v ∈ V` with
/// `u1 - u1' <= v <= u2 + u2'`.
///
/// When `u1 <= u1'` the witness `0` works, so only `u1 > u1'` is scanned.
pub fn sufficient_condition_check(v: &ValueSet) -> bool {
    let vals = v.values();
    for u1 in vals {
        for u1p in vals {
            let Some(diff) = u1.checked_sub(u1p) else {
                continue;
            };
            if diff.is_zero() {
                continue;
            }
            for u2 in vals {
                for u2p in vals {
                    let sum = u2 + u2p;
                    if diff <= sum
                        && !v.meets(&Interval {
                            lo: diff.clone(),
                            hi: sum,
                        })
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `y \ x`: the least `r ∈ V` with `y <= x + r`.
pub fn residuation(v: &ValueSet, x: &Rational, y: &Rational) -> Result<Rational, ValuesError> {
    v.require(x)?;
    v.require(y)?;
    if x > y {
        return Err(ValuesError::OrderViolation {
            x: x.clone(),
            y: y.clone(),
        });
    }
    Ok(residuate(v, x, y).expect("y itself is a candidate"))
}

fn residuate(v: &ValueSet, x: &Rational, y: &Rational) -> Option<Rational> {
    v.values().iter().find(|r| y <= &(x + *r)).cloned()
}

/// `d_V(x, y) = max{y \ x, x \ y}`, where the residual of a smaller element
/// by a larger one is `0`.
pub fn dv(v: &ValueSet, x: &Rational, y: &Rational) -> Result<Rational, ValuesError> {
    v.require(x)?;
    v.require(y)?;
    Ok(dv_unchecked(v, x, y))
}

fn dv_unchecked(v: &ValueSet, x: &Rational, y: &Rational) -> Rational {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    residuate(v, lo, hi).expect("hi itself is a candidate")
}

/// The table of `d_V` on `V`, indexed like [`ValueSet::values`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DvTable {
    pub values: ValueSet,
    pub table: Vec<Vec<Rational>>,
}

impl DvTable {
    pub fn get(&self, x: &Rational, y: &Rational) -> Option<&Rational> {
        let i = self.values.values().binary_search(x).ok()?;
        let j = self.values.values().binary_search(y).ok()?;
        Some(&self.table[i][j])
    }
}

/// Computes `d_V` and checks the triangle inequality on every triple.
///
/// Triples `(x, y, z)` are scanned in lexicographic order and the first with
/// `d_V(x, z) > d_V(x, y) + d_V(y, z)` is returned as the error. Such a
/// failure happens exactly when `V` fails the four-values condition.
pub fn dv_distance(v: &ValueSet) -> Result<DvTable, ValuesError> {
    let vals = v.values();
    let table: Vec<Vec<Rational>> = vals
        .iter()
        .map(|x| vals.iter().map(|y| dv_unchecked(v, x, y)).collect())
        .collect();
    let n = vals.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[i][k] > &table[i][j] + &table[j][k] {
                    return Err(ValuesError::TriangleFailure {
                        x: vals[i].clone(),
                        y: vals[j].clone(),
                        z: vals[k].clone(),
                    });
                }
            }
        }
    }
    Ok(DvTable {
        values: v.clone(),
        table,
    })
}

/// `V ∩ [0, ell]`.
pub fn initial_segment(v: &ValueSet, ell: &Rational) -> ValueSet {
    ValueSet {
        values: v.values().iter().filter(|x| *x <= ell).cloned().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEntry {
    pub w: Rational,
    /// True when the open interval `(w/2, w)` contains no element of `V`.
    pub gap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub gaps: Vec<GapEntry>,
    /// Maximal runs of `V \ {0}`, decreasing, split right below every `w`
    /// that has a halving gap.
    pub runs: Vec<Run>,
}

pub fn gap_report(v: &ValueSet) -> GapReport {
    let pos = v.positive();
    let gaps: Vec<GapEntry> = pos
        .iter()
        .map(|w| {
            let half = w.half();
            let gap = !pos.iter().any(|x| x > &half && x < w);
            GapEntry { w: w.clone(), gap }
        })
        .collect();

    let mut runs = Vec::new();
    let mut current: Option<Run> = None;
    for entry in gaps.iter().rev() {
        let run = current.get_or_insert_with(|| Run {
            lo: entry.w.clone(),
            hi: entry.w.clone(),
        });
        run.lo = entry.w.clone();
        if entry.gap {
            runs.push(current.take().expect("just inserted"));
        }
    }
    runs.extend(current);
    GapReport { gaps, runs }
}
