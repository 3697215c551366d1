//! Generators for the standard test spaces.

use super::{FiniteMetricSpace, SpaceError};
use crate::values::{four_values_check, Rational, ValueSet};

/// A finite subset of the real line with the usual distance. Labels are
/// the coordinates.
pub fn line_space(points: &[Rational]) -> Result<FiniteMetricSpace, SpaceError> {
    FiniteMetricSpace::from_fn(points.iter().map(ToString::to_string), |i, j| {
        points[i].abs_diff(&points[j])
    })
}

/// The chain `x0, ..., xn` with `d(x_i, x_{i+k}) = a_k` and `a_n = ell`.
///
/// `a_k` is the least element of `V` in `[k ell/n, (k+1) ell/n)` whose
/// excess `a_k - k ell/n` keeps the excesses subadditive.
pub fn chain_space(
    v: &ValueSet,
    ell: &Rational,
    n: usize,
) -> Result<FiniteMetricSpace, SpaceError> {
    if !ell.is_positive() || !v.contains(ell) {
        return Err(SpaceError::NotInValueSet(ell.clone()));
    }
    if n == 0 {
        return Err(SpaceError::InvalidArgument(
            "chain length must be at least 1".into(),
        ));
    }
    if !four_values_check(v).holds() {
        return Err(SpaceError::FourValuesFailure);
    }
    let step = ell.div_int(n as u64);
    let mut a = vec![Rational::zero()];
    let mut eps = vec![Rational::zero()];
    for k in 1..=n {
        let grid = step.mul_int(k as u64);
        let upper = &grid + &step;
        let pick = if k == n {
            Some(ell.clone())
        } else {
            v.values()
                .iter()
                .filter(|x| **x >= grid && **x < upper)
                .find(|x| {
                    let e = x.checked_sub(&grid).expect("x >= grid");
                    (1..k).all(|i| e <= &eps[i] + &eps[k - i])
                })
                .cloned()
        };
        let ak = pick.ok_or(SpaceError::ValueSetTooSparse { k })?;
        eps.push(ak.checked_sub(&grid).expect("a_k >= grid"));
        a.push(ak);
    }
    let space = FiniteMetricSpace::from_fn((0..=n).map(|i| format!("x{i}")), |i, j| {
        a[i.abs_diff(j)].clone()
    })?;
    space.with_value_set(v.clone())
}

/// The points `(0,0)` and `(m,n)` with `1 <= m < n <= big_n`, ordered by `n`
/// then `m`.
///
/// `d((0,0),(m,n)) = m/n`, points of one row are `|m1-m2|/n` apart, and
/// points of different rows are `m1/n1 + m2/n2` apart.
pub fn example_space_mn(big_n: u64) -> Result<FiniteMetricSpace, SpaceError> {
    if big_n < 2 {
        return Err(SpaceError::InvalidArgument("N must be at least 2".into()));
    }
    let mut pts = vec![(0u64, 0u64)];
    for n in 2..=big_n {
        pts.extend((1..n).map(|m| (m, n)));
    }
    let coord = |(m, n): (u64, u64)| {
        if n == 0 {
            Rational::zero()
        } else {
            Rational::ratio(m, n)
        }
    };
    FiniteMetricSpace::from_fn(pts.iter().map(|(m, n)| format!("({m},{n})")), |i, j| {
        let (p, r) = (pts[i], pts[j]);
        if i == j {
            Rational::zero()
        } else if p.1 == r.1 {
            Rational::ratio(p.0.abs_diff(r.0), p.1)
        } else {
            coord(p) + coord(r)
        }
    })
}
