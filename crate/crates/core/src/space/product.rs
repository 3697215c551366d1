//! Sup-products, cartesian powers and combinatorial lines.

use std::fmt;

use super::{FiniteMetricSpace, SpaceError};
use crate::values::Rational;

/// Cartesian product with the sup distance.
///
/// Points are ordered lexicographically (last coordinate fastest) and
/// labeled `(a,b,...)` from the factor labels.
pub fn sup_product(spaces: &[FiniteMetricSpace]) -> Result<FiniteMetricSpace, SpaceError> {
    if spaces.is_empty() || spaces.iter().any(FiniteMetricSpace::is_empty) {
        return Err(SpaceError::EmptyFactor);
    }
    let sizes: Vec<usize> = spaces.iter().map(FiniteMetricSpace::len).collect();
    let tuples = tuples(&sizes);
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(spaces).map(|(&i, s)| s.label(i)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mut dist = Vec::with_capacity(tuples.len() * tuples.len());
    for x in &tuples {
        for y in &tuples {
            let d = x
                .iter()
                .zip(y)
                .zip(spaces)
                .map(|((&i, &j), s)| s.d(i, j))
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero);
            dist.push(d);
        }
    }
    let first = spaces[0].value_set();
    let value_set = spaces
        .iter()
        .all(|s| s.value_set() == first)
        .then(|| first.cloned())
        .flatten();
    Ok(FiniteMetricSpace::from_flat_unchecked(
        labels, dist, value_set,
    ))
}

/// `F^n` with the sup distance.
pub fn sup_power(f: &FiniteMetricSpace, n: usize) -> Result<FiniteMetricSpace, SpaceError> {
    if n == 0 {
        return Err(SpaceError::InvalidArgument(
            "power must be at least 1".into(),
        ));
    }
    sup_product(&vec![f.clone(); n])
}

/// Index in `sup_power(f, coords.len())` of the point with these
/// coordinates.
pub fn sup_power_index(base: usize, coords: &[usize]) -> usize {
    coords.iter().fold(0, |acc, &c| acc * base + c)
}

fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &size in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineCoord {
    Fixed(usize),
    Moving,
}

/// A combinatorial line in `F^n`: moving coordinates all take the same
/// letter, fixed ones keep theirs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialLine {
    pub coords: Vec<LineCoord>,
    /// Indices into `sup_power(F, n)`, one per letter of `F`.
    pub points: Vec<usize>,
}

impl CombinatorialLine {
    pub fn moving(&self) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&i| self.coords[i] == LineCoord::Moving)
            .collect()
    }

    pub fn fixed(&self) -> Vec<(usize, usize)> {
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c {
                LineCoord::Fixed(x) => Some((i, *x)),
                LineCoord::Moving => None,
            })
            .collect()
    }
}

impl fmt::Display for CombinatorialLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coords {
            match c {
                LineCoord::Fixed(x) => write!(f, "{x}")?,
                LineCoord::Moving => write!(f, "*")?,
            }
        }
        Ok(())
    }
}

/// All combinatorial lines of `F^n`, as words over `{*} ∪ F` with at least
/// one `*`, in lexicographic order (`*` first).
///
/// Lines with the same realized point set are reported once, so a
/// one-letter alphabet yields a single line.
pub fn combinatorial_lines(
    f: &FiniteMetricSpace,
    n: usize,
) -> Result<Vec<CombinatorialLine>, SpaceError> {
    if f.is_empty() {
        return Err(SpaceError::EmptyFactor);
    }
    if n == 0 {
        return Err(SpaceError::InvalidArgument(
            "power must be at least 1".into(),
        ));
    }
    let k = f.len();
    let mut lines = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let alphabet: Vec<LineCoord> = std::iter::once(LineCoord::Moving)
        .chain((0..k).map(LineCoord::Fixed))
        .collect();
    for word in tuples(&vec![k + 1; n]) {
        let coords: Vec<LineCoord> = word.iter().map(|&i| alphabet[i]).collect();
        if !coords.contains(&LineCoord::Moving) {
            continue;
        }
        let points: Vec<usize> = (0..k)
            .map(|letter| {
                let c: Vec<usize> = coords
                    .iter()
                    .map(|c| match c {
                        LineCoord::Fixed(x) => *x,
                        LineCoord::Moving => letter,
                    })
                    .collect();
                sup_power_index(k, &c)
            })
            .collect();
        let mut key = points.clone();
        key.sort_unstable();
        if seen.insert(key) {
            lines.push(CombinatorialLine { coords, points });
        }
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::line_space;
    use crate::values::q;

    fn pair(d: u64) -> FiniteMetricSpace {
        line_space(&[Rational::zero(), Rational::from(d)]).unwrap()
    }

    #[test]
    fn square_of_a_pair() {
        let g = sup_power(&pair(1), 2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.labels()[1], "(0,1)");
        assert!((0..4).all(|i| (0..4).all(|j| i == j || g.d(i, j) == &Rational::one())));
    }

    #[test]
    fn first_power_is_the_space() {
        let f = line_space(&[Rational::zero(), q(1, 2), Rational::from(2)]).unwrap();
        let p = sup_power(&f, 1).unwrap();
        assert_eq!(p.len(), 3);
        assert!((0..3).all(|i| (0..3).all(|j| p.d(i, j) == f.d(i, j))));
    }

    #[test]
    fn mixed_product() {
        let p = sup_product(&[pair(1), pair(2)]).unwrap();
        assert_eq!(
            p.spectrum().positive(),
            &[Rational::from(1), Rational::from(2)]
        );
        assert_eq!(p.diameter(), Rational::from(2));
    }

    #[test]
    fn empty_factors() {
        assert_eq!(sup_product(&[]).unwrap_err(), SpaceError::EmptyFactor);
        assert!(sup_power(&pair(1), 0).is_err());
    }

    #[test]
    fn line_counts() {
        let f = pair(1);
        let lines = combinatorial_lines(&f, 2).unwrap();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines.iter().filter(|l| l.moving().len() == 1).count(), 4);
        assert_eq!(lines[0].to_string(), "**");
        assert_eq!(lines[0].points, vec![0, 3]);
        let three = line_space(&[Rational::zero(), Rational::one(), Rational::from(2)]).unwrap();
        assert_eq!(
            combinatorial_lines(&three, 3).unwrap().len(),
            4usize.pow(3) - 3usize.pow(3)
        );
        assert_eq!(combinatorial_lines(&three, 1).unwrap().len(), 1);
        let single = line_space(&[Rational::zero()]).unwrap();
        assert_eq!(combinatorial_lines(&single, 4).unwrap().len(), 1);
    }

    #[test]
    fn lines_are_copies() {
        let f = line_space(&[Rational::zero(), q(1, 3), Rational::one()]).unwrap();
        let g = sup_power(&f, 3).unwrap();
        for line in combinatorial_lines(&f, 3).unwrap() {
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(g.d(line.points[a], line.points[b]), f.d(a, b));
                }
            }
        }
    }
}
