use proptest::prelude::*;

use vmetric::amalgam::{disjoint_amalgam, one_point_amalgam};
use vmetric::connect::{eps_components, subdominant_ultrametric};
use vmetric::divide::{stripe_index, stripes};
use vmetric::space::{embeds, line_space, numbered_labels, sup_power};
use vmetric::ultra::{is_ultrametric, nerve, tree_to_space};
use vmetric::values::{dv, four_values_check, residuation, FourValues};
use vmetric::{q, FiniteMetricSpace, Rational, ValueSet};

fn value_set() -> impl Strategy<Value = ValueSet> {
    prop::collection::btree_set(1u64..=12, 1..6)
        .prop_map(|s| ValueSet::from_integers(&s.into_iter().collect::<Vec<_>>()))
}

/// Points on a line at small integer coordinates, deduplicated.
fn line() -> impl Strategy<Value = FiniteMetricSpace> {
    prop::collection::btree_set(0u64..40, 1..8)
        .prop_map(|s| line_space(&s.into_iter().map(Rational::from).collect::<Vec<_>>()).unwrap())
}

/// Random weights closed under shortest paths.
fn metric() -> impl Strategy<Value = FiniteMetricSpace> {
    (1usize..7).prop_flat_map(|n| {
        prop::collection::vec((1u64..10, 1u64..4), n * n).prop_map(move |w| {
            let mut d: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                Rational::zero()
                            } else {
                                q(w[i.min(j) * n + i.max(j)].0, w[i.min(j) * n + i.max(j)].1)
                            }
                        })
                        .collect()
                })
                .collect();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let via = &d[i][k] + &d[k][j];
                        if via < d[i][j] {
                            d[i][j] = via;
                        }
                    }
                }
            }
            FiniteMetricSpace::from_fn(numbered_labels(n), |i, j| d[i][j].clone()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn four_values_counterexample_is_genuine(v in value_set()) {
        if let FourValues::CounterExample([a, b, c, d]) = four_values_check(&v) {
            prop_assert!(vmetric::values::rho(&v, &a, &b, &c, &d).unwrap());
            prop_assert!(!vmetric::values::rho(&v, &a, &c, &b, &d).unwrap());
        }
    }

    #[test]
    fn residuation_is_least(v in value_set(), i in 0usize..6, j in 0usize..6) {
        let vals = v.values();
        let (x, y) = (&vals[i % vals.len()], &vals[j % vals.len()]);
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let res = residuation(&v, x, y).unwrap();
        prop_assert!(y <= &(x + &res));
        for smaller in vals.iter().filter(|s| *s < &res) {
            prop_assert!(y > &(x + smaller));
        }
    }

    #[test]
    fn dv_is_symmetric(v in value_set(), i in 0usize..6, j in 0usize..6) {
        let vals = v.values();
        let (x, y) = (&vals[i % vals.len()], &vals[j % vals.len()]);
        prop_assert_eq!(dv(&v, x, y).unwrap(), dv(&v, y, x).unwrap());
        prop_assert!(dv(&v, x, x).unwrap().is_zero());
    }

    #[test]
    fn amalgams_extend_both_sides(v in value_set(), a in 0usize..6, b in 0usize..6) {
        prop_assume!(four_values_check(&v).holds());
        let pos = v.positive();
        let pick = |k: usize| pos[k % pos.len()].clone();
        let (x, y) = (pick(a), pick(b));
        let base = FiniteMetricSpace::from_fn(["p", "x1"], |i, j| if i == j { Rational::zero() } else { x.clone() }).unwrap();
        let other = FiniteMetricSpace::from_fn(["p", "x2"], |i, j| if i == j { Rational::zero() } else { y.clone() }).unwrap();
        let out = one_point_amalgam(&base, &other, &v).unwrap();
        prop_assert!(embeds(&base, &out.space) && embeds(&other, &out.space));
        prop_assert!(out.space.spectrum().is_subset_of(&v));
        let all = disjoint_amalgam(&base, &other, &v).unwrap();
        prop_assert!(all.space.same_metric(&out.space));
    }

    #[test]
    fn subdominant_is_largest_ultrametric_below(m in metric()) {
        let star = subdominant_ultrametric(&m);
        prop_assert!(is_ultrametric(&star));
        let n = m.len();
        for x in 0..n {
            for y in 0..n {
                prop_assert!(star.d(x, y) <= m.d(x, y));
                let best = (0..n).map(|z| m.d(x, z).max(m.d(z, y)).clone()).min().unwrap();
                prop_assert!(star.d(x, y) <= &best);
            }
        }
        prop_assert!(subdominant_ultrametric(&star).same_metric(&star));
    }

    #[test]
    fn components_are_the_classes_of_d_star(m in metric(), k in 1u64..10) {
        let eps = Rational::from(k);
        let star = subdominant_ultrametric(&m);
        let comps = eps_components(&m, &eps);
        for block in &comps.blocks {
            for a in block {
                for b in block {
                    prop_assert!(star.d(m.point(a).unwrap(), m.point(b).unwrap()) <= &eps);
                }
            }
        }
        let classes = (0..m.len()).filter(|&x| (0..x).all(|y| star.d(x, y) > &eps)).count();
        prop_assert_eq!(classes, comps.len());
    }

    #[test]
    fn nerve_roundtrip_on_subdominants(m in metric()) {
        let star = subdominant_ultrametric(&m);
        let back = tree_to_space(&nerve(&star).unwrap()).unwrap();
        for x in 0..star.len() {
            for y in 0..star.len() {
                let (a, b) = (back.point(star.label(x)).unwrap(), back.point(star.label(y)).unwrap());
                prop_assert_eq!(back.d(a, b), star.d(x, y));
            }
        }
    }

    #[test]
    fn stripes_tile_the_ball(s in line(), num in 1u64..40, den in 1u64..5) {
        let l = q(num, den);
        let eo = stripes(&s, 0, &l).unwrap();
        let inside = (0..s.len()).filter(|&x| s.d(0, x) < &l).count();
        prop_assert_eq!(eo.even.len() + eo.odd.len(), inside);
        for lab in eo.even.iter().chain(&eo.odd) {
            let d = s.d(0, s.point(lab).unwrap());
            let n = stripe_index(d, &l).unwrap();
            let lo = l.mul_int(n - 1).div_int(n);
            let hi = l.mul_int(n).div_int(n + 1);
            prop_assert!(&lo <= d && d < &hi);
            prop_assert_eq!(n % 2 == 0, eo.even.contains(lab));
        }
    }

    #[test]
    fn embedding_is_transitive(s in line(), shift in 0u64..10) {
        let moved = line_space(&s.labels().iter().map(|l| &l.parse::<Rational>().unwrap() + &Rational::from(shift)).collect::<Vec<_>>()).unwrap();
        prop_assert!(embeds(&s, &moved));
        let sq = sup_power(&s, 2).unwrap();
        prop_assert!(embeds(&moved, &sq));
    }
}
