use std::collections::BTreeMap;

use proptest::prelude::*;
use toric::series::{
    newton_polygon, numeric_valuation_oracle, root_valuations, OracleOptions, RootClass, SPoly,
    Valuation, ZPoly,
};
use toric::{rat, Error, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn nonzero_coeff() -> impl Strategy<Value = Rational> {
    (1i64..=5, prop::bool::ANY).prop_map(|(c, neg)| rat(if neg { -c } else { c }, 1))
}

fn spoly() -> impl Strategy<Value = SPoly> {
    prop::collection::vec((small_rational(), nonzero_coeff()), 0..4).prop_map(SPoly::from_terms)
}

fn nonzero_spoly() -> impl Strategy<Value = SPoly> {
    spoly().prop_filter("nonzero", |p| !p.is_zero())
}

/// Polynomials with a constant term, so no roots at zero are lost to normalization.
fn zpoly() -> impl Strategy<Value = ZPoly> {
    prop::collection::vec(prop::option::of(nonzero_spoly()), 1..5).prop_flat_map(|mid| {
        (nonzero_spoly(), nonzero_spoly()).prop_map(move |(c0, top)| {
            let mut terms = vec![(0, c0)];
            for (i, c) in mid.iter().enumerate() {
                if let Some(c) = c {
                    terms.push((i as i64 + 1, c.clone()));
                }
            }
            terms.push((mid.len() as i64 + 1, top));
            ZPoly::from_terms(terms)
        })
    })
}

/// Multiset of root exponents, the form compared across factorizations.
fn multiset(classes: &[RootClass]) -> BTreeMap<Rational, usize> {
    let mut m = BTreeMap::new();
    for c in classes {
        *m.entry(c.value.clone()).or_insert(0) += c.multiplicity;
    }
    m
}

/// Leading exponents of the polynomial in `z`: the least exponent of every
/// coefficient, which is all the Newton polygon looks at.
fn leading_points(p: &ZPoly) -> Vec<(i64, Rational)> {
    let m = p.min_degree().unwrap();
    p.coeffs().map(|(d, c)| (d - m, c.min_exponent().unwrap().clone())).collect()
}

/// `v` is a root class of multiplicity `k` iff the minimum of `e_i + i v`
/// is attained at two indices whose gap is `k` (and the extreme ones).
fn brute_classes(p: &ZPoly, candidates: &[Rational]) -> BTreeMap<Rational, usize> {
    let pts = leading_points(p);
    let mut out = BTreeMap::new();
    for v in candidates {
        let vals: Vec<Rational> =
            pts.iter().map(|(i, e)| e + Rational::from(*i) * v).collect();
        let min = vals.iter().min().unwrap().clone();
        let hits: Vec<i64> =
            pts.iter().zip(&vals).filter(|(_, x)| **x == min).map(|(pt, _)| pt.0).collect();
        let span = hits.iter().max().unwrap() - hits.iter().min().unwrap();
        if span > 0 {
            out.insert(v.clone(), span as usize);
        }
    }
    out
}

#[test]
fn valuation_of_zero_is_neg_infinity() {
    assert_eq!(SPoly::zero().valuation(), Valuation::NegInfinity);
    assert_eq!(SPoly::s_pow(rat(3, 2)).valuation(), Valuation::Finite(rat(-3, 2)));
    assert_eq!(Valuation::NegInfinity.to_string(), "-inf");
}

#[test]
fn known_root_tables() {
    // z^2 - s: two roots of order 1/2
    let p = ZPoly::from_terms([(0, SPoly::s_pow(rat(1, 1)).scale(&rat(-1, 1))), (2, SPoly::one())]);
    assert_eq!(
        root_valuations(&p).unwrap(),
        vec![RootClass { value: rat(1, 2), multiplicity: 2 }]
    );
    // (z - s)(z - s^3) = z^2 - (s + s^3) z + s^4
    let p = ZPoly::from_terms([
        (0, SPoly::s_pow(rat(4, 1))),
        (1, SPoly::from_terms([(rat(1, 1), rat(-1, 1)), (rat(3, 1), rat(-1, 1))])),
        (2, SPoly::one()),
    ]);
    assert_eq!(
        root_valuations(&p).unwrap(),
        vec![
            RootClass { value: rat(3, 1), multiplicity: 1 },
            RootClass { value: rat(1, 1), multiplicity: 1 },
        ]
    );
    assert!(matches!(root_valuations(&ZPoly::zero()), Err(Error::ZeroPolynomial)));
}

#[test]
fn serde_round_trip() {
    let p = ZPoly::from_terms([
        (0, SPoly::from_terms([(rat(-1, 3), rat(2, 1)), (rat(1, 2), rat(-1, 7))])),
        (3, SPoly::one()),
    ]);
    let text = serde_json::to_string(&p).unwrap();
    let back: ZPoly = serde_json::from_str(&text).unwrap();
    assert_eq!(back, p);
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(a in spoly(), b in spoly()) {
        prop_assert_eq!((&a * &b).valuation(), a.valuation() + b.valuation());
    }

    #[test]
    fn valuation_is_ultrametric(a in spoly(), b in spoly()) {
        let sum = (&a + &b).valuation();
        let (va, vb) = (a.valuation(), b.valuation());
        let max = va.clone().max(vb.clone());
        prop_assert!(sum <= max);
        if va != vb {
            prop_assert_eq!(sum, max);
        }
    }

    #[test]
    fn ring_laws(a in spoly(), b in spoly(), c in spoly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn classes_match_brute_force(p in zpoly()) {
        let got = multiset(&root_valuations(&p).unwrap());
        // every class value is a slope between two points; try them all
        let pts = leading_points(&p);
        let mut cands = Vec::new();
        for x in &pts {
            for y in &pts {
                if x.0 < y.0 {
                    cands.push((&x.1 - &y.1) / Rational::from(y.0 - x.0));
                }
            }
        }
        prop_assert_eq!(got, brute_classes(&p, &cands));
    }

    #[test]
    fn multiplicities_sum_to_degree_span(p in zpoly()) {
        let np = newton_polygon(&p).unwrap();
        let total: usize = root_valuations(&p).unwrap().iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total as i64, p.degree().unwrap() - p.min_degree().unwrap());
        prop_assert_eq!(np.degree_span(), total as i64);
        for w in np.hull.windows(2) {
            prop_assert!(w[0].slope < w[1].slope);
        }
    }

    #[test]
    fn product_merges_classes(p in zpoly(), q in zpoly()) {
        let mut want = multiset(&root_valuations(&p).unwrap());
        for (v, k) in multiset(&root_valuations(&q).unwrap()) {
            *want.entry(v).or_insert(0) += k;
        }
        prop_assert_eq!(multiset(&root_valuations(&(&p * &q)).unwrap()), want);
    }

    #[test]
    fn nonzero_constant_scaling_keeps_classes(p in zpoly(), c in nonzero_coeff(), e in small_rational()) {
        let scaled = p.scale(&SPoly::monomial(e, c));
        prop_assert_eq!(root_valuations(&scaled).unwrap(), root_valuations(&p).unwrap());
    }

    #[test]
    fn z_scaling_shifts_classes(p in zpoly(), g in small_rational()) {
        let moved = root_valuations(&p.substitute_scaled(&g)).unwrap();
        let want: Vec<RootClass> = root_valuations(&p)
            .unwrap()
            .into_iter()
            .map(|c| RootClass { value: &c.value - &g, multiplicity: c.multiplicity })
            .collect();
        prop_assert_eq!(moved, want);
    }

    #[test]
    fn numeric_oracle_on_products_of_monomial_roots(
        exps in prop::collection::vec((0i64..=6, 1i64..=3), 1..4),
        signs in prop::collection::vec(prop::bool::ANY, 4),
    ) {
        // prod (z - c_j s^{e_j}) with distinct exponents
        let mut values: Vec<Rational> = exps.iter().map(|&(p, q)| rat(p, q)).collect();
        values.sort();
        values.dedup();
        let mut p = ZPoly::constant(SPoly::one());
        for (j, v) in values.iter().enumerate() {
            let c = if signs[j] { rat(-2, 1) } else { rat(3, 1) };
            let factor = ZPoly::from_terms([(0, SPoly::monomial(v.clone(), c)), (1, SPoly::one())]);
            p = &p * &factor;
        }
        let got = numeric_valuation_oracle(&p, 0.1, 0.05, OracleOptions::default()).unwrap();
        let exact: Vec<Rational> = values.iter().rev().cloned().collect();
        let mut est: Vec<Rational> = got.iter().map(|c| c.rational.clone()).collect();
        est.sort();
        est.reverse();
        prop_assert_eq!(est, exact);
        for c in &got {
            prop_assert!((c.value - c.rational.to_f64()).abs() < 1e-3);
        }
    }
}
