//! Property tests for the algebra layers, each checked against an
//! independent computation where one exists.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use constancy::certify::{check_constancy_criterion, CertifyOptions, H1, H4};
use constancy::curves::{CurveBackend, EllipticElement, EllipticModel, FrobeniusData};
use constancy::poly::{discriminant, integer_poly_discriminant, resultant, Algebra, Poly};
use constancy::scalar::is_prime;
use constancy::search::{constant_solution_xs, search_rational, SearchOptions};
use constancy::valuations::{dominance_check, power_difference_check, PolyDegree};
use constancy::{Fq, GaloisField, MPoly};

fn gf(l: u64, s: usize) -> GaloisField {
    GaloisField::new(l, s, None).unwrap()
}

fn field_strategy() -> impl Strategy<Value = GaloisField> {
    prop::sample::select(vec![(2, 1), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2)]).prop_map(|(l, s)| gf(l, s))
}

fn poly_from(field: &GaloisField, idx: &[u64]) -> Poly<Fq> {
    Poly::new(field.clone(), idx.iter().map(|&i| field.from_index(i % field.order())).collect())
}

fn field_and_polys(n: usize, max_len: usize) -> impl Strategy<Value = (GaloisField, Vec<Poly<Fq>>)> {
    field_strategy().prop_flat_map(move |f| {
        let q = f.order();
        let polys = prop::collection::vec(prop::collection::vec(0..q, 0..=max_len), n);
        (Just(f.clone()), polys).prop_map(|(f, ps)| {
            let polys = ps.iter().map(|p| poly_from(&f, p)).collect();
            (f, polys)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_field_matches_integer_arithmetic(l in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), a in 0u64..1000, b in 0u64..1000) {
        let f = gf(l, 1);
        let (x, y) = (f.int(a as i64), f.int(b as i64));
        prop_assert_eq!((x.clone() + y.clone()).index(), (a + b) % l);
        prop_assert_eq!((x.clone() * y.clone()).index(), (a * b) % l);
        prop_assert_eq!((x - y).index(), (a % l + l - b % l) % l);
    }

    #[test]
    fn extension_field_laws(f in field_strategy(), a in 0u64..4096, b in 0u64..4096, c in 0u64..4096) {
        let q = f.order();
        let (a, b, c) = (f.from_index(a % q), f.from_index(b % q), f.from_index(c % q));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.pow(q), a.clone());
        prop_assert_eq!((a.clone() + b.clone()).frobenius(1), a.frobenius(1) + b.frobenius(1));
        prop_assert_eq!(a.frobenius_inverse().frobenius(1), a.clone());
        if let Some(inv) = a.inverse() {
            prop_assert!((a * inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn division_with_remainder((f, ps) in field_and_polys(2, 8)) {
        let (a, b) = (&ps[0], &ps[1]);
        match a.divrem(b) {
            Ok((quo, rem)) => {
                prop_assert_eq!(&(&quo * b) + &rem, a.clone());
                prop_assert!(rem.is_zero() || rem.degree() < b.degree());
            }
            Err(_) => prop_assert!(b.is_zero()),
        }
        let g = a.gcd(b);
        if !g.is_zero() {
            prop_assert!(a.rem(&g).is_zero() && b.rem(&g).is_zero());
            prop_assert!(g.lc().is_one());
        }
        let _ = f;
    }

    #[test]
    fn factorization_reassembles((_f, ps) in field_and_polys(1, 10)) {
        let p = &ps[0];
        prop_assume!(!p.is_zero());
        let fac = p.factor().unwrap();
        prop_assert_eq!(fac.expand(), p.clone());
        for (g, _) in &fac.nonlinear {
            prop_assert!(g.is_irreducible() && g.lc().is_one());
        }
    }

    #[test]
    fn roots_agree_with_evaluation((f, ps) in field_and_polys(1, 8)) {
        let p = &ps[0];
        prop_assume!(!p.is_zero());
        let brute: Vec<Fq> = f.elements().filter(|a| p.eval(a).is_zero()).collect();
        prop_assert_eq!(p.roots(), brute.clone());
        let fac = p.factor().unwrap();
        let from_fac: Vec<Fq> = fac.linear_roots.iter().map(|r| r.0.clone()).collect();
        prop_assert_eq!(from_fac, brute);
    }

    #[test]
    fn resultant_matches_product_over_roots(
        f in field_strategy(),
        roots in prop::collection::vec(0u64..64, 1..5),
        lead in 1u64..64,
        g in prop::collection::vec(0u64..64, 0..6),
    ) {
        let q = f.order();
        let lc = f.from_index(1 + lead % (q - 1));
        let rs: Vec<Fq> = roots.iter().map(|&r| f.from_index(r % q)).collect();
        let mut p = Poly::constant(lc.clone());
        for r in &rs {
            p = &p * &(&Poly::x(&f) - &Poly::constant(r.clone()));
        }
        let g = poly_from(&f, &g);
        prop_assume!(!g.is_zero());
        let dg = g.degree().unwrap() as u64;
        let expected = rs.iter().fold(lc.pow(dg), |acc, r| acc * g.eval(r));
        prop_assert_eq!(resultant(&p, &g).unwrap(), expected);
        let repeated = (0..rs.len()).any(|i| rs[..i].contains(&rs[i]));
        prop_assert_eq!(discriminant(&p).unwrap().is_zero(), repeated);
    }

    #[test]
    fn quadratic_integer_discriminant(a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        prop_assume!(a != 0);
        let p = Poly::new((), vec![BigInt::from(c), BigInt::from(b), BigInt::from(a)]);
        prop_assert_eq!(integer_poly_discriminant(&p).unwrap(), BigInt::from(b * b - 4 * a * c));
    }

    #[test]
    fn nth_root_inverts_power((f, ps) in field_and_polys(1, 5), n in 1u64..8) {
        let y = &ps[0];
        let z = y.pow(n);
        let r = z.nth_root(n);
        prop_assert!(r.is_some());
        let r = r.unwrap();
        prop_assert_eq!(r.pow(n), z);
        if !y.is_zero() {
            let u = y.lc() * r.lc().inverse().unwrap();
            prop_assert_eq!(r.scale(&u), y.clone());
            prop_assert!(u.pow(n).is_one());
        }
        let _ = f;
    }

    #[test]
    fn degree_dominance_and_power_law((f, ps) in field_and_polys(2, 6), q in prop::sample::select(vec![2u64, 3, 5])) {
        let v = PolyDegree::new(&f);
        let (a, b) = (&ps[0], &ps[1]);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let dom = dominance_check(&v, a, b).unwrap();
        prop_assert!(dom.holds);
        if q % f.characteristic != 0 && a != b && a.pow(q) != b.pow(q) {
            let r = power_difference_check(&v, a, b, q).unwrap();
            prop_assert!(r.holds, "{:?}", r);
        }
    }

    #[test]
    fn multivariate_degrees_add(
        a in prop::collection::vec((0u32..3, 0u32..3, 1u64..3), 1..5),
        b in prop::collection::vec((0u32..3, 0u32..3, 1u64..3), 1..5),
    ) {
        let f = gf(3, 1);
        let mk = |t: &[(u32, u32, u64)]| {
            MPoly::from_terms(&f, 2, t.iter().map(|&(i, j, c)| (vec![i, j], f.int(c as i64)))).unwrap()
        };
        let (x, y) = (mk(&a), mk(&b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let prod = x.mul_ref(&y);
        for var in 0..2 {
            prop_assert_eq!(prod.per_var_degree(var).unwrap(), x.per_var_degree(var).unwrap() + y.per_var_degree(var).unwrap());
        }
        prop_assert_eq!(x.mul_ref(&y), y.mul_ref(&x));
    }

    #[test]
    fn elliptic_pole_orders_add(
        a1 in prop::collection::vec(0u64..5, 0..4), b1 in prop::collection::vec(0u64..5, 0..3),
        a2 in prop::collection::vec(0u64..5, 0..4), b2 in prop::collection::vec(0u64..5, 0..3),
    ) {
        let f = gf(5, 1);
        let m = Arc::new(EllipticModel::from_ints(&f, [0, 0, 0, 1, 1]).unwrap());
        let u = EllipticElement::new(&m, poly_from(&f, &a1), poly_from(&f, &b1));
        let w = EllipticElement::new(&m, poly_from(&f, &a2), poly_from(&f, &b2));
        prop_assume!(!u.is_zero() && !w.is_zero());
        let uw = u.mul_ref(&w);
        prop_assert_eq!(uw.pole_order().unwrap(), u.pole_order().unwrap() + w.pole_order().unwrap());
        prop_assert_eq!(uw.clone(), w.mul_ref(&u));
        let v = EllipticElement::y(&m);
        prop_assert_eq!(uw.mul_ref(&v), u.mul_ref(&w.mul_ref(&v)));
    }

    #[test]
    fn search_boxes_are_monotone(
        l in prop::sample::select(vec![3u64, 5]),
        c in prop::collection::vec(0u64..5, 1..4),
        n in prop::sample::select(vec![2u64, 3]),
    ) {
        let f = poly_from(&gf(l, 1), &c);
        prop_assume!(!f.is_zero());
        let o = SearchOptions::default();
        let mut prev = search_rational(&f, n, 0, &o).unwrap();
        let xs: Vec<String> = constant_solution_xs(&f, n).iter().map(|a| a.to_text()).collect();
        let mut from_search: Vec<String> = prev.solutions.iter().map(|s| s.x.clone()).collect();
        from_search.dedup();
        prop_assert_eq!(from_search, xs);
        for d in 1..=2 {
            let next = search_rational(&f, n, d, &o).unwrap();
            for s in &prev.solutions {
                prop_assert!(next.solutions.contains(s));
            }
            prev = next;
        }
    }
}

#[test]
fn class_group_shape() {
    for l in [2u64, 3, 5, 7] {
        let f = gf(l, 1);
        for a4 in 0..l as i64 {
            for a6 in 0..l as i64 {
                for a1 in 0..2 {
                    let Ok(m) = EllipticModel::from_ints(&f, [a1, 0, 1 - a1, a4, a6]) else { continue };
                    let g = m.class_group_structure(1 << 20).unwrap();
                    let mut inv = vec![1u64; 2 - g.invariant_factors.len()];
                    inv.extend(&g.invariant_factors);
                    let (n1, n2) = (inv[0], inv[1]);
                    assert_eq!(g.torsion_card(g.h), g.h);
                    assert_eq!(n1 * n2, g.h);
                    assert_eq!(n2 % n1, 0);
                    assert_eq!((l - 1) % n1, 0, "Weil pairing bound");
                    let frob = FrobeniusData::elliptic(l, g.h);
                    assert!(frob.satisfies_hasse());
                }
            }
        }
    }
}

#[test]
fn tower_valuations_match_direct_class_numbers() {
    let f = gf(5, 1);
    let m = EllipticModel::from_ints(&f, [0, 0, 0, 1, 1]).unwrap();
    let frob = FrobeniusData::elliptic(5, m.count_points(1 << 20).unwrap().0);
    for (p, q) in [(2u64, 3u64), (3, 2), (2, 2), (3, 3)] {
        for n in 0..=6u32 {
            let h = frob.constant_ext_class_number(p.pow(n));
            let mut direct = 0;
            let mut h = h;
            let qb = BigInt::from(q);
            while &h % &qb == BigInt::from(0) {
                h /= &qb;
                direct += 1;
            }
            assert_eq!(frob.level_valuation(p, q, n).unwrap(), direct, "p={p} q={q} n={n}");
        }
    }
}

/// For a fixed split `f` with at least two roots, the primes `q ≤ 50`
/// refused by the certifier are exactly the characteristic and the `q`
/// that violate the exponent condition.
#[test]
fn refusals_are_exactly_exponent_violations() {
    let cases = [(5u64, "X^2*(X-1)^3"), (7, "X^6*(X-1)^2*(X-2)^3"), (3, "X*(X-1)^5"), (5, "(X-1)^10*(X-2)^15*(X-3)^6")];
    for (l, text) in cases {
        let field = gf(l, 1);
        let f = constancy::parse::parse_poly(&field, text, "X").unwrap();
        let exps: Vec<u32> = f.factor().unwrap().linear_roots.iter().map(|r| r.1).collect();
        for q in (2..=50).filter(|&q| is_prime(q)) {
            let cert = check_constancy_criterion(&CurveBackend::Rational(field.clone()), &f, q, &CertifyOptions::default()).unwrap();
            let h4_oracle = exps.iter().filter(|&&e| e as u64 % q != 0).count() >= 2;
            let failed: Vec<&str> = cert.violated();
            let expected: Vec<&str> = [(q == l, H1), (!h4_oracle, H4)].iter().filter(|c| c.0).map(|c| c.1).collect();
            assert_eq!(failed, expected, "{text} over GF({l}), q = {q}");
            assert_eq!(cert.certified(), expected.is_empty());
        }
    }
}
