//! Randomized algebraic identities for the polynomial kernel.

use ivar_core::algebra::{exact_divide, gcd, parse_poly, resultant, roots, vars_of, Cx, MPoly, Vars};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const CASES: u32 = 10_000;

fn vars() -> Vars {
    vars_of(&["x", "y", "z"])
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=9, 1i64..=4, any::<bool>())
        .prop_map(|(n, d, neg)| BigRational::new(BigInt::from(if neg { -n } else { n }), BigInt::from(d)))
}

/// Up to four terms in x, y, z with exponents below 3.
fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), small_rational()), 0..5)
        .prop_map(|terms| MPoly::from_terms(vars(), terms))
}

/// Degree exactly `deg` in x, coefficients linear in y.
fn poly_in_x(deg: usize) -> impl Strategy<Value = MPoly> {
    (
        prop::collection::vec((small_rational(), small_rational()), deg),
        nonzero_rational(),
    )
        .prop_map(move |(lower, lead)| {
            let mut terms = vec![(vec![deg as u32, 0, 0], lead)];
            for (k, (c0, c1)) in lower.into_iter().enumerate() {
                terms.push((vec![k as u32, 0, 0], c0));
                terms.push((vec![k as u32, 1, 0], c1));
            }
            MPoly::from_terms(vars(), terms)
        })
}

fn any_poly_in_x() -> impl Strategy<Value = MPoly> {
    (1usize..=3).prop_flat_map(poly_in_x)
}

fn low_poly_in_x() -> impl Strategy<Value = MPoly> {
    (1usize..=2).prop_flat_map(poly_in_x)
}

fn nonzero_poly() -> impl Strategy<Value = MPoly> {
    (poly(), prop::collection::vec(0u32..3, 3), nonzero_rational())
        .prop_map(|(p, e, c)| &p + &MPoly::from_terms(vars(), [(e, c)]))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn point() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(small_rational(), 3)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn addition_commutes_and_associates(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &MPoly::zero(vars()), a.clone());
    }

    #[test]
    fn multiplication_is_a_commutative_ring_product(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &MPoly::one(vars()), a.clone());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly(), b in poly(), p in point()) {
        let (va, vb) = (a.eval_exact(&p).unwrap(), b.eval_exact(&p).unwrap());
        prop_assert_eq!((&a * &b).eval_exact(&p).unwrap(), &va * &vb);
        prop_assert_eq!((&a - &b).eval_exact(&p).unwrap(), &va - &vb);
    }

    #[test]
    fn display_parses_back(a in poly()) {
        prop_assert_eq!(parse_poly(&a.to_string(), &vars()).unwrap(), a);
    }

    #[test]
    fn product_divides_exactly(a in poly(), b in nonzero_poly()) {
        prop_assert_eq!(exact_divide(&(&a * &b), &b).unwrap(), a);
    }

    #[test]
    fn gcd_contains_common_factor(a in any_poly_in_x(), b in any_poly_in_x(), c in any_poly_in_x()) {
        let g = gcd(&(&a * &c), &(&b * &c));
        prop_assert!(exact_divide(&g, &c).is_ok(), "gcd {} misses {}", g, c);
        prop_assert!(exact_divide(&(&a * &c), &g).is_ok());
    }

    #[test]
    fn resultant_is_antisymmetric(p in any_poly_in_x(), q in any_poly_in_x()) {
        let pq = resultant(&p, &q, "x").unwrap();
        let qp = resultant(&q, &p, "x").unwrap();
        let sign = (p.degree_in("x") * q.degree_in("x")) % 2 == 1;
        prop_assert_eq!(pq, if sign { -qp } else { qp });
    }

    #[test]
    fn resultant_is_multiplicative(f in low_poly_in_x(), g in low_poly_in_x(), h in any_poly_in_x()) {
        let lhs = resultant(&(&f * &g), &h, "x").unwrap();
        let rhs = &resultant(&f, &h, "x").unwrap() * &resultant(&g, &h, "x").unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_vanishes_on_common_factor(p in low_poly_in_x(), q in low_poly_in_x(), r in low_poly_in_x()) {
        prop_assert!(resultant(&(&p * &r), &(&q * &r), "x").unwrap().is_zero());
    }

    #[test]
    fn resultant_with_linear_factor_evaluates(a in small_rational(), q in any_poly_in_x()) {
        let lin = &MPoly::var(vars(), "x").unwrap() - &MPoly::constant(vars(), a.clone());
        let r = resultant(&lin, &q, "x").unwrap();
        let x = MPoly::constant(vars(), a);
        prop_assert_eq!(r, q.subst("x", &x));
    }

    #[test]
    fn resultant_commutes_with_specialization(p in any_poly_in_x(), q in any_poly_in_x(), y in small_rational()) {
        let at = |m: &MPoly| m.specialize(|n| (n == "y").then(|| y.clone()));
        let (ps, qs) = (at(&p), at(&q));
        // Specializing first is only comparable when no leading coefficient drops.
        prop_assume!(ps.degree_in("x") == p.degree_in("x") && qs.degree_in("x") == q.degree_in("x"));
        prop_assert_eq!(at(&resultant(&p, &q, "x").unwrap()), resultant(&ps, &qs, "x").unwrap());
    }
}

fn grid_cx() -> impl Strategy<Value = Cx> {
    (-48i32..=48, -48i32..=48).prop_map(|(re, im)| Cx::new(re as f64 / 16.0, im as f64 / 16.0))
}

/// Ascending coefficients of `lead · Π (z − r)`.
fn from_roots(rs: &[Cx], lead: Cx) -> Vec<Cx> {
    let mut c = vec![lead];
    for r in rs {
        let mut next = vec![Cx::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c
}

fn term_scale(c: &[Cx], z: Cx) -> f64 {
    c.iter().rev().fold(0.0, |acc, ck| acc * z.norm() + ck.norm())
}

fn eval(c: &[Cx], z: Cx) -> Cx {
    c.iter().rev().fold(Cx::new(0.0, 0.0), |acc, ck| acc * z + ck)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn roots_satisfy_the_residual_bound(rs in prop::collection::vec(grid_cx(), 1..7), lead in grid_cx()) {
        prop_assume!(lead.norm() > 0.1);
        let c = from_roots(&rs, lead);
        let found = roots(&c, 1e-9).unwrap();
        prop_assert_eq!(found.len(), rs.len());
        for z in &found {
            prop_assert!(eval(&c, *z).norm() <= 1e-9 * (1.0 + term_scale(&c, *z)), "root {} of {:?}", z, c);
        }
    }

    #[test]
    fn separated_roots_are_recovered(rs in prop::collection::vec(grid_cx(), 1..7), lead in grid_cx()) {
        prop_assume!(lead.norm() > 0.1);
        let separated = rs.iter().enumerate().all(|(i, a)| rs[..i].iter().all(|b| (a - b).norm() >= 0.25));
        prop_assume!(separated);
        let found = roots(&from_roots(&rs, lead), 1e-9).unwrap();
        for r in &rs {
            let d = found.iter().map(|z| (z - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= 1e-7 * (1.0 + r.norm()), "{} missed by {:e}", r, d);
        }
    }

    #[test]
    fn root_sum_matches_coefficients(rs in prop::collection::vec(grid_cx(), 1..7)) {
        let c = from_roots(&rs, Cx::new(1.0, 0.0));
        let found = roots(&c, 1e-9).unwrap();
        let sum: Cx = found.iter().sum();
        let want: Cx = rs.iter().sum();
        let scale: f64 = 1.0 + rs.iter().map(|r| r.norm()).sum::<f64>();
        // Clustered roots are only located to about the cube root of precision,
        // but their sum stays accurate.
        prop_assert!((sum - want).norm() <= 1e-6 * scale, "{} vs {}", sum, want);
    }
}
