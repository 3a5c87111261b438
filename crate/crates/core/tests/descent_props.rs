mod common;

use common::{brute_force_solutions, torsion_by_search, Pt};
use fermat_descent::gfe::{bad_prime_set, sieve_primes};
use fermat_descent::quartic::belyi_eval;
use fermat_descent::stack::{scaled_euler_characteristic, SignatureKind};
use fermat_descent::{
    classify_signature, enumerate_primitive_solutions, euler_characteristic, is_stack_point,
    j_map, recover_solutions, torsion_points, twist_curve, CurvePoint, EnumerationOptions, Gfe,
    ProjPoint, SRing, Signature, WorkLimits,
};
use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;

fn sig(a: u32, b: u32, c: u32) -> Signature {
    Signature::new(a, b, c).unwrap()
}

fn ring(primes: &[i64]) -> SRing<i64> {
    SRing::new(primes.to_vec()).unwrap()
}

/// Strips the primes of `S` and tests for an n-th power by search.
fn is_power_away_from(v: i64, n: u32, primes: &[i64]) -> bool {
    let mut rest = v.abs();
    for &p in primes {
        while rest % p == 0 {
            rest /= p;
        }
    }
    (1i64..).take_while(|r| r.pow(n) <= rest).any(|r| r.pow(n) == rest)
}

fn subset(mask: u8) -> Vec<i64> {
    [2, 3, 5, 7]
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| *p)
        .collect()
}

fn even_sign_equivalent(a: [i64; 3], b: [i64; 3], exps: [u32; 3]) -> bool {
    (0..3).all(|i| a[i] == b[i] || (exps[i] % 2 == 0 && a[i] == -b[i]))
}

proptest! {
    #[test]
    fn euler_characteristic_identity(a in 2u32..=40, b in 2u32..=40, c in 2u32..=40) {
        let s = sig(a, b, c);
        let chi = euler_characteristic::<i64>(&s);
        let (a, b, c) = (a as i64, b as i64, c as i64);
        prop_assert_eq!(chi, Ratio::new(b * c + a * c + a * b - a * b * c, a * b * c));
        prop_assert_eq!(scaled_euler_characteristic::<i64>(&s), b * c + a * c + a * b - a * b * c);
        let class = classify_signature::<i64>(&s);
        let expected = match chi.numer().signum() {
            1 => SignatureKind::Spherical,
            0 => SignatureKind::Euclidean,
            _ => SignatureKind::Hyperbolic,
        };
        prop_assert_eq!(class.kind, expected);
        if let Some(deg) = class.degree {
            prop_assert_eq!(chi * deg, Ratio::from_integer(2));
        }
    }

    #[test]
    fn stack_points_match_power_search(s in -400i64..400, t in -400i64..400, a in 2u32..6, b in 2u32..6, c in 2u32..6, mask in 0u8..16) {
        prop_assume!((s, t) != (0, 0));
        let q = ProjPoint::new(s, t).unwrap();
        let primes = subset(mask);
        let cert = is_stack_point(&q, &sig(a, b, c), &ring(&primes), &WorkLimits::default()).unwrap();
        let (s, t) = (*q.s(), *q.t());
        let marked = s == 0 || t == 0 || s == t;
        let expected = marked
            || (is_power_away_from(s, a, &primes)
                && is_power_away_from(s - t, b, &primes)
                && is_power_away_from(t, c, &primes));
        prop_assert_eq!(cert.accepted(), expected);
    }

    #[test]
    fn stack_points_monotone_in_s(s in -300i64..300, t in -300i64..300, a in 2u32..5, b in 2u32..5, c in 2u32..5, small in 0u8..16, extra in 0u8..16) {
        prop_assume!((s, t) != (0, 0));
        let q = ProjPoint::new(s, t).unwrap();
        let lim = WorkLimits::default();
        let sg = sig(a, b, c);
        let r = ring(&subset(small));
        let big = ring(&subset(small | extra));
        prop_assert!(r.is_subring_of(&big));
        if is_stack_point(&q, &sg, &r, &lim).unwrap().accepted() {
            prop_assert!(is_stack_point(&q, &sg, &big, &lim).unwrap().accepted());
        }
    }
}

fn random_gfe() -> impl Strategy<Value = Gfe<i64>> {
    let coef = prop_oneof![-3i64..=-1, 1i64..=3];
    (proptest::array::uniform3(2u32..=5), proptest::array::uniform3(coef))
        .prop_map(|([a, b, c], coeffs)| Gfe::new(sig(a, b, c), coeffs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn enumerator_matches_brute_force(f in random_gfe()) {
        let bound = 12;
        let expected = brute_force_solutions(*f.coefficients(), f.signature().exponents(), bound);
        let found: Vec<[i64; 3]> = enumerate_primitive_solutions(&f, bound as u64, &EnumerationOptions::default())
            .iter()
            .map(|s| s.triple())
            .collect();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn sieve_and_threads_do_not_change_results(f in random_gfe()) {
        let base = EnumerationOptions::default();
        let plain = EnumerationOptions { sieve: false, parallel: false, ..base };
        let bound = 40;
        let a = enumerate_primitive_solutions(&f, bound, &base);
        prop_assert_eq!(&a, &enumerate_primitive_solutions(&f, bound, &plain));
        prop_assert_eq!(&a, &enumerate_primitive_solutions(&f, bound, &EnumerationOptions { parallel: false, ..base }));
        let l = f.signature().lcm();
        for p in sieve_primes(&f, &base) {
            prop_assert_eq!(p % l, 1);
        }
    }

    #[test]
    fn recovery_round_trip(f in random_gfe()) {
        let lim = WorkLimits::default();
        let r = bad_prime_set(&f, &lim).unwrap();
        let exps = f.signature().exponents();
        for sol in enumerate_primitive_solutions(&f, 25, &EnumerationOptions::default()) {
            let q = j_map(&f, &sol).unwrap();
            let back = recover_solutions(&q, &f, &r, true, &lim).unwrap();
            let hit = back.iter().any(|rec| {
                rec.coefficients == *f.coefficients()
                    && even_sign_equivalent(rec.solution, sol.triple(), exps)
            });
            prop_assert!(hit, "{sol} not recovered from {q}");
        }
    }
}

fn to_pt(p: &CurvePoint<BigInt>) -> Pt {
    match p {
        CurvePoint::Infinity => None,
        CurvePoint::Affine { u, v } => Some((u.clone(), v.clone())),
    }
}

#[test]
fn torsion_matches_search_and_is_closed() {
    for d in -60i64..=60 {
        if d == 0 {
            continue;
        }
        let e = twist_curve(BigInt::from(d)).unwrap();
        let tors = torsion_points(&e).unwrap();
        let mut ours: Vec<Pt> = tors.iter().map(to_pt).collect();
        let mut found = torsion_by_search(d, 4 * d.abs() + 4, 3);
        ours.sort();
        found.sort();
        assert_eq!(ours, found, "d = {d}");
        for p in &tors {
            assert!(tors.contains(&e.negate(p)));
            for q in &tors {
                assert!(tors.contains(&e.add(p, q)), "d = {d}: {p} + {q}");
            }
            assert_eq!(belyi_eval(&e, p), belyi_eval(&e, &e.negate(p)));
        }
    }
}

#[test]
fn belyi_images_are_u_squared_ratios() {
    for d in [-4i64, -1, 1, 2, 3, 12] {
        let e = twist_curve(BigInt::from(d)).unwrap();
        for p in fermat_descent::quartic::rational_points_bounded(&e, 12) {
            let q = belyi_eval(&e, &p);
            match &p {
                CurvePoint::Infinity => assert_eq!(q, ProjPoint::one()),
                CurvePoint::Affine { u, .. } => {
                    // s / t = u² / (u² - d)
                    let u2 = u * u;
                    let s = Ratio::from_integer(q.s().clone());
                    let t = Ratio::from_integer(q.t().clone());
                    assert_eq!(s * (&u2 - Ratio::from_integer(BigInt::from(d))), t * u2);
                }
            }
        }
    }
}
