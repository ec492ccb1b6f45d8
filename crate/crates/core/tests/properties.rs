use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;

use elliptic_core::spin::act;
use elliptic_core::{
    classify, contact_verdicts, FamilySpec, FieldElement, Side, SpinGroup, SpinPair, UnitQuaternion,
};

const CONDUCTORS: [u32; 8] = [3, 4, 5, 8, 12, 15, 20, 24];

fn degree(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// Random element with small rational coordinates; `scale` pushes some of
/// them past machine-word size.
fn element(n: u32) -> impl Strategy<Value = FieldElement> {
    let d = degree(n);
    (prop::collection::vec((-9i64..=9, 1i64..=6), d), any::<bool>()).prop_map(move |(cs, big)| {
        let lift = if big { BigInt::from(10).pow(25u32) } else { BigInt::one() };
        let coeffs: Vec<BigRational> =
            cs.iter().map(|&(a, b)| BigRational::new(BigInt::from(a) * &lift, BigInt::from(b))).collect();
        FieldElement::from_coeffs(n, &coeffs).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (FieldElement, FieldElement, FieldElement)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (element(n), element(n), element(n)))
}

fn hash_of(x: &FieldElement) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

fn close(a: (f64, f64), b: (f64, f64), scale: f64) -> bool {
    (a.0 - b.0).abs() <= 1e-9 * scale && (a.1 - b.1).abs() <= 1e-9 * scale
}

fn magnitude(x: &FieldElement) -> f64 {
    let (re, im) = x.to_complex();
    1.0 + re.abs() + im.abs()
}

/// Products of a few standard units in Q(zeta_24).
fn unit() -> impl Strategy<Value = UnitQuaternion> {
    prop::collection::vec(0usize..5, 1..4).prop_map(|picks| {
        let n = 24;
        let mut q = UnitQuaternion::one(n);
        for p in picks {
            let f = match p {
                0 => UnitQuaternion::root_of_unity(24, n).unwrap(),
                1 => UnitQuaternion::j(n),
                2 => UnitQuaternion::hurwitz(n).unwrap(),
                3 => UnitQuaternion::octahedral_unit(n).unwrap(),
                _ => UnitQuaternion::i(n).unwrap(),
            };
            q = &q * &f;
        }
        q
    })
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Left), Just(Side::Right)]
}

fn small_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (3u32..=24, side()).prop_map(|(n, side)| FamilySpec::Cyclic { n, side }),
        (2u32..=6, side()).prop_map(|(n, side)| FamilySpec::Quaternionic { n, side }),
        side().prop_map(|side| FamilySpec::BinT { side }),
        side().prop_map(|side| FamilySpec::BinO { side }),
        prop::sample::select(vec![5u32, 7]).prop_map(|m| FamilySpec::ProductWithCyclic {
            base: Box::new(FamilySpec::BinT { side: Side::Left }),
            m
        }),
        Just(FamilySpec::DiagonalQ { m: 1, n: 3, k: 3 }),
        Just(FamilySpec::DiagonalT { m: 1, k: 2 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn equal_values_hash_equally((a, b, _) in triple()) {
        let round = &(&a + &b) - &b;
        prop_assert_eq!(hash_of(&round), hash_of(&a));
        let big = FieldElement::from_rational(a.conductor(), &BigRational::from_integer(BigInt::from(10).pow(30u32)));
        let back = (&a * &big).try_div(&big).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(hash_of(&back), hash_of(&a));
    }

    #[test]
    fn evaluation_is_a_homomorphism((a, b, _) in triple()) {
        let (x, y) = (a.to_complex(), b.to_complex());
        let scale = magnitude(&a) * magnitude(&b);
        prop_assert!(close((&a + &b).to_complex(), (x.0 + y.0, x.1 + y.1), scale));
        prop_assert!(close((&a * &b).to_complex(), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0), scale));
        prop_assert!(close(a.conj().to_complex(), (x.0, -x.1), scale));
    }

    #[test]
    fn embedding_respects_operations((a, b, _) in triple(), factor in 1u32..=3) {
        let target = a.conductor() * factor;
        let (ea, eb) = (a.embed(target).unwrap(), b.embed(target).unwrap());
        prop_assert_eq!((&a * &b).embed(target).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).embed(target).unwrap(), &ea + &eb);
        prop_assert!(close(ea.to_complex(), a.to_complex(), magnitude(&a)));
    }

    #[test]
    fn json_round_trip((a, _, _) in triple()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: FieldElement = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn unit_products_stay_units(p in unit(), q in unit()) {
        let pq = &p * &q;
        prop_assert!(pq.norm_sq().is_one());
        prop_assert!((&pq * &pq.conj()).is_one());
        prop_assert_eq!(&pq.conj(), &(&q.conj() * &p.conj()));
    }

    #[test]
    fn action_ignores_the_kernel(l in unit(), r in unit(), x in unit()) {
        let g = SpinPair::new(l, r).unwrap();
        prop_assert_eq!(act(&g.neg(), &x).unwrap(), act(&g, &x).unwrap());
        prop_assert!(act(&g, &x).unwrap().norm_sq().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_is_idempotent(spec in small_family()) {
        let g = spec.build().unwrap();
        let again = SpinGroup::closure(g.conductor(), g.elements()).unwrap();
        prop_assert_eq!(again.order(), g.order());
        prop_assert!(g.elements().iter().all(|e| again.contains(e)));
    }

    #[test]
    fn orientation_swap_is_an_involution(spec in small_family()) {
        let g = spec.build().unwrap();
        let back = g.swap_orientation().swap_orientation();
        prop_assert_eq!(back.order(), g.order());
        prop_assert!(g.elements().iter().all(|e| back.contains(e)));
        prop_assert_eq!(classify(&back).unwrap(), classify(&g).unwrap());
    }

    #[test]
    fn swap_toggles_normalization(spec in small_family()) {
        let g = spec.build().unwrap();
        let res = classify(&g).unwrap();
        let swapped = classify(&g.swap_orientation()).unwrap();
        prop_assert_eq!(swapped.case, res.case);
        prop_assert_eq!((swapped.n, swapped.m, swapped.k), (res.n, res.m, res.k));
        if res.left_order != res.right_order {
            prop_assert_ne!(swapped.swapped, res.swapped);
        }
    }

    #[test]
    fn verdicts_exchange_under_swap(spec in small_family()) {
        let g = spec.build().unwrap();
        let a = contact_verdicts(&g).unwrap();
        let b = contact_verdicts(&g.swap_orientation()).unwrap();
        prop_assert_eq!(a.plus_orientation.verdict, b.minus_orientation.verdict);
        prop_assert_eq!(a.minus_orientation.verdict, b.plus_orientation.verdict);
        prop_assert_eq!(&a.framing.plus, &b.framing.minus);
        prop_assert_eq!(a.h1, b.h1);
    }

    #[test]
    fn abelianization_order_divides_group_order(spec in small_family()) {
        let g = spec.build().unwrap();
        let h1 = g.abelianization().order();
        prop_assert_eq!(g.order() as u64 % h1, 0);
        if g.is_abelian() {
            prop_assert_eq!(h1, g.order() as u64);
        }
    }

    #[test]
    fn free_groups_have_no_fixed_points(spec in small_family()) {
        let g = spec.build().unwrap();
        prop_assert!(g.is_free().is_free());
        prop_assert!(g.elements().iter().filter(|e| !e.acts_trivially()).all(|e| !e.fixes_a_point()));
    }
}

#[test]
fn hamilton_relations() {
    let n = 4;
    let (i, j, k) = (UnitQuaternion::i(n).unwrap(), UnitQuaternion::j(n), UnitQuaternion::k(n).unwrap());
    let minus_one = UnitQuaternion::minus_one(n);
    assert_eq!(&i * &j, k);
    assert_eq!(&j * &k, i);
    assert_eq!(&k * &i, j);
    assert_eq!(&i * &i, minus_one);
    assert_eq!(&(&i * &j) * &k, minus_one);
}
