//! Structural laws checked on random inputs.

use abelkit::classify::classify;
use abelkit::hom::{is_fully_coinvariant, is_fully_invariant, subgroups};
use abelkit::ring::end_ring;
use abelkit::{
    compose, direct_sum, enumerate_homs, factorize, group_from_presentation, hom_group, kernel,
    quotient, FgAbGroup, IntegerMatrix, Morphism,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn cyclic_sum(free: usize, orders: &[u64]) -> FgAbGroup {
    let orders: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
    FgAbGroup::from_cyclic_decomposition(free, &orders).unwrap()
}

fn small_finite() -> impl Strategy<Value = FgAbGroup> {
    proptest::collection::vec(2u64..7, 0..3)
        .prop_map(|orders| cyclic_sum(0, &orders))
}

fn any_group() -> impl Strategy<Value = FgAbGroup> {
    (0usize..3, proptest::collection::vec(1u64..13, 0..3))
        .prop_map(|(free, orders)| cyclic_sum(free, &orders))
}

/// A random morphism `M -> N` between small finite groups.
fn small_morphism() -> impl Strategy<Value = Morphism> {
    (small_finite(), small_finite(), any::<u64>()).prop_map(|(m, n, seed)| {
        let space = enumerate_homs(&m, &n, 1 << 20).unwrap();
        space.morphism_at(seed % space.size())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_sum_is_associative_and_commutative(a in any_group(), b in any_group(), c in any_group()) {
        prop_assert_eq!(direct_sum(&a, &b), direct_sum(&b, &a));
        prop_assert_eq!(direct_sum(&direct_sum(&a, &b), &c), direct_sum(&a, &direct_sum(&b, &c)));
    }

    #[test]
    fn presentation_is_invariant(
        entries in proptest::collection::vec(-6i64..=6, 6),
        k in -3i64..=3,
        l in -3i64..=3,
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(<[i64]>::to_vec).collect();
        let a = IntegerMatrix::from_rows(&rows, 3).unwrap();
        let base = group_from_presentation(&a, 2).unwrap();
        prop_assert_eq!(group_from_presentation(&a.select_columns(&[1, 2, 0]), 2).unwrap(), base.clone());
        let extra: Vec<BigInt> = (0..2).map(|i| &a[(i, 0)] * k + &a[(i, 1)] * l).collect();
        let aug = a.hconcat(&IntegerMatrix::from_columns(2, &[extra]));
        prop_assert_eq!(group_from_presentation(&aug, 2).unwrap(), base);
    }

    #[test]
    fn hom_size_matches_enumeration(m in small_finite(), n in small_finite()) {
        let space = enumerate_homs(&m, &n, 1 << 20).unwrap();
        prop_assert_eq!(hom_group(&m, &n).size.to_u64(), Some(space.size()));
        prop_assert_eq!(space.iter().count() as u64, space.size());
    }

    /// `f` factors as coimage map, induced isomorphism, image embedding, and
    /// the kernel composes to zero.
    #[test]
    fn diagram_is_exact(f in small_morphism()) {
        let fac = factorize(&f).unwrap();
        prop_assert!(fac.induced.is_injective().unwrap() && fac.induced.is_surjective().unwrap());
        let rebuilt = compose(fac.image.embedding(), &compose(&fac.induced, &fac.coimage_map).unwrap()).unwrap();
        prop_assert_eq!(&rebuilt, &f);
        prop_assert!(compose(&f, kernel(&f).unwrap().embedding()).unwrap().is_zero());
    }

    /// Full invariance of a subgroup agrees with full coinvariance of the
    /// quotient map.
    #[test]
    fn invariance_matches_coinvariance(m in small_finite(), pick in any::<usize>()) {
        let subs = subgroups(&m).unwrap();
        let k = &subs[pick % subs.len()];
        let (_, c) = quotient(k).unwrap();
        prop_assert_eq!(is_fully_invariant(k).unwrap(), is_fully_coinvariant(&c).unwrap());
    }

    #[test]
    fn classification_is_isomorphism_invariant(a in any_group(), b in any_group()) {
        let ab = direct_sum(&a, &b);
        let text = format!("{b} + {a}");
        let reparsed: FgAbGroup = text.parse().unwrap();
        prop_assert_eq!(classify(&ab), classify(&reparsed));
    }

    #[test]
    fn endomorphism_rings_satisfy_axioms(m in small_finite()) {
        let ring = end_ring(&m, 1 << 20).unwrap();
        prop_assert!(ring.check_axioms().is_ok());
        prop_assert_eq!(ring.size() as u64, hom_group(&m, &m).size.to_u64().unwrap());
    }
}
