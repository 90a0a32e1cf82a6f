use commute_lab::commute::{
    affine_energy, commute_count_measure, commute_count_product_measure, commute_count_set,
    commute_offdiag_nonzero_count, delta, theorem1_check, Algorithm,
};
use commute_lab::generators::{random_pencil_measure, sharp_example};
use commute_lab::measures::{product_measure_capped, uniform_on};
use commute_lab::oracle::{
    brute_affine_energy, brute_delta, brute_e, brute_m, brute_t_measure, brute_t_set, Caps,
};
use commute_lab::profiles::{energy_additive_set, energy_mult_set};
use commute_lab::{Scalar, ScalarSet};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational_set(max: usize) -> impl Strategy<Value = ScalarSet> {
    prop::collection::vec((-6i64..=6, 1i64..=3), 1..=max)
        .prop_map(|v| v.into_iter().map(|(n, d)| Scalar::ratio(n, d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engines_match_oracle_on_rationals(a in rational_set(4)) {
        let slow = Scalar::from_bigint(brute_t_set(&a, &Caps::default()).unwrap());
        for alg in Algorithm::ALL {
            prop_assert_eq!(&commute_count_set(&a, alg).unwrap().total, &slow, "{}", alg);
        }
    }

    #[test]
    fn counts_are_dilation_invariant(a in rational_set(5), num in 1i64..=5, den in 1i64..=4, neg: bool) {
        let lambda = Scalar::ratio(if neg { -num } else { num }, den);
        let b = a.dilate(&lambda);
        let t = |s: &ScalarSet| commute_count_set(s, Algorithm::ZeroPattern).unwrap().total;
        prop_assert_eq!(t(&a), t(&b));
        prop_assert_eq!(energy_additive_set(&a), energy_additive_set(&b));
        prop_assert_eq!(commute_offdiag_nonzero_count(&a), commute_offdiag_nonzero_count(&b));
    }

    #[test]
    fn uniform_product_measure_normalizes_set_count(a in rational_set(5)) {
        let n = Scalar::from_int(a.len() as i64);
        let t = commute_count_set(&a, Algorithm::Commutant).unwrap().total;
        let nu = uniform_on(&a).unwrap();
        prop_assert_eq!(commute_count_product_measure(&nu).total, t / n.pow(8));
    }

    #[test]
    fn affine_energy_matches_group_oracle(a in rational_set(4)) {
        prop_assume!(!a.without_zero().is_empty());
        let fast = affine_energy(&a).unwrap();
        prop_assert_eq!(&brute_affine_energy(&a, &Caps::default()).unwrap(), &fast);
        prop_assert_eq!(commute_offdiag_nonzero_count(&a), fast);
    }

    #[test]
    fn pencil_measures_satisfy_bound(atoms in 1usize..=8, seed: u64) {
        let mu = random_pencil_measure(atoms, 2, seed).unwrap();
        let c = theorem1_check(&mu).unwrap();
        prop_assert!(c.holds, "T = {}, δ = {}", c.t, c.delta);
        prop_assert_eq!(c.t, brute_t_measure(&mu, &Caps::default()).unwrap());
    }
}

#[test]
fn small_product_measures_match_oracle_delta() {
    for v in [&[1][..], &[0, 1], &[1, 2], &[-1, 1], &[0, 2]] {
        let a = ScalarSet::from_ints(v.iter().copied());
        let mu = product_measure_capped(&uniform_on(&a).unwrap(), 12).unwrap();
        assert_eq!(
            delta(&mu).unwrap(),
            brute_delta(&mu, &Caps::default()).unwrap(),
            "{v:?}"
        );
    }
}

#[test]
fn sharp_family_against_oracle() {
    for n in 2..=3 {
        let mu = sharp_example(n).unwrap();
        let caps = Caps::default();
        assert_eq!(
            commute_count_measure(&mu),
            brute_t_measure(&mu, &caps).unwrap()
        );
        assert_eq!(delta(&mu).unwrap(), brute_delta(&mu, &caps).unwrap());
    }
}

#[test]
fn energies_of_signed_sets() {
    let a = ScalarSet::from_ints([-2, -1, 1, 2]);
    let caps = Caps::default();
    // Quotients ±1 four times each, ±2 and ±1/2 twice each.
    assert_eq!(energy_mult_set(&a), BigInt::from(48));
    assert_eq!(
        Scalar::from_bigint(energy_mult_set(&a)),
        brute_m(&a, &caps).unwrap()
    );
    assert_eq!(
        Scalar::from_bigint(energy_additive_set(&a)),
        brute_e(&a, &caps).unwrap()
    );
}
