//! Commuting-pair counts `T`, the plane statistic `δ`, and affine energies.
//!
//! Three independent engines compute `T` for sets and product measures:
//! [`Algorithm::Pairwise`] enumerates pairs, [`Algorithm::ZeroPattern`]
//! sums the 64-pattern table of [`zero_pattern`], and
//! [`Algorithm::Commutant`] aggregates `μ(span{I, X})` over classes of `X`.

mod affine;
mod commutant;
mod delta;
mod pairwise;
pub mod zero_pattern;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::measures::{AsWeights, MatrixMeasure, ScalarMeasure, ScalarSet, Weights};

pub use affine::{affine_energy, affine_energy_variant, AffineForm};
pub use commutant::commute_offdiag_nonzero_count;
pub use delta::{delta, delta_report, DeltaReport, DeltaWitness};
pub use zero_pattern::{offdiag_degenerate_count, zero_pattern_table, EqStatus, PatternRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Pairwise,
    ZeroPattern,
    Commutant,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Pairwise,
        Algorithm::ZeroPattern,
        Algorithm::Commutant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pairwise => "pairwise",
            Algorithm::ZeroPattern => "zero_pattern",
            Algorithm::Commutant => "commutant",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s || a.name().replace('_', "-") == s)
            .ok_or_else(|| Error::Unknown {
                kind: "algorithm",
                name: s.to_string(),
            })
    }
}

/// `T` split into its degenerate part (some off-diagonal entry or diagonal
/// difference is zero) and the nondegenerate remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommuteReport {
    pub total: Scalar,
    pub h1_degenerate: Scalar,
    pub h2_nondegenerate: Scalar,
    pub algorithm: Algorithm,
}

impl CommuteReport {
    pub(crate) fn new(h1: Scalar, h2: Scalar, algorithm: Algorithm) -> Self {
        CommuteReport {
            total: &h1 + &h2,
            h1_degenerate: h1,
            h2_nondegenerate: h2,
            algorithm,
        }
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    /// One `quantity,value` row per field.
    pub fn to_csv(&self) -> String {
        format!(
            "quantity,value\nalgorithm,{}\ntotal,{}\nh1_degenerate,{}\nh2_nondegenerate,{}\n",
            self.algorithm, self.total, self.h1_degenerate, self.h2_nondegenerate
        )
    }
}

/// Above this many ordered pairs the pairwise engine refuses to run.
pub const PAIRWISE_MAX_PAIRS: u64 = 100_000_000;

/// `T` of the weights' product measure with the chosen engine. Unit weights
/// give `T(A)`.
pub fn commute_count_weights(w: &Weights, algorithm: Algorithm) -> Result<CommuteReport> {
    match algorithm {
        Algorithm::Pairwise => {
            let pairs = (w.len() as u64).saturating_pow(8);
            if pairs > PAIRWISE_MAX_PAIRS {
                return Err(Error::CapExceeded {
                    cap: "pairwise_pairs",
                    limit: PAIRWISE_MAX_PAIRS,
                    requested: pairs,
                });
            }
            Ok(pairwise::count(w))
        }
        Algorithm::ZeroPattern => Ok(zero_pattern::count(w)),
        Algorithm::Commutant => Ok(commutant::count(w)),
    }
}

/// `T(A)` over all matrices with entries in `A`.
pub fn commute_count_set(set: &ScalarSet, algorithm: Algorithm) -> Result<CommuteReport> {
    if set.is_empty() {
        return Err(Error::EmptySupport);
    }
    commute_count_weights(&set.as_weights(), algorithm)
}

/// `T(μ_ν)` without materializing `μ_ν`.
pub fn commute_count_product_measure(nu: &ScalarMeasure) -> CommuteReport {
    zero_pattern::count(nu.weights())
}

/// `T(μ) = Σ μ(X)μ(Y)·[XY = YX]` for an explicit measure. Nonscalar atoms
/// are bucketed by the direction of `(x2, x3, x4 − x1)`: two nonscalar
/// matrices commute exactly when these directions agree, and scalar atoms
/// commute with everything.
pub fn commute_count_measure(mu: &MatrixMeasure) -> Scalar {
    commute_report_measure(mu).total
}

pub fn commute_report_measure(mu: &MatrixMeasure) -> CommuteReport {
    use std::collections::HashMap;
    let mut scalar_mass = Scalar::zero();
    let mut classes: HashMap<[Scalar; 3], Scalar> = HashMap::new();
    for (x, w) in mu.iter() {
        match direction(&x.commutant_key()) {
            None => scalar_mass += w,
            Some(key) => *classes.entry(key).or_default() += w,
        }
    }
    let total_mass = mu.total_mass();
    let mut h1 = Scalar::from_int(2) * &scalar_mass * &total_mass - scalar_mass.pow(2);
    let mut h2 = Scalar::zero();
    for (key, m) in classes {
        if key.iter().all(|c| !c.is_zero()) {
            h2 += m.pow(2);
        } else {
            h1 += m.pow(2);
        }
    }
    CommuteReport::new(h1, h2, Algorithm::Commutant)
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub(crate) fn direction(v: &[Scalar; 3]) -> Option<[Scalar; 3]> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let inv = lead.recip().expect("nonzero");
    Some([&v[0] * &inv, &v[1] * &inv, &v[2] * &inv])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Check {
    pub t: Scalar,
    pub delta: Scalar,
    pub holds: bool,
}

/// Evaluates `T(μ) ≤ 8·δ(μ)` exactly. A `false` result is a discrepancy to
/// report, not an error.
pub fn theorem1_check(mu: &MatrixMeasure) -> Result<Theorem1Check> {
    if !mu.is_probability() {
        return Err(Error::InvalidMeasure(format!(
            "total mass {} is not 1",
            mu.total_mass()
        )));
    }
    let t = commute_count_measure(mu);
    let delta = delta(mu)?;
    let holds = t <= Scalar::from_int(8) * &delta;
    Ok(Theorem1Check { t, delta, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{commutes, Mat2};
    use crate::measures::{product_measure, uniform_on};
    use crate::profiles::energy_additive;
    use proptest::prelude::*;

    fn set(v: &[i64]) -> ScalarSet {
        ScalarSet::from_ints(v.iter().copied())
    }

    fn all_totals(a: &ScalarSet) -> Vec<Scalar> {
        Algorithm::ALL
            .iter()
            .map(|&alg| commute_count_set(a, alg).unwrap().total)
            .collect()
    }

    fn explicit_t(mu: &MatrixMeasure) -> Scalar {
        let mut t = Scalar::zero();
        for (x, wx) in mu.iter() {
            for (y, wy) in mu.iter() {
                if commutes(x, y) {
                    t += wx * wy;
                }
            }
        }
        t
    }

    #[test]
    fn set_examples() {
        for a in [set(&[1]), set(&[0])] {
            assert_eq!(all_totals(&a), vec![Scalar::one(); 3]);
        }
        for a in [set(&[0, 1]), set(&[1, 2, 3]), set(&[-1, 0, 2])] {
            let t = all_totals(&a);
            assert!(t.iter().all(|x| *x == t[0]), "{a:?}: {t:?}");
        }
        assert_eq!(
            commute_count_set(&ScalarSet::default(), Algorithm::Commutant),
            Err(Error::EmptySupport)
        );
    }

    #[test]
    fn reports_partition_and_agree_on_parts() {
        for a in [set(&[0, 1]), set(&[1, 2, 4]), set(&[-2, 0, 3, 5])] {
            let reports: Vec<_> = Algorithm::ALL
                .iter()
                .map(|&alg| commute_count_set(&a, alg).unwrap())
                .collect();
            for r in &reports {
                assert_eq!(r.total, &r.h1_degenerate + &r.h2_nondegenerate);
                assert_eq!(r.h2_nondegenerate, reports[0].h2_nondegenerate);
            }
        }
    }

    #[test]
    fn measure_examples() {
        let single = MatrixMeasure::uniform([Mat2::from_ints([[1, 2], [3, 4]])]).unwrap();
        assert_eq!(commute_count_measure(&single), Scalar::one());
        let three = MatrixMeasure::uniform([
            Mat2::identity(),
            Mat2::from_ints([[0, 1], [0, 0]]),
            Mat2::from_ints([[0, 0], [1, 0]]),
        ])
        .unwrap();
        assert_eq!(commute_count_measure(&three), Scalar::ratio(7, 9));
    }

    #[test]
    fn product_measure_examples() {
        assert_eq!(
            commute_count_product_measure(&uniform_on(&set(&[1])).unwrap()).total,
            Scalar::one()
        );
        let bits = uniform_on(&set(&[0, 1])).unwrap();
        let skew = ScalarMeasure::new([
            (Scalar::one(), Scalar::ratio(1, 3)),
            (Scalar::from_int(2), Scalar::ratio(2, 3)),
        ])
        .unwrap();
        for nu in [bits, skew] {
            let mu = product_measure(&nu).unwrap();
            let fast = commute_count_product_measure(&nu);
            assert_eq!(fast.total, commute_count_measure(&mu));
            assert_eq!(
                fast,
                commute_report_measure(&mu).with_algorithm(Algorithm::ZeroPattern)
            );
        }
    }

    #[test]
    fn theorem1_examples() {
        let single = MatrixMeasure::uniform([Mat2::identity()]).unwrap();
        let c = theorem1_check(&single).unwrap();
        assert_eq!(
            (c.t, c.delta, c.holds),
            (Scalar::one(), Scalar::one(), true)
        );
        let half = MatrixMeasure::new([(Mat2::identity(), Scalar::ratio(1, 2))]).unwrap();
        assert!(matches!(
            theorem1_check(&half),
            Err(Error::InvalidMeasure(_))
        ));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert_eq!(
            "zero-pattern".parse::<Algorithm>().unwrap(),
            Algorithm::ZeroPattern
        );
        assert!("fast".parse::<Algorithm>().is_err());
    }

    fn small_weights() -> impl Strategy<Value = ScalarMeasure> {
        proptest::collection::btree_map(-4i64..=4, 1i64..=6, 1..4).prop_map(|raw| {
            let total: i64 = raw.values().sum();
            ScalarMeasure::new(
                raw.into_iter()
                    .map(|(x, w)| (Scalar::from_int(x), Scalar::ratio(w, total))),
            )
            .unwrap()
        })
    }

    fn small_mats() -> impl Strategy<Value = Vec<Mat2>> {
        proptest::collection::vec(
            proptest::array::uniform4(-2i64..=2)
                .prop_map(|[a, b, c, d]| Mat2::from_ints([[a, b], [c, d]])),
            1..7,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn engines_agree_on_weighted_inputs(nu in small_weights()) {
            let w = nu.weights();
            let reports: Vec<_> = Algorithm::ALL.iter().map(|&a| commute_count_weights(w, a).unwrap()).collect();
            for r in &reports[1..] {
                prop_assert_eq!(&r.total, &reports[0].total);
                prop_assert_eq!(&r.h2_nondegenerate, &reports[0].h2_nondegenerate);
            }
        }

        #[test]
        fn bucketed_measure_count_matches_pairs(mats in small_mats()) {
            let mu = MatrixMeasure::uniform(mats).unwrap();
            prop_assert_eq!(commute_count_measure(&mu), explicit_t(&mu));
        }

        #[test]
        fn dilation_invariance(v in proptest::collection::btree_set(-5i64..=5, 1..4), num in 1i64..4, den in 1i64..4) {
            let a = ScalarSet::from_ints(v);
            let lambda = Scalar::ratio(-num, den);
            prop_assert_eq!(
                commute_count_set(&a, Algorithm::Commutant).unwrap().total,
                commute_count_set(&a.dilate(&lambda), Algorithm::Commutant).unwrap().total
            );
        }

        #[test]
        fn diagonal_floor_bounds(nu in small_weights()) {
            let t = commute_count_product_measure(&nu).total;
            let l2 = crate::measures::norm(&nu, crate::measures::Exponent::Finite(2));
            prop_assert!(t >= l2.pow(2) * energy_additive(&nu));
        }
    }
}
