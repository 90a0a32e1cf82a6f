//! Representation-count profiles and the energies built from them.
//!
//! A [`Profile`] maps an exact key `z` to the (weighted) number of ways `z`
//! is represented as a quotient, sum, difference or ratio of differences.
//! Every energy here is a moment of one profile or a pairing of two.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::measures::{AsWeights, ScalarSet, Weights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Quotient,
    Sum,
    Difference,
    DiffRatio,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    kind: ProfileKind,
    buckets: HashMap<Scalar, Scalar>,
}

impl Profile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Mass at `z`, zero when absent.
    pub fn get(&self, z: &Scalar) -> Scalar {
        self.buckets.get(z).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn mass(&self, z: &Scalar) -> Option<&Scalar> {
        self.buckets.get(z)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.buckets.iter()
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn total(&self) -> Scalar {
        self.buckets.values().sum()
    }

    /// Buckets sorted by key.
    pub fn sorted(&self) -> Vec<(Scalar, Scalar)> {
        let mut v: Vec<_> = self
            .buckets
            .iter()
            .map(|(k, m)| (k.clone(), m.clone()))
            .collect();
        v.sort();
        v
    }

    pub fn is_integral(&self) -> bool {
        self.buckets.values().all(Scalar::is_integer)
    }

    /// CSV with header `key,mass_num,mass_den`, rows sorted by key.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,mass_num,mass_den\n");
        for (k, m) in self.sorted() {
            writeln!(out, "{k},{},{}", m.numer(), m.denom()).unwrap();
        }
        out
    }

    pub fn from_pairs(kind: ProfileKind, pairs: impl Iterator<Item = (Scalar, Scalar)>) -> Self {
        let mut buckets = HashMap::new();
        for (k, m) in pairs {
            add_mass(&mut buckets, k, &m);
        }
        Profile { kind, buckets }
    }
}

fn add_mass(buckets: &mut HashMap<Scalar, Scalar>, key: Scalar, mass: &Scalar) {
    match buckets.get_mut(&key) {
        Some(m) => *m += mass,
        None => {
            buckets.insert(key, mass.clone());
        }
    }
}

fn merge(mut a: HashMap<Scalar, Scalar>, b: HashMap<Scalar, Scalar>) -> HashMap<Scalar, Scalar> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, m) in b {
        add_mass(&mut a, k, &m);
    }
    a
}

/// `P(z) = Σ w1(a)·w2(b)` over pairs with `key(a, b) = Some(z)`. The outer
/// index is split across the rayon pool; partial maps are merged by exact
/// addition, so the result does not depend on the schedule.
fn pair_profile(
    kind: ProfileKind,
    left: &Weights,
    right: &Weights,
    key: impl Fn(&Scalar, &Scalar) -> Option<Scalar> + Sync,
) -> Profile {
    let outer: Vec<(&Scalar, &Scalar)> = left.iter().collect();
    let inner: Vec<(&Scalar, &Scalar)> = right.iter().collect();
    let buckets = outer
        .par_iter()
        .fold(HashMap::new, |mut acc, (a, wa)| {
            for (b, wb) in &inner {
                if let Some(k) = key(a, b) {
                    add_mass(&mut acc, k, &(*wa * *wb));
                }
            }
            acc
        })
        .reduce(HashMap::new, merge);
    Profile { kind, buckets }
}

/// `q(z) = Σ ν(a)ν(b)` over nonzero `a, b` with `a/b = z`.
pub fn quotient_profile(nu: &impl AsWeights) -> Profile {
    let w = nu.as_weights();
    pair_profile(ProfileKind::Quotient, &w, &w, |a, b| {
        (!a.is_zero() && !b.is_zero()).then(|| a / b)
    })
}

/// Bucket `s` holds `Σ ν(a)ν(b)` over `a + b = s`.
pub fn sum_profile(nu: &impl AsWeights) -> Profile {
    let w = nu.as_weights();
    pair_profile(ProfileKind::Sum, &w, &w, |a, b| Some(a + b))
}

/// Bucket `s` holds `Σ ν(a)ν(b)` over `a − b = s`.
pub fn difference_profile(nu: &impl AsWeights) -> Profile {
    let w = nu.as_weights();
    pair_profile(ProfileKind::Difference, &w, &w, |a, b| Some(a - b))
}

/// `Σ w1(a)·w2(b)` over `a − b = s`, with `a` drawn from the first weights.
pub fn cross_difference_profile(first: &Weights, second: &Weights) -> Profile {
    pair_profile(ProfileKind::Difference, first, second, |a, b| Some(a - b))
}

/// `r(z) = Σ ν(a)ν(b)ν(c)ν(d)` over `a ≠ b`, `c ≠ d`, `(a − b)/(c − d) = z`.
/// For a set this counts quadruples; fewer than two points give an empty
/// profile.
pub fn diff_ratio_profile(nu: &impl AsWeights) -> Profile {
    let diffs = difference_profile(nu);
    let nonzero: Vec<(&Scalar, &Scalar)> = diffs.iter().filter(|(s, _)| !s.is_zero()).collect();
    let buckets = nonzero
        .par_iter()
        .fold(HashMap::new, |mut acc, (s, ms)| {
            for (t, mt) in &nonzero {
                add_mass(&mut acc, *s / *t, &(*ms * *mt));
            }
            acc
        })
        .reduce(HashMap::new, merge);
    Profile {
        kind: ProfileKind::DiffRatio,
        buckets,
    }
}

/// `Σ_t D(t)·D(z·t)` for a difference profile `D`; the `t = 0` term is
/// included only when asked. With `include_zero = false` and `z ≠ 0` this is
/// the weighted count of `(x1, x4, y1, y4)` with `x4 − x1 = z(y4 − y1) ≠ 0`.
pub fn coupled_difference(diffs: &Profile, z: &Scalar, include_zero: bool) -> Scalar {
    let mut total = Scalar::zero();
    for (t, mt) in diffs.iter() {
        if t.is_zero() {
            if include_zero {
                total += mt * diffs.get(&Scalar::zero());
            }
            continue;
        }
        if let Some(mzt) = diffs.mass(&(z * t)) {
            total += mt * mzt;
        }
    }
    total
}

pub fn moment(profile: &Profile, k: u32) -> Scalar {
    profile.iter().map(|(_, m)| m.pow(k)).sum()
}

/// `E(ν) = Σ ν(a1)ν(a2)ν(a3)ν(a4)` over `a1 + a2 = a3 + a4`.
pub fn energy_additive(nu: &impl AsWeights) -> Scalar {
    moment(&sum_profile(nu), 2)
}

pub fn energy_additive_set(set: &ScalarSet) -> BigInt {
    integral(energy_additive(set))
}

/// `M(ν) = Σ ν(a1)ν(a2)ν(a3)ν(a4)` over nonzero `a_i` with `a1/a2 = a3/a4`.
pub fn energy_mult(nu: &impl AsWeights) -> Scalar {
    moment(&quotient_profile(nu), 2)
}

pub fn energy_mult_set(set: &ScalarSet) -> BigInt {
    integral(energy_mult(set))
}

/// `Σ ν(a1)…ν(a4)` over `a_i ∈ A_i` with `a1 − a2 = a3 − a4`.
pub fn mixed_additive_energy(parts: [&Weights; 4]) -> Scalar {
    let left = cross_difference_profile(parts[0], parts[1]);
    let right = cross_difference_profile(parts[2], parts[3]);
    left.iter()
        .filter_map(|(s, m)| right.mass(s).map(|r| m * r))
        .sum()
}

/// `E_ν(A)`: the additive energy of `ν` restricted to `A`.
pub fn restricted_energy(nu: &Weights, set: &ScalarSet) -> Scalar {
    energy_additive(&nu.restrict(set))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicLevel {
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub tau: BigInt,
    pub count: usize,
}

/// Histogram of buckets by dyadic level `τ = 2^j ≤ mass < 2τ`, from `j = 0`
/// up to the highest occupied level. Empty levels are listed with count 0.
pub fn dyadic_levels(profile: &Profile) -> Result<Vec<DyadicLevel>> {
    let mut counts: Vec<usize> = Vec::new();
    for (_, m) in profile.iter() {
        let n = m.to_integer().ok_or(Error::NonIntegerProfile)?;
        if n < BigInt::from(1) {
            return Err(Error::NonIntegerProfile);
        }
        let j = (n.bits() - 1) as usize;
        if counts.len() <= j {
            counts.resize(j + 1, 0);
        }
        counts[j] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(j, count)| DyadicLevel {
            tau: BigInt::from(1) << j,
            count,
        })
        .collect())
}

pub fn dyadic_csv(levels: &[DyadicLevel]) -> String {
    let mut out = String::from("tau,count\n");
    for l in levels {
        writeln!(out, "{},{}", l.tau, l.count).unwrap();
    }
    out
}

/// Counts `(c1..c4, d1..d4) ∈ C⁴ × D⁴` with
/// `c1/c2 = c3/c4 = (d1 − d2)/(d3 − d4)` as `Σ_z q_C(z)²·r_D(z)`.
pub fn asym_commute_count(c: &ScalarSet, d: &ScalarSet) -> Result<BigInt> {
    if c.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    let q = quotient_profile(c);
    let r = diff_ratio_profile(d);
    let total: Scalar = q
        .iter()
        .filter_map(|(z, m)| r.mass(z).map(|rz| m * m * rz))
        .sum();
    Ok(integral(total))
}

/// Counts `(c1..c4, d1..d4) ∈ C⁴ × D⁴` with `c1/c3 = c2/c4` and
/// `c4(d1 − d2) = c2(d3 − d4)`; zero differences are allowed. Bucketed on
/// `w = c2/c4` and paired with the coupled difference count of `D`.
pub fn affine_energy_asym(c: &ScalarSet, d: &ScalarSet) -> Result<BigInt> {
    if c.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    let q = quotient_profile(c);
    let diffs = difference_profile(d);
    let total: Scalar = q
        .iter()
        .map(|(w, m)| m * m * coupled_difference(&diffs, w, true))
        .sum();
    Ok(integral(total))
}

pub(crate) fn integral(x: Scalar) -> BigInt {
    x.to_integer().expect("unit weights give integer counts")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::uniform_on;
    use proptest::prelude::*;

    fn set(v: &[i64]) -> ScalarSet {
        ScalarSet::from_ints(v.iter().copied())
    }

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn assert_buckets(p: &Profile, expected: &[(Scalar, Scalar)]) {
        let mut want = expected.to_vec();
        want.sort();
        assert_eq!(p.sorted(), want);
    }

    #[test]
    fn quotient_profile_examples() {
        let nu = uniform_on(&set(&[1, 2, 4])).unwrap();
        assert_buckets(
            &quotient_profile(&nu),
            &[
                (r(1, 1), r(3, 9)),
                (r(2, 1), r(2, 9)),
                (r(1, 2), r(2, 9)),
                (r(4, 1), r(1, 9)),
                (r(1, 4), r(1, 9)),
            ],
        );
        let bits = uniform_on(&set(&[0, 1])).unwrap();
        assert_buckets(&quotient_profile(&bits), &[(r(1, 1), r(1, 4))]);
        let single = uniform_on(&set(&[-7])).unwrap();
        assert_buckets(&quotient_profile(&single), &[(r(1, 1), r(1, 1))]);
    }

    #[test]
    fn sum_and_difference_examples() {
        let nu = uniform_on(&set(&[1, 2, 3])).unwrap();
        assert_buckets(
            &sum_profile(&nu),
            &[
                (r(2, 1), r(1, 9)),
                (r(3, 1), r(2, 9)),
                (r(4, 1), r(3, 9)),
                (r(5, 1), r(2, 9)),
                (r(6, 1), r(1, 9)),
            ],
        );
        for n in 1..7i64 {
            let nu = uniform_on(&ScalarSet::from_ints(1..=n)).unwrap();
            let d = difference_profile(&nu);
            assert_eq!(d.len() as i64, 2 * n - 1);
            for k in -(n - 1)..n {
                assert_eq!(d.get(&k.into()), r(n - k.abs(), n * n));
            }
        }
        let five = uniform_on(&set(&[5])).unwrap();
        assert_buckets(&sum_profile(&five), &[(r(10, 1), r(1, 1))]);
    }

    #[test]
    fn diff_ratio_examples() {
        assert_buckets(
            &diff_ratio_profile(&set(&[0, 1])),
            &[(r(1, 1), r(2, 1)), (r(-1, 1), r(2, 1))],
        );
        assert_eq!(diff_ratio_profile(&set(&[0, 1, 3])).total(), r(36, 1));
        assert_buckets(
            &diff_ratio_profile(&set(&[7, -2])),
            &[(r(1, 1), r(2, 1)), (r(-1, 1), r(2, 1))],
        );
        assert!(diff_ratio_profile(&set(&[4])).is_empty());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy_additive_set(&set(&[1, 2, 3])), BigInt::from(19));
        assert_eq!(energy_additive_set(&set(&[1, 2, 3, 4])), BigInt::from(44));
        assert_eq!(energy_additive_set(&set(&[9])), BigInt::from(1));
        assert_eq!(energy_mult_set(&set(&[1, 2, 4])), BigInt::from(19));
        assert_eq!(energy_mult_set(&set(&[2, 4, 8])), BigInt::from(19));
        assert_eq!(energy_mult_set(&set(&[0])), BigInt::from(0));
        let nu = uniform_on(&set(&[1, 2, 3])).unwrap();
        assert_eq!(energy_additive(&nu), r(19, 81));
    }

    #[test]
    fn moment_examples() {
        let q = quotient_profile(&uniform_on(&set(&[1, 2, 4])).unwrap());
        assert_eq!(moment(&q, 1), q.total());
        assert_eq!(moment(&q, 2), r(19, 81));
        assert_eq!(moment(&diff_ratio_profile(&set(&[1])), 3), Scalar::zero());
    }

    #[test]
    fn dyadic_examples() {
        let p = Profile::from_pairs(
            ProfileKind::Sum,
            [(r(1, 1), r(2, 1)), (r(2, 1), r(2, 1))].into_iter(),
        );
        let levels = dyadic_levels(&p).unwrap();
        assert_eq!(
            levels[1],
            DyadicLevel {
                tau: 2.into(),
                count: 2
            }
        );
        assert_eq!(levels[0].count, 0);

        let q = quotient_profile(&set(&[1, 2, 3, 4]));
        let levels = dyadic_levels(&q).unwrap();
        let covered: Scalar = levels
            .iter()
            .map(|l| Scalar::from_bigint(&l.tau * l.count))
            .sum();
        let total = q.total();
        assert!(covered <= total && &covered * Scalar::from_int(2) >= total);
        assert_eq!(levels.iter().map(|l| l.count).sum::<usize>(), q.len());

        let r1 = diff_ratio_profile(&set(&[0, 1]));
        assert_eq!(
            dyadic_levels(&r1).unwrap()[1],
            DyadicLevel {
                tau: 2.into(),
                count: 2
            }
        );

        let weighted = quotient_profile(&uniform_on(&set(&[1, 2])).unwrap());
        assert_eq!(dyadic_levels(&weighted), Err(Error::NonIntegerProfile));
    }

    #[test]
    fn csv_exports() {
        let p = diff_ratio_profile(&set(&[0, 1]));
        assert_eq!(p.to_csv(), "key,mass_num,mass_den\n-1,2,1\n1,2,1\n");
        let levels = dyadic_levels(&p).unwrap();
        assert_eq!(dyadic_csv(&levels), "tau,count\n1,0\n2,2\n");
    }

    #[test]
    fn asym_examples() {
        assert_eq!(
            asym_commute_count(&set(&[1]), &set(&[0, 1])).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            asym_commute_count(&set(&[1, 2]), &set(&[5])).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            asym_commute_count(&set(&[1, 2]), &set(&[0, 1])).unwrap(),
            BigInt::from(8)
        );
        assert_eq!(
            asym_commute_count(&set(&[0, 1]), &set(&[1])),
            Err(Error::ZeroInSet)
        );
    }

    #[test]
    fn affine_asym_examples() {
        assert_eq!(
            affine_energy_asym(&set(&[1]), &set(&[3])).unwrap(),
            BigInt::from(1)
        );
        // d1 − d2 = d3 − d4 over {0, 1}: difference counts 2, 1, 1.
        assert_eq!(
            affine_energy_asym(&set(&[1]), &set(&[0, 1])).unwrap(),
            BigInt::from(6)
        );
        // Only c1/c3 = c2/c4 survives: M({1, 2}) = 2² + 1 + 1.
        assert_eq!(
            affine_energy_asym(&set(&[1, 2]), &set(&[0])).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            affine_energy_asym(&set(&[0]), &set(&[1])),
            Err(Error::ZeroInSet)
        );
    }

    fn small_set() -> impl Strategy<Value = ScalarSet> {
        proptest::collection::btree_set(-12i64..=12, 1..8).prop_map(ScalarSet::from_ints)
    }

    fn small_weights() -> impl Strategy<Value = Weights> {
        proptest::collection::btree_map(-6i64..=6, 1i64..=9, 1..6).prop_map(|raw| {
            let total: i64 = raw.values().sum();
            crate::measures::ScalarMeasure::new(
                raw.into_iter()
                    .map(|(x, w)| (Scalar::from_int(x), r(w, total))),
            )
            .unwrap()
            .weights()
            .clone()
        })
    }

    proptest! {
        #[test]
        fn mass_conservation(w in small_weights()) {
            let nonzero: Scalar = w.iter().filter(|(x, _)| !x.is_zero()).map(|(_, m)| m.clone()).sum();
            prop_assert_eq!(quotient_profile(&w).total(), nonzero.pow(2));
            prop_assert_eq!(sum_profile(&w).total(), w.total().pow(2));
            prop_assert_eq!(difference_profile(&w).total(), w.total().pow(2));
        }

        #[test]
        fn energy_paths_agree(w in small_weights()) {
            // Σ sum-profile² equals Σ difference-profile² (a1 + a2 = a3 + a4 ⇔ a1 − a3 = a4 − a2).
            prop_assert_eq!(energy_additive(&w), moment(&difference_profile(&w), 2));
            prop_assert_eq!(energy_additive(&w), mixed_additive_energy([&w, &w, &w, &w]));
        }

        #[test]
        fn dilation_and_translation_invariance(a in small_set(), num in 1i64..5, den in 1i64..5, neg in any::<bool>(), t in -5i64..5) {
            let lambda = r(if neg { -num } else { num }, den);
            let dilated = a.dilate(&lambda);
            prop_assert_eq!(energy_additive_set(&dilated), energy_additive_set(&a));
            prop_assert_eq!(energy_mult_set(&dilated), energy_mult_set(&a));
            prop_assert_eq!(energy_additive_set(&a.translate(&t.into())), energy_additive_set(&a));
        }

        #[test]
        fn cauchy_schwarz_sumset(a in small_set()) {
            let n = BigInt::from(a.len());
            let lhs = energy_additive_set(&a) * BigInt::from(a.sumset_size());
            prop_assert!(lhs >= num_traits::pow(n, 4));
        }

        #[test]
        fn asym_below_affine_asym(c in small_set(), d in small_set()) {
            let c = c.without_zero();
            prop_assume!(!c.is_empty());
            prop_assert!(asym_commute_count(&c, &d).unwrap() <= affine_energy_asym(&c, &d).unwrap());
        }
    }
}
