//! Energy of `Aff(A) = {x ↦ ax + b : a ∈ A \ {0}, b ∈ A}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::measures::ScalarSet;
use crate::profiles::{coupled_difference, difference_profile, integral, quotient_profile};

/// Which quotient of a pair defines the energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineForm {
    /// `g ∘ g′⁻¹ = h ∘ h′⁻¹`
    RightQuotient,
    /// `g⁻¹ ∘ g′ = h⁻¹ ∘ h′`
    LeftQuotient,
}

fn require_nonzero(set: &ScalarSet) -> Result<()> {
    if set.without_zero().is_empty() {
        return Err(Error::invalid("affine energy needs a nonzero element"));
    }
    Ok(())
}

/// `#{g ∘ g′⁻¹ = h ∘ h′⁻¹}`. With `g = (a1, a2)`, `g′ = (a3, a4)` and
/// likewise for `h, h′`, the condition reads `a1/a3 = b1/b3 = z` and
/// `a2 − b2 = z(a4 − b4)`, giving `Σ_z q(z)²·Σ_t D(t)·D(zt)`.
pub fn affine_energy(set: &ScalarSet) -> Result<BigInt> {
    require_nonzero(set)?;
    let q = quotient_profile(set);
    let diffs = difference_profile(set);
    let total: Scalar = q
        .iter()
        .map(|(z, m)| m * m * coupled_difference(&diffs, z, true))
        .sum();
    Ok(integral(total))
}

/// The same energy by composing group elements directly and summing the
/// squared multiplicities of each quotient.
pub fn affine_energy_variant(set: &ScalarSet, form: AffineForm) -> Result<BigInt> {
    require_nonzero(set)?;
    let group: Vec<(&Scalar, &Scalar)> = set
        .iter()
        .filter(|a| !a.is_zero())
        .flat_map(|a| set.iter().map(move |b| (a, b)))
        .collect();
    let mut buckets: HashMap<(Scalar, Scalar), u64> = HashMap::new();
    for &(a, b) in &group {
        for &(c, d) in &group {
            let key = match form {
                // (x ↦ ax + b) ∘ (x ↦ (x − d)/c)
                AffineForm::RightQuotient => (a / c, b - &(a * d / c)),
                // (x ↦ (x − b)/a) ∘ (x ↦ cx + d)
                AffineForm::LeftQuotient => (c / a, (d - b) / a),
            };
            *buckets.entry(key).or_default() += 1;
        }
    }
    Ok(buckets.into_values().map(|n| BigInt::from(n) * n).sum())
}
