//! Exact comparison of sums of n-th roots of nonnegative rationals.
//!
//! Terms are grouped into classes whose ratios are perfect n-th powers; the
//! class representatives have ℚ-linearly independent real roots, so the
//! difference of the two sides is zero exactly when every class
//! coefficient cancels. Otherwise the sign is found by refining dyadic
//! enclosures until they exclude zero, which always terminates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::Scalar;

/// `ⁿ√x` when it is rational.
pub fn exact_root(x: &Scalar, n: u32) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    let p = x.numer().nth_root(n);
    let q = x.denom().nth_root(n);
    (num_traits::pow(p.clone(), n as usize) == *x.numer()
        && num_traits::pow(q.clone(), n as usize) == *x.denom())
    .then(|| Scalar::new(p, q).expect("positive denominator"))
}

/// Dyadic enclosure `lo ≤ ⁿ√x ≤ hi` with `hi − lo ≤ 2^-bits`.
pub fn root_interval(x: &Scalar, n: u32, bits: u32) -> (Scalar, Scalar) {
    assert!(!x.is_negative(), "root of a negative number");
    // floor(ⁿ√(x·2^(n·bits))) computed on the integer floor, which has the
    // same integer n-th root.
    let scaled: BigInt = (x.numer() << (n * bits) as usize) / x.denom();
    let r = scaled.nth_root(n);
    let unit = BigInt::one() << bits as usize;
    let lo = Scalar::new(r.clone(), unit.clone()).expect("nonzero");
    if num_traits::pow(r.clone(), n as usize) == scaled
        && (x.numer() << (n * bits) as usize) % x.denom() == BigInt::zero()
    {
        return (lo.clone(), lo);
    }
    let hi = Scalar::new(r + 1, unit).expect("nonzero");
    (lo, hi)
}

/// Compares `Σ ⁿ√lhs_i` against `Σ ⁿ√rhs_j` exactly.
pub fn compare_root_sums(lhs: &[Scalar], rhs: &[Scalar], n: u32) -> Ordering {
    // Net expression Σ_g c_g ⁿ√g over class representatives g.
    let mut classes: Vec<(Scalar, Scalar)> = Vec::new();
    let signed = lhs
        .iter()
        .map(|x| (x, Scalar::one()))
        .chain(rhs.iter().map(|x| (x, -Scalar::one())));
    for (x, sign) in signed {
        assert!(!x.is_negative(), "root of a negative number");
        if x.is_zero() {
            continue;
        }
        let slot = classes
            .iter_mut()
            .find_map(|(g, c)| exact_root(&(x / &*g), n).map(|k| (c, k)));
        match slot {
            Some((c, k)) => *c += sign * k,
            None => classes.push((x.clone(), sign)),
        }
    }
    classes.retain(|(_, c)| !c.is_zero());
    if classes.is_empty() {
        return Ordering::Equal;
    }
    let mut bits = 32;
    loop {
        let (mut lo, mut hi) = (Scalar::zero(), Scalar::zero());
        for (g, c) in &classes {
            let (rl, rh) = root_interval(g, n, bits);
            if c.is_positive() {
                lo += c * &rl;
                hi += c * &rh;
            } else {
                lo += c * &rh;
                hi += c * &rl;
            }
        }
        if lo.is_positive() {
            return Ordering::Greater;
        }
        if hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}
