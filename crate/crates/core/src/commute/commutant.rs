//! `T = Σ_X μ(X)·μ(C(X))`, where `C(X)` is everything for scalar `X` and
//! `span{I, X}` otherwise. `Y = αI + βX` is fixed by `β` and `y1`, so the
//! inner mass depends only on the class `(x2, x3, x4 − x1)` of `X`.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{Algorithm, CommuteReport};
use crate::exact::Scalar;
use crate::measures::{AsWeights, ScalarSet, Weights};
use crate::profiles::{difference_profile, integral, Profile};

pub(crate) fn count(w: &Weights) -> CommuteReport {
    let (h1, h2) = aggregate(w, false);
    CommuteReport::new(h1, h2, Algorithm::Commutant)
}

/// Commuting pairs with `x2, x3, y2, y3` all nonzero.
pub fn commute_offdiag_nonzero_count(set: &ScalarSet) -> BigInt {
    let (h1, h2) = aggregate(&set.as_weights(), true);
    integral(h1 + h2)
}

/// `μ(span{I, X})` for `X` in class `(x2, x3, d)`, split into the parts
/// with some zero coordinate and with none.
fn span_mass(
    w: &Weights,
    diffs: &Profile,
    key: [&Scalar; 3],
    offdiag_only: bool,
) -> (Scalar, Scalar) {
    let lead = key
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonscalar class");
    let candidates: Vec<&Scalar> = if lead < 2 {
        w.iter().map(|(s, _)| s).collect()
    } else {
        diffs.iter().map(|(s, _)| s).collect()
    };
    let inv = key[lead].recip().expect("nonzero");
    let all_nonzero = key.iter().all(|c| !c.is_zero());
    let (mut h1, mut h2) = (Scalar::zero(), Scalar::zero());
    for s in candidates {
        let beta = s * &inv;
        if offdiag_only && beta.is_zero() {
            continue;
        }
        let Some(a) = w.get(&(&beta * key[0])) else {
            continue;
        };
        let Some(b) = w.get(&(&beta * key[1])) else {
            continue;
        };
        let Some(c) = diffs.mass(&(&beta * key[2])) else {
            continue;
        };
        let m = a * b * c;
        if all_nonzero && !beta.is_zero() {
            h2 += m;
        } else {
            h1 += m;
        }
    }
    (h1, h2)
}

fn aggregate(w: &Weights, offdiag_only: bool) -> (Scalar, Scalar) {
    let diffs = difference_profile(w);
    let zero = Scalar::zero();
    let atoms: Vec<(&Scalar, &Scalar)> = w.iter().collect();
    let (mut h1, h2) = atoms
        .par_iter()
        .map(|(x2, w2)| {
            let (mut h1, mut h2) = (Scalar::zero(), Scalar::zero());
            if offdiag_only && x2.is_zero() {
                return (h1, h2);
            }
            for (x3, w3) in &atoms {
                if offdiag_only && x3.is_zero() {
                    continue;
                }
                let w23 = *w2 * *w3;
                for (d, wd) in diffs.iter() {
                    if x2.is_zero() && x3.is_zero() && d.is_zero() {
                        continue;
                    }
                    let class = &w23 * wd;
                    let (a, b) = span_mass(w, &diffs, [x2, x3, d], offdiag_only);
                    h1 += &class * &a;
                    h2 += &class * &b;
                }
            }
            (h1, h2)
        })
        .reduce(
            || (Scalar::zero(), Scalar::zero()),
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
    if !offdiag_only {
        h1 += w.weight(&zero).pow(2) * diffs.get(&zero) * w.total().pow(4);
    }
    (h1, h2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offdiag_examples() {
        assert_eq!(
            commute_offdiag_nonzero_count(&ScalarSet::from_ints([1])),
            BigInt::from(1)
        );
        assert_eq!(
            commute_offdiag_nonzero_count(&ScalarSet::from_ints([0, 1])),
            BigInt::from(6)
        );
        assert_eq!(
            commute_offdiag_nonzero_count(&ScalarSet::from_ints([0])),
            BigInt::from(0)
        );
    }

    #[test]
    fn scalar_only_support() {
        // Every matrix over {0} is the zero matrix.
        let (h1, h2) = aggregate(&ScalarSet::from_ints([0]).as_weights(), false);
        assert_eq!((h1, h2), (Scalar::one(), Scalar::zero()));
    }
}
