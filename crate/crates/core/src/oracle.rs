//! Brute-force reference counts for differential testing.
//!
//! Everything here enumerates the defining tuples directly, using only the
//! arithmetic and matrix primitives of [`crate::exact`]. Inputs are bounded
//! by [`Caps`]; the `COMMUTE_LAB_CAPS` environment variable overrides the
//! defaults, e.g. `set_t=5,quad=1000000`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{mat_mul, span_dim, Mat2, Scalar};
use crate::measures::{AsWeights, MatrixMeasure, ScalarSet};

pub const CAPS_ENV: &str = "COMMUTE_LAB_CAPS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `|A|` for [`brute_t_set`].
    pub set_t: usize,
    /// Largest tuple or pair space for the other enumerations.
    pub quad: u64,
    /// Largest support for [`brute_delta`].
    pub delta: usize,
    /// Largest `|supp ν|` for explicit product measures.
    pub materialize: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            set_t: 6,
            quad: 10_000_000,
            delta: 64,
            materialize: 12,
        }
    }
}

impl Caps {
    /// Applies `key=value` overrides to the defaults.
    pub fn parse(text: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        let mut column = 1;
        for item in text.split(',') {
            let here = column;
            column += item.chars().count() + 1;
            if item.trim().is_empty() {
                continue;
            }
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::parse(1, here, format!("expected key=value, got `{item}`"))
            })?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(1, here, format!("invalid cap value `{value}`")))?;
            match key.trim() {
                "set_t" => caps.set_t = value as usize,
                "quad" => caps.quad = value,
                "delta" => caps.delta = value as usize,
                "materialize" => caps.materialize = value as usize,
                other => {
                    return Err(Error::Unknown {
                        kind: "cap",
                        name: other.to_string(),
                    })
                }
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Caps> {
        match std::env::var(CAPS_ENV) {
            Ok(text) => Caps::parse(&text),
            Err(_) => Ok(Caps::default()),
        }
    }

    fn check(cap: &'static str, limit: u64, requested: u64) -> Result<()> {
        if requested > limit {
            return Err(Error::CapExceeded {
                cap,
                limit,
                requested,
            });
        }
        Ok(())
    }

    fn check_quad(&self, requested: u64) -> Result<()> {
        Caps::check("quad", self.quad, requested)
    }
}

fn all_matrices(entries: &[Scalar]) -> Vec<Mat2> {
    let mut out = Vec::with_capacity(entries.len().pow(4));
    for a in entries {
        for b in entries {
            for c in entries {
                for d in entries {
                    out.push(Mat2::new(a.clone(), b.clone(), c.clone(), d.clone()));
                }
            }
        }
    }
    out
}

fn product_commutes(x: &Mat2, y: &Mat2) -> bool {
    mat_mul(x, y) == mat_mul(y, x)
}

/// Commuting pair counts over all matrices with entries in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteCommute {
    pub total: BigInt,
    /// Pairs whose four off-diagonal entries are all nonzero.
    pub offdiag_nonzero: BigInt,
}

pub fn brute_t_set(set: &ScalarSet, caps: &Caps) -> Result<BigInt> {
    brute_t_set_parts(set, caps).map(|c| c.total)
}

pub fn brute_t_set_parts(set: &ScalarSet, caps: &Caps) -> Result<BruteCommute> {
    if set.is_empty() {
        return Err(Error::EmptySupport);
    }
    Caps::check("set_t", caps.set_t as u64, set.len() as u64)?;
    let (total, offdiag) = match small_integers(set) {
        Some(ints) => count_pairs(&integer_matrices(&ints), int_commutes, |m| {
            [m[1], m[2]].iter().all(|c| *c != 0)
        }),
        None => count_pairs(&all_matrices(set.as_slice()), product_commutes, |m| {
            !m.a12.is_zero() && !m.a21.is_zero()
        }),
    };
    Ok(BruteCommute {
        total: total.into(),
        offdiag_nonzero: offdiag.into(),
    })
}

fn count_pairs<M>(
    mats: &[M],
    commute: impl Fn(&M, &M) -> bool,
    offdiag: impl Fn(&M) -> bool,
) -> (u64, u64) {
    let (mut total, mut both) = (0u64, 0u64);
    for x in mats {
        for y in mats {
            if commute(x, y) {
                total += 1;
                if offdiag(x) && offdiag(y) {
                    both += 1;
                }
            }
        }
    }
    (total, both)
}

/// `A` scaled by the common denominator, when the results are small enough
/// for `i128` products. Scaling every matrix by one constant does not change
/// whether `XY = YX`.
fn small_integers(set: &ScalarSet) -> Option<Vec<i128>> {
    let lcm = set.iter().try_fold(BigInt::from(1), |acc, x| {
        let l = num_integer::Integer::lcm(&acc, x.denom());
        (l.bits() < 32).then_some(l)
    })?;
    set.iter()
        .map(|x| {
            let scaled = x.numer() * (&lcm / x.denom());
            i128::try_from(scaled)
                .ok()
                .filter(|v| v.unsigned_abs() < 1 << 40)
        })
        .collect()
}

fn integer_matrices(entries: &[i128]) -> Vec<[i128; 4]> {
    let mut out = Vec::with_capacity(entries.len().pow(4));
    for &a in entries {
        for &b in entries {
            for &c in entries {
                for &d in entries {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn int_mul(x: &[i128; 4], y: &[i128; 4]) -> [i128; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn int_commutes(x: &[i128; 4], y: &[i128; 4]) -> bool {
    int_mul(x, y) == int_mul(y, x)
}

pub fn brute_t_measure(mu: &MatrixMeasure, caps: &Caps) -> Result<Scalar> {
    caps.check_quad((mu.len() as u64).saturating_pow(2))?;
    let mut total = Scalar::zero();
    for (x, wx) in mu.iter() {
        for (y, wy) in mu.iter() {
            if product_commutes(x, y) {
                total += wx * wy;
            }
        }
    }
    Ok(total)
}

/// `Σ ν(a1)ν(a2)ν(a3)ν(a4)` over quadruples passing `keep`.
fn quadruple_sum(
    nu: &impl AsWeights,
    caps: &Caps,
    keep: impl Fn(&Scalar, &Scalar, &Scalar, &Scalar) -> bool,
) -> Result<Scalar> {
    let w = nu.as_weights();
    caps.check_quad((w.len() as u64).saturating_pow(4))?;
    let atoms: Vec<(&Scalar, &Scalar)> = w.iter().collect();
    let mut total = Scalar::zero();
    for (a1, w1) in &atoms {
        for (a2, w2) in &atoms {
            for (a3, w3) in &atoms {
                for (a4, w4) in &atoms {
                    if keep(a1, a2, a3, a4) {
                        total += *w1 * *w2 * *w3 * *w4;
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Additive energy: `a1 + a2 = a3 + a4`.
pub fn brute_e(nu: &impl AsWeights, caps: &Caps) -> Result<Scalar> {
    quadruple_sum(nu, caps, |a1, a2, a3, a4| a1 + a2 == a3 + a4)
}

/// Multiplicative energy over nonzero atoms: `a1/a2 = a3/a4`.
pub fn brute_m(nu: &impl AsWeights, caps: &Caps) -> Result<Scalar> {
    quadruple_sum(nu, caps, |a1, a2, a3, a4| {
        [a1, a2, a3, a4].iter().all(|a| !a.is_zero()) && a1 / a2 == a3 / a4
    })
}

fn affine_element(a: &Scalar, b: &Scalar) -> Mat2 {
    Mat2::new(a.clone(), b.clone(), Scalar::zero(), Scalar::one())
}

/// `#{(g, g′, h, h′) : g·g′⁻¹ = h·h′⁻¹}` over `Aff(A)` as `[[a, b], [0, 1]]`.
pub fn brute_affine_energy(set: &ScalarSet, caps: &Caps) -> Result<BigInt> {
    let group: Vec<Mat2> = set
        .iter()
        .filter(|a| !a.is_zero())
        .flat_map(|a| set.iter().map(move |b| affine_element(a, b)))
        .collect();
    if group.is_empty() {
        return Err(Error::invalid("affine energy needs a nonzero element"));
    }
    caps.check_quad((group.len() as u64).saturating_pow(4))?;
    let quotients: Vec<Mat2> = group
        .iter()
        .flat_map(|g| {
            group
                .iter()
                .map(move |h| mat_mul(g, &h.inverse().expect("invertible")))
        })
        .collect();
    let mut count = 0u64;
    for p in &quotients {
        for q in &quotients {
            if p == q {
                count += 1;
            }
        }
    }
    Ok(count.into())
}

fn eight_tuple_count(
    c: &ScalarSet,
    d: &ScalarSet,
    caps: &Caps,
    keep: impl Fn([&Scalar; 4], [&Scalar; 4]) -> bool,
) -> Result<BigInt> {
    if c.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    let requested = (c.len() as u64)
        .saturating_pow(4)
        .saturating_mul((d.len() as u64).saturating_pow(4));
    caps.check_quad(requested)?;
    let quads = |s: &ScalarSet| -> Vec<[Scalar; 4]> {
        all_matrices(s.as_slice())
            .into_iter()
            .map(|m| [m.a11, m.a12, m.a21, m.a22])
            .collect()
    };
    let (cq, dq) = (quads(c), quads(d));
    let mut count = 0u64;
    for cs in &cq {
        let cs = [&cs[0], &cs[1], &cs[2], &cs[3]];
        for ds in &dq {
            if keep(cs, [&ds[0], &ds[1], &ds[2], &ds[3]]) {
                count += 1;
            }
        }
    }
    Ok(count.into())
}

/// `c1/c2 = c3/c4 = (d1 − d2)/(d3 − d4)`.
pub fn brute_asym(c: &ScalarSet, d: &ScalarSet, caps: &Caps) -> Result<BigInt> {
    eight_tuple_count(c, d, caps, |[c1, c2, c3, c4], [d1, d2, d3, d4]| {
        let den = d3 - d4;
        if den.is_zero() {
            return false;
        }
        let z = c1 / c2;
        z == c3 / c4 && z == (d1 - d2) / den
    })
}

/// `c1/c3 = c2/c4` and `c4(d1 − d2) = c2(d3 − d4)`.
pub fn brute_affine_asym(c: &ScalarSet, d: &ScalarSet, caps: &Caps) -> Result<BigInt> {
    eight_tuple_count(c, d, caps, |[c1, c2, c3, c4], [d1, d2, d3, d4]| {
        c1 / c3 == c2 / c4 && c4 * (d1 - d2) == c2 * (d3 - d4)
    })
}

/// Largest mass of a support subset spanning at most two dimensions, by
/// exhaustive subset search. Two prunings keep it tractable: an atom
/// already in the current span is always taken (weights are positive), and
/// a branch stops once even taking every remaining atom cannot win.
pub fn brute_delta(mu: &MatrixMeasure, caps: &Caps) -> Result<Scalar> {
    if mu.is_empty() {
        return Err(Error::EmptySupport);
    }
    Caps::check("delta", caps.delta as u64, mu.len() as u64)?;
    let atoms: Vec<(&Mat2, &Scalar)> = mu.iter().collect();
    let mut suffix = vec![Scalar::zero(); atoms.len() + 1];
    for k in (0..atoms.len()).rev() {
        suffix[k] = &suffix[k + 1] + atoms[k].1;
    }
    let mut best = Scalar::zero();
    let mut basis = Vec::new();
    search(&atoms, &suffix, 0, &mut basis, Scalar::zero(), &mut best);
    Ok(best)
}

fn search(
    atoms: &[(&Mat2, &Scalar)],
    suffix: &[Scalar],
    k: usize,
    basis: &mut Vec<Mat2>,
    mass: Scalar,
    best: &mut Scalar,
) {
    if k == atoms.len() {
        if mass > *best {
            *best = mass;
        }
        return;
    }
    if &mass + &suffix[k] <= *best {
        return;
    }
    let (x, w) = atoms[k];
    basis.push(x.clone());
    let dim = span_dim(basis);
    basis.pop();
    if dim == basis.len() {
        search(atoms, suffix, k + 1, basis, mass + w, best);
        return;
    }
    if dim <= 2 {
        basis.push(x.clone());
        search(atoms, suffix, k + 1, basis, &mass + w, best);
        basis.pop();
    }
    search(atoms, suffix, k + 1, basis, mass, best);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::uniform_on;

    fn caps() -> Caps {
        Caps::default()
    }

    fn set(v: &[i64]) -> ScalarSet {
        ScalarSet::from_ints(v.iter().copied())
    }

    #[test]
    fn t_examples() {
        assert_eq!(brute_t_set(&set(&[1]), &caps()).unwrap(), BigInt::from(1));
        assert_eq!(brute_t_set(&set(&[0]), &caps()).unwrap(), BigInt::from(1));
        let halves: ScalarSet = [Scalar::ratio(1, 2), Scalar::ratio(3, 2)]
            .into_iter()
            .collect();
        let huge: ScalarSet = [Scalar::ratio(1, 1 << 40), Scalar::from_int(3)]
            .into_iter()
            .collect();
        let doubled = set(&[1, 3]);
        let t = brute_t_set_parts(&doubled, &caps()).unwrap();
        assert_eq!(brute_t_set_parts(&halves, &caps()).unwrap(), t);
        // Denominators this large take the rational product path.
        assert!(small_integers(&huge).is_none());
        assert_eq!(brute_t_set_parts(&huge, &caps()).unwrap(), t);
        let tight = Caps { set_t: 2, ..caps() };
        assert!(matches!(
            brute_t_set(&set(&[1, 2, 3]), &tight),
            Err(Error::CapExceeded {
                cap: "set_t",
                limit: 2,
                requested: 3
            })
        ));
    }

    #[test]
    fn energy_examples() {
        let nu = uniform_on(&set(&[1, 2, 3])).unwrap();
        assert_eq!(brute_e(&nu, &caps()).unwrap(), Scalar::ratio(19, 81));
        let nu = uniform_on(&set(&[1, 2, 4])).unwrap();
        assert_eq!(brute_m(&nu, &caps()).unwrap(), Scalar::ratio(19, 81));
        assert_eq!(brute_m(&set(&[0]), &caps()).unwrap(), Scalar::zero());
        assert_eq!(
            brute_affine_energy(&set(&[1]), &caps()).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            brute_affine_energy(&set(&[0, 1]), &caps()).unwrap(),
            BigInt::from(6)
        );
    }

    #[test]
    fn asym_examples() {
        assert_eq!(
            brute_asym(&set(&[1]), &set(&[0, 1]), &caps()).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            brute_asym(&set(&[1, 2]), &set(&[0, 1]), &caps()).unwrap(),
            BigInt::from(8)
        );
        assert_eq!(
            brute_affine_asym(&set(&[1]), &set(&[0, 1]), &caps()).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            brute_affine_asym(&set(&[1, 2]), &set(&[0]), &caps()).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            brute_asym(&set(&[0]), &set(&[1]), &caps()),
            Err(Error::ZeroInSet)
        );
    }

    #[test]
    fn delta_examples() {
        let one = MatrixMeasure::uniform([Mat2::identity()]).unwrap();
        assert_eq!(brute_delta(&one, &caps()).unwrap(), Scalar::one());
        let two = MatrixMeasure::new([
            (Mat2::from_ints([[1, 0], [0, 0]]), Scalar::ratio(1, 4)),
            (Mat2::from_ints([[0, 0], [0, 1]]), Scalar::ratio(1, 4)),
        ])
        .unwrap();
        assert_eq!(brute_delta(&two, &caps()).unwrap(), Scalar::ratio(1, 2));
        let units = (0..4).map(|k| {
            let mut e = [0; 4];
            e[k] = 1;
            Mat2::from_ints([[e[0], e[1]], [e[2], e[3]]])
        });
        let mu = MatrixMeasure::uniform(units.chain([Mat2::zero()])).unwrap();
        assert_eq!(brute_delta(&mu, &caps()).unwrap(), Scalar::ratio(3, 5));
    }

    #[test]
    fn caps_parse() {
        assert_eq!(Caps::parse("").unwrap(), Caps::default());
        let c = Caps::parse("set_t=4, quad=100").unwrap();
        assert_eq!((c.set_t, c.quad, c.delta), (4, 100, 64));
        assert_eq!(
            Caps::parse("set_t=4,quad=x").unwrap_err(),
            Error::parse(1, 9, "invalid cap value `x`")
        );
        assert!(matches!(Caps::parse("speed=1"), Err(Error::Unknown { .. })));
    }
}
