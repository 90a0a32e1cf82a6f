//! Exact rational scalars and 2×2 matrices over ℚ.
//!
//! [`Scalar`] is always kept in canonical form (reduced, positive
//! denominator), so structural equality and hashing agree with numeric
//! equality and scalars can be used directly as bucket keys.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    /// Builds `num/den` in canonical form. Fails on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Scalar(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::new(num, den).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The integer value, if the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    /// The value as `i128`, if it is an integer in range.
    pub fn to_i128(&self) -> Option<i128> {
        self.to_integer().and_then(|n| n.to_i128())
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Scalar(self.0.recip()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Scalar(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Lossy conversion for human-readable columns only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Parses a scalar from a token that is known to start at `column` of
    /// `line`. Accepts integers, `num/den` fractions and finite decimals.
    pub fn parse_at(text: &str, line: usize, column: usize) -> Result<Self> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        let col = column + lead;
        if trimmed.is_empty() {
            return Err(Error::parse(line, col, "expected a rational number"));
        }
        if let Some((num, den)) = trimmed.split_once('/') {
            let n = parse_integer(num.trim(), line, col)?;
            let d_col = col + num.len() + 1;
            let d = parse_integer(den.trim(), line, d_col)?;
            if d.is_zero() {
                return Err(Error::parse(line, d_col, "zero denominator"));
            }
            return Ok(Scalar(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = trimmed.split_once('.') {
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['+', '-']);
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(
                    line,
                    col + int_part.len() + 1,
                    format!("`{trimmed}` is not a finite decimal"),
                ));
            }
            let whole = if int_digits.is_empty() {
                BigInt::zero()
            } else {
                parse_integer(int_digits, line, col)?
            };
            let frac: BigInt = frac_part.parse().expect("digits checked");
            let scale = num_traits::pow(BigInt::from(10), frac_part.len());
            let mut value = BigRational::new(whole * &scale + frac, scale);
            if negative {
                value = -value;
            }
            return Ok(Scalar(value));
        }
        Ok(Scalar(BigRational::from_integer(parse_integer(
            trimmed, line, col,
        )?)))
    }
}

fn parse_integer(text: &str, line: usize, column: usize) -> Result<BigInt> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        let offset = text
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(Error::parse(
            line,
            column + offset,
            format!("`{text}` is not a rational number"),
        ));
    }
    Ok(text.parse().expect("digits checked"))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scalar::parse_at(s, 1, 1)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serializes any `Display` value as a JSON string; used for big integers.
pub fn serialize_display<T: fmt::Display, S: Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Scalar::from_int(n)),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

/// A 2×2 matrix `[[a11, a12], [a21, a22]]` with exact rational entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mat2 {
    pub a11: Scalar,
    pub a12: Scalar,
    pub a21: Scalar,
    pub a22: Scalar,
}

impl Mat2 {
    pub fn new(a11: Scalar, a12: Scalar, a21: Scalar, a22: Scalar) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_ints(rows: [[i64; 2]; 2]) -> Self {
        Mat2::new(
            rows[0][0].into(),
            rows[0][1].into(),
            rows[1][0].into(),
            rows[1][1].into(),
        )
    }

    /// Row-major entries.
    pub fn from_entries([a11, a12, a21, a22]: [Scalar; 4]) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn zero() -> Self {
        Mat2::scalar(Scalar::zero())
    }

    pub fn identity() -> Self {
        Mat2::scalar(Scalar::one())
    }

    /// `λI`.
    pub fn scalar(lambda: Scalar) -> Self {
        Mat2::new(lambda.clone(), Scalar::zero(), Scalar::zero(), lambda)
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|x| x.is_zero())
    }

    /// True for matrices of the form `λI`.
    pub fn is_scalar(&self) -> bool {
        self.a12.is_zero() && self.a21.is_zero() && self.a11 == self.a22
    }

    pub fn det(&self) -> Scalar {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let inv_det = self.det().recip()?;
        Some(Mat2::new(
            &self.a22 * &inv_det,
            -(&self.a12 * &inv_det),
            -(&self.a21 * &inv_det),
            &self.a11 * &inv_det,
        ))
    }

    pub fn scale(&self, lambda: &Scalar) -> Mat2 {
        Mat2::new(
            &self.a11 * lambda,
            &self.a12 * lambda,
            &self.a21 * lambda,
            &self.a22 * lambda,
        )
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a11 + &other.a11,
            &self.a12 + &other.a12,
            &self.a21 + &other.a21,
            &self.a22 + &other.a22,
        )
    }

    pub fn sub(&self, other: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a11 - &other.a11,
            &self.a12 - &other.a12,
            &self.a21 - &other.a21,
            &self.a22 - &other.a22,
        )
    }

    /// The invariants `(a12, a21, a22 − a11)` that determine the commutant
    /// of a matrix.
    pub fn commutant_key(&self) -> [Scalar; 3] {
        [self.a12.clone(), self.a21.clone(), &self.a22 - &self.a11]
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = <[Scalar; 4]>::deserialize(deserializer)?;
        Ok(Mat2::from_entries(entries))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    Mat2::new(
        &x.a11 * &y.a11 + &x.a12 * &y.a21,
        &x.a11 * &y.a12 + &x.a12 * &y.a22,
        &x.a21 * &y.a11 + &x.a22 * &y.a21,
        &x.a21 * &y.a12 + &x.a22 * &y.a22,
    )
}

/// Commutation test through the three scalar conditions
/// `x2·y3 = x3·y2`, `x2(y4 − y1) = y2(x4 − x1)`, `x3(y4 − y1) = y3(x4 − x1)`
/// (entries laid out as `x1 = a11, x2 = a12, x3 = a21, x4 = a22`).
pub fn commutes(x: &Mat2, y: &Mat2) -> bool {
    let dx = &x.a22 - &x.a11;
    let dy = &y.a22 - &y.a11;
    &x.a12 * &y.a21 == &x.a21 * &y.a12
        && &x.a12 * &dy == &y.a12 * &dx
        && &x.a21 * &dy == &y.a21 * &dx
}

/// Clears denominators row-wise so each row becomes a primitive-free
/// integer vector spanning the same line.
fn integer_row(v: [&Scalar; 4]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Rank of integer rows by fraction-free (Bareiss) elimination.
fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest {
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (&pivot * &*x - &factor * p) / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Dimension of the ℚ-span of the given matrices viewed as vectors in ℚ⁴.
pub fn span_dim(mats: &[Mat2]) -> usize {
    let rows: Vec<Vec<BigInt>> = mats
        .iter()
        .filter(|m| !m.is_zero())
        .map(|m| integer_row(m.entries()))
        .collect();
    if rows.is_empty() {
        return 0;
    }
    bareiss_rank(rows)
}

/// True iff `z` lies in the ℚ-span of `{x, y}`.
pub fn in_span2(x: &Mat2, y: &Mat2, z: &Mat2) -> bool {
    if z.is_zero() {
        return true;
    }
    let base = span_dim(&[x.clone(), y.clone()]);
    span_dim(&[x.clone(), y.clone(), z.clone()]) == base
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip().expect("pivot is nonzero");
        for x in &mut rows[r][col..] {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &(&factor * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A basis of `{X : XY = YX for every Y in ys}`, found by solving the
/// linear system `XY − YX = 0` in the four entries of `X`.
pub fn commutant_basis(ys: &[Mat2]) -> Vec<Mat2> {
    let units: Vec<Mat2> = (0..4)
        .map(|k| {
            let mut e = [0i64; 4];
            e[k] = 1;
            Mat2::from_ints([[e[0], e[1]], [e[2], e[3]]])
        })
        .collect();
    // Column k of the system holds E_k·Y − Y·E_k for every Y.
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for y in ys {
        let cols: Vec<Mat2> = units
            .iter()
            .map(|e| mat_mul(e, y).sub(&mat_mul(y, e)))
            .collect();
        for entry in 0..4 {
            rows.push(cols.iter().map(|c| c.entries()[entry].clone()).collect());
        }
    }
    if rows.is_empty() {
        return units;
    }
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); 4];
            v[f] = Scalar::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            let [a, b, c, d]: [Scalar; 4] = v.try_into().expect("four entries");
            Mat2::new(a, b, c, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: [[i64; 2]; 2]) -> Mat2 {
        Mat2::from_ints(rows)
    }

    #[test]
    fn mat_mul_examples() {
        let y = m([[3, -1], [7, 2]]);
        assert_eq!(mat_mul(&Mat2::identity(), &y), y);
        assert_eq!(
            mat_mul(&m([[0, 1], [0, 0]]), &m([[0, 0], [1, 0]])),
            m([[1, 0], [0, 0]])
        );
        let a = m([[1, 2], [3, 4]]);
        assert_eq!(mat_mul(&a, &a), m([[7, 10], [15, 22]]));
    }

    #[test]
    fn commutes_examples() {
        let a = m([[1, 2], [3, 4]]);
        assert!(commutes(&a, &a));
        assert!(commutes(&a, &m([[6, 2], [3, 9]])));
        assert!(!commutes(&m([[0, 1], [0, 0]]), &m([[0, 0], [1, 0]])));
    }

    #[test]
    fn span_dim_examples() {
        assert_eq!(span_dim(&[]), 0);
        assert_eq!(span_dim(&[Mat2::zero()]), 0);
        assert_eq!(span_dim(&[Mat2::identity(), m([[1, 2], [3, 4]])]), 2);
        assert_eq!(
            span_dim(&[
                Mat2::identity(),
                Mat2::scalar(2.into()),
                Mat2::scalar(3.into())
            ]),
            1
        );
        let units = commutant_basis(&[]);
        assert_eq!(span_dim(&units), 4);
    }

    #[test]
    fn in_span2_examples() {
        let y = m([[1, 2], [3, 4]]);
        assert!(in_span2(&Mat2::identity(), &y, &m([[1, -4], [-6, -5]])));
        assert!(!in_span2(
            &Mat2::identity(),
            &Mat2::identity(),
            &m([[0, 1], [0, 0]])
        ));
        assert!(in_span2(&y, &m([[0, 1], [0, 0]]), &Mat2::zero()));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/4".parse::<Scalar>().unwrap(), Scalar::ratio(3, 2));
        assert_eq!("-3".parse::<Scalar>().unwrap(), Scalar::from_int(-3));
        assert_eq!("2/-4".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 2));
        assert_eq!("-0.25".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 4));
        assert_eq!(Scalar::ratio(6, -4).to_string(), "-3/2");
        assert_eq!(Scalar::from_int(5).to_string(), "5");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("sqrt(2)".parse::<Scalar>().is_err());
        assert!("inf".parse::<Scalar>().is_err());
        match Scalar::parse_at("  1/x", 4, 10) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 14)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serde_forms() {
        let x = Mat2::new(Scalar::ratio(1, 2), 0.into(), (-3).into(), 1.into());
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"["1/2","0","-3","1"]"#);
        let back: Mat2 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let from_ints: Mat2 = serde_json::from_str("[1, 2, 3, 4]").unwrap();
        assert_eq!(from_ints, m([[1, 2], [3, 4]]));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m([[2, 1], [7, 4]]);
        assert_eq!(mat_mul(&a, &a.inverse().unwrap()), Mat2::identity());
        assert!(m([[1, 2], [2, 4]]).inverse().is_none());
    }

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d))
    }

    fn small_mat() -> impl Strategy<Value = Mat2> {
        proptest::array::uniform4(small_scalar()).prop_map(Mat2::from_entries)
    }

    fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
        small_scalar().prop_filter("nonzero", |s| !s.is_zero())
    }

    proptest! {
        #[test]
        fn commutes_matches_products(x in small_mat(), y in small_mat()) {
            prop_assert_eq!(commutes(&x, &y), mat_mul(&x, &y) == mat_mul(&y, &x));
        }

        #[test]
        fn commutes_with_affine_images(x in small_mat(), a in small_scalar(), b in small_scalar()) {
            let y = x.scale(&a).add(&Mat2::scalar(b));
            prop_assert!(commutes(&x, &y));
        }

        #[test]
        fn span_dim_invariances(
            mats in proptest::collection::vec(small_mat(), 0..5),
            lambda in nonzero_scalar(),
            idx in 0usize..5,
        ) {
            let d = span_dim(&mats);
            let mut rev = mats.clone();
            rev.reverse();
            prop_assert_eq!(span_dim(&rev), d);
            if !mats.is_empty() {
                let mut scaled = mats.clone();
                let i = idx % mats.len();
                scaled[i] = scaled[i].scale(&lambda);
                prop_assert_eq!(span_dim(&scaled), d);
            }
            prop_assert!(d <= 4 && d <= mats.len());
        }

        #[test]
        fn in_span2_consistent_with_span_dim(x in small_mat(), y in small_mat(), z in small_mat()) {
            let expected = span_dim(&[x.clone(), y.clone(), z.clone()]) <= span_dim(&[x.clone(), y.clone()]);
            prop_assert_eq!(in_span2(&x, &y, &z), expected);
        }

        #[test]
        fn field_axioms(a in small_scalar(), b in small_scalar(), c in small_scalar()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + Scalar::zero(), a.clone());
            prop_assert_eq!(&a * Scalar::one(), a.clone());
            prop_assert!((&a - &a).is_zero());
            if let Some(inv) = a.recip() {
                prop_assert!((&a * &inv).is_one());
            }
            let reparsed: Scalar = a.to_string().parse().unwrap();
            prop_assert_eq!(reparsed.to_string(), a.to_string());
            prop_assert!(a.denom() > &BigInt::zero());
            prop_assert!(a.numer().gcd(a.denom()).is_one() || a.is_zero());
        }

        /// Three independent nonscalar matrices have only scalar common commuters.
        #[test]
        fn independent_triples_force_scalar_commuters(
            y1 in small_mat(), y2 in small_mat(), y3 in small_mat(),
            coeffs in proptest::collection::vec(small_scalar(), 4),
        ) {
            let ys = [y1, y2, y3];
            prop_assume!(ys.iter().all(|y| !y.is_scalar()));
            prop_assume!(span_dim(&ys) == 3);
            let basis = commutant_basis(&ys);
            prop_assert!(!basis.is_empty());
            let mut x = Mat2::zero();
            for (b, c) in basis.iter().zip(&coeffs) {
                prop_assert!(b.is_scalar());
                x = x.add(&b.scale(c));
            }
            for y in &ys {
                prop_assert!(commutes(&x, y));
            }
            prop_assert!(x.is_scalar());
        }

        #[test]
        fn nonscalar_commutant_is_span_of_identity_and_self(x in small_mat()) {
            prop_assume!(!x.is_scalar());
            let basis = commutant_basis(std::slice::from_ref(&x));
            prop_assert_eq!(basis.len(), 2);
            let mut all = basis.clone();
            all.push(Mat2::identity());
            all.push(x.clone());
            prop_assert_eq!(span_dim(&all), 2);
        }
    }
}
