//! Finitely supported measures on ℚ and on 2×2 rational matrices.

use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Mat2, Scalar};

/// Default cap on `|supp ν|` for explicit product-measure materialization.
pub const DEFAULT_MATERIALIZE_CAP: usize = 12;

/// A finite set of distinct rationals, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct ScalarSet(Vec<Scalar>);

impl ScalarSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Scalar::zero())
    }

    pub fn without_zero(&self) -> ScalarSet {
        self.iter().filter(|x| !x.is_zero()).cloned().collect()
    }

    /// `λ·A`.
    pub fn dilate(&self, lambda: &Scalar) -> ScalarSet {
        self.iter().map(|x| x * lambda).collect()
    }

    /// `A + t`.
    pub fn translate(&self, t: &Scalar) -> ScalarSet {
        self.iter().map(|x| x + t).collect()
    }

    pub fn from_ints(values: impl IntoIterator<Item = i64>) -> Self {
        values.into_iter().map(Scalar::from_int).collect()
    }

    /// Parses newline-delimited rationals. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<ScalarSet> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            out.push(Scalar::parse_at(content, i + 1, 1)?);
        }
        Ok(out.into_iter().collect())
    }

    /// One canonical rational per line.
    pub fn to_text(&self) -> String {
        self.iter().map(|x| format!("{x}\n")).collect()
    }

    /// `|A + A|`.
    pub fn sumset_size(&self) -> usize {
        self.pairwise_size(|a, b| a + b)
    }

    /// `|A · A|`.
    pub fn productset_size(&self) -> usize {
        self.pairwise_size(|a, b| a * b)
    }

    /// `|A / A|` over nonzero denominators.
    pub fn quotientset_size(&self) -> usize {
        let nz = self.without_zero();
        let mut seen = std::collections::HashSet::new();
        for a in self.iter() {
            for b in nz.iter() {
                seen.insert(a / b);
            }
        }
        seen.len()
    }

    fn pairwise_size(&self, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> usize {
        let mut seen = std::collections::HashSet::new();
        for (i, a) in self.0.iter().enumerate() {
            for b in &self.0[i..] {
                seen.insert(op(a, b));
            }
        }
        seen.len()
    }
}

impl FromIterator<Scalar> for ScalarSet {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        let mut v: Vec<Scalar> = iter.into_iter().collect();
        v.sort();
        v.dedup();
        ScalarSet(v)
    }
}

impl<'a> IntoIterator for &'a ScalarSet {
    type Item = &'a Scalar;
    type IntoIter = std::slice::Iter<'a, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A positive weight function with finite support and no mass constraint.
/// Counting engines take weights so that sets (unit weights) and measures
/// share one implementation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Weights(BTreeMap<Scalar, Scalar>);

impl Weights {
    /// Every element of `set` gets weight 1.
    pub fn unit(set: &ScalarSet) -> Self {
        Weights(set.iter().map(|x| (x.clone(), Scalar::one())).collect())
    }

    pub fn get(&self, x: &Scalar) -> Option<&Scalar> {
        self.0.get(x)
    }

    pub fn weight(&self, x: &Scalar) -> Scalar {
        self.0.get(x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> + Clone {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Scalar {
        self.0.values().sum()
    }

    pub fn support(&self) -> ScalarSet {
        self.0.keys().cloned().collect()
    }

    /// Weights restricted to `set`.
    pub fn restrict(&self, set: &ScalarSet) -> Weights {
        Weights(
            self.0
                .iter()
                .filter(|(x, _)| set.contains(x))
                .map(|(x, w)| (x.clone(), w.clone()))
                .collect(),
        )
    }

    fn from_map(map: BTreeMap<Scalar, Scalar>) -> Result<Self> {
        if let Some((x, w)) = map.iter().find(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidMeasure(format!(
                "weight {w} at {x} is not strictly positive"
            )));
        }
        Ok(Weights(map))
    }
}

/// Anything the counting engines can read as a weight function.
pub trait AsWeights {
    fn as_weights(&self) -> Cow<'_, Weights>;
}

impl AsWeights for Weights {
    fn as_weights(&self) -> Cow<'_, Weights> {
        Cow::Borrowed(self)
    }
}

impl AsWeights for ScalarMeasure {
    fn as_weights(&self) -> Cow<'_, Weights> {
        Cow::Borrowed(&self.weights)
    }
}

impl AsWeights for ScalarSet {
    fn as_weights(&self) -> Cow<'_, Weights> {
        Cow::Owned(Weights::unit(self))
    }
}

/// `p` in `‖ν‖_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

/// A finitely supported measure ν on ℚ with total mass at most 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMeasure {
    weights: Weights,
}

impl ScalarMeasure {
    pub fn new(atoms: impl IntoIterator<Item = (Scalar, Scalar)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, w) in atoms {
            if map.insert(x.clone(), w).is_some() {
                return Err(Error::InvalidMeasure(format!("duplicate atom {x}")));
            }
        }
        let weights = Weights::from_map(map)?;
        if weights.total() > Scalar::one() {
            return Err(Error::InvalidMeasure(format!(
                "total mass {} exceeds 1",
                weights.total()
            )));
        }
        Ok(ScalarMeasure { weights })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn weight(&self, x: &Scalar) -> Scalar {
        self.weights.weight(x)
    }

    pub fn support(&self) -> ScalarSet {
        self.weights.support()
    }

    pub fn total_mass(&self) -> Scalar {
        self.weights.total()
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> + Clone {
        self.weights.iter()
    }

    /// Sub-measure obtained by restricting to `set`.
    pub fn restrict(&self, set: &ScalarSet) -> ScalarMeasure {
        ScalarMeasure {
            weights: self.weights.restrict(set),
        }
    }
}

/// `ν = 𝟙_A / |A|`.
pub fn uniform_on(set: &ScalarSet) -> Result<ScalarMeasure> {
    if set.is_empty() {
        return Err(Error::EmptySupport);
    }
    let w = Scalar::ratio(1, set.len() as i64);
    ScalarMeasure::new(set.iter().map(|x| (x.clone(), w.clone())))
}

/// Returns `‖ν‖_p^p` for finite `p`, and the largest weight for `p = ∞`.
pub fn norm(nu: &ScalarMeasure, p: Exponent) -> Scalar {
    weight_norm(nu.weights(), p)
}

pub(crate) fn weight_norm(w: &Weights, p: Exponent) -> Scalar {
    match p {
        Exponent::Finite(k) => w.iter().map(|(_, x)| x.pow(k)).sum(),
        Exponent::Infinity => w.iter().map(|(_, x)| x.clone()).max().unwrap_or_default(),
    }
}

pub fn mass_at_zero(nu: &ScalarMeasure) -> Scalar {
    nu.weight(&Scalar::zero())
}

/// A finitely supported measure μ on 2×2 rational matrices, mass ≤ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMeasure {
    atoms: BTreeMap<Mat2, Scalar>,
}

impl MatrixMeasure {
    pub fn new(atoms: impl IntoIterator<Item = (Mat2, Scalar)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, w) in atoms {
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "weight {w} at {x} is not strictly positive"
                )));
            }
            if map.insert(x.clone(), w).is_some() {
                return Err(Error::InvalidMeasure(format!("duplicate atom {x}")));
            }
        }
        let m = MatrixMeasure { atoms: map };
        if m.total_mass() > Scalar::one() {
            return Err(Error::InvalidMeasure(format!(
                "total mass {} exceeds 1",
                m.total_mass()
            )));
        }
        Ok(m)
    }

    /// Uniform probability measure on the distinct matrices given.
    pub fn uniform(mats: impl IntoIterator<Item = Mat2>) -> Result<Self> {
        let mut distinct: Vec<Mat2> = mats.into_iter().collect();
        distinct.sort();
        distinct.dedup();
        if distinct.is_empty() {
            return Err(Error::EmptySupport);
        }
        let w = Scalar::ratio(1, distinct.len() as i64);
        MatrixMeasure::new(distinct.into_iter().map(|m| (m, w.clone())))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms in canonical (sorted) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Mat2, &Scalar)> + Clone {
        self.atoms.iter()
    }

    pub fn weight(&self, x: &Mat2) -> Scalar {
        self.atoms.get(x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_mass(&self) -> Scalar {
        self.atoms.values().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    pub fn max_atom(&self) -> Scalar {
        self.atoms.values().max().cloned().unwrap_or_default()
    }
}

/// Explicit `μ_ν` with `μ_ν((a_ij)) = ν(a11)ν(a12)ν(a21)ν(a22)`.
pub fn product_measure(nu: &ScalarMeasure) -> Result<MatrixMeasure> {
    product_measure_capped(nu, DEFAULT_MATERIALIZE_CAP)
}

pub fn product_measure_capped(nu: &ScalarMeasure, cap: usize) -> Result<MatrixMeasure> {
    let atoms: Vec<(&Scalar, &Scalar)> = nu.iter().collect();
    if atoms.len() > cap {
        return Err(Error::SupportTooLarge {
            size: atoms.len(),
            cap,
        });
    }
    let mut out = BTreeMap::new();
    for (a, wa) in &atoms {
        for (b, wb) in &atoms {
            let wab = *wa * *wb;
            for (c, wc) in &atoms {
                let wabc = &wab * *wc;
                for (d, wd) in &atoms {
                    let m = Mat2::new((*a).clone(), (*b).clone(), (*c).clone(), (*d).clone());
                    out.insert(m, &wabc * *wd);
                }
            }
        }
    }
    Ok(MatrixMeasure { atoms: out })
}

/// A measure read from the JSON interchange format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMeasure {
    Scalar(ScalarMeasure),
    Matrix(MatrixMeasure),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AtomValue {
    Scalar(Scalar),
    Matrix(Mat2),
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    x: AtomValue,
    w: Scalar,
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    atoms: Vec<AtomRecord>,
    #[serde(default)]
    probability: bool,
}

impl AnyMeasure {
    /// Parses `{"atoms": [{"x": ..., "w": ...}], "probability": bool}`.
    /// Atoms must be all scalars or all matrices. When `probability` is
    /// true the total mass must be exactly 1.
    pub fn from_json(text: &str) -> Result<AnyMeasure> {
        let file: MeasureFile = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        if file.atoms.is_empty() {
            return Err(Error::EmptySupport);
        }
        let measure = match file.atoms[0].x {
            AtomValue::Scalar(_) => {
                let mut atoms = Vec::new();
                for a in file.atoms {
                    match a.x {
                        AtomValue::Scalar(x) => atoms.push((x, a.w)),
                        AtomValue::Matrix(_) => {
                            return Err(Error::InvalidMeasure(
                                "mixed scalar and matrix atoms".into(),
                            ))
                        }
                    }
                }
                AnyMeasure::Scalar(ScalarMeasure::new(atoms)?)
            }
            AtomValue::Matrix(_) => {
                let mut atoms = Vec::new();
                for a in file.atoms {
                    match a.x {
                        AtomValue::Matrix(x) => atoms.push((x, a.w)),
                        AtomValue::Scalar(_) => {
                            return Err(Error::InvalidMeasure(
                                "mixed scalar and matrix atoms".into(),
                            ))
                        }
                    }
                }
                AnyMeasure::Matrix(MatrixMeasure::new(atoms)?)
            }
        };
        if file.probability && !measure.total_mass().is_one() {
            return Err(Error::InvalidMeasure(format!(
                "declared a probability measure but total mass is {}",
                measure.total_mass()
            )));
        }
        Ok(measure)
    }

    pub fn total_mass(&self) -> Scalar {
        match self {
            AnyMeasure::Scalar(m) => m.total_mass(),
            AnyMeasure::Matrix(m) => m.total_mass(),
        }
    }

    pub fn to_json(&self) -> String {
        let atoms = match self {
            AnyMeasure::Scalar(m) => m
                .iter()
                .map(|(x, w)| AtomRecord {
                    x: AtomValue::Scalar(x.clone()),
                    w: w.clone(),
                })
                .collect(),
            AnyMeasure::Matrix(m) => m
                .iter()
                .map(|(x, w)| AtomRecord {
                    x: AtomValue::Matrix(x.clone()),
                    w: w.clone(),
                })
                .collect(),
        };
        let file = MeasureFile {
            atoms,
            probability: self.total_mass().is_one(),
        };
        serde_json::to_string_pretty(&file).expect("measure serializes")
    }
}
