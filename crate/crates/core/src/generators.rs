//! Example families and seeded random instances.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha
//! 0.3) sampled through rand 0.8's `gen_range`; both are pinned so seeds
//! reproduce across platforms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{commutes, span_dim, Mat2, Scalar};
use crate::measures::{MatrixMeasure, ScalarMeasure, ScalarSet};

/// Upper end of the integer weight range for random measures.
pub const MAX_RANDOM_WEIGHT: i64 = 1 << 16;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `[N] = {1, …, N}`.
pub fn interval(n: u32) -> Result<ScalarSet> {
    if n == 0 {
        return Err(Error::invalid("interval length must be positive"));
    }
    Ok(ScalarSet::from_ints(1..=n as i64))
}

/// `{v0 + l1·v1 + … + ld·vd : 0 ≤ li < Li}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpec {
    pub base: Scalar,
    pub steps: Vec<Scalar>,
    pub lengths: Vec<u32>,
}

impl GapSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() || self.steps.len() != self.lengths.len() {
            return Err(Error::invalid(format!(
                "gap needs d ≥ 1 steps and as many lengths (got {} and {})",
                self.steps.len(),
                self.lengths.len()
            )));
        }
        if self.lengths.contains(&0) {
            return Err(Error::invalid("gap lengths must be positive"));
        }
        Ok(())
    }

    /// `Π Li`, before collisions collapse.
    pub fn nominal_size(&self) -> u64 {
        self.lengths.iter().map(|&l| l as u64).product()
    }
}

pub fn gap(spec: &GapSpec) -> Result<ScalarSet> {
    spec.validate()?;
    let mut values = vec![spec.base.clone()];
    for (step, &len) in spec.steps.iter().zip(&spec.lengths) {
        values = values
            .iter()
            .flat_map(|v| (0..len).map(move |l| v + &(step * Scalar::from_int(l as i64))))
            .collect();
    }
    Ok(values.into_iter().collect())
}

/// `{r, r², …, r^N}`.
pub fn geometric(n: u32, r: &Scalar) -> Result<ScalarSet> {
    if n == 0 {
        return Err(Error::invalid("geometric length must be positive"));
    }
    if r.is_zero() || r.abs().is_one() {
        return Err(Error::invalid(format!("ratio {r} must not be 0, 1 or -1")));
    }
    Ok((1..=n).map(|k| r.pow(k)).collect())
}

/// Uniform measure on `{[[n, 2^j], [2^k, n]] : n, j, k ∈ [N]}`.
pub fn sharp_example(n: u32) -> Result<MatrixMeasure> {
    if n < 2 {
        return Err(Error::invalid("sharp example needs N ≥ 2"));
    }
    let two = Scalar::from_int(2);
    let mut mats = Vec::with_capacity((n as usize).pow(3));
    for d in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let diag = Scalar::from_int(d as i64);
                mats.push(Mat2::new(diag.clone(), two.pow(j), two.pow(k), diag));
            }
        }
    }
    MatrixMeasure::uniform(mats)
}

/// Uniform measure on `{iA + jB : i, j ∈ [N]}` for commuting independent
/// nonzero `A`, `B`.
pub fn commuting_plane_example(n: u32, a: &Mat2, b: &Mat2) -> Result<MatrixMeasure> {
    let mut problems = Vec::new();
    if n == 0 {
        problems.push("N must be positive");
    }
    if a.is_zero() {
        problems.push("A is zero");
    }
    if b.is_zero() {
        problems.push("B is zero");
    }
    if !a.is_zero() && !b.is_zero() && span_dim(&[a.clone(), b.clone()]) < 2 {
        problems.push("A and B are linearly dependent");
    }
    if !commutes(a, b) {
        problems.push("A and B do not commute");
    }
    if !problems.is_empty() {
        return Err(Error::invalid(problems.join("; ")));
    }
    let mats = (1..=n as i64).flat_map(|i| {
        (1..=n as i64).map(move |j| {
            a.scale(&Scalar::from_int(i))
                .add(&b.scale(&Scalar::from_int(j)))
        })
    });
    MatrixMeasure::uniform(mats)
}

fn distinct_ints(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Result<BTreeSet<i64>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if lo > hi {
        return Err(Error::invalid(format!("empty range [{lo}, {hi}]")));
    }
    let room = (hi as i128 - lo as i128 + 1) as u128;
    if (n as u128) > room {
        return Err(Error::invalid(format!(
            "range [{lo}, {hi}] has fewer than {n} distinct values"
        )));
    }
    let mut out = BTreeSet::new();
    while out.len() < n {
        out.insert(rng.gen_range(lo..=hi));
    }
    Ok(out)
}

/// `n` distinct integers drawn uniformly from `[lo, hi]` by rejection.
pub fn random_set(n: usize, lo: i64, hi: i64, seed: u64) -> Result<ScalarSet> {
    let ints = distinct_ints(&mut rng(seed), n, lo, hi)?;
    Ok(ScalarSet::from_ints(ints))
}

fn normalized(raw: Vec<i64>) -> Vec<Scalar> {
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| Scalar::ratio(w, total)).collect()
}

/// Support as in [`random_set`]; weights are integers in `[1, 2^16]`
/// divided by their sum.
pub fn random_measure(n: usize, lo: i64, hi: i64, seed: u64) -> Result<ScalarMeasure> {
    let mut rng = rng(seed);
    let support = distinct_ints(&mut rng, n, lo, hi)?;
    let weights: Vec<i64> = (0..n)
        .map(|_| rng.gen_range(1..=MAX_RANDOM_WEIGHT))
        .collect();
    ScalarMeasure::new(
        support
            .into_iter()
            .map(Scalar::from_int)
            .zip(normalized(weights)),
    )
}

/// A probability measure on `atoms` distinct matrices with integer entries
/// in `[lo, hi]`, weighted as in [`random_measure`].
pub fn random_matrix_measure(atoms: usize, lo: i64, hi: i64, seed: u64) -> Result<MatrixMeasure> {
    if atoms == 0 || lo > hi {
        return Err(Error::invalid(
            "need at least one atom and a nonempty range",
        ));
    }
    let width = (hi as i128 - lo as i128 + 1) as u128;
    if width
        .checked_pow(4)
        .is_some_and(|room| room < atoms as u128)
    {
        return Err(Error::invalid(format!(
            "entries in [{lo}, {hi}] give fewer than {atoms} matrices"
        )));
    }
    let mut rng = rng(seed);
    let mut mats = BTreeSet::new();
    while mats.len() < atoms {
        let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(lo..=hi));
        mats.insert(Mat2::from_ints([[e[0], e[1]], [e[2], e[3]]]));
    }
    let weights: Vec<i64> = (0..atoms)
        .map(|_| rng.gen_range(1..=MAX_RANDOM_WEIGHT))
        .collect();
    MatrixMeasure::new(mats.into_iter().zip(normalized(weights)))
}

/// A probability measure concentrated near a pencil `{αI + βX}`: about
/// three atoms in four are `αI + βX` with `α, β ∈ [−spread, spread]` for one
/// random nonscalar `X`, the rest have random entries in the same range.
pub fn random_pencil_measure(atoms: usize, spread: i64, seed: u64) -> Result<MatrixMeasure> {
    if atoms == 0 || spread < 1 {
        return Err(Error::invalid("need at least one atom and spread ≥ 1"));
    }
    let width = (2 * spread + 1) as usize;
    if atoms > width * width {
        return Err(Error::invalid(format!(
            "spread {spread} gives fewer than {atoms} pencil matrices"
        )));
    }
    let mut rng = rng(seed);
    let entry = |rng: &mut ChaCha8Rng| rng.gen_range(-spread..=spread);
    let x = loop {
        let e: [i64; 4] = std::array::from_fn(|_| entry(&mut rng));
        let m = Mat2::from_ints([[e[0], e[1]], [e[2], e[3]]]);
        if !m.is_scalar() {
            break m;
        }
    };
    let mut mats = BTreeSet::new();
    while mats.len() < atoms {
        let m = if rng.gen_range(0..4) < 3 {
            let (a, b) = (entry(&mut rng), entry(&mut rng));
            Mat2::scalar(Scalar::from_int(a)).add(&x.scale(&Scalar::from_int(b)))
        } else {
            let e: [i64; 4] = std::array::from_fn(|_| entry(&mut rng));
            Mat2::from_ints([[e[0], e[1]], [e[2], e[3]]])
        };
        mats.insert(m);
    }
    let weights: Vec<i64> = (0..atoms)
        .map(|_| rng.gen_range(1..=MAX_RANDOM_WEIGHT))
        .collect();
    MatrixMeasure::new(mats.into_iter().zip(normalized(weights)))
}

/// A generator invocation, written inline as `family:params` or as JSON
/// tagged by `family`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Interval {
        n: u32,
    },
    Geometric {
        n: u32,
        r: Scalar,
    },
    Gap(GapSpec),
    Random {
        n: usize,
        lo: i64,
        hi: i64,
        seed: u64,
    },
    RandomMeasure {
        n: usize,
        lo: i64,
        hi: i64,
        seed: u64,
    },
    RandomMatrix {
        n: usize,
        lo: i64,
        hi: i64,
        seed: u64,
    },
    Sharp {
        n: u32,
    },
    Plane {
        n: u32,
    },
}

/// What a generator produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Set(ScalarSet),
    Measure(ScalarMeasure),
    Matrix(MatrixMeasure),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Generated> {
        Ok(match self {
            GeneratorSpec::Interval { n } => Generated::Set(interval(*n)?),
            GeneratorSpec::Geometric { n, r } => Generated::Set(geometric(*n, r)?),
            GeneratorSpec::Gap(spec) => Generated::Set(gap(spec)?),
            GeneratorSpec::Random { n, lo, hi, seed } => {
                Generated::Set(random_set(*n, *lo, *hi, *seed)?)
            }
            GeneratorSpec::RandomMeasure { n, lo, hi, seed } => {
                Generated::Measure(random_measure(*n, *lo, *hi, *seed)?)
            }
            GeneratorSpec::RandomMatrix { n, lo, hi, seed } => {
                Generated::Matrix(random_matrix_measure(*n, *lo, *hi, *seed)?)
            }
            GeneratorSpec::Sharp { n } => Generated::Matrix(sharp_example(*n)?),
            GeneratorSpec::Plane { n } => Generated::Matrix(commuting_plane_example(
                *n,
                &Mat2::identity(),
                &Mat2::from_ints([[1, 1], [0, 1]]),
            )?),
        })
    }

    /// Inline form, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()));
        }
        text.parse()
    }
}

fn field<T: FromStr>(parts: &[&str], i: usize, name: &str, column: usize) -> Result<T> {
    let raw = parts
        .get(i)
        .ok_or_else(|| Error::parse(1, column, format!("missing {name}")))?;
    raw.parse()
        .map_err(|_| Error::parse(1, column, format!("invalid {name} `{raw}`")))
}

fn list<T: FromStr>(raw: &str, name: &str, column: usize) -> Result<Vec<T>> {
    raw.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| Error::parse(1, column, format!("invalid {name} entry `{item}`")))
        })
        .collect()
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        // 1-based column where each field starts.
        let mut columns = Vec::with_capacity(parts.len());
        let mut next = 1;
        for p in &parts {
            columns.push(next);
            next += p.chars().count() + 1;
        }
        let col = |i: usize| columns.get(i).copied().unwrap_or(next - 1);
        let arity = |allowed: &[usize]| -> Result<()> {
            let given = parts.len() - 1;
            if allowed.contains(&given) {
                return Ok(());
            }
            let wanted: Vec<String> = allowed.iter().map(ToString::to_string).collect();
            Err(Error::parse(
                1,
                col(given.min(allowed[0]) + 1),
                format!(
                    "`{}` takes {} parameter(s), got {given}",
                    parts[0],
                    wanted.join(" or ")
                ),
            ))
        };
        let get = |i: usize, name: &str| field::<u32>(&parts, i, name, col(i));
        let randoms = || -> Result<(usize, i64, i64, u64)> {
            Ok((
                field(&parts, 1, "n", col(1))?,
                field(&parts, 2, "lo", col(2))?,
                field(&parts, 3, "hi", col(3))?,
                field(&parts, 4, "seed", col(4))?,
            ))
        };
        match parts[0] {
            "interval" => {
                arity(&[1])?;
                Ok(GeneratorSpec::Interval { n: get(1, "N")? })
            }
            "geometric" => {
                arity(&[1, 2])?;
                let r = match parts.get(2) {
                    Some(raw) => Scalar::parse_at(raw, 1, col(2))?,
                    None => Scalar::from_int(2),
                };
                Ok(GeneratorSpec::Geometric { n: get(1, "N")?, r })
            }
            "gap" => {
                arity(&[3])?;
                Ok(GeneratorSpec::Gap(GapSpec {
                    base: Scalar::parse_at(parts[1], 1, col(1))?,
                    steps: list(parts[2], "step", col(2))?,
                    lengths: list(parts[3], "length", col(3))?,
                }))
            }
            "random" | "random-measure" | "random-matrix" => {
                arity(&[4])?;
                let (n, lo, hi, seed) = randoms()?;
                Ok(match parts[0] {
                    "random" => GeneratorSpec::Random { n, lo, hi, seed },
                    "random-measure" => GeneratorSpec::RandomMeasure { n, lo, hi, seed },
                    _ => GeneratorSpec::RandomMatrix { n, lo, hi, seed },
                })
            }
            "sharp" => {
                arity(&[1])?;
                Ok(GeneratorSpec::Sharp { n: get(1, "N")? })
            }
            "plane" => {
                arity(&[1])?;
                Ok(GeneratorSpec::Plane { n: get(1, "N")? })
            }
            other => Err(Error::Unknown {
                kind: "generator family",
                name: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[String]| v.join(",");
        match self {
            GeneratorSpec::Interval { n } => write!(f, "interval:{n}"),
            GeneratorSpec::Geometric { n, r } => write!(f, "geometric:{n}:{r}"),
            GeneratorSpec::Gap(g) => write!(
                f,
                "gap:{}:{}:{}",
                g.base,
                join(&g.steps.iter().map(ToString::to_string).collect::<Vec<_>>()),
                join(
                    &g.lengths
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                )
            ),
            GeneratorSpec::Random { n, lo, hi, seed } => write!(f, "random:{n}:{lo}:{hi}:{seed}"),
            GeneratorSpec::RandomMeasure { n, lo, hi, seed } => {
                write!(f, "random-measure:{n}:{lo}:{hi}:{seed}")
            }
            GeneratorSpec::RandomMatrix { n, lo, hi, seed } => {
                write!(f, "random-matrix:{n}:{lo}:{hi}:{seed}")
            }
            GeneratorSpec::Sharp { n } => write!(f, "sharp:{n}"),
            GeneratorSpec::Plane { n } => write!(f, "plane:{n}"),
        }
    }
}
