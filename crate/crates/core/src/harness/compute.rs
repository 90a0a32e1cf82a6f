use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::envelope;
use crate::commute::{
    affine_energy, affine_energy_variant, commute_count_product_measure, commute_count_set,
    commute_report_measure, delta_report, AffineForm, Algorithm,
};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::generators::{Generated, GeneratorSpec};
use crate::measures::{product_measure_capped, uniform_on, AnyMeasure, MatrixMeasure, ScalarSet};
use crate::oracle::{self, Caps};
use crate::profiles::{
    affine_energy_asym, asym_commute_count, diff_ratio_profile, difference_profile, dyadic_levels,
    energy_additive, energy_mult, moment, quotient_profile, sum_profile, Profile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    T,
    E,
    M,
    Delta,
    AffineEnergy,
    Asym,
    Profiles,
    Moments,
    DyadicLevels,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::T,
        Quantity::E,
        Quantity::M,
        Quantity::Delta,
        Quantity::AffineEnergy,
        Quantity::Asym,
        Quantity::Profiles,
        Quantity::Moments,
        Quantity::DyadicLevels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::T => "T",
            Quantity::E => "E",
            Quantity::M => "M",
            Quantity::Delta => "delta",
            Quantity::AffineEnergy => "affine_energy",
            Quantity::Asym => "asym",
            Quantity::Profiles => "profiles",
            Quantity::Moments => "moments",
            Quantity::DyadicLevels => "dyadic_levels",
        }
    }

    /// Parses a comma-separated list, keeping the given order and dropping
    /// repeats.
    pub fn parse_list(text: &str) -> Result<Vec<Quantity>> {
        let mut out: Vec<Quantity> = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let q: Quantity = item.parse()?;
            if !out.contains(&q) {
                out.push(q);
            }
        }
        if out.is_empty() {
            return Err(Error::invalid("no quantities requested"));
        }
        Ok(out)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        let key = match key.as_str() {
            "affine" => "affine_energy",
            "dyadic" => "dyadic_levels",
            other => other,
        };
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "quantity",
                name: s.to_string(),
            })
    }
}

/// A set or measure with a label describing where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Input {
    pub value: Generated,
    pub source: String,
}

impl Input {
    pub fn from_spec(spec: &GeneratorSpec) -> Result<Input> {
        Ok(Input {
            value: spec.generate()?,
            source: spec.to_string(),
        })
    }

    /// A JSON measure when the text starts with `{`, else a set file.
    pub fn from_text(text: &str, source: impl Into<String>) -> Result<Input> {
        let value = if text.trim_start().starts_with('{') {
            match AnyMeasure::from_json(text)? {
                AnyMeasure::Scalar(nu) => Generated::Measure(nu),
                AnyMeasure::Matrix(mu) => Generated::Matrix(mu),
            }
        } else {
            let set = ScalarSet::parse(text)?;
            if set.is_empty() {
                return Err(Error::EmptySupport);
            }
            Generated::Set(set)
        };
        Ok(Input {
            value,
            source: source.into(),
        })
    }

    fn describe(&self) -> Value {
        let (kind, size) = match &self.value {
            Generated::Set(a) => ("set", a.len()),
            Generated::Measure(nu) => ("scalar_measure", nu.weights().len()),
            Generated::Matrix(mu) => ("matrix_measure", mu.len()),
        };
        json!({ "kind": kind, "source": self.source, "size": size })
    }
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub algorithm: Algorithm,
    pub oracle: bool,
    /// Second set `D` for the asymmetric counts; defaults to the input.
    pub partner: Option<ScalarSet>,
    pub moments: Vec<u32>,
    pub caps: Caps,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            algorithm: Algorithm::ZeroPattern,
            oracle: false,
            partner: None,
            moments: vec![2, 3],
            caps: Caps::default(),
        }
    }
}

fn profile_json(p: &Profile) -> Value {
    Value::Array(p.sorted().into_iter().map(|(k, m)| json!([k, m])).collect())
}

fn unsupported(q: Quantity, kind: &str) -> Error {
    Error::invalid(format!("quantity {q} is not defined for a {kind}"))
}

struct Outcome {
    results: Map<String, Value>,
    oracle: Map<String, Value>,
    agree: bool,
}

impl Outcome {
    fn put(&mut self, q: Quantity, v: Value) {
        self.results.insert(q.name().into(), v);
    }

    /// Records an oracle value and whether it matches the fast one.
    fn check(&mut self, key: &str, fast: Value, slow: Value) {
        self.agree &= fast == slow;
        self.oracle.insert(key.into(), slow);
    }
}

/// Evaluates the requested quantities and returns the JSON report.
pub fn compute(input: &Input, quantities: &[Quantity], opts: &ComputeOptions) -> Result<Value> {
    let mut out = Outcome {
        results: Map::new(),
        oracle: Map::new(),
        agree: true,
    };
    for &q in quantities {
        match &input.value {
            Generated::Set(a) => compute_set(a, q, opts, &mut out)?,
            Generated::Measure(nu) => {
                let w = nu.weights();
                match q {
                    Quantity::T => {
                        let r = commute_count_product_measure(nu);
                        if opts.oracle {
                            let mu = product_measure_capped(nu, opts.caps.materialize)?;
                            let slow = oracle::brute_t_measure(&mu, &opts.caps)?;
                            out.check("T", json!(r.total), json!(slow));
                        }
                        out.put(q, json!(r));
                    }
                    Quantity::E => {
                        let fast = energy_additive(w);
                        if opts.oracle {
                            out.check("E", json!(fast), json!(oracle::brute_e(w, &opts.caps)?));
                        }
                        out.put(q, json!(fast));
                    }
                    Quantity::M => {
                        let fast = energy_mult(w);
                        if opts.oracle {
                            out.check("M", json!(fast), json!(oracle::brute_m(w, &opts.caps)?));
                        }
                        out.put(q, json!(fast));
                    }
                    Quantity::Delta => {
                        let mu = product_measure_capped(nu, opts.caps.materialize)?;
                        matrix_delta(&mu, opts, &mut out)?;
                    }
                    Quantity::Profiles => out.put(
                        q,
                        json!({
                            "quotient": profile_json(&quotient_profile(w)),
                            "sum": profile_json(&sum_profile(w)),
                            "difference": profile_json(&difference_profile(w)),
                        }),
                    ),
                    Quantity::Moments => {
                        let mut m = Map::new();
                        for (name, p) in [
                            ("quotient", quotient_profile(w)),
                            ("sum", sum_profile(w)),
                            ("difference", difference_profile(w)),
                        ] {
                            m.insert(name.into(), moments_json(&p, &opts.moments));
                        }
                        out.put(q, Value::Object(m));
                    }
                    Quantity::DyadicLevels => {
                        let q1 = dyadic_levels(&quotient_profile(w))?;
                        out.put(q, json!({ "quotient": q1 }));
                    }
                    Quantity::AffineEnergy | Quantity::Asym => {
                        return Err(unsupported(q, "scalar measure"))
                    }
                }
            }
            Generated::Matrix(mu) => match q {
                Quantity::T => {
                    let r = commute_report_measure(mu);
                    if opts.oracle {
                        let slow = oracle::brute_t_measure(mu, &opts.caps)?;
                        out.check("T", json!(r.total), json!(slow));
                    }
                    out.put(q, json!(r));
                }
                Quantity::Delta => matrix_delta(mu, opts, &mut out)?,
                _ => return Err(unsupported(q, "matrix measure")),
            },
        }
    }
    let mut body = Map::new();
    body.insert("input".into(), input.describe());
    body.insert("results".into(), Value::Object(out.results));
    if opts.oracle {
        let mut oracle = out.oracle;
        oracle.insert("agreement".into(), out.agree.into());
        body.insert("oracle".into(), Value::Object(oracle));
    }
    Ok(envelope("compute", Value::Object(body)))
}

fn moments_json(p: &Profile, ks: &[u32]) -> Value {
    Value::Object(
        ks.iter()
            .map(|&k| (k.to_string(), json!(moment(p, k))))
            .collect(),
    )
}

fn matrix_delta(mu: &MatrixMeasure, opts: &ComputeOptions, out: &mut Outcome) -> Result<()> {
    let r = delta_report(mu)?;
    if opts.oracle {
        let slow = oracle::brute_delta(mu, &opts.caps)?;
        out.check("delta", json!(r.delta), json!(slow));
    }
    out.put(Quantity::Delta, json!(r));
    Ok(())
}

fn compute_set(a: &ScalarSet, q: Quantity, opts: &ComputeOptions, out: &mut Outcome) -> Result<()> {
    let caps = &opts.caps;
    match q {
        Quantity::T => {
            let r = commute_count_set(a, opts.algorithm)?;
            if opts.oracle {
                let slow = oracle::brute_t_set(a, caps)?;
                out.check("T", json!(r.total), json!(Scalar::from_bigint(slow)));
            }
            out.put(q, json!(r));
        }
        Quantity::E => {
            let fast = energy_additive(a);
            if opts.oracle {
                out.check("E", json!(fast), json!(oracle::brute_e(a, caps)?));
            }
            out.put(q, json!(fast));
        }
        Quantity::M => {
            let fast = energy_mult(a);
            if opts.oracle {
                out.check("M", json!(fast), json!(oracle::brute_m(a, caps)?));
            }
            out.put(q, json!(fast));
        }
        Quantity::Delta => {
            let mu = product_measure_capped(&uniform_on(a)?, caps.materialize)?;
            matrix_delta(&mu, opts, out)?;
        }
        Quantity::AffineEnergy => {
            let fast = affine_energy(a)?;
            let variant = affine_energy_variant(a, AffineForm::LeftQuotient)?;
            if opts.oracle {
                let slow = oracle::brute_affine_energy(a, caps)?;
                out.check(
                    "affine_energy",
                    json!(fast.to_string()),
                    json!(slow.to_string()),
                );
            }
            out.put(
                q,
                json!({ "energy": fast.to_string(), "left_quotient_form": variant.to_string() }),
            );
        }
        Quantity::Asym => {
            let d = opts.partner.as_ref().unwrap_or(a);
            let asym = asym_commute_count(a, d)?;
            let affine = affine_energy_asym(a, d)?;
            if opts.oracle {
                let slow = oracle::brute_asym(a, d, caps)?;
                out.check("asym", json!(asym.to_string()), json!(slow.to_string()));
                let slow = oracle::brute_affine_asym(a, d, caps)?;
                out.check(
                    "affine_asym",
                    json!(affine.to_string()),
                    json!(slow.to_string()),
                );
            }
            out.put(
                q,
                json!({
                    "partner_size": d.len(),
                    "commute_count": asym.to_string(),
                    "affine_energy": affine.to_string(),
                }),
            );
        }
        Quantity::Profiles => out.put(
            q,
            json!({
                "quotient": profile_json(&quotient_profile(a)),
                "sum": profile_json(&sum_profile(a)),
                "difference": profile_json(&difference_profile(a)),
                "diff_ratio": profile_json(&diff_ratio_profile(a)),
            }),
        ),
        Quantity::Moments => {
            let mut m = Map::new();
            m.insert(
                "quotient".into(),
                moments_json(&quotient_profile(a), &opts.moments),
            );
            m.insert(
                "diff_ratio".into(),
                moments_json(&diff_ratio_profile(a), &opts.moments),
            );
            out.put(q, Value::Object(m));
        }
        Quantity::DyadicLevels => {
            let q1 = dyadic_levels(&quotient_profile(a))?;
            let r1 = dyadic_levels(&diff_ratio_profile(a))?;
            out.put(q, json!({ "quotient": q1, "diff_ratio": r1 }));
        }
    }
    Ok(())
}
