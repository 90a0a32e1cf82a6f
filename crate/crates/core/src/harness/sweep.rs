use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::commute::{affine_energy, commute_count_set, Algorithm};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::generators::{gap, geometric, interval, GapSpec};
use crate::measures::ScalarSet;
use crate::profiles::{energy_additive_set, energy_mult_set};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `[N]`.
    Interval,
    /// `{2, 4, …, 2^N}`.
    Geometric,
    /// Two-dimensional progression `{1 + a + 2k·b : 0 ≤ a, b < k}`.
    Gap,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Interval => "interval",
            Family::Geometric => "geometric",
            Family::Gap => "gap",
        }
    }

    pub fn build(self, param: u32) -> Result<ScalarSet> {
        match self {
            Family::Interval => interval(param),
            Family::Geometric => geometric(param, &Scalar::from_int(2)),
            Family::Gap => gap(&GapSpec {
                base: Scalar::one(),
                steps: vec![Scalar::one(), Scalar::from_int(2 * param as i64)],
                lengths: vec![param, param],
            }),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Family::Interval, Family::Geometric, Family::Gap]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "family",
                name: s.to_string(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub param: u32,
    pub size: usize,
    pub sumset: usize,
    pub productset: usize,
    pub doubling_sum: Scalar,
    pub doubling_product: Scalar,
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub energy_additive: BigInt,
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub energy_mult: BigInt,
    pub t: Scalar,
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub affine_energy: BigInt,
    pub t_over_size5: Scalar,
    pub e_over_size2: Scalar,
    /// `T² / (|A|⁸·M)`.
    pub c_meas_squared: Scalar,
    pub algorithm: Algorithm,
}

impl SweepRow {
    pub fn new(family: Family, param: u32) -> Result<SweepRow> {
        let a = family.build(param)?;
        let size = a.len();
        let n = Scalar::from_int(size as i64);
        let sumset = a.sumset_size();
        let productset = a.productset_size();
        let e = energy_additive_set(&a);
        let m = energy_mult_set(&a);
        let algorithm = Algorithm::ZeroPattern;
        let t = commute_count_set(&a, algorithm)?.total;
        let c_meas_squared = t.pow(2) / (n.pow(8) * Scalar::from_bigint(m.clone()));
        Ok(SweepRow {
            family,
            param,
            size,
            sumset,
            productset,
            doubling_sum: Scalar::from_int(sumset as i64) / &n,
            doubling_product: Scalar::from_int(productset as i64) / &n,
            t_over_size5: &t / n.pow(5),
            e_over_size2: Scalar::from_bigint(e.clone()) / n.pow(2),
            affine_energy: affine_energy(&a)?,
            energy_additive: e,
            energy_mult: m,
            t,
            c_meas_squared,
            algorithm,
        })
    }
}

pub fn sweep(family: Family, range: (u32, u32)) -> Result<Vec<SweepRow>> {
    if range.0 == 0 || range.0 > range.1 {
        return Err(Error::invalid("sweep range must be positive and ordered"));
    }
    (range.0..=range.1)
        .map(|p| SweepRow::new(family, p))
        .collect()
}

const HEADER: &str = "family,param,size,sumset,productset,doubling_sum,doubling_product,\
energy_additive,energy_mult,T,affine_energy,t_over_size5,e_over_size2,c_meas_squared,algorithm,\
approx_t_over_size5,approx_e_over_size2,approx_c_meas";

/// Exact columns first; trailing `approx_*` columns are decimal renderings.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6}\n",
            r.family,
            r.param,
            r.size,
            r.sumset,
            r.productset,
            r.doubling_sum,
            r.doubling_product,
            r.energy_additive,
            r.energy_mult,
            r.t,
            r.affine_energy,
            r.t_over_size5,
            r.e_over_size2,
            r.c_meas_squared,
            r.algorithm,
            r.t_over_size5.to_f64(),
            r.e_over_size2.to_f64(),
            r.c_meas_squared.to_f64().sqrt(),
        ));
    }
    out
}
