use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::sweep::{sweep, Family, SweepRow};
use super::{envelope, instance_seed};
use crate::commute::{
    affine_energy, affine_energy_variant, commute_count_measure, commute_count_product_measure,
    commute_count_set, commute_offdiag_nonzero_count, delta, offdiag_degenerate_count,
    theorem1_check, AffineForm, Algorithm,
};
use crate::error::{Error, Result};
use crate::exact::Mat2;
use crate::exact::Scalar;
use crate::generators::{
    commuting_plane_example, geometric, interval, random_matrix_measure, random_measure,
    random_pencil_measure, random_set, rng, sharp_example,
};
use crate::measures::{
    norm, product_measure_capped, uniform_on, AsWeights, Exponent, MatrixMeasure, ScalarSet,
};
use crate::oracle::{self, Caps};
use crate::profiles::{
    affine_energy_asym, asym_commute_count, energy_additive_set, energy_mult_set,
    mixed_additive_energy, quotient_profile, restricted_energy,
};
use crate::roots::compare_root_sums;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem1,
    SharpRatio,
    AffineBijection,
    LowerBounds,
    Wtun,
    ClosedForms,
    Growth,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Theorem1,
        Suite::SharpRatio,
        Suite::AffineBijection,
        Suite::LowerBounds,
        Suite::Wtun,
        Suite::ClosedForms,
        Suite::Growth,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::SharpRatio => "sharp-ratio",
            Suite::AffineBijection => "affine-bijection",
            Suite::LowerBounds => "lower-bounds",
            Suite::Wtun => "wtun",
            Suite::ClosedForms => "closed-forms",
            Suite::Growth => "growth",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || x.name().replace('-', "_") == s)
            .ok_or_else(|| Error::Unknown {
                kind: "suite",
                name: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub verdict: Verdict,
    pub params: Value,
    pub summary: Map<String, Value>,
    pub failures: Vec<String>,
    pub rows: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_value(&self) -> Value {
        envelope(
            "verify",
            serde_json::to_value(self).expect("reports serialize"),
        )
    }

    pub fn to_json(&self) -> String {
        super::to_json(&self.to_value())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: Option<usize>,
    /// Instance sizes (set cardinality or atom count).
    pub sizes: Option<(u32, u32)>,
    /// Family parameter range.
    pub n: Option<(u32, u32)>,
    pub caps: Caps,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 7,
            trials: None,
            sizes: None,
            n: None,
            caps: Caps::default(),
        }
    }
}

#[derive(Default)]
struct Run {
    rows: Vec<Value>,
    failures: Vec<String>,
    summary: Map<String, Value>,
}

impl Run {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures.push(what());
        }
        ok
    }

    fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(
            key.into(),
            serde_json::to_value(value).expect("serializable"),
        );
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut run = Run::default();
    let params = match suite {
        Suite::Theorem1 => theorem1(opts, &mut run)?,
        Suite::SharpRatio => sharp_ratio(opts, &mut run)?,
        Suite::AffineBijection => affine_bijection(opts, &mut run)?,
        Suite::LowerBounds => lower_bounds(opts, &mut run)?,
        Suite::Wtun => wtun(opts, &mut run)?,
        Suite::ClosedForms => closed_forms(opts, &mut run)?,
        Suite::Growth => growth(opts, &mut run)?,
        Suite::Oracle => oracle_suite(opts, &mut run)?,
    };
    run.note("instances", run.rows.len());
    run.note("violations", run.failures.len());
    Ok(SuiteReport {
        suite,
        verdict: if run.failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        params,
        summary: run.summary,
        failures: run.failures,
        rows: run.rows,
    })
}

fn int(n: u64) -> Scalar {
    Scalar::from_bigint(BigInt::from(n))
}

fn span(range: (u32, u32)) -> usize {
    (range.1 - range.0 + 1) as usize
}

fn require_positive(range: (u32, u32), what: &str) -> Result<(u32, u32)> {
    if range.0 == 0 || range.0 > range.1 {
        return Err(Error::invalid(format!(
            "{what} range must be positive and ordered"
        )));
    }
    Ok(range)
}

fn theorem1(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let trials = opts.trials.unwrap_or(1000);
    let sizes = require_positive(opts.sizes.unwrap_or((1, 10)), "atom")?;
    let mut instances: Vec<(String, MatrixMeasure)> = Vec::new();
    for i in 0..trials {
        let s = instance_seed(opts.seed, i as u64);
        let atoms = sizes.0 as usize + i % span(sizes);
        let (label, mu) = match i % 4 {
            0 | 1 => (
                format!("random-matrix:{atoms}:-1:1:{s}"),
                random_matrix_measure(atoms, -1, 1, s)?,
            ),
            2 => (
                format!("random-matrix:{atoms}:-3:3:{s}"),
                random_matrix_measure(atoms, -3, 3, s)?,
            ),
            _ => (
                format!("pencil:{atoms}:2:{s}"),
                random_pencil_measure(atoms, 2, s)?,
            ),
        };
        instances.push((label, mu));
    }
    for n in 2..=6 {
        instances.push((format!("sharp:{n}"), sharp_example(n)?));
    }
    let jordan = Mat2::from_ints([[1, 1], [0, 1]]);
    for n in 2..=4 {
        instances.push((
            format!("plane:{n}"),
            commuting_plane_example(n, &Mat2::identity(), &jordan)?,
        ));
    }
    for v in [&[0, 1][..], &[1, 2], &[0, 1, 2], &[-1, 0, 1], &[1, 2, 3]] {
        let a = ScalarSet::from_ints(v.iter().copied());
        let mu = product_measure_capped(&uniform_on(&a)?, opts.caps.materialize)?;
        instances.push((format!("product:{}", list(&a)), mu));
    }
    let mut best: Option<(Scalar, String)> = None;
    for (label, mu) in &instances {
        let c = theorem1_check(mu)?;
        let ratio = &c.t / &c.delta;
        run.check(c.holds, || {
            format!("{label}: T = {} exceeds 8·δ = 8·{}", c.t, c.delta)
        });
        if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
            best = Some((ratio.clone(), label.clone()));
        }
        run.rows.push(json!({
            "instance": label, "atoms": mu.len(), "T": c.t, "delta": c.delta,
            "T_over_delta": ratio, "holds": c.holds,
        }));
    }
    if let Some((ratio, label)) = best {
        run.note("max_T_over_delta", ratio);
        run.note("max_instance", label);
    }
    Ok(json!({ "seed": opts.seed, "trials": trials, "sizes": [sizes.0, sizes.1] }))
}

fn list(a: &ScalarSet) -> String {
    a.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// `(2N³ + N) / (3N⁴)`.
pub fn sharp_closed_form(n: u32) -> Scalar {
    let n = int(n as u64);
    (Scalar::from_int(2) * n.pow(3) + &n) / (Scalar::from_int(3) * n.pow(4))
}

fn sharp_ratio(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let range = opts.n.unwrap_or((2, 10));
    if range.0 < 2 || range.0 > range.1 {
        return Err(Error::invalid("sharp example needs 2 ≤ N_lo ≤ N_hi"));
    }
    let two_thirds = Scalar::ratio(2, 3);
    let mut prev: Option<Scalar> = None;
    for n in range.0..=range.1 {
        let mu = sharp_example(n)?;
        let t = commute_count_measure(&mu);
        let closed = sharp_closed_form(n);
        let nt = int(n as u64) * &t;
        run.check(t == closed, || {
            format!("N = {n}: T = {t}, closed form {closed}")
        });
        run.check(nt > two_thirds, || {
            format!("N = {n}: N·T = {nt} not above 2/3")
        });
        if let Some(p) = &prev {
            run.check(nt < *p, || {
                format!("N = {n}: N·T = {nt} did not decrease from {p}")
            });
        }
        let mut row = json!({ "N": n, "T": t, "closed_form": closed, "N_times_T": nt });
        let bound = Scalar::ratio(1, n as i64);
        if n <= 6 {
            let d = delta(&mu)?;
            run.check(d <= bound, || format!("N = {n}: δ = {d} above 1/N"));
            row["delta"] = json!(d);
        }
        if n <= 4 {
            let slow_t = oracle::brute_t_measure(&mu, &opts.caps)?;
            let slow_d = oracle::brute_delta(&mu, &opts.caps)?;
            run.check(slow_t == t, || {
                format!("N = {n}: oracle T = {slow_t}, fast {t}")
            });
            run.check(slow_d <= bound, || {
                format!("N = {n}: oracle δ = {slow_d} above 1/N")
            });
            if let Some(d) = row.get("delta") {
                run.check(*d == json!(slow_d), || {
                    format!("N = {n}: oracle δ = {slow_d}, fast {d}")
                });
            }
            row["oracle_T"] = json!(slow_t);
            row["oracle_delta"] = json!(slow_d);
        }
        run.rows.push(row);
        prev = Some(nt);
    }
    if let Some(p) = prev {
        run.note("last_N_times_T", p);
    }
    run.note("limit", two_thirds);
    Ok(json!({ "N": [range.0, range.1] }))
}

fn affine_bijection(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let trials = opts.trials.unwrap_or(100);
    let sizes = require_positive(opts.sizes.unwrap_or((1, 8)), "size")?;
    let mut sets: Vec<(String, ScalarSet)> = Vec::new();
    for i in 0..trials {
        let s = instance_seed(opts.seed, i as u64);
        let n = sizes.0 as usize + i % span(sizes);
        sets.push((format!("random:{n}:-12:12:{s}"), random_set(n, -12, 12, s)?));
    }
    let two = Scalar::from_int(2);
    for n in 1..=8 {
        sets.push((format!("interval:{n}"), interval(n)?));
        sets.push((format!("geometric:{n}:2"), geometric(n, &two)?));
    }
    for (label, a) in &sets {
        let offdiag = commute_offdiag_nonzero_count(a);
        let t = commute_count_set(a, Algorithm::ZeroPattern)?.total;
        let degenerate = offdiag_degenerate_count(&a.as_weights());
        let mut row = json!({ "instance": label, "size": a.len(), "T": t, "offdiag_nonzero": offdiag.to_string() });
        if a.without_zero().is_empty() {
            run.check(offdiag == BigInt::from(0), || {
                format!("{label}: nonzero off-diagonal count without nonzero entries")
            });
        } else {
            let e = affine_energy(a)?;
            let left = affine_energy_variant(a, AffineForm::LeftQuotient)?;
            let right = affine_energy_variant(a, AffineForm::RightQuotient)?;
            run.check(offdiag == e, || {
                format!("{label}: off-diagonal count {offdiag} ≠ affine energy {e}")
            });
            run.check(right == e, || {
                format!("{label}: direct composition gives {right}, bucketed {e}")
            });
            let gap = &t - Scalar::from_bigint(e.clone());
            run.check(!gap.is_negative(), || {
                format!("{label}: T − E(Aff) = {gap} is negative")
            });
            run.check(gap == degenerate, || {
                format!("{label}: T − E(Aff) = {gap}, degenerate count {degenerate}")
            });
            row["affine_energy"] = json!(e.to_string());
            row["left_quotient_form"] = json!(left.to_string());
            row["forms_agree"] = json!(left == e);
        }
        row["offdiag_degenerate"] = json!(degenerate);
        if a.len() <= 4 {
            let slow = oracle::brute_t_set_parts(a, &opts.caps)?;
            run.check(slow.offdiag_nonzero == offdiag, || {
                format!(
                    "{label}: oracle off-diagonal count {}",
                    slow.offdiag_nonzero
                )
            });
            row["oracle_offdiag_nonzero"] = json!(slow.offdiag_nonzero.to_string());
        }
        run.rows.push(row);
    }
    let disagreements = run
        .rows
        .iter()
        .filter(|r| r.get("forms_agree") == Some(&json!(false)))
        .count();
    run.note("left_right_form_disagreements", disagreements);
    Ok(json!({ "seed": opts.seed, "trials": trials, "sizes": [sizes.0, sizes.1] }))
}

fn lower_bounds(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let trials = opts.trials.unwrap_or(200);
    let sizes = require_positive(opts.sizes.unwrap_or((1, 8)), "size")?;
    let mut sets: Vec<(String, ScalarSet)> = Vec::new();
    for i in 0..trials {
        let s = instance_seed(opts.seed, i as u64);
        let n = sizes.0 as usize + i % span(sizes);
        sets.push((format!("random:{n}:-9:9:{s}"), random_set(n, -9, 9, s)?));
    }
    let two = Scalar::from_int(2);
    for n in 1..=10 {
        sets.push((format!("interval:{n}"), interval(n)?));
        sets.push((format!("geometric:{n}:2"), geometric(n, &two)?));
    }
    for (label, a) in &sets {
        let n = int(a.len() as u64);
        let t = commute_count_set(a, Algorithm::ZeroPattern)?.total;
        let e = Scalar::from_bigint(energy_additive_set(a));
        run.check(t >= n.pow(4), || format!("{label}: T = {t} below |A|⁴"));
        run.check(&e * int(a.sumset_size() as u64) >= n.pow(4), || {
            format!("{label}: E·|A+A| below |A|⁴")
        });
        let mut row = json!({ "instance": label, "size": a.len(), "T": t, "E": e, "sumset": a.sumset_size() });
        if a.contains_zero() {
            run.check(t >= n.pow(5), || {
                format!("{label}: T = {t} below |A|⁵ with 0 ∈ A")
            });
        } else {
            let q4: Scalar = quotient_profile(a).iter().map(|(_, m)| m.pow(4)).sum();
            let quotients = int(a.quotientset_size() as u64);
            run.check(t >= q4, || format!("{label}: T = {t} below Σ q′⁴ = {q4}"));
            run.check(&q4 * quotients.pow(3) >= n.pow(8), || {
                format!("{label}: Σ q′⁴ below |A|⁸/|A/A|³")
            });
            row["quotient_fourth_moment"] = json!(q4);
        }
        run.rows.push(row);
    }
    let measures = (trials / 2).max(1);
    for i in 0..measures {
        let s = instance_seed(opts.seed ^ 0x5eed, i as u64);
        let k = 1 + i % 6;
        let nu = random_measure(k, -4, 4, s)?;
        let t = commute_count_product_measure(&nu).total;
        let l2 = norm(&nu, Exponent::Finite(2));
        let floor = l2.pow(2) * crate::profiles::energy_additive(&nu);
        let label = format!("random-measure:{k}:-4:4:{s}");
        run.check(t >= floor, || {
            format!("{label}: T(μ_ν) = {t} below ‖ν‖₂⁴·E_ν = {floor}")
        });
        run.rows
            .push(json!({ "instance": label, "size": k, "T": t, "l2_fourth_times_energy": floor }));
    }
    Ok(json!({ "seed": opts.seed, "trials": trials, "sizes": [sizes.0, sizes.1] }))
}

fn wtun(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let trials = opts.trials.unwrap_or(500);
    let sizes = require_positive(opts.sizes.unwrap_or((2, 8)), "support")?;
    let mut ties = 0usize;
    for i in 0..trials {
        let s = instance_seed(opts.seed, i as u64);
        let k = sizes.0 as usize + i % span(sizes);
        let nu = random_measure(k, -6, 6, s)?;
        let w = nu.weights();
        let support: Vec<Scalar> = w.iter().map(|(x, _)| x.clone()).collect();
        let mut r = rng(instance_seed(s, 1));
        let subset = |r: &mut rand_chacha::ChaCha8Rng| -> ScalarSet {
            let forced = r.gen_range(0..support.len());
            support
                .iter()
                .enumerate()
                .filter(|(j, _)| *j == forced || r.gen_bool(0.5))
                .map(|(_, x)| x.clone())
                .collect()
        };
        let parts4: Vec<ScalarSet> = (0..4).map(|_| subset(&mut r)).collect();
        let restricted: Vec<_> = parts4.iter().map(|p| w.restrict(p)).collect();
        let mixed = mixed_additive_energy([
            &restricted[0],
            &restricted[1],
            &restricted[2],
            &restricted[3],
        ]);
        let product: Scalar = parts4.iter().map(|p| restricted_energy(w, p)).product();
        let mixed_ok = mixed.pow(4) <= product;
        run.check(mixed_ok, || {
            format!(
                "instance {i}: mixed energy⁴ {} above Π E_ν = {product}",
                mixed.pow(4)
            )
        });

        let s_parts = r.gen_range(1..=4usize);
        let mut parts: Vec<Vec<Scalar>> = vec![Vec::new(); s_parts];
        for x in &support {
            // Label s_parts leaves x out of the union.
            let label = r.gen_range(0..=s_parts);
            if label < s_parts {
                parts[label].push(x.clone());
            }
        }
        let parts: Vec<ScalarSet> = parts
            .into_iter()
            .filter(|p| !p.is_empty())
            .map(|p| p.into_iter().collect())
            .collect();
        let union: ScalarSet = parts.iter().flat_map(|p| p.iter().cloned()).collect();
        let (union_ok, part_energies, union_energy) = if union.is_empty() {
            (true, Vec::new(), Scalar::zero())
        } else {
            let energies: Vec<Scalar> = parts.iter().map(|p| restricted_energy(w, p)).collect();
            let whole = restricted_energy(w, &union);
            let ord = compare_root_sums(std::slice::from_ref(&whole), &energies, 4);
            ties += (ord == Ordering::Equal) as usize;
            (ord != Ordering::Greater, energies, whole)
        };
        run.check(union_ok, || {
            format!("instance {i}: union energy root above the sum of part roots")
        });
        run.rows.push(json!({
            "instance": i, "seed": s, "support": k,
            "mixed_energy_fourth": mixed.pow(4), "energy_product": product, "mixed_ok": mixed_ok,
            "parts": parts.len(), "union_energy": union_energy, "part_energies": part_energies, "union": union_ok,
        }));
    }
    run.note("union_exact_ties", ties);
    Ok(json!({ "seed": opts.seed, "trials": trials, "sizes": [sizes.0, sizes.1] }))
}

/// `(2N³ + N)/3`.
pub fn cubic_closed_form(n: u32) -> BigInt {
    let n = BigInt::from(n);
    (BigInt::from(2) * &n * &n * &n + &n) / 3
}

fn closed_forms(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let range = require_positive(opts.n.unwrap_or((2, 12)), "N")?;
    let two = Scalar::from_int(2);
    for n in range.0..=range.1 {
        let expected = cubic_closed_form(n);
        let a = interval(n)?;
        let g = geometric(n, &two)?;
        let e = energy_additive_set(&a);
        let m = energy_mult_set(&g);
        run.check(e == expected, || {
            format!("N = {n}: E([N]) = {e}, expected {expected}")
        });
        run.check(m == expected, || {
            format!("N = {n}: M(geometric) = {m}, expected {expected}")
        });
        let mut row = json!({ "N": n, "E_interval": e.to_string(), "M_geometric": m.to_string(), "closed_form": expected.to_string() });
        if n <= 5 {
            let slow_e = oracle::brute_e(&a, &opts.caps)?;
            let slow_m = oracle::brute_m(&g, &opts.caps)?;
            run.check(slow_e == Scalar::from_bigint(e.clone()), || {
                format!("N = {n}: oracle E = {slow_e}")
            });
            run.check(slow_m == Scalar::from_bigint(m.clone()), || {
                format!("N = {n}: oracle M = {slow_m}")
            });
            row["oracle_E"] = json!(slow_e);
            row["oracle_M"] = json!(slow_m);
        }
        run.rows.push(row);
    }
    Ok(json!({ "N": [range.0, range.1] }))
}

/// Ratio of a sweep column to its value at the reference row, checked to lie
/// within `[1/factor, factor]`.
fn within_factor(
    run: &mut Run,
    rows: &[SweepRow],
    what: &str,
    factor: i64,
    col: impl Fn(&SweepRow) -> Scalar,
) -> Scalar {
    let reference = rows
        .iter()
        .find(|r| r.param == 8)
        .or(rows.first())
        .map(&col)
        .expect("non-empty sweep");
    let (lo, hi) = (Scalar::ratio(1, factor), Scalar::from_int(factor));
    let mut worst = Scalar::one();
    for r in rows {
        let rel = col(r) / &reference;
        run.check(rel >= lo && rel <= hi, || {
            format!(
                "{} {}: {what} is {rel} times its reference value",
                r.family, r.param
            )
        });
        let spread = if rel < Scalar::one() {
            rel.recip().expect("positive")
        } else {
            rel
        };
        if spread > worst {
            worst = spread;
        }
    }
    worst
}

fn growth(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let intervals = opts.n.unwrap_or((4, 24));
    let geometrics = opts.n.unwrap_or((4, 20));
    let a = sweep(Family::Interval, intervals)?;
    let g = sweep(Family::Geometric, geometrics)?;
    let t_spread = within_factor(run, &a, "T/N⁵", 4, |r| r.t_over_size5.clone());
    let e_spread = within_factor(run, &g, "E/|A|²", 4, |r| r.e_over_size2.clone());
    // C² = T²/(|A|⁸·M); a factor 4 on C is a factor 16 on C².
    let ca = within_factor(run, &a, "C_meas²", 16, |r| r.c_meas_squared.clone());
    let cg = within_factor(run, &g, "C_meas²", 16, |r| r.c_meas_squared.clone());
    let c_max = a
        .iter()
        .chain(&g)
        .map(|r| r.c_meas_squared.clone())
        .max()
        .expect("non-empty");
    run.note("interval_T_over_N5_max_spread", t_spread);
    run.note("geometric_E_over_size2_max_spread", e_spread);
    run.note("interval_C_meas_squared_max_spread", ca);
    run.note("geometric_C_meas_squared_max_spread", cg);
    run.note("C_meas_squared_max", c_max);
    // Measured extremes only; these bounds carry unspecified constants.
    let size = |r: &SweepRow| Scalar::from_int(r.size as i64);
    let product_doubling_min = a
        .iter()
        .chain(&g)
        .map(|r| &r.t * r.doubling_product.pow(6) / size(r).pow(5))
        .min()
        .expect("non-empty");
    let energy_bound_max = a
        .iter()
        .chain(&g)
        .map(|r| {
            let e = Scalar::from_bigint(r.energy_additive.clone());
            &r.t / (size(r).pow(5) + size(r).pow(3) * e)
        })
        .max()
        .expect("non-empty");
    run.note(
        "T_times_product_doubling6_over_size5_min",
        product_doubling_min,
    );
    run.note("T_over_size5_plus_size3_E_max", energy_bound_max);
    for r in a.iter().chain(&g) {
        run.rows
            .push(serde_json::to_value(r).expect("serializable"));
    }
    Ok(
        json!({ "interval_N": [intervals.0, intervals.1], "geometric_N": [geometrics.0, geometrics.1] }),
    )
}

fn oracle_suite(opts: &VerifyOptions, run: &mut Run) -> Result<Value> {
    let trials = opts.trials.unwrap_or(200);
    let small = require_positive(opts.sizes.unwrap_or((1, 4)), "size")?;
    let large_trials = (trials / 4).max(50);
    let caps = &opts.caps;
    for i in 0..trials + large_trials {
        let s = instance_seed(opts.seed, i as u64);
        let (n, algorithms): (usize, &[Algorithm]) = if i < trials {
            (small.0 as usize + i % span(small), &Algorithm::ALL)
        } else {
            (5 + i % 2, &[Algorithm::ZeroPattern, Algorithm::Commutant])
        };
        let label = format!("random:{n}:-9:9:{s}");
        let a = random_set(n, -9, 9, s)?;
        let slow = oracle::brute_t_set(&a, caps)?;
        let mut row = json!({ "instance": label, "size": n, "oracle_T": slow.to_string() });
        for &alg in algorithms {
            let fast = commute_count_set(&a, alg)?.total;
            run.check(fast == Scalar::from_bigint(slow.clone()), || {
                format!("{label}: {alg} gives {fast}, oracle {slow}")
            });
            row[alg.name()] = json!(fast);
        }
        if n <= 4 {
            let e = energy_additive_set(&a);
            let m = energy_mult_set(&a);
            run.check(
                oracle::brute_e(&a, caps)? == Scalar::from_bigint(e.clone()),
                || format!("{label}: E disagrees"),
            );
            run.check(
                oracle::brute_m(&a, caps)? == Scalar::from_bigint(m.clone()),
                || format!("{label}: M disagrees"),
            );
            if !a.without_zero().is_empty() {
                let fast = affine_energy(&a)?;
                run.check(oracle::brute_affine_energy(&a, caps)? == fast, || {
                    format!("{label}: affine energy disagrees")
                });
                let c = a.without_zero();
                run.check(
                    oracle::brute_asym(&c, &a, caps)? == asym_commute_count(&c, &a)?,
                    || format!("{label}: asymmetric count disagrees"),
                );
                run.check(
                    oracle::brute_affine_asym(&c, &a, caps)? == affine_energy_asym(&c, &a)?,
                    || format!("{label}: asymmetric affine energy disagrees"),
                );
            }
            if n <= 2 {
                let mu = product_measure_capped(&uniform_on(&a)?, caps.materialize)?;
                run.check(oracle::brute_delta(&mu, caps)? == delta(&mu)?, || {
                    format!("{label}: δ disagrees")
                });
            }
            row["E"] = json!(e.to_string());
            row["M"] = json!(m.to_string());
        }
        run.rows.push(row);
    }
    let measures = (trials / 4).max(1);
    for i in 0..measures {
        let s = instance_seed(opts.seed ^ 0xbeef, i as u64);
        let k = 1 + i % 3;
        let nu = random_measure(k, -3, 3, s)?;
        let mu = product_measure_capped(&nu, caps.materialize)?;
        let fast = commute_count_product_measure(&nu).total;
        let slow = oracle::brute_t_measure(&mu, caps)?;
        let label = format!("random-measure:{k}:-3:3:{s}");
        run.check(fast == slow, || {
            format!("{label}: T(μ_ν) = {fast}, oracle {slow}")
        });
        run.rows
            .push(json!({ "instance": label, "size": k, "T": fast, "oracle_T": slow }));
    }
    run.note("small_sets", trials);
    run.note("large_sets", large_trials);
    Ok(json!({ "seed": opts.seed, "trials": trials, "sizes": [small.0, small.1] }))
}
