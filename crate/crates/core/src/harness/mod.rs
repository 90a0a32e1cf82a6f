//! Reports, verification suites and parameter sweeps shared by the CLI and
//! the acceptance tests.
//!
//! Every report is a pure function of its inputs: exact sums are merged in
//! any order and all maps serialize sorted, so output bytes do not depend on
//! the thread count.

mod compute;
mod suites;
mod sweep;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub use compute::{compute, ComputeOptions, Input, Quantity};
pub use suites::{run_suite, Suite, SuiteReport, Verdict, VerifyOptions};
pub use sweep::{sweep, sweep_csv, Family, SweepRow};

pub const SCHEMA: &str = "commute-lab/report/v1";

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("thread count must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::invalid(format!("cannot start thread pool: {e}"))),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Wraps a JSON object in the versioned envelope.
pub(crate) fn envelope(command: &str, body: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), SCHEMA.into());
    map.insert("command".into(), command.into());
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

/// Instance seed `i` of a run seeded with `seed`.
pub fn instance_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i)
}

/// `[lo, hi]` from `"lo..hi"`, `"lo..=hi"` or a single integer.
pub fn parse_range(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::parse(1, 1, format!("invalid range `{text}`"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (text, text),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}
