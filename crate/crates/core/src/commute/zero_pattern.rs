//! Table-driven count of commuting pairs by zero pattern.
//!
//! `X` and `Y` commute iff
//!
//! ```text
//! E1: x2·y3 = x3·y2
//! E2: x2·dy = y2·dx
//! E3: x3·dy = y3·dx
//! ```
//!
//! with `dx = x4 − x1`, `dy = y4 − y1`. Fixing which of the six variables
//! `(x2, x3, y2, y3, dx, dy)` vanish turns each equation into `0 = 0`, a
//! contradiction `0 = nonzero`, or a bilinear equation among nonzero values.
//! Any two bilinear equations force all six variables nonzero, so the
//! surviving shapes are: none, exactly one equation, or all three.

use rayon::prelude::*;
use serde::Serialize;

use super::{Algorithm, CommuteReport};
use crate::exact::Scalar;
use crate::measures::Weights;
use crate::profiles::{coupled_difference, difference_profile, quotient_profile};

pub const VARIABLES: [&str; 6] = ["x2", "x3", "y2", "y3", "x4-x1", "y4-y1"];

/// Factor indices `(lhs, rhs)` of each equation.
const EQUATIONS: [([usize; 2], [usize; 2]); 3] =
    [([0, 3], [1, 2]), ([0, 5], [2, 4]), ([1, 5], [3, 4])];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqStatus {
    TriviallyTrue,
    Contradiction,
    Bucketed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternRow {
    /// Bit `i` set means variable `i` is nonzero.
    pub mask: u8,
    pub status: [EqStatus; 3],
    pub weight: Scalar,
}

impl PatternRow {
    pub fn nonzero(&self, var: usize) -> bool {
        self.mask >> var & 1 == 1
    }

    pub fn offdiag_nonzero(&self) -> bool {
        self.mask & 0b1111 == 0b1111
    }
}

pub fn statuses(mask: u8) -> [EqStatus; 3] {
    let nz = |i: usize| mask >> i & 1 == 1;
    EQUATIONS.map(|(l, r)| {
        let lhs = nz(l[0]) && nz(l[1]);
        let rhs = nz(r[0]) && nz(r[1]);
        match (lhs, rhs) {
            (false, false) => EqStatus::TriviallyTrue,
            (true, true) => EqStatus::Bucketed,
            _ => EqStatus::Contradiction,
        }
    })
}

/// Sums the bucketed equations draw on.
struct Ingredients {
    /// `ν(0)` and `Σ_{x≠0} ν(x)`.
    scalar: [Scalar; 2],
    /// `D(0)` and `Σ_{d≠0} D(d)`.
    diff: [Scalar; 2],
    /// `Σ_z q(z)²`.
    m: Scalar,
    /// `Σ_z q(z)·p(z)`.
    qp: Scalar,
    /// `Σ_z q(z)²·p(z)`.
    qqp: Scalar,
}

impl Ingredients {
    fn new(w: &Weights) -> Self {
        let zero = Scalar::zero();
        let at_zero = w.weight(&zero);
        let total = w.total();
        let nonzero = &total - &at_zero;
        let diffs = difference_profile(w);
        let d0 = diffs.get(&zero);
        let d1 = total.pow(2) - &d0;
        let q = quotient_profile(w);
        let terms: Vec<(&Scalar, &Scalar)> = q.iter().collect();
        let (m, qp, qqp) = terms
            .par_iter()
            .map(|(z, qz)| {
                let p = coupled_difference(&diffs, z, false);
                let qp = *qz * &p;
                (qz.pow(2), qp.clone(), &qp * *qz)
            })
            .reduce(
                || (Scalar::zero(), Scalar::zero(), Scalar::zero()),
                |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
            );
        Ingredients {
            scalar: [at_zero, nonzero],
            diff: [d0, d1],
            m,
            qp,
            qqp,
        }
    }

    fn free_factor(&self, var: usize, nonzero: bool) -> &Scalar {
        let pair = if var < 4 { &self.scalar } else { &self.diff };
        &pair[nonzero as usize]
    }

    fn row(&self, mask: u8) -> PatternRow {
        let status = statuses(mask);
        let active: Vec<usize> = (0..3)
            .filter(|&e| status[e] == EqStatus::Bucketed)
            .collect();
        let weight = if status.contains(&EqStatus::Contradiction) {
            Scalar::zero()
        } else {
            let (term, used): (Scalar, u8) = match active.as_slice() {
                [] => (Scalar::one(), 0),
                [0] => (self.m.clone(), 0b001111),
                [1] => (self.qp.clone(), 0b110101),
                [2] => (self.qp.clone(), 0b111010),
                [0, 1, 2] => (self.qqp.clone(), 0b111111),
                other => unreachable!("active equations {other:?}"),
            };
            (0..6)
                .filter(|&v| used >> v & 1 == 0)
                .fold(term, |acc, v| acc * self.free_factor(v, mask >> v & 1 == 1))
        };
        PatternRow {
            mask,
            status,
            weight,
        }
    }
}

/// All 64 rows; their weights sum to `T(μ_ν)`.
pub fn zero_pattern_table(w: &Weights) -> Vec<PatternRow> {
    let ing = Ingredients::new(w);
    (0..64u8).map(|mask| ing.row(mask)).collect()
}

pub(crate) fn count(w: &Weights) -> CommuteReport {
    let table = zero_pattern_table(w);
    let h2 = table[63].weight.clone();
    let h1 = table[..63].iter().map(|r| &r.weight).sum();
    CommuteReport::new(h1, h2, Algorithm::ZeroPattern)
}

/// Commuting mass with at least one off-diagonal entry equal to zero.
pub fn offdiag_degenerate_count(w: &Weights) -> Scalar {
    zero_pattern_table(w)
        .iter()
        .filter(|r| !r.offdiag_nonzero())
        .map(|r| &r.weight)
        .sum()
}
