//! `δ(μ)`: the largest mass of a support subset spanning at most two
//! dimensions.
//!
//! A subset of dimension ≤ 2 lies in the span of at most two of its own
//! elements, so it suffices to scan `{0}`, the lines through single atoms,
//! and the planes through independent pairs of atoms.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rref, Mat2, Scalar};
use crate::measures::MatrixMeasure;

/// Indices refer to the measure's canonical atom order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaWitness {
    Zero,
    Line(usize),
    Plane(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub delta: Scalar,
    pub witness: DeltaWitness,
    pub basis: Vec<Mat2>,
}

pub fn delta(mu: &MatrixMeasure) -> Result<Scalar> {
    delta_report(mu).map(|r| r.delta)
}

fn vector(m: &Mat2) -> Vec<Scalar> {
    m.entries().into_iter().cloned().collect()
}

type PlaneMap = HashMap<Vec<Scalar>, ((usize, usize), BTreeSet<usize>)>;

fn merge_planes(mut a: PlaneMap, b: PlaneMap) -> PlaneMap {
    for (key, (pair, members)) in b {
        match a.get_mut(&key) {
            Some((p, m)) => {
                *p = (*p).min(pair);
                m.extend(members);
            }
            None => {
                a.insert(key, (pair, members));
            }
        }
    }
    a
}

/// Maximum mass with its witness; ties go to the least witness.
pub fn delta_report(mu: &MatrixMeasure) -> Result<DeltaReport> {
    if mu.is_empty() {
        return Err(Error::EmptySupport);
    }
    let atoms: Vec<(&Mat2, &Scalar)> = mu.iter().collect();
    let zero_mass = mu.weight(&Mat2::zero());
    let nonzero: Vec<usize> = (0..atoms.len())
        .filter(|&i| !atoms[i].0.is_zero())
        .collect();

    let mut best: (Scalar, DeltaWitness) = (zero_mass.clone(), DeltaWitness::Zero);
    let mut consider = |mass: Scalar, witness: DeltaWitness| {
        if mass > best.0 || (mass == best.0 && witness < best.1) {
            best = (mass, witness);
        }
    };

    let mut lines: HashMap<Vec<Scalar>, (usize, Scalar)> = HashMap::new();
    for &i in &nonzero {
        let mut rows = vec![vector(atoms[i].0)];
        rref(&mut rows);
        let entry = lines
            .entry(rows.pop().expect("nonzero row"))
            .or_insert((i, Scalar::zero()));
        entry.1 += atoms[i].1;
    }
    for (first, mass) in lines.into_values() {
        consider(mass + &zero_mass, DeltaWitness::Line(first));
    }

    let planes: PlaneMap = nonzero
        .par_iter()
        .enumerate()
        .fold(HashMap::new, |mut acc: PlaneMap, (pos, &i)| {
            for &j in &nonzero[pos + 1..] {
                let mut rows = vec![vector(atoms[i].0), vector(atoms[j].0)];
                rref(&mut rows);
                if rows.len() < 2 {
                    continue;
                }
                let key: Vec<Scalar> = rows.into_iter().flatten().collect();
                let entry = acc.entry(key).or_insert(((i, j), BTreeSet::new()));
                entry.0 = entry.0.min((i, j));
                entry.1.insert(i);
                entry.1.insert(j);
            }
            acc
        })
        .reduce(HashMap::new, merge_planes);
    for ((i, j), members) in planes.into_values() {
        let mass: Scalar = members.iter().map(|&k| atoms[k].1).sum();
        consider(mass + &zero_mass, DeltaWitness::Plane(i, j));
    }

    let (delta, witness) = best;
    let basis = match witness {
        DeltaWitness::Zero => vec![],
        DeltaWitness::Line(i) => vec![atoms[i].0.clone()],
        DeltaWitness::Plane(i, j) => vec![atoms[i].0.clone(), atoms[j].0.clone()],
    };
    Ok(DeltaReport {
        delta,
        witness,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: [[i64; 2]; 2]) -> Mat2 {
        Mat2::from_ints(rows)
    }

    #[test]
    fn small_supports_take_everything() {
        let one = MatrixMeasure::uniform([m([[1, 2], [3, 4]])]).unwrap();
        assert_eq!(delta(&one).unwrap(), Scalar::one());
        let two = MatrixMeasure::new([
            (m([[1, 0], [0, 0]]), Scalar::ratio(1, 3)),
            (m([[0, 0], [0, 5]]), Scalar::ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(delta(&two).unwrap(), Scalar::ratio(5, 6));
    }

    #[test]
    fn plane_containment() {
        let mu = MatrixMeasure::uniform([
            Mat2::identity(),
            Mat2::scalar(2.into()),
            m([[0, 1], [0, 0]]),
        ])
        .unwrap();
        let r = delta_report(&mu).unwrap();
        assert_eq!(r.delta, Scalar::one());
        assert!(matches!(r.witness, DeltaWitness::Plane(..)));
    }

    #[test]
    fn units_give_half() {
        let units = [
            m([[1, 0], [0, 0]]),
            m([[0, 1], [0, 0]]),
            m([[0, 0], [1, 0]]),
            m([[0, 0], [0, 1]]),
        ];
        let mu = MatrixMeasure::uniform(units).unwrap();
        let r = delta_report(&mu).unwrap();
        assert_eq!(r.delta, Scalar::ratio(1, 2));
        assert_eq!(r.witness, DeltaWitness::Plane(0, 1));
    }

    #[test]
    fn zero_matrix_joins_every_subspace() {
        let mu = MatrixMeasure::uniform([
            Mat2::zero(),
            m([[1, 0], [0, 0]]),
            m([[0, 1], [0, 0]]),
            m([[0, 0], [1, 0]]),
        ])
        .unwrap();
        assert_eq!(delta(&mu).unwrap(), Scalar::ratio(3, 4));
        let only_zero = MatrixMeasure::uniform([Mat2::zero()]).unwrap();
        let r = delta_report(&only_zero).unwrap();
        assert_eq!((r.delta, r.witness), (Scalar::one(), DeltaWitness::Zero));
    }

    #[test]
    fn empty_support_errors() {
        let empty = MatrixMeasure::new([]).unwrap();
        assert_eq!(delta(&empty), Err(Error::EmptySupport));
    }
}
