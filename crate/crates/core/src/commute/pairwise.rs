use rayon::prelude::*;

use super::{Algorithm, CommuteReport};
use crate::exact::{commutes, Mat2, Scalar};
use crate::measures::Weights;

fn nondegenerate(x: &Mat2, y: &Mat2) -> bool {
    [&x.a12, &x.a21, &y.a12, &y.a21]
        .iter()
        .all(|c| !c.is_zero())
        && x.a11 != x.a22
        && y.a11 != y.a22
}

/// Direct sum over ordered pairs of the product measure's support.
pub(crate) fn count(w: &Weights) -> CommuteReport {
    let atoms: Vec<(&Scalar, &Scalar)> = w.iter().collect();
    let mut mats: Vec<(Mat2, Scalar)> = Vec::with_capacity(atoms.len().pow(4));
    for (a, wa) in &atoms {
        for (b, wb) in &atoms {
            for (c, wc) in &atoms {
                for (d, wd) in &atoms {
                    let m = Mat2::new((*a).clone(), (*b).clone(), (*c).clone(), (*d).clone());
                    mats.push((m, *wa * *wb * *wc * *wd));
                }
            }
        }
    }
    let (h1, h2) = mats
        .par_iter()
        .map(|(x, wx)| {
            let (mut h1, mut h2) = (Scalar::zero(), Scalar::zero());
            for (y, wy) in &mats {
                if commutes(x, y) {
                    let m = wx * wy;
                    if nondegenerate(x, y) {
                        h2 += m;
                    } else {
                        h1 += m;
                    }
                }
            }
            (h1, h2)
        })
        .reduce(
            || (Scalar::zero(), Scalar::zero()),
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
    CommuteReport::new(h1, h2, Algorithm::Pairwise)
}
