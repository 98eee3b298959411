use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sizes for the common-detector partial-share bound: `a = |A|` vertices
/// all watched by the same `d = |D|` detectors in a `k`-distinguishing set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaBoundQuery {
    pub a: u32,
    pub d: u32,
    pub k: u32,
}

impl LemmaBoundQuery {
    pub fn new(a: u32, d: u32, k: u32) -> Result<Self> {
        if a == 0 || d == 0 {
            return Err(Error::InvalidArgument(format!("need a >= 1 and d >= 1, got a={a}, d={d}")));
        }
        Ok(LemmaBoundQuery { a, d, k })
    }
}

/// Upper bound on the partial share of a detector in `D` over `A`.
///
/// If some vertex of `A` is watched by `D` alone, every other one is watched
/// by at least `d + k` detectors; otherwise all are watched by at least
/// `d + 1`. The larger of the two sums is returned.
pub fn lemma_bound(q: LemmaBoundQuery) -> Rational {
    let (a, d, k) = (q.a as i64, q.d as i64, q.k as i64);
    if a * d * (k - 1) >= (d + 1) * k {
        Rational::new(a, d + 1)
    } else {
        Rational::new(1, d) + Rational::new(a - 1, d + k)
    }
}
