//! Integer invariants of a triple `(n, d, k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The decompositions attached to `(n, d, k)`:
///
/// * `d = n a - t` with `0 <= t < n` (the type `O(a)^(n-t) + O(a-1)^t`),
/// * `d = n a' + s` with `0 <= s < n` (the same type written from below),
/// * `k a - t = l (n - k) + m` with `0 <= m < n - k`, only when `k < n`,
/// * the Brill-Noether number `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Numerology {
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub a: i64,
    pub t: i64,
    pub a_floor: i64,
    pub s: i64,
    pub l: Option<i64>,
    pub m: Option<i64>,
    pub beta: i64,
}

pub fn decompose(n: i64, d: i64, k: i64) -> Result<Numerology> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("rank n = {n} must be at least 2")));
    }
    if k < 0 {
        return Err(Error::InvalidInput(format!("k = {k} must be non-negative")));
    }
    let a_floor = d.div_euclid(n);
    let s = d.rem_euclid(n);
    let (a, t) = if s == 0 { (a_floor, 0) } else { (a_floor + 1, n - s) };
    let (l, m) = if k < n {
        let lhs = k * a - t;
        (Some(lhs.div_euclid(n - k)), Some(lhs.rem_euclid(n - k)))
    } else {
        (None, None)
    };
    Ok(Numerology { n, d, k, a, t, a_floor, s, l, m, beta: brill_noether(n, d, k) })
}

pub fn brill_noether(n: i64, d: i64, k: i64) -> i64 {
    -n * n + 1 - k * (k - d - n)
}

/// All `d <= d_max` of the form `n(n-1) l + m n + t (n-1)` with `l > 0`,
/// `0 <= t < n`, `0 <= m < n - 1`; these are the degrees carrying stable
/// systems with one section.
pub fn valid_degrees_k1(n: i64, d_max: i64) -> Vec<i64> {
    assert!(n >= 2, "rank must be at least 2");
    let mut out = Vec::new();
    let step = n * (n - 1);
    let mut l = 1;
    while step * l <= d_max {
        for m in 0..n - 1 {
            for t in 0..n {
                let d = step * l + m * n + t * (n - 1);
                if d <= d_max {
                    out.push(d);
                }
            }
        }
        l += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}
