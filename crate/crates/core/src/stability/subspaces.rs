//! Enumeration of the F_q-rational subspaces of F_q^k.
//!
//! Each subspace of dimension `w` is produced once, as its reduced row
//! echelon basis. Order: pivot sets lexicographically, then free entries as
//! an odometer (last entry fastest).

use itertools::Itertools;

use crate::exactmath::{Fp, PrimeField};

pub struct Subspaces {
    k: usize,
    q: u32,
    pivot_sets: std::vec::IntoIter<Vec<usize>>,
    pivots: Vec<usize>,
    /// `(row, col)` of each free entry for the current pivot set.
    free: Vec<(usize, usize)>,
    odometer: Option<Vec<u32>>,
}

impl Subspaces {
    pub fn new(k: usize, w: usize, field: &PrimeField) -> Self {
        let pivot_sets: Vec<Vec<usize>> = if w <= k { (0..k).combinations(w).collect() } else { Vec::new() };
        let mut s = Subspaces {
            k,
            q: field.q(),
            pivot_sets: pivot_sets.into_iter(),
            pivots: Vec::new(),
            free: Vec::new(),
            odometer: None,
        };
        s.next_pivot_set();
        s
    }

    fn next_pivot_set(&mut self) {
        match self.pivot_sets.next() {
            Some(p) => {
                self.free = p
                    .iter()
                    .enumerate()
                    .flat_map(|(row, &pc)| (pc + 1..self.k).filter(|c| !p.contains(c)).map(move |c| (row, c)))
                    .collect();
                self.odometer = Some(vec![0; self.free.len()]);
                self.pivots = p;
            }
            None => self.odometer = None,
        }
    }

    fn current(&self, digits: &[u32]) -> Vec<Vec<Fp>> {
        let mut basis = vec![vec![Fp::ZERO; self.k]; self.pivots.len()];
        for (row, &pc) in self.pivots.iter().enumerate() {
            basis[row][pc] = Fp::ONE;
        }
        for (&(row, col), &v) in self.free.iter().zip(digits) {
            basis[row][col] = Fp(v);
        }
        basis
    }
}

impl Iterator for Subspaces {
    type Item = Vec<Vec<Fp>>;

    fn next(&mut self) -> Option<Self::Item> {
        let digits = self.odometer.as_mut()?;
        let out_digits = digits.clone();
        let mut i = digits.len();
        let mut carried = true;
        while carried && i > 0 {
            i -= 1;
            digits[i] += 1;
            if digits[i] == self.q {
                digits[i] = 0;
            } else {
                carried = false;
            }
        }
        let out = self.current(&out_digits);
        if carried {
            self.next_pivot_set();
        }
        Some(out)
    }
}

/// Number of `w`-dimensional subspaces of F_q^k (a Gaussian binomial),
/// saturating at `u128::MAX`.
pub fn subspace_count(k: usize, w: usize, q: u32) -> u128 {
    if w > k {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..w {
        let top = q.checked_pow((k - i) as u32).map(|p| p - 1);
        let bottom = q.pow((i + 1) as u32) - 1;
        match top.and_then(|t| num.checked_mul(t)) {
            Some(v) => num = v,
            None => return u128::MAX,
        }
        den *= bottom;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
