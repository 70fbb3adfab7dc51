//! Arithmetic in the prime field F_q.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 101;

/// An element of F_q, stored as its residue in `[0, q)`.
///
/// Elements do not carry their modulus; every operation goes through the
/// [`PrimeField`] they belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fp(pub u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    q: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        PrimeField::new(q)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.q
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { q: DEFAULT_PRIME }
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = q as u64;
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        // keeps products of two residues inside u64
        if q >= 1 << 31 {
            return Err(Error::InvalidInput(format!("modulus {q} too large")));
        }
        if !is_prime(q) {
            return Err(Error::InvalidInput(format!("{q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.q as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + b.0 as u64;
        Fp((s % self.q as u64) as u32)
    }

    #[inline]
    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + self.q as u64 - b.0 as u64;
        Fp((s % self.q as u64) as u32)
    }

    #[inline]
    pub fn neg(&self, a: Fp) -> Fp {
        if a.0 == 0 {
            a
        } else {
            Fp(self.q - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.q as u64) as u32)
    }

    pub fn pow(&self, mut base: Fp, mut exp: u64) -> Fp {
        let mut acc = Fp::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fp) -> Fp {
        assert!(!a.is_zero(), "inverse of zero in F_{}", self.q);
        self.pow(a, self.q as u64 - 2)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp(rng.gen_range(0..self.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp(rng.gen_range(1..self.q))
    }

    /// All elements `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = Fp> {
        (0..self.q).map(Fp)
    }

    /// The `q + 1` points of P^1(F_q) as `(b, c)` pairs, normalized so the
    /// first nonzero coordinate is 1.
    pub fn projective_line(&self) -> Vec<(Fp, Fp)> {
        let mut pts: Vec<(Fp, Fp)> = self.elements().map(|c| (Fp::ONE, c)).collect();
        pts.push((Fp::ZERO, Fp::ONE));
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn inverse_round_trips() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            let a = Fp(a);
            assert_eq!(f.mul(a, f.inv(a)), Fp::ONE);
        }
    }

    #[test]
    fn elem_reduces_negatives() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.elem(-1), Fp(6));
        assert_eq!(f.elem(15), Fp(1));
        assert_eq!(f.sub(Fp(2), Fp(5)), Fp(4));
    }

    #[test]
    fn projective_line_has_q_plus_one_points() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.projective_line().len(), 6);
    }
}
