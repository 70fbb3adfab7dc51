//! Binary forms (homogeneous polynomials in `x, y`) over F_q.
//!
//! Coefficients are stored big-endian in `x`: index `i` holds the
//! coefficient of `x^(deg - i) y^i`. The same convention is used by the
//! instance file format.

use rand::Rng;

use super::field::{Fp, PrimeField};
use super::matrix::FieldMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    /// `-1` is the zero form with no degree slot.
    degree: i64,
    coeffs: Vec<Fp>,
}

impl BinaryForm {
    /// The zero form without a degree slot.
    pub fn zero_sentinel() -> Self {
        BinaryForm { degree: -1, coeffs: Vec::new() }
    }

    /// The zero form occupying a slot of the given degree. Negative degrees
    /// collapse to the sentinel, since `H^0(O(d)) = 0` there.
    pub fn zero(degree: i64) -> Self {
        if degree < 0 {
            return Self::zero_sentinel();
        }
        BinaryForm { degree, coeffs: vec![Fp::ZERO; degree as usize + 1] }
    }

    pub fn new(coeffs: Vec<Fp>) -> Self {
        if coeffs.is_empty() {
            return Self::zero_sentinel();
        }
        BinaryForm { degree: coeffs.len() as i64 - 1, coeffs }
    }

    pub fn from_ints(field: &PrimeField, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    /// `x^(degree - y_power) y^y_power`.
    pub fn monomial(degree: i64, y_power: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[y_power] = Fp::ONE;
        f
    }

    pub fn random<R: Rng + ?Sized>(degree: i64, field: &PrimeField, rng: &mut R) -> Self {
        if degree < 0 {
            return Self::zero_sentinel();
        }
        Self::new((0..=degree).map(|_| field.random(rng)).collect())
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm, field: &PrimeField) -> BinaryForm {
        if self.is_zero() && self.degree != other.degree {
            return other.clone();
        }
        if other.is_zero() && self.degree != other.degree {
            return self.clone();
        }
        debug_assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.add(a, b)).collect(),
        }
    }

    pub fn neg(&self, field: &PrimeField) -> BinaryForm {
        BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|&a| field.neg(a)).collect() }
    }

    pub fn sub(&self, other: &BinaryForm, field: &PrimeField) -> BinaryForm {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: Fp, field: &PrimeField) -> BinaryForm {
        BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &BinaryForm, field: &PrimeField) -> BinaryForm {
        if self.degree < 0 || other.degree < 0 {
            return Self::zero_sentinel();
        }
        let mut out = vec![Fp::ZERO; (self.degree + other.degree) as usize + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        BinaryForm { degree: self.degree + other.degree, coeffs: out }
    }

    /// Value at the point `(x : y) = (b : c)`.
    pub fn eval(&self, b: Fp, c: Fp, field: &PrimeField) -> Fp {
        let d = self.degree.max(0) as u64;
        let mut acc = Fp::ZERO;
        for (i, &coef) in self.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let term = field.mul(coef, field.mul(field.pow(b, d - i as u64), field.pow(c, i as u64)));
            acc = field.add(acc, term);
        }
        acc
    }

    /// Substitutes `x -> m00 x + m01 y`, `y -> m10 x + m11 y`.
    pub fn substitute(&self, m: [[Fp; 2]; 2], field: &PrimeField) -> BinaryForm {
        if self.degree < 0 {
            return self.clone();
        }
        let lx = BinaryForm::new(vec![m[0][0], m[0][1]]);
        let ly = BinaryForm::new(vec![m[1][0], m[1][1]]);
        let mut out = BinaryForm::zero(self.degree);
        for (i, &coef) in self.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let mut term = BinaryForm::new(vec![coef]);
            for _ in 0..(self.degree as usize - i) {
                term = term.mul(&lx, field);
            }
            for _ in 0..i {
                term = term.mul(&ly, field);
            }
            out = out.add(&term, field);
        }
        out
    }

    /// Multiplicity of the point `(1 : 0)` as a zero, i.e. the power of `y`
    /// dividing the form. `None` for the zero form.
    pub fn y_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `f(t, 1)` as a little-endian univariate polynomial, trimmed.
    fn dehomogenize(&self) -> Vec<Fp> {
        let mut p: Vec<Fp> = self.coeffs.iter().rev().copied().collect();
        trim(&mut p);
        p
    }
}

fn trim(p: &mut Vec<Fp>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Remainder of `a` modulo nonzero `b`, little-endian coefficients.
fn poly_rem(mut a: Vec<Fp>, b: &[Fp], field: &PrimeField) -> Vec<Fp> {
    let lead_inv = field.inv(*b.last().expect("division by zero polynomial"));
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let factor = field.mul(*a.last().unwrap(), lead_inv);
        for (i, &bc) in b.iter().enumerate() {
            a[shift + i] = field.sub(a[shift + i], field.mul(factor, bc));
        }
        trim(&mut a);
    }
    a
}

fn poly_gcd(mut a: Vec<Fp>, mut b: Vec<Fp>, field: &PrimeField) -> Vec<Fp> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, field);
        a = b;
        b = r;
    }
    a
}

/// Matrix of multiplication by `f` from forms of degree `j` to forms of
/// degree `j + deg f`, in the monomial bases `x^(j-i) y^i`.
///
/// Shape is `max(0, j + deg f + 1) x max(0, j + 1)`.
pub fn multiplication_matrix(f: &BinaryForm, j: i64) -> FieldMatrix {
    let cols = (j + 1).max(0) as usize;
    let rows = (j + f.degree() + 1).max(0) as usize;
    let mut m = FieldMatrix::zeros(rows, cols);
    if f.degree() < 0 {
        return m;
    }
    for col in 0..cols {
        for (i, &c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                m.set(i + col, col, c);
            }
        }
    }
    m
}

/// Degree of the common zero divisor of the forms over the algebraic
/// closure of F_q, i.e. the degree of their homogeneous gcd.
///
/// Zero forms vanish everywhere and are skipped; if every form is zero the
/// divisor is indeterminate.
pub fn vanishing_divisor_degree(forms: &[BinaryForm], field: &PrimeField) -> Result<usize> {
    let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::IndeterminateDivisor);
    }
    let y_power = nonzero.iter().filter_map(|f| f.y_valuation()).min().unwrap_or(0);
    let mut g = nonzero[0].dehomogenize();
    for f in &nonzero[1..] {
        if g.len() <= 1 {
            break;
        }
        g = poly_gcd(g, f.dehomogenize(), field);
    }
    Ok(y_power + g.len().saturating_sub(1))
}

/// Determinant of a square matrix of forms, expanded over column subsets.
///
/// Entries in row `i` and column `j` are expected to have degree
/// `r_i - c_j` for some row and column profiles (zero entries may carry any
/// slot), so every term has the same degree.
pub fn form_determinant(entries: &[Vec<BinaryForm>], field: &PrimeField) -> BinaryForm {
    let m = entries.len();
    if m == 0 {
        return BinaryForm::new(vec![Fp::ONE]);
    }
    assert!(m < 24, "form determinant too large");
    let mut dp: Vec<Option<BinaryForm>> = vec![None; 1 << m];
    dp[0] = Some(BinaryForm::new(vec![Fp::ONE]));
    for (row, row_entries) in entries.iter().enumerate() {
        assert_eq!(row_entries.len(), m, "form determinant needs a square matrix");
        let mut next: Vec<Option<BinaryForm>> = vec![None; 1 << m];
        for mask in 0usize..(1 << m) {
            if mask.count_ones() as usize != row {
                continue;
            }
            let Some(acc) = &dp[mask] else { continue };
            for (col, entry) in row_entries.iter().enumerate() {
                if mask & (1 << col) != 0 || entry.is_zero() {
                    continue;
                }
                let inversions = (mask >> (col + 1)).count_ones();
                let mut term = acc.mul(entry, field);
                if inversions % 2 == 1 {
                    term = term.neg(field);
                }
                let slot = &mut next[mask | (1 << col)];
                *slot = Some(match slot.take() {
                    Some(prev) => prev.add(&term, field),
                    None => term,
                });
            }
        }
        dp = next;
    }
    dp[(1 << m) - 1].take().unwrap_or_else(BinaryForm::zero_sentinel)
}
