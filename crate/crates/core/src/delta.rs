//! The invariant `delta(E, V)` for two-section systems, as a closed formula
//! and as a brute-force computation.
//!
//! The brute-force value is the minimum rank of the pencil of `a x t`
//! matrices `b G + c G'` whose columns are the coefficient vectors of
//! `g_i` and `g'_i` (forms of degree `a - 1`).

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactmath::{form_determinant, vanishing_divisor_degree, BinaryForm, FieldMatrix, Fp, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaInput {
    pub a: i64,
    pub t: i64,
    pub g: Vec<BinaryForm>,
    pub g_prime: Vec<BinaryForm>,
}

impl DeltaInput {
    pub fn new(a: i64, t: i64, g: Vec<BinaryForm>, g_prime: Vec<BinaryForm>) -> Result<Self> {
        if a < 1 || t < 1 {
            return Err(Error::InvalidInput(format!("delta needs a >= 1 and t >= 1, got a = {a}, t = {t}")));
        }
        if g.len() != t as usize || g_prime.len() != t as usize {
            return Err(Error::InvalidInput(format!(
                "expected {t} forms in each family, got {} and {}",
                g.len(),
                g_prime.len()
            )));
        }
        for f in g.iter().chain(&g_prime) {
            if !f.is_zero() && f.degree() != a - 1 {
                return Err(Error::DegreeProfile(format!("form of degree {} where {} is required", f.degree(), a - 1)));
            }
        }
        Ok(DeltaInput { a, t, g, g_prime })
    }

    /// Uniformly random forms of degree `a - 1`.
    pub fn random<R: Rng + ?Sized>(a: i64, t: i64, field: &PrimeField, rng: &mut R) -> Result<Self> {
        let g = (0..t).map(|_| BinaryForm::random(a - 1, field, rng)).collect();
        let g_prime = (0..t).map(|_| BinaryForm::random(a - 1, field, rng)).collect();
        Self::new(a, t, g, g_prime)
    }

    /// `a x t` coefficient matrices of the two families.
    fn matrices(&self) -> (FieldMatrix, FieldMatrix) {
        let (a, t) = (self.a as usize, self.t as usize);
        let fill = |forms: &[BinaryForm]| {
            let mut m = FieldMatrix::zeros(a, t);
            for (col, f) in forms.iter().enumerate() {
                for (row, &c) in f.coeffs().iter().enumerate() {
                    m.set(row, col, c);
                }
            }
            m
        };
        (fill(&self.g), fill(&self.g_prime))
    }
}

pub fn delta_formula(a: i64, t: i64) -> Result<i64> {
    if a < 1 || t < 1 {
        return Err(Error::InvalidInput(format!("delta needs a >= 1 and t >= 1, got a = {a}, t = {t}")));
    }
    Ok(if a > t {
        t
    } else if a == t {
        t - 1
    } else {
        a
    })
}

/// The variant with `2r` columns; equal to `delta_formula(a + 1, 2r)`.
pub fn delta_prime_formula(a: i64, r: i64) -> Result<i64> {
    if a < 1 || r < 1 {
        return Err(Error::InvalidInput(format!("delta' needs a >= 1 and r >= 1, got a = {a}, r = {r}")));
    }
    Ok(if a >= 2 * r {
        2 * r
    } else if a == 2 * r - 1 {
        2 * r - 1
    } else {
        a + 1
    })
}

/// `delta` over the algebraic closure: the minimum rank of `b G + c G'`
/// over all `(b : c)` in `P^1`.
///
/// The rank drops below `rho` exactly at the common zeros of the
/// `rho`-minors, which are binary forms of degree `rho` in `(b, c)`.
pub fn delta_bruteforce(input: &DeltaInput, field: &PrimeField) -> Result<i64> {
    let (g, gp) = input.matrices();
    let (a, t) = (g.rows(), g.cols());
    let pencil = |r: usize, c: usize| BinaryForm::new(vec![g.get(r, c), gp.get(r, c)]);

    for rho in (1..=a.min(t)).rev() {
        let mut minors = Vec::new();
        for rows in (0..a).combinations(rho) {
            for cols in (0..t).combinations(rho) {
                let entries: Vec<Vec<BinaryForm>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| pencil(r, c)).collect()).collect();
                let det = form_determinant(&entries, field);
                if !det.is_zero() {
                    minors.push(det);
                }
            }
        }
        if minors.is_empty() {
            // generic rank is below rho
            continue;
        }
        if vanishing_divisor_degree(&minors, field)? == 0 {
            return Ok(rho as i64);
        }
    }
    Ok(0)
}

/// `delta` restricted to the `q + 1` rational points of `P^1`. It can exceed
/// [`delta_bruteforce`] when the rank drops only at irrational points.
pub fn delta_rational(input: &DeltaInput, field: &PrimeField) -> i64 {
    let (g, gp) = input.matrices();
    field
        .projective_line()
        .into_iter()
        .map(|(b, c)| {
            let mut m = FieldMatrix::zeros(g.rows(), g.cols());
            for r in 0..g.rows() {
                for col in 0..g.cols() {
                    m.set(r, col, field.add(field.mul(b, g.get(r, col)), field.mul(c, gp.get(r, col))));
                }
            }
            m.rank(field) as i64
        })
        .min()
        .expect("P^1 is non-empty")
}

/// Applies `(g, g') -> (p g + q g', r g + s g')` to every column pair.
pub fn mix_pair(input: &DeltaInput, m: [[Fp; 2]; 2], field: &PrimeField) -> DeltaInput {
    let combine = |u: Fp, f: &BinaryForm, v: Fp, h: &BinaryForm| {
        let out = f.scale(u, field).add(&h.scale(v, field), field);
        if out.is_zero() {
            BinaryForm::zero(input.a - 1)
        } else {
            out
        }
    };
    let g = input.g.iter().zip(&input.g_prime).map(|(f, h)| combine(m[0][0], f, m[0][1], h)).collect();
    let g_prime = input.g.iter().zip(&input.g_prime).map(|(f, h)| combine(m[1][0], f, m[1][1], h)).collect();
    DeltaInput { a: input.a, t: input.t, g, g_prime }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn formula_examples() {
        assert_eq!(delta_formula(3, 2).unwrap(), 2);
        assert_eq!(delta_formula(2, 2).unwrap(), 1);
        assert_eq!(delta_formula(1, 3).unwrap(), 1);
        assert!(delta_formula(0, 3).is_err());
        assert!(delta_formula(3, 0).is_err());
    }

    #[test]
    fn prime_formula_examples() {
        assert_eq!(delta_prime_formula(4, 2).unwrap(), 4);
        assert_eq!(delta_prime_formula(3, 2).unwrap(), 3);
        assert_eq!(delta_prime_formula(2, 2).unwrap(), 3);
        assert!(delta_prime_formula(2, 0).is_err());
    }

    #[test]
    fn prime_formula_regression_table() {
        #[rustfmt::skip]
        let table: [[i64; 5]; 10] = [
            [1, 2, 2, 2, 2],
            [2, 3, 3, 3, 3],
            [2, 3, 4, 4, 4],
            [2, 4, 5, 5, 5],
            [2, 4, 5, 6, 6],
            [2, 4, 6, 7, 7],
            [2, 4, 6, 7, 8],
            [2, 4, 6, 8, 9],
            [2, 4, 6, 8, 9],
            [2, 4, 6, 8, 10],
        ];
        for a in 1..=10 {
            for r in 1..=5 {
                let v = delta_prime_formula(a, r).unwrap();
                assert_eq!(v, table[a as usize - 1][r as usize - 1], "a={a} r={r}");
                assert_eq!(v, delta_formula(a + 1, 2 * r).unwrap());
            }
        }
    }

    #[test]
    fn bruteforce_examples() {
        let f = f101();
        let zero = DeltaInput::new(2, 2, vec![BinaryForm::zero(1); 2], vec![BinaryForm::zero(1); 2]).unwrap();
        assert_eq!(delta_bruteforce(&zero, &f).unwrap(), 0);
        assert_eq!(delta_rational(&zero, &f), 0);

        let h = BinaryForm::from_ints(&f, &[1, 2, 3]);
        let same = DeltaInput::new(3, 1, vec![h.clone()], vec![h]).unwrap();
        assert_eq!(delta_bruteforce(&same, &f).unwrap(), 0);
        assert_eq!(delta_rational(&same, &f), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let generic = DeltaInput::random(3, 2, &f, &mut rng).unwrap();
        assert_eq!(delta_bruteforce(&generic, &f).unwrap(), 2);
    }

    #[test]
    fn rank_drop_at_irrational_point() {
        // G = I, G' = [[0, -2], [1, 0]] over F_5: det(bI + cG') = b^2 + 2c^2,
        // and -2 is not a square mod 5
        let f = PrimeField::new(5).unwrap();
        let g = vec![BinaryForm::from_ints(&f, &[1, 0]), BinaryForm::from_ints(&f, &[0, 1])];
        let gp = vec![BinaryForm::from_ints(&f, &[0, 1]), BinaryForm::from_ints(&f, &[-2, 0])];
        let input = DeltaInput::new(2, 2, g, gp).unwrap();
        assert_eq!(delta_rational(&input, &f), 2);
        assert_eq!(delta_bruteforce(&input, &f).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(DeltaInput::new(2, 0, vec![], vec![]).is_err());
        let f = f101();
        let wrong = BinaryForm::from_ints(&f, &[1, 2, 3]);
        assert!(DeltaInput::new(2, 1, vec![wrong.clone()], vec![wrong]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bounded_by_formula(a in 1i64..=5, t in 1i64..=5, seed in any::<u64>(), sparse in any::<bool>()) {
            let f = if sparse { PrimeField::new(3).unwrap() } else { f101() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let input = DeltaInput::random(a, t, &f, &mut rng).unwrap();
            let d = delta_bruteforce(&input, &f).unwrap();
            prop_assert!(d <= delta_formula(a, t).unwrap());
            prop_assert!(d <= delta_rational(&input, &f));
        }

        #[test]
        fn invariant_under_scaling_and_mixing(a in 1i64..=4, t in 1i64..=4, seed in any::<u64>()) {
            let f = PrimeField::new(7).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let input = DeltaInput::random(a, t, &f, &mut rng).unwrap();
            let base = delta_bruteforce(&input, &f).unwrap();
            let u = f.random_nonzero(&mut rng);
            let scaled = mix_pair(&input, [[u, Fp::ZERO], [Fp::ZERO, u]], &f);
            prop_assert_eq!(delta_bruteforce(&scaled, &f).unwrap(), base);
            let m = loop {
                let m = [[f.random(&mut rng), f.random(&mut rng)], [f.random(&mut rng), f.random(&mut rng)]];
                let det = f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0]));
                if !det.is_zero() {
                    break m;
                }
            };
            prop_assert_eq!(delta_bruteforce(&mix_pair(&input, m, &f), &f).unwrap(), base);
        }
    }
}
