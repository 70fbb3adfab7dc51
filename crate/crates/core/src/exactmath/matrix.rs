//! Dense matrices over F_q with exact Gaussian elimination.

use std::fmt;

use super::field::{Fp, PrimeField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fp>, // row-major
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|x| x.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![Fp::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fp::ONE);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod q.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(field: &PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&v| field.elem(v)));
        }
        FieldMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_fp_rows(rows: &[Vec<Fp>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        FieldMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fp {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fp) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fp] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix, field: &PrimeField) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = FieldMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &FieldMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns. Pivots are the first nonzero entry found scanning down each
    /// column.
    pub fn rref_in_place(&mut self, field: &PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(p, lead);
            let inv = field.inv(self.get(lead, c));
            for j in c..self.cols {
                let v = field.mul(self.get(lead, j), inv);
                self.set(lead, j, v);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = field.sub(self.get(r, j), field.mul(factor, self.get(lead, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        // forward elimination only; no back-substitution needed for the count
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, rank);
            let inv = field.inv(m.get(rank, c));
            for r in rank + 1..m.rows {
                let factor = m.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                let factor = field.mul(factor, inv);
                for j in c..m.cols {
                    let v = field.sub(m.get(r, j), field.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// `cols - rank`: the dimension of the right kernel.
    pub fn kernel_dimension(&self, field: &PrimeField) -> usize {
        self.cols - self.rank(field)
    }

    /// A basis of the right kernel `{x : M x = 0}`.
    pub fn kernel_basis(&self, field: &PrimeField) -> Vec<Vec<Fp>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fp::ZERO; self.cols];
            v[free] = Fp::ONE;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(m.get(row, free));
            }
            basis.push(v);
        }
        basis
    }
}
