use itertools::Itertools;

use crate::bundles::FormMatrix;
use crate::error::{Error, Result};
use crate::exactmath::{form_determinant, vanishing_divisor_degree, BinaryForm, Fp};

use super::instance::SystemInstance;

/// `n x k` matrix of section components.
pub(crate) fn evaluation_matrix(inst: &SystemInstance) -> FormMatrix {
    let rows = (0..inst.n()).map(|i| inst.sections().iter().map(|s| s[i].clone()).collect()).collect();
    FormMatrix::from_rows(rows)
}

/// Whether `V (x) O -> E` is surjective at every point over the closure,
/// i.e. the maximal minors of the evaluation matrix have no common zero.
pub fn check_global_generation(inst: &SystemInstance) -> Result<bool> {
    let (n, k) = (inst.n(), inst.k());
    if k < n {
        return Ok(false);
    }
    let field = inst.field();
    let m = evaluation_matrix(inst);
    let minors: Vec<BinaryForm> = (0..k)
        .combinations(n)
        .map(|cols| {
            let entries: Vec<Vec<BinaryForm>> =
                (0..n).map(|r| cols.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
            form_determinant(&entries, field)
        })
        .filter(|f| !f.is_zero())
        .collect();
    if minors.is_empty() {
        return Ok(false);
    }
    Ok(vanishing_divisor_degree(&minors, field)? == 0)
}

/// Rank of the `k x n` matrix of section values at `(b : c)`.
pub fn evaluation_rank_at_point(inst: &SystemInstance, b: Fp, c: Fp) -> Result<usize> {
    if b.is_zero() && c.is_zero() {
        return Err(Error::InvalidInput("(0:0) is not a point of P^1".into()));
    }
    let field = inst.field();
    Ok(evaluation_matrix(inst).evaluate(b, c, field).rank(field))
}
