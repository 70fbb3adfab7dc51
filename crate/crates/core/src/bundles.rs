//! Split vector bundles on P^1.
//!
//! A bundle is recorded by its splitting type `O(a_1) + ... + O(a_n)`.
//! Maps between split bundles are matrices of binary forms, and everything
//! below (kernels, saturations) is reduced to finite-dimensional linear
//! algebra on twisted global sections.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{multiplication_matrix, BinaryForm, FieldMatrix, PrimeField};

/// Degrees `a_1 >= ... >= a_n` of a split bundle. Rank zero is allowed and
/// stands for the zero bundle (kernels and quotients can vanish).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType(degrees)
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_generic(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(hi), Some(lo)) => hi - lo <= 1,
            _ => true,
        }
    }

    pub fn dual(&self) -> SplittingType {
        SplittingType::new(self.0.iter().map(|a| -a).collect())
    }

    /// Direct sum.
    pub fn sum(&self, other: &SplittingType) -> SplittingType {
        SplittingType::new(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Splitting type of `End(E) = E* (x) E`.
    pub fn endomorphisms(&self) -> SplittingType {
        SplittingType::new(self.0.iter().flat_map(|a| self.0.iter().map(move |b| a - b)).collect())
    }

    pub fn hn_polygon(&self) -> HNPolygon {
        let prefix_sums = self
            .0
            .iter()
            .scan(0i64, |acc, a| {
                *acc += a;
                Some(*acc)
            })
            .collect();
        HNPolygon { prefix_sums }
    }

    /// `h^0(E)`.
    pub fn sections(&self) -> usize {
        cohomology(self, 0).0 as usize
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Prefix sums `a_1, a_1 + a_2, ...` of a sorted splitting type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNPolygon {
    pub prefix_sums: Vec<i64>,
}

impl HNPolygon {
    pub fn is_concave(&self) -> bool {
        let mut prev = 0;
        let increments: Vec<i64> = self
            .prefix_sums
            .iter()
            .map(|&s| {
                let inc = s - prev;
                prev = s;
                inc
            })
            .collect();
        increments.windows(2).all(|w| w[0] >= w[1])
    }

    /// `self >= other`: same endpoints and lying on or above `other`.
    pub fn dominates(&self, other: &HNPolygon) -> bool {
        self.prefix_sums.len() == other.prefix_sums.len()
            && self.prefix_sums.last() == other.prefix_sums.last()
            && self.prefix_sums.iter().zip(&other.prefix_sums).all(|(a, b)| a >= b)
    }
}

/// The balanced type `O(a+1)^s + O(a)^(n-s)` with `d = a n + s`, `0 <= s < n`.
pub fn generic_splitting(n: usize, d: i64) -> SplittingType {
    assert!(n >= 1, "rank must be positive");
    let a = d.div_euclid(n as i64);
    let s = d.rem_euclid(n as i64) as usize;
    SplittingType::new((0..n).map(|i| if i < s { a + 1 } else { a }).collect())
}

/// `(h^0, h^1)` of `E(j)`.
pub fn cohomology(t: &SplittingType, j: i64) -> (i64, i64) {
    t.0.iter().fold((0, 0), |(h0, h1), &a| (h0 + (a + j + 1).max(0), h1 + (-a - j - 1).max(0)))
}

/// Largest degree of a rank-`r` subbundle: the sum of the `r` largest degrees.
pub fn max_subbundle_degree(t: &SplittingType, r: usize) -> Result<i64> {
    if r > t.rank() {
        return Err(Error::RankOutOfRange { rank: r, max: t.rank() });
    }
    Ok(t.0[..r].iter().sum())
}

/// Whether `0 -> O^k -> E -> G -> 0` exists by the polygon criterion for
/// `E = e` and `F = g + O^k`: `HNP(F) >= HNP(E)`, and `b_i > a_i` holds
/// exactly for `i <= n - k`.
pub fn shatz_embedding_exists(e: &SplittingType, g: &SplittingType, k: usize) -> Result<bool> {
    if e.rank() != g.rank() + k {
        return Err(Error::InvalidInput(format!(
            "rank mismatch: rank E = {} but rank G + k = {}",
            e.rank(),
            g.rank() + k
        )));
    }
    let f = g.sum(&SplittingType(vec![0; k]));
    if !f.hn_polygon().dominates(&e.hn_polygon()) {
        return Ok(false);
    }
    let n = e.rank();
    Ok(f.0.iter().zip(&e.0).enumerate().all(|(i, (b, a))| (b > a) == (i < n - k)))
}

/// A matrix of binary forms representing a map of split bundles; entry
/// `(r, c)` maps the `c`-th source summand to the `r`-th target summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BinaryForm>,
}

impl FormMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BinaryForm>) -> Self {
        assert_eq!(entries.len(), rows * cols, "form matrix entry count");
        FormMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BinaryForm>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let entries: Vec<BinaryForm> = rows.into_iter().flatten().collect();
        Self::new(n, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BinaryForm {
        &self.entries[r * self.cols + c]
    }

    pub fn evaluate(&self, b: crate::exactmath::Fp, c: crate::exactmath::Fp, field: &PrimeField) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for col in 0..self.cols {
                m.set(r, col, self.get(r, col).eval(b, c, field));
            }
        }
        m
    }
}

fn check_profile(source: &[i64], target: &[i64], m: &FormMatrix) -> Result<()> {
    if m.rows() != target.len() || m.cols() != source.len() {
        return Err(Error::DegreeProfile(format!(
            "matrix is {}x{} but profiles have lengths {} and {}",
            m.rows(),
            m.cols(),
            target.len(),
            source.len()
        )));
    }
    for (r, &t) in target.iter().enumerate() {
        for (c, &s) in source.iter().enumerate() {
            let f = m.get(r, c);
            if !f.is_zero() && f.degree() != t - s {
                return Err(Error::DegreeProfile(format!(
                    "entry ({r},{c}) has degree {} but O({s}) -> O({t}) needs degree {}",
                    f.degree(),
                    t - s
                )));
            }
        }
    }
    Ok(())
}

fn twisted_map(source: &[i64], target: &[i64], m: &FormMatrix, j: i64) -> FieldMatrix {
    let col_sizes: Vec<usize> = source.iter().map(|&s| (s + j + 1).max(0) as usize).collect();
    let row_sizes: Vec<usize> = target.iter().map(|&t| (t + j + 1).max(0) as usize).collect();
    let mut big = FieldMatrix::zeros(row_sizes.iter().sum(), col_sizes.iter().sum());
    let mut r0 = 0;
    for (r, &rs) in row_sizes.iter().enumerate() {
        let mut c0 = 0;
        for (c, &cs) in col_sizes.iter().enumerate() {
            let f = m.get(r, c);
            if rs > 0 && cs > 0 && !f.is_zero() {
                big.put_block(r0, c0, &multiplication_matrix(f, source[c] + j));
            }
            c0 += cs;
        }
        r0 += rs;
    }
    big
}

/// `dim ker` of the induced map on global sections after twisting by `O(j)`,
/// which equals `h^0(N(j))` for the kernel bundle `N`.
pub fn kernel_probe(source: &[i64], target: &[i64], m: &FormMatrix, j: i64, field: &PrimeField) -> usize {
    twisted_map(source, target, m, j).kernel_dimension(field)
}

/// Rank of `m` over the function field, when it can be certified by
/// evaluating at rational points.
fn generic_rank(m: &FormMatrix, field: &PrimeField) -> Option<usize> {
    // a nonzero minor is a form of degree at most this, so it cannot vanish
    // at more than this many points
    let minor_degree: i64 = (0..m.rows())
        .map(|r| (0..m.cols()).filter(|&c| !m.get(r, c).is_zero()).map(|c| m.get(r, c).degree()).max().unwrap_or(0))
        .sum();
    let points = field.projective_line();
    if (points.len() as i64) <= minor_degree {
        return None;
    }
    let full = m.rows().min(m.cols());
    let mut best = 0;
    for &(b, c) in points.iter().take(minor_degree as usize + 1) {
        best = best.max(m.evaluate(b, c, field).rank(field));
        if best == full {
            break;
        }
    }
    Some(best)
}

/// Splitting type of the kernel bundle of `m : + O(source_c) -> + O(target_r)`.
///
/// The type is read off the first differences of `h^0(N(j))`, which count
/// `#{i : b_i >= -j}`. Probing starts where `N(j)` first can have sections
/// and stops once every summand has been seen; the stopping point is bounded
/// a priori by a degree estimate on `N`.
pub fn kernel_splitting(source: &[i64], target: &[i64], m: &FormMatrix, field: &PrimeField) -> Result<SplittingType> {
    check_profile(source, target, m)?;
    if source.is_empty() {
        return Ok(SplittingType::new(Vec::new()));
    }
    let cols = source.len() as i64;
    let max_source = *source.iter().max().unwrap();
    let target_sorted = SplittingType::new(target.to_vec());
    let best_image = (0..=target.len()).map(|r| max_subbundle_degree(&target_sorted, r).unwrap()).max().unwrap();
    // every summand b of N satisfies lower_bound <= b <= max_source
    let lower_bound = source.iter().sum::<i64>() - best_image - ((cols - 1) * max_source).max(0);

    let known_rank = generic_rank(m, field).map(|rho| source.len() - rho);
    if known_rank == Some(0) {
        return Ok(SplittingType::new(Vec::new()));
    }

    let first = -max_source;
    let last = -lower_bound;
    let mut degrees = Vec::new();
    let mut prev_h = 0usize;
    let mut prev_count = 0usize;
    for j in first..=last {
        let h = kernel_probe(source, target, m, j, field);
        let count = h.checked_sub(prev_h).ok_or_else(|| Error::Internal("kernel probes decreased".into()))?;
        if count < prev_count {
            return Err(Error::Internal("kernel probe differences decreased".into()));
        }
        degrees.extend(std::iter::repeat_n(-j, count - prev_count));
        prev_h = h;
        prev_count = count;
        if Some(count) == known_rank {
            return Ok(SplittingType::new(degrees));
        }
    }
    match known_rank {
        Some(r) => Err(Error::Internal(format!(
            "kernel probes did not stabilize at rank {r} within [{first}, {last}] (reached {prev_count})"
        ))),
        None => Ok(SplittingType::new(degrees)),
    }
}

/// Numerical invariants of the saturation `F` of the subsheaf generated by a
/// set of sections, together with the type of `E/F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationResult {
    pub rank: usize,
    pub degree: i64,
    pub quotient: SplittingType,
}

/// A global section of a split bundle: one form per summand, component `i`
/// of degree `a_i` (or zero).
pub type Section = Vec<BinaryForm>;

pub(crate) fn check_section(e: &SplittingType, s: &Section) -> Result<()> {
    if s.len() != e.rank() {
        return Err(Error::DegreeProfile(format!("section has {} components, bundle rank is {}", s.len(), e.rank())));
    }
    for (i, (f, &a)) in s.iter().zip(e.degrees()).enumerate() {
        if !f.is_zero() && f.degree() != a {
            return Err(Error::DegreeProfile(format!(
                "component {i} has degree {} but the summand is O({a})",
                f.degree()
            )));
        }
    }
    Ok(())
}

/// Saturation of the span of `sections` inside `E = e`.
///
/// The dual map `E* -> O^w` has kernel `N = (E/F)*`, so `F` has rank
/// `n - rank N`, degree `d + deg N`, and `E/F` has the negated type of `N`.
pub fn saturate(e: &SplittingType, sections: &[Section], field: &PrimeField) -> Result<SaturationResult> {
    for s in sections {
        check_section(e, s)?;
    }
    let live: Vec<&Section> = sections.iter().filter(|s| s.iter().any(|f| !f.is_zero())).collect();
    if live.is_empty() {
        return Ok(SaturationResult { rank: 0, degree: 0, quotient: e.clone() });
    }
    let source: Vec<i64> = e.degrees().iter().map(|a| -a).collect();
    let target = vec![0i64; live.len()];
    let entries: Vec<BinaryForm> = live
        .iter()
        .flat_map(|s| s.iter().map(|f| if f.is_zero() { BinaryForm::zero_sentinel() } else { f.clone() }))
        .collect();
    let m = FormMatrix::new(live.len(), e.rank(), entries);
    let kernel = kernel_splitting(&source, &target, &m, field)?;
    Ok(SaturationResult {
        rank: e.rank() - kernel.rank(),
        degree: e.degree() + kernel.degree(),
        quotient: kernel.dual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::vanishing_divisor_degree;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(&f101(), c)
    }

    fn st(v: &[i64]) -> SplittingType {
        SplittingType::new(v.to_vec())
    }

    #[test]
    fn generic_splitting_examples() {
        assert_eq!(generic_splitting(3, 7), st(&[3, 2, 2]));
        assert_eq!(generic_splitting(4, 6), st(&[2, 2, 1, 1]));
        assert_eq!(generic_splitting(2, -3), st(&[-1, -2]));
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(cohomology(&st(&[1, 1]), 0), (4, 0));
        assert_eq!(cohomology(&st(&[-2]), 0), (0, 1));
        let end = st(&[1, 1, 0, 0, 0, 0, -1, -1, 0]);
        assert_eq!(end, st(&[3, 2, 2]).endomorphisms());
        assert_eq!(cohomology(&end, 0).1, 0);
    }

    #[test]
    fn max_subbundle_examples() {
        assert_eq!(max_subbundle_degree(&st(&[3, 2, 2]), 2).unwrap(), 5);
        assert_eq!(max_subbundle_degree(&st(&[2, 2, 1, 1]), 1).unwrap(), 2);
        assert_eq!(max_subbundle_degree(&st(&[2, 2, 1, 1]), 0).unwrap(), 0);
        assert_eq!(max_subbundle_degree(&st(&[1]), 2), Err(Error::RankOutOfRange { rank: 2, max: 1 }));
    }

    #[test]
    fn shatz_examples() {
        assert!(shatz_embedding_exists(&st(&[3, 3, 2]), &st(&[4, 4]), 1).unwrap());
        assert!(!shatz_embedding_exists(&st(&[3, 3, 2]), &st(&[4, 3]), 1).unwrap());
        assert!(shatz_embedding_exists(&st(&[3, 3, 2]), &st(&[4]), 1).is_err());
    }

    #[test]
    fn shatz_holds_for_standard_forms_with_positive_l() {
        // E = O(a)^(n-t) + O(a-1)^t, G = O(a+l+1)^m + O(a+l)^(n-k-m)
        for n in 2i64..=8 {
            for k in 1..n {
                for d in 1..=40 {
                    let a = (d + n - 1).div_euclid(n);
                    let t = n * a - d;
                    let l = (k * a - t).div_euclid(n - k);
                    let m = (k * a - t).rem_euclid(n - k);
                    if l <= 0 {
                        continue;
                    }
                    let e = SplittingType::new((0..n).map(|i| if i < n - t { a } else { a - 1 }).collect());
                    let g = SplittingType::new((0..n - k).map(|i| if i < m { a + l + 1 } else { a + l }).collect());
                    assert!(shatz_embedding_exists(&e, &g, k as usize).unwrap(), "n={n} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn kernel_splitting_examples() {
        let f = f101();
        let m = FormMatrix::from_rows(vec![vec![form(&[1, 0]), form(&[0, 1])]]);
        assert_eq!(kernel_splitting(&[-1, -1], &[0], &m, &f).unwrap(), st(&[-2]));

        let m = FormMatrix::from_rows(vec![vec![form(&[1, 0]), BinaryForm::zero(1)]]);
        assert_eq!(kernel_splitting(&[-1, -1], &[0], &m, &f).unwrap(), st(&[-1]));

        let m = FormMatrix::from_rows(vec![vec![BinaryForm::zero(1), BinaryForm::zero(1)]]);
        assert_eq!(kernel_splitting(&[-1, -1], &[0], &m, &f).unwrap(), st(&[-1, -1]));
    }

    #[test]
    fn kernel_splitting_rejects_bad_profile() {
        let m = FormMatrix::from_rows(vec![vec![form(&[1, 0, 0]), form(&[0, 1])]]);
        assert!(matches!(kernel_splitting(&[-1, -1], &[0], &m, &f101()), Err(Error::DegreeProfile(_))));
    }

    #[test]
    fn kernel_splitting_small_field_uses_full_window() {
        // q = 2 cannot certify generic rank for a degree-3 minor bound
        let f = PrimeField::new(2).unwrap();
        let m = FormMatrix::from_rows(vec![vec![
            BinaryForm::from_ints(&f, &[1, 0, 0, 1]),
            BinaryForm::from_ints(&f, &[0, 1, 1, 0]),
        ]]);
        let k = kernel_splitting(&[-3, -3], &[0], &m, &f).unwrap();
        assert_eq!(k.rank(), 1);
        assert_eq!(k.degree(), -6 + 1); // gcd x+y of degree 1
    }

    #[test]
    fn saturate_examples() {
        let f = f101();
        let e = st(&[1, 1]);
        let r = saturate(&e, &[vec![form(&[1, 0]), form(&[0, 1])]], &f).unwrap();
        assert_eq!(r, SaturationResult { rank: 1, degree: 0, quotient: st(&[2]) });

        let r = saturate(&e, &[], &f).unwrap();
        assert_eq!(r, SaturationResult { rank: 0, degree: 0, quotient: st(&[1, 1]) });

        let r = saturate(&e, &[vec![form(&[1, 0]), BinaryForm::zero(1)]], &f).unwrap();
        assert_eq!(r, SaturationResult { rank: 1, degree: 1, quotient: st(&[1]) });
    }

    #[test]
    fn saturate_ignores_zero_sections() {
        let f = f101();
        let e = st(&[1, 1]);
        let zero = vec![BinaryForm::zero(1), BinaryForm::zero(1)];
        let s = vec![form(&[1, 0]), form(&[0, 1])];
        assert_eq!(saturate(&e, &[s.clone(), zero], &f).unwrap(), saturate(&e, &[s], &f).unwrap());
    }

    #[test]
    fn saturate_of_generating_sections_is_everything() {
        let f = f101();
        let e = st(&[1, 1]);
        // (x,0), (0,x) do not generate at (0:1) but still saturate to E
        let r = saturate(&e, &[vec![form(&[1, 0]), BinaryForm::zero(1)], vec![BinaryForm::zero(1), form(&[1, 0])]], &f)
            .unwrap();
        assert_eq!((r.rank, r.degree, r.quotient.rank()), (2, 2, 0));
    }

    #[test]
    fn saturate_negative_summand() {
        let f = f101();
        let e = st(&[2, -1]);
        let r = saturate(&e, &[vec![form(&[1, 0, 0]), BinaryForm::zero_sentinel()]], &f).unwrap();
        assert_eq!(r, SaturationResult { rank: 1, degree: 2, quotient: st(&[-1]) });
    }

    fn arb_type() -> impl Strategy<Value = SplittingType> {
        prop::collection::vec(-3i64..6, 1..6).prop_map(SplittingType::new)
    }

    fn random_section(e: &SplittingType, seed: u64) -> Section {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        e.degrees().iter().map(|&a| BinaryForm::random(a, &f101(), &mut rng)).collect()
    }

    proptest! {
        #[test]
        fn generic_type_is_balanced_and_rigid(n in 1usize..8, d in -30i64..30) {
            let t = generic_splitting(n, d);
            prop_assert_eq!(t.degree(), d);
            prop_assert!(t.is_generic());
            prop_assert_eq!(cohomology(&t.endomorphisms(), 0).1, 0);
        }

        #[test]
        fn unbalanced_types_have_h1_end(t in arb_type()) {
            let spread = t.degrees()[0] - t.degrees()[t.rank() - 1];
            prop_assert_eq!(spread >= 2, cohomology(&t.endomorphisms(), 0).1 > 0);
        }

        #[test]
        fn riemann_roch(t in arb_type(), j in -10i64..10) {
            let (h0, h1) = cohomology(&t, j);
            prop_assert_eq!(h0 - h1, t.degrees().iter().map(|a| a + j + 1).sum::<i64>());
        }

        #[test]
        fn polygons_are_concave(t in arb_type()) {
            let p = t.hn_polygon();
            prop_assert!(p.is_concave());
            prop_assert_eq!(*p.prefix_sums.last().unwrap(), t.degree());
        }

        #[test]
        fn saturation_bookkeeping_and_monotonicity(t in arb_type(), seed in any::<u64>(), w in 1usize..4) {
            let f = f101();
            let sections: Vec<Section> = (0..w).map(|i| random_section(&t, seed.wrapping_add(i as u64))).collect();
            let mut prev: Option<SaturationResult> = None;
            for upto in 0..=w {
                let r = saturate(&t, &sections[..upto], &f).unwrap();
                prop_assert_eq!(r.rank + r.quotient.rank(), t.rank());
                prop_assert_eq!(r.degree + r.quotient.degree(), t.degree());
                if let Some(p) = &prev {
                    prop_assert!((r.rank, r.degree) >= (p.rank, p.degree));
                }
                prev = Some(r);
            }
        }

        #[test]
        fn single_section_saturation_matches_divisor(t in arb_type(), seed in any::<u64>()) {
            let f = f101();
            let s = random_section(&t, seed);
            prop_assume!(s.iter().any(|c| !c.is_zero()));
            let r = saturate(&t, std::slice::from_ref(&s), &f).unwrap();
            prop_assert_eq!(r.rank, 1);
            prop_assert_eq!(r.degree, vanishing_divisor_degree(&s, &f).unwrap() as i64);
        }
    }
}
