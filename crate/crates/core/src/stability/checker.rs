//! Exact alpha-stability of an explicit system.
//!
//! Every coherent subsystem `(F', V')` has `V' = W` for some subspace
//! `W ⊆ V`, and `F'` contains the saturation `F` of the sheaf generated by
//! `W`. So for each `W` and each rank `r` the best subsystem is `F` enlarged
//! by a maximal-degree subbundle of `E/F` of rank `r - rank F`. The checker
//! records, per `(r, w)`, the largest achievable degree; comparing slopes
//! at any alpha is then a finite computation.
//!
//! Only F_q-rational subspaces are enumerated. This finds every rational
//! destabilizer, and over the closure:
//!
//! * if the system is not semistable, the maximal destabilizing subsystem
//!   is unique, hence Galois-invariant, hence rational;
//! * if it is semistable but not stable and no rational subsystem reaches
//!   the total slope, its socle (the sum of all stable subobjects of the
//!   same slope) is canonical, so rational, so everything. The system is
//!   then a direct sum of at least two stable pieces and has a non-scalar
//!   endomorphism.
//!
//! Hence: stable iff no rational candidate reaches the total slope and
//! `End(E, V)` is one-dimensional.

use serde::Serialize;

use crate::bundles::{max_subbundle_degree, saturate};
use crate::error::{Error, Result};
use crate::exactmath::{multiplication_matrix, FieldMatrix, Fp, Rational};
use crate::interval::AlphaInterval;

use super::instance::SystemInstance;
use super::subspaces::Subspaces;

/// Largest `k` enumerated at `q > GUARD_Q` without `force_large`.
pub const GUARD_K: usize = 3;
pub const GUARD_Q: u32 = 31;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsystemWitness {
    pub r: usize,
    pub e: i64,
    pub w: usize,
    pub alpha_slope: Rational,
    /// Basis of `W` in coordinates relative to the sections of `V`.
    pub subspace_basis: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub alpha: Rational,
    pub total_slope: Rational,
    pub stable: bool,
    pub semistable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubsystemWitness>,
    /// `dim End(E, V)`; computed only when no rational candidate reaches
    /// the total slope.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endomorphism_dim: Option<usize>,
}

/// The best subsystem degree for one `(r, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub r: usize,
    pub w: usize,
    pub e: i64,
    pub basis: Vec<Vec<Fp>>,
}

impl Candidate {
    pub fn slope(&self, alpha: &Rational) -> Rational {
        (Rational::from_integer(self.e) + Rational::from_integer(self.w as i64) * alpha)
            / Rational::from_integer(self.r as i64)
    }

    fn witness(&self, alpha: &Rational) -> SubsystemWitness {
        SubsystemWitness {
            r: self.r,
            e: self.e,
            w: self.w,
            alpha_slope: self.slope(alpha),
            subspace_basis: self.basis.iter().map(|row| row.iter().map(|x| x.0).collect()).collect(),
        }
    }
}

/// Precomputed subsystem profile of one instance, reusable across alpha.
pub struct StabilityChecker {
    inst: SystemInstance,
    candidates: Vec<Candidate>,
    endomorphism_dim: std::sync::OnceLock<usize>,
}

impl StabilityChecker {
    #[allow(clippy::needless_range_loop)]
    pub fn new(inst: &SystemInstance, force_large: bool) -> Result<Self> {
        let (n, k) = (inst.n(), inst.k());
        if k > GUARD_K && inst.q() > GUARD_Q && !force_large {
            return Err(Error::CostGuard { k, q: inst.q() });
        }
        let field = inst.field();
        let e_type = inst.splitting();
        // best[r][w]
        let mut best: Vec<Vec<Option<Candidate>>> = vec![vec![None; k + 1]; n + 1];
        for w in 0..=k {
            for basis in Subspaces::new(k, w, field) {
                let sections: Vec<_> = basis.iter().map(|c| inst.combine(c)).collect();
                let sat = saturate(e_type, &sections, field)?;
                for r in sat.rank.max(1)..=n {
                    if (r, w) == (n, k) {
                        continue;
                    }
                    let e = sat.degree + max_subbundle_degree(&sat.quotient, r - sat.rank)?;
                    let slot = &mut best[r][w];
                    if slot.as_ref().is_none_or(|c| e > c.e) {
                        *slot = Some(Candidate { r, w, e, basis: basis.clone() });
                    }
                }
            }
        }
        let candidates = best.into_iter().flatten().flatten().collect();
        Ok(StabilityChecker { inst: inst.clone(), candidates, endomorphism_dim: std::sync::OnceLock::new() })
    }

    pub fn instance(&self) -> &SystemInstance {
        &self.inst
    }

    /// The maximal candidates, ordered by `(r, w)`.
    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn total_slope(&self, alpha: &Rational) -> Rational {
        let n = self.inst.n() as i64;
        (Rational::from_integer(self.inst.d()) + Rational::from_integer(self.inst.k() as i64) * alpha)
            / Rational::from_integer(n)
    }

    pub fn endomorphism_dim(&self) -> usize {
        *self.endomorphism_dim.get_or_init(|| endomorphism_dimension(&self.inst))
    }

    pub fn is_alpha_stable(&self, alpha: &Rational) -> Result<StabilityReport> {
        if alpha < &Rational::zero() {
            return Err(Error::InvalidInput(format!("alpha = {alpha} must be non-negative")));
        }
        let total = self.total_slope(alpha);
        let mut top: Option<(&Candidate, Rational)> = None;
        for c in &self.candidates {
            let s = c.slope(alpha);
            if top.as_ref().is_none_or(|(_, t)| &s > t) {
                top = Some((c, s));
            }
        }
        let (stable, semistable, witness, endo) = match top {
            Some((c, s)) if s >= total => (false, s == total, Some(c.witness(alpha)), None),
            _ => {
                let endo = self.endomorphism_dim();
                (endo == 1, true, None, Some(endo))
            }
        };
        Ok(StabilityReport {
            alpha: alpha.clone(),
            total_slope: total,
            stable,
            semistable,
            witness,
            endomorphism_dim: endo,
        })
    }

    /// The alpha >= 0 where some proper candidate of rank below `n` has the
    /// total slope. Candidates `(E, W)` only cross at 0 and are left out.
    pub fn critical_alphas(&self) -> Vec<Rational> {
        let (n, d, k) = (self.inst.n() as i64, self.inst.d(), self.inst.k() as i64);
        let mut out: Vec<Rational> = self
            .candidates
            .iter()
            .filter(|c| (c.r as i64) < n)
            .filter_map(|c| {
                let (r, w) = (c.r as i64, c.w as i64);
                let den = r * k - n * w;
                (den != 0).then(|| Rational::new(n * c.e - r * d, den))
            })
            .filter(|a| a >= &Rational::zero())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The set of alpha > 0 where the system is stable, found by testing one
    /// point per cell between consecutive critical values.
    pub fn stability_interval(&self) -> Result<AlphaInterval> {
        let crit: Vec<Rational> = self.critical_alphas().into_iter().filter(|a| a.is_positive()).collect();
        let mut bounds: Vec<Option<Rational>> = vec![Some(Rational::zero())];
        bounds.extend(crit.into_iter().map(Some));
        bounds.push(None);
        let mut stable_cells = Vec::new();
        for pair in bounds.windows(2) {
            let (lo, hi) = (pair[0].clone().unwrap(), pair[1].clone());
            let sample = match &hi {
                Some(hi) => lo.midpoint(hi),
                None => &lo + Rational::one(),
            };
            if self.is_alpha_stable(&sample)?.stable {
                stable_cells.push(AlphaInterval::new(Some(lo), true, hi, true));
            }
        }
        match stable_cells.len() {
            0 => Ok(AlphaInterval::Empty),
            1 => Ok(stable_cells.pop().unwrap()),
            c => Err(Error::Internal(format!("stable on {c} separate cells"))),
        }
    }
}

/// `dim` of the endomorphisms of `E` preserving `V`: pairs `(phi, C)` with
/// `phi(s_l) = sum_m C_lm s_m`. Since the `s_l` are independent, `C` is
/// determined by `phi`.
#[allow(clippy::needless_range_loop)]
pub fn endomorphism_dimension(inst: &SystemInstance) -> usize {
    let field = inst.field();
    let a = inst.splitting().degrees();
    let (n, k) = (inst.n(), inst.k());
    let sections = inst.sections();

    let comp_rows: Vec<usize> = a.iter().map(|&x| (x + 1).max(0) as usize).collect();
    let block_rows: usize = comp_rows.iter().sum();
    // phi_ij : O(a_j) -> O(a_i) is a form of degree a_i - a_j
    let mut phi_cols = vec![vec![0usize; n]; n];
    let mut col = 0;
    for i in 0..n {
        for j in 0..n {
            phi_cols[i][j] = col;
            col += (a[i] - a[j] + 1).max(0) as usize;
        }
    }
    let c_col0 = col;
    let total_cols = col + k * k;

    let mut m = FieldMatrix::zeros(k * block_rows, total_cols);
    for l in 0..k {
        let mut row0 = l * block_rows;
        for i in 0..n {
            if comp_rows[i] == 0 {
                continue;
            }
            for j in 0..n {
                let s = &sections[l][j];
                if s.is_zero() || a[i] < a[j] {
                    continue;
                }
                m.put_block(row0, phi_cols[i][j], &multiplication_matrix(s, a[i] - a[j]));
            }
            for mm in 0..k {
                let s = &sections[mm][i];
                if s.is_zero() {
                    continue;
                }
                for (p, &c) in s.coeffs().iter().enumerate() {
                    m.set(row0 + p, c_col0 + l * k + mm, field.neg(c));
                }
            }
            row0 += comp_rows[i];
        }
    }
    m.kernel_dimension(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::SplittingType;
    use crate::exactmath::{vanishing_divisor_degree, BinaryForm, PrimeField};
    use crate::stability::sample_instance;

    fn inst(splitting: &[i64], sections: &[&[&[i64]]]) -> SystemInstance {
        let f = PrimeField::new(101).unwrap();
        let sections = sections.iter().map(|s| s.iter().map(|c| BinaryForm::from_ints(&f, c)).collect()).collect();
        SystemInstance::new(f, SplittingType::new(splitting.to_vec()), sections).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn line_xy() -> SystemInstance {
        inst(&[1, 1], &[&[&[1, 0], &[0, 1]]])
    }

    fn line_x1() -> SystemInstance {
        inst(&[1, 0], &[&[&[1, 0], &[1]]])
    }

    #[test]
    fn rank_two_one_section_examples() {
        let c = StabilityChecker::new(&line_xy(), false).unwrap();
        let rep = c.is_alpha_stable(&r(1, 1)).unwrap();
        assert!(rep.stable && rep.semistable && rep.witness.is_none());
        assert_eq!(rep.endomorphism_dim, Some(1));

        let rep = c.is_alpha_stable(&r(5, 2)).unwrap();
        assert!(!rep.stable && !rep.semistable);
        let w = rep.witness.unwrap();
        assert_eq!((w.r, w.e, w.w), (1, 0, 1));
        assert_eq!(w.alpha_slope, r(5, 2));
        assert_eq!(rep.total_slope, r(9, 4));

        assert_eq!(c.critical_alphas(), vec![r(0, 1), r(2, 1)]);
        assert_eq!(c.stability_interval().unwrap(), AlphaInterval::open(r(0, 1), r(2, 1)));
        // strictly semistable at the critical value
        let rep = c.is_alpha_stable(&r(2, 1)).unwrap();
        assert!(!rep.stable && rep.semistable);
        assert!(c.is_alpha_stable(&r(-1, 1)).is_err());
    }

    #[test]
    fn non_positive_summand_is_never_stable() {
        let c = StabilityChecker::new(&line_x1(), false).unwrap();
        assert_eq!(c.critical_alphas(), vec![r(1, 1)]);
        assert_eq!(c.stability_interval().unwrap(), AlphaInterval::Empty);
        let low = c.is_alpha_stable(&r(1, 2)).unwrap().witness.unwrap();
        assert_eq!((low.r, low.e, low.w), (1, 1, 0));
        let high = c.is_alpha_stable(&r(3, 1)).unwrap().witness.unwrap();
        assert_eq!((high.r, high.e, high.w), (1, 0, 1));
        for a in [r(0, 1), r(1, 1), r(7, 3), r(50, 1)] {
            assert!(!c.is_alpha_stable(&a).unwrap().stable);
        }
    }

    #[test]
    fn no_crossings_without_candidates_off_ratio() {
        // without sections every candidate has w/r = k/n = 0
        let c = StabilityChecker::new(&inst(&[2, 1], &[]), false).unwrap();
        assert!(c.critical_alphas().is_empty());
        assert!(!c.is_alpha_stable(&r(1, 1)).unwrap().stable);
    }

    #[test]
    fn endomorphisms_detect_split_systems() {
        // O(1) + O(1) with sections (x, 0) and (0, y): a direct sum
        let split = inst(&[1, 1], &[&[&[1, 0], &[]], &[&[], &[0, 1]]]);
        assert_eq!(endomorphism_dimension(&split), 2);
        let c = StabilityChecker::new(&split, false).unwrap();
        for a in [r(1, 2), r(1, 1), r(3, 2)] {
            let rep = c.is_alpha_stable(&a).unwrap();
            assert!(!rep.stable);
        }
        assert_eq!(endomorphism_dimension(&line_xy()), 1);
        assert_eq!(endomorphism_dimension(&inst(&[1, 1], &[])), 4);
    }

    #[test]
    fn exceptional_four_six_has_conjugate_destabilizers() {
        // on (4,6,2) the system is strictly semistable on [1,3] for generic V
        for seed in 0..3 {
            let x = sample_instance(4, 6, 2, 101, seed).unwrap();
            let c = StabilityChecker::new(&x, false).unwrap();
            for a in [r(1, 1), r(2, 1), r(5, 2), r(3, 1)] {
                let rep = c.is_alpha_stable(&a).unwrap();
                assert!(!rep.stable && rep.semistable, "seed={seed} alpha={a}");
            }
            assert!(!c.is_alpha_stable(&r(1, 2)).unwrap().semistable);
            assert!(!c.is_alpha_stable(&r(7, 2)).unwrap().semistable);
            assert_eq!(c.stability_interval().unwrap(), AlphaInterval::Empty);
        }
    }

    #[test]
    fn witnesses_are_sound() {
        for seed in 0..10 {
            let x = sample_instance(3, 5, 2, 101, seed).unwrap();
            let c = StabilityChecker::new(&x, false).unwrap();
            for cand in c.candidates() {
                let sections: Vec<_> = cand.basis.iter().map(|b| x.combine(b)).collect();
                let sat = saturate(x.splitting(), &sections, x.field()).unwrap();
                assert!(sat.rank <= cand.r);
                assert!(cand.e <= max_subbundle_degree(x.splitting(), cand.r).unwrap());
                if cand.r == 1 && cand.w == 1 {
                    let comps: Vec<BinaryForm> = sections[0].clone();
                    let div = vanishing_divisor_degree(&comps, x.field()).unwrap() as i64;
                    assert_eq!(cand.e, div);
                }
            }
        }
    }

    #[test]
    fn cost_guard() {
        let x = sample_instance(2, 4, 4, 37, 1).unwrap();
        assert_eq!(StabilityChecker::new(&x, false).err(), Some(Error::CostGuard { k: 4, q: 37 }));
        let small = sample_instance(2, 4, 4, 3, 1).unwrap();
        assert!(StabilityChecker::new(&small, false).is_ok());
    }
}
