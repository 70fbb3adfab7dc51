//! Coherent systems on the projective line.
//!
//! Two independent halves meet in this crate:
//!
//! * [`classification`] turns the known non-emptiness results for the
//!   moduli spaces `G(alpha; n, d, k)` into a decision procedure over exact
//!   rationals;
//! * [`stability`] decides alpha-stability of explicit coherent systems
//!   over a prime field by enumerating subsystems, so the classification
//!   can be tested against sampled instances ([`campaign`]).
//!
//! Everything is exact: alpha values and slopes are [`Rational`]s, bundle
//! maps are matrices of binary forms over F_q.

pub mod bundles;
pub mod campaign;
pub mod classification;
pub mod delta;
mod error;
pub mod exactmath;
pub mod interval;
pub mod numerology;
pub mod stability;

pub use bundles::{
    cohomology, generic_splitting, kernel_splitting, max_subbundle_degree, saturate, shatz_embedding_exists,
    FormMatrix, HNPolygon, SaturationResult, Section, SplittingType,
};
pub use classification::{classify, cross_check, necessary_region, Status, Verdict};
pub use error::{Error, Result};
pub use exactmath::{BinaryForm, FieldMatrix, Fp, PrimeField, Rational};
pub use interval::AlphaInterval;
pub use numerology::{brill_noether, decompose, valid_degrees_k1, Numerology};
pub use stability::{
    check_global_generation, critical_alphas, evaluation_rank_at_point, is_alpha_stable, sample_instance,
    stability_interval, StabilityChecker, StabilityReport, SubsystemWitness, SystemInstance,
};
