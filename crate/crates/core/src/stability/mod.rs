//! Explicit coherent systems over F_q and their alpha-stability.

mod checker;
mod instance;
mod structure;
mod subspaces;

pub use checker::{
    endomorphism_dimension, Candidate, StabilityChecker, StabilityReport, SubsystemWitness, GUARD_K, GUARD_Q,
};
pub use instance::{sample_generating_instance, sample_instance, SystemInstance};
pub use structure::{check_global_generation, evaluation_rank_at_point};
pub use subspaces::{subspace_count, Subspaces};

use crate::error::Result;
use crate::exactmath::Rational;
use crate::interval::AlphaInterval;

pub fn is_alpha_stable(inst: &SystemInstance, alpha: &Rational) -> Result<StabilityReport> {
    StabilityChecker::new(inst, false)?.is_alpha_stable(alpha)
}

pub fn critical_alphas(inst: &SystemInstance) -> Result<Vec<Rational>> {
    Ok(StabilityChecker::new(inst, false)?.critical_alphas())
}

pub fn stability_interval(inst: &SystemInstance) -> Result<AlphaInterval> {
    StabilityChecker::new(inst, false)?.stability_interval()
}
