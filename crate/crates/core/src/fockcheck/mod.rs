//! Vacuum modules of the free fields and the `g_0` currents, exact mode
//! action of field expressions, and brute-force checks of commutation
//! relations on sample states.

mod eval;
mod module;
mod verify;

pub use eval::Evaluator;
pub use module::{FockState, ModeIndex, ModuleSpec, Mono, Op};
pub use verify::{
    lattice_modes, sample_states, verify_borcherds_consequences, verify_mode_algebra, verify_sugawara, CheckReport,
    Failure, Sample, VerifyOptions,
};
