//! Finite-dimensional data: structure constants, invariant forms, finite-order
//! automorphisms and the joint basis adapted to a grading and a twist.

mod algebra;
mod automorphism;
mod grading;

pub use algebra::{Elem, LieAlgebraData, MatrixRep, Structure};
pub use automorphism::AutomorphismData;
pub use grading::{grade_and_twist, FactorGroup, GradedTwistData, GradingOptions, LevelShifts};
