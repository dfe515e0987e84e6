//! Exact scalars: rationals, cyclotomic numbers, sparse polynomials in the
//! `q` variables and dense linear algebra over the cyclotomic numbers.

mod cyclotomic;
mod linalg;
mod qpoly;
mod rational;

pub use cyclotomic::{cyclotomic_poly, euler_phi, root_of_unity, CycNum};
pub use linalg::Mat;
pub use qpoly::{Monomial, QPoly};
pub use rational::{binomial, parse_q, q, q_to_string, Q};
