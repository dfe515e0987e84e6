//! Field expressions over the free fields, lambda-brackets, the Wakimoto
//! currents and their rendering.

mod field;
mod printer;
mod realization;
mod wick;

pub use field::{Atom, FieldExpr, Gen, Term, Word};
pub use printer::{from_tree, groups, parse_monomial, render, single_term, to_tree, CycJson, FieldTree, Group, Style};
pub use realization::{Mutation, Realization};
pub use wick::{atom_bracket, bracket_atom, commutator_fields, lp_is_zero, BracketSource, LambdaPoly};
