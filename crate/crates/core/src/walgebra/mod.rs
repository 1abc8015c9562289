//! Classical W-algebras of a nilpotent element: the finite Poisson bracket on
//! `S(g^f)`, the affine λ-bracket on `S(F[∂]g^f)`, and the Hamiltonian
//! reduction realizations used to cross-check both.

mod finite;
mod monster;
mod reduction;

pub use finite::{finite_bracket, generator_labels, gf_element, monomials_up_to, FiniteBracketTable};
pub use monster::{affine_generator_bracket, affine_w_structure};
pub use reduction::{FiniteReduction, ReductionRealization};
