//! Recursion operators, the antiderivative `D_z̄⁻¹` and nonlocal variables.

mod antiderivative;
pub mod nonlocal;
mod operators;

pub use antiderivative::{exact_antiderivative, inv_dzbar_poly, split};
pub use operators::{
    catalogue_phi, i_catalogue, i_equivalence, i_equivalence_check, iso_i, lemma22_check, lemma22_sides, lift_j, r_hat,
    t_hat, trace_r_hat, trace_t_hat, CataloguePair, Equivalence,
};
