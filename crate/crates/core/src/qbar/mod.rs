//! Exact linear algebra over cyclotomic fields: tensor factor recovery,
//! hermitian Gram-Schmidt, orthogonal-complement descent, summand bases and
//! Hodge-basis descent.

mod field;
pub mod linalg;
mod lemmas;

pub use field::{CyclotomicField, CyclotomicNumber};
pub use lemmas::{
    gram_schmidt, gram_schmidt_with_transform, hodge_basis_descent, is_split_compatible,
    ortho_complement_descend, rank1_factor, real_sign, summand_basis_extract,
    tensor_factor_recover, tensor_hermitian, HermitianForm, HodgePiece, QbarError, SubspaceBasis,
};
pub use linalg::{Matrix, Vector};
