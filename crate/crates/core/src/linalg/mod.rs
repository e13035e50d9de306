//! Dense complex linear algebra used throughout the toolkit.

pub mod douglas;
pub mod env;
pub mod margin;
pub mod matrix;
pub mod restricted;
pub mod subspace;
pub mod svd;

pub use douglas::{douglas_solve, majorization_constant, range_inclusion_check, Majorization};
pub use env::OperatorEnv;
pub use margin::{neumann_invertibility_margin, restricted_invertibility_margin, MarginReport};
pub use matrix::{basis_vector, re, real_vector, ComplexMatrix, ComplexVector, C64};
pub use restricted::{restricted_inverse, RestrictedMap};
pub use subspace::{null_space, range_projector, Subspace};
pub use svd::{
    compressed_pencil_max, hermitian_eigen, hermitian_eigenvalues, min_hermitian_eigenvalue, pseudo_inverse, rank,
    svd_decompose, SvdFactors,
};
