//! Exact linear algebra over the rationals and integers.

pub mod complex;
pub mod echelon;
pub mod group;
pub mod matrix;
pub mod rational;
pub mod smith;
pub mod sparse;

pub use complex::{convolve, direct_sum, tensor_complex, CochainComplex, CohomologyDegree, ComplexDump};
pub use echelon::{kernel_basis, kernel_subspace, rank, rref, solve, Echelon, Subspace};
pub use group::{tor1, FGAbelianGroup};
pub use matrix::{ExactMatrix, MatrixDump};
pub use rational::Rat;
pub use smith::{determinant, smith_normal_form, SmithForm};
pub use sparse::SparseVec;
