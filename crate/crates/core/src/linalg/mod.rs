//! Dense and sparse complex matrices, the Hermitian pencil, complex-shifted
//! solves, the reduced generalized eigensolver and Matrix Market I/O.
//!
//! Everything is sized for desk-scale problems: sparse storage is used for
//! products, and shifted systems are factored densely.

mod csr;
mod eigh;
mod lu;
mod matrix;
mod mtx;
mod pencil;

pub use csr::CsrMatrix;
pub use eigh::{cholesky, hermitian_eig, reduced_eig, HermitianEig, ReducedEig, RANK_TOL};
pub use lu::{solve_dense, LuFactorization, SingularPivot, PIVOT_TOL};
pub use matrix::{max_principal_angle_sine, orthonormal_basis, CMatrix};
pub use mtx::{load_matrix_market, MatrixMarket, MtxField, MtxFormat, MtxSymmetry};
pub use pencil::{
    b_inner, shifted_solve, HermitianPencil, Operator, ShiftedSystem, HERMITIAN_TOL,
    SOLVE_RESIDUAL_TOL,
};
