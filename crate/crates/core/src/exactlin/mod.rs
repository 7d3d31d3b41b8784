//! Exact linear algebra over the Gaussian rationals, with a floating mirror.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{dot, is_hermitian_positive_definite, unit, vec_add, vec_conj, vec_is_zero, vec_scale, vec_sub, FMat, Mat, Matrix, PivotChoice};
pub use scalar::{
    format_rational, gauss, gauss_sqrt, gi, gr, i_pow, is_real, parse_rational, rat, rat_sqrt, rat_to_f64,
    GaussScalar, Scalar,
};
pub use subspace::{is_direct_sum, Residual, Subspace};
