//! Exact arithmetic foundation: matrices over Z, Q and GF(2), Smith normal
//! form, Diophantine solves, inertia of symmetric forms and finite abelian
//! group presentations.

mod field;
mod group;
mod integer;
mod matrix;
mod signature;
mod smith;

pub use field::{kernel as field_kernel, rank as field_rank, rref, solve as field_solve, Echelon, FieldSubquotient};
pub use group::{ElementIter, FiniteAbelianGroup, GroupDescription};
pub use integer::{cokernel_presentation, kernel_basis, solve_integer, Cokernel, KernelBasis, Lattice, Subquotient};
pub use matrix::{Field, Gf2, Gf2Matrix, IntMatrix, Matrix, RatMatrix, Scalar};
pub use signature::{signature_of_symmetric, Inertia};
pub use smith::{smith_normal_form, SmithDecomposition};

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &num_rational::BigRational) -> num_rational::BigRational {
    x - x.floor()
}
