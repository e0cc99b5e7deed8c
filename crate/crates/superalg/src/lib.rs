//! Exact computer algebra for truncated Grassmann algebras, supermatrices,
//! and the super Gram-Schmidt Iwasawa factorization M = Φ·Ψ, together with
//! the Hopf-superalgebra machinery (coproduct, counit, antipode, graded real
//! form) the factorization rests on.

pub mod algebra;
pub mod error;
pub mod hopf;
pub mod iwasawa;
pub mod json;
pub mod scalar;
pub mod supermatrix;

pub use algebra::{Element, GenId, GeneratorDecl, GeneratorTable, Monomial, Parity, ParityClass};
pub use error::{Error, Result};
pub use scalar::{ComplexF64, GaussianRational, Scalar, FLOAT_TOLERANCE};
pub use supermatrix::{SuperDims, SuperMatrix, SuperVector};
