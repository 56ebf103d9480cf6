//! Exact computer algebra for free group algebras `k F_n` over the rationals and GF(p):
//! Fox derivatives, lattices of cyclic modules, greatest common right divisors,
//! irreducibility and factorization, truncated power series and Leavitt normal forms.

pub mod cli;
pub mod error;
pub mod factor;
pub mod fox;
pub mod lambda;
pub mod leavitt;
pub mod linalg;
pub mod repmod;
pub mod repmod_io;
pub mod scalars;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use lambda::FreePolynomial;
pub use scalars::{FieldElem, FieldSpec};
pub use words::{Letter, ReducedWord, XMonomial};
