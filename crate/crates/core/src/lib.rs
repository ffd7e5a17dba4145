//! Lattice successive-minima toolkit: exact enumeration oracles, sum/inverse
//! bounds on the minima of Cholesky-factor lattices, LLL/PLLL reduction, and
//! an integer-forcing C-RAN rate solver built on top of them.

pub mod error;
pub mod ifcran;
pub mod io;
pub mod linalg;
pub mod minima;
pub mod reduction;
pub mod sampling;
pub mod tolerances;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
