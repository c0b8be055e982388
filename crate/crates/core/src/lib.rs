//! Square hyperbolae in the hyperbolic plane and bisectors in the bidisk
//! `H2 x H2`.
//!
//! - [`hcore`]: hyperboloid-model kernel (distances, geodesics, isometries,
//!   Fermi coordinates, right triangles and Lambert quadrilaterals).
//! - [`squarehyp`]: level functions `d^2(x,p) - d^2(y,p)`, their level sets,
//!   curve tracing and the level-set relation test between two pairs.
//! - [`bidisk`]: product metric, bisectors, their foliation by leaves,
//!   sampling and recovery of the defining pair from bisector samples.
//! - [`verify`]: parameterised numerical checks with structured reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod bidisk;
pub mod error;
pub mod hcore;
pub mod optim;
pub mod squarehyp;
pub mod tol;
pub mod verify;

pub use error::{GeomError, Result};
