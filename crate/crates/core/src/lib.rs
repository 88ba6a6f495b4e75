//! Computational toolkit for cylindrical contact homology on torus bundles.
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`]: exact arithmetic in `Q[Z^r]` and Smith normal form over `Q[t, t^-1]`.
//! * [`complexes`]: graded chain complexes over the group ring and their homology.
//! * [`orbits`]: closed Reeb orbits of `T^2`-invariant contact forms, monodromy classes.
//! * [`holonomy`]: monomial automorphisms induced by loops of contact structures,
//!   with exact finite/infinite order certificates.
//! * [`lutz`]: critical points of the Lutz fibration on the open-book page of `T^3`.
//! * [`flow`]: numerical Reeb flow and closed-orbit shooting on `T^3`.
//! * [`report`]: end-to-end pipelines producing pass/fail reports.

pub mod complexes;
pub mod error;
pub mod flow;
pub mod holonomy;
pub mod lutz;
pub mod orbits;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
