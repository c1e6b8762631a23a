//! Exact computation of the diagonal of the cohomology spectral sequence for
//! the cosimplicial model of long knots, checked against an independent
//! computation of finite-type weight systems.
//!
//! Modules, bottom up:
//!
//! * [`linalg`]: rational sparse matrices and canonical subspaces.
//! * [`diagrams`]: chord diagrams, the 4T relation, weight systems, trivalent
//!   diagrams and STU.
//! * [`cohomology`]: the cohomology ring of configuration spaces of points in
//!   3-space, straightening, and normalized bases.
//! * [`spectral`]: coface maps, the first differential, and the diagonal of E2.
//! * [`knots`]: Gauss codes of long knots, singular knots, the skein
//!   extension, and two low-degree invariants.
//! * [`verify`]: the batch suites run by the command-line tool.

pub mod cohomology;
pub mod diagrams;
pub mod knots;
pub mod linalg;
pub mod spectral;
pub mod verify;

pub use linalg::Rational;
