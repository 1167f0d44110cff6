//! Exact-arithmetic workbench for Chevalley-Eilenberg homology of free Lie
//! algebras at finite weight truncation.
//!
//! Everything is computed over Q with arbitrary-precision rationals; there is
//! no floating point anywhere. The crate is organised around five layers:
//!
//! * [`linalg`] - sparse exact matrices over Q with rank / kernel / solve;
//! * [`freelie`] - the free Lie algebra on ordered generators in its Lyndon
//!   basis, the tensor-algebra oracle, and the graded quotient algebras;
//! * [`cechains`] - Chevalley-Eilenberg chains of a graded algebra with the
//!   (degree, weight, occurrence) multigrading and the differential;
//! * [`homology`] - weight-wise Betti numbers and boundary solving;
//! * [`construction`] - admissible index sequences, the explicit cycle
//!   families alpha/Omega, their antisymmetric matrix encodings and the
//!   machine-checked independence certificates.

pub mod cechains;
pub mod construction;
pub mod freelie;
pub mod homology;
pub mod linalg;
pub mod report;

pub use linalg::{rat, ratio, Rational, RationalMatrix};
pub use report::CertificateReport;
