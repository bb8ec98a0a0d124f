//! Exact-arithmetic homological algebra around the surjection operad.
//!
//! The crate provides:
//!
//! * graded modules, chain complexes, Smith/Hermite normal forms and
//!   integral homology ([`graded`], [`snf`], [`homology`]);
//! * the surjection operad with its complexity filtration, differential,
//!   composition, symmetric-group action and insertion homotopies
//!   ([`surjection`]);
//! * brace algebras: evaluation of complexity-two sequences through brace
//!   expressions, the brace differential/multiplication identities, and the
//!   cochain-level Steenrod square ([`brace`]);
//! * presented (co/Hopf) algebras, bar and cobar constructions, twisting
//!   morphisms, the Hopf structure on bar, and the brace structure on cobar
//!   ([`presented`], [`barcobar`]);
//! * the free brace-algebra cobar model with its deformation retraction
//!   homotopy ([`tilde`]);
//! * graded Lie algebras, enveloping algebras and the Chevalley–Eilenberg
//!   comparison ([`ce`]);
//! * input file parsing and machine-readable verification reports
//!   ([`ingest`], [`report`], [`suites`]).
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod barcobar;
pub mod brace;
pub mod ce;
pub mod error;
pub mod graded;
pub mod homology;
pub mod ingest;
pub mod presented;
pub mod report;
pub mod ring;
pub mod snf;
pub mod suites;
pub mod surjection;
pub mod tilde;

pub use error::AlgError;
pub use ring::{Ring, ZMod, QQ, ZZ};
