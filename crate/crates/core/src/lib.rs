//! Exact-arithmetic workbench for lifting Z/4-covers from characteristic 2
//! to characteristic 0.
//!
//! The residue side lives in `gf2x`: rational functions over F_{2^d},
//! length-two Witt vectors, Artin-Schreier-Witt class reduction, and
//! ramification breaks. The characteristic-0 side lives in `dyadic`: a
//! fixed-precision 2-adic coefficient ring containing i and an eighth root
//! of unity, valued polynomials with Gauss valuation, Newton polygons and
//! Teichmueller lifts. On top of those, `swan` computes degeneration types
//! (depth and differential Swan conductors, reductions) of order-2 Kummer
//! characters and decides good reduction by branch counting, and `lift`
//! builds the explicit order-4 extensions of a given order-2 lift and
//! assembles machine-checkable certificates. `oracle` holds independent,
//! slower verifiers used to certify structure constants and spot-check the
//! pipeline.

pub mod certificate;
pub mod dyadic;
pub mod error;
pub mod gf2x;
pub mod lift;
pub mod oracle;
pub mod parse;
pub mod swan;

pub use error::{Error, Result};
