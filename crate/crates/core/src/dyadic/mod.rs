//! Fixed-precision arithmetic in the 2-adic coefficient ring
//! R' = W(F_{2^d}) extended by zeta8: valued polynomials and rational
//! functions with the Gauss valuation, residue maps, Newton polygons,
//! resultants, and Teichmueller lifts.

pub mod newton;
pub mod poly;
pub mod ratfunc;
pub mod ring;

pub use newton::{newton_polygon, separability_check, NewtonSegment};
pub use poly::DyadicPoly;
pub use ratfunc::{parse_dyadic_element, parse_dyadic_ratfunc, DyadicRationalFunction};
pub use ring::{make_ring, DyadicNumber, Prec, Quarters, RingConfig};
