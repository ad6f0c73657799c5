//! Ramification breaks and conductors of order-4 covers from reduced
//! Witt vectors, plus the input normal form for the lifting pipeline.
//!
//! For a reduced vector (f1, f2) with poles only at x = 0 the breaks are
//!   m1 = pole order of f1,   m2 = max(2*m1, pole order of f2),
//! and the conductor of the order-4 cover is m2 + 1. The order-2 cover
//! attached to a single reduced function g has conductor (pole order) + 1.

use super::ratfunc::RationalFunction;
use super::witt::{reduce_witt, WittVector2};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BranchData {
    pub m1: u64,
    pub m2: u64,
    pub conductor: u64,
}

/// Breaks of the order-4 cover classified by `u`. Reduces first when the
/// input is not flagged reduced.
pub fn ramification_breaks(u: &WittVector2) -> Result<BranchData> {
    let r = if u.is_reduced() {
        u.clone()
    } else {
        reduce_witt(u)?.0
    };
    let m1 = r.f1.pole_order_at_zero();
    if m1 == 0 {
        return Err(Error::NotTotallyRamified);
    }
    let n2 = r.f2.pole_order_at_zero();
    let m2 = (2 * m1).max(n2);
    Ok(BranchData {
        m1,
        m2,
        conductor: m2 + 1,
    })
}

/// Conductor of the order-2 cover y^2 + y = g for reduced g: highest
/// break plus one. The trivial class has conductor 0 by convention.
pub fn order2_conductor(g: &RationalFunction) -> Result<u64> {
    if g.is_zero() {
        return Ok(0);
    }
    if !g.poles_only_at_zero() {
        return Err(Error::UnsupportedPlace(format!("poles away from 0 in {g}")));
    }
    Ok(g.pole_order_at_zero() + 1)
}

/// Check the order-4 input normal form:
///   f1 = 1/x^m1 with m1 odd;
///   f2 = (sum of a_(n2-i) x^i)/x^n2 with n2 odd, nonzero coefficients
///   only at even i, leading a_n2 nonzero — or f2 = 0.
/// Returns the branch data on success.
pub fn validate_phi(u: &WittVector2) -> Result<BranchData> {
    let f1 = &u.f1;
    if f1.is_zero() {
        return Err(Error::NotTotallyRamified);
    }
    if !f1.poles_only_at_zero() {
        return Err(Error::InvalidWittInput(format!(
            "f1 = {f1} has a pole away from x = 0"
        )));
    }
    let m1 = f1.pole_order_at_zero();
    let f1_terms = f1.laurent_terms()?;
    if f1_terms.len() != 1 || f1_terms[0].0 != -(m1 as i64) || !f1_terms[0].1.is_one() {
        return Err(Error::InvalidWittInput(format!(
            "f1 = {f1} is not a monomial 1/x^m1"
        )));
    }
    if m1 % 2 == 0 {
        return Err(Error::InvalidWittInput(format!("m1 = {m1} must be odd")));
    }

    let f2 = &u.f2;
    let n2 = if f2.is_zero() {
        0
    } else {
        if !f2.poles_only_at_zero() {
            return Err(Error::InvalidWittInput(format!(
                "f2 = {f2} has a pole away from x = 0"
            )));
        }
        let n2 = f2.pole_order_at_zero();
        if n2 % 2 == 0 {
            return Err(Error::InvalidWittInput(format!("n2 = {n2} must be odd")));
        }
        for (ord, c) in f2.laurent_terms()? {
            if ord >= 0 {
                return Err(Error::InvalidWittInput(format!(
                    "f2 has a non-pole term {c}*x^{ord}"
                )));
            }
            // exponent i in the numerator over x^n2
            let i = n2 as i64 + ord;
            if i % 2 != 0 {
                return Err(Error::InvalidWittInput(format!(
                    "f2 has a forbidden odd-index coefficient at x^{i}/x^{n2}"
                )));
            }
        }
        // canonical form guarantees the deepest pole has nonzero coefficient
        n2
    };

    let m2 = (2 * m1).max(n2);
    Ok(BranchData {
        m1,
        m2,
        conductor: m2 + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2x::parse_ratfunc;

    fn rf(d: u32, s: &str) -> RationalFunction {
        parse_ratfunc(d, s).unwrap()
    }

    fn witt(d: u32, f1: &str, f2: &str) -> WittVector2 {
        WittVector2::new(rf(d, f1), rf(d, f2))
    }

    #[test]
    fn breaks_small_n2() {
        // n2 < 2*m1 forces m2 = 2*m1
        let b = ramification_breaks(&witt(1, "1/x^3", "1/x^5")).unwrap();
        assert_eq!((b.m1, b.m2, b.conductor), (3, 6, 7));
    }

    #[test]
    fn breaks_large_n2() {
        // n2 > 2*m1 gives m2 = n2
        let b = ramification_breaks(&witt(1, "1/x", "1/x^5")).unwrap();
        assert_eq!((b.m1, b.m2, b.conductor), (1, 5, 6));
    }

    #[test]
    fn breaks_zero_f2() {
        let b = ramification_breaks(&witt(1, "1/x", "0")).unwrap();
        assert_eq!((b.m1, b.m2), (1, 2));
    }

    #[test]
    fn breaks_need_total_ramification() {
        assert!(matches!(
            ramification_breaks(&witt(1, "0", "1/x^3")),
            Err(Error::NotTotallyRamified)
        ));
    }

    #[test]
    fn validate_accepts_normal_form() {
        let b = validate_phi(&witt(1, "1/x^3", "(1 + x^2)/x^3")).unwrap();
        assert_eq!((b.m1, b.m2), (3, 6));
    }

    #[test]
    fn validate_rejects_even_m1() {
        assert!(matches!(
            validate_phi(&witt(1, "1/x^2", "1/x^3")),
            Err(Error::InvalidWittInput(_))
        ));
    }

    #[test]
    fn validate_rejects_odd_index_coefficient() {
        // x/x^3 carries i = 1
        assert!(matches!(
            validate_phi(&witt(1, "1/x", "x/x^3")),
            Err(Error::InvalidWittInput(_))
        ));
    }

    #[test]
    fn validate_rejects_even_n2() {
        assert!(matches!(
            validate_phi(&witt(1, "1/x", "1/x^4")),
            Err(Error::InvalidWittInput(_))
        ));
    }

    #[test]
    fn breaks_reduce_first() {
        // 1/x^2 reduces to 1/x in the first slot
        let b = ramification_breaks(&witt(1, "1/x^2", "0")).unwrap();
        assert_eq!((b.m1, b.m2), (1, 2));
    }
}

#[cfg(test)]
mod corollary_props {
    use super::*;
    use crate::gf2x::field::Gf;
    use crate::gf2x::poly::Poly;
    use proptest::prelude::*;

    fn laurent(d: u32) -> impl Strategy<Value = RationalFunction> {
        (1u64..6, proptest::collection::vec(0u16..(1 << d.min(2)), 5)).prop_map(
            move |(k, coeffs)| {
                let num = Poly::from_terms(
                    coeffs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| (*i as u64) < k)
                        .map(|(i, &b)| (i as u64, Gf::new(d, b % (1 << d)).unwrap())),
                );
                RationalFunction::new(num, Poly::monomial(Gf::one(d), k))
            },
        )
    }

    proptest! {
        /// m1 odd, m2 >= 2*m1, and m2 odd whenever m2 > 2*m1.
        #[test]
        fn break_corollary(f1 in laurent(1), f2 in laurent(2)) {
            let u = WittVector2::new(f1, f2);
            match ramification_breaks(&u) {
                Ok(b) => {
                    prop_assert_eq!(b.m1 % 2, 1);
                    prop_assert!(b.m2 >= 2 * b.m1);
                    if b.m2 > 2 * b.m1 {
                        prop_assert_eq!(b.m2 % 2, 1);
                    }
                    prop_assert_eq!(b.conductor, b.m2 + 1);
                }
                Err(Error::NotTotallyRamified) => {}
                Err(Error::ReductionObstruction(_)) => {}
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }
    }
}
