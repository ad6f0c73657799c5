//! Length-2 Witt vectors over k(x) and Artin-Schreier-Witt class reduction.
//!
//! Structure constants mod 2 (re-derived by the ghost oracle, which the
//! build asserts against):
//!   (a1, a2) + (b1, b2) = (a1 + b1, a2 + b2 + a1*b1)
//!               -(a1, a2) = (a1, a2 + a1^2)
//!      coboundary(h1, h2) = (h1^2 + h1, h2^2 + h2 + h1^2 + h1^3)
//!
//! Reduction brings a class to the representative whose partial fractions
//! have only odd-order pole terms at x = 0 and no polynomial part; the
//! Katz-Gabber normalization means poles away from 0 are rejected.

use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct WittVector2 {
    pub f1: RationalFunction,
    pub f2: RationalFunction,
    reduced: bool,
}

impl WittVector2 {
    pub fn new(f1: RationalFunction, f2: RationalFunction) -> WittVector2 {
        WittVector2 {
            f1,
            f2,
            reduced: false,
        }
    }

    pub fn zero() -> WittVector2 {
        WittVector2::new(RationalFunction::zero(), RationalFunction::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.f2.is_zero()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn add(&self, other: &WittVector2) -> WittVector2 {
        WittVector2::new(
            self.f1.add(&other.f1),
            self.f2.add(&other.f2).add(&self.f1.mul(&other.f1)),
        )
    }

    pub fn neg(&self) -> WittVector2 {
        WittVector2::new(self.f1.clone(), self.f2.add(&self.f1.square()))
    }

    pub fn sub(&self, other: &WittVector2) -> WittVector2 {
        self.add(&other.neg())
    }

    /// Frobenius minus identity, the Artin-Schreier-Witt isogeny.
    pub fn coboundary(&self) -> WittVector2 {
        let frob = WittVector2::new(self.f1.square(), self.f2.square());
        frob.sub(self)
    }
}

impl fmt::Display for WittVector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

impl fmt::Debug for WittVector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittVector2{self}")
    }
}

/// Reduce a single component: repeatedly replace even-order pole terms
/// c/x^(2j) by sqrt(c)/x^j and kill the constant term through the
/// Artin-Schreier map on the ground field. Returns the reduced function
/// and the accumulated witness h with g = reduced + (h^2 + h).
fn reduce_component(g: &RationalFunction) -> Result<(RationalFunction, RationalFunction)> {
    let mut cur = g.clone();
    let mut witness = RationalFunction::zero();
    loop {
        let terms = cur.laurent_terms()?;
        if let Some((ord, _)) = terms.iter().find(|&&(ord, _)| ord > 0) {
            return Err(Error::UnsupportedPlace(format!(
                "polynomial part of degree {ord} is a pole at infinity"
            )));
        }
        let offender = terms
            .iter()
            .find(|&&(ord, _)| ord < 0 && ord % 2 == 0)
            .copied();
        match offender {
            Some((ord, c)) => {
                // c/x^(2j) = p(sqrt(c)/x^j) + sqrt(c)/x^j
                let j = (-ord as u64) / 2;
                let root = RationalFunction::pole_term(c.sqrt(), j);
                witness = witness.add(&root);
                cur = cur.add(&root.square()).add(&root);
            }
            None => break,
        }
    }
    // kill a constant term if present and solvable in F_{2^d}
    let constant = cur
        .laurent_terms()?
        .iter()
        .find(|&&(ord, _)| ord == 0)
        .map(|&(_, c)| c);
    if let Some(c) = constant {
        match c.solve_artin_schreier() {
            Some(e) => {
                let r = RationalFunction::constant(e);
                witness = witness.add(&r);
                cur = cur.add(&r.square()).add(&r);
            }
            None => {
                return Err(Error::ReductionObstruction(format!(
                    "constant term {c} has nonzero trace; killing it needs a \
                     ground-field extension (double d)"
                )))
            }
        }
    }
    Ok((cur, witness))
}

/// Reduce an order-2 class (a single Artin-Schreier right-hand side):
/// returns (r, h) with r reduced and r = g - (h^2 + h) exactly. This is
/// not the same as reducing the Witt vector (g, 0), whose coboundary
/// corrections leak into the second slot.
pub fn reduce_order2(g: &RationalFunction) -> Result<(RationalFunction, RationalFunction)> {
    reduce_component(g)
}

/// Order-2 class equivalence: g and g' differ by a coboundary h^2 + h.
pub fn order2_equivalent(g: &RationalFunction, h: &RationalFunction) -> Result<bool> {
    let (r, _) = reduce_component(&g.add(h))?;
    Ok(r.is_zero())
}

/// Reduce a Witt vector to the canonical class representative. Returns
/// (r, h) with r reduced and r = u - coboundary(h) exactly.
pub fn reduce_witt(u: &WittVector2) -> Result<(WittVector2, WittVector2)> {
    if u.reduced {
        return Ok((u.clone(), WittVector2::zero()));
    }
    let (_, h1) = reduce_component(&u.f1)?;
    let step1 = WittVector2::new(h1.clone(), RationalFunction::zero());
    let mut r = u.sub(&step1.coboundary());
    let (_, h2) = reduce_component(&r.f2)?;
    let step2 = WittVector2::new(RationalFunction::zero(), h2.clone());
    r = r.sub(&step2.coboundary());
    debug_assert!(reduce_component(&r.f1)?.1.is_zero());
    debug_assert!(reduce_component(&r.f2)?.1.is_zero());
    r.reduced = true;
    Ok((r, WittVector2::new(h1, h2)))
}

/// True when both components already have only odd-order poles at 0 and
/// no polynomial part.
pub fn is_reduced_form(u: &WittVector2) -> Result<bool> {
    for g in [&u.f1, &u.f2] {
        let terms = g.laurent_terms()?;
        if terms.iter().any(|&(ord, _)| ord >= 0 || ord % 2 == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mark a vector already known to be in reduced form.
pub fn assert_reduced(mut u: WittVector2) -> Result<WittVector2> {
    if !is_reduced_form(&u)? {
        return Err(Error::InvalidWittInput(format!(
            "{u} is not in reduced form"
        )));
    }
    u.reduced = true;
    Ok(u)
}

/// ASW equivalence: same class iff the difference reduces to zero.
pub fn asw_equivalent(u: &WittVector2, v: &WittVector2) -> Result<bool> {
    let (r, _) = reduce_witt(&u.sub(v))?;
    Ok(r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2x::field::Gf;
    use crate::gf2x::parse_ratfunc;
    use crate::gf2x::poly::Poly;
    use proptest::prelude::*;

    fn rf(s: &str) -> RationalFunction {
        parse_ratfunc(1, s).unwrap()
    }

    fn w(f1: &str, f2: &str) -> WittVector2 {
        WittVector2::new(rf(f1), rf(f2))
    }

    #[test]
    fn add_examples() {
        // cross term vanishes when one first component is zero
        let f = rf("1/x^3");
        let g = rf("(1+x^2)/x^5");
        let s = WittVector2::new(f.clone(), RationalFunction::zero())
            .add(&WittVector2::new(RationalFunction::zero(), g.clone()));
        assert_eq!(s, WittVector2::new(f.clone(), g));

        // doubling lands in the second slot: (f, 0) + (f, 0) = (0, f^2)
        let u = WittVector2::new(f.clone(), RationalFunction::zero());
        assert_eq!(
            u.add(&u),
            WittVector2::new(RationalFunction::zero(), f.square())
        );

        let a = w("1/x", "0");
        let b = w("1/x", "1/x^3");
        assert_eq!(a.add(&b), w("0", "1/x^2 + 1/x^3"));
    }

    #[test]
    fn sub_examples() {
        let u = w("1/x", "1/x^3 + 1/x");
        assert!(u.sub(&u).is_zero());
        assert_eq!(WittVector2::zero().sub(&w("x", "1/x")), w("x", "1/x + x^2"));
        assert!(w("1/x", "0").sub(&w("1/x", "0")).is_zero());
    }

    #[test]
    fn coboundary_examples() {
        assert_eq!(
            w("1/x", "0").coboundary(),
            w("1/x^2 + 1/x", "1/x^2 + 1/x^3")
        );
        let h = rf("(1+x)/x^3");
        let c = WittVector2::new(RationalFunction::zero(), h.clone()).coboundary();
        assert!(c.f1.is_zero());
        assert_eq!(c.f2, h.square().add(&h));
        // constants of F_2 are fixed by Frobenius
        assert!(w("1", "0").coboundary().is_zero());
    }

    #[test]
    fn reduce_kills_even_poles() {
        // length-1 view: 1/x^2 reduces to 1/x with witness 1/x in slot 1
        let (r, h) = reduce_witt(&w("1/x^2", "0")).unwrap();
        assert_eq!(r.f1, rf("1/x"));
        assert_eq!(h.f1, rf("1/x"));

        let (r, h) = reduce_witt(&w("1/x", "1/x^2")).unwrap();
        assert_eq!(r, super::assert_reduced(w("1/x", "1/x")).unwrap());
        assert_eq!(h, w("0", "1/x"));
    }

    #[test]
    fn reduce_is_idempotent() {
        let u = w("1/x^3", "1/x^5");
        let (r, h) = reduce_witt(&u).unwrap();
        assert_eq!((r.f1.clone(), r.f2.clone()), (u.f1.clone(), u.f2.clone()));
        assert!(h.is_zero());
        let (r2, h2) = reduce_witt(&r).unwrap();
        assert_eq!(r2, r);
        assert!(h2.is_zero());
    }

    #[test]
    fn reduce_rejects_poles_at_infinity() {
        assert!(matches!(
            reduce_witt(&w("x^2", "0")),
            Err(Error::UnsupportedPlace(_))
        ));
    }

    #[test]
    fn reduce_obstruction_over_f2() {
        // the constant 1 has trace 1 over F_2
        assert!(matches!(
            reduce_witt(&w("1/x + 1", "0")),
            Err(Error::ReductionObstruction(_))
        ));
        // over F_4 a second-slot constant 1 has zero trace and dissolves
        let u = WittVector2::new(
            parse_ratfunc(2, "1/x").unwrap(),
            parse_ratfunc(2, "1 + 1/x^3").unwrap(),
        );
        let (r, h) = reduce_witt(&u).unwrap();
        assert_eq!(r.f1, parse_ratfunc(2, "1/x").unwrap());
        assert_eq!(r.f2, parse_ratfunc(2, "1/x^3").unwrap());
        assert!(r.add(&h.coboundary()) == u);
    }

    /// Strict-pole Laurent functions at x = 0, the shapes the reduction
    /// pipeline works with.
    fn laurent(d: u32) -> impl Strategy<Value = RationalFunction> {
        (1u64..5, proptest::collection::vec(0u16..(1 << d.min(2)), 4)).prop_map(
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

    fn witt_vec(d: u32) -> impl Strategy<Value = WittVector2> {
        (laurent(d), laurent(d)).prop_map(|(f1, f2)| WittVector2::new(f1, f2))
    }

    proptest! {
        #[test]
        fn add_is_commutative(u in witt_vec(1), v in witt_vec(1)) {
            prop_assert_eq!(u.add(&v), v.add(&u));
        }

        #[test]
        fn add_is_associative(u in witt_vec(1), v in witt_vec(1), w in witt_vec(1)) {
            prop_assert_eq!(u.add(&v).add(&w), u.add(&v.add(&w)));
        }

        #[test]
        fn sub_undoes_add(u in witt_vec(1), v in witt_vec(1)) {
            prop_assert_eq!(u.add(&v).sub(&v), u.clone());
        }

        #[test]
        fn coboundary_is_additive(u in witt_vec(2), v in witt_vec(2)) {
            prop_assert_eq!(
                u.add(&v).coboundary(),
                u.coboundary().add(&v.coboundary())
            );
        }

        #[test]
        fn reduce_roundtrip(u in witt_vec(2)) {
            let (r, h) = reduce_witt(&u).unwrap();
            prop_assert_eq!(r.add(&h.coboundary()), u);
            let (r2, h2) = reduce_witt(&r).unwrap();
            prop_assert_eq!(r2, r);
            prop_assert!(h2.is_zero());
        }
    }
}
