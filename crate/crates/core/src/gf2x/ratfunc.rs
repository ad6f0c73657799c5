//! Rational functions over F_{2^d} in canonical lowest terms.
//!
//! The denominator is monic and coprime to the numerator, so equality of
//! values is equality of representations.

use super::field::Gf;
use super::poly::Poly;
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> RationalFunction {
        assert!(!den.is_zero(), "zero denominator");
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lead = den.leading_coeff();
        if !lead.is_one() {
            let inv = lead.inverse().unwrap();
            num = num.mul_scalar(inv);
            den = den.mul_scalar(inv);
        }
        if num.is_zero() {
            den = Poly::one(1);
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> RationalFunction {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(1),
        }
    }

    pub fn one(d: u32) -> RationalFunction {
        RationalFunction::from_poly(Poly::one(d))
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction {
            num: p,
            den: Poly::one(1),
        }
    }

    pub fn constant(c: Gf) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(c))
    }

    /// c / x^k
    pub fn pole_term(c: Gf, k: u64) -> RationalFunction {
        RationalFunction::new(Poly::constant(c), Poly::monomial(Gf::one(1), k))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RationalFunction) -> RationalFunction {
        assert!(!other.is_zero(), "division by zero rational function");
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn square(&self) -> RationalFunction {
        // canonical form is preserved by squaring in char 2
        RationalFunction {
            num: self.num.square(),
            den: self.den.square(),
        }
    }

    /// True iff self = h^2 for some h in k(x). In canonical form this is
    /// equivalent to both numerator and denominator having only even
    /// exponents (coefficients are always squares over F_{2^d}).
    pub fn is_square(&self) -> bool {
        self.num.is_square() && self.den.is_square()
    }

    pub fn sqrt(&self) -> Result<RationalFunction> {
        let num = self.num.sqrt()?;
        let den = self.den.sqrt()?;
        Ok(RationalFunction { num, den })
    }

    /// Formal derivative via the quotient rule.
    pub fn derivative(&self) -> RationalFunction {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .add(&self.num.mul(&self.den.derivative()));
        RationalFunction::new(n, self.den.square())
    }

    /// Pole order at x = 0 (0 when there is no pole there).
    pub fn pole_order_at_zero(&self) -> u64 {
        if self.is_zero() {
            return 0;
        }
        self.den.order_at_zero().unwrap_or(0)
    }

    /// True when the only finite pole is x = 0, i.e. the denominator is a
    /// power of x.
    pub fn poles_only_at_zero(&self) -> bool {
        let k = self.den.order_at_zero().unwrap_or(0);
        self.den.degree() == Some(k)
    }

    /// Laurent expansion around 0 for functions with denominator x^k:
    /// pairs (order, coefficient) where order is the exponent of x
    /// (negative for pole terms).
    pub fn laurent_terms(&self) -> Result<Vec<(i64, Gf)>> {
        if !self.poles_only_at_zero() {
            return Err(Error::UnsupportedPlace(format!(
                "poles away from x = 0 in {self}"
            )));
        }
        let k = self.den.order_at_zero().unwrap_or(0) as i64;
        Ok(self.num.terms().map(|(e, c)| (e as i64 - k, c)).collect())
    }

    /// Degree of the numerator's polynomial part beyond the pole at 0;
    /// positive values mean a pole at infinity.
    pub fn order_at_infinity(&self) -> i64 {
        if self.is_zero() {
            return 0;
        }
        self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
    }

    pub fn field_degree(&self) -> u32 {
        self.num.field_degree().max(self.den.field_degree())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den.degree() == Some(0) {
            return write!(f, "{}", self.num);
        }
        let num = format!("{}", self.num);
        let den = format!("{}", self.den);
        let num_wrapped = if num.contains(" + ") {
            format!("({num})")
        } else {
            num
        };
        let den_wrapped = if den.contains(" + ") {
            format!("({den})")
        } else {
            den
        };
        write!(f, "{num_wrapped}/{den_wrapped}")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
