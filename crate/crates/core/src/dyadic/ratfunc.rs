//! Rational functions over the dyadic ring with the Gauss valuation.
//!
//! No gcd cancellation is attempted over an inexact coefficient ring;
//! the Gauss valuation and residue map work on the raw numerator and
//! denominator, which is all the pipeline needs. The only normalization
//! is stripping a common exact power of X.

use super::poly::DyadicPoly;
use super::ring::{DyadicNumber, RingConfig};
use crate::error::{Error, Result};
use crate::gf2x::{parse_gf, RationalFunction};
use crate::parse::{parse_expr, Eval};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct DyadicRationalFunction {
    num: DyadicPoly,
    den: DyadicPoly,
}

impl DyadicRationalFunction {
    pub fn new(num: DyadicPoly, den: DyadicPoly) -> DyadicRationalFunction {
        assert!(!den.is_exactly_zero(), "zero denominator");
        let mut f = DyadicRationalFunction { num, den };
        f.strip_common_x();
        f
    }

    fn strip_common_x(&mut self) {
        if self.num.is_exactly_zero() {
            self.den = DyadicPoly::one(self.den.ring());
            return;
        }
        let nx = self
            .num
            .coeffs()
            .iter()
            .take_while(|c| c.is_exact_zero())
            .count();
        let dx = self
            .den
            .coeffs()
            .iter()
            .take_while(|c| c.is_exact_zero())
            .count();
        let k = nx.min(dx);
        if k > 0 {
            self.num = self.num.div_x_pow(k);
            self.den = self.den.div_x_pow(k);
        }
    }

    pub fn from_poly(p: DyadicPoly) -> DyadicRationalFunction {
        let one = DyadicPoly::one(p.ring());
        DyadicRationalFunction::new(p, one)
    }

    pub fn constant(c: DyadicNumber) -> DyadicRationalFunction {
        DyadicRationalFunction::from_poly(DyadicPoly::constant(c))
    }

    pub fn one(ring: &RingConfig) -> DyadicRationalFunction {
        DyadicRationalFunction::from_poly(DyadicPoly::one(ring))
    }

    pub fn zero(ring: &RingConfig) -> DyadicRationalFunction {
        DyadicRationalFunction::from_poly(DyadicPoly::zero(ring))
    }

    pub fn ring(&self) -> &RingConfig {
        self.num.ring()
    }

    pub fn numerator(&self) -> &DyadicPoly {
        &self.num
    }

    pub fn denominator(&self) -> &DyadicPoly {
        &self.den
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.num.is_exactly_zero()
    }

    pub fn add(&self, other: &DyadicRationalFunction) -> DyadicRationalFunction {
        DyadicRationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> DyadicRationalFunction {
        DyadicRationalFunction::new(self.num.neg(), self.den.clone())
    }

    pub fn sub(&self, other: &DyadicRationalFunction) -> DyadicRationalFunction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DyadicRationalFunction) -> DyadicRationalFunction {
        DyadicRationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &DyadicRationalFunction) -> Result<DyadicRationalFunction> {
        if other.is_exactly_zero() {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        Ok(DyadicRationalFunction::new(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn square(&self) -> DyadicRationalFunction {
        self.mul(self)
    }

    pub fn mul_scalar(&self, c: &DyadicNumber) -> DyadicRationalFunction {
        DyadicRationalFunction::new(self.num.mul_scalar(c), self.den.clone())
    }

    /// Gauss valuation in quarters: min coefficient valuation of the
    /// numerator minus the denominator's.
    pub fn gauss_val_quarters(&self) -> Result<i64> {
        if self.is_exactly_zero() {
            return Err(Error::InvalidParameter(
                "gauss valuation of the zero function".into(),
            ));
        }
        Ok(self.num.min_valuation()? - self.den.min_valuation()?)
    }

    /// Residue in F_{2^d}(x) of a unit-valued function: normalize both
    /// sides by the denominator's minimal valuation and reduce mod pi.
    pub fn residue(&self) -> Result<RationalFunction> {
        if self.is_exactly_zero() {
            return Ok(RationalFunction::zero());
        }
        let v = self.gauss_val_quarters()?;
        if v != 0 {
            return Err(Error::ValueNotUnit(format!(
                "gauss valuation {}",
                super::ring::Quarters(v)
            )));
        }
        let w = self.den.min_valuation()?;
        let num = self.num.shift_down(w)?.residue()?;
        let den = self.den.shift_down(w)?.residue()?;
        debug_assert!(!den.is_zero());
        Ok(RationalFunction::new(num, den))
    }

    /// Divide by the canonical element of valuation k quarters.
    pub fn shift_down_canonical(&self, k: i64) -> DyadicRationalFunction {
        let n = self.ring().normalizer(k);
        DyadicRationalFunction::new(self.num.clone(), self.den.mul_scalar(&n))
    }

    /// Exact-zero test for differences: true only when the numerator is
    /// exactly the zero polynomial.
    pub fn is_zero_exact(&self) -> bool {
        self.num.is_exactly_zero()
    }

    /// True when every numerator coefficient is zero at its precision
    /// (exact zeros included). Distinguishes "verified to precision"
    /// from exact vanishing.
    pub fn is_zero_to_prec(&self) -> bool {
        self.num.coeffs().iter().all(|c| c.is_zero_to_prec())
    }

    /// Denominator is a pure power of X (the Laurent shapes the greedy
    /// search supports).
    pub fn is_laurent_in_inv_x(&self) -> bool {
        self.den.coeffs().iter().enumerate().all(|(k, c)| {
            if k + 1 == self.den.coeffs().len() {
                !c.is_zero_to_prec()
            } else {
                c.is_exact_zero()
            }
        })
    }
}

impl fmt::Display for DyadicRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exactly_zero() {
            return write!(f, "0");
        }
        if self.den.degree() == Some(0) && self.den.coeff(0) == self.ring().one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

impl fmt::Debug for DyadicRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicRationalFunction({self})")
    }
}

struct DyadicEval {
    ring: RingConfig,
}

impl Eval for DyadicEval {
    type Value = DyadicRationalFunction;

    fn symbol(&self, name: &str) -> Result<DyadicRationalFunction> {
        let r = &self.ring;
        let c = match name {
            "X" => return Ok(DyadicRationalFunction::from_poly(DyadicPoly::x(r))),
            "pi" => r.pi(),
            "i" => r.i_unit(),
            "zeta8" => r.zeta8(),
            "sqrt2" => r.sqrt2(),
            "lambda" => r.lambda(),
            other => {
                return Err(Error::Parse(format!(
                    "unknown symbol {other:?} over the dyadic ring \
                     (known: X, pi, i, zeta8, sqrt2, lambda, teich(..))"
                )))
            }
        };
        Ok(DyadicRationalFunction::constant(c))
    }

    fn integer(&self, n: u64) -> Result<DyadicRationalFunction> {
        if n > i64::MAX as u64 {
            return Err(Error::Parse("integer literal too large".into()));
        }
        Ok(DyadicRationalFunction::constant(
            self.ring.integer(n as i64),
        ))
    }

    fn call(&self, name: &str, arg: &str) -> Result<DyadicRationalFunction> {
        match name {
            "teich" => {
                let a = parse_gf(self.ring.residue_degree(), arg)?;
                Ok(DyadicRationalFunction::constant(self.ring.teichmuller(a)))
            }
            other => Err(Error::Parse(format!("unknown function {other:?}"))),
        }
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value> {
        Ok(a.add(&b))
    }

    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value> {
        Ok(a.sub(&b))
    }

    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value> {
        Ok(a.mul(&b))
    }

    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value> {
        a.div(&b)
    }

    fn neg(&self, a: Self::Value) -> Result<Self::Value> {
        Ok(a.neg())
    }

    fn pow(&self, a: Self::Value, e: u64) -> Result<Self::Value> {
        let mut acc = DyadicRationalFunction::one(a.ring());
        for _ in 0..e {
            acc = acc.mul(&a);
        }
        Ok(acc)
    }
}

/// Parse a rational function over the dyadic ring, e.g. "1 + 4/X^3" or
/// "1 - 2*i/X". Constants: pi, i, zeta8, sqrt2, lambda, teich(..).
pub fn parse_dyadic_ratfunc(ring: &RingConfig, src: &str) -> Result<DyadicRationalFunction> {
    parse_expr(&DyadicEval { ring: ring.clone() }, src)
}

/// Parse a ring element (a constant rational function with unit
/// denominator), e.g. "pi^2" for a branch parameter.
pub fn parse_dyadic_element(ring: &RingConfig, src: &str) -> Result<DyadicNumber> {
    let f = parse_dyadic_ratfunc(ring, src)?;
    if f.is_exactly_zero() {
        return Ok(ring.exact_zero());
    }
    if f.numerator().degree() != Some(0) || f.denominator().degree() != Some(0) {
        return Err(Error::Parse(format!(
            "{src:?} is not a constant ring element"
        )));
    }
    let num = f.numerator().coeff(0);
    let den = f.denominator().coeff(0);
    if den == ring.one() && den.is_exact() {
        return Ok(num);
    }
    let dv = den.valuation_quarters()?.expect("nonzero denominator");
    if dv != 0 {
        return Err(Error::InvalidParameter(format!(
            "{src:?} does not lie in the coefficient ring (denominator \
             has positive valuation)"
        )));
    }
    Ok(num.mul(&den.invert_unit()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::ring::make_ring;

    fn ring() -> RingConfig {
        make_ring(1, 32).unwrap()
    }

    #[test]
    fn gauss_valuation_examples() {
        let r = ring();
        // gauss_val(4/X^3) = 2
        let f = parse_dyadic_ratfunc(&r, "4/X^3").unwrap();
        assert_eq!(f.gauss_val_quarters().unwrap(), 8);
        // gauss_val(1 + 4/X) = 0 with residue 1
        let f = parse_dyadic_ratfunc(&r, "1 + 4/X").unwrap();
        assert_eq!(f.gauss_val_quarters().unwrap(), 0);
        assert_eq!(
            f.residue().unwrap(),
            crate::gf2x::parse_ratfunc(1, "1").unwrap()
        );
    }

    #[test]
    fn residue_with_cancellation() {
        let r = ring();
        // (X^2 + 2X + 4i)/X reduces to x^2/x = x
        let f = parse_dyadic_ratfunc(&r, "(X^2 + 2*X + 4*i)/X").unwrap();
        assert_eq!(
            f.residue().unwrap(),
            crate::gf2x::parse_ratfunc(1, "x").unwrap()
        );
    }

    #[test]
    fn residue_requires_unit() {
        let r = ring();
        let f = parse_dyadic_ratfunc(&r, "4/X^3").unwrap();
        assert!(matches!(f.residue(), Err(Error::ValueNotUnit(_))));
    }

    #[test]
    fn gauss_val_with_denominator_offset() {
        let r = ring();
        let f = parse_dyadic_ratfunc(&r, "1/2").unwrap();
        assert_eq!(f.gauss_val_quarters().unwrap(), -4);
        let f = parse_dyadic_ratfunc(&r, "(1 + 2/X)/(2 + 4/X)").unwrap();
        assert_eq!(f.gauss_val_quarters().unwrap(), -4);
    }

    #[test]
    fn element_parser() {
        let r = ring();
        let v = parse_dyadic_element(&r, "pi^2").unwrap();
        assert_eq!(v.valuation_quarters().unwrap(), Some(2));
        assert!(parse_dyadic_element(&r, "X").is_err());
        assert!(parse_dyadic_element(&r, "1/2").is_err());
        // 2*i + 2 = 2*(1 + i) has valuation 1 + 1/2
        let v = parse_dyadic_element(&r, "2*i + sqrt2^2").unwrap();
        assert_eq!(v.valuation_quarters().unwrap(), Some(6));
    }

    #[test]
    fn laurent_shape_detection() {
        let r = ring();
        assert!(parse_dyadic_ratfunc(&r, "1 + 4/X^3")
            .unwrap()
            .is_laurent_in_inv_x());
        assert!(!parse_dyadic_ratfunc(&r, "1/(X - 2)")
            .unwrap()
            .is_laurent_in_inv_x());
    }
}
