//! Sparse polynomials over F_{2^d}, keyed by exponent.
//!
//! The map stores no zero coefficients, so equality is representation
//! equality and the degree is the largest stored exponent.

use super::field::Gf;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: BTreeMap<u64, Gf>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(d: u32) -> Poly {
        Poly::constant(Gf::one(d))
    }

    pub fn constant(c: Gf) -> Poly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Poly { coeffs }
    }

    /// c * x^k
    pub fn monomial(c: Gf, k: u64) -> Poly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Poly { coeffs }
    }

    pub fn x(d: u32) -> Poly {
        Poly::monomial(Gf::one(d), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Gf)>) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as None.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: u64) -> Gf {
        self.coeffs.get(&k).copied().unwrap_or(Gf::zero(1))
    }

    pub fn leading_coeff(&self) -> Gf {
        self.degree().map(|d| self.coeff(d)).unwrap_or(Gf::zero(1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Gf)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn add_term(&mut self, k: u64, c: Gf) {
        if c.is_zero() {
            return;
        }
        let cur = self.coeffs.get(&k).copied();
        match cur {
            None => {
                self.coeffs.insert(k, c);
            }
            Some(old) => {
                let s = old.add(c);
                if s.is_zero() {
                    self.coeffs.remove(&k);
                } else {
                    self.coeffs.insert(k, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, a.mul(b));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: Gf) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|(&k, &a)| (k, a.mul(c))).collect(),
        }
    }

    pub fn shift(&self, k: u64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn square(&self) -> Poly {
        // char 2: squaring is coefficient-wise
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (2 * k, c.square()))
                .collect(),
        }
    }

    /// Square root by halving exponents and taking Frobenius roots of the
    /// coefficients. Fails when an odd exponent carries a nonzero
    /// coefficient.
    pub fn sqrt(&self) -> Result<Poly> {
        let mut out = BTreeMap::new();
        for (k, c) in self.terms() {
            if k % 2 != 0 {
                return Err(Error::NotASquare(format!(
                    "odd exponent {k} has coefficient {c}"
                )));
            }
            out.insert(k / 2, c.sqrt());
        }
        Ok(Poly { coeffs: out })
    }

    /// True when only even exponents appear; over F_{2^d} every such
    /// polynomial is a square.
    pub fn is_square(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    /// Formal derivative; even exponents vanish in characteristic 2.
    pub fn derivative(&self) -> Poly {
        let mut out = BTreeMap::new();
        for (k, c) in self.terms() {
            if k % 2 == 1 {
                out.insert(k - 1, c);
            }
        }
        Poly { coeffs: out }
    }

    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut quot = Poly::zero();
        let mut rem = self.clone();
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.leading_coeff().inverse().unwrap();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = rem.coeff(dr).mul(lead_inv);
            let k = dr - dd;
            quot.add_term(k, c);
            let sub = divisor.mul(&Poly::monomial(c, k));
            rem = rem.add(&sub); // char 2: add = subtract
        }
        (quot, rem)
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    pub fn into_monic(self) -> Poly {
        if self.is_zero() {
            return self;
        }
        let lead = self.leading_coeff();
        if lead.is_one() {
            self
        } else {
            self.mul_scalar(lead.inverse().unwrap())
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    /// Multiplicity of x = 0 as a root.
    pub fn order_at_zero(&self) -> Option<u64> {
        self.coeffs.keys().next().copied()
    }

    /// The largest degree appearing among coefficients' ground fields.
    pub fn field_degree(&self) -> u32 {
        self.coeffs.values().map(|c| c.degree()).max().unwrap_or(1)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = format!("{c}");
            let needs_parens = coeff.contains('+');
            match (k, c.is_one()) {
                (0, _) => {
                    if needs_parens {
                        write!(f, "({coeff})")?;
                    } else {
                        write!(f, "{coeff}")?;
                    }
                }
                (_, true) => {
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
                (_, false) => {
                    if needs_parens {
                        write!(f, "({coeff})*")?;
                    } else {
                        write!(f, "{coeff}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2x::field::parse_gf;

    fn p(terms: &[(u64, u16)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(k, b)| (k, Gf::new(1, b).unwrap())))
    }

    #[test]
    fn sqrt_of_even_poly() {
        // x^4 + x^2 -> x^2 + x
        let q = p(&[(4, 1), (2, 1)]).sqrt().unwrap();
        assert_eq!(q, p(&[(2, 1), (1, 1)]));
    }

    #[test]
    fn sqrt_rejects_odd_exponent() {
        assert!(matches!(p(&[(3, 1)]).sqrt(), Err(Error::NotASquare(_))));
    }

    #[test]
    fn sqrt_uses_frobenius_roots() {
        // over F_4 with generator t: t^2 x^2 + 1 -> t x + 1
        let t = Gf::generator(2).unwrap();
        let input = Poly::from_terms([(2, t.square()), (0, Gf::one(2))]);
        let expect = Poly::from_terms([(1, t), (0, Gf::one(2))]);
        assert_eq!(input.sqrt().unwrap(), expect);
    }

    #[test]
    fn divrem_and_gcd() {
        let a = p(&[(3, 1), (0, 1)]); // x^3 + 1
        let b = p(&[(1, 1), (0, 1)]); // x + 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q.mul(&b), a);
        assert_eq!(Poly::gcd(&a, &b), b);
    }

    #[test]
    fn derivative_kills_even_exponents() {
        let a = p(&[(4, 1), (3, 1), (1, 1)]);
        assert_eq!(a.derivative(), p(&[(2, 1), (0, 1)]));
    }

    #[test]
    fn display_matches_grammar() {
        let t = parse_gf(2, "t+1").unwrap();
        let q = Poly::from_terms([(0, Gf::one(2)), (2, t)]);
        assert_eq!(format!("{q}"), "1 + (t + 1)*x^2");
        assert_eq!(format!("{}", p(&[(0, 1), (2, 1)])), "1 + x^2");
    }
}
