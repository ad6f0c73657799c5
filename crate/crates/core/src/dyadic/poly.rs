//! Dense polynomials in X over the dyadic coefficient ring.

use super::ring::{DyadicNumber, Prec, RingConfig};
use crate::error::{Error, Result};
use crate::gf2x::{Gf, Poly};
use std::fmt;

/// Coefficients in ascending degree order; trailing exact zeros are
/// trimmed, so `coeffs.last()` is never an exact zero (it may still be
/// zero to precision).
#[derive(Clone, PartialEq, Eq)]
pub struct DyadicPoly {
    ring: RingConfig,
    coeffs: Vec<DyadicNumber>,
}

impl DyadicPoly {
    pub fn new(ring: &RingConfig, coeffs: Vec<DyadicNumber>) -> DyadicPoly {
        let mut p = DyadicPoly {
            ring: ring.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero(ring: &RingConfig) -> DyadicPoly {
        DyadicPoly {
            ring: ring.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: DyadicNumber) -> DyadicPoly {
        let ring = c.ring().clone();
        DyadicPoly::new(&ring, vec![c])
    }

    pub fn one(ring: &RingConfig) -> DyadicPoly {
        DyadicPoly::constant(ring.one())
    }

    pub fn x(ring: &RingConfig) -> DyadicPoly {
        DyadicPoly::new(ring, vec![ring.exact_zero(), ring.one()])
    }

    /// c * X^k
    pub fn monomial(c: DyadicNumber, k: usize) -> DyadicPoly {
        let ring = c.ring().clone();
        let mut coeffs = vec![ring.exact_zero(); k];
        coeffs.push(c);
        DyadicPoly::new(&ring, coeffs)
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn coeffs(&self) -> &[DyadicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> DyadicNumber {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.ring.exact_zero())
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the highest retained coefficient (None for the exact
    /// zero polynomial). A zero-to-precision leading coefficient still
    /// counts: its valuation bound participates in the callers' checks.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &DyadicPoly) -> DyadicPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        DyadicPoly::new(&self.ring, coeffs)
    }

    pub fn neg(&self) -> DyadicPoly {
        DyadicPoly::new(&self.ring, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &DyadicPoly) -> DyadicPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DyadicPoly) -> DyadicPoly {
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return DyadicPoly::zero(&self.ring);
        }
        let mut coeffs = vec![self.ring.exact_zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        DyadicPoly::new(&self.ring, coeffs)
    }

    pub fn mul_scalar(&self, c: &DyadicNumber) -> DyadicPoly {
        DyadicPoly::new(&self.ring, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul_x_pow(&self, k: usize) -> DyadicPoly {
        if self.is_exactly_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ring.exact_zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        DyadicPoly::new(&self.ring, coeffs)
    }

    pub fn pow(&self, e: u64) -> DyadicPoly {
        let mut acc = DyadicPoly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative (characteristic 0: nothing vanishes).
    pub fn derivative(&self) -> DyadicPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&self.ring.integer(k as i64)))
            .collect();
        DyadicPoly::new(&self.ring, coeffs)
    }

    /// Multiplicity of X = 0: the number of leading exact-zero
    /// coefficients. A zero-to-precision constant term is ambiguous.
    pub fn order_at_zero(&self) -> Result<usize> {
        if self.is_exactly_zero() {
            return Err(Error::InvalidParameter(
                "order at zero of the zero polynomial".into(),
            ));
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if c.is_zero_to_prec() {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of X^{k} is zero to precision; the order at X = 0 \
                     is ambiguous"
                )));
            }
            return Ok(k);
        }
        unreachable!("trimmed polynomial has a non-exact-zero coefficient");
    }

    /// Drop an exact factor X^k.
    pub fn div_x_pow(&self, k: usize) -> DyadicPoly {
        assert!(self.coeffs.iter().take(k).all(|c| c.is_exact_zero()));
        DyadicPoly::new(&self.ring, self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// Minimum coefficient valuation in quarters, with certification.
    /// Pseudo-zero coefficients are ignored when their precision exceeds
    /// the running minimum, otherwise they make the minimum ambiguous.
    pub fn min_valuation(&self) -> Result<i64> {
        if self.is_exactly_zero() {
            return Err(Error::InvalidParameter(
                "gauss valuation of the zero polynomial".into(),
            ));
        }
        let mut best: Option<i64> = None;
        let mut floor: Option<i64> = None; // lowest pseudo-zero bound
        for c in &self.coeffs {
            match c.valuation_quarters() {
                Ok(Some(q)) => best = Some(best.map_or(q, |b| b.min(q))),
                Ok(None) => {}
                Err(_) => {
                    let bound = match c.prec() {
                        Prec::Mod(p) => p,
                        Prec::Exact => unreachable!(),
                    };
                    floor = Some(floor.map_or(bound, |f: i64| f.min(bound)));
                }
            }
        }
        match (best, floor) {
            (Some(b), Some(f)) if b < f => Ok(b),
            (Some(_), Some(f)) => Err(Error::InsufficientPrecision(format!(
                "a coefficient that is zero modulo pi^{f} could attain the minimum"
            ))),
            (Some(b), None) => Ok(b),
            (None, _) => Err(Error::InsufficientPrecision(
                "all coefficients are zero to precision".into(),
            )),
        }
    }

    /// Divide every coefficient by the canonical element of valuation k.
    pub fn shift_down(&self, k: i64) -> Result<DyadicPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.shift_down(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(DyadicPoly::new(&self.ring, coeffs))
    }

    /// Coefficient-wise residue map to polynomials over F_{2^d}.
    pub fn residue(&self) -> Result<Poly> {
        let mut out = Poly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            out.add_term(k as u64, c.residue()?);
        }
        Ok(out)
    }

    /// Lift of a residue polynomial with Teichmueller coefficients.
    pub fn teich_lift(ring: &RingConfig, p: &Poly) -> DyadicPoly {
        let deg = match p.degree() {
            None => return DyadicPoly::zero(ring),
            Some(d) => d as usize,
        };
        let mut coeffs = vec![ring.exact_zero(); deg + 1];
        for (k, c) in p.terms() {
            coeffs[k as usize] = ring.teichmuller(c);
        }
        DyadicPoly::new(ring, coeffs)
    }

    /// True when the polynomial reduces to the constant 1.
    pub fn residue_is_one(&self) -> Result<bool> {
        Ok(self.residue()? == Poly::constant(Gf::one(self.ring.residue_degree())))
    }
}

impl fmt::Display for DyadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exactly_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DyadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicPoly({self})")
    }
}
