//! Ghost-component derivation of the length-2 Witt structure constants.
//!
//! The ghost map sends (x1, x2) to (x1, x1^2 + 2*x2) over the integers;
//! it is additive componentwise. Solving the ghost equations with exact
//! rational arithmetic recovers the sum and negation polynomials over Z,
//! which reduce mod 2 to the constants compiled into `gf2x::witt`. This
//! runs as an independent check so those constants are never taken on
//! faith.

use crate::error::{Error, Result};
use crate::gf2x::{Gf, RationalFunction, WittVector2};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Sparse multivariate polynomial over Z in the four variables
/// x1, x2, y1, y2 (exponent vector in that order).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZPoly {
    terms: BTreeMap<[u8; 4], BigInt>,
}

pub const X1: usize = 0;
pub const X2: usize = 1;
pub const Y1: usize = 2;
pub const Y2: usize = 3;

impl ZPoly {
    pub fn zero() -> ZPoly {
        ZPoly::default()
    }

    pub fn var(i: usize) -> ZPoly {
        let mut e = [0u8; 4];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::from(1));
        ZPoly { terms }
    }

    pub fn constant(n: i64) -> ZPoly {
        let mut terms = BTreeMap::new();
        if n != 0 {
            terms.insert([0; 4], BigInt::from(n));
        }
        ZPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: [u8; 4], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        let mut out = ZPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0u8; 4];
                for k in 0..4 {
                    e[k] = ea[k] + eb[k];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::zero().sub(self)
    }

    /// Exact division by 2; fails if any coefficient is odd.
    pub fn halve(&self) -> Result<ZPoly> {
        let mut out = ZPoly::zero();
        for (e, c) in &self.terms {
            if (c % 2) != BigInt::zero() {
                return Err(Error::MismatchError(format!(
                    "ghost equation leaves an odd coefficient at {e:?}"
                )));
            }
            out.add_term(*e, c / 2);
        }
        Ok(out)
    }

    /// Reduce mod 2: the surviving exponent vectors.
    pub fn mod2(&self) -> Vec<[u8; 4]> {
        self.terms
            .iter()
            .filter(|(_, c)| (*c % 2) != BigInt::zero())
            .map(|(e, _)| *e)
            .collect()
    }

    /// Evaluate the mod-2 image on a Witt pair of rational functions,
    /// substituting (x1, x2, y1, y2) = (u.f1, u.f2, v.f1, v.f2).
    pub fn eval_mod2(&self, u: &WittVector2, v: &WittVector2) -> RationalFunction {
        let vars = [&u.f1, &u.f2, &v.f1, &v.f2];
        let mut acc = RationalFunction::zero();
        for e in self.mod2() {
            let mut term = RationalFunction::one(1);
            for (k, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(vars[k]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["x1", "x2", "y1", "y2"];
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => write!(f, "*{}", names[k])?,
                    _ => write!(f, "*{}^{}", names[k], exp)?,
                }
            }
        }
        Ok(())
    }
}

/// The two ghost components of a symbolic pair (a1, a2).
fn ghost(a1: &ZPoly, a2: &ZPoly) -> (ZPoly, ZPoly) {
    (a1.clone(), a1.mul(a1).add(&a2.mul(&ZPoly::constant(2))))
}

/// Structure constants derived over Z, before reduction mod 2.
pub struct DerivedConstants {
    /// Second sum component s2 with (x1, x2) + (y1, y2) = (x1 + y1, s2).
    pub sum2: ZPoly,
    /// Second negation component n2 with -(x1, x2) = (-x1, n2).
    pub neg2: ZPoly,
    /// Second component of Frobenius-minus-identity applied to (x1, x2).
    pub coboundary2: ZPoly,
}

/// Derive the sum, negation, and coboundary polynomials from ghost
/// additivity with exact integer arithmetic.
pub fn derive_constants() -> Result<DerivedConstants> {
    let x1 = ZPoly::var(X1);
    let x2 = ZPoly::var(X2);
    let y1 = ZPoly::var(Y1);
    let y2 = ZPoly::var(Y2);

    // Sum: first component is x1 + y1. The second ghost equation reads
    //   (x1 + y1)^2 + 2*s2 = (x1^2 + 2*x2) + (y1^2 + 2*y2),
    // so 2*s2 = 2*x2 + 2*y2 - 2*x1*y1.
    let s1 = x1.add(&y1);
    let (_, g2x) = ghost(&x1, &x2);
    let (_, g2y) = ghost(&y1, &y2);
    let sum2 = g2x.add(&g2y).sub(&s1.mul(&s1)).halve()?;

    // Negation: -(x1, x2) = (-x1, n2) with x1^2 + 2*n2 = -(x1^2 + 2*x2).
    let m1 = x1.neg();
    let neg2 = g2x.neg().sub(&m1.mul(&m1)).halve()?;

    // Coboundary: F(x) - x with F componentwise squaring. The first
    // component is x1^2 - x1; the second comes from adding F(x) and the
    // negation of x with the sum polynomial just derived:
    //   c2 = x2^2 + n2(x1, x2) + (x1^2) * (-x1)  [substituted into s2].
    // Substituting directly keeps this independent of hand algebra.
    let fx1 = x1.mul(&x1);
    let fx2 = x2.mul(&x2);
    let neg_x1 = x1.neg();
    let neg_x2 = substitute(
        &neg2,
        &[x1.clone(), x2.clone(), ZPoly::zero(), ZPoly::zero()],
    );
    let cob2 = substitute(&sum2, &[fx1, fx2, neg_x1, neg_x2]);

    Ok(DerivedConstants {
        sum2,
        neg2,
        coboundary2: cob2,
    })
}

/// Substitute polynomials for the four variables.
fn substitute(p: &ZPoly, vals: &[ZPoly; 4]) -> ZPoly {
    let mut acc = ZPoly::zero();
    for (e, c) in &p.terms {
        let mut term = ZPoly::zero();
        term.add_term([0; 4], c.clone());
        for (k, &exp) in e.iter().enumerate() {
            for _ in 0..exp {
                term = term.mul(&vals[k]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Compare the ghost-derived constants against the arithmetic compiled
/// into `gf2x::witt`, both as mod-2 polynomial identities and exhaustively
/// on all constant vectors over F_2. Returns a human-readable report.
pub fn ghost_witt_oracle() -> Result<Vec<String>> {
    let c = derive_constants()?;
    let mut report = Vec::new();

    // Expected mod-2 supports.
    let want_sum2: Vec<[u8; 4]> = vec![
        [0, 1, 0, 0], // x2
        [0, 0, 0, 1], // y2
        [1, 0, 1, 0], // x1*y1
    ];
    let mut got = c.sum2.mod2();
    got.sort();
    let mut want = want_sum2.clone();
    want.sort();
    if got != want {
        return Err(Error::MismatchError(format!(
            "sum polynomial mod 2 is {got:?}, expected x2 + y2 + x1*y1"
        )));
    }
    report.push(format!("sum over Z: {} ; mod 2: x2 + y2 + x1*y1", c.sum2));

    let mut got = c.neg2.mod2();
    got.sort();
    let mut want: Vec<[u8; 4]> = vec![[0, 1, 0, 0], [2, 0, 0, 0]];
    want.sort();
    if got != want {
        return Err(Error::MismatchError(format!(
            "negation polynomial mod 2 is {got:?}, expected x2 + x1^2"
        )));
    }
    report.push(format!("negation over Z: {} ; mod 2: x2 + x1^2", c.neg2));

    let mut got = c.coboundary2.mod2();
    got.sort();
    let mut want: Vec<[u8; 4]> = vec![[0, 2, 0, 0], [0, 1, 0, 0], [2, 0, 0, 0], [3, 0, 0, 0]];
    want.sort();
    if got != want {
        return Err(Error::MismatchError(format!(
            "coboundary polynomial mod 2 is {got:?}, expected x2^2 + x2 + x1^2 + x1^3"
        )));
    }
    report.push(format!(
        "coboundary over Z: {} ; mod 2: x2^2 + x2 + x1^2 + x1^3",
        c.coboundary2
    ));

    // Exhaustive agreement with gf2x arithmetic on constant vectors.
    let consts: Vec<WittVector2> = {
        let mut v = Vec::new();
        for a in Gf::all(1) {
            for b in Gf::all(1) {
                v.push(WittVector2::new(
                    RationalFunction::constant(a),
                    RationalFunction::constant(b),
                ));
            }
        }
        v
    };
    for u in &consts {
        for v in &consts {
            let direct = u.add(v);
            let by_ghost = WittVector2::new(u.f1.add(&v.f1), c.sum2.eval_mod2(u, v));
            if direct != by_ghost {
                return Err(Error::MismatchError(format!(
                    "witt_add({u}, {v}) = {direct} but ghost gives {by_ghost}"
                )));
            }
        }
        let zero = WittVector2::zero();
        let direct = u.neg();
        let by_ghost = WittVector2::new(u.f1.clone(), c.neg2.eval_mod2(u, &zero));
        if direct != by_ghost {
            return Err(Error::MismatchError(format!(
                "witt negation of {u} disagrees with ghost"
            )));
        }
        let direct = u.coboundary();
        let by_ghost =
            WittVector2::new(u.f1.square().add(&u.f1), c.coboundary2.eval_mod2(u, &zero));
        if direct != by_ghost {
            return Err(Error::MismatchError(format!(
                "witt coboundary of {u} disagrees with ghost"
            )));
        }
    }
    report.push(format!(
        "exhaustive agreement with compiled arithmetic on {} x {} constant vectors",
        consts.len(),
        consts.len()
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2x::parse_ratfunc;

    #[test]
    fn derives_expected_constants() {
        let c = derive_constants().unwrap();
        // over Z: x2 + y2 - x1*y1
        let want_sum = ZPoly::var(X2)
            .add(&ZPoly::var(Y2))
            .sub(&ZPoly::var(X1).mul(&ZPoly::var(Y1)));
        assert_eq!(c.sum2, want_sum);
        // over Z: -x2 - x1^2
        let want_neg = ZPoly::var(X2)
            .neg()
            .sub(&ZPoly::var(X1).mul(&ZPoly::var(X1)));
        assert_eq!(c.neg2, want_neg);
    }

    #[test]
    fn oracle_passes() {
        let report = ghost_witt_oracle().unwrap();
        assert_eq!(report.len(), 4);
    }

    #[test]
    fn ghost_checks_example_sums() {
        // (f, 0) + (f, 0) = (0, f^2)
        let f = parse_ratfunc(1, "1/x").unwrap();
        let u = WittVector2::new(f.clone(), RationalFunction::zero());
        let s = u.add(&u);
        assert!(s.f1.is_zero());
        assert_eq!(s.f2, f.square());

        // (1/x, 0) + (1/x, 1/x^3) = (0, 1/x^2 + 1/x^3)
        let v = WittVector2::new(f.clone(), parse_ratfunc(1, "1/x^3").unwrap());
        let s = u.add(&v);
        assert!(s.f1.is_zero());
        assert_eq!(s.f2, parse_ratfunc(1, "1/x^2 + 1/x^3").unwrap());

        // and the ghost polynomial agrees on both
        let c = derive_constants().unwrap();
        assert_eq!(c.sum2.eval_mod2(&u, &u), u.add(&u).f2);
        assert_eq!(c.sum2.eval_mod2(&u, &v), s.f2);
    }
}
