//! The 2-adic coefficient ring R' = W(F_{2^d}) adjoined zeta8, at fixed
//! precision.
//!
//! Adjoining a primitive eighth root of unity is totally ramified of
//! degree 4 over W(F_{2^d}): pi = zeta8 - 1 satisfies the Eisenstein
//! relation pi^4 + 4*pi^3 + 6*pi^2 + 4*pi + 2 = 0, so nu(pi) = 1/4 with
//! the normalization nu(2) = 1. Elements are stored as four digits in the
//! basis {1, pi, pi^2, pi^3} over W(F_{2^d}), realized as Z_2 adjoined a
//! root u of f, where f is
//! the 0/1 lift of the residue-field modulus. Valuations live in the
//! value group (1/4)Z and are handled as integer "quarters" throughout.
//!
//! Precision model: a value is either exact (digits are honest integers)
//! or known modulo pi^q; the digit at pi^i is then canonically reduced
//! modulo 2^ceil((q - i)/4). Valuations of the four digit terms fall in
//! distinct classes mod 1, so the valuation of a value with any nonzero
//! stored digit is always certified. A truncated value whose digits all
//! vanish is "zero to precision": asking it a zero-vs-nonzero question
//! raises InsufficientPrecision rather than guessing.

use crate::error::{Error, Result};
use crate::gf2x::field::{check_degree, Gf};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Same moduli as the residue field, lifted with 0/1 coefficients.
fn modulus_bits(d: u32) -> u16 {
    const MODULI: [u16; 13] = [
        0,
        0b10,
        0b111,
        0b1011,
        0b10011,
        0b100101,
        0b1000011,
        0b10000011,
        0b100011101,
        0b1000010001,
        0b10000001001,
        0b100000000101,
        0b1000001010011,
    ];
    MODULI[d as usize]
}

/// An element of W(F_{2^d}) as a polynomial in u of degree < d.
pub type WElem = Vec<BigInt>;

#[derive(Debug)]
pub struct RingInner {
    pub d: u32,
    /// Absolute precision in pi-units for ring constants and any value
    /// that cannot be kept exact (Teichmueller lifts, unit inverses).
    pub precision: i64,
}

/// Shared, read-only ring context.
#[derive(Clone, Debug)]
pub struct RingConfig {
    inner: Arc<RingInner>,
}

impl PartialEq for RingConfig {
    fn eq(&self, other: &Self) -> bool {
        self.inner.d == other.inner.d && self.inner.precision == other.inner.precision
    }
}
impl Eq for RingConfig {}

/// Absolute precision marker, in pi-units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prec {
    Exact,
    Mod(i64),
}

impl Prec {
    pub fn min(self, other: Prec) -> Prec {
        match (self, other) {
            (Prec::Exact, p) | (p, Prec::Exact) => p,
            (Prec::Mod(a), Prec::Mod(b)) => Prec::Mod(a.min(b)),
        }
    }

    pub fn shift(self, k: i64) -> Prec {
        match self {
            Prec::Exact => Prec::Exact,
            Prec::Mod(q) => Prec::Mod(q - k),
        }
    }
}

/// An element of R' (integral: all digit valuations are >= 0).
#[derive(Clone)]
pub struct DyadicNumber {
    ring: RingConfig,
    digits: [WElem; 4],
    prec: Prec,
}

pub fn make_ring(d: u32, precision: i64) -> Result<RingConfig> {
    check_degree(d)?;
    if precision < 8 {
        return Err(Error::InvalidParameter(format!(
            "precision {precision} is below the minimum of 8 pi-units"
        )));
    }
    Ok(RingConfig {
        inner: Arc::new(RingInner { d, precision }),
    })
}

impl RingConfig {
    pub fn residue_degree(&self) -> u32 {
        self.inner.d
    }

    pub fn precision(&self) -> i64 {
        self.inner.precision
    }

    fn w_zero(&self) -> WElem {
        vec![BigInt::zero(); self.inner.d as usize]
    }

    fn w_from_int(&self, n: i64) -> WElem {
        let mut w = self.w_zero();
        w[0] = BigInt::from(n);
        w
    }

    // ---- W(F_{2^d}) digit arithmetic ----

    fn w_add(&self, a: &WElem, b: &WElem) -> WElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn w_neg(&self, a: &WElem) -> WElem {
        a.iter().map(|x| -x).collect()
    }

    fn w_mul(&self, a: &WElem, b: &WElem) -> WElem {
        let d = self.inner.d as usize;
        let mut wide = vec![BigInt::zero(); 2 * d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                wide[i + j] += x * y;
            }
        }
        // reduce by the monic 0/1 modulus: u^d = -(lower bits)
        let m = modulus_bits(self.inner.d);
        for e in (d..2 * d).rev() {
            let c = std::mem::replace(&mut wide[e], BigInt::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                if m >> j & 1 == 1 {
                    wide[e - d + j] -= &c;
                }
            }
        }
        wide.truncate(d);
        wide
    }

    fn w_scale(&self, a: &WElem, n: &BigInt) -> WElem {
        a.iter().map(|x| x * n).collect()
    }

    /// 2-adic valuation of a W element: min over u-coefficients.
    /// None for the zero element.
    fn w_val2(&self, a: &WElem) -> Option<u64> {
        a.iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.trailing_zeros().expect("nonzero"))
            .min()
    }

    fn w_is_zero(&self, a: &WElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// Canonical representative mod 2^k (non-negative coefficients).
    fn w_mod_pow2(&self, a: &WElem, k: i64) -> WElem {
        if k <= 0 {
            return self.w_zero();
        }
        let m = BigInt::one() << (k as u64);
        a.iter().map(|c| c.mod_floor(&m)).collect()
    }

    // ---- element constructors ----

    pub fn exact_zero(&self) -> DyadicNumber {
        DyadicNumber {
            ring: self.clone(),
            digits: [self.w_zero(), self.w_zero(), self.w_zero(), self.w_zero()],
            prec: Prec::Exact,
        }
    }

    pub fn from_digits(&self, digits: [WElem; 4], prec: Prec) -> DyadicNumber {
        let mut n = DyadicNumber {
            ring: self.clone(),
            digits,
            prec,
        };
        n.canonicalize();
        n
    }

    pub fn integer(&self, n: i64) -> DyadicNumber {
        self.from_digits(
            [
                self.w_from_int(n),
                self.w_zero(),
                self.w_zero(),
                self.w_zero(),
            ],
            Prec::Exact,
        )
    }

    pub fn one(&self) -> DyadicNumber {
        self.integer(1)
    }

    pub fn two(&self) -> DyadicNumber {
        self.integer(2)
    }

    /// lambda = zeta_2 - 1 = -2, of valuation 1/(p-1) = 1.
    pub fn lambda(&self) -> DyadicNumber {
        self.integer(-2)
    }

    /// The uniformizer pi = zeta8 - 1.
    pub fn pi(&self) -> DyadicNumber {
        self.from_digits(
            [
                self.w_zero(),
                self.w_from_int(1),
                self.w_zero(),
                self.w_zero(),
            ],
            Prec::Exact,
        )
    }

    /// zeta8 = 1 + pi.
    pub fn zeta8(&self) -> DyadicNumber {
        self.from_digits(
            [
                self.w_from_int(1),
                self.w_from_int(1),
                self.w_zero(),
                self.w_zero(),
            ],
            Prec::Exact,
        )
    }

    /// i = zeta8^2 = 1 + 2*pi + pi^2.
    pub fn i_unit(&self) -> DyadicNumber {
        self.from_digits(
            [
                self.w_from_int(1),
                self.w_from_int(2),
                self.w_from_int(1),
                self.w_zero(),
            ],
            Prec::Exact,
        )
    }

    /// sqrt2 = zeta8 + zeta8^(-1) = -2*pi - 3*pi^2 - pi^3; squares to 2.
    pub fn sqrt2(&self) -> DyadicNumber {
        self.from_digits(
            [
                self.w_zero(),
                self.w_from_int(-2),
                self.w_from_int(-3),
                self.w_from_int(-1),
            ],
            Prec::Exact,
        )
    }

    /// The unit with pi^4 = -2 * unit: 1 + 2*pi + 3*pi^2 + 2*pi^3.
    fn eisenstein_unit(&self) -> DyadicNumber {
        self.from_digits(
            [
                self.w_from_int(1),
                self.w_from_int(2),
                self.w_from_int(3),
                self.w_from_int(2),
            ],
            Prec::Exact,
        )
    }

    /// Canonical element of valuation k quarters: 2^(k div 4) * pi^(k mod 4).
    pub fn normalizer(&self, k: i64) -> DyadicNumber {
        assert!(k >= 0, "normalizer of negative valuation");
        let (a, b) = (k.div_euclid(4), k.rem_euclid(4));
        let mut digits = [self.w_zero(), self.w_zero(), self.w_zero(), self.w_zero()];
        digits[b as usize] = {
            let mut w = self.w_zero();
            w[0] = BigInt::one() << (a as u64);
            w
        };
        self.from_digits(digits, Prec::Exact)
    }

    /// Multiplicative (Teichmueller) lift of a residue-field element,
    /// the fixed point of x -> x^(2^d) above it. Exact for F_2.
    pub fn teichmuller(&self, a: Gf) -> DyadicNumber {
        if a.is_zero() {
            return self.exact_zero();
        }
        if a.is_one() {
            return self.one();
        }
        assert_eq!(
            a.degree(),
            self.inner.d,
            "residue element from the wrong field"
        );
        // digit-0 lift with the same bits, then iterate Frobenius powers;
        // each pass gains at least one 2-adic digit of agreement.
        let w_bits = (self.inner.precision + 3).div_euclid(4) + 1;
        let mut x: WElem = (0..self.inner.d)
            .map(|k| BigInt::from((a.bits() >> k & 1) as i64))
            .collect();
        for _ in 0..(w_bits + 1) {
            let mut y = x.clone();
            for _ in 0..self.inner.d {
                y = self.w_mod_pow2(&self.w_mul(&y, &y), w_bits);
            }
            if y == x {
                break;
            }
            x = y;
        }
        self.from_digits(
            [x, self.w_zero(), self.w_zero(), self.w_zero()],
            Prec::Mod(self.inner.precision),
        )
    }
}

impl DyadicNumber {
    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn digits(&self) -> &[WElem; 4] {
        &self.digits
    }

    /// Reduce digits to their canonical storage precision.
    fn canonicalize(&mut self) {
        if let Prec::Mod(q) = self.prec {
            assert!(q > 0, "value with no retained precision (q = {q})");
            for i in 0..4 {
                let bits = (q - i as i64 + 3).div_euclid(4);
                self.digits[i] = self.ring.w_mod_pow2(&self.digits[i], bits);
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Prec::Exact
    }

    /// Mathematically zero (only exact values can claim this).
    pub fn is_exact_zero(&self) -> bool {
        self.prec == Prec::Exact && self.digits.iter().all(|d| self.ring.w_is_zero(d))
    }

    /// All stored digits vanish; for truncated values this only means
    /// the valuation is at least the precision.
    pub fn is_zero_to_prec(&self) -> bool {
        self.digits.iter().all(|d| self.ring.w_is_zero(d))
    }

    /// Valuation in quarters. Err(InsufficientPrecision) when the value
    /// is zero to precision but not exactly zero; None when exactly zero.
    pub fn valuation_quarters(&self) -> Result<Option<i64>> {
        if self.is_exact_zero() {
            return Ok(None);
        }
        let mut best: Option<i64> = None;
        for (i, digit) in self.digits.iter().enumerate() {
            if let Some(v2) = self.ring.w_val2(digit) {
                let q = 4 * v2 as i64 + i as i64;
                best = Some(best.map_or(q, |b| b.min(q)));
            }
        }
        match best {
            Some(q) => Ok(Some(q)),
            None => Err(Error::InsufficientPrecision(format!(
                "value is zero modulo pi^{}",
                match self.prec {
                    Prec::Mod(p) => p.to_string(),
                    Prec::Exact => unreachable!(),
                }
            ))),
        }
    }

    /// Lower bound on the valuation that never errs (precision for
    /// pseudo-zeros, i64::MAX for exact zero).
    fn valuation_lb(&self) -> i64 {
        match self.valuation_quarters() {
            Ok(Some(q)) => q,
            Ok(None) => i64::MAX,
            Err(_) => match self.prec {
                Prec::Mod(p) => p,
                Prec::Exact => i64::MAX,
            },
        }
    }

    pub fn add(&self, other: &DyadicNumber) -> DyadicNumber {
        let digits = [
            self.ring.w_add(&self.digits[0], &other.digits[0]),
            self.ring.w_add(&self.digits[1], &other.digits[1]),
            self.ring.w_add(&self.digits[2], &other.digits[2]),
            self.ring.w_add(&self.digits[3], &other.digits[3]),
        ];
        self.ring.from_digits(digits, self.prec.min(other.prec))
    }

    pub fn neg(&self) -> DyadicNumber {
        let digits = [
            self.ring.w_neg(&self.digits[0]),
            self.ring.w_neg(&self.digits[1]),
            self.ring.w_neg(&self.digits[2]),
            self.ring.w_neg(&self.digits[3]),
        ];
        self.ring.from_digits(digits, self.prec)
    }

    pub fn sub(&self, other: &DyadicNumber) -> DyadicNumber {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DyadicNumber) -> DyadicNumber {
        if self.is_exact_zero() || other.is_exact_zero() {
            return self.ring.exact_zero();
        }
        let ring = &self.ring;
        // multiply in the pi-basis, then fold pi^(4+k) down with
        // pi^4 = -2 - 4*pi - 6*pi^2 - 4*pi^3.
        let mut wide: Vec<WElem> = vec![ring.w_zero(); 7];
        for i in 0..4 {
            if ring.w_is_zero(&self.digits[i]) {
                continue;
            }
            for j in 0..4 {
                if ring.w_is_zero(&other.digits[j]) {
                    continue;
                }
                let prod = ring.w_mul(&self.digits[i], &other.digits[j]);
                wide[i + j] = ring.w_add(&wide[i + j], &prod);
            }
        }
        const PI4: [i64; 4] = [-2, -4, -6, -4];
        for e in (4..7).rev() {
            let c = std::mem::replace(&mut wide[e], ring.w_zero());
            if ring.w_is_zero(&c) {
                continue;
            }
            for (j, &coef) in PI4.iter().enumerate() {
                let term = ring.w_scale(&c, &BigInt::from(coef));
                wide[e - 4 + j] = ring.w_add(&wide[e - 4 + j], &term);
            }
        }
        let digits = [
            wide[0].clone(),
            wide[1].clone(),
            wide[2].clone(),
            wide[3].clone(),
        ];
        let prec = match (self.prec, other.prec) {
            (Prec::Exact, Prec::Exact) => Prec::Exact,
            (pa, pb) => {
                let va = self.valuation_lb();
                let vb = other.valuation_lb();
                let mut q = i64::MAX;
                if let Prec::Mod(b) = pb {
                    q = q.min(va.saturating_add(b));
                }
                if let Prec::Mod(a) = pa {
                    q = q.min(vb.saturating_add(a));
                }
                if let (Prec::Mod(a), Prec::Mod(b)) = (pa, pb) {
                    q = q.min(a.saturating_add(b));
                }
                Prec::Mod(q)
            }
        };
        self.ring.from_digits(digits, prec)
    }

    pub fn pow(&self, e: u64) -> DyadicNumber {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Truncate an exact value to the ring's working precision (no-op on
    /// already-truncated values).
    pub fn truncate_to_ring(&self) -> DyadicNumber {
        let q = match self.prec {
            Prec::Exact => self.ring.inner.precision,
            Prec::Mod(q) => q,
        };
        self.ring.from_digits(self.digits.clone(), Prec::Mod(q))
    }

    /// Multiplicative inverse of a unit (valuation 0), computed by
    /// Newton iteration from the residue inverse. Always truncated.
    pub fn invert_unit(&self) -> Result<DyadicNumber> {
        let v = self.valuation_quarters()?;
        if v != Some(0) {
            let shown = v.map(Quarters);
            return Err(Error::ValueNotUnit(format!("{shown:?}")));
        }
        let target = match self.prec {
            Prec::Exact => self.ring.inner.precision,
            Prec::Mod(q) => q,
        };
        let r0 = self.residue()?;
        let mut x = self.ring.teichmuller(r0.inverse()?).truncate_to_ring();
        // x = 1/self + O(pi); each Newton step squares the error.
        let two = self.ring.two();
        let mut gained = 1i64;
        while gained < target {
            x = x.mul(&two.sub(&self.mul(&x)));
            x = self.ring.from_digits(x.digits.clone(), Prec::Mod(target));
            gained *= 2;
        }
        Ok(x)
    }

    /// Residue in F_{2^d}: the image modulo pi (digit 0 mod 2).
    pub fn residue(&self) -> Result<Gf> {
        if self.is_exact_zero() {
            return Ok(Gf::zero(self.ring.inner.d));
        }
        if let Prec::Mod(q) = self.prec {
            if q < 1 {
                return Err(Error::InsufficientPrecision(
                    "no residue information left".into(),
                ));
            }
        }
        let mut bits: u16 = 0;
        for (k, c) in self.digits[0].iter().enumerate() {
            if c.is_odd() {
                bits |= 1 << k;
            }
        }
        Gf::new(self.ring.inner.d, bits)
    }

    /// Divide exactly by 2 (every digit must be even).
    fn halve(&self) -> Result<DyadicNumber> {
        let mut digits = self.digits.clone();
        for d in digits.iter_mut() {
            for c in d.iter_mut() {
                if c.is_odd() {
                    return Err(Error::InsufficientPrecision(format!(
                        "attempted inexact division by 2 of {self}"
                    )));
                }
                *c /= 2;
            }
        }
        Ok(self.ring.from_digits(digits, self.prec.shift(4)))
    }

    /// Divide by pi (requires valuation >= 1/4): x/pi = -(x*pi^3/u)/2
    /// with pi^4 = -2u.
    fn div_pi(&self) -> Result<DyadicNumber> {
        let pi3 = self.ring.normalizer(3);
        let u_inv = self.ring.eisenstein_unit().invert_unit()?;
        let z = self.mul(&pi3).mul(&u_inv).neg();
        let out = z.halve()?;
        Ok(self
            .ring
            .from_digits(out.digits.clone(), self.prec.shift(1).min(out.prec)))
    }

    /// Divide by the canonical element of valuation k quarters,
    /// 2^(k div 4) * pi^(k mod 4). Requires valuation >= k.
    pub fn shift_down(&self, k: i64) -> Result<DyadicNumber> {
        assert!(k >= 0);
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        if let Prec::Mod(q) = self.prec {
            if q - k < 1 {
                return Err(Error::InsufficientPrecision(format!(
                    "shifting down by {} leaves no precision (have pi^{q})",
                    Quarters(k)
                )));
            }
        }
        let mut x = self.clone();
        for _ in 0..k.rem_euclid(4) {
            x = x.div_pi()?;
        }
        for _ in 0..k.div_euclid(4) {
            x = x.halve()?;
        }
        Ok(x)
    }

    /// Render digits deterministically for certificates.
    pub fn digit_strings(&self) -> Vec<Vec<String>> {
        self.digits
            .iter()
            .map(|d| d.iter().map(|c| c.to_string()).collect())
            .collect()
    }
}

/// Pretty quarter-valuations.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Quarters(pub i64);

impl fmt::Display for Quarters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.0;
        if q % 4 == 0 {
            write!(f, "{}", q / 4)
        } else if q % 2 == 0 {
            write!(f, "{}/2", q / 2)
        } else {
            write!(f, "{q}/4")
        }
    }
}

impl fmt::Debug for Quarters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Equality compares digits at the common precision. Two truncated
/// values are equal when they are indistinguishable at that precision.
impl PartialEq for DyadicNumber {
    fn eq(&self, other: &Self) -> bool {
        let common = self.prec.min(other.prec);
        match common {
            Prec::Exact => self.digits == other.digits,
            Prec::Mod(_) => {
                let a = self.ring.from_digits(self.digits.clone(), common);
                let b = self.ring.from_digits(other.digits.clone(), common);
                a.digits == b.digits
            }
        }
    }
}
impl Eq for DyadicNumber {}

impl fmt::Display for DyadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        let d = self.ring.inner.d;
        let mut first = true;
        for (i, digit) in self.digits.iter().enumerate() {
            if self.ring.w_is_zero(digit) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if d == 1 {
                format!("{}", digit[0])
            } else {
                let terms: Vec<String> = digit
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| match k {
                        0 => format!("{c}"),
                        1 => format!("{c}*w"),
                        _ => format!("{c}*w^{k}"),
                    })
                    .collect();
                format!("({})", terms.join(" + "))
            };
            match i {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}*pi")?,
                _ => write!(f, "{coeff}*pi^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        match self.prec {
            Prec::Exact => write!(f, " (exact)"),
            Prec::Mod(q) => write!(f, " + O(pi^{q})"),
        }
    }
}

impl fmt::Debug for DyadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicNumber({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> RingConfig {
        make_ring(1, 32).unwrap()
    }

    #[test]
    fn distinguished_constants_are_consistent() {
        let r = ring();
        // nu(lambda) = 1
        assert_eq!(r.lambda().valuation_quarters().unwrap(), Some(4));
        // sqrt2^2 = 2 exactly
        let s = r.sqrt2();
        assert_eq!(s.mul(&s), r.two());
        assert_eq!(s.valuation_quarters().unwrap(), Some(2));
        // nu(i - 1) = 1/2
        let im1 = r.i_unit().sub(&r.one());
        assert_eq!(im1.valuation_quarters().unwrap(), Some(2));
        // nu(zeta8 - 1) = 1/4
        let z = r.zeta8().sub(&r.one());
        assert_eq!(z.valuation_quarters().unwrap(), Some(1));
        // i^2 = -1
        let i = r.i_unit();
        assert_eq!(i.mul(&i), r.integer(-1));
        // zeta8^4 = -1, and the Eisenstein relation holds exactly
        assert_eq!(r.zeta8().pow(4), r.integer(-1));
        let pi = r.pi();
        let relation = pi
            .pow(4)
            .add(&pi.pow(3).mul(&r.integer(4)))
            .add(&pi.pow(2).mul(&r.integer(6)))
            .add(&pi.mul(&r.integer(4)))
            .add(&r.two());
        assert!(relation.is_exact_zero());
        // zeta8 * sqrt2 = 1 + i
        assert_eq!(r.zeta8().mul(&r.sqrt2()), r.one().add(&r.i_unit()));
    }

    #[test]
    fn valuation_is_additive_on_constants() {
        let r = ring();
        let cases = [r.two(), r.pi(), r.sqrt2(), r.i_unit().sub(&r.one())];
        for a in &cases {
            for b in &cases {
                let va = a.valuation_quarters().unwrap().unwrap();
                let vb = b.valuation_quarters().unwrap().unwrap();
                let vab = a.mul(b).valuation_quarters().unwrap().unwrap();
                assert_eq!(vab, va + vb, "nu({a} * {b})");
            }
        }
    }

    #[test]
    fn shift_down_matches_normalizer() {
        let r = ring();
        for k in 0..9i64 {
            let n = r.normalizer(k);
            assert_eq!(n.valuation_quarters().unwrap(), Some(k), "normalizer({k})");
            let base = r.integer(7).add(&r.pi().mul(&r.integer(3)));
            let x = n.mul(&base);
            let y = x.shift_down(k).unwrap();
            assert_eq!(y, base, "shift_down({k})");
        }
    }

    #[test]
    fn pseudo_zero_raises() {
        let r = ring();
        let t = r.one().truncate_to_ring();
        let z = t.sub(&r.one());
        assert!(z.is_zero_to_prec());
        assert!(!z.is_exact_zero());
        assert!(matches!(
            z.valuation_quarters(),
            Err(Error::InsufficientPrecision(_))
        ));
        // exact cancellation stays exact
        assert!(r.one().sub(&r.one()).is_exact_zero());
    }

    #[test]
    fn inversion_roundtrip() {
        let r = ring();
        for x in [
            r.integer(3),
            r.eisenstein_unit(),
            r.one().add(&r.pi()),
            r.one().add(&r.two().mul(&r.pi())),
        ] {
            let inv = x.invert_unit().unwrap();
            let prod = x.mul(&inv);
            assert!(prod.sub(&r.one()).is_zero_to_prec(), "{x} * {inv}");
        }
    }

    #[test]
    fn teichmuller_f4_has_order_three() {
        let r = make_ring(2, 32).unwrap();
        let t = Gf::generator(2).unwrap();
        let lift = r.teichmuller(t);
        let cube = lift.pow(3);
        assert!(cube.sub(&r.one()).is_zero_to_prec());
        assert_eq!(lift.residue().unwrap(), t);
        // multiplicativity: teich(sqrt(a))^2 = teich(a) for all a
        for a in Gf::all(2) {
            let s = r.teichmuller(a.sqrt());
            let direct = r.teichmuller(a);
            assert!(s.mul(&s).sub(&direct).is_zero_to_prec(), "a = {a}");
        }
    }

    #[test]
    fn ring_construction_limits() {
        assert!(matches!(
            make_ring(13, 32),
            Err(Error::UnsupportedDegree(13))
        ));
        assert!(matches!(make_ring(0, 32), Err(Error::UnsupportedDegree(0))));
        assert!(matches!(make_ring(1, 4), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn residues() {
        let r = ring();
        assert_eq!(r.integer(7).residue().unwrap(), Gf::one(1));
        assert_eq!(r.integer(4).residue().unwrap(), Gf::zero(1));
        assert_eq!(r.pi().residue().unwrap(), Gf::zero(1));
        assert_eq!(r.i_unit().residue().unwrap(), Gf::one(1));
    }
}
