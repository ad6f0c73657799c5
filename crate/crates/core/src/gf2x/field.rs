//! The ground field F_{2^d} with a fixed generator t.
//!
//! Elements are bitmasks of polynomials in t reduced modulo a fixed
//! irreducible polynomial per degree, so values are self-describing and
//! no field context needs to be threaded through callers. Frobenius is
//! bijective, so every element has a unique square root.

use crate::error::{Error, Result};
use std::fmt;

/// Irreducible (in fact primitive) polynomials over F_2, indexed by degree.
/// Bit k is the coefficient of t^k. Degree 1 uses t itself, i.e. F_2.
const MODULI: [u16; 13] = [
    0,
    0b10,            // t
    0b111,           // t^2 + t + 1
    0b1011,          // t^3 + t + 1
    0b10011,         // t^4 + t + 1
    0b100101,        // t^5 + t^2 + 1
    0b1000011,       // t^6 + t + 1
    0b10000011,      // t^7 + t + 1
    0b100011101,     // t^8 + t^4 + t^3 + t^2 + 1
    0b1000010001,    // t^9 + t^4 + 1
    0b10000001001,   // t^10 + t^3 + 1
    0b100000000101,  // t^11 + t^2 + 1
    0b1000001010011, // t^12 + t^6 + t^4 + t + 1
];

pub const MAX_DEGREE: u32 = 12;

/// An element of F_{2^d}. `bits` is a polynomial in the generator t of
/// degree < d. Elements of F_2 (d = 1) mix freely with any degree, and
/// the prime-subfield constants 0 and 1 compare equal across degrees.
#[derive(Clone, Copy, Eq)]
pub struct Gf {
    d: u8,
    bits: u16,
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        if self.bits <= 1 || other.bits <= 1 {
            self.bits == other.bits
        } else {
            self.d == other.d && self.bits == other.bits
        }
    }
}

impl std::hash::Hash for Gf {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
        if self.bits > 1 {
            self.d.hash(state);
        }
    }
}

pub fn check_degree(d: u32) -> Result<()> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(d));
    }
    Ok(())
}

impl Gf {
    pub fn new(d: u32, bits: u16) -> Result<Gf> {
        check_degree(d)?;
        if d < 16 && bits >= (1 << d) {
            return Err(Error::InvalidParameter(format!(
                "element bits 0x{bits:x} out of range for F_(2^{d})"
            )));
        }
        Ok(Gf { d: d as u8, bits })
    }

    pub fn zero(d: u32) -> Gf {
        Gf {
            d: d as u8,
            bits: 0,
        }
    }

    pub fn one(d: u32) -> Gf {
        Gf {
            d: d as u8,
            bits: 1,
        }
    }

    /// The fixed generator t. Only meaningful for d >= 2.
    pub fn generator(d: u32) -> Result<Gf> {
        check_degree(d)?;
        if d < 2 {
            return Err(Error::InvalidParameter(
                "F_2 has no generator t; use 0 and 1".into(),
            ));
        }
        Ok(Gf {
            d: d as u8,
            bits: 2,
        })
    }

    pub fn degree(&self) -> u32 {
        self.d as u32
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    /// Promote F_2 values so they can meet elements of any degree.
    fn unify(self, other: Gf) -> (Gf, Gf) {
        if self.d == other.d {
            (self, other)
        } else if self.d == 1 {
            (
                Gf {
                    d: other.d,
                    bits: self.bits,
                },
                other,
            )
        } else if other.d == 1 {
            (
                self,
                Gf {
                    d: self.d,
                    bits: other.bits,
                },
            )
        } else {
            panic!("mixed ground fields: F_(2^{}) vs F_(2^{})", self.d, other.d);
        }
    }

    pub fn add(self, other: Gf) -> Gf {
        let (a, b) = self.unify(other);
        Gf {
            d: a.d,
            bits: a.bits ^ b.bits,
        }
    }

    pub fn mul(self, other: Gf) -> Gf {
        let (a, b) = self.unify(other);
        let modulus = MODULI[a.d as usize] as u32;
        let d = a.d as u32;
        let mut acc: u32 = 0;
        let mut x = a.bits as u32;
        let mut y = b.bits as u32;
        while y != 0 {
            if y & 1 != 0 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if x >> d != 0 {
                // keep x reduced below degree d
                x ^= modulus;
            }
        }
        Gf {
            d: a.d,
            bits: acc as u16,
        }
    }

    pub fn square(self) -> Gf {
        self.mul(self)
    }

    pub fn pow(self, mut e: u64) -> Gf {
        let mut base = self;
        let mut acc = Gf::one(self.d as u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Unique square root: the inverse of Frobenius, a^(2^(d-1)).
    pub fn sqrt(self) -> Gf {
        if self.d == 1 {
            return self;
        }
        self.pow(1u64 << (self.d - 1))
    }

    pub fn inverse(self) -> Result<Gf> {
        if self.is_zero() {
            return Err(Error::InvalidParameter("inverse of zero".into()));
        }
        let order = (1u64 << self.d) - 1;
        Ok(self.pow(order - 1))
    }

    /// Absolute trace to F_2.
    pub fn trace(self) -> Gf {
        let mut acc = self;
        let mut frob = self;
        for _ in 1..self.d {
            frob = frob.square();
            acc = acc.add(frob);
        }
        debug_assert!(acc.bits <= 1);
        Gf {
            d: 1,
            bits: acc.bits,
        }
    }

    /// Solve e^2 + e = self, if a solution exists in F_{2^d}.
    /// Solutions exist exactly when the trace vanishes.
    pub fn solve_artin_schreier(self) -> Option<Gf> {
        if !self.trace().is_zero() {
            return None;
        }
        // d <= 12, so an exhaustive scan is fine.
        for bits in 0..(1u32 << self.d) {
            let e = Gf {
                d: self.d,
                bits: bits as u16,
            };
            if e.square().add(e) == self {
                return Some(e);
            }
        }
        None
    }

    /// All elements of F_{2^d}, in bit order.
    pub fn all(d: u32) -> impl Iterator<Item = Gf> {
        (0..(1u32 << d)).map(move |bits| Gf {
            d: d as u8,
            bits: bits as u16,
        })
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "0");
        }
        if self.bits == 1 {
            return write!(f, "1");
        }
        let mut first = true;
        for k in (0..16).rev() {
            if self.bits >> k & 1 == 1 {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match k {
                    0 => write!(f, "1")?,
                    1 => write!(f, "t")?,
                    _ => write!(f, "t^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({self})")
    }
}

/// Parse a ground-field element written as a polynomial in t, e.g.
/// "t^2 + t + 1". Integer literals reduce mod 2.
pub fn parse_gf(d: u32, input: &str) -> Result<Gf> {
    check_degree(d)?;
    let mut acc = Gf::zero(d);
    let cleaned = input.trim();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty ground-field element".into()));
    }
    for term in cleaned.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse(format!("bad ground-field element {input:?}")));
        }
        let elem = if let Some(rest) = term.strip_prefix("t^") {
            let k: u32 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
            if d < 2 {
                return Err(Error::Parse("t is not available over F_2".into()));
            }
            Gf::generator(d)?.pow(k as u64)
        } else if term == "t" {
            if d < 2 {
                return Err(Error::Parse("t is not available over F_2".into()));
            }
            Gf::generator(d)?
        } else {
            let n: u64 = term
                .parse()
                .map_err(|_| Error::Parse(format!("bad ground-field term {term:?}")))?;
            if n % 2 == 0 {
                Gf::zero(d)
            } else {
                Gf::one(d)
            }
        };
        acc = acc.add(elem);
    }
    Ok(acc)
}
