//! Direct ramification-break computation at tiny conductors, from first
//! principles with truncated Laurent series over F_2.
//!
//! For the Artin-Schreier cover y^2 + y = 1/x^m (m odd, q = (m+1)/2),
//! z = x^q * y is a uniformizer upstairs: it satisfies z^2 + x^q z = x,
//! so x expands as a series in z by fixed-point iteration, and the
//! involution moves z by sigma(z) - z = x(z)^q. The break is then
//! ord_z(sigma(z) - z) - 1, computed from the series.

use crate::error::{Error, Result};

/// Truncated power series over F_2 in z: bit k of `bits` is the
/// coefficient of z^k; terms at or above `trunc` are unknown.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Ser {
    bits: u128,
    trunc: u32,
}

impl Ser {
    fn new(bits: u128, trunc: u32) -> Ser {
        assert!(trunc <= 128);
        Ser {
            bits: bits & Ser::mask(trunc),
            trunc,
        }
    }

    fn mask(trunc: u32) -> u128 {
        if trunc >= 128 {
            u128::MAX
        } else {
            (1u128 << trunc) - 1
        }
    }

    fn add(self, other: Ser) -> Ser {
        let trunc = self.trunc.min(other.trunc);
        Ser::new(self.bits ^ other.bits, trunc)
    }

    fn mul(self, other: Ser) -> Ser {
        let trunc = self.trunc.min(other.trunc);
        let mut acc = 0u128;
        for k in 0..trunc {
            if self.bits >> k & 1 == 1 {
                acc ^= other.bits << k;
            }
        }
        Ser::new(acc, trunc)
    }

    fn pow(self, e: u32) -> Ser {
        let mut acc = Ser::new(1, self.trunc);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Order of the first nonzero term, if visible within truncation.
    fn ord(self) -> Option<u32> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros())
        }
    }
}

/// Outcome of the series computation for one conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TinyBreaks {
    pub m1: u64,
    pub break_found: u64,
    /// ord_z of x, i.e. the ramification index (must be 2).
    pub ramification_index: u32,
}

/// Compute the ramification break of y^2 + y = 1/x^m1 for m1 in {1, 3}
/// by solving for the uniformizer series and measuring ord(sigma(z) - z).
pub fn tiny_breaks_oracle(m1: u64) -> Result<TinyBreaks> {
    if m1 != 1 && m1 != 3 {
        return Err(Error::InvalidParameter(format!(
            "tiny breaks oracle supports m1 in {{1, 3}}, got {m1}"
        )));
    }
    let q = ((m1 + 1) / 2) as u32;
    let trunc: u32 = 48;
    // x = z^2 + x^q * z, iterated from x = z^2
    let z = Ser::new(0b10, trunc);
    let z2 = z.mul(z);
    let mut x = z2;
    let mut stabilized = false;
    for _ in 0..trunc {
        let next = z2.add(x.pow(q).mul(z));
        if next == x {
            stabilized = true;
            break;
        }
        x = next;
    }
    if !stabilized {
        return Err(Error::PrecisionExhausted(format!(
            "uniformizer series for m1 = {m1} did not stabilize at {trunc} terms"
        )));
    }
    // and the fixed point actually solves z^2 + x^q z + x = 0
    let residual = z2.add(x.pow(q).mul(z)).add(x);
    if residual.bits != 0 {
        return Err(Error::MismatchError(format!(
            "uniformizer series residual is nonzero: {:#b}",
            residual.bits
        )));
    }
    let ram_index = x
        .ord()
        .ok_or_else(|| Error::PrecisionExhausted("x-series vanished to truncation".into()))?;
    // sigma(y) = y + 1, so sigma(z) - z = x^q
    let moved = x.pow(q);
    let ord = moved
        .ord()
        .ok_or_else(|| Error::PrecisionExhausted("sigma(z) - z vanished to truncation".into()))?;
    Ok(TinyBreaks {
        m1,
        break_found: ord as u64 - 1,
        ramification_index: ram_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2x::{parse_ratfunc, ramification_breaks, RationalFunction, WittVector2};

    #[test]
    fn break_of_conductor_two() {
        let r = tiny_breaks_oracle(1).unwrap();
        assert_eq!(r.break_found, 1);
        assert_eq!(r.ramification_index, 2);
    }

    #[test]
    fn break_of_conductor_four() {
        let r = tiny_breaks_oracle(3).unwrap();
        assert_eq!(r.break_found, 3);
        assert_eq!(r.ramification_index, 2);
    }

    #[test]
    fn agrees_with_reduced_vector_formula() {
        for m1 in [1u64, 3] {
            let oracle = tiny_breaks_oracle(m1).unwrap();
            let u = WittVector2::new(
                parse_ratfunc(1, &format!("1/x^{m1}")).unwrap(),
                RationalFunction::zero(),
            );
            let breaks = ramification_breaks(&u).unwrap();
            assert_eq!(oracle.break_found, breaks.m1);
        }
    }

    #[test]
    fn rejects_unsupported_conductors() {
        assert!(tiny_breaks_oracle(5).is_err());
    }
}
