//! Newton polygons of valued polynomials and the resultant-based
//! separability check.
//!
//! Root counts and valuations come from the lower convex hull of
//! (exponent, coefficient valuation); distinctness of roots comes from
//! resultant(P, P'). The determinant uses Berkowitz's division-free
//! algorithm so exact inputs produce exact resultants: an exact repeated
//! root yields an exact zero ("false"), while a resultant that is merely
//! zero to precision raises InsufficientPrecision.

use super::poly::DyadicPoly;
use super::ring::{DyadicNumber, Prec};
use crate::error::{Error, Result};
use num_rational::Ratio;

/// One segment of the lower hull: `multiplicity` roots of valuation
/// `-slope` (slope in nu(2) = 1 units).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    pub slope: Ratio<i64>,
    pub multiplicity: u64,
}

impl NewtonSegment {
    pub fn root_valuation(&self) -> Ratio<i64> {
        -self.slope
    }
}

/// Lower convex hull of (exponent, coefficient valuation in quarters).
/// Requires the constant and leading coefficients to be distinguishable
/// from zero. Interior pseudo-zero coefficients are fine as long as
/// their precision bound keeps them on or above the hull.
pub fn newton_polygon(p: &DyadicPoly) -> Result<Vec<NewtonSegment>> {
    let deg = p
        .degree()
        .ok_or_else(|| Error::InvalidParameter("newton polygon of zero".into()))?;
    if deg == 0 {
        return Ok(Vec::new());
    }

    // (exponent, valuation) for certified points; bounds for pseudo-zeros
    let mut points: Vec<(i64, i64)> = Vec::new();
    let mut bounds: Vec<(i64, i64)> = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        match c.valuation_quarters() {
            Ok(Some(v)) => points.push((k as i64, v)),
            Ok(None) => {} // exact zero never contributes
            Err(_) => {
                let b = match c.prec() {
                    Prec::Mod(q) => q,
                    Prec::Exact => unreachable!(),
                };
                bounds.push((k as i64, b));
                if k == 0 || k == deg {
                    return Err(Error::InsufficientPrecision(format!(
                        "coefficient of X^{k} is zero to precision; the polygon's \
                         endpoint is ambiguous"
                    )));
                }
            }
        }
    }
    if points.first().map(|&(k, _)| k) != Some(0) {
        return Err(Error::InvalidParameter(
            "constant term is exactly zero; strip the X factor first".into(),
        ));
    }
    if points.last().map(|&(k, _)| k) != Some(deg as i64) {
        return Err(Error::InvalidParameter(
            "leading coefficient is exactly zero".into(),
        ));
    }

    // monotone-chain lower hull over exact integer points
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep strictly convex turns: drop (x2, y2) when it lies on
            // or above the segment (x1, y1) - (x, y)
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }

    // pseudo-zeros must not dip below the hull
    for &(x, bound) in &bounds {
        let height = hull_height(&hull, x);
        // compare bound >= height: bound/1 >= num/den
        if Ratio::new(bound, 1) < height {
            return Err(Error::InsufficientPrecision(format!(
                "coefficient of X^{x} is only known modulo pi^{bound}, below the \
                 hull at that exponent"
            )));
        }
    }

    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        segments.push(NewtonSegment {
            // valuations are quarters; report slopes in nu(2) = 1 units
            slope: Ratio::new(y2 - y1, 4 * (x2 - x1)),
            multiplicity: (x2 - x1) as u64,
        });
    }
    debug_assert_eq!(
        segments.iter().map(|s| s.multiplicity).sum::<u64>(),
        deg as u64
    );
    Ok(segments)
}

fn hull_height(hull: &[(i64, i64)], x: i64) -> Ratio<i64> {
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        if x1 <= x && x <= x2 {
            // y1 + (x - x1) * (y2 - y1)/(x2 - x1)
            return Ratio::new(y1, 1) + Ratio::new((x - x1) * (y2 - y1), x2 - x1);
        }
    }
    // outside the hull range (cannot happen for interior exponents)
    Ratio::new(i64::MAX, 1)
}

/// Valuations of the roots (in nu(2) = 1 units) with multiplicities,
/// weakly decreasing.
pub fn root_valuations(p: &DyadicPoly) -> Result<Vec<(Ratio<i64>, u64)>> {
    Ok(newton_polygon(p)?
        .into_iter()
        .map(|s| (s.root_valuation(), s.multiplicity))
        .collect())
}

/// Characteristic-polynomial constant term via Berkowitz (division-free),
/// returning det(A) for the n x n matrix `a` (row-major).
fn berkowitz_det(ring: &super::ring::RingConfig, a: &[Vec<DyadicNumber>]) -> DyadicNumber {
    let n = a.len();
    if n == 0 {
        return ring.one();
    }
    // char poly coefficients of the r x r principal minor, monic in
    // descending powers: starts at [1, -a00].
    let mut poly: Vec<DyadicNumber> = vec![ring.one(), a[0][0].neg()];
    for r in 1..n {
        // Toeplitz column entries: t0 = 1, t1 = -a[r][r],
        // t_(k+2) = -(R * M^k * C) with M the r x r minor, R the row
        // left of a[r][r], C the column above it.
        let mut t: Vec<DyadicNumber> = Vec::with_capacity(r + 2);
        t.push(ring.one());
        t.push(a[r][r].neg());
        // iteratively build M^k * C
        let mut vec_c: Vec<DyadicNumber> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            // R . vec_c
            let mut dot = ring.exact_zero();
            for j in 0..r {
                dot = dot.add(&a[r][j].mul(&vec_c[j]));
            }
            t.push(dot.neg());
            // vec_c = M * vec_c
            let mut next = vec![ring.exact_zero(); r];
            for i in 0..r {
                for j in 0..r {
                    next[i] = next[i].add(&a[i][j].mul(&vec_c[j]));
                }
            }
            vec_c = next;
        }
        // poly = T * poly (lower-triangular Toeplitz application)
        let mut next = vec![ring.exact_zero(); r + 2];
        for (i, ti) in t.iter().enumerate() {
            for (j, pj) in poly.iter().enumerate() {
                if i + j < r + 2 {
                    next[i + j] = next[i + j].add(&ti.mul(pj));
                }
            }
        }
        poly = next;
    }
    // det(xI - A) has constant term (-1)^n det(A)
    let constant = poly.last().expect("nonempty").clone();
    if n % 2 == 1 {
        constant.neg()
    } else {
        constant
    }
}

/// Resultant of P and Q via the Sylvester matrix with formal degrees.
pub fn resultant(p: &DyadicPoly, q: &DyadicPoly) -> Result<DyadicNumber> {
    let ring = p.ring().clone();
    let dp = p
        .degree()
        .ok_or_else(|| Error::InvalidParameter("resultant with zero polynomial".into()))?;
    let dq = q
        .degree()
        .ok_or_else(|| Error::InvalidParameter("resultant with zero polynomial".into()))?;
    if dp == 0 || dq == 0 {
        // deg-0 cases: res(c, Q) = c^deg(Q)
        if dp == 0 {
            return Ok(p.coeff(0).pow(dq as u64));
        }
        return Ok(q.coeff(0).pow(dp as u64));
    }
    let n = dp + dq;
    let mut m = vec![vec![ring.exact_zero(); n]; n];
    for row in 0..dq {
        for (k, c) in p.coeffs().iter().enumerate() {
            m[row][row + dp - k] = c.clone();
        }
    }
    for row in 0..dp {
        for (k, c) in q.coeffs().iter().enumerate() {
            m[dq + row][row + dq - k] = c.clone();
        }
    }
    Ok(berkowitz_det(&ring, &m))
}

/// True iff resultant(P, P') is distinguishable from zero at the current
/// precision; an exact zero (honest repeated root) gives false.
pub fn separability_check(p: &DyadicPoly) -> Result<bool> {
    match p.degree() {
        None | Some(0) => {
            return Err(Error::InvalidParameter(
                "separability of a constant polynomial".into(),
            ))
        }
        _ => {}
    }
    let r = resultant(p, &p.derivative())?;
    if r.is_exact_zero() {
        return Ok(false);
    }
    match r.valuation_quarters() {
        Ok(Some(_)) => Ok(true),
        Ok(None) => Ok(false),
        Err(_) => Err(Error::InsufficientPrecision(
            "resultant(P, P') is zero to precision".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::ratfunc::parse_dyadic_ratfunc;
    use crate::dyadic::ring::{make_ring, RingConfig};

    fn ring() -> RingConfig {
        make_ring(1, 32).unwrap()
    }

    fn poly(r: &RingConfig, src: &str) -> DyadicPoly {
        let f = parse_dyadic_ratfunc(r, src).unwrap();
        assert_eq!(f.denominator().degree(), Some(0));
        f.numerator().clone()
    }

    #[test]
    fn polygon_single_segment() {
        let r = ring();
        // X^3 + 4: three roots of valuation 2/3
        let segs = newton_polygon(&poly(&r, "X^3 + 4")).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].root_valuation(), Ratio::new(2, 3));
        assert_eq!(segs[0].multiplicity, 3);

        // X^2 + 2: two roots of valuation 1/2
        let segs = newton_polygon(&poly(&r, "X^2 + 2")).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].root_valuation(), Ratio::new(1, 2));
        assert_eq!(segs[0].multiplicity, 2);
    }

    #[test]
    fn polygon_two_segments() {
        let r = ring();
        // X^3 + 2X + 4: hull (0,2) - (1,1) - (3,0)
        let segs = newton_polygon(&poly(&r, "X^3 + 2*X + 4")).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].root_valuation(), Ratio::new(1, 1));
        assert_eq!(segs[0].multiplicity, 1);
        assert_eq!(segs[1].root_valuation(), Ratio::new(1, 2));
        assert_eq!(segs[1].multiplicity, 2);
        // slopes weakly increase left to right
        assert!(segs[0].slope < segs[1].slope);
    }

    #[test]
    fn polygon_multiplicities_sum_to_degree() {
        let r = ring();
        for src in ["X^3 + 4", "X^3 + 2*X + 4", "X^5 + 2*X^2 + 8", "X^2 + 2"] {
            let p = poly(&r, src);
            let segs = newton_polygon(&p).unwrap();
            let total: u64 = segs.iter().map(|s| s.multiplicity).sum();
            assert_eq!(total, p.degree().unwrap() as u64, "{src}");
        }
    }

    #[test]
    fn separability_examples() {
        let r = ring();
        assert!(separability_check(&poly(&r, "X^3 + 4")).unwrap());
        // exact repeated root: false at any precision
        assert!(!separability_check(&poly(&r, "(X - 2)^2")).unwrap());
        // X^2 - 2X + c with c - 1 a unit: discriminant 4(1 - c)
        let p = poly(&r, "X^2 - 2*X + 3");
        assert!(separability_check(&p).unwrap());
        let res = resultant(&p, &p.derivative()).unwrap();
        // nu(res) = nu(4(1-c) * lc stuff) = 2 + nu(1 - 3) = 3
        assert_eq!(res.valuation_quarters().unwrap(), Some(12));
    }

    #[test]
    fn resultant_of_known_pair() {
        let r = ring();
        // res(X - 2, X - 6) = -2 - (-6) ... = (2 - 6) sign convention:
        // res = product of (root_p - root_q) with lc powers = (2 - 6) = -4
        let p = poly(&r, "X - 2");
        let q = poly(&r, "X - 6");
        let res = resultant(&p, &q).unwrap();
        assert_eq!(res.valuation_quarters().unwrap(), Some(8));
        assert!(res == r.integer(-4) || res == r.integer(4));
    }
}

#[cfg(test)]
mod eisenstein_check {
    use super::*;
    use crate::dyadic::poly::DyadicPoly;
    use crate::dyadic::ring::make_ring;

    /// The defining polynomial of the uniformizer, (1 + T)^4 + 1, is
    /// Eisenstein: a single slope of four roots at valuation 1/4, which
    /// is exactly the valuation assigned to zeta8 - 1.
    #[test]
    fn uniformizer_valuation_from_its_own_polygon() {
        let r = make_ring(1, 32).unwrap();
        let p = DyadicPoly::new(
            &r,
            vec![r.two(), r.integer(4), r.integer(6), r.integer(4), r.one()],
        );
        let segs = newton_polygon(&p).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].multiplicity, 4);
        assert_eq!(segs[0].root_valuation(), Ratio::new(1, 4));
        let direct = r.zeta8().sub(&r.one()).valuation_quarters().unwrap();
        assert_eq!(direct, Some(1));
    }
}
