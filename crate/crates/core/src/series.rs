//! MacMahon-type product formulas and comparison with boxed partition
//! functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Assignment, Exp, LeadVar, Monomial, Poly, Series};
use crate::diagrams::{z_poly, WeightScheme};
use crate::error::{Error, Result};
use crate::mesh::BoxDims;

/// `prod_{n=1..order} (1 - a z^n)^(-n)` truncated at `z^order`.
pub fn mac(var: &str, a: &Monomial, order: usize) -> Series {
    let mut acc = Series::one(var, order);
    for n in 1..=order {
        acc = acc.mul(&Series::geometric(var, a, n, order).pow(n as u32));
    }
    acc
}

/// `M(a, z) M(a^-1, z)`.
pub fn mac_tilde(var: &str, a: &Monomial, order: usize) -> Result<Series> {
    Ok(mac(var, a, order).mul(&mac(var, &a.inv()?, order)))
}

fn qrs(c: i64, q: i32, r: i32, s: i32) -> Monomial {
    Monomial::new(c, [0, q, r, s])
}

/// The coloured product formula in `Q = pqrs`, coefficients Laurent in
/// `q, r, s`:
///
/// `M(1,Q)^4 M~(qr,Q) M~(qs,Q) M~(rs,Q) / (M~(-q,Q) M~(-r,Q) M~(-s,Q) M~(-qrs,Q))`.
pub fn z2z2_rhs(order: usize) -> Result<Series> {
    z2z2_rhs_with(order, true)
}

/// [`z2z2_rhs`], optionally dropping the `M~(-qrs,Q)` denominator factor.
pub fn z2z2_rhs_with(order: usize, full: bool) -> Result<Series> {
    let v = "Q";
    let mut num = mac(v, &Monomial::one(), order).pow(4);
    for a in [qrs(1, 1, 1, 0), qrs(1, 1, 0, 1), qrs(1, 0, 1, 1)] {
        num = num.mul(&mac_tilde(v, &a, order)?);
    }
    let mut den = Series::one(v, order);
    let mut factors = vec![qrs(-1, 1, 0, 0), qrs(-1, 0, 1, 0), qrs(-1, 0, 0, 1)];
    if full {
        factors.push(qrs(-1, 1, 1, 1));
    }
    for a in factors {
        den = den.mul(&mac_tilde(v, &a, order)?);
    }
    Ok(num.mul(&den.inv()?))
}

/// Whether the product formula at `q = r = s = -1` equals `M(1,Q)^2` through
/// `Q^order`.
pub fn eq3_check(order: usize) -> Result<bool> {
    let lhs = z2z2_rhs(order)?.specialize(&Assignment::qrs_minus_one());
    Ok(lhs.integer_coeffs() == mac("Q", &Monomial::one(), order).pow(2).integer_coeffs())
}

/// Coefficients of a `(p,q,r,s)` polynomial regrouped by powers of
/// `Q = pqrs`: `p^a q^b r^c s^d -> Q^a q^(b-a) r^(c-a) s^(d-a)`.
pub fn to_q_grading(poly: &Poly) -> BTreeMap<usize, Poly> {
    let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
    for (e, c) in poly.terms() {
        let a = e[0];
        let exp = [0, e[1] - a, e[2] - a, e[3] - a];
        out.entry(a as usize).or_insert_with(|| Poly::zero(LeadVar::P)).add_term(exp, c.clone());
    }
    out
}

/// Inverse of [`to_q_grading`] for one coefficient.
fn from_q_term(power: usize, e: &Exp) -> Exp {
    let a = power as i32;
    [a, e[1] + a, e[2] + a, e[3] + a]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesComparison {
    pub degree: u32,
    pub terms_compared: usize,
    /// `(Q power, q/r/s exponent, boxed coefficient, series coefficient)`.
    pub first_mismatch: Option<(usize, Exp, BigInt, BigInt)>,
}

impl SeriesComparison {
    pub fn agree(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compare the boxed partition function with the infinite product through
/// total degree `degree`.
///
/// Diagrams with at most `min(a,b,c)` boxes all fit in the box, so the
/// coefficients up to that degree are those of the unboxed series. In
/// coloured mode both sides are restricted to monomials of total degree at
/// most `degree` in `p, q, r, s` and compared in the `(Q; q, r, s)` grading.
pub fn compare_box_vs_series(dims: BoxDims, degree: u32, scheme: WeightScheme) -> Result<SeriesComparison> {
    if degree > dims.min_side() {
        return Err(Error::DegreeTooLarge { degree, max: dims.min_side() });
    }
    let order = degree as usize;
    let boxed = z_poly(dims, scheme, Some(degree));
    let series = match scheme {
        WeightScheme::Monochromatic => mac("p", &Monomial::one(), order),
        WeightScheme::Z2Z2 => z2z2_rhs(order)?,
    };
    let lhs = match scheme {
        WeightScheme::Monochromatic => boxed
            .terms()
            .map(|(e, c)| (e[0] as usize, Poly::constant(LeadVar::P, c.clone())))
            .collect(),
        WeightScheme::Z2Z2 => to_q_grading(&boxed),
    };
    let mut terms_compared = 0;
    let mut first_mismatch = None;
    // series terms in range, as (power, exp) -> coeff
    let mut rhs: BTreeMap<(usize, Exp), BigInt> = BTreeMap::new();
    for (n, c) in series.coeffs().iter().enumerate() {
        for (e, k) in c.terms() {
            let full = match scheme {
                WeightScheme::Monochromatic => [n as i32, 0, 0, 0],
                WeightScheme::Z2Z2 => from_q_term(n, e),
            };
            if full.iter().all(|&x| x >= 0) && full.iter().sum::<i32>() <= degree as i32 {
                rhs.insert((n, *e), k.clone());
            }
        }
    }
    let mut keys: Vec<(usize, Exp)> = rhs.keys().copied().collect();
    for (n, c) in &lhs {
        keys.extend(c.terms().map(|(e, _)| (*n, *e)));
    }
    keys.sort();
    keys.dedup();
    for (n, e) in keys {
        terms_compared += 1;
        let l = lhs.get(&n).map(|c| c.coeff(&e)).unwrap_or_else(BigInt::zero);
        let r = rhs.get(&(n, e)).cloned().unwrap_or_else(BigInt::zero);
        if l != r && first_mismatch.is_none() {
            first_mismatch = Some((n, e, l, r));
        }
    }
    Ok(SeriesComparison { degree, terms_compared, first_mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series) -> Vec<i64> {
        s.integer_coeffs().unwrap().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn macmahon_coefficients() {
        assert_eq!(ints(&mac("z", &Monomial::one(), 6)), vec![1, 1, 3, 6, 13, 24, 48]);
        assert_eq!(ints(&mac("z", &Monomial::one(), 0)), vec![1]);
        let q = qrs(1, 1, 0, 0);
        let m = mac("z", &q, 1);
        assert_eq!(m.coeff(1), &Poly::from_monomial(LeadVar::P, &q));
    }

    #[test]
    fn tilde_first_order() {
        let a = qrs(1, 1, 1, 0);
        let m = mac_tilde("z", &a, 1).unwrap();
        let expected = &Poly::from_monomial(LeadVar::P, &a) + &Poly::from_monomial(LeadVar::P, &a.inv().unwrap());
        assert_eq!(m.coeff(1), &expected);
        assert_eq!(mac_tilde("z", &Monomial::one(), 5).unwrap(), mac("z", &Monomial::one(), 5).pow(2));
    }

    #[test]
    fn rhs_low_coefficients() {
        let rhs = z2z2_rhs(2).unwrap();
        assert_eq!(rhs.coeff(0), &Poly::one(LeadVar::P));
        // p = Q (qrs)^-1
        assert_eq!(rhs.coeff(1).coeff(&[0, -1, -1, -1]), BigInt::from(1));
    }

    #[test]
    fn eq3_and_negative_control() {
        assert!(eq3_check(0).unwrap());
        assert!(eq3_check(6).unwrap());
        let perturbed = z2z2_rhs_with(4, false).unwrap().specialize(&Assignment::qrs_minus_one());
        assert_ne!(perturbed.integer_coeffs(), mac("Q", &Monomial::one(), 4).pow(2).integer_coeffs());
    }

    #[test]
    fn boxed_comparisons() {
        let d = BoxDims::new(1, 1, 1).unwrap();
        assert!(compare_box_vs_series(d, 1, WeightScheme::Monochromatic).unwrap().agree());
        let d = BoxDims::new(2, 2, 2).unwrap();
        assert!(compare_box_vs_series(d, 2, WeightScheme::Z2Z2).unwrap().agree());
        assert!(matches!(
            compare_box_vs_series(d, 3, WeightScheme::Z2Z2),
            Err(Error::DegreeTooLarge { degree: 3, max: 2 })
        ));
    }
}
