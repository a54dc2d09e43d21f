//! Small exact-arithmetic helpers shared by the kernel and quadrature builders.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Solves `a x = b` by Gauss-Jordan elimination over the rationals.
pub(crate) fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for j in col..n {
                let delta = &factor * &a[col][j];
                a[row][j] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    Ok(b)
}

/// Splits a rational into a leading `f64` and the `f64` of the remainder,
/// so extended-precision consumers can recover ~106 bits.
pub(crate) fn split_f64(r: &BigRational) -> (f64, f64) {
    let hi = to_f64(r);
    let rest = match BigRational::from_float(hi) {
        Some(h) => r - h,
        None => return (hi, 0.0),
    };
    (hi, to_f64(&rest))
}

/// Correctly scaled conversion even when numerator and denominator overflow `f64`.
pub(crate) fn to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let bits = |x: &BigInt| x.bits() as i64;
    let shift = bits(r.numer()) - bits(r.denom());
    let scaled = if shift > 0 {
        BigRational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        BigRational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let mantissa = scaled.to_f64().unwrap_or(0.0);
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * mantissa.abs() * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![ratio(2, 1), ratio(1, 1)], vec![ratio(1, 1), ratio(3, 1)]];
        let b = vec![ratio(3, 1), ratio(5, 1)];
        let x = solve_exact(a, b).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn singular_system_is_reported() {
        let a = vec![vec![ratio(1, 1), ratio(2, 1)], vec![ratio(2, 1), ratio(4, 1)]];
        let b = vec![ratio(1, 1), ratio(0, 1)];
        assert_eq!(solve_exact(a, b), Err(Error::SingularSystem));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 0), BigInt::from(1));
        assert_eq!(binomial(7, 7), BigInt::from(1));
    }

    #[test]
    fn split_recovers_thirds() {
        let (hi, lo) = split_f64(&ratio(1, 3));
        assert_eq!(hi, 1.0 / 3.0);
        assert!(lo != 0.0 && lo.abs() < 1e-16);
    }

    #[test]
    fn huge_parts_convert() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * BigInt::from(3), big);
        assert_eq!(to_f64(&r), 3.0);
    }
}
