//! Binary fixed-point reals on big integers, for residuals that sit below
//! double precision.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::rational::big_to_f64;

/// Fractional bits carried by every [`Fixed`].
pub const FRAC_BITS: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn from_int(x: i128) -> Fixed {
        Fixed(BigInt::from(x) << FRAC_BITS)
    }

    pub fn from_ratio(x: &BigRational) -> Fixed {
        Fixed((x.numer() << FRAC_BITS) / x.denom())
    }

    /// Nearest representable value to a double; exact since doubles are dyadic.
    pub fn from_f64(x: f64) -> Fixed {
        let r = BigRational::from_float(x).expect("finite input");
        Fixed::from_ratio(&r)
    }

    pub fn sqrt(&self) -> Fixed {
        assert!(!self.0.is_negative(), "square root of a negative fixed-point value");
        Fixed((&self.0 << FRAC_BITS).sqrt())
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &other.0)
    }

    pub fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&BigRational::new(self.0.clone(), BigInt::from(1) << FRAC_BITS))
    }

    pub fn half(&self) -> Fixed {
        Fixed(&self.0 >> 1)
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 * &rhs.0) >> FRAC_BITS)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

/// Root of `f` in `[lo, hi]` by bisection, given a sign change. Returns `None`
/// when `f(lo)` and `f(hi)` share a strict sign.
pub fn bisect(mut lo: Fixed, mut hi: Fixed, f: impl Fn(&Fixed) -> Fixed) -> Option<Fixed> {
    let f_lo = f(&lo);
    let f_hi = f(&hi);
    if f_lo.is_zero() {
        return Some(lo);
    }
    if f_hi.is_zero() {
        return Some(hi);
    }
    if f_lo.is_negative() == f_hi.is_negative() {
        return None;
    }
    let lo_negative = f_lo.is_negative();
    let eps = Fixed(BigInt::from(4));
    while &hi - &lo > eps {
        let mid = (&lo + &hi).half();
        let value = f(&mid);
        if value.is_zero() {
            return Some(mid);
        }
        if value.is_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((&lo + &hi).half())
}
