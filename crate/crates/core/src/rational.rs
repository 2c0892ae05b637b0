use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::Serialize;

/// Exact rational used for ψ, ℓ₁ and cubic parameters.
pub type Q = Ratio<i128>;

pub fn q(num: i128, den: i128) -> Q {
    Q::new(num, den)
}

pub fn qi(n: impl Into<i128>) -> Q {
    Q::from_integer(n.into())
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn big_to_f64(x: &BigRational) -> f64 {
    // scale to keep both parts inside f64 range
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn big(x: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Serialized form of an exact rational: numerator, denominator and a float
/// rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exact {
    pub num: String,
    pub den: String,
    pub value: f64,
}

impl From<Q> for Exact {
    fn from(x: Q) -> Self {
        Exact {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            value: to_f64(&x),
        }
    }
}

impl From<&BigRational> for Exact {
    fn from(x: &BigRational) -> Self {
        Exact {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            value: big_to_f64(x),
        }
    }
}
