//! Exact dyadic and rational numbers.
//!
//! Everything downstream is computed with these two types; there is no
//! floating point on any computational path.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational.
pub type Rat = BigRational;

/// `n / d` as a [`Rat`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rat {
    let mag = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rat::from_integer(mag)
    } else {
        Rat::new(BigInt::one(), mag)
    }
}

/// `4^r` as an exact rational.
pub fn pow4(r: u32) -> Rat {
    pow2(2 * i64::from(r))
}

/// Floor toward negative infinity.
pub fn floor_rat(a: &Rat) -> BigInt {
    a.numer().div_floor(a.denom())
}

/// Canonical "p/q" text form; the denominator is always printed.
pub fn fmt_rat(a: &Rat) -> String {
    format!("{}/{}", a.numer(), a.denom())
}

/// Parses "p/q", an integer "p", or a dyadic "m*2^-e".
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    if s.contains('*') {
        return Ok(s.parse::<Dyadic>()?.to_rat());
    }
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion for figure coordinates only.
pub fn rat_to_f64(a: &Rat) -> f64 {
    a.to_f64().unwrap_or(f64::NAN)
}

/// An exact number `mantissa * 2^(-exponent)` in canonical form: the
/// mantissa is odd unless the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(mantissa: impl Into<BigInt>, exponent: u32) -> Self {
        let mut mantissa = mantissa.into();
        let mut exponent = exponent;
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0).min(u64::from(exponent)) as u32;
        if tz > 0 {
            mantissa >>= tz;
            exponent -= tz;
        }
        Dyadic { mantissa, exponent }
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { mantissa: n.into(), exponent: 0 }
    }

    /// `2^(-e)`.
    pub fn pow2_neg(e: u32) -> Self {
        Dyadic::new(1, e)
    }

    /// Exact conversion when the denominator of `a` is a power of two.
    pub fn from_rat(a: &Rat) -> Option<Self> {
        let d = a.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(a.numer().clone(), u32::try_from(tz).ok()?))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// True when the value lies in `2^(-n) Z`.
    pub fn is_n_dyadic(&self, n: u32) -> bool {
        self.exponent <= n
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.mantissa.clone(), BigInt::one() << self.exponent)
    }

    pub fn floor(&self) -> BigInt {
        self.mantissa.div_floor(&(BigInt::one() << self.exponent))
    }

    /// Mantissa rescaled to exponent `e >= self.exponent`.
    pub fn scaled_mantissa(&self, e: u32) -> BigInt {
        debug_assert!(e >= self.exponent);
        &self.mantissa << (e - self.exponent)
    }

    /// Multiplication by `2^(-e)`.
    pub fn shr(&self, e: u32) -> Self {
        Dyadic::new(self.mantissa.clone(), self.exponent + e)
    }
}

/// The largest n-dyadic number not exceeding `a`, i.e. `2^(-n) floor(2^n a)`.
pub fn dyadic_floor(a: &Rat, n: u32) -> Dyadic {
    let scaled = a.numer() << n;
    Dyadic::new(scaled.div_floor(a.denom()), n)
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<&Dyadic> for Rat {
    fn from(d: &Dyadic) -> Rat {
        d.to_rat()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_mantissa(e).cmp(&other.scaled_mantissa(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_mantissa(e) + rhs.scaled_mantissa(e), e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_mantissa(e) - rhs.scaled_mantissa(e), e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^-{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts "m*2^-e", a plain integer, or "p/q" with q a power of two.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        if let Some((m, e)) = s.split_once('*') {
            let m: BigInt = m.trim().parse().map_err(|_| bad())?;
            let e = e.trim().strip_prefix("2^-").ok_or_else(bad)?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            return Ok(Dyadic::new(m, e));
        }
        let r = parse_rat(s)?;
        Dyadic::from_rat(&r).ok_or_else(bad)
    }
}
