//! Scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, NumCast, ToPrimitive};
use twofloat::TwoFloat;

/// Real scalar usable by the numeric pipelines: `f32`, `f64` or the
/// double-double `TwoFloat`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumCast
    + Debug
    + Display
    + Default
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Relative rounding unit. `Float::epsilon` is not trustworthy for every
    /// backend, so each type states its own.
    fn unit_roundoff() -> Self;

    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    /// Integer power with `x^0 = 1` for every `x`, zero included.
    fn ipow(self, n: i32) -> Self {
        if n == 0 { Self::one() } else { self.powi(n) }
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn from_i64_lossy(n: i64) -> Self {
        Self::lit(n as f64)
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Rounds an exact rational, keeping as many bits as the type holds.
    fn from_rational(r: &BigRational) -> Self {
        let mut rest = r.clone();
        let mut acc = Self::zero();
        for _ in 0..3 {
            let part = rest.to_f64().unwrap_or(0.0);
            if part == 0.0 || !part.is_finite() {
                break;
            }
            acc += Self::lit(part);
            match BigRational::from_float(part) {
                Some(p) => rest -= p,
                None => break,
            }
        }
        acc
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn tau() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {
    fn unit_roundoff() -> Self {
        f32::EPSILON / 2.0
    }
}

impl Real for f64 {
    fn unit_roundoff() -> Self {
        f64::EPSILON / 2.0
    }
}

impl Real for TwoFloat {
    fn unit_roundoff() -> Self {
        <TwoFloat as From<f64>>::from(2f64.powi(-104))
    }

    // `FromPrimitive::from_f64` in twofloat 0.8 returns zero.
    fn lit(x: f64) -> Self {
        <TwoFloat as From<f64>>::from(x)
    }
}

/// Exact rational from an integer pair; panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational equal to the binary value of `x`.
pub fn rat_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Parses `"3"`, `"-1/3"`, `"0.125"`, `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::from(0) } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/3"), Some(rat(1, 3)));
        assert_eq!(parse_rational("-0.125"), Some(rat(-1, 8)));
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(rat_int(250)));
        assert_eq!(parse_rational("7"), Some(rat_int(7)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn rational_rounding_keeps_extra_bits_in_double_double() {
        let third = rat(1, 3);
        let a = f64::from_rational(&third);
        let b = TwoFloat::from_rational(&third);
        assert_eq!(a, 1.0 / 3.0);
        assert_eq!(TwoFloat::lit(0.5).to_f64_lossy(), 0.5);
        assert_eq!(TwoFloat::lit(0.0).ipow(0).to_f64_lossy(), 1.0);
        let err = (b * TwoFloat::lit(3.0) - TwoFloat::lit(1.0)).abs();
        assert!(err < TwoFloat::lit(1e-30), "{err}");
    }
}
