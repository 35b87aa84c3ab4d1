//! Exact complex scalars over the rationals.
//!
//! Text form is `a/b+c/d*i` with the real part always present and the
//! imaginary part omitted when it is zero, e.g. `3`, `-1/2`, `0+1*i`,
//! `1/3-2/5*i`. Formatting then parsing is the identity.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

pub type GR = GaussianRational;

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `num/den` on the real axis. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|^2, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Self::new(&self.re / &d, -&self.im / &d))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    /// Exact value of a finite double. `None` for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::real)
    }

    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(Self::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Rational upper bound on |z| within `2^-40`.
    pub fn abs_upper(&self) -> BigRational {
        sqrt_upper(&self.norm_sqr())
    }

    /// Rational lower bound on |z| within `2^-40`.
    pub fn abs_lower(&self) -> BigRational {
        sqrt_lower(&self.norm_sqr())
    }

    /// Split into a Gaussian-integer numerator over a positive integer
    /// denominator: `z = (a + b i) / d`.
    pub fn to_integer_parts(&self) -> (BigInt, BigInt, BigInt) {
        let d = self.re.denom().lcm(self.im.denom());
        let a = self.re.numer() * (&d / self.re.denom());
        let b = self.im.numer() * (&d / self.im.denom());
        (a, b, d)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Fallback for huge numerators and denominators: shift both into range.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        BigRational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        BigRational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Number of fractional bits used by the square-root bounds.
pub const SQRT_SLACK_BITS: usize = 40;

/// Upper bound `u` with `sqrt(x) <= u <= sqrt(x) + 2^-40`. Requires `x >= 0`.
pub fn sqrt_upper(x: &BigRational) -> BigRational {
    let (floor_root, exact) = scaled_isqrt(x);
    let num = if exact { floor_root } else { floor_root + 1u32 };
    BigRational::new(num, BigInt::one() << SQRT_SLACK_BITS)
}

/// Lower bound `l` with `sqrt(x) - 2^-40 <= l <= sqrt(x)`. Requires `x >= 0`.
pub fn sqrt_lower(x: &BigRational) -> BigRational {
    let (floor_root, _) = scaled_isqrt(x);
    BigRational::new(floor_root, BigInt::one() << SQRT_SLACK_BITS)
}

// floor(sqrt(floor(x * 2^80))), and whether x * 2^80 is a perfect square.
fn scaled_isqrt(x: &BigRational) -> (BigInt, bool) {
    assert!(!x.is_negative(), "square root of a negative rational");
    let shifted = x.numer() << (2 * SQRT_SLACK_BITS);
    let (q, r) = shifted.div_rem(x.denom());
    let root = q.sqrt();
    let exact = r.is_zero() && &root * &root == q;
    (root, exact)
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Panics on division by zero, like the rational type it wraps.
impl Div<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            return GaussianRational::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.re)?;
        if !self.im.is_zero() {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}*i", sign, self.im.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(fail("empty"));
        }
        let Some(body) = t.strip_suffix("*i") else {
            return Ok(Self::real(parse_rational(t).ok_or_else(|| fail("bad rational"))?));
        };
        // Split at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (
                parse_rational(&body[..i]).ok_or_else(|| fail("bad real part"))?,
                parse_rational(&body[i..]).ok_or_else(|| fail("bad imaginary part"))?,
            ),
            None => (
                BigRational::zero(),
                parse_rational(body).ok_or_else(|| fail("bad imaginary part"))?,
            ),
        };
        Ok(Self::new(re, im))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    let digits_ok = |p: &str| {
        let p = p.strip_prefix('-').unwrap_or(p);
        !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((n, d)) => {
            if !digits_ok(n) || d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => {
            if !digits_ok(s) {
                return None;
            }
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter that stores a real rational as its exact string.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(s.trim())
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
    }
}

pub fn parse_real(s: &str) -> Result<BigRational> {
    parse_rational(s.trim()).ok_or_else(|| Error::Parse {
        input: s.to_string(),
        reason: "bad rational".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gr(s: &str) -> GR {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_text() {
        assert_eq!(GR::complex(1, 2, 1, 3).to_string(), "1/2+1/3*i");
        assert_eq!(GR::complex(1, 2, -1, 3).to_string(), "1/2-1/3*i");
        assert_eq!(GR::ratio(-6, 4).to_string(), "-3/2");
        assert_eq!(GR::i().to_string(), "0+1*i");
        assert_eq!(GR::zero().to_string(), "0");
        assert_eq!(gr("2/4"), GR::ratio(1, 2));
        assert_eq!(gr("-1/2*i"), GR::complex(0, 1, -1, 2));
        assert_eq!(gr("3-4*i"), GR::complex(3, 1, -4, 1));
        assert_eq!(gr("-3+4/7*i"), GR::complex(-3, 1, 4, 7));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1+*i", "1//2", "1+2i", "--1"] {
            assert!(bad.parse::<GR>().is_err(), "{bad}");
        }
    }

    #[test]
    fn field_ops() {
        let z = GR::complex(1, 1, 1, 1);
        assert_eq!(&z * &z.conj(), GR::from_int(2));
        assert_eq!(&z * &z.inv().unwrap(), GR::one());
        assert_eq!(GR::i().pow(4), GR::one());
        assert!(GR::zero().inv().is_none());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = BigRational::from_integer(2.into());
        let up = sqrt_upper(&two);
        let lo = sqrt_lower(&two);
        assert!(&up * &up >= two);
        assert!(&lo * &lo <= two);
        let gap = up - lo;
        assert!(gap <= BigRational::new(1.into(), BigInt::one() << 40));
        let four = BigRational::from_integer(4.into());
        assert_eq!(sqrt_upper(&four), BigRational::from_integer(2.into()));
    }

    fn arb_gr() -> impl Strategy<Value = GR> {
        (-50i64..50, 1i64..30, -50i64..50, 1i64..30).prop_map(|(a, b, c, d)| GR::complex(a, b, c, d))
    }

    proptest! {
        #[test]
        fn text_round_trip(z in arb_gr()) {
            let s = z.to_string();
            let back: GR = s.parse().unwrap();
            prop_assert_eq!(&back, &z);
            prop_assert_eq!(back.to_string(), s);
        }

        #[test]
        fn integer_parts_reconstruct(z in arb_gr()) {
            let (a, b, d) = z.to_integer_parts();
            let back = GR::new(BigRational::new(a, d.clone()), BigRational::new(b, d));
            prop_assert_eq!(back, z);
        }
    }
}
