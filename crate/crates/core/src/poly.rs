use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::GR;

/// Dense univariate polynomial over the Gaussian rationals.
///
/// Coefficients are stored lowest degree first with no trailing zeros, so
/// the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<GR>,
    valuation: Option<usize>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GR>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let valuation = coeffs.iter().position(|c| !c.is_zero());
        Self { coeffs, valuation }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GR::one())
    }

    pub fn constant(c: GR) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: GR, k: usize) -> Self {
        let mut coeffs = vec![GR::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GR::from_int(c)).collect())
    }

    /// `prod (1 - z / w)` over the given roots.
    pub fn from_reciprocal_roots(roots: &[GR]) -> Result<Self> {
        let mut acc = Self::one();
        for w in roots {
            let inv = w
                .inv()
                .ok_or_else(|| Error::invalid("root at the origin has no (1 - z/w) factor"))?;
            acc = &acc * &Self::new(vec![GR::one(), -inv]);
        }
        Ok(acc)
    }

    pub fn coeffs(&self) -> &[GR] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GR> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero above the degree.
    pub fn coeff(&self, k: usize) -> GR {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.valuation
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&GR> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &GR) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GR::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Keep the terms of degree `<= deg`.
    pub fn truncate(&self, deg: usize) -> Self {
        Self::new(self.coeffs.iter().take(deg + 1).cloned().collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GR::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, z: &GR) -> GR {
        if self.coeffs.len() <= 4 {
            let mut acc = GR::zero();
            for c in self.coeffs.iter().rev() {
                acc = &(&acc * z) + c;
            }
            return acc;
        }
        // Integer Horner avoids a gcd per step on large coefficients.
        self.integer_form().eval(&IntPoint::new(z))
    }

    /// Euclidean division; errors if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::invalid("polynomial division by zero"))?;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        if dd == 0 {
            let k = d.coeffs[0].inv().expect("nonzero constant");
            return Ok((self.scale(&k), Self::zero()));
        }
        // With a = A / alpha and d = D / delta over the Gaussian integers,
        // scale * A = Qp * D + Rp, so r = Rp / (alpha scale) and
        // q = Qp delta / (alpha scale). No denominators until the end.
        let a = self.integer_form();
        let dv = d.integer_form();
        let (quot, rem, scale) = pseudo_div(gauss_vec(&a), &gauss_vec(&dv));
        let inv = GR::new(BigRational::from_integer(scale.0), BigRational::from_integer(scale.1))
            .inv()
            .expect("nonzero leading coefficient")
            .scale(&BigRational::new(BigInt::one(), a.den));
        let qk = inv.scale(&BigRational::from_integer(dv.den.clone()));
        Ok((from_gauss(quot, &qk), from_gauss(rem, &inv)))
    }

    /// Quotient of an exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::invalid("polynomial division is not exact"));
        }
        Ok(q)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        // Primitive remainder sequence over the Gaussian integers; only the
        // final result is brought back to a monic rational polynomial.
        let (mut x, mut y) = (primitive(gauss_vec(&a.integer_form())), primitive(gauss_vec(&b.integer_form())));
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let (_, r, _) = pseudo_div(x, &y);
            x = y;
            y = primitive(r);
        }
        if x.len() == 1 {
            return Ok(Polynomial::one());
        }
        Ok(from_gauss(x, &GR::one()).monic())
    }

    /// `p(c z)`.
    pub fn dilate(&self, c: &GR) -> Self {
        let mut pw = GR::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        Self::new(out)
    }

    pub fn integer_form(&self) -> IntegerPoly {
        IntegerPoly::from_poly(self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let text = if c.is_real() {
                c.to_string()
            } else {
                format!("({c})")
            };
            match k {
                0 => write!(f, "{text}")?,
                1 => write!(f, "{text}*z")?,
                _ => write!(f, "{text}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{self}]")
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::new(Vec::<GR>::deserialize(d)?))
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![GR::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Rational function `num / den`, kept as given until `reduced` is called.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalFunction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("rational function with zero denominator"));
        }
        Ok(Self { num, den })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// Coprime form, normalized so that `den(0) = 1` when `den(0) != 0` and
    /// `den` is monic otherwise.
    pub fn reduced(&self) -> Self {
        let g = if self.num.is_zero() {
            self.den.clone()
        } else {
            Polynomial::gcd(&self.num, &self.den).expect("denominator is nonzero")
        };
        let num = self.num.div_exact(&g).expect("gcd divides numerator");
        let den = self.den.div_exact(&g).expect("gcd divides denominator");
        let d0 = den.coeff(0);
        let k = if d0.is_zero() {
            den.leading().unwrap().inv().unwrap()
        } else {
            d0.inv().unwrap()
        };
        Self {
            num: num.scale(&k),
            den: den.scale(&k),
        }
    }

    /// Equality as functions: `a/b == c/d` iff `a d == b c`.
    pub fn same_function(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn eval(&self, z: &GR) -> Result<GR> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::PoleAtSample {
                point: z.to_string(),
            });
        }
        Ok(&self.num.eval(z) / &d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// A sample point split into Gaussian-integer numerator and integer
/// denominator, `(x + y i) / d`.
#[derive(Clone, Debug)]
pub struct IntPoint {
    pub x: BigInt,
    pub y: BigInt,
    pub d: BigInt,
}

impl IntPoint {
    pub fn new(z: &GR) -> Self {
        let (x, y, d) = z.to_integer_parts();
        Self { x, y, d }
    }
}

/// Polynomial `(sum (re_k + im_k i) z^k) / den` with integer data.
///
/// Evaluation at an [`IntPoint`] uses homogenized Horner in pure integer
/// arithmetic, which avoids a gcd per operation.
#[derive(Clone, Debug)]
pub struct IntegerPoly {
    re: Vec<BigInt>,
    im: Vec<BigInt>,
    den: BigInt,
}

type Gauss = (BigInt, BigInt);

fn gauss_vec(p: &IntegerPoly) -> Vec<Gauss> {
    p.re.iter().cloned().zip(p.im.iter().cloned()).collect()
}

fn from_gauss(v: Vec<Gauss>, k: &GR) -> Polynomial {
    Polynomial::new(
        v.into_iter()
            .map(|(x, y)| &GR::new(BigRational::from_integer(x), BigRational::from_integer(y)) * k)
            .collect(),
    )
}

fn gmul(x: &Gauss, y: &Gauss) -> Gauss {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn trim_gauss(mut v: Vec<Gauss>) -> Vec<Gauss> {
    while v.last().is_some_and(|c| c.0.is_zero() && c.1.is_zero()) {
        v.pop();
    }
    v
}

/// Divide out the rational-integer content.
fn primitive(v: Vec<Gauss>) -> Vec<Gauss> {
    let v = trim_gauss(v);
    let mut g = BigInt::zero();
    for (x, y) in &v {
        g = num_integer::Integer::gcd(&g, x);
        g = num_integer::Integer::gcd(&g, y);
        if g.is_one() {
            return v;
        }
    }
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|(x, y)| (x / &g, y / &g)).collect()
}

/// Returns `(Qp, Rp, scale)` with `scale * a = Qp * d + Rp`, `deg Rp < deg d`.
fn pseudo_div(a: Vec<Gauss>, d: &[Gauss]) -> (Vec<Gauss>, Vec<Gauss>, Gauss) {
    let mut rem = trim_gauss(a);
    let dd = d.len() - 1;
    let lc = d[dd].clone();
    let one = (BigInt::one(), BigInt::zero());
    if rem.len() <= dd {
        return (Vec::new(), rem, one);
    }
    let mut quot = vec![(BigInt::zero(), BigInt::zero()); rem.len() - dd];
    let mut scale = one;
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.0.is_zero() && c.1.is_zero() {
            continue;
        }
        for x in rem.iter_mut().chain(quot.iter_mut()) {
            *x = gmul(x, &lc);
        }
        scale = gmul(&scale, &lc);
        for (i, di) in d.iter().enumerate() {
            let t = gmul(&c, di);
            rem[k + i].0 -= t.0;
            rem[k + i].1 -= t.1;
        }
        quot[k] = c;
    }
    rem.truncate(dd);
    (quot, trim_gauss(rem), scale)
}

impl IntegerPoly {
    pub fn from_poly(p: &Polynomial) -> Self {
        let mut den = BigInt::one();
        for c in p.coeffs() {
            den = num_integer::lcm(den, c.re().denom().clone());
            den = num_integer::lcm(den, c.im().denom().clone());
        }
        let scale = |r: &BigRational| r.numer() * (&den / r.denom());
        Self {
            re: p.coeffs().iter().map(|c| scale(c.re())).collect(),
            im: p.coeffs().iter().map(|c| scale(c.im())).collect(),
            den,
        }
    }

    /// Returns `(a, b, e)` with `p(z) = (a + b i) / e`, `e > 0`.
    pub fn eval_parts(&self, z: &IntPoint) -> (BigInt, BigInt, BigInt) {
        let n = self.re.len();
        if n == 0 {
            return (BigInt::zero(), BigInt::zero(), BigInt::one());
        }
        let mut a = self.re[n - 1].clone();
        let mut b = self.im[n - 1].clone();
        let mut dpow = BigInt::one();
        for k in (0..n - 1).rev() {
            dpow *= &z.d;
            let na = &a * &z.x - &b * &z.y + &self.re[k] * &dpow;
            let nb = &a * &z.y + &b * &z.x + &self.im[k] * &dpow;
            a = na;
            b = nb;
        }
        (a, b, &self.den * dpow)
    }

    pub fn eval(&self, z: &IntPoint) -> GR {
        let (a, b, e) = self.eval_parts(z);
        GR::new(BigRational::new(a, e.clone()), BigRational::new(b, e))
    }

    pub fn norm_sqr_at(&self, z: &IntPoint) -> BigRational {
        let (a, b, e) = self.eval_parts(z);
        BigRational::new(&a * &a + &b * &b, &e * &e)
    }
}
