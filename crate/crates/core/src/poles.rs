//! Series with a Padé pole or zero at a prescribed point, and rational
//! witnesses whose approximant poles sit at a chosen point outside the disk.
//!
//! The witness is `f = P + c1 z^(m-1+n) + c2 z^(m+n)` with `deg P = m - 1`.
//! Both Jacobi determinants of `[f; m/n]` are affine in `c2` (it enters the
//! top block exactly once), so each is split as `A(z) + c2 B(z)` and the
//! condition at the target is a single linear equation for `c2`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pade::{hankel_det, jacobi_pair, pade, PadeResult};
use crate::poly::{Polynomial, RationalFunction};
use crate::scalar::GR;
use crate::series::PowerSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Pole,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolePlacementWitness {
    pub kind: Placement,
    pub base: Polynomial,
    pub m: usize,
    pub n: usize,
    pub c1: GR,
    pub c2: GR,
    pub target: GR,
    pub witness: PowerSeries,
}

impl PolePlacementWitness {
    /// `sign * c1 * a_{m-1}^(n-1)`, the Hankel value every witness must carry.
    ///
    /// The leading `(n-1) x (n-1)` block is anti-triangular with `a_{m-1}`
    /// on its anti-diagonal, so `sign = (-1)^((n-1)(n-2)/2)`.
    pub fn expected_hankel(&self) -> GR {
        let lead = self.base.leading().cloned().unwrap_or_default();
        let v = &self.c1 * &lead.pow(self.n as u32 - 1);
        if hankel_sign_negative(self.n) {
            -v
        } else {
            v
        }
    }

    pub fn approximant(&self) -> Result<PadeResult> {
        pade(&self.witness, self.m, self.n)
    }
}

/// Is `(-1)^((n-1)(n-2)/2)` negative? True for `n = 3, 4, 7, 8, ...`.
pub fn hankel_sign_negative(n: usize) -> bool {
    n >= 1 && ((n - 1) * n.saturating_sub(2) / 2) % 2 == 1
}

/// Affine split of one Jacobi determinant in `c2`, with the auxiliary
/// polynomial of the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSplit {
    /// Value at `c2 = 0`.
    pub constant: Polynomial,
    /// Coefficient of `c2`.
    pub slope: Polynomial,
    /// `P_{n-2}` for the denominator, `R_{m-2}` for the numerator.
    pub auxiliary: Polynomial,
    /// `+1` or `-1`: the determinant equals `sign` times the closed form.
    pub sign: GR,
}

fn check_inputs(p: &Polynomial, m: usize, n: usize, c1: &GR) -> Result<GR> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("pole placement needs m >= 1 and n >= 1"));
    }
    if p.degree() != Some(m - 1) {
        return Err(Error::invalid(format!(
            "base polynomial must have degree m - 1 = {}, got {:?}",
            m - 1,
            p.degree()
        )));
    }
    if c1.is_zero() {
        return Err(Error::invalid("c1 must be nonzero"));
    }
    Ok(p.leading().unwrap().clone())
}

/// `P + c1 z^(m-1+n) + c2 z^(m+n)` as a series of length `m + n + 1`.
pub fn assemble_witness(p: &Polynomial, m: usize, n: usize, c1: &GR, c2: &GR) -> PowerSeries {
    let f = &(p + &Polynomial::monomial(c1.clone(), m - 1 + n))
        + &Polynomial::monomial(c2.clone(), m + n);
    PowerSeries::from_polynomial(&f, m + n + 1)
}

fn jacobi_split(p: &Polynomial, m: usize, n: usize, c1: &GR) -> Result<[(Polynomial, Polynomial); 2]> {
    let (p0, q0) = jacobi_pair(&assemble_witness(p, m, n, c1, &GR::zero()), m, n)?;
    let (p1, q1) = jacobi_pair(&assemble_witness(p, m, n, c1, &GR::one()), m, n)?;
    Ok([(q0.clone(), &q1 - &q0), (p0.clone(), &p1 - &p0)])
}

fn z_squared_quotient(num: &Polynomial, c1: &GR) -> Result<Polynomial> {
    let z2 = Polynomial::monomial(c1 * c1, 2);
    num.div_exact(&z2).map_err(|_| {
        Error::Postcondition("closed form residual is not divisible by c1^2 z^2".into())
    })
}

/// Denominator `Q̂ = sign (c1 a^(n-1) - c2 a^(n-1) z - c1^2 z^2 P_{n-2}(z))`.
pub fn denominator_split(p: &Polynomial, m: usize, n: usize, c1: &GR) -> Result<AffineSplit> {
    let lead = check_inputs(p, m, n, c1)?;
    let [(a, b), _] = jacobi_split(p, m, n, c1)?;
    let an = lead.pow(n as u32 - 1);
    let model_slope = Polynomial::monomial(-&an, 1);
    let sign = sign_between(&b, &model_slope)?;
    let aux = z_squared_quotient(
        &(&Polynomial::constant(c1 * &an) - &a.scale(&sign)),
        c1,
    )?;
    Ok(AffineSplit {
        constant: a,
        slope: b,
        auxiliary: aux,
        sign,
    })
}

/// Numerator `P̂ = sign (c1 a^(n-1) P̃ - c2 a^(n-1) z P - c1^2 z^2 R_{m-2}(z))`,
/// with `P̃ = P + c1 z^m` when `n = 1` and `P̃ = P` otherwise.
pub fn numerator_split(p: &Polynomial, m: usize, n: usize, c1: &GR) -> Result<AffineSplit> {
    let lead = check_inputs(p, m, n, c1)?;
    let [_, (a, b)] = jacobi_split(p, m, n, c1)?;
    let an = lead.pow(n as u32 - 1);
    let model_slope = p.shift(1).scale(&-&an);
    let sign = sign_between(&b, &model_slope)?;
    let p_tilde = if n == 1 {
        p + &Polynomial::monomial(c1.clone(), m)
    } else {
        p.clone()
    };
    let aux = z_squared_quotient(&(&p_tilde.scale(&(c1 * &an)) - &a.scale(&sign)), c1)?;
    Ok(AffineSplit {
        constant: a,
        slope: b,
        auxiliary: aux,
        sign,
    })
}

fn sign_between(actual: &Polynomial, model: &Polynomial) -> Result<GR> {
    if actual == model {
        Ok(GR::one())
    } else if *actual == -model {
        Ok(-GR::one())
    } else {
        Err(Error::Postcondition(format!(
            "c2 coefficient {actual} does not match the closed form {model} up to sign"
        )))
    }
}

fn solve_c2(split: &AffineSplit, target: &GR) -> Result<GR> {
    let slope = split.slope.eval(target);
    if slope.is_zero() {
        return Err(Error::invalid("c2 does not enter the determinant at the target"));
    }
    let c2 = -(&split.constant.eval(target) / &slope);
    if c2.is_zero() {
        return Err(Error::DegenerateCoefficient);
    }
    Ok(c2)
}

fn finish(
    kind: Placement,
    p: &Polynomial,
    m: usize,
    n: usize,
    target: &GR,
    c1: &GR,
    c2: GR,
) -> Result<PolePlacementWitness> {
    let w = PolePlacementWitness {
        kind,
        base: p.clone(),
        m,
        n,
        c1: c1.clone(),
        c2: c2.clone(),
        target: target.clone(),
        witness: assemble_witness(p, m, n, c1, &c2),
    };
    let h = hankel_det(&w.witness, m, n)?;
    if h != w.expected_hankel() {
        return Err(Error::Postcondition(format!(
            "Hankel value {h} differs from c1 a^(n-1) = {}",
            w.expected_hankel()
        )));
    }
    let r = w.approximant()?;
    if !r.is_normal() {
        return Err(Error::Postcondition(format!("[f; {m}/{n}] is {}", r.status_label())));
    }
    let vanishing = match kind {
        Placement::Pole => r.denominator.eval(target),
        Placement::Zero => r.numerator.eval(target),
    };
    if !vanishing.is_zero() {
        return Err(Error::Postcondition(format!(
            "approximant {kind:?} polynomial is {vanishing} at {target}, not zero"
        )));
    }
    Ok(w)
}

/// Choose `c2` so that the denominator of `[f; m/n]` vanishes at `target`.
pub fn place_pole(
    p: &Polynomial,
    m: usize,
    n: usize,
    target: &GR,
    c1: &GR,
) -> Result<PolePlacementWitness> {
    if target.is_zero() {
        return Err(Error::invalid("target must be nonzero"));
    }
    let split = denominator_split(p, m, n, c1)?;
    let c2 = solve_c2(&split, target)?;
    finish(Placement::Pole, p, m, n, target, c1, c2)
}

/// Choose `c2` so that the numerator of `[f; m/n]` vanishes at `target`.
pub fn place_zero(
    p: &Polynomial,
    m: usize,
    n: usize,
    target: &GR,
    c1: &GR,
) -> Result<PolePlacementWitness> {
    if target.is_zero() {
        return Err(Error::invalid("target must be nonzero"));
    }
    check_inputs(p, m, n, c1)?;
    if p.eval(target).is_zero() {
        return Err(Error::invalid(format!("base polynomial vanishes at the target {target}")));
    }
    let split = numerator_split(p, m, n, c1)?;
    let c2 = solve_c2(&split, target)?;
    finish(Placement::Zero, p, m, n, target, c1, c2)
}

/// Taylor series of `P / (1 - z/mu)^n` to `trunc` terms, checked to have
/// `[f; m/n]` equal to that rational function with denominator degree `n`.
pub fn poles_outside_disk_witness(
    p: &Polynomial,
    m: usize,
    n: usize,
    mu: &GR,
    trunc: usize,
) -> Result<PowerSeries> {
    if p.degree().is_some_and(|d| d > m) {
        return Err(Error::invalid(format!("deg P must be at most m = {m}")));
    }
    if mu.norm_sqr() <= num_rational::BigRational::one() {
        return Err(Error::invalid("mu must lie outside the closed unit disk"));
    }
    if p.eval(mu).is_zero() {
        return Err(Error::invalid(format!("P vanishes at mu = {mu}")));
    }
    if trunc < m + n + 1 {
        return Err(Error::Truncation {
            needed: m + n,
            available: trunc,
        });
    }
    let q = Polynomial::from_reciprocal_roots(&vec![mu.clone(); n])?;
    let f = PowerSeries::from_polynomial(p, trunc).div_poly(&q)?;
    let r = pade(&f, m, n)?;
    let want = RationalFunction::new(p.clone(), q.clone())?.reduced();
    if !r.exists() || r.numerator != want.num || r.denominator != want.den {
        return Err(Error::Postcondition(format!(
            "[f; {m}/{n}] = {} differs from P/(1 - z/mu)^{n}",
            r.rational()
        )));
    }
    if r.denominator.degree() != Some(n) {
        return Err(Error::Postcondition("reduced denominator lost degree".into()));
    }
    Ok(f)
}
