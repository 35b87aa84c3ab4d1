//! Padé approximants `[S; m/n]` computed two ways: by solving the linear
//! system for the denominator, and from the Jacobi determinant pair.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, kernel_vector, solve, Matrix};
use crate::poly::{Polynomial, RationalFunction};
use crate::scalar::GR;
use crate::series::PowerSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PadeStatus {
    Normal,
    ExistsNonNormal,
    /// `C_{m,n} = 0` but the approximant exists; `t` is the common factor
    /// with `P̂ = t P` and `Q̂ = t Q`.
    ///
    /// In practice `t` is always zero: a reduced pair with `t(0) = 0` has
    /// `deg P < m` and `deg Q < n`, so `(1 + c z) (P, Q)` solves the
    /// linearized conditions for every `c`, the solution space has
    /// dimension at least two, and every maximal minor of the top block
    /// vanishes.
    DegenerateExists { t: Polynomial },
    NotExists,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadeResult {
    pub m: usize,
    pub n: usize,
    /// For `NotExists` this is the reduced candidate pair, which fails
    /// either `Q(0) != 0` or the order condition.
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub c_mn: GR,
    pub c_m1n: GR,
    pub status: PadeStatus,
}

impl PadeResult {
    pub fn exists(&self) -> bool {
        self.status != PadeStatus::NotExists
    }

    pub fn is_normal(&self) -> bool {
        self.status == PadeStatus::Normal
    }

    pub fn rational(&self) -> RationalFunction {
        RationalFunction {
            num: self.numerator.clone(),
            den: self.denominator.clone(),
        }
    }

    pub fn status_label(&self) -> &'static str {
        match self.status {
            PadeStatus::Normal => "normal",
            PadeStatus::ExistsNonNormal => "exists-non-normal",
            PadeStatus::DegenerateExists { .. } => "degenerate",
            PadeStatus::NotExists => "not-exists",
        }
    }
}

fn hankel_matrix(s: &PowerSeries, m: usize, n: usize) -> Result<Matrix> {
    let base = m as i64 - n as i64 + 1;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| s.coeff_signed(base + (i + j) as i64))
                .collect()
        })
        .collect()
}

/// `C_{m,n}`: determinant of the `n x n` matrix with rows
/// `(a_{m-n+1+i}, ..., a_{m+i})`, negative indices read as zero.
pub fn hankel_det(s: &PowerSeries, m: usize, n: usize) -> Result<GR> {
    if n == 0 {
        return Ok(GR::one());
    }
    s.require_len(m + n)?;
    Ok(determinant(&hankel_matrix(s, m, n)?))
}

/// The unreduced Jacobi pair `(P̂, Q̂)` of `(n+1) x (n+1)` determinants,
/// expanded along the polynomial last row.
pub fn jacobi_pair(s: &PowerSeries, m: usize, n: usize) -> Result<(Polynomial, Polynomial)> {
    s.require_len(m + n + 1)?;
    let base = m as i64 - n as i64 + 1;
    let top: Matrix = (0..n)
        .map(|i| {
            (0..=n)
                .map(|j| s.coeff_signed(base + (i + j) as i64))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut p_hat = Polynomial::zero();
    let mut q_hat = Polynomial::zero();
    for j in 0..=n {
        let minor: Matrix = top
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let mut cof = determinant(&minor);
        if cof.is_zero() {
            continue;
        }
        if (n + j) % 2 == 1 {
            cof = -cof;
        }
        let shift = n - j;
        q_hat = &q_hat + &Polynomial::monomial(cof.clone(), shift);
        let k = m as i64 - n as i64 + j as i64;
        if k >= 0 {
            let partial = s.partial_sum(k as usize)?;
            p_hat = &p_hat + &partial.shift(shift).scale(&cof);
        }
    }
    Ok((p_hat, q_hat))
}

fn classify_existing(
    m: usize,
    n: usize,
    numerator: Polynomial,
    denominator: Polynomial,
    c_mn: GR,
    c_m1n: GR,
    degenerate_factor: Polynomial,
) -> PadeResult {
    let status = if c_mn.is_zero() {
        PadeStatus::DegenerateExists {
            t: degenerate_factor,
        }
    } else if c_m1n.is_zero() {
        PadeStatus::ExistsNonNormal
    } else {
        PadeStatus::Normal
    };
    PadeResult {
        m,
        n,
        numerator,
        denominator,
        c_mn,
        c_m1n,
        status,
    }
}

/// Route 1: solve for `q_1..q_n` with `q_0 = 1`, then `P = (Q S) mod z^(m+1)`.
/// Falls back to [`pade_via_jacobi`] when `C_{m,n} = 0`.
pub fn pade_via_system(s: &PowerSeries, m: usize, n: usize) -> Result<PadeResult> {
    s.require_len(m + n + 1)?;
    let c_mn = hankel_det(s, m, n)?;
    if c_mn.is_zero() {
        return pade_via_jacobi(s, m, n);
    }
    let c_m1n = hankel_det(s, m + 1, n)?;
    let mut a = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for r in 0..n {
        let k = (m + 1 + r) as i64;
        a.push(
            (1..=n)
                .map(|j| s.coeff_signed(k - j as i64))
                .collect::<Result<Vec<_>>>()?,
        );
        rhs.push(-s.coeff_signed(k)?);
    }
    let q = solve(&a, &rhs).ok_or_else(|| Error::Postcondition("nonzero Hankel value but singular system".into()))?;
    let mut qc = vec![GR::one()];
    qc.extend(q);
    let den = Polynomial::new(qc);
    let head = s.truncated(m + 1)?;
    let num = Polynomial::new(head.mul_poly(&den).coeffs().to_vec());
    let r = RationalFunction { num, den }.reduced();
    Ok(classify_existing(m, n, r.num, r.den, c_mn, c_m1n, Polynomial::one()))
}

/// Nonzero `(P, Q)` with `deg P <= m`, `deg Q <= n` and `Q S - P = O(z^(m+n+1))`.
fn linearized_kernel(s: &PowerSeries, m: usize, n: usize) -> Result<(Polynomial, Polynomial)> {
    let cols = n + 1 + m + 1;
    let mut rows: Matrix = Vec::with_capacity(m + n + 1);
    for k in 0..=m + n {
        let mut row = vec![GR::zero(); cols];
        for j in 0..=n.min(k) {
            row[j] = s.coeff(k - j)?.clone();
        }
        if k <= m {
            row[n + 1 + k] = -GR::one();
        }
        rows.push(row);
    }
    let x = kernel_vector(&rows, cols).expect("more unknowns than equations");
    let q = Polynomial::new(x[..=n].to_vec());
    let p = Polynomial::new(x[n + 1..].to_vec());
    Ok((p, q))
}

/// Route 2: Jacobi determinants, gcd reduction and full classification.
pub fn pade_via_jacobi(s: &PowerSeries, m: usize, n: usize) -> Result<PadeResult> {
    s.require_len(m + n + 1)?;
    let c_mn = hankel_det(s, m, n)?;
    let c_m1n = hankel_det(s, m + 1, n)?;
    let (p_hat, q_hat) = jacobi_pair(s, m, n)?;
    let (p, q, g) = if q_hat.is_zero() {
        let (p, q) = linearized_kernel(s, m, n)?;
        let g = if p.is_zero() { q.monic() } else { Polynomial::gcd(&p, &q)? };
        (p.div_exact(&g)?, q.div_exact(&g)?, None)
    } else {
        let g = if p_hat.is_zero() { q_hat.monic() } else { Polynomial::gcd(&p_hat, &q_hat)? };
        (p_hat.div_exact(&g)?, q_hat.div_exact(&g)?, Some(g))
    };
    let q0 = q.coeff(0);
    if q0.is_zero() {
        let k = q.leading().unwrap().inv().unwrap();
        return Ok(PadeResult {
            m,
            n,
            numerator: p.scale(&k),
            denominator: q.scale(&k),
            c_mn,
            c_m1n,
            status: PadeStatus::NotExists,
        });
    }
    let k = q0.inv().unwrap();
    let (p, q) = (p.scale(&k), q.scale(&k));
    let t = g.map_or_else(Polynomial::zero, |g| g.scale(&q0));
    if !s.order_condition(&p, &q, m + n + 1)? {
        return Ok(PadeResult {
            m,
            n,
            numerator: p,
            denominator: q,
            c_mn,
            c_m1n,
            status: PadeStatus::NotExists,
        });
    }
    Ok(classify_existing(m, n, p, q, c_mn, c_m1n, t))
}

/// Default route.
pub fn pade(s: &PowerSeries, m: usize, n: usize) -> Result<PadeResult> {
    pade_via_system(s, m, n)
}

/// `[S; m/n]` for all `m <= max_m`, `n <= max_n`, row-major in `m`.
pub fn pade_table(s: &PowerSeries, max_m: usize, max_n: usize) -> Result<Vec<PadeResult>> {
    let mut out = Vec::new();
    for m in 0..=max_m {
        for n in 0..=max_n {
            out.push(pade(s, m, n)?);
        }
    }
    Ok(out)
}

/// Checks `[1/S; n/m] = 1/[S; m/n]` and that `C_{m,n}(S) != 0` iff
/// `C_{n,m}(1/S) != 0`.
pub fn reciprocal_duality_check(s: &PowerSeries, m: usize, n: usize) -> Result<bool> {
    let a0 = s.coeff(0)?;
    if a0.is_zero() {
        return Err(Error::ZeroConstantTerm("reciprocal duality"));
    }
    let direct = pade(s, m, n)?;
    if !direct.exists() {
        return Err(Error::NotExists { m, n });
    }
    let p0 = direct.numerator.coeff(0);
    if p0.is_zero() {
        return Err(Error::invalid("approximant numerator vanishes at the origin"));
    }
    let r = s.reciprocal()?;
    let dual = pade(&r, n, m)?;
    let k = p0.inv().unwrap();
    let pair_ok = dual.exists()
        && dual.numerator == direct.denominator.scale(&k)
        && dual.denominator == direct.numerator.scale(&k);
    let membership_ok = hankel_det(s, m, n)?.is_zero() == hankel_det(&r, n, m)?.is_zero();
    Ok(pair_ok && membership_ok)
}
