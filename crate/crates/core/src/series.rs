use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::GR;

/// Truncated power series `a_0 + a_1 z + ... + a_{N-1} z^{N-1} + O(z^N)`.
///
/// Coefficients past the truncation are unknown, so reading one is an
/// error rather than an implicit zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PowerSeries {
    coeffs: Vec<GR>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<GR>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GR::from_int(c)).collect())
    }

    /// Exact polynomial viewed as a series known to `len` terms.
    pub fn from_polynomial(p: &Polynomial, len: usize) -> Self {
        Self::new((0..len).map(|k| p.coeff(k)).collect())
    }

    pub fn truncation_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[GR] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<&GR> {
        self.coeffs.get(k).ok_or(Error::Truncation {
            needed: k,
            available: self.coeffs.len(),
        })
    }

    /// `a_k` with negative indices read as zero.
    pub fn coeff_signed(&self, k: i64) -> Result<GR> {
        if k < 0 {
            Ok(GR::zero())
        } else {
            self.coeff(k as usize).cloned()
        }
    }

    pub fn require_len(&self, len: usize) -> Result<()> {
        if self.coeffs.len() < len {
            return Err(Error::Truncation {
                needed: len - 1,
                available: self.coeffs.len(),
            });
        }
        Ok(())
    }

    /// Partial sum `S_k(z) = a_0 + ... + a_k z^k`.
    pub fn partial_sum(&self, k: usize) -> Result<Polynomial> {
        self.require_len(k + 1)?;
        Ok(Polynomial::new(self.coeffs[..=k].to_vec()))
    }

    /// First `len` coefficients.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        self.require_len(len)?;
        Ok(Self::new(self.coeffs[..len].to_vec()))
    }

    pub fn with_coeff(&self, k: usize, c: GR) -> Result<Self> {
        self.require_len(k + 1)?;
        let mut coeffs = self.coeffs.clone();
        coeffs[k] = c;
        Ok(Self::new(coeffs))
    }

    /// Product with a polynomial, known to the same truncation.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![GR::zero(); n];
        for (i, b) in p.coeffs().iter().enumerate().take(n) {
            if b.is_zero() {
                continue;
            }
            for (k, a) in self.coeffs[..n - i].iter().enumerate() {
                out[i + k] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn sub_poly(&self, p: &Polynomial) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a - &p.coeff(k))
                .collect(),
        )
    }

    /// Index of the first nonzero known coefficient, `None` when all known
    /// coefficients vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Does `q S - p` vanish through `z^(order - 1)`?
    pub fn order_condition(&self, p: &Polynomial, q: &Polynomial, order: usize) -> Result<bool> {
        self.require_len(order)?;
        let head = self.truncated(order)?;
        let r = head.mul_poly(q).sub_poly(p);
        Ok(r.valuation().is_none() && p.degree().is_none_or(|d| d < order))
    }

    /// Multiplicative inverse; requires `a_0 != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs.first().ok_or(Error::Truncation {
            needed: 0,
            available: 0,
        })?;
        let b0 = a0
            .inv()
            .ok_or(Error::ZeroConstantTerm("series reciprocal"))?;
        let mut b: Vec<GR> = Vec::with_capacity(self.coeffs.len());
        b.push(b0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = GR::zero();
            for i in 1..=n {
                acc += &(&self.coeffs[i] * &b[n - i]);
            }
            b.push(-(&b0 * &acc));
        }
        Ok(Self::new(b))
    }

    /// `S / q` to the same truncation; requires `q(0) != 0`.
    pub fn div_poly(&self, q: &Polynomial) -> Result<Self> {
        let q0_inv = q
            .coeff(0)
            .inv()
            .ok_or(Error::ZeroConstantTerm("series division by polynomial"))?;
        let qc = q.coeffs();
        let mut out: Vec<GR> = Vec::with_capacity(self.coeffs.len());
        for n in 0..self.coeffs.len() {
            let mut acc = self.coeffs[n].clone();
            for i in 1..qc.len().min(n + 1) {
                acc -= &(&qc[i] * &out[n - i]);
            }
            out.push(if q0_inv.is_one() { acc } else { &acc * &q0_inv });
        }
        Ok(Self::new(out))
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::new(Vec::<GR>::deserialize(d)?))
    }
}
