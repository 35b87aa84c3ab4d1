//! Numeric root extraction for reporting pole and zero locations.
//!
//! Multiplicities are split off exactly (squarefree decomposition over the
//! Gaussian rationals), then each squarefree factor is solved with
//! Aberth-Ehrlich iteration in double precision. Every reported residual
//! is an exact evaluation of the input polynomial at the returned point.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{IntPoint, Polynomial};
use crate::scalar::{ratio_to_f64, sqrt_upper, GR};

pub const MAX_PRECISION_BITS: u32 = 52;
pub const DEFAULT_GUARD_BAND: f64 = 1e-9;
const MAX_ITERATIONS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericRoot {
    pub re: f64,
    pub im: f64,
    /// Upper bound on `|q(root)|`, evaluated exactly at the reported point.
    pub residual: f64,
    pub multiplicity: usize,
}

impl NumericRoot {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Yun's squarefree decomposition: `(factor, multiplicity)` pairs with
/// monic, pairwise coprime, squarefree factors of positive degree.
pub fn squarefree_decomposition(q: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    if q.is_zero() {
        return Err(Error::invalid("squarefree decomposition of the zero polynomial"));
    }
    let mut out = Vec::new();
    if q.degree() == Some(0) {
        return Ok(out);
    }
    let dq = q.derivative();
    let a0 = Polynomial::gcd(q, &dq)?;
    let mut b = q.div_exact(&a0)?;
    let mut c = dq.div_exact(&a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = if d.is_zero() { b.monic() } else { Polynomial::gcd(&b, &d)? };
        b = b.div_exact(&a)?;
        c = d.div_exact(&a)?;
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

fn to_f64_coeffs(p: &Polynomial) -> Vec<Complex64> {
    p.coeffs().iter().map(GR::to_complex64).collect()
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut bound = 0.0;
    let az = z.norm();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        bound = bound * az + a.norm();
    }
    (p, dp, bound)
}

fn aberth(c: &[Complex64], precision: u32) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let lead = c[n].norm();
    let radius = (c[0].norm() / lead).powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let tol = 2f64.powi(-(precision as i32));
    let noise = 16.0 * f64::EPSILON;
    for _ in 0..MAX_ITERATIONS {
        let mut done = true;
        for i in 0..n {
            let (p, dp, bound) = horner(c, z[i]);
            if p.norm() <= noise * bound {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * repulsion);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() > tol * (1.0 + z[i].norm()) {
                done = false;
            }
        }
        if done {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        precision,
        iterations: MAX_ITERATIONS,
    })
}

fn residual_at(q: &Polynomial, z: Complex64) -> f64 {
    let Some(exact) = GR::from_complex64(z) else {
        return f64::INFINITY;
    };
    let bound = sqrt_upper(&q.integer_form().norm_sqr_at(&IntPoint::new(&exact)));
    // Round the bound outward so the f64 never understates it.
    let r = ratio_to_f64(&bound);
    r * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
}

/// All roots of `q`, repeated per multiplicity, sorted by modulus then by
/// argument in `[0, 2 pi)`.
pub fn poly_roots_numeric(q: &Polynomial, precision: u32) -> Result<Vec<NumericRoot>> {
    if q.is_zero() {
        return Err(Error::invalid("roots of the zero polynomial"));
    }
    if precision == 0 || precision > MAX_PRECISION_BITS {
        return Err(Error::invalid(format!(
            "precision must be between 1 and {MAX_PRECISION_BITS} bits, got {precision}"
        )));
    }
    let v = q.valuation().unwrap();
    let mut out = Vec::new();
    if v > 0 {
        out.push((Complex64::zero(), v));
    }
    let core = Polynomial::new(q.coeffs()[v..].to_vec());
    for (factor, mult) in squarefree_decomposition(&core)? {
        for z in aberth(&to_f64_coeffs(&factor), precision)? {
            out.push((z, mult));
        }
    }
    let mut roots: Vec<NumericRoot> = out
        .into_iter()
        .flat_map(|(z, mult)| {
            let residual = residual_at(q, z);
            std::iter::repeat_n(
                NumericRoot {
                    re: z.re,
                    im: z.im,
                    residual,
                    multiplicity: mult,
                },
                mult,
            )
        })
        .collect();
    roots.sort_by(|a, b| polar_cmp(a.value(), b.value(), 0.0));
    Ok(roots)
}

fn shifted_arg(z: Complex64, alpha: f64) -> f64 {
    (z.arg() - alpha).rem_euclid(2.0 * PI)
}

fn polar_cmp(a: Complex64, b: Complex64, alpha: f64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| shifted_arg(a, alpha).total_cmp(&shifted_arg(b, alpha)))
}

/// Sort by `(|z|, arg z)` with the argument taken in `[alpha, alpha + 2 pi)`.
///
/// Fails if `alpha` is within `guard` of some root's argument (mod `2 pi`),
/// where the order would flip under tiny perturbations.
pub fn order_roots_polar(roots: &[Complex64], alpha: f64, guard: f64) -> Result<Vec<Complex64>> {
    for z in roots {
        if z.norm() == 0.0 {
            continue;
        }
        let d = shifted_arg(*z, alpha);
        if d.min(2.0 * PI - d) <= guard {
            return Err(Error::GuardBand {
                alpha,
                argument: z.arg(),
            });
        }
    }
    let mut out = roots.to_vec();
    out.sort_by(|a, b| polar_cmp(*a, *b, alpha));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_roots() {
        let r = poly_roots_numeric(&Polynomial::from_ints(&[1, -1]), 52).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].value() - c(1.0, 0.0)).norm() < 1e-15);
        let q = Polynomial::from_reciprocal_roots(&[GR::from_int(2), GR::from_int(3)]).unwrap();
        let r = poly_roots_numeric(&q, 52).unwrap();
        assert!((r[0].value() - c(2.0, 0.0)).norm() < 1e-12);
        assert!((r[1].value() - c(3.0, 0.0)).norm() < 1e-12);
        assert!(r.iter().all(|x| x.residual < 1e-12));
    }

    #[test]
    fn multiplicities_and_zero_roots() {
        // z^2 (z - 1)^3 (z + 2)
        let mut q = Polynomial::from_ints(&[0, 0, 1]);
        for _ in 0..3 {
            q = &q * &Polynomial::from_ints(&[-1, 1]);
        }
        q = &q * &Polynomial::from_ints(&[2, 1]);
        let sf = squarefree_decomposition(&Polynomial::new(q.coeffs()[2..].to_vec())).unwrap();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (Polynomial::from_ints(&[2, 1]), 1));
        assert_eq!(sf[1], (Polynomial::from_ints(&[-1, 1]), 3));
        let r = poly_roots_numeric(&q, 40).unwrap();
        assert_eq!(r.len(), 6);
        assert_eq!(r[0].value(), c(0.0, 0.0));
        assert_eq!(r[1].value(), c(0.0, 0.0));
        for x in &r[2..5] {
            assert!((x.value() - c(1.0, 0.0)).norm() < 1e-12);
            assert_eq!(x.multiplicity, 3);
        }
        assert!((r[5].value() - c(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wilkinson_ten_reports_residuals() {
        let mut q = Polynomial::one();
        for k in 1..=10 {
            q = &q * &Polynomial::from_ints(&[-k, 1]);
        }
        let r = poly_roots_numeric(&q, 52).unwrap();
        assert_eq!(r.len(), 10);
        for (k, x) in r.iter().enumerate() {
            assert!((x.re - (k + 1) as f64).abs() < 1e-6, "{x:?}");
            assert!(x.residual.is_finite());
        }
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z + 1 + 2i)
        let q = &Polynomial::new(vec![-GR::i(), GR::one()])
            * &Polynomial::new(vec![GR::complex(1, 1, 2, 1), GR::one()]);
        let r = poly_roots_numeric(&q, 52).unwrap();
        assert!((r[0].value() - c(0.0, 1.0)).norm() < 1e-13);
        assert!((r[1].value() - c(-1.0, -2.0)).norm() < 1e-13);
    }

    #[test]
    fn precision_bounds() {
        let q = Polynomial::from_ints(&[1, -1]);
        assert!(poly_roots_numeric(&q, 0).is_err());
        assert!(poly_roots_numeric(&q, 53).is_err());
        assert!(poly_roots_numeric(&Polynomial::zero(), 10).is_err());
    }

    #[test]
    fn polar_order_example() {
        let roots = [c(0.0, 1.0), c(2.0, 0.0), c(-1.0, 0.0)];
        let sorted = order_roots_polar(&roots, PI / 4.0, DEFAULT_GUARD_BAND).unwrap();
        assert_eq!(sorted, vec![c(0.0, 1.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(order_roots_polar(&[c(3.0, 1.0)], 0.0, 1e-9).unwrap(), vec![c(3.0, 1.0)]);
        let twice = [c(2.0, 0.5), c(2.0, 0.5)];
        assert_eq!(order_roots_polar(&twice, 1.0, 1e-9).unwrap(), twice.to_vec());
    }

    #[test]
    fn guard_band_violation() {
        let roots = [c(1.0, 1.0)];
        assert!(matches!(
            order_roots_polar(&roots, PI / 4.0, 1e-9),
            Err(Error::GuardBand { .. })
        ));
        assert!(order_roots_polar(&roots, PI / 4.0 + 2.0 * PI, 1e-9).is_err());
    }
}
