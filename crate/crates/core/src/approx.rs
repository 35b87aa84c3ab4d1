//! Constrained polynomial approximation on sample clouds.
//!
//! Given samples on a compact set `K` outside the closed unit disk with
//! target values, and samples on a disk `L` of radius `r < 1`, find
//! `P = z^p G(z)` that is within `eps` of the targets on `K` and within
//! `eps` of zero on `L`, and that avoids prescribed values at given points.
//!
//! The fit is least squares in double precision, in an orthonormal basis
//! built by Arnoldi on the weighted points (the well-conditioned
//! alternative to a Vandermonde matrix). The basis polynomials are then
//! rebuilt in fixed-point big-integer arithmetic so the result has exact
//! dyadic coefficients, and every bound is re-checked in exact arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{IntPoint, Polynomial, RationalFunction};
use crate::scalar::{rational_str, ratio_to_f64, sqrt_lower, sqrt_upper, GR};

/// Sampled stand-in for a compact set outside the closed unit disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactSetSpec {
    pub samples: Vec<GR>,
    #[serde(with = "rational_str")]
    pub margin: BigRational,
    #[serde(default)]
    pub excluded: Vec<GR>,
}

impl CompactSetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::invalid("compact set has no samples"));
        }
        if !self.margin.is_positive() {
            return Err(Error::invalid("compact set margin must be positive"));
        }
        let one = BigRational::one();
        let margin_sq = &self.margin * &self.margin;
        for z in &self.samples {
            if z.norm_sqr() < one {
                return Err(Error::invalid(format!("sample {z} lies inside the unit disk")));
            }
            for w in &self.excluded {
                if (z - w).norm_sqr() < margin_sq {
                    return Err(Error::invalid(format!(
                        "sample {z} is closer than the margin to excluded point {w}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Sampled stand-in for a closed disk `|z| <= r` with `r < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSampleSpec {
    pub samples: Vec<GR>,
    #[serde(with = "rational_str")]
    pub radius: BigRational,
}

impl DiskSampleSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.radius.is_positive() || self.radius >= BigRational::one() {
            return Err(Error::invalid("disk radius must lie in (0, 1)"));
        }
        let r2 = &self.radius * &self.radius;
        if let Some(z) = self.samples.iter().find(|z| z.norm_sqr() > r2) {
            return Err(Error::invalid(format!("disk sample {z} lies outside radius {}", self.radius)));
        }
        Ok(())
    }

    /// Boundary circle plus the origin; by the maximum principle the
    /// boundary carries the sup of anything analytic on the disk.
    pub fn on_circle(radius: BigRational, count: usize) -> Self {
        let mut samples = vec![GR::zero()];
        samples.extend(circle_samples(&GR::zero(), &radius, count));
        Self { samples, radius }
    }
}

/// `P(point)` must avoid every value in `forbidden`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConstraint {
    pub point: GR,
    pub forbidden: Vec<GR>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxTask {
    pub target: RationalFunction,
    pub k: CompactSetSpec,
    pub l: DiskSampleSpec,
    #[serde(with = "rational_str")]
    pub epsilon: BigRational,
    pub valuation_floor: usize,
    pub point_constraints: Vec<PointConstraint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Largest degree of `G` tried before giving up.
    pub degree_cap: usize,
    /// Constraint-fixing monomials are at most `scale * eps` on the samples.
    #[serde(with = "rational_str")]
    pub perturbation_scale: BigRational,
    pub refinement_passes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            degree_cap: 64,
            perturbation_scale: BigRational::new(1.into(), 1024.into()),
            refinement_passes: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutput {
    pub poly: Polynomial,
    /// Degree of the fitted factor `G` (before any constraint monomial).
    pub fit_degree: usize,
    /// Upper bounds on the sampled errors.
    pub err_k: BigRational,
    pub err_l: BigRational,
    /// Coefficient of the monomial added to satisfy point constraints.
    pub perturbation: Option<GR>,
}

/// Rational points on `|z - center| = radius` near `count` equally spaced
/// angles, built from Pythagorean triples so every point is exact.
pub fn circle_samples(center: &GR, radius: &BigRational, count: usize) -> Vec<GR> {
    if count == 0 {
        return Vec::new();
    }
    // 1105 = 5 * 13 * 17 has 108 representations as a^2 + b^2 = 1105^2;
    // 32045 adds the prime 29 for 324.
    let m: i64 = if count <= 27 { 1105 } else { 32045 };
    let mut units: Vec<(f64, i64, i64)> = Vec::new();
    for a in -m..=m {
        let b2 = m * m - a * a;
        let b = (b2 as f64).sqrt().round() as i64;
        if b * b == b2 {
            units.push(((b as f64).atan2(a as f64), a, b));
            if b != 0 {
                units.push(((-b as f64).atan2(a as f64), a, -b));
            }
        }
    }
    let mut out: Vec<GR> = Vec::with_capacity(count);
    let mut used = vec![false; units.len()];
    for j in 0..count {
        let theta = std::f64::consts::PI * (2.0 * j as f64 / count as f64) - std::f64::consts::PI;
        let dist = |phi: f64| {
            let d = (phi - theta).rem_euclid(2.0 * std::f64::consts::PI);
            d.min(2.0 * std::f64::consts::PI - d)
        };
        let best = (0..units.len())
            .filter(|&i| !used[i])
            .min_by(|&x, &y| dist(units[x].0).total_cmp(&dist(units[y].0)))
            .expect("enough lattice points on the circle");
        used[best] = true;
        let (_, a, b) = units[best];
        let unit = GR::complex(a, m, b, m);
        out.push(center + &unit.scale(radius));
    }
    out
}

/// Upper bound on `max |f(z)|` over the points, within `2^-40` of the
/// exact maximum.
pub fn sup_norm_on_samples(f: &RationalFunction, pts: &[GR]) -> Result<BigRational> {
    let num = f.num.integer_form();
    let den = f.den.integer_form();
    let mut best = BigRational::zero();
    for z in pts {
        let ip = IntPoint::new(z);
        let d = den.norm_sqr_at(&ip);
        if d.is_zero() {
            return Err(Error::PoleAtSample { point: z.to_string() });
        }
        let v = num.norm_sqr_at(&ip) / d;
        if v > best {
            best = v;
        }
    }
    Ok(sqrt_upper(&best))
}

/// Lower bound on `min |z - w|` over all pairs.
pub fn min_distance_lower(ws: &[GR], pts: &[GR]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for w in ws {
        for z in pts {
            let d = (z - w).norm_sqr();
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
    }
    best.map(|d| sqrt_lower(&d))
}

/// Lower bound on `min |p(z)|` over the points.
pub fn min_abs_lower(p: &Polynomial, pts: &[GR]) -> Option<BigRational> {
    let ip = p.integer_form();
    pts.iter()
        .map(|z| ip.norm_sqr_at(&IntPoint::new(z)))
        .min()
        .map(|d| sqrt_lower(&d))
}

/// Largest power of two `<= x`, for positive `x`.
pub fn floor_pow2(x: &BigRational) -> BigRational {
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow = |e: i64| {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    while &pow(e) > x {
        e -= 1;
    }
    while &pow(e + 1) <= x {
        e += 1;
    }
    pow(e)
}

fn pow2_at_least(x: &BigRational) -> (BigRational, u32) {
    let mut e = 0u32;
    let mut r = BigRational::one();
    while &r < x {
        r = &r * BigRational::from_integer(2.into());
        e += 1;
    }
    (r, e)
}

fn to_fix(x: f64, s: u32) -> BigInt {
    let r = BigRational::from_float(x).unwrap_or_default();
    (r * BigRational::from_integer(BigInt::one() << s as usize)).floor().to_integer()
}

type Fix = (BigInt, BigInt);

fn fix_of(z: Complex64, s: u32) -> Fix {
    (to_fix(z.re, s), to_fix(z.im, s))
}

fn fix_mul(a: &Fix, b: &Fix, s: u32) -> Fix {
    let re = (&a.0 * &b.0 - &a.1 * &b.1) >> s as usize;
    let im = (&a.0 * &b.1 + &a.1 * &b.0) >> s as usize;
    (re, im)
}

fn fix_poly_axpy(acc: &mut Vec<Fix>, c: &Fix, p: &[Fix], s: u32) {
    if acc.len() < p.len() {
        acc.resize(p.len(), (BigInt::zero(), BigInt::zero()));
    }
    for (a, x) in acc.iter_mut().zip(p) {
        let t = fix_mul(c, x, s);
        a.0 += t.0;
        a.1 += t.1;
    }
}

/// Everything about the sample geometry that does not depend on targets.
struct Basis {
    /// Orthonormal columns, `q[k][i]`.
    q: Vec<Vec<Complex64>>,
    /// Fixed-point monomial coefficients (in `u = z / R`) of the basis
    /// polynomials, scale `2^s`.
    phi: Vec<Vec<Fix>>,
    s: u32,
    /// Row weights are `2^e u^p`.
    e: i32,
    r: BigRational,
    /// Exact `u_i^p` per sample.
    u_pow: Vec<GR>,
    u_exact: Vec<IntPoint>,
}

impl Basis {
    fn build(points: &[GR], p: usize, max_degree: usize, eps: &BigRational) -> Self {
        let mut max_abs = BigRational::one();
        for z in points {
            let a = z.abs_upper();
            if a > max_abs {
                max_abs = a;
            }
        }
        let (r, _) = pow2_at_least(&max_abs);
        let r_gr = GR::real(r.clone());
        let u_gr: Vec<GR> = points.iter().map(|z| z / &r_gr).collect();
        let u: Vec<Complex64> = u_gr.iter().map(GR::to_complex64).collect();
        let max_u = u.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let e = (-(p as f64) * max_u.log2()).floor() as i32;
        let w: Vec<Complex64> = u
            .iter()
            .map(|z| {
                if z.norm() == 0.0 {
                    return if p == 0 { Complex64::new(2f64.powi(e), 0.0) } else { Complex64::zero() };
                }
                let mag = (e as f64 + p as f64 * z.norm().log2()).exp2();
                Complex64::from_polar(mag, p as f64 * z.arg())
            })
            .collect();
        let m = points.len();
        let dmax = max_degree.min(m.saturating_sub(1));
        let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let h00 = norm(&w);
        let mut q = vec![w.iter().map(|x| x / h00).collect::<Vec<_>>()];
        let mut h: Vec<Vec<f64>> = Vec::new();
        let mut hc: Vec<Vec<Complex64>> = Vec::new();
        for k in 0..dmax {
            let mut v: Vec<Complex64> = (0..m).map(|i| u[i] * q[k][i]).collect();
            let scale = norm(&v);
            let mut col = vec![Complex64::zero(); k + 1];
            for _pass in 0..2 {
                for j in 0..=k {
                    let c: Complex64 = (0..m).map(|i| q[j][i].conj() * v[i]).sum();
                    col[j] += c;
                    for i in 0..m {
                        v[i] -= c * q[j][i];
                    }
                }
            }
            let sub = norm(&v);
            if !(sub > 1e-13 * scale) || !sub.is_finite() {
                break;
            }
            q.push(v.iter().map(|x| x / sub).collect());
            hc.push(col);
            h.push(vec![sub]);
        }
        // Fixed-point precision: enough for eps, plus the amplification of
        // rounding by the reciprocal subdiagonal entries.
        let eps_bits = (eps.denom().bits() as i64 - eps.numer().bits() as i64).max(0) as u32;
        let amp: f64 = h.iter().map(|x| (1.0 / x[0]).log2().max(0.0)).sum::<f64>()
            + (1.0 / h00).log2().max(0.0);
        let s = 96 + eps_bits + amp.ceil() as u32 + 2 * (dmax as f64 + 1.0).log2().ceil() as u32;
        let mut phi: Vec<Vec<Fix>> = vec![vec![fix_of(Complex64::new(1.0 / h00, 0.0), s)]];
        for k in 0..hc.len() {
            let mut next: Vec<Fix> = Vec::with_capacity(k + 2);
            next.push((BigInt::zero(), BigInt::zero()));
            next.extend(phi[k].iter().cloned());
            for (j, c) in hc[k].iter().enumerate() {
                fix_poly_axpy(&mut next, &fix_of(-*c, s), &phi[j], s);
            }
            let inv = fix_of(Complex64::new(1.0 / h[k][0], 0.0), s);
            let next = next.iter().map(|x| fix_mul(x, &inv, s)).collect();
            phi.push(next);
        }
        let u_pow = u_gr.iter().map(|z| z.pow(p as u32)).collect();
        let u_exact = u_gr.iter().map(IntPoint::new).collect();
        Self { q, phi, s, e, r, u_pow, u_exact }
    }

    fn max_degree(&self) -> usize {
        self.q.len() - 1
    }

    fn project(&self, t: &[Complex64], d: usize) -> Vec<Complex64> {
        (0..=d)
            .map(|k| self.q[k].iter().zip(t).map(|(qi, ti)| qi.conj() * ti).sum())
            .collect()
    }

    /// `G` in fixed point from basis coefficients.
    fn combine(&self, c: &[Complex64]) -> Vec<Fix> {
        let mut g: Vec<Fix> = Vec::new();
        for (k, ck) in c.iter().enumerate() {
            fix_poly_axpy(&mut g, &fix_of(*ck, self.s), &self.phi[k], self.s);
        }
        g
    }

    /// Exact `P(z) = u^p 2^e G(u)` as a polynomial in `z`.
    fn to_poly(&self, g: &[Fix], p: usize) -> Polynomial {
        let denom_shift = self.s as i64 - self.e as i64;
        let scale = |x: &BigInt| {
            if denom_shift >= 0 {
                BigRational::new(x.clone(), BigInt::one() << denom_shift as usize)
            } else {
                BigRational::from_integer(x << (-denom_shift) as usize)
            }
        };
        let mut coeffs = vec![GR::zero(); p];
        let mut rpow = self.r.pow(p as i32);
        for (re, im) in g {
            coeffs.push(GR::new(scale(re) / &rpow, scale(im) / &rpow));
            rpow = &rpow * &self.r;
        }
        Polynomial::new(coeffs)
    }

    /// Exact `G`-part values `2^e G(u_i) u_i^p` at every sample.
    fn eval_exact(&self, poly: &Polynomial, p: usize) -> Vec<GR> {
        // Re-express P(z) in u: coefficient of u^k is c_k R^k.
        let mut rpow = self.r.pow(p as i32);
        let g = Polynomial::new(
            poly.coeffs()
                .iter()
                .skip(p)
                .map(|c| {
                    let v = c.scale(&rpow);
                    rpow = &rpow * &self.r;
                    v
                })
                .collect(),
        );
        let ig = g.integer_form();
        self.u_exact
            .iter()
            .zip(&self.u_pow)
            .map(|(u, up)| &ig.eval(u) * up)
            .collect()
    }
}

struct Errors {
    k_sq: BigRational,
    l_sq: BigRational,
    residual: Vec<GR>,
}

fn exact_errors(values: &[GR], targets: &[GR], nk: usize) -> Errors {
    let mut k_sq = BigRational::zero();
    let mut l_sq = BigRational::zero();
    let mut residual = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let r = if i < nk { &targets[i] - v } else { -v };
        let n = r.norm_sqr();
        if i < nk {
            if n > k_sq {
                k_sq = n;
            }
        } else if n > l_sq {
            l_sq = n;
        }
        residual.push(r);
    }
    Errors { k_sq, l_sq, residual }
}

fn violates(p: &Polynomial, constraints: &[PointConstraint]) -> bool {
    constraints.iter().any(|c| {
        let v = p.eval(&c.point);
        c.forbidden.contains(&v)
    })
}

/// Core oracle on explicit samples. `k_targets[i]` is the target at
/// `k_points[i]`; the target on `l_points` is zero.
pub fn approx_on_samples(
    k_points: &[GR],
    k_targets: &[GR],
    l_points: &[GR],
    eps: &BigRational,
    p: usize,
    constraints: &[PointConstraint],
    cfg: &OracleConfig,
) -> Result<OracleOutput> {
    if !eps.is_positive() {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if k_points.len() != k_targets.len() {
        return Err(Error::invalid("one target value per compact-set sample"));
    }
    let nk = k_points.len();
    let points: Vec<GR> = k_points.iter().chain(l_points).cloned().collect();
    if points.is_empty() {
        return Err(Error::invalid("no samples"));
    }
    let mut targets_exact: Vec<GR> = k_targets.to_vec();
    targets_exact.resize(points.len(), GR::zero());
    let targets: Vec<Complex64> = targets_exact.iter().map(GR::to_complex64).collect();

    let basis = Basis::build(&points, p, cfg.degree_cap, eps);
    let half = eps / BigRational::from_integer(2.into());
    let half_sq = &half * &half;
    let half_f = ratio_to_f64(&half);

    // Screen degrees in f64, then confirm each candidate exactly.
    let c_all = basis.project(&targets, basis.max_degree());
    let mut resid: Vec<Complex64> = targets.clone();
    let mut best: (BigRational, BigRational) = (BigRational::zero(), BigRational::zero());
    let mut best_total: Option<BigRational> = None;
    for d in 0..=basis.max_degree() {
        for i in 0..resid.len() {
            resid[i] -= c_all[d] * basis.q[d][i];
        }
        let ek = resid[..nk].iter().map(|x| x.norm()).fold(0.0, f64::max);
        let el = resid[nk..].iter().map(|x| x.norm()).fold(0.0, f64::max);
        if ek > 0.9 * half_f || el > 0.9 * half_f {
            continue;
        }
        let mut coeffs = c_all[..=d].to_vec();
        let mut poly = basis.to_poly(&basis.combine(&coeffs), p);
        let mut errs = exact_errors(&basis.eval_exact(&poly, p), &targets_exact, nk);
        for _ in 0..cfg.refinement_passes {
            if errs.k_sq <= half_sq && errs.l_sq <= half_sq {
                break;
            }
            let r: Vec<Complex64> = errs.residual.iter().map(GR::to_complex64).collect();
            let dc = basis.project(&r, d);
            for (c, x) in coeffs.iter_mut().zip(dc) {
                *c += x;
            }
            poly = basis.to_poly(&basis.combine(&coeffs), p);
            errs = exact_errors(&basis.eval_exact(&poly, p), &targets_exact, nk);
        }
        let total = errs.k_sq.clone().max(errs.l_sq.clone());
        if best_total.as_ref().is_none_or(|b| &total < b) {
            best = (errs.k_sq.clone(), errs.l_sq.clone());
            best_total = Some(total);
        }
        if errs.k_sq > half_sq || errs.l_sq > half_sq {
            continue;
        }
        return finish_with_constraints(poly, d, p, &points, &targets_exact, nk, eps, constraints, cfg);
    }
    if best_total.is_none() {
        // Nothing passed screening; report the exact error of the top degree.
        let poly = basis.to_poly(&basis.combine(&c_all), p);
        let errs = exact_errors(&basis.eval_exact(&poly, p), &targets_exact, nk);
        best = (errs.k_sq, errs.l_sq);
    }
    Err(Error::EscalationFailed {
        cap: basis.max_degree(),
        epsilon: eps.to_string(),
        best_k: format!("{:.3e}", ratio_to_f64(&sqrt_upper(&best.0))),
        best_l: format!("{:.3e}", ratio_to_f64(&sqrt_upper(&best.1))),
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_with_constraints(
    poly: Polynomial,
    d: usize,
    p: usize,
    points: &[GR],
    targets: &[GR],
    nk: usize,
    eps: &BigRational,
    constraints: &[PointConstraint],
    cfg: &OracleConfig,
) -> Result<OracleOutput> {
    let eps_sq = eps * eps;
    let check = |q: &Polynomial| -> (BigRational, BigRational) {
        let iq = q.integer_form();
        let vals: Vec<GR> = points.iter().map(|z| iq.eval(&IntPoint::new(z))).collect();
        let e = exact_errors(&vals, targets, nk);
        (e.k_sq, e.l_sq)
    };
    if !violates(&poly, constraints) {
        let (k_sq, l_sq) = check(&poly);
        return Ok(OracleOutput {
            poly,
            fit_degree: d,
            err_k: sqrt_upper(&k_sq),
            err_l: sqrt_upper(&l_sq),
            perturbation: None,
        });
    }
    // Add c z^N with |c| max|z|^N <= scale * eps; each constraint rules out
    // at most one c per forbidden value, so enough halvings always succeed.
    let n = p + d + 1;
    let mut max_abs = BigRational::one();
    for z in points.iter().chain(constraints.iter().map(|c| &c.point)) {
        let a = z.abs_upper();
        if a > max_abs {
            max_abs = a;
        }
    }
    let (r, _) = pow2_at_least(&max_abs);
    let mut c = floor_pow2(&(&cfg.perturbation_scale * eps / r.pow(n as i32)));
    let tries = 1 + constraints.iter().map(|k| k.forbidden.len()).sum::<usize>();
    for _ in 0..=tries {
        let cand = &poly + &Polynomial::monomial(GR::real(c.clone()), n);
        if !violates(&cand, constraints) {
            let (k_sq, l_sq) = check(&cand);
            if k_sq > eps_sq || l_sq > eps_sq {
                return Err(Error::Postcondition("constraint monomial broke the tolerance".into()));
            }
            return Ok(OracleOutput {
                poly: cand,
                fit_degree: d,
                err_k: sqrt_upper(&k_sq),
                err_l: sqrt_upper(&l_sq),
                perturbation: Some(GR::real(c)),
            });
        }
        c /= BigRational::from_integer(2.into());
    }
    Err(Error::Postcondition("could not satisfy point constraints".into()))
}

/// Evaluate the task target at the compact-set samples and run the oracle.
pub fn approx_with_valuation_report(task: &ApproxTask, cfg: &OracleConfig) -> Result<OracleOutput> {
    task.k.validate()?;
    task.l.validate()?;
    if task.valuation_floor < 1 {
        return Err(Error::invalid("valuation floor must be at least 1"));
    }
    let targets = task
        .k
        .samples
        .iter()
        .map(|z| task.target.eval(z))
        .collect::<Result<Vec<_>>>()?;
    approx_on_samples(
        &task.k.samples,
        &targets,
        &task.l.samples,
        &task.epsilon,
        task.valuation_floor,
        &task.point_constraints,
        cfg,
    )
}

pub fn approx_with_valuation(task: &ApproxTask) -> Result<Polynomial> {
    approx_with_valuation_report(task, &OracleConfig::default()).map(|o| o.poly)
}

/// `f64` view of a rational bound, for reporting.
pub fn bound_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn k_circle(center: i64, count: usize) -> CompactSetSpec {
        CompactSetSpec {
            samples: circle_samples(&GR::from_int(center), &rat(1, 4), count),
            margin: rat(1, 2),
            excluded: vec![GR::one()],
        }
    }

    #[test]
    fn circle_points_are_exact() {
        let pts = circle_samples(&GR::from_int(2), &rat(1, 4), 24);
        assert_eq!(pts.len(), 24);
        for z in &pts {
            assert_eq!((z - &GR::from_int(2)).norm_sqr(), rat(1, 16));
        }
        let many = circle_samples(&GR::zero(), &rat(1, 2), 64);
        let mut uniq = many.clone();
        uniq.sort_by_key(|z| z.to_string());
        uniq.dedup();
        assert_eq!(uniq.len(), 64);
    }

    #[test]
    fn sup_norm_examples() {
        let z = RationalFunction::polynomial(Polynomial::from_ints(&[0, 1]));
        let s = sup_norm_on_samples(&z, &[GR::one(), GR::complex(0, 1, 2, 1)]).unwrap();
        assert_eq!(s, rat(2, 1));
        let f = RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[1, -1])).unwrap();
        assert_eq!(sup_norm_on_samples(&f, &[GR::from_int(2)]).unwrap(), rat(1, 1));
        assert!(sup_norm_on_samples(&f, &[GR::one()]).is_err());
        // |1 + i| / |1 - i/3| = sqrt(2) / sqrt(10/9) = sqrt(9/5)
        let g = RationalFunction::new(
            Polynomial::from_ints(&[1, 1]),
            Polynomial::new(vec![GR::one(), GR::ratio(-1, 3)]),
        )
        .unwrap();
        let s = sup_norm_on_samples(&g, &[GR::i()]).unwrap();
        assert!(&s * &s >= rat(9, 5));
        let slack = BigRational::new(1.into(), BigInt::one() << 40);
        assert!(&(&s - &slack) * &(&s - &slack) <= rat(9, 5));
    }

    #[test]
    fn zero_target_gets_constraint_monomial() {
        let task = ApproxTask {
            target: RationalFunction::polynomial(Polynomial::zero()),
            k: k_circle(2, 8),
            l: DiskSampleSpec::on_circle(rat(1, 2), 8),
            epsilon: rat(1, 10),
            valuation_floor: 3,
            point_constraints: vec![PointConstraint {
                point: GR::one(),
                forbidden: vec![GR::zero(), GR::from_int(5)],
            }],
        };
        let p = approx_with_valuation(&task).unwrap();
        assert_eq!(p.degree(), Some(4));
        assert_eq!(p.valuation(), Some(4));
    }

    #[test]
    fn single_point_fit() {
        let task = ApproxTask {
            target: RationalFunction::polynomial(Polynomial::one()),
            k: CompactSetSpec {
                samples: vec![GR::from_int(2)],
                margin: rat(1, 2),
                excluded: vec![],
            },
            l: DiskSampleSpec {
                samples: vec![GR::zero()],
                radius: rat(1, 2),
            },
            epsilon: rat(1, 10),
            valuation_floor: 1,
            point_constraints: vec![],
        };
        let p = approx_with_valuation(&task).unwrap();
        assert!(p.valuation().unwrap() >= 1);
        let err = (&p.eval(&GR::from_int(2)) - &GR::one()).norm_sqr();
        assert!(err <= rat(1, 100));
    }

    #[test]
    fn fits_constant_near_two_with_high_valuation() {
        let k = k_circle(2, 24);
        let l = DiskSampleSpec::on_circle(rat(1, 2), 16);
        let targets = vec![GR::one(); k.samples.len()];
        let eps = rat(1, 1000);
        for p in [1usize, 10, 40] {
            let out = approx_on_samples(&k.samples, &targets, &l.samples, &eps, p, &[], &OracleConfig::default())
                .unwrap();
            assert!(out.poly.valuation().unwrap() >= p);
            assert!(out.err_k <= eps && out.err_l <= eps, "p={p}");
            let resup = sup_norm_on_samples(
                &RationalFunction::polynomial(&out.poly - &Polynomial::one()),
                &k.samples,
            )
            .unwrap();
            assert!(resup <= eps);
        }
    }

    #[test]
    fn escalation_failure_is_reported() {
        // K and L interleave on the same circle: no polynomial can be 1 on
        // one half and 0 on the other to this accuracy at low degree.
        let pts = circle_samples(&GR::zero(), &rat(1, 1), 16);
        let (k, l): (Vec<_>, Vec<_>) = pts.iter().cloned().enumerate().partition(|(i, _)| i % 2 == 0);
        let k: Vec<GR> = k.into_iter().map(|x| x.1).collect();
        let l: Vec<GR> = l.into_iter().map(|x| x.1).collect();
        let t = vec![GR::one(); k.len()];
        let cfg = OracleConfig { degree_cap: 4, ..OracleConfig::default() };
        let r = approx_on_samples(&k, &t, &l, &rat(1, 1000), 1, &[], &cfg);
        assert!(matches!(r, Err(Error::EscalationFailed { .. })));
    }
}
