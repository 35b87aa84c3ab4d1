//! Finite-horizon builds of series whose row Padé approximants have a
//! prescribed denominator `Q` and approximate given targets on sampled
//! compacta, plus the checks that go with them.
//!
//! The build keeps a polynomial `f_j` (starting from `f_0 = Q T`) and adds
//! increments of high valuation; `f = f_J / Q`. Each increment starts above
//! the previous checkpoint plus `q`, so `[f; p/q] = f_j / Q` stays true for
//! every earlier checkpoint `p`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::approx::{
    approx_on_samples, floor_pow2, min_abs_lower, min_distance_lower, CompactSetSpec, DiskSampleSpec,
    OracleConfig, PointConstraint,
};
use crate::error::{Error, Result};
use crate::pade::{pade, PadeResult};
use crate::poly::{Polynomial, RationalFunction};
use crate::roots::{order_roots_polar, poly_roots_numeric, DEFAULT_GUARD_BAND};
use crate::scalar::{rational_str, sqrt_upper, GR};
use crate::series::PowerSeries;

/// `Q(z) = prod (1 - z / w_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenominatorSpec {
    pub roots: Vec<GR>,
    pub denominator: Polynomial,
}

impl DenominatorSpec {
    pub fn from_roots(roots: Vec<GR>) -> Result<Self> {
        let denominator = Polynomial::from_reciprocal_roots(&roots)?;
        let spec = Self { roots, denominator };
        spec.validate()?;
        Ok(spec)
    }

    pub fn q(&self) -> usize {
        self.roots.len()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.roots.iter().find(|w| w.norm_sqr() < BigRational::one()) {
            return Err(Error::invalid(format!("root {w} of Q lies inside the unit disk")));
        }
        if Polynomial::from_reciprocal_roots(&self.roots)? != self.denominator {
            return Err(Error::invalid("Q does not match the product over its roots"));
        }
        Ok(())
    }
}

/// Increasing sequence of admissible checkpoint degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MuSequence {
    Explicit { terms: Vec<usize> },
    Arithmetic { start: usize, step: usize },
}

impl MuSequence {
    pub fn validate(&self) -> Result<()> {
        match self {
            MuSequence::Explicit { terms } => {
                if terms.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid("mu must be strictly increasing"));
                }
            }
            MuSequence::Arithmetic { step, .. } => {
                if *step == 0 {
                    return Err(Error::invalid("mu step must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Least element `>= x`.
    pub fn first_at_least(&self, x: usize) -> Option<usize> {
        match self {
            MuSequence::Explicit { terms } => terms.iter().copied().find(|&t| t >= x),
            MuSequence::Arithmetic { start, step } => {
                if x <= *start {
                    Some(*start)
                } else {
                    Some(start + (x - start).div_ceil(*step) * step)
                }
            }
        }
    }

    /// Elements `<= limit`.
    pub fn terms_up_to(&self, limit: usize) -> Vec<usize> {
        match self {
            MuSequence::Explicit { terms } => terms.iter().copied().filter(|&t| t <= limit).collect(),
            MuSequence::Arithmetic { start, step } => (*start..=limit).step_by(*step).collect(),
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.first_at_least(x) == Some(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniversalTask {
    pub target: RationalFunction,
    pub k: CompactSetSpec,
    #[serde(with = "rational_str")]
    pub epsilon: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildStep {
    pub j: usize,
    pub task: usize,
    /// Checkpoint protected by this step: least element of mu `>= deg f_j`.
    pub protected: usize,
    pub valuation: usize,
    /// Checkpoint certified after this step, for `f_{j+1}`.
    pub checkpoint: usize,
    #[serde(with = "rational_str")]
    pub tolerance: BigRational,
    pub fit_degree: usize,
    pub perturbation: Option<GR>,
    pub increment: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub step: usize,
    pub task: usize,
    pub p: usize,
    /// Sampled `|| f_{j+1}/Q - h ||_K`.
    #[serde(with = "rational_str")]
    pub err_k: BigRational,
    /// Sampled `|| f_{j+1}/Q - f ||_L`.
    #[serde(with = "rational_str")]
    pub err_l: BigRational,
    /// Reduced denominator of the checkpoint approximant.
    pub denominator: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildTrace {
    pub mu: MuSequence,
    pub t: Polynomial,
    pub steps: Vec<BuildStep>,
    pub f_tilde: Polynomial,
    pub f: PowerSeries,
    pub certificates: Vec<Certificate>,
    /// Sampled `|| f - T ||_L`.
    #[serde(with = "rational_str")]
    pub disk_error: BigRational,
}

impl BuildTrace {
    /// `f_{j}` rebuilt from `Q T` and the stored increments.
    pub fn partial(&self, spec: &DenominatorSpec, j: usize) -> Polynomial {
        let mut f = &spec.denominator * &self.t;
        for s in &self.steps[..j] {
            f = &f + &s.increment;
        }
        f
    }
}

fn sup_abs(values: impl Iterator<Item = GR>) -> BigRational {
    let best = values.map(|v| v.norm_sqr()).max().unwrap_or_else(BigRational::zero);
    sqrt_upper(&best)
}

fn eval_quotient(num: &Polynomial, den: &Polynomial, z: &GR) -> Result<GR> {
    let d = den.eval(z);
    let inv = d.inv().ok_or_else(|| Error::PoleAtSample { point: z.to_string() })?;
    Ok(&num.eval(z) * &inv)
}

fn min1(x: Option<BigRational>) -> BigRational {
    x.map_or_else(BigRational::one, |x| x.min(BigRational::one()))
}

pub fn build_universal(
    spec: &DenominatorSpec,
    tasks: &[UniversalTask],
    mu: &MuSequence,
    t: &Polynomial,
    l: &DiskSampleSpec,
    eps0: &BigRational,
    rounds: usize,
) -> Result<BuildTrace> {
    build_universal_with(spec, tasks, mu, t, l, eps0, rounds, &OracleConfig::default())
}

#[allow(clippy::too_many_arguments)]
pub fn build_universal_with(
    spec: &DenominatorSpec,
    tasks: &[UniversalTask],
    mu: &MuSequence,
    t: &Polynomial,
    l: &DiskSampleSpec,
    eps0: &BigRational,
    rounds: usize,
    cfg: &OracleConfig,
) -> Result<BuildTrace> {
    spec.validate()?;
    mu.validate()?;
    l.validate()?;
    if !eps0.is_positive() || eps0 >= &BigRational::one() {
        return Err(Error::invalid("epsilon0 must lie in (0, 1)"));
    }
    for (i, task) in tasks.iter().enumerate() {
        task.k.validate()?;
        if !task.epsilon.is_positive() {
            return Err(Error::invalid(format!("task {i}: epsilon must be positive")));
        }
        for w in &spec.roots {
            if !task.k.excluded.contains(w) {
                return Err(Error::invalid(format!("task {i}: K must exclude root {w} of Q")));
            }
        }
    }
    let q = spec.q();
    let qpoly = &spec.denominator;
    let d_wl = min1(min_distance_lower(&spec.roots, &l.samples));
    let q_on_l = min1(min_abs_lower(qpoly, &l.samples));
    let mut f = qpoly * t;
    let mut steps = Vec::new();
    let total = if tasks.is_empty() { 0 } else { rounds * tasks.len() };
    for j in 0..total {
        let ti = j % tasks.len();
        let task = &tasks[ti];
        let wrap = |e: Error| Error::StepFailed {
            step: j,
            task: ti,
            source: Box::new(e),
        };
        let deg = f.degree_or_zero();
        let protected = mu.first_at_least(deg).ok_or(wrap(Error::MuExhausted { needed: deg }))?;
        let valuation = protected + q + 1;
        let d_wk = min1(min_distance_lower(&spec.roots, &task.k.samples));
        let q_on_k = min1(min_abs_lower(qpoly, &task.k.samples));
        let scale = BigRational::new(1.into(), num_bigint::BigInt::one() << (j + 1));
        let budget = [d_wk, d_wl.clone(), q_on_l.clone()]
            .into_iter()
            .fold(BigRational::one(), |a, b| a.min(b));
        let tol = floor_pow2(&(eps0 * &scale * &budget).min(&task.epsilon * &q_on_k));
        let targets = task
            .k
            .samples
            .iter()
            .map(|z| Ok(&(&qpoly.eval(z) * &task.target.eval(z)?) - &f.eval(z)))
            .collect::<Result<Vec<_>>>()
            .map_err(wrap)?;
        let constraints: Vec<PointConstraint> = spec
            .roots
            .iter()
            .map(|w| {
                let mut forbidden = vec![GR::zero()];
                let a = -f.eval(w);
                if !a.is_zero() {
                    forbidden.push(a);
                }
                PointConstraint { point: w.clone(), forbidden }
            })
            .collect();
        let out = approx_on_samples(&task.k.samples, &targets, &l.samples, &tol, valuation, &constraints, cfg)
            .map_err(wrap)?;
        f = &f + &out.poly;
        let checkpoint = mu
            .first_at_least(f.degree_or_zero())
            .ok_or(wrap(Error::MuExhausted { needed: f.degree_or_zero() }))?;
        steps.push(BuildStep {
            j,
            task: ti,
            protected,
            valuation,
            checkpoint,
            tolerance: tol,
            fit_degree: out.fit_degree,
            perturbation: out.perturbation,
            increment: out.poly,
        });
    }
    let last = mu
        .first_at_least(f.degree_or_zero())
        .ok_or(Error::MuExhausted { needed: f.degree_or_zero() })?;
    let series = PowerSeries::from_polynomial(&f, last + q + 1).div_poly(qpoly)?;
    let mut trace = BuildTrace {
        mu: mu.clone(),
        t: t.clone(),
        steps,
        f_tilde: f,
        f: series,
        certificates: Vec::new(),
        disk_error: BigRational::zero(),
    };
    trace.disk_error = sup_abs(
        l.samples
            .iter()
            .map(|z| Ok(&eval_quotient(&trace.f_tilde, qpoly, z)? - &t.eval(z)))
            .collect::<Result<Vec<_>>>()?
            .into_iter(),
    );
    trace.certificates = certificates(&trace, spec, tasks, l)?;
    Ok(trace)
}

fn certificates(
    trace: &BuildTrace,
    spec: &DenominatorSpec,
    tasks: &[UniversalTask],
    l: &DiskSampleSpec,
) -> Result<Vec<Certificate>> {
    let qpoly = &spec.denominator;
    let mut out = Vec::new();
    let mut f = &spec.denominator * &trace.t;
    for step in &trace.steps {
        f = &f + &step.increment;
        let task = &tasks[step.task];
        let err_k = sup_abs(
            task.k
                .samples
                .iter()
                .map(|z| Ok(&eval_quotient(&f, qpoly, z)? - &task.target.eval(z)?))
                .collect::<Result<Vec<_>>>()?
                .into_iter(),
        );
        let diff = &f - &trace.f_tilde;
        let err_l = sup_abs(
            l.samples
                .iter()
                .map(|z| eval_quotient(&diff, qpoly, z))
                .collect::<Result<Vec<_>>>()?
                .into_iter(),
        );
        let denominator = RationalFunction::new(f.clone(), qpoly.clone())?.reduced().den;
        out.push(Certificate {
            step: step.j,
            task: step.task,
            p: step.checkpoint,
            err_k,
            err_l,
            denominator,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointCertificate {
    pub step: usize,
    pub p: usize,
    pub q: usize,
    pub c_mn: GR,
    pub c_m1n: GR,
    pub normal: bool,
}

/// Recompute `[f; p/q]` for the checkpoint after step `j` and demand exact
/// equality with `f_{j+1} / Q`, normality, and denominator exactly `Q`.
pub fn verify_checkpoint(trace: &BuildTrace, spec: &DenominatorSpec, j: usize) -> Result<CheckpointCertificate> {
    let step = trace
        .steps
        .get(j)
        .ok_or_else(|| Error::invalid(format!("trace has no step {j}")))?;
    let ctx = || format!("step {j}");
    let fj = trace.partial(spec, j + 1);
    let p = step.checkpoint;
    if trace.mu.first_at_least(fj.degree_or_zero()) != Some(p) {
        return Err(Error::Mismatch {
            context: ctx(),
            detail: format!("checkpoint {p} is not the least element of mu above deg f_{}", j + 1),
        });
    }
    let q = spec.q();
    let r: PadeResult = pade(&trace.f, p, q)?;
    if !r.exists() {
        return Err(Error::Mismatch {
            context: ctx(),
            detail: format!("[f; {p}/{q}] does not exist"),
        });
    }
    let claimed = RationalFunction::new(fj, spec.denominator.clone())?;
    if !r.rational().same_function(&claimed) {
        return Err(Error::Mismatch {
            context: ctx(),
            detail: format!("[f; {p}/{q}] differs from f_{}/Q", j + 1),
        });
    }
    if r.denominator != spec.denominator {
        return Err(Error::Mismatch {
            context: ctx(),
            detail: format!("reduced denominator {} is not Q", r.denominator),
        });
    }
    if !r.is_normal() {
        return Err(Error::Mismatch {
            context: ctx(),
            detail: format!("f is not normal at ({p},{q})"),
        });
    }
    Ok(CheckpointCertificate {
        step: j,
        p,
        q,
        c_mn: r.c_mn,
        c_m1n: r.c_m1n,
        normal: true,
    })
}

/// Checks `f_tilde` against the increments and every checkpoint.
pub fn verify_trace(trace: &BuildTrace, spec: &DenominatorSpec) -> Result<Vec<CheckpointCertificate>> {
    if trace.partial(spec, trace.steps.len()) != trace.f_tilde {
        return Err(Error::Mismatch {
            context: "f_tilde".into(),
            detail: "does not equal Q T plus the increments".into(),
        });
    }
    for (i, s) in trace.steps.iter().enumerate() {
        if s.j != i || s.increment.valuation().is_some_and(|v| v < s.valuation) {
            return Err(Error::Mismatch {
                context: format!("step {i}"),
                detail: "increment valuation below the protected window".into(),
            });
        }
    }
    (0..trace.steps.len()).map(|j| verify_checkpoint(trace, spec, j)).collect()
}

/// A single stored coefficient that some verification protects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MutationSite {
    Series { index: usize },
    Increment { step: usize, index: usize },
}

/// Coefficients inside protected windows: `f` up to the last checkpoint
/// plus `q`, and every nonzero increment coefficient.
pub fn protected_sites(trace: &BuildTrace, spec: &DenominatorSpec) -> Vec<MutationSite> {
    let mut out = Vec::new();
    if let Some(last) = trace.steps.last() {
        let top = (last.checkpoint + spec.q()).min(trace.f.truncation_len().saturating_sub(1));
        out.extend((0..=top).map(|index| MutationSite::Series { index }));
    }
    for s in &trace.steps {
        for (index, c) in s.increment.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push(MutationSite::Increment { step: s.j, index });
            }
        }
    }
    out
}

/// Copy of the trace with `delta` added at `site`.
pub fn mutate_trace(trace: &BuildTrace, site: MutationSite, delta: &GR) -> Result<BuildTrace> {
    let mut t = trace.clone();
    match site {
        MutationSite::Series { index } => {
            let c = trace.f.coeff(index)?;
            t.f = trace.f.with_coeff(index, c + delta)?;
        }
        MutationSite::Increment { step, index } => {
            let s = t
                .steps
                .get_mut(step)
                .ok_or_else(|| Error::invalid(format!("no step {step}")))?;
            s.increment = &s.increment + &Polynomial::monomial(delta.clone(), index);
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCertificate {
    pub result: PadeResult,
    /// Reduced denominator of the combination; divides the shared `Q`.
    pub reduced_denominator: Polynomial,
    pub p0: usize,
}

/// `[sum a_k f_k; m/q] = sum a_k [f_k; m/q]` for members sharing one
/// denominator.
pub fn span_pade_check(members: &[(PowerSeries, GR)], m: usize, q: usize) -> Result<SpanCertificate> {
    if members.is_empty() {
        return Err(Error::invalid("span check needs at least one member"));
    }
    let mut shared: Option<Polynomial> = None;
    let mut num_sum = Polynomial::zero();
    for (i, (f, _)) in members.iter().enumerate() {
        let r = pade(f, m, q)?;
        if !r.exists() {
            return Err(Error::NotExists { m, n: q });
        }
        match &shared {
            None => shared = Some(r.denominator.clone()),
            Some(d) if *d != r.denominator => {
                return Err(Error::DenominatorMismatch(format!(
                    "member 0 has {d}, member {i} has {}",
                    r.denominator
                )))
            }
            _ => {}
        }
        num_sum = &num_sum + &r.numerator.scale(&members[i].1);
    }
    let den = shared.unwrap();
    let len = members.iter().map(|(f, _)| f.truncation_len()).min().unwrap();
    let mut coeffs = vec![GR::zero(); len];
    for (f, a) in members {
        for (c, x) in coeffs.iter_mut().zip(f.coeffs()) {
            *c += &(x * a);
        }
    }
    let g = PowerSeries::new(coeffs);
    let r = pade(&g, m, q)?;
    let expected = RationalFunction::new(num_sum, den)?;
    if !r.exists() || !r.rational().same_function(&expected) {
        return Err(Error::Mismatch {
            context: format!("span ({m},{q})"),
            detail: format!("[g; {m}/{q}] = {} but the combination is {expected}", r.rational()),
        });
    }
    let reduced_denominator = r.denominator.clone();
    Ok(SpanCertificate {
        p0: reduced_denominator.degree_or_zero(),
        reduced_denominator,
        result: r,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleWitness {
    pub p: usize,
    /// Ordered approximant poles.
    pub poles: Vec<(f64, f64)>,
    pub max_pole_distance: f64,
    pub max_residual: f64,
    #[serde(with = "rational_str")]
    pub err_k: BigRational,
    #[serde(with = "rational_str")]
    pub err_l: BigRational,
}

/// Residual bound under which numeric poles count as certified.
pub const ROOT_RESIDUAL_BOUND: f64 = 1e-9;

/// First `p` in `mu` (within the truncation) where `[f; p/q]` has exactly
/// `q` poles within `s_inv` of `W` in polar order, and is within `s_inv` of
/// `h` on `K` and of `f` on `L`. On `L`, `f` is the partial sum of the
/// stored truncation.
#[allow(clippy::too_many_arguments)]
pub fn asymptotic_pole_predicate(
    f: &PowerSeries,
    mu: &MuSequence,
    q: usize,
    w: &[GR],
    alpha: f64,
    s_inv: &BigRational,
    k: &CompactSetSpec,
    h: &RationalFunction,
    l: &DiskSampleSpec,
) -> Result<Option<PoleWitness>> {
    if w.len() != q {
        return Err(Error::invalid("W must have q points"));
    }
    let len = f.truncation_len();
    if len < q + 1 {
        return Err(Error::Truncation { needed: q + 1, available: len });
    }
    let candidates = mu.terms_up_to(len - q - 1);
    if candidates.is_empty() {
        return Err(Error::Truncation {
            needed: mu.first_at_least(0).unwrap_or(0) + q + 1,
            available: len,
        });
    }
    let w_f: Vec<_> = w.iter().map(GR::to_complex64).collect();
    let w_sorted = order_roots_polar(&w_f, alpha, DEFAULT_GUARD_BAND)?;
    let f_poly = f.partial_sum(len - 1)?;
    let s_f = crate::scalar::ratio_to_f64(s_inv);
    for p in candidates {
        let r = pade(f, p, q)?;
        if !r.exists() || r.denominator.degree() != Some(q) {
            continue;
        }
        let roots = poly_roots_numeric(&r.denominator, 52)?;
        let max_residual = roots.iter().map(|x| x.residual).fold(0.0, f64::max);
        if max_residual >= ROOT_RESIDUAL_BOUND {
            continue;
        }
        let values: Vec<_> = roots.iter().map(|x| x.value()).collect();
        let Ok(ordered) = order_roots_polar(&values, alpha, DEFAULT_GUARD_BAND) else {
            continue;
        };
        let dist = ordered
            .iter()
            .zip(&w_sorted)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if dist >= s_f {
            continue;
        }
        let err_k = sup_abs(
            k.samples
                .iter()
                .map(|z| Ok(&eval_quotient(&r.numerator, &r.denominator, z)? - &h.eval(z)?))
                .collect::<Result<Vec<_>>>()?
                .into_iter(),
        );
        if &err_k >= s_inv {
            continue;
        }
        let err_l = sup_abs(
            l.samples
                .iter()
                .map(|z| Ok(&eval_quotient(&r.numerator, &r.denominator, z)? - &f_poly.eval(z)))
                .collect::<Result<Vec<_>>>()?
                .into_iter(),
        );
        if &err_l >= s_inv {
            continue;
        }
        return Ok(Some(PoleWitness {
            p,
            poles: ordered.iter().map(|z| (z.re, z.im)).collect(),
            max_pole_distance: dist,
            max_residual,
            err_k,
            err_l,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::circle_samples;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn one_task(excluded: Vec<GR>, eps: BigRational) -> UniversalTask {
        UniversalTask {
            target: RationalFunction::polynomial(Polynomial::one()),
            k: CompactSetSpec {
                samples: circle_samples(&GR::from_int(2), &rat(1, 4), 24),
                margin: rat(1, 4),
                excluded,
            },
            epsilon: eps,
        }
    }

    fn all_integers() -> MuSequence {
        MuSequence::Arithmetic { start: 0, step: 1 }
    }

    #[test]
    fn mu_sequences() {
        let a = MuSequence::Arithmetic { start: 3, step: 4 };
        assert_eq!(a.first_at_least(0), Some(3));
        assert_eq!(a.first_at_least(4), Some(7));
        assert_eq!(a.first_at_least(7), Some(7));
        assert_eq!(a.terms_up_to(12), vec![3, 7, 11]);
        let e = MuSequence::Explicit { terms: vec![2, 5] };
        assert_eq!(e.first_at_least(3), Some(5));
        assert_eq!(e.first_at_least(6), None);
        assert!(MuSequence::Explicit { terms: vec![2, 2] }.validate().is_err());
    }

    #[test]
    fn denominator_spec() {
        let s = DenominatorSpec::from_roots(vec![GR::from_int(2), GR::from_int(3)]).unwrap();
        assert_eq!(s.denominator.coeffs()[0], GR::one());
        assert_eq!(s.q(), 2);
        assert!(DenominatorSpec::from_roots(vec![GR::ratio(1, 2)]).is_err());
    }

    #[test]
    fn no_tasks_returns_t() {
        let spec = DenominatorSpec::from_roots(vec![GR::one()]).unwrap();
        let t = Polynomial::from_ints(&[1, 2, 3]);
        let l = DiskSampleSpec::on_circle(rat(1, 2), 8);
        let trace = build_universal(&spec, &[], &all_integers(), &t, &l, &rat(1, 10), 0).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.f.partial_sum(2).unwrap(), t);
        assert!(trace.f.coeffs()[3..].iter().all(Zero::is_zero));
        assert!(trace.disk_error.is_zero());
    }

    #[test]
    fn q1_build_certifies_each_step() {
        let spec = DenominatorSpec::from_roots(vec![GR::one()]).unwrap();
        let l = DiskSampleSpec::on_circle(rat(1, 2), 16);
        let tasks = [one_task(vec![GR::one()], rat(1, 10))];
        let trace = build_universal(&spec, &tasks, &all_integers(), &Polynomial::zero(), &l, &rat(1, 10), 3).unwrap();
        assert_eq!(trace.steps.len(), 3);
        for w in trace.steps.windows(2) {
            assert!(w[1].valuation > w[0].valuation);
            assert!(w[1].valuation > w[0].checkpoint + spec.q());
        }
        for c in &trace.certificates {
            assert_eq!(c.denominator, spec.denominator);
            assert!(c.err_k <= rat(1, 10));
        }
        assert!(trace.disk_error <= rat(1, 10));
        let certs = verify_trace(&trace, &spec).unwrap();
        assert_eq!(certs.len(), 3);
        let site = protected_sites(&trace, &spec)[1];
        let bad = mutate_trace(&trace, site, &GR::ratio(1, 1000)).unwrap();
        assert!(verify_trace(&bad, &spec).is_err());
    }

    #[test]
    fn missing_exclusion_is_rejected() {
        let spec = DenominatorSpec::from_roots(vec![GR::one()]).unwrap();
        let l = DiskSampleSpec::on_circle(rat(1, 2), 8);
        let tasks = [one_task(vec![], rat(1, 10))];
        assert!(build_universal(&spec, &tasks, &all_integers(), &Polynomial::zero(), &l, &rat(1, 10), 1).is_err());
    }

    #[test]
    fn span_identity_and_cancellation() {
        use crate::poles::poles_outside_disk_witness;
        let mu = GR::from_int(5);
        let f1 = poles_outside_disk_witness(&Polynomial::one(), 1, 2, &mu, 12).unwrap();
        let f2 = poles_outside_disk_witness(&Polynomial::from_ints(&[0, 1]), 1, 2, &mu, 12).unwrap();
        let single = span_pade_check(&[(f1.clone(), GR::one())], 1, 2).unwrap();
        assert_eq!(single.p0, 2);
        let c = span_pade_check(&[(f1.clone(), GR::from_int(3)), (f2.clone(), GR::ratio(2, 7))], 1, 2).unwrap();
        assert_eq!(c.p0, 2);
        // 1 - z/5 cancels one factor of the shared denominator.
        let c = span_pade_check(&[(f1, GR::one()), (f2, GR::ratio(-1, 5))], 1, 2).unwrap();
        assert_eq!(c.p0, 1);
        assert_eq!(c.reduced_denominator, Polynomial::new(vec![GR::one(), GR::ratio(-1, 5)]));
    }

    #[test]
    fn span_rejects_different_denominators() {
        use crate::poles::poles_outside_disk_witness;
        let f1 = poles_outside_disk_witness(&Polynomial::one(), 1, 1, &GR::from_int(5), 8).unwrap();
        let f2 = poles_outside_disk_witness(&Polynomial::one(), 1, 1, &GR::from_int(7), 8).unwrap();
        assert!(matches!(
            span_pade_check(&[(f1, GR::one()), (f2, GR::one())], 1, 1),
            Err(Error::DenominatorMismatch(_))
        ));
    }

    #[test]
    fn predicate_on_exact_poles_and_geometric_control() {
        use crate::poles::poles_outside_disk_witness;
        let k = CompactSetSpec {
            samples: circle_samples(&GR::from_int(-3), &rat(1, 4), 8),
            margin: rat(1, 4),
            excluded: vec![GR::from_int(5)],
        };
        let l = DiskSampleSpec::on_circle(rat(1, 2), 8);
        let mu = all_integers();
        let f = poles_outside_disk_witness(&Polynomial::one(), 0, 1, &GR::from_int(5), 40).unwrap();
        // h equal to the approximant itself makes the K condition exact.
        let h = RationalFunction::new(Polynomial::one(), Polynomial::new(vec![GR::one(), GR::ratio(-1, 5)])).unwrap();
        let w = [GR::from_int(5)];
        let hit = asymptotic_pole_predicate(&f, &mu, 1, &w, 1.0, &rat(1, 1_000_000), &k, &h, &l).unwrap();
        assert_eq!(hit.unwrap().p, 0);
        let geo = PowerSeries::from_ints(&[1; 40]);
        let z = RationalFunction::polynomial(Polynomial::from_ints(&[0, 1]));
        let miss = asymptotic_pole_predicate(&geo, &mu, 1, &w, 1.0, &rat(1, 1_000_000), &k, &z, &l).unwrap();
        assert!(miss.is_none());
        let short = PowerSeries::from_ints(&[1]);
        assert!(asymptotic_pole_predicate(&short, &mu, 1, &w, 1.0, &rat(1, 10), &k, &z, &l).is_err());
    }
}
