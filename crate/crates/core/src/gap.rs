//! Series with exact zero gaps, built so that partial sums at the gap
//! starts approximate targets, and their transfer to Padé approximants.
//!
//! A gap `(p, q]` means `a_k = 0` for `p < k <= q`. Then `S_p(g)` agrees
//! with `g` to order `q + 1`, so `[g/Q; p/d] = S_p(g)/Q` whenever
//! `q - p > d = deg Q` and `Q` is coprime to `S_p(g)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::approx::{approx_on_samples, floor_pow2, DiskSampleSpec, OracleConfig};
use crate::error::{Error, Result};
use crate::pade::pade;
use crate::poly::{Polynomial, RationalFunction};
use crate::scalar::{rational_str, sqrt_upper, GR};
use crate::series::PowerSeries;
use crate::universal::{DenominatorSpec, MuSequence, UniversalTask};

/// Serde adapter for a list of exact rationals stored as strings.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| crate::scalar::parse_real(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Gap windows `(p_m, q_m]` and a weight `phi` tabulated on `0..phi.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSchedule {
    pub pairs: Vec<(usize, usize)>,
    #[serde(with = "rational_vec")]
    pub phi: Vec<BigRational>,
}

impl GapSchedule {
    pub fn new(pairs: Vec<(usize, usize)>, phi: Vec<BigRational>) -> Result<Self> {
        let s = Self { pairs, phi };
        s.validate()?;
        Ok(s)
    }

    /// Tabulates `weight` on `0..=max q_m`.
    pub fn with_weight(pairs: Vec<(usize, usize)>, weight: impl Fn(usize) -> BigRational) -> Result<Self> {
        let top = pairs.iter().map(|p| p.1).max().unwrap_or(0);
        Self::new(pairs, (0..=top).map(weight).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("weight table must be strictly increasing"));
        }
        for (m, &(p, q)) in self.pairs.iter().enumerate() {
            if p == 0 || p >= q {
                return Err(Error::invalid(format!("gap {m}: need 0 < p < q, got ({p}, {q})")));
            }
            if let Some(&(np, nq)) = self.pairs.get(m + 1) {
                if q > np {
                    return Err(Error::invalid(format!("gap {m} overlaps gap {}", m + 1)));
                }
                // q/p nondecreasing, cross-multiplied.
                if q * np > nq * p {
                    return Err(Error::invalid(format!("ratio q/p decreases after gap {m}")));
                }
            }
            let w = self
                .phi
                .get(q)
                .ok_or_else(|| Error::invalid(format!("weight table does not reach q = {q}")))?;
            let (pr, qr) = (BigRational::from_integer(p.into()), BigRational::from_integer(q.into()));
            if !(&pr < w && w < &qr) {
                return Err(Error::invalid(format!("gap {m}: weight condition p < phi(q) < q fails")));
            }
        }
        Ok(())
    }

    pub fn last_end(&self) -> usize {
        self.pairs.last().map_or(0, |p| p.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSeries {
    pub g: PowerSeries,
    pub schedule: GapSchedule,
}

impl GapSeries {
    pub fn new(g: PowerSeries, schedule: GapSchedule) -> Result<Self> {
        let s = Self { g, schedule };
        s.validate()?;
        Ok(s)
    }

    /// Schedule valid, truncation covers every window, windows hold zeros.
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.g.require_len(self.schedule.last_end() + 1)?;
        for (m, &(p, q)) in self.schedule.pairs.iter().enumerate() {
            if let Some(k) = (p + 1..=q).find(|&k| !self.g.coeffs()[k].is_zero()) {
                return Err(Error::invalid(format!("gap {m}: coefficient {k} is nonzero")));
            }
        }
        Ok(())
    }

    pub fn leading_nonzero(&self, m: usize) -> bool {
        self.schedule.pairs.get(m).is_some_and(|&(p, _)| !self.g.coeffs()[p].is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapStep {
    pub j: usize,
    pub task: usize,
    /// Increment support is `[q_{block-1} + 1, p_block]`.
    pub block: usize,
    #[serde(with = "rational_str")]
    pub tolerance: BigRational,
    pub fit_degree: usize,
    pub increment: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapCertificate {
    pub step: usize,
    pub task: usize,
    pub m: usize,
    pub p: usize,
    /// Sampled `|| S_p(g) - h ||_K`.
    #[serde(with = "rational_str")]
    pub err_k: BigRational,
    /// Sampled `|| S_p(g) - g ||_L` (g at its stored truncation).
    #[serde(with = "rational_str")]
    pub err_l: BigRational,
    pub leading_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapBuild {
    pub series: GapSeries,
    pub steps: Vec<GapStep>,
    pub certificates: Vec<GapCertificate>,
    #[serde(with = "rational_str")]
    pub disk_error: BigRational,
}

fn sup_abs(values: impl Iterator<Item = GR>) -> BigRational {
    sqrt_upper(&values.map(|v| v.norm_sqr()).max().unwrap_or_else(BigRational::zero))
}

fn pow2_at_least(x: &BigRational) -> BigRational {
    let mut r = BigRational::one();
    while &r < x {
        r = &r * BigRational::from_integer(2.into());
    }
    r
}

#[allow(clippy::too_many_arguments)]
pub fn build_gap_series(
    mu: &MuSequence,
    schedule: &GapSchedule,
    tasks: &[UniversalTask],
    t: &Polynomial,
    l: &DiskSampleSpec,
    eps0: &BigRational,
    rounds: usize,
) -> Result<GapBuild> {
    build_gap_series_with(mu, schedule, tasks, t, l, eps0, rounds, &OracleConfig::default())
}

#[allow(clippy::too_many_arguments)]
pub fn build_gap_series_with(
    mu: &MuSequence,
    schedule: &GapSchedule,
    tasks: &[UniversalTask],
    t: &Polynomial,
    l: &DiskSampleSpec,
    eps0: &BigRational,
    rounds: usize,
    cfg: &OracleConfig,
) -> Result<GapBuild> {
    schedule.validate()?;
    mu.validate()?;
    l.validate()?;
    if !eps0.is_positive() || eps0 >= &BigRational::one() {
        return Err(Error::invalid("epsilon0 must lie in (0, 1)"));
    }
    if let Some(&(p, _)) = schedule.pairs.iter().find(|(p, _)| !mu.contains(*p)) {
        return Err(Error::invalid(format!("gap start {p} is not in mu")));
    }
    let first = schedule.pairs.first().map_or(0, |p| p.0);
    if !schedule.pairs.is_empty() && t.degree_or_zero() > first {
        return Err(Error::invalid("T must have degree at most the first gap start"));
    }
    for task in tasks {
        task.k.validate()?;
    }
    let mut g = t.clone();
    let mut steps = Vec::new();
    let total = if tasks.is_empty() { 0 } else { rounds * tasks.len() };
    for j in 0..total {
        let ti = j % tasks.len();
        let task = &tasks[ti];
        let block = j + 1;
        let Some(&(pb, _)) = schedule.pairs.get(block) else {
            return Err(Error::ScheduleTooTight {
                block,
                detail: format!("schedule has {} gaps, step {j} needs another", schedule.pairs.len()),
            });
        };
        let valuation = schedule.pairs[block - 1].1 + 1;
        if pb < valuation {
            return Err(Error::ScheduleTooTight {
                block,
                detail: "no room between consecutive gaps".into(),
            });
        }
        let scale = BigRational::new(1.into(), BigInt::one() << (j + 1));
        let tol = floor_pow2(&(eps0 * &scale).min(task.epsilon.clone()));
        let targets = task
            .k
            .samples
            .iter()
            .map(|z| Ok(&task.target.eval(z)? - &g.eval(z)))
            .collect::<Result<Vec<_>>>()?;
        let step_cfg = OracleConfig {
            degree_cap: cfg.degree_cap.min(pb - valuation),
            ..cfg.clone()
        };
        let out = approx_on_samples(&task.k.samples, &targets, &l.samples, &tol, valuation, &[], &step_cfg)
            .map_err(|e| match e {
                Error::EscalationFailed { .. } => Error::ScheduleTooTight {
                    block,
                    detail: format!("room for degree {} only: {e}", pb - valuation),
                },
                e => Error::StepFailed {
                    step: j,
                    task: ti,
                    source: Box::new(e),
                },
            })?;
        let mut inc = out.poly;
        if inc.coeff(pb).is_zero() {
            // Make a_{p_m} nonzero with a monomial inside the remaining half
            // of the budget.
            let mut r = BigRational::one();
            for z in task.k.samples.iter().chain(&l.samples) {
                r = r.max(z.abs_upper());
            }
            let c = floor_pow2(&(&tol / (BigRational::from_integer(2.into()) * pow2_at_least(&r).pow(pb as i32))));
            inc = &inc + &Polynomial::monomial(GR::real(c), pb);
        }
        g = &g + &inc;
        steps.push(GapStep {
            j,
            task: ti,
            block,
            tolerance: tol,
            fit_degree: out.fit_degree,
            increment: inc,
        });
    }
    let series = GapSeries::new(
        PowerSeries::from_polynomial(&g, schedule.last_end().max(g.degree_or_zero()) + 1),
        schedule.clone(),
    )?;
    let disk_error = sup_abs(l.samples.iter().map(|z| &g.eval(z) - &t.eval(z)));
    let mut certificates = Vec::new();
    for s in &steps {
        let (p, _) = schedule.pairs[s.block];
        let sp = series.g.partial_sum(p)?;
        let task = &tasks[s.task];
        let err_k = sup_abs(
            task.k
                .samples
                .iter()
                .map(|z| Ok(&sp.eval(z) - &task.target.eval(z)?))
                .collect::<Result<Vec<_>>>()?
                .into_iter(),
        );
        let err_l = sup_abs(l.samples.iter().map(|z| &sp.eval(z) - &g.eval(z)));
        certificates.push(GapCertificate {
            step: s.j,
            task: s.task,
            m: s.block,
            p,
            err_k,
            err_l,
            leading_nonzero: series.leading_nonzero(s.block),
        });
    }
    Ok(GapBuild {
        series,
        steps,
        certificates,
        disk_error,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferCertificate {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub exact_match: bool,
    /// `gcd(S_p(g), Q) = 1`.
    pub coprime: bool,
    pub normal: bool,
    pub denominator: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub f: PowerSeries,
    pub certificates: Vec<TransferCertificate>,
}

/// `f = g / Q` with `[f; p_m/q] = S_{p_m}(g)/Q` certified at every gap.
pub fn transfer_to_pade(gs: &GapSeries, spec: &DenominatorSpec) -> Result<TransferReport> {
    gs.validate()?;
    spec.validate()?;
    let q = spec.q();
    let qpoly = &spec.denominator;
    for &(p, end) in &gs.schedule.pairs {
        if end - p <= q {
            return Err(Error::GapTooNarrow {
                checkpoint: p,
                width: end - p,
                needed: q,
            });
        }
    }
    let f = gs.g.div_poly(qpoly)?;
    let mut certificates = Vec::new();
    for (m, &(p, _)) in gs.schedule.pairs.iter().enumerate() {
        let sp = gs.g.partial_sum(p)?;
        for w in &spec.roots {
            if sp.eval(w).is_zero() {
                return Err(Error::ZeroSetViolation {
                    root: w.to_string(),
                    checkpoint: p,
                });
            }
        }
        let coprime = Polynomial::gcd(&sp, qpoly)?.degree() == Some(0);
        let r = pade(&f, p, q)?;
        let claimed = RationalFunction::new(sp, qpoly.clone())?;
        let exact_match = r.exists() && r.rational().same_function(&claimed) && &r.denominator == qpoly;
        if !exact_match || !coprime {
            return Err(Error::Mismatch {
                context: format!("transfer checkpoint p = {p}"),
                detail: format!("[f; {p}/{q}] = {} but S_p(g)/Q = {claimed}", r.rational()),
            });
        }
        certificates.push(TransferCertificate {
            m,
            p,
            q,
            exact_match,
            coprime,
            normal: r.is_normal(),
            denominator: r.denominator,
        });
    }
    Ok(TransferReport { f, certificates })
}

/// One line of the weight inequality `phi(p_r + q_r) < n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiRow {
    pub n: usize,
    pub p_r: usize,
    pub q_r: usize,
    #[serde(with = "rational_str")]
    pub phi_value: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSchedule {
    pub mu: Vec<usize>,
    #[serde(with = "rational_vec")]
    pub phi: Vec<BigRational>,
    pub rows: Vec<PhiRow>,
}

/// `(p_r, q_r)` with `p_r = min { p_m >= n }`; among pairs sharing that
/// `p`, the largest `q` (its constraint implies the others).
fn pair_for(s: &[(usize, usize)], n: usize) -> Option<(usize, usize)> {
    let p = s.iter().map(|x| x.0).filter(|&p| p >= n).min()?;
    let q = s.iter().filter(|x| x.0 == p).map(|x| x.1).max()?;
    Some((p, q))
}

/// Rows of the weight inequality for `n = 1..=horizon`.
pub fn phi_rows(s: &[(usize, usize)], horizon: usize, phi: &[BigRational]) -> Result<Vec<PhiRow>> {
    (1..=horizon)
        .map(|n| {
            let (p_r, q_r) = pair_for(s, n)
                .ok_or_else(|| Error::invalid(format!("horizon {horizon} exceeds S: no p_m >= {n}")))?;
            let phi_value = phi
                .get(p_r + q_r)
                .cloned()
                .ok_or_else(|| Error::invalid(format!("weight table does not reach {}", p_r + q_r)))?;
            let holds = phi_value < BigRational::from_integer(n.into());
            Ok(PhiRow {
                n,
                p_r,
                q_r,
                phi_value,
                holds,
            })
        })
        .collect()
}

/// `mu = (p_m)` and a weight with `phi(p_r + q_r) < n` for `n <= horizon`.
///
/// With `c(y)` the least `n` constraining the point `y` and
/// `b(x) = min { c(y) : y >= x }`, the table is
/// `phi(x) = b(x) - 1 + x / (X + 2)` where `X` is the largest constrained
/// point; past `X`, `b` stays at `b(X)`. The table runs to `(X + 2)^2`.
pub fn schedule_for_s(s: &[(usize, usize)], horizon: usize) -> Result<SSchedule> {
    if horizon == 0 {
        return Ok(SSchedule {
            mu: Vec::new(),
            phi: Vec::new(),
            rows: Vec::new(),
        });
    }
    let mut c: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for n in 1..=horizon {
        let (p, q) =
            pair_for(s, n).ok_or_else(|| Error::invalid(format!("horizon {horizon} exceeds S: no p_m >= {n}")))?;
        c.entry(p + q).or_insert(n);
    }
    let x_max = *c.keys().next_back().unwrap();
    let extent = (x_max + 2) * (x_max + 2);
    let denom = BigInt::from(x_max + 2);
    let mut phi = vec![BigRational::zero(); extent + 1];
    let mut b = c[&x_max];
    for x in (0..=extent).rev() {
        if let Some(&cy) = c.get(&x) {
            b = b.min(cy);
        }
        let frac = BigRational::new(BigInt::from(x), denom.clone());
        phi[x] = BigRational::from_integer(BigInt::from(b) - 1) + frac;
    }
    let mut mu: Vec<usize> = s.iter().map(|x| x.0).collect();
    mu.sort_unstable();
    mu.dedup();
    let rows = phi_rows(s, horizon, &phi)?;
    Ok(SSchedule { mu, phi, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SIdentityCertificate {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub exact: bool,
}

/// `[g; p/q] = S_p(g)` for every gap start `p` that appears in `S`.
pub fn s_identity_check(gs: &GapSeries, s: &[(usize, usize)]) -> Result<Vec<SIdentityCertificate>> {
    gs.validate()?;
    let mut out = Vec::new();
    for (m, &(p, end)) in gs.schedule.pairs.iter().enumerate() {
        for &(_, q) in s.iter().filter(|x| x.0 == p) {
            if p + q > end {
                return Err(Error::GapTooNarrow {
                    checkpoint: p,
                    width: end - p,
                    needed: q,
                });
            }
            let r = pade(&gs.g, p, q)?;
            let sp = RationalFunction::polynomial(gs.g.partial_sum(p)?);
            let exact = r.exists() && r.rational().same_function(&sp);
            if !exact {
                return Err(Error::Mismatch {
                    context: format!("S identity at ({p},{q})"),
                    detail: format!("[g; {p}/{q}] = {}", r.rational()),
                });
            }
            out.push(SIdentityCertificate { m, p, q, exact });
        }
    }
    Ok(out)
}
