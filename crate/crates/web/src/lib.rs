//! Browser bindings: three operations taking text inputs and returning JSON
//! strings, so the page needs no glue beyond `JSON.parse`.
//!
//! The `*_json` functions are plain Rust and tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use padelab::approx::{circle_samples, CompactSetSpec, DiskSampleSpec};
use padelab::pade::pade_table;
use padelab::poles::{place_pole, place_zero};
use padelab::roots::poly_roots_numeric;
use padelab::scalar::parse_real;
use padelab::universal::{build_universal, verify_trace, DenominatorSpec, MuSequence, UniversalTask};
use padelab::{Polynomial, PowerSeries, RationalFunction, GR};

fn parse_list(text: &str) -> Result<Vec<GR>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<GR>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_one(text: &str) -> Result<GR, String> {
    text.trim().parse::<GR>().map_err(|e| e.to_string())
}

fn roots_of(p: &Polynomial) -> Vec<(f64, f64)> {
    if p.degree_or_zero() == 0 {
        return Vec::new();
    }
    poly_roots_numeric(p, 52)
        .map(|rs| rs.iter().map(|r| (r.re, r.im)).collect())
        .unwrap_or_default()
}

#[derive(Serialize)]
struct Cell {
    m: usize,
    n: usize,
    status: &'static str,
    c_mn: String,
    approximant: Option<String>,
    poles: Vec<(f64, f64)>,
}

/// Padé table of the coefficients in `series` (comma or space separated).
pub fn pade_table_json(series: &str, max_m: usize, max_n: usize) -> Result<String, String> {
    let coeffs = parse_list(series)?;
    if max_m + max_n >= coeffs.len() {
        return Err(format!(
            "need at least {} coefficients for max m + max n = {}",
            max_m + max_n + 1,
            max_m + max_n
        ));
    }
    let s = PowerSeries::new(coeffs);
    let cells: Vec<Cell> = pade_table(&s, max_m, max_n)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| Cell {
            m: r.m,
            n: r.n,
            status: r.status_label(),
            c_mn: r.c_mn.to_string(),
            approximant: r.exists().then(|| r.rational().to_string()),
            poles: if r.exists() { roots_of(&r.denominator) } else { Vec::new() },
        })
        .collect();
    Ok(serde_json::to_string(&cells).unwrap())
}

#[derive(Serialize)]
struct Placed {
    c2: String,
    witness: Vec<String>,
    approximant: String,
    status: &'static str,
    c_mn: String,
    poles: Vec<(f64, f64)>,
    zeros: Vec<(f64, f64)>,
}

/// Pole (`kind = "pole"`) or zero placement at `target`.
pub fn place_json(kind: &str, base: &str, m: usize, n: usize, target: &str, c1: &str) -> Result<String, String> {
    let p = Polynomial::new(parse_list(base)?);
    let target = parse_one(target)?;
    let c1 = parse_one(c1)?;
    let w = match kind {
        "pole" => place_pole(&p, m, n, &target, &c1),
        "zero" => place_zero(&p, m, n, &target, &c1),
        _ => return Err(format!("unknown placement `{kind}`")),
    }
    .map_err(|e| e.to_string())?;
    let r = w.approximant().map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&Placed {
        c2: w.c2.to_string(),
        witness: w.witness.coeffs().iter().map(ToString::to_string).collect(),
        approximant: r.rational().to_string(),
        status: r.status_label(),
        c_mn: r.c_mn.to_string(),
        poles: roots_of(&r.denominator),
        zeros: roots_of(&r.numerator),
    })
    .unwrap())
}

#[derive(Serialize)]
struct BuildCheckpoint {
    p: usize,
    err_k: f64,
    denominator: String,
    verified: bool,
}

#[derive(Serialize)]
struct BuildSummary {
    denominator: String,
    checkpoints: Vec<BuildCheckpoint>,
    disk_error: f64,
    series_head: Vec<String>,
}

/// Small prescribed-denominator build: `h = 1` on a circle of radius 1/4
/// around `center`, denominator with the given `roots`.
pub fn build_json(roots: &str, center: &str, epsilon: &str, rounds: usize) -> Result<String, String> {
    let spec = DenominatorSpec::from_roots(parse_list(roots)?).map_err(|e| e.to_string())?;
    let eps = parse_real(epsilon).map_err(|e| e.to_string())?;
    let quarter = parse_real("1/4").unwrap();
    let task = UniversalTask {
        target: RationalFunction::polynomial(Polynomial::one()),
        k: CompactSetSpec {
            samples: circle_samples(&parse_one(center)?, &quarter, 24),
            margin: quarter,
            excluded: spec.roots.clone(),
        },
        epsilon: eps,
    };
    let l = DiskSampleSpec::on_circle(parse_real("1/2").unwrap(), 16);
    let mu = MuSequence::Arithmetic { start: 0, step: 1 };
    let trace = build_universal(
        &spec,
        &[task],
        &mu,
        &Polynomial::zero(),
        &l,
        &parse_real("1/10").unwrap(),
        rounds.min(4),
    )
    .map_err(|e| e.to_string())?;
    let verified = verify_trace(&trace, &spec).is_ok();
    Ok(serde_json::to_string(&BuildSummary {
        denominator: spec.denominator.to_string(),
        checkpoints: trace
            .certificates
            .iter()
            .map(|c| BuildCheckpoint {
                p: c.p,
                err_k: padelab::approx::bound_to_f64(&c.err_k),
                denominator: c.denominator.to_string(),
                verified,
            })
            .collect(),
        disk_error: padelab::approx::bound_to_f64(&trace.disk_error),
        series_head: trace.f.coeffs().iter().take(8).map(|c| format!("{:.6}", c.to_complex64())).collect(),
    })
    .unwrap())
}

#[wasm_bindgen]
pub fn pade_table_wasm(series: &str, max_m: usize, max_n: usize) -> Result<String, JsError> {
    pade_table_json(series, max_m, max_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn place_wasm(kind: &str, base: &str, m: usize, n: usize, target: &str, c1: &str) -> Result<String, JsError> {
    place_json(kind, base, m, n, target, c1).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn build_wasm(roots: &str, center: &str, epsilon: &str, rounds: usize) -> Result<String, JsError> {
    build_json(roots, center, epsilon, rounds).map_err(|e| JsError::new(&e))
}
