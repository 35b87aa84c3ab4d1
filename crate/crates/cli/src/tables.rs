//! CSV artifacts. Floats are sampled-error upper bounds and numeric roots;
//! everything exact lives in the JSON documents.

use std::path::Path;

use sha2::{Digest, Sha256};

use padelab::approx::bound_to_f64;
use padelab::gap::{GapCertificate, TransferCertificate};
use padelab::roots::poly_roots_numeric;
use padelab::universal::Certificate;
use padelab::Polynomial;

use crate::CliError;

/// sha256 of the denominator's JSON coefficient list.
pub fn denominator_hash(p: &Polynomial) -> String {
    let text = serde_json::to_string(p).expect("polynomials serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_rows(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Config(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn pole_rows(m: usize, n: usize, den: &Polynomial, precision: u32) -> Result<Vec<Vec<String>>, CliError> {
    if den.degree_or_zero() == 0 {
        return Ok(Vec::new());
    }
    let roots = poly_roots_numeric(den, precision).map_err(CliError::from_core)?;
    // Roots come back repeated per multiplicity.
    Ok(roots
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                m.to_string(),
                n.to_string(),
                i.to_string(),
                format!("{:e}", r.re),
                format!("{:e}", r.im),
                format!("{:e}", r.residual),
            ]
        })
        .collect())
}

pub fn write_poles(path: &Path, rows: Vec<Vec<String>>) -> Result<(), CliError> {
    write_rows(path, &["m", "n", "pole_index", "re", "im", "residual"], rows)
}

pub fn write_certificates(path: &Path, certs: &[Certificate]) -> Result<(), CliError> {
    let rows = certs
        .iter()
        .map(|c| {
            vec![
                c.task.to_string(),
                c.step.to_string(),
                c.p.to_string(),
                format!("{:e}", bound_to_f64(&c.err_k)),
                format!("{:e}", bound_to_f64(&c.err_l)),
                denominator_hash(&c.denominator),
            ]
        })
        .collect();
    write_rows(
        path,
        &["task", "step", "p", "sampled_error_K", "sampled_error_L", "denominator_hash"],
        rows,
    )
}

pub fn write_gap_certificates(path: &Path, certs: &[GapCertificate]) -> Result<(), CliError> {
    let rows = certs
        .iter()
        .map(|c| {
            vec![
                c.task.to_string(),
                c.step.to_string(),
                c.m.to_string(),
                c.p.to_string(),
                format!("{:e}", bound_to_f64(&c.err_k)),
                format!("{:e}", bound_to_f64(&c.err_l)),
                yes_no(c.leading_nonzero).to_string(),
            ]
        })
        .collect();
    write_rows(
        path,
        &["task", "step", "m", "p", "sampled_error_K", "sampled_error_L", "leading_nonzero"],
        rows,
    )
}

pub fn write_transfer(path: &Path, certs: &[TransferCertificate]) -> Result<(), CliError> {
    let rows = certs
        .iter()
        .map(|c| {
            vec![
                c.m.to_string(),
                c.p.to_string(),
                c.q.to_string(),
                yes_no(c.exact_match).to_string(),
                denominator_hash(&c.denominator),
            ]
        })
        .collect();
    write_rows(path, &["checkpoint", "p", "q", "exact_match", "denominator_hash"], rows)
}
