//! `padelab`: batch front-end over the padelab library.
//!
//! Exit codes: 0 success, 2 verification failure, 3 config or input error,
//! 4 oracle escalation failure.

mod docs;
mod tables;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padelab::approx::bound_to_f64;
use padelab::gap::{build_gap_series_with, transfer_to_pade};
use padelab::pade::{pade_table, PadeResult};
use padelab::poles::{place_pole, place_zero, poles_outside_disk_witness};
use padelab::universal::{build_universal_with, mutate_trace, protected_sites, span_pade_check, verify_trace, DenominatorSpec};
use padelab::{pade, Error, GR};

use docs::*;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Verify(String),
    Oracle(String),
}

impl CliError {
    pub fn from_core(e: Error) -> Self {
        let msg = e.to_string();
        match e.root_cause() {
            Error::EscalationFailed { .. } | Error::ScheduleTooTight { .. } => CliError::Oracle(msg),
            Error::Mismatch { .. } | Error::Postcondition(_) | Error::NonConvergence { .. } => CliError::Verify(msg),
            _ => CliError::Config(msg),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 2,
            CliError::Config(_) => 3,
            CliError::Oracle(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
            CliError::Oracle(m) => write!(f, "oracle escalation failed: {m}"),
        }
    }
}

type CliResult = Result<(), CliError>;

trait Core<T> {
    fn core(self) -> Result<T, CliError>;
}

impl<T> Core<T> for padelab::Result<T> {
    fn core(self) -> Result<T, CliError> {
        self.map_err(CliError::from_core)
    }
}

#[derive(Parser)]
#[command(name = "padelab", version, about = "Exact Padé approximation experiments")]
struct Cli {
    /// Seed for randomized drivers (mutation tests); runs are deterministic
    /// for a fixed seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArgs {
    /// Write the JSON document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One approximant [S; m/n] with its classification.
    Pade {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// CSV of numeric poles (m, n, pole_index, re, im, residual).
        #[arg(long)]
        poles: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Status and C_{m,n} for every cell up to (max_m, max_n).
    Table {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        max_m: usize,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Perturb a polynomial so [f; m/n] has a pole at the target.
    PlacePole {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        poles: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Perturb a polynomial so [f; m/n] has a zero at the target.
    PlaceZero {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        poles: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Series of P/(1 - z/mu)^n whose approximant keeps every pole at mu.
    PolesAway {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        poles: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Series whose row approximants have the prescribed denominator.
    BuildUniversal {
        #[arg(long)]
        config: PathBuf,
        /// CSV of checkpoint certificates.
        #[arg(long)]
        certificates: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Series with exact zero gaps whose partial sums approximate the tasks.
    GapBuild {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        certificates: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Divide a gap series by Q and certify [g/Q; p/q] = S_p(g)/Q.
    GapTransfer {
        /// Document written by gap-build.
        #[arg(long)]
        gap: PathBuf,
        /// Document with the roots of Q.
        #[arg(long)]
        denominator: PathBuf,
        /// CSV of transfer certificates.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Linearity of [., m/q] over members sharing one denominator.
    SpanCheck {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Re-check every checkpoint of a build-universal trace.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        /// Also perturb this many protected coefficients (chosen with
        /// --seed) and require each perturbation to be rejected.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("padelab: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn emit<T: serde::Serialize>(out: &OutArgs, doc: &T) -> CliResult {
    match &out.out {
        Some(p) => write(p, doc),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Pade { series, m, n, poles, out } => cmd_pade(&series, m, n, poles.as_deref(), &out),
        Command::Table { series, max_m, max_n, out } => cmd_table(&series, max_m, max_n, &out),
        Command::PlacePole { config, poles, out } => cmd_place(&config, false, poles.as_deref(), &out),
        Command::PlaceZero { config, poles, out } => cmd_place(&config, true, poles.as_deref(), &out),
        Command::PolesAway { config, poles, out } => cmd_poles_away(&config, poles.as_deref(), &out),
        Command::BuildUniversal { config, certificates, out } => cmd_build(&config, certificates.as_deref(), &out),
        Command::GapBuild { config, certificates, out } => cmd_gap_build(&config, certificates.as_deref(), &out),
        Command::GapTransfer { gap, denominator, csv, out } => cmd_transfer(&gap, &denominator, csv.as_deref(), &out),
        Command::SpanCheck { config, out } => cmd_span(&config, &out),
        Command::Verify { trace, mutations, out } => cmd_verify(&trace, mutations, cli.seed, &out),
    }
}

fn describe(r: &PadeResult) -> String {
    format!(
        "[S; {}/{}] = ({}) / ({})\nstatus: {}\nC_mn: {}\nC_m1n: {}",
        r.m,
        r.n,
        r.numerator,
        r.denominator,
        r.status_label(),
        r.c_mn,
        r.c_m1n
    )
}

fn cmd_pade(series: &Path, m: usize, n: usize, poles: Option<&Path>, out: &OutArgs) -> CliResult {
    let doc: SeriesDoc = read(series)?;
    let r = pade(&doc.series, m, n).core()?;
    println!("{}", describe(&r));
    if let Some(p) = poles {
        let rows = if r.exists() { tables::pole_rows(m, n, &r.denominator, 52)? } else { Vec::new() };
        tables::write_poles(p, rows)?;
    }
    emit(out, &PadeDoc { schema_version: SCHEMA_VERSION, result: r })
}

fn flag(r: &PadeResult) -> char {
    match r.status_label() {
        "normal" => 'N',
        "exists-non-normal" => 'E',
        "degenerate" => 'D',
        _ => 'X',
    }
}

fn cmd_table(series: &Path, max_m: usize, max_n: usize, out: &OutArgs) -> CliResult {
    let doc: SeriesDoc = read(series)?;
    let cells = pade_table(&doc.series, max_m, max_n).core()?;
    println!("flags: N normal, E exists (not normal), D degenerate, X does not exist; C = C_mn");
    for row in cells.chunks(max_n + 1) {
        let line: Vec<String> = row.iter().map(|r| format!("{} C={}", flag(r), r.c_mn)).collect();
        println!("m={}: {}", row[0].m, line.join(" | "));
    }
    for r in cells.iter().filter(|r| r.exists()) {
        println!("({},{}) ({}) / ({})", r.m, r.n, r.numerator, r.denominator);
    }
    emit(
        out,
        &TableDoc {
            schema_version: SCHEMA_VERSION,
            max_m,
            max_n,
            cells,
        },
    )
}

fn cmd_place(config: &Path, zero: bool, poles: Option<&Path>, out: &OutArgs) -> CliResult {
    let c: PlacementConfig = read(config)?;
    let w = if zero {
        place_zero(&c.base, c.m, c.n, &c.target, &c.c1)
    } else {
        place_pole(&c.base, c.m, c.n, &c.target, &c.c1)
    }
    .core()?;
    let r = w.approximant().core()?;
    println!("c2 = {}", w.c2);
    println!("C_mn = {} (c1 a^(n-1) with sign {})", r.c_mn, if padelab::poles::hankel_sign_negative(c.n) { "-" } else { "+" });
    println!("{}", describe(&r));
    if let Some(p) = poles {
        tables::write_poles(p, tables::pole_rows(c.m, c.n, &r.denominator, c.precision)?)?;
    }
    emit(
        out,
        &WitnessDoc {
            schema_version: SCHEMA_VERSION,
            witness: w,
            approximant: r,
        },
    )
}

fn cmd_poles_away(config: &Path, poles: Option<&Path>, out: &OutArgs) -> CliResult {
    let c: PolesAwayConfig = read(config)?;
    let f = poles_outside_disk_witness(&c.base, c.m, c.n, &c.mu, c.truncation).core()?;
    let r = pade(&f, c.m, c.n).core()?;
    println!("{}", describe(&r));
    println!("all {} poles at {}", c.n, c.mu);
    if let Some(p) = poles {
        tables::write_poles(p, tables::pole_rows(c.m, c.n, &r.denominator, c.precision)?)?;
    }
    emit(
        out,
        &PolesAwayDoc {
            schema_version: SCHEMA_VERSION,
            series: f,
            approximant: r,
        },
    )
}

fn cmd_build(config: &Path, certificates: Option<&Path>, out: &OutArgs) -> CliResult {
    let c: BuildConfig = read(config)?;
    let spec = DenominatorSpec::from_roots(c.roots).core()?;
    let tasks: Vec<_> = c.tasks.iter().map(TaskDoc::task).collect();
    let trace =
        build_universal_with(&spec, &tasks, &c.mu, &c.t, &c.l.disk(), &c.epsilon0, c.rounds, &c.oracle).core()?;
    for s in &trace.steps {
        println!(
            "step {} task {}: valuation {}, checkpoint {}, fit degree {}",
            s.j, s.task, s.valuation, s.checkpoint, s.fit_degree
        );
    }
    for cert in &trace.certificates {
        println!(
            "certificate step {} p {}: K error {:e}, L error {:e}, denominator {}",
            cert.step,
            cert.p,
            bound_to_f64(&cert.err_k),
            bound_to_f64(&cert.err_l),
            cert.denominator
        );
    }
    println!("sampled |f - T| on L: {:e}", bound_to_f64(&trace.disk_error));
    if let Some(p) = certificates {
        tables::write_certificates(p, &trace.certificates)?;
    }
    emit(
        out,
        &TraceDoc {
            schema_version: SCHEMA_VERSION,
            spec,
            trace,
        },
    )
}

fn cmd_gap_build(config: &Path, certificates: Option<&Path>, out: &OutArgs) -> CliResult {
    let c: GapConfig = read(config)?;
    let tasks: Vec<_> = c.tasks.iter().map(TaskDoc::task).collect();
    let schedule = c.schedule.schedule().core()?;
    let b = build_gap_series_with(&c.mu, &schedule, &tasks, &c.t, &c.l.disk(), &c.epsilon0, c.rounds, &c.oracle)
        .core()?;
    for cert in &b.certificates {
        println!(
            "certificate step {} gap {} p {}: K error {:e}, L error {:e}, a_p nonzero: {}",
            cert.step,
            cert.m,
            cert.p,
            bound_to_f64(&cert.err_k),
            bound_to_f64(&cert.err_l),
            cert.leading_nonzero
        );
    }
    println!("series length {}", b.series.g.truncation_len());
    if let Some(p) = certificates {
        tables::write_gap_certificates(p, &b.certificates)?;
    }
    emit(
        out,
        &GapDoc {
            schema_version: SCHEMA_VERSION,
            build: b,
        },
    )
}

fn cmd_transfer(gap: &Path, denominator: &Path, csv: Option<&Path>, out: &OutArgs) -> CliResult {
    let g: GapDoc = read(gap)?;
    let d: DenominatorDoc = read(denominator)?;
    let spec = DenominatorSpec::from_roots(d.roots).core()?;
    let report = transfer_to_pade(&g.build.series, &spec).core()?;
    for c in &report.certificates {
        println!(
            "checkpoint {} p {}: [g/Q; {}/{}] = S_p(g)/Q exact, coprime {}, normal {}",
            c.m, c.p, c.p, c.q, c.coprime, c.normal
        );
    }
    if let Some(p) = csv {
        tables::write_transfer(p, &report.certificates)?;
    }
    emit(
        out,
        &TransferDoc {
            schema_version: SCHEMA_VERSION,
            spec,
            report,
        },
    )
}

fn cmd_span(config: &Path, out: &OutArgs) -> CliResult {
    let c: SpanConfig = read(config)?;
    let members: Vec<_> = c.members.into_iter().map(|m| (m.series, m.alpha)).collect();
    let cert = span_pade_check(&members, c.m, c.q).map_err(|e| match e {
        Error::DenominatorMismatch(_) | Error::NotExists { .. } => CliError::Verify(e.to_string()),
        e => CliError::from_core(e),
    })?;
    println!("[g; {}/{}] = {}", c.m, c.q, cert.result.rational());
    println!("linear combination matches exactly; reduced denominator {} (p0 = {})", cert.reduced_denominator, cert.p0);
    emit(
        out,
        &SpanDoc {
            schema_version: SCHEMA_VERSION,
            certificate: cert,
        },
    )
}

fn cmd_verify(trace: &Path, mutations: usize, seed: u64, out: &OutArgs) -> CliResult {
    let doc: TraceDoc = read(trace)?;
    doc.spec.validate().core()?;
    let checkpoints = verify_trace(&doc.trace, &doc.spec).map_err(|e| CliError::Verify(e.to_string()))?;
    for c in &checkpoints {
        println!(
            "step {} p {}: [f; {}/{}] = f_j/Q exact, normal, |C_mn| ~ {:e}, |C_m1n| ~ {:e}",
            c.step,
            c.p,
            c.p,
            c.q,
            c.c_mn.to_complex64().norm(),
            c.c_m1n.to_complex64().norm()
        );
    }
    let sites = protected_sites(&doc.trace, &doc.spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    for i in 0..mutations {
        let Some(&site) = sites.choose(&mut rng) else {
            return Err(CliError::Config("trace has no protected coefficients to mutate".into()));
        };
        let delta = GR::complex(rng.gen_range(1..=9), 1 << 20, rng.gen_range(-9..=9), 1 << 20);
        let bad = mutate_trace(&doc.trace, site, &delta).core()?;
        match verify_trace(&bad, &doc.spec) {
            Err(e) => {
                rejected += 1;
                println!("mutation {i} at {site:?} by {delta}: rejected ({e})");
            }
            Ok(_) => println!("mutation {i} at {site:?} by {delta}: NOT rejected"),
        }
    }
    emit(
        out,
        &VerifyDoc {
            schema_version: SCHEMA_VERSION,
            checkpoints,
            mutations_rejected: rejected,
            mutations_tried: mutations,
        },
    )?;
    if rejected < mutations {
        return Err(CliError::Verify(format!("{} of {mutations} mutations went unnoticed", mutations - rejected)));
    }
    Ok(())
}
