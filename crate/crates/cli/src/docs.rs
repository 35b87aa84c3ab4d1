//! JSON documents read and written by the CLI. Every document carries
//! `schema_version` and rejects unknown fields; rationals are strings.

use std::path::Path;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use padelab::approx::{circle_samples, CompactSetSpec, DiskSampleSpec, OracleConfig};
use padelab::gap::{GapBuild, GapSchedule, TransferReport};
use padelab::pade::PadeResult;
use padelab::poles::PolePlacementWitness;
use padelab::scalar::rational_str;
use padelab::universal::{BuildTrace, CheckpointCertificate, DenominatorSpec, MuSequence, SpanCertificate, UniversalTask};
use padelab::{Polynomial, PowerSeries, RationalFunction, GR};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub trait Versioned {
    fn schema_version(&self) -> u32;
}

macro_rules! versioned {
    ($($t:ty),*) => {$(
        impl Versioned for $t {
            fn schema_version(&self) -> u32 {
                self.schema_version
            }
        }
    )*};
}

versioned!(
    SeriesDoc,
    PlacementConfig,
    PolesAwayConfig,
    BuildConfig,
    TraceDoc,
    GapConfig,
    GapDoc,
    DenominatorDoc,
    SpanConfig
);

pub fn read<T: DeserializeOwned + Versioned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let doc: T = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if doc.schema_version() != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
            path.display(),
            doc.schema_version()
        )));
    }
    Ok(doc)
}

pub fn write<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn default_precision() -> u32 {
    52
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub schema_version: u32,
    pub series: PowerSeries,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadeDoc {
    pub schema_version: u32,
    pub result: PadeResult,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub schema_version: u32,
    pub max_m: usize,
    pub max_n: usize,
    pub cells: Vec<PadeResult>,
}

/// Input of `place-pole` and `place-zero`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementConfig {
    pub schema_version: u32,
    pub base: Polynomial,
    pub m: usize,
    pub n: usize,
    pub target: GR,
    pub c1: GR,
    #[serde(default = "default_precision")]
    pub precision: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub schema_version: u32,
    pub witness: PolePlacementWitness,
    pub approximant: PadeResult,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolesAwayConfig {
    pub schema_version: u32,
    pub base: Polynomial,
    pub m: usize,
    pub n: usize,
    pub mu: GR,
    pub truncation: usize,
    #[serde(default = "default_precision")]
    pub precision: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolesAwayDoc {
    pub schema_version: u32,
    pub series: PowerSeries,
    pub approximant: PadeResult,
}

/// Sample cloud: explicit points, or exact rational points on a circle.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Samples {
    Points {
        points: Vec<GR>,
    },
    Circle {
        center: GR,
        #[serde(with = "rational_str")]
        radius: BigRational,
        count: usize,
    },
}

impl Samples {
    pub fn points(&self) -> Vec<GR> {
        match self {
            Samples::Points { points } => points.clone(),
            Samples::Circle { center, radius, count } => circle_samples(center, radius, *count),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactDoc {
    pub samples: Samples,
    #[serde(with = "rational_str")]
    pub margin: BigRational,
    #[serde(default)]
    pub excluded: Vec<GR>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    pub target: RationalFunction,
    pub k: CompactDoc,
    #[serde(with = "rational_str")]
    pub epsilon: BigRational,
}

impl TaskDoc {
    pub fn task(&self) -> UniversalTask {
        UniversalTask {
            target: self.target.clone(),
            k: CompactSetSpec {
                samples: self.k.samples.points(),
                margin: self.k.margin.clone(),
                excluded: self.k.excluded.clone(),
            },
            epsilon: self.epsilon.clone(),
        }
    }
}

/// Disk `|z| <= radius` sampled at explicit points, or on its boundary
/// circle plus the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiskDoc {
    Points {
        points: Vec<GR>,
        #[serde(with = "rational_str")]
        radius: BigRational,
    },
    Circle {
        #[serde(with = "rational_str")]
        radius: BigRational,
        count: usize,
    },
}

impl DiskDoc {
    pub fn disk(&self) -> DiskSampleSpec {
        match self {
            DiskDoc::Points { points, radius } => DiskSampleSpec {
                samples: points.clone(),
                radius: radius.clone(),
            },
            DiskDoc::Circle { radius, count } => DiskSampleSpec::on_circle(radius.clone(), *count),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub schema_version: u32,
    /// Roots `w_i` of `Q(z) = prod (1 - z/w_i)`.
    pub roots: Vec<GR>,
    pub tasks: Vec<TaskDoc>,
    pub mu: MuSequence,
    pub t: Polynomial,
    pub l: DiskDoc,
    #[serde(with = "rational_str")]
    pub epsilon0: BigRational,
    pub rounds: usize,
    #[serde(default)]
    pub oracle: OracleConfig,
}

/// Output of `build-universal`, input of `verify`.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub schema_version: u32,
    pub spec: DenominatorSpec,
    pub trace: BuildTrace,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDoc {
    pub schema_version: u32,
    pub checkpoints: Vec<CheckpointCertificate>,
    pub mutations_rejected: usize,
    pub mutations_tried: usize,
}

/// Gap weight: an explicit table over `0..=q_last`, or `phi(x) = factor * x`
/// sampled into one.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightDoc {
    Table {
        #[serde(with = "padelab::gap::rational_vec")]
        values: Vec<BigRational>,
    },
    Linear {
        #[serde(with = "rational_str")]
        factor: BigRational,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub pairs: Vec<(usize, usize)>,
    pub weight: WeightDoc,
}

impl ScheduleDoc {
    pub fn schedule(&self) -> padelab::Result<GapSchedule> {
        match &self.weight {
            WeightDoc::Table { values } => GapSchedule::new(self.pairs.clone(), values.clone()),
            WeightDoc::Linear { factor } => GapSchedule::with_weight(self.pairs.clone(), |x| {
                factor * BigRational::from_integer((x as u64).into())
            }),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapConfig {
    pub schema_version: u32,
    pub mu: MuSequence,
    pub schedule: ScheduleDoc,
    pub tasks: Vec<TaskDoc>,
    pub t: Polynomial,
    pub l: DiskDoc,
    #[serde(with = "rational_str")]
    pub epsilon0: BigRational,
    pub rounds: usize,
    #[serde(default)]
    pub oracle: OracleConfig,
}

/// Output of `gap-build`, input of `gap-transfer`.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapDoc {
    pub schema_version: u32,
    pub build: GapBuild,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenominatorDoc {
    pub schema_version: u32,
    pub roots: Vec<GR>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferDoc {
    pub schema_version: u32,
    pub spec: DenominatorSpec,
    pub report: TransferReport,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanMember {
    pub series: PowerSeries,
    pub alpha: GR,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanConfig {
    pub schema_version: u32,
    pub m: usize,
    pub q: usize,
    pub members: Vec<SpanMember>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanDoc {
    pub schema_version: u32,
    pub certificate: SpanCertificate,
}
