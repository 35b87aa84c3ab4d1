use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse `{input}` as a Gaussian rational: {reason}")]
    Parse { input: String, reason: String },

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("coefficient a_{needed} requested but the series is truncated at length {available}")]
    Truncation { needed: usize, available: usize },

    #[error("constant term is zero: {0}")]
    ZeroConstantTerm(&'static str),

    #[error("denominator vanishes at sample point {point}")]
    PoleAtSample { point: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no Padé approximant of type ({m},{n}) exists")]
    NotExists { m: usize, n: usize },

    #[error(
        "degree escalation reached cap {cap} without meeting tolerance {epsilon} \
         (best sampled errors: K {best_k}, L {best_l})"
    )]
    EscalationFailed {
        cap: usize,
        epsilon: String,
        best_k: String,
        best_l: String,
    },

    #[error("derived coefficient c2 vanished; retry with a different c1")]
    DegenerateCoefficient,

    #[error("construction postcondition failed: {0}")]
    Postcondition(String),

    #[error("root iteration did not converge at {precision} bits after {iterations} iterations")]
    NonConvergence { precision: u32, iterations: usize },

    #[error("angle {alpha} lies within the guard band of root argument {argument}")]
    GuardBand { alpha: f64, argument: f64 },

    #[error("sequence mu has no element >= {needed}")]
    MuExhausted { needed: usize },

    #[error("verification mismatch at {context}: {detail}")]
    Mismatch { context: String, detail: String },

    #[error("schedule block {block} too tight: {detail}")]
    ScheduleTooTight { block: usize, detail: String },

    #[error("root {root} of Q is a zero of the partial sum at checkpoint p = {checkpoint}")]
    ZeroSetViolation { root: String, checkpoint: usize },

    #[error("gap at checkpoint p = {checkpoint} has width {width}, needs more than {needed}")]
    GapTooNarrow {
        checkpoint: usize,
        width: usize,
        needed: usize,
    },

    #[error("member denominators differ: {0}")]
    DenominatorMismatch(String),

    #[error("step {step} (task {task}) failed: {source}")]
    StepFailed {
        step: usize,
        task: usize,
        source: Box<Error>,
    },
}

impl Error {
    /// Innermost error, looking through step context.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::StepFailed { source, .. } => source.root_cause(),
            e => e,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
