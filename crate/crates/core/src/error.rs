use thiserror::Error;

/// Per-iteration progress of a simultaneous root iteration, kept for
/// non-convergence reports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IterationTrace {
    /// Number of roots still moving after each sweep.
    pub active: Vec<usize>,
    /// log2 of the largest relative correction of each sweep.
    pub max_correction_log2: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("denominator parameter b_{j}(n) = {value} is a nonpositive integer")]
    DenominatorParameter { j: usize, value: String },

    #[error("degenerate pencil: alpha_{i} = 0")]
    DegeneratePencil { i: usize },

    #[error("precision {0} bits is below the 64-bit minimum")]
    PrecisionTooLow(u32),

    #[error("polynomial is constant and has no zeros")]
    ConstantPolynomial,

    #[error("root iteration did not converge at {precision} bits after {} sweeps", trace.active.len())]
    NonConvergence { precision: u32, trace: IterationTrace },

    #[error("root certification failed at {precision} bits: worst relative residual 2^{worst_log2:.1} above threshold 2^{threshold_log2:.1}")]
    Uncertified {
        precision: u32,
        worst_log2: f64,
        threshold_log2: f64,
        trace: IterationTrace,
    },

    #[error("evaluation point coincides with a zero (distance {distance:e})")]
    Pole { distance: f64 },

    #[error("singular point z = {0}: {1}")]
    Singular(String, &'static str),

    #[error("discriminant vanishes identically: the curve is non-reduced")]
    NonReduced,

    #[error("schedule is not degenerate: beta_{i} != alpha_{}", i + 1)]
    NotDegenerate { i: usize },

    #[error("branch collision along path near {at}: separation {separation:e}, reroute the path")]
    BranchCollision { at: String, separation: f64 },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("branch index {0} out of range 1..={1}")]
    BranchIndex(usize, usize),

    #[error("seed {} is a critical point of the level function; outgoing directions {:?}", .0.z, .0.directions)]
    CriticalSeed(Box<crate::potential::CriticalPoint>),

    #[error("level trace failed: {0}")]
    Trace(String),

    #[error("no zeros satisfy the restriction; the distance report is vacuous")]
    Vacuous,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
