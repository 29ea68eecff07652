use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} needs a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("matrix dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("matrix is singular: {0}")]
    Singular(&'static str),

    #[error("site pair ({k},{l}) invalid for a chain of {n} sites (need 1 <= k < l <= n)")]
    SiteIndex { k: usize, l: usize, n: usize },

    #[error("chain length {n} unsupported: {reason}")]
    ChainLength { n: usize, reason: &'static str },

    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),

    #[error(
        "W = lambda1 - 1/lambda1 vanishes (lambda1 = {lambda1}); the loop value is undefined here. \
         Reach q = 1 through topo::q1_limit_rep (extrapolated limit) or the rational spin-chain \
         construction in chain::rational_r"
    )]
    DegenerateW { lambda1: String },

    #[error("unitary case needs |lambda1| = |sigma| = 1, got |lambda1| = {l1_abs}, |sigma| = {sigma_abs}")]
    NotUnitaryParams { l1_abs: f64, sigma_abs: f64 },

    #[error("loop value d vanishes; the topological basis is degenerate")]
    VanishingLoop,

    #[error("lambda1 + 1/lambda1 vanishes; the closed-form B is undefined")]
    VanishingTrace,

    #[error("normalizer of e_{index} vanishes or is not positive (lambda = {lambda}, norm = {norm})")]
    Normalizer {
        index: usize,
        lambda: String,
        norm: String,
    },

    #[error("topological basis is not uni-orthogonal (deviation {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },

    #[error("relation suite failed on the constructed representation: {failed}")]
    RelationGate { failed: String },

    #[error("q -> 1 limit does not settle (spread {spread:.3e})")]
    DivergentLimit { spread: f64 },

    #[error("gauge must be a unitary diagonal 3x3 matrix")]
    BadGauge,

    #[error("invalid spin labels j = {j}, m' = {m_row}, m = {m_col}")]
    Spin { j: String, m_row: String, m_col: String },

    #[error("j = {0} exceeds the supported maximum 12")]
    SpinTooLarge(String),

    #[error("tangent pole: theta = {0} gives tan(theta/2) = 0 or infinity")]
    TangentPole(f64),

    #[error("phi undefined: cos(phi) = {cos_phi} lies outside [-1, 1]")]
    PhiUndefined { cos_phi: f64 },

    #[error("pole of the rational R-matrix at u = beta = {0}")]
    Pole(f64),

    #[error("not a probability distribution: {0}")]
    Distribution(String),

    #[error("grid too coarse: {0} points, need at least 100")]
    GridTooCoarse(usize),

    #[error("singlet sector has dimension {0}, expected 3")]
    SingletDimension(usize),

    #[error("m = 0 is excluded from this check")]
    MZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
