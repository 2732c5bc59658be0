use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polytope is unbounded: the rays do not positively span the ambient space")]
    UnboundedPolytope,
    #[error("polytope is not full-dimensional")]
    DegeneratePolytope,
    #[error("interval [{a}, {b}] lies outside the represented domain [{lo}, {hi}]")]
    OutOfDomain {
        a: String,
        b: String,
        lo: String,
        hi: String,
    },
    #[error("not a toric Fano model: {0}")]
    NotFano(String),
    #[error("unsupported subscheme: {0}")]
    UnsupportedSubscheme(String),
    #[error("ideal sheaf is the unit ideal or the zero ideal")]
    EmptyOrFull,
    #[error("chart {0} is not a smooth torus-fixed point")]
    NotSmoothPoint(usize),
    #[error("dimension {0} is too small for this operation (need n >= 2)")]
    DimensionTooSmall(usize),
    #[error("chart {0} is not smooth")]
    NotSmoothChart(usize),
    #[error("ideal is zero")]
    ZeroIdeal,
    #[error("family is not graded: a_{0} * a_{1} is not contained in a_(sum)")]
    FamilyNotGraded(u32, u32),
    #[error("no r1 found below the cap {0}")]
    R1NotFound(u32),
    #[error("finite differences did not stabilize with k_max = {0}")]
    NoStabilization(u32),
    #[error("intermediate generator count exceeded the cap {0}")]
    CombinatorialBlowup(usize),
    #[error("enumeration size exceeded the cap {0}")]
    SizeCap(usize),
    #[error("filtration level r = {0} is not tabulated")]
    LevelNotTabulated(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
