use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {msg}")]
    MalformedInput { line: usize, msg: String },

    #[error("face {face} of tetrahedron {tet} is not glued")]
    UnpairedFace { tet: usize, face: usize },

    #[error(
        "gluing of tetrahedron {tet} face {face} is not involutive \
         (partner tetrahedron {other_tet} face {other_face} does not glue back)"
    )]
    NonInvolutiveGluing {
        tet: usize,
        face: usize,
        other_tet: usize,
        other_face: usize,
    },

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("inconsistent identification signs: {0}")]
    InconsistentSigns(String),

    #[error("identification signs for n = {n} are unknown on a non-ordered triangulation; supply a `signs {n}` table")]
    UnsupportedSigns { n: u32 },

    #[error("nontrivial obstruction cocycles are only supported for n = 2 (got n = {n})")]
    UnsupportedObstruction { n: u32 },

    #[error("invalid obstruction cocycle: {0}")]
    InvalidCocycle(String),

    #[error("H^2 has 2^{dim} classes, above the enumeration cap of {cap}")]
    GroupTooLarge { dim: usize, cap: usize },

    #[error("unexpected cokernel of alpha*: invariant factors {factors:?}, expected Z/{n}")]
    UnexpectedCokernel { n: u32, factors: Vec<String> },

    #[error("no basic generator set found")]
    NoBasicSet,

    #[error("Groebner basis computation exceeded the budget of {pairs} pairs")]
    BudgetExceeded { pairs: usize },

    #[error("system has {vars} variables, above the cap of {cap}")]
    TooManyVariables { vars: usize, cap: usize },

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("factorization could not be verified exactly")]
    FactorizationUnverified,

    #[error("requested precision not reached (residual {residual:e})")]
    PrecisionNotReached { residual: f64 },

    #[error("face product violation on tetrahedron {tet} face {face} (residual {residual:e})")]
    FaceProductViolation { tet: usize, face: usize, residual: f64 },

    #[error("cusp {cusp} is boundary-trivial")]
    BoundaryTrivialCusp { cusp: usize },

    #[error("recovered coordinate of class {class} differs from the solution (residual {residual:e})")]
    RecoveryMismatch { class: usize, residual: f64 },

    #[error("degenerate shape on tetrahedron {tet}")]
    DegenerateShape { tet: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn malformed(line: usize, msg: impl Into<String>) -> Self {
        Error::MalformedInput { line, msg: msg.into() }
    }

    /// True for failures caused by computational limits rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::GroupTooLarge { .. }
                | Error::BudgetExceeded { .. }
                | Error::TooManyVariables { .. }
                | Error::PrecisionNotReached { .. }
                | Error::FactorizationUnverified
        )
    }
}
