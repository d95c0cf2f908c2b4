use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval {index} overlaps or touches its predecessor (b_{prev} >= a_{index})", prev = .index - 1)]
    Overlap { index: usize },
    #[error("interval {index} is reversed (a > b)")]
    ReversedInterval { index: usize },
    #[error("degenerate time scale: {segments} segments and {points} isolated points (need segments > 0 or points >= 3)")]
    DegenerateScale { segments: usize, points: usize },
    #[error("time scale must contain at least one interval")]
    EmptyScale,
    #[error("point {0} does not belong to the time scale")]
    NotInScale(f64),
    #[error("{0} is not an interval endpoint of the time scale")]
    EndpointNotBreakpoint(f64),
    #[error("integration bounds must satisfy a <= b (got {a} > {b})")]
    ReversedBounds { a: f64, b: f64 },
    #[error("potential value q(b_{0}) is required but missing")]
    MissingPotentialValue(usize),
    #[error("potential value given for interval {0}, which is not an isolated point of the core domain")]
    UnexpectedPotentialValue(usize),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("index {what} = {value} is out of range {lo}..={hi}")]
    IndexOutOfRange { what: &'static str, value: usize, lo: usize, hi: usize },
    #[error("ODE integrator failed: {0}")]
    IntegratorFailure(String),
    #[error("exact backend requires a purely discrete time scale (N = 0), found N = {0}")]
    BackendMismatch(usize),
    #[error("root search suspects missed eigenvalues near lambda = {0} after grid refinement")]
    RootMissSuspected(f64),
    #[error("degenerate polynomial: {0}")]
    PolynomialDegenerate(String),
    #[error("characteristic function has a non-simple zero near lambda = {0}")]
    NonSimpleZero(f64),
    #[error("lambda = {0} is a pole of the Weyl function")]
    PoleHit(f64),
    #[error("expected {expected} eigenvalues, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("segment lengths are not commensurable")]
    NotCommensurable,
    #[error("spectrum has no eigenvalue labelled as branch {k}, n = {n}")]
    LabelMismatch { k: usize, n: usize },
    #[error("inconsistent spectral data: {0}")]
    InconsistentData(String),
    #[error("D_0^{0} vanishes identically; division impossible")]
    DivisionDegenerate(usize),
    #[error("step {step}: quotient D_0^m / D_0^(m+1) has degree {degree}, expected 1")]
    NonLinearQuotient { step: usize, degree: usize },
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error stems from malformed or inconsistent input, as opposed
    /// to a failure during computation.
    pub fn is_validation(&self) -> bool {
        use Error::*;
        matches!(
            self,
            Overlap { .. }
                | ReversedInterval { .. }
                | DegenerateScale { .. }
                | EmptyScale
                | NotInScale(_)
                | EndpointNotBreakpoint(_)
                | ReversedBounds { .. }
                | MissingPotentialValue(_)
                | UnexpectedPotentialValue(_)
                | InvalidPotential(_)
                | IndexOutOfRange { .. }
                | BackendMismatch(_)
                | WrongCount { .. }
                | LengthMismatch { .. }
                | InconsistentData(_)
                | NotSupported(_)
                | Parse(_)
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            Overlap { .. } => "OverlapError",
            ReversedInterval { .. } => "ReversedInterval",
            DegenerateScale { .. } => "DegenerateScale",
            EmptyScale => "EmptyScale",
            NotInScale(_) => "NotInScale",
            EndpointNotBreakpoint(_) => "EndpointNotBreakpoint",
            ReversedBounds { .. } => "ReversedBounds",
            MissingPotentialValue(_) => "MissingPotentialValue",
            UnexpectedPotentialValue(_) => "UnexpectedPotentialValue",
            InvalidPotential(_) => "InvalidPotential",
            IndexOutOfRange { .. } => "IndexOutOfRange",
            IntegratorFailure(_) => "IntegratorFailure",
            BackendMismatch(_) => "BackendMismatch",
            RootMissSuspected(_) => "RootMissSuspected",
            PolynomialDegenerate(_) => "PolynomialDegenerate",
            NonSimpleZero(_) => "NonSimpleZero",
            PoleHit(_) => "PoleHit",
            WrongCount { .. } => "WrongCount",
            LengthMismatch { .. } => "LengthMismatch",
            NotCommensurable => "NotCommensurable",
            LabelMismatch { .. } => "LabelMismatch",
            InconsistentData(_) => "InconsistentData",
            DivisionDegenerate(_) => "DivisionDegenerate",
            NonLinearQuotient { .. } => "NonLinearQuotient",
            NotSupported(_) => "NotSupported",
            Parse(_) => "ParseError",
        }
    }
}

pub(crate) fn check_index(what: &'static str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        Err(Error::IndexOutOfRange { what, value, lo, hi })
    } else {
        Ok(())
    }
}
