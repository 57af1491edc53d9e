use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands come from incompatible scalar extensions")]
    MixedExtension,
    #[error("evaluation point is a pole")]
    PoleAtPoint,
    #[error("metric entry f^{0} is not a rational square at the evaluation point")]
    NonSquareRoot(usize),
    #[error("square root of f^{0} is not registered in this tower")]
    RootNotRegistered(usize),
    #[error("too many base coordinates: {0} (at most {1} supported)")]
    TooManyCoordinates(usize, usize),
    #[error("index {what} = {value} out of range")]
    IndexOutOfRange { what: &'static str, value: i64 },
    #[error("element is not polynomial: {0}")]
    NotPolynomial(String),
    #[error("element is not homogeneous in super degree")]
    NonHomogeneous,
    #[error("[P, P] does not vanish")]
    UnverifiedStructure,
    #[error("metric entry f^{0} vanishes")]
    ZeroMetricEntry(usize),
    #[error("pair is not bihamiltonian: {0}")]
    NotBihamiltonian(String),
    #[error("expected bidegree (p, d) = ({want_p}, {want_d}), found ({got_p}, {got_d})")]
    WrongBidegree {
        want_p: i32,
        want_d: i32,
        got_p: i32,
        got_d: i32,
    },
    #[error("c_{0} must depend on u^{0} only")]
    NotSingleVariable(usize),
    #[error("form is not a cocycle of the double complex")]
    NotACocycle,
    #[error("f^{0} is not homogeneous in the base coordinates")]
    NotHomogeneous(usize),
    #[error("irreducibility condition fails for (i, j) = ({0}, {1})")]
    IrreducibilityViolated(usize, usize),
    #[error("conformality check failed: {0}")]
    ConformalityFailed(String),
    #[error("lambda_1 equals lambda_0")]
    DegenerateScaling,
    #[error("form does not have the expected shape: {0}")]
    WrongShape(String),
    #[error("unknown space {0:?}")]
    UnknownSpace(String),
    #[error("linear system too large: {0} unknowns")]
    SystemTooLarge(usize),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
