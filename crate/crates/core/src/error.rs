use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "invalid grid: n1={n1}, n2={n2}, length={length} (need even n >= 8 and positive length)"
    )]
    InvalidGrid { n1: usize, n2: usize, length: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("expected {expected} representation")]
    Representation { expected: &'static str },

    #[error("multiplier is singular at mode ({k1}, {k2})")]
    SingularMultiplier { k1: i64, k2: i64 },

    #[error("composite Simpson needs an odd node count >= 3, got {0}")]
    QuadratureNodes(usize),

    #[error("homogeneous part requested without the F0 sample at t = 0")]
    MissingInitialSource,

    #[error("negative weight exponent with a zero angle between nonzero modes")]
    SingularWeight,

    #[error("lattice {nt}x{n1}x{n2} exceeds the direct-summation cap of {cap} per axis")]
    LatticeTooLarge {
        nt: usize,
        n1: usize,
        n2: usize,
        cap: usize,
    },

    #[error("non-finite values at t = {time} (step {step})")]
    Divergence { time: f64, step: usize },

    #[error("scaling factor {0} is not a power of two")]
    InvalidScaling(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown reduction list `{0}`")]
    UnknownList(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
