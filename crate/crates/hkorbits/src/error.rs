use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("singular form matrix")]
    SingularForm,
    #[error("elements belong to different algebras")]
    MixedOwners,
    #[error("matrix does not lie in the algebra (residual {0:e})")]
    NotInAlgebra(f64),
    #[error("unknown orbit {label} for {algebra}")]
    UnknownOrbit { algebra: String, label: String },
    #[error("parameter must be positive: {0}")]
    NonPositiveParameter(f64),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("zero element")]
    ZeroElement,
    #[error("parameters too close to a singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("invariant triple is not realizable: {0}")]
    Unrealizable(String),
    #[error("negative family constant c = {0}")]
    NegativeConstant(f64),
    #[error("input matrix is not {0}")]
    WrongSymmetry(&'static str),
    #[error("inconsistent sampling: {0}")]
    InconsistentSampling(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
