use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {q_re}+{q_im}i lies outside the admissible disc |q| <= {r_max}")]
    ParameterOutOfDomain { q_re: f64, q_im: f64, r_max: f64 },

    #[error("evaluation point with modulus {modulus} is not inside the open unit disc")]
    OutsideDisc { modulus: f64 },

    #[error("input function is zero")]
    ZeroInput,

    #[error("candidate kernel is zero")]
    ZeroCandidate,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("every grid point is numerically in the span of the current system")]
    ExhaustedDictionary,

    #[error("plan parameter {index} is degenerate: {reason}")]
    DegeneratePlan { index: usize, reason: String },

    #[error("system is ill-conditioned (condition estimate {estimate:.3e} > {limit:.1e})")]
    IllConditioned { estimate: f64, limit: f64 },

    #[error("requested {requested} terms but only {available} are available")]
    TermsExceeded { requested: usize, available: usize },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) => 2,
            Error::MalformedInput(_) | Error::Json(_) | Error::Csv(_) => 3,
            Error::Io(_) => 4,
            Error::ParameterOutOfDomain { .. } | Error::OutsideDisc { .. } => 5,
            Error::ZeroInput | Error::ZeroCandidate => 6,
            Error::ExhaustedDictionary => 7,
            Error::DegeneratePlan { .. } => 8,
            Error::IllConditioned { .. } => 9,
            Error::TermsExceeded { .. } => 10,
        }
    }

    /// Short machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParameterOutOfDomain { .. } => "parameter-out-of-domain",
            Error::OutsideDisc { .. } => "outside-disc",
            Error::ZeroInput => "zero-input",
            Error::ZeroCandidate => "zero-candidate",
            Error::InvalidConfig(_) => "invalid-config",
            Error::ExhaustedDictionary => "exhausted-dictionary",
            Error::DegeneratePlan { .. } => "degenerate-plan",
            Error::IllConditioned { .. } => "ill-conditioned",
            Error::TermsExceeded { .. } => "terms-exceeded",
            Error::MalformedInput(_) => "malformed-input",
            Error::Io(_) => "io",
            Error::Json(_) => "malformed-input",
            Error::Csv(_) => "malformed-input",
        }
    }
}
