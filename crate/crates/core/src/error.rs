use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("driver y(τ) fell to {y:e} at τ = {tau} (must stay positive)")]
    DriverNonPositive { tau: f64, y: f64 },

    #[error("grid index {n} outside recorded range {first}..={last}")]
    OutOfRange { n: i64, first: i64, last: i64 },

    #[error("closed rupture formulas assume p0 = 0, got p0 = {0}")]
    NonZeroInitialMomentum(f64),

    #[error("z0 = 0 gives C = 0; the trajectory sits at the origin and never ruptures")]
    ZeroInitialDisplacement,

    #[error("leading cubic coefficient {0:e} is degenerate (angle too close to π/2 + kπ)")]
    DegenerateLeadingCoefficient(f64),

    #[error("sin 2φ = {0:e} is singular for the rupture function")]
    AngleSingular(f64),

    #[error("ε = 0: no secular deformation, rupture time is infinite")]
    ZeroForcing,

    #[error("no real extremum: C^(1/3) = {c_cbrt} is not below y0 = {y0}")]
    NoRealExtremum { c_cbrt: f64, y0: f64 },

    #[error("no candidate angle satisfies the physical branch criteria")]
    NoPhysicalBranch,

    #[error("oracle found no rupture below n_max = {0}")]
    OracleExhausted(f64),

    #[error("no level-set points of the section n = {0} inside the window")]
    EmptySection(i64),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name, used in CLI error JSON and FFI messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::DriverNonPositive { .. } => "DriverNonPositive",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NonZeroInitialMomentum(_) => "NonZeroInitialMomentum",
            Error::ZeroInitialDisplacement => "ZeroInitialDisplacement",
            Error::DegenerateLeadingCoefficient(_) => "DegenerateLeadingCoefficient",
            Error::AngleSingular(_) => "AngleSingular",
            Error::ZeroForcing => "ZeroForcing",
            Error::NoRealExtremum { .. } => "NoRealExtremum",
            Error::NoPhysicalBranch => "NoPhysicalBranch",
            Error::OracleExhausted(_) => "OracleExhausted",
            Error::EmptySection(_) => "EmptySection",
            Error::Schema(_) => "Schema",
            Error::Io(_) => "Io",
            Error::Csv(_) => "Csv",
            Error::Json(_) => "Json",
        }
    }

    /// True for errors that come from the analytic domain of the closed forms
    /// rather than from numerics or I/O.
    pub fn is_analytic_domain(&self) -> bool {
        matches!(
            self,
            Error::ZeroForcing
                | Error::NoRealExtremum { .. }
                | Error::ZeroInitialDisplacement
                | Error::NoPhysicalBranch
                | Error::NonZeroInitialMomentum(_)
                | Error::AngleSingular(_)
                | Error::DegenerateLeadingCoefficient(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
