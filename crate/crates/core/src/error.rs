use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("profile is not compactly supported (far-field values {left} and {right})")]
    NotCompactlySupported { left: f64, right: f64 },

    #[error("weight must be nonnegative, found {0}")]
    NegativeWeight(f64),

    #[error("no front between equal states {0}")]
    EqualStates(f64),

    #[error("collision at t = {collision} precedes current time {now}")]
    TimeInconsistency { collision: f64, now: f64 },

    #[error("front-tracking invariant violated at t = {time}: {what}")]
    InvariantViolated { time: f64, what: String },

    #[error(
        "coincident fronts of both solutions at x = {x}, t = {t}; \
         perturb one initial datum by an offset of at least 1e-9"
    )]
    CoincidentFronts { x: f64, t: f64 },

    #[error("time {t} outside the evolved horizon [{start}, {end}]")]
    OutsideHorizon { t: f64, start: f64, end: f64 },

    #[error("field has no {0} information")]
    MissingFieldData(&'static str),

    #[error("characteristic through ({x}, {t}) is not unique: rarefaction shock on its path")]
    NonUniqueCharacteristic { x: f64, t: f64 },

    #[error("no admissible characteristic direction at ({x}, {t})")]
    NoCharacteristic { x: f64, t: f64 },

    #[error("unknown flux `{0}`")]
    UnknownFlux(String),

    #[error("flux is not strictly convex on [{lo}, {hi}] (modulus {modulus})")]
    NotStrictlyConvex { lo: f64, hi: f64, modulus: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
