use thiserror::Error;

/// Errors raised by the geometry, flow, stochastic and polygon engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of a formula (r ≤ 0, d < 1, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller passed an argument combination the operation does not accept.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("curve collapsed through origin at t = {t}")]
    CurveCollapsed { t: f64 },
    #[error("stiffness/blow-up at t = {t}, reduce dt")]
    BlowUp { t: f64 },
    #[error("event localization failed: {0}")]
    EventLocalization(String),
    #[error("degenerate germ: {0}")]
    DegenerateGerm(String),
    #[error("invalid sampler: {0}")]
    InvalidSampler(String),
    #[error("polygon vanished: offset {t} exceeds inradius {inradius}")]
    PolygonVanished { t: f64, inradius: f64 },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("geometry reconstruction inconsistent with the pentagon model: {0}")]
    Reconstruction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
