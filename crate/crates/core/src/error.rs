use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("frequency {magnitude:e} rad/s is below the 1/omega pole floor")]
    DegenerateFrequency { magnitude: f64 },

    #[error("frequency {frequency:e} rad/s lies on the garnet resonance pole")]
    ResonancePole { frequency: f64 },

    #[error("|eps_zz| = {magnitude:e} is too small to eliminate the z components")]
    DegenerateEpsZZ { magnitude: f64 },

    #[error("mode at k_par = {k_par:e} rad/m neither decays nor grows (Re q = {re_q:e})")]
    BranchAmbiguity { k_par: f64, re_q: f64 },

    #[error("mode ratio denominator vanishes (|denominator| = {magnitude:e})")]
    RatioSingular { magnitude: f64 },

    #[error("boundary system is singular at xi = {xi:e}, k_par = {k_par:e}")]
    SingularBoundarySystem { xi: f64, k_par: f64 },

    #[error("round-trip matrix is singular (|det| = {det:e})")]
    NearSingularRoundTrip { det: f64 },

    #[error("force kernel trace has an imaginary part {imag:e} against real part {real:e}")]
    NonRealKernel { real: f64, imag: f64 },

    #[error("integrand returned a non-finite value at {abscissa:e} ({stage})")]
    NonFiniteEvaluation { abscissa: f64, stage: &'static str },

    #[error("argument {x} outside the domain {domain}")]
    DomainError { x: f64, domain: &'static str },

    #[error("no bound surface mode: {reason}")]
    NoRoot { reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
