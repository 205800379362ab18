use thiserror::Error;

/// Errors raised by the kernel, the samplers and the constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is numerically singular (sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e})")]
    SingularMatrix { sigma_min: f64, sigma_max: f64 },

    #[error("matrix is not Hermitian (‖M − M*‖ = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{routine} did not converge: {detail}")]
    NumericFailure { routine: &'static str, detail: String },

    #[error("not a cross pair: ‖ZW‖ = {zw:e}, ‖WZ‖ = {wz:e}")]
    NotACrossPair { zw: f64, wz: f64 },

    #[error("Laurent polynomial with negative powers evaluated at zero")]
    ZeroArgument,

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("pair is outside the domain: {0}")]
    Membership(String),

    #[error("dilation construction failed: {0}")]
    Construction(String),

    #[error("ratio is undefined for the zero function")]
    ZeroFunction,
}

pub type Result<T> = std::result::Result<T, Error>;
