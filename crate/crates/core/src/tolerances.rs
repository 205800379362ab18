//! Default tolerances and sizes. Every threshold used by the checks lives
//! here so the CLI, the tests and the acceptance suite agree.

/// `σ_min ≤ SINGULAR_RTOL · σ_max` is treated as singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Negative eigenvalues in `[−CLAMP_TOL, 0)` are clamped by `psd_sqrt`.
pub const CLAMP_TOL: f64 = 1e-10;

/// Relative asymmetry accepted as Hermitian by `psd_sqrt`.
pub const HERMITIAN_RTOL: f64 = 1e-9;

/// Algebraic relations of a pair (`ZW = WZ = 1/r²` or `= 0`).
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Residuals of the five dilation properties.
pub const PROPERTY_TOL: f64 = 1e-8;

/// Operator identity of the estimate.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Slack between the open domains and the sampled operators.
pub const DEFAULT_MARGIN: f64 = 1e-3;

/// Boundary points per circle for sup-norm scans.
pub const DEFAULT_GRID: usize = 4096;

/// Smallest accepted boundary grid.
pub const MIN_GRID: usize = 64;

/// Largest matrix dimension accepted by the samplers and the CLI.
pub const DEFAULT_DIM_CAP: usize = 64;

/// Laurent degrees are kept within `[−DEGREE_CAP, DEGREE_CAP]`.
pub const DEGREE_CAP: usize = 32;
