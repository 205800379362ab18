//! The bound `‖f(Z,W)‖ ≤ C(r)·‖f‖_{ℍ_r}` with `C(r) = 2(1 + 2r²/(r⁴ − 1))`,
//! the operator identity behind it, and randomized checks of both.

use rand::Rng;
use serde::Serialize;

use crate::calculus::{eval_pair_matrices, eval_polynomial};
use crate::dilation::{build_any, sample_pair, DilationResult};
use crate::error::{Error, Result};
use crate::laurent::{hyperbola_sup_norm, HyperbolaFunction};
use crate::numkernel::{self, norm, CMatrix, C64};
use crate::radius::Radius;
use crate::seeds;
use crate::tolerances::{DEFAULT_DIM_CAP, DEGREE_CAP, IDENTITY_TOL};

/// `1 + √2`, the best known upper bound for the spectral constant of the
/// annulus at every `r`.
pub const CITED_UPPER: f64 = 1.0 + std::f64::consts::SQRT_2;
/// The best known lower bound, valid for every `r`.
pub const CITED_LOWER: f64 = 2.0;
/// Explicit `O(1/r²)` constant: `C(r) − 2 ≤ 4.3/r²` for `r ≥ 2`.
pub const ASYMPTOTIC_CONSTANT: f64 = 4.3;

/// `C(r) = 2(1 + 2r²/(r⁴ − 1))`; `C(∞) = 2`.
pub fn bound_constant(r: Radius) -> f64 {
    match r {
        Radius::Finite(r) => {
            let r2 = r * r;
            2.0 * (1.0 + 2.0 * r2 / (r2 * r2 - 1.0))
        }
        Radius::Infinite => 2.0,
    }
}

/// Radius where `C(r) = 1 + √2`, from `r⁴ − k·r² − 1 = 0` with
/// `k = 4/(√2 − 1)`.
pub fn crossover_radius() -> f64 {
    let k = 4.0 / (std::f64::consts::SQRT_2 - 1.0);
    ((k + (k * k + 4.0).sqrt()) / 2.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// A bound from the literature.
    Cited,
    /// `C(r)`.
    Dilation,
}

/// Known two-sided envelope for the spectral constant at `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnownBounds {
    pub r: Radius,
    pub lower: f64,
    pub lower_source: BoundSource,
    pub upper: f64,
    pub upper_source: BoundSource,
    #[serde(rename = "C_r")]
    pub c_r: f64,
    /// `r*` with `C(r*) = 1 + √2`; `C(r)` is the better upper bound above it.
    pub crossover: f64,
}

pub fn known_bounds(r: Radius) -> KnownBounds {
    let c_r = bound_constant(r);
    let (upper, upper_source) =
        if c_r < CITED_UPPER { (c_r, BoundSource::Dilation) } else { (CITED_UPPER, BoundSource::Cited) };
    KnownBounds {
        r,
        lower: CITED_LOWER,
        lower_source: BoundSource::Cited,
        upper,
        upper_source,
        c_r,
        crossover: crossover_radius(),
    }
}

/// Left and right sides of the identity
///
/// ```text
/// c·U f U* = U(f⁺(Z)Z + a₀)Z* + W*(W f⁻(W) + a₀)U* + (1/r²)(U f⁺(Z) + f⁻(W) U*)
/// ```
///
/// evaluated at `(Z, W, U) = (Ẑ, Ŵ, (Ẑ + Ŵ*)/c)`.
pub fn identity_sides(hf: &HyperbolaFunction, d: &DilationResult) -> (CMatrix, CMatrix) {
    let (z, w, u) = (&d.z_hat, &d.w_hat, &d.u_big);
    let n = z.nrows();
    let a0 = numkernel::identity(n) * hf.a0;
    let fp = eval_polynomial(&hf.f_plus, z);
    let fm = eval_polynomial(&hf.f_minus, w);
    let f = eval_pair_matrices(hf, z, w);

    let lhs = u * f * u.adjoint() * C64::new(d.c, 0.0);
    let mut rhs = u * (&fp * z + &a0) * z.adjoint() + w.adjoint() * (w * &fm + &a0) * u.adjoint();
    let inv_sq = d.r().inv_sq();
    if inv_sq != 0.0 {
        rhs += (u * &fp + &fm * u.adjoint()) * C64::new(inv_sq, 0.0);
    }
    (lhs, rhs)
}

/// Operator norm of the difference of the two sides of [`identity_sides`].
pub fn identity_residual(hf: &HyperbolaFunction, d: &DilationResult) -> f64 {
    let (lhs, rhs) = identity_sides(hf, d);
    norm(&(lhs - rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub seed: u64,
    pub kind: String,
    pub value: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub r: Radius,
    #[serde(rename = "C_r")]
    pub c_r: f64,
    pub trials: usize,
    pub dim: usize,
    pub deg: usize,
    pub grid: usize,
    pub seed: u64,
    pub max_ratio: f64,
    /// Trial seed of the sample attaining `max_ratio`.
    pub witness_seed: u64,
    pub witness_index: u64,
    /// Largest `C(r)·certified_upper/grid_max` seen, the worst-case
    /// allowance including grid pads.
    pub max_allowed: f64,
    pub max_identity_residual: f64,
    pub violations: Vec<Violation>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct EstimateTrial {
    index: u64,
    seed: u64,
    ratio: f64,
    allowed: f64,
    identity: f64,
    violations: Vec<Violation>,
}

fn estimate_trial(r: Radius, dim: usize, deg: usize, grid: usize, seed: u64, index: u64) -> EstimateTrial {
    let mut rng = seeds::trial_rng(seed, index);
    let trial_seed = seeds::trial_seed(seed, index);
    let c_r = bound_constant(r);
    let mut violations = Vec::new();
    let violation =
        |kind: &str, value: f64, limit: f64| Violation { index, seed: trial_seed, kind: kind.into(), value, limit };

    let d = rng.random_range(1..=dim);
    let dp = rng.random_range(0..=deg);
    let dm = rng.random_range(0..=deg);
    let outcome = sample_pair(r, d, index, &mut rng).and_then(|pair| {
        let hf = HyperbolaFunction::random(dp, dm, &mut rng);
        let sup = hyperbola_sup_norm(&hf, r, grid)?;
        Ok((pair, hf, sup))
    });
    let (pair, hf, sup) = match outcome {
        Ok(v) => v,
        Err(e) => {
            return EstimateTrial {
                index,
                seed: trial_seed,
                ratio: 0.0,
                allowed: c_r,
                identity: 0.0,
                violations: vec![violation(&format!("sampling failed: {e}"), f64::NAN, f64::NAN)],
            }
        }
    };

    let value = norm(&eval_pair_matrices(&hf, pair.z(), pair.w()));
    let ratio = value / sup.grid_max;
    let allowed = c_r * sup.certified_upper / sup.grid_max * (1.0 + 4.0 * f64::EPSILON);
    if ratio.is_nan() || ratio > allowed {
        violations.push(violation("bound", ratio, allowed));
    }

    let identity = match build_any(&pair) {
        Ok(dil) => {
            let res = identity_residual(&hf, &dil);
            if res.is_nan() || res > IDENTITY_TOL {
                violations.push(violation("identity", res, IDENTITY_TOL));
            }
            res
        }
        Err(e) => {
            violations.push(violation(&format!("dilation failed: {e}"), f64::NAN, f64::NAN));
            f64::NAN
        }
    };
    EstimateTrial { index, seed: trial_seed, ratio, allowed, identity, violations }
}

/// Randomized check of the bound: each trial draws a pair of dimension
/// `1..=dim` and a function with `f⁺`, `f⁻` of degree `0..=deg`, compares
/// `‖f(Z,W)‖/grid_max` with `C(r)` (inflated by the grid pad), and checks
/// the operator identity on the dilated pair.
pub fn verify_estimate(
    r: Radius,
    dim: usize,
    deg: usize,
    trials: usize,
    seed: u64,
    grid: usize,
) -> Result<BoundReport> {
    if dim == 0 || dim > DEFAULT_DIM_CAP {
        return Err(Error::InvalidInput(format!("dim must be in 1..={DEFAULT_DIM_CAP}, got {dim}")));
    }
    if deg > DEGREE_CAP {
        return Err(Error::InvalidInput(format!("deg must be at most {DEGREE_CAP}, got {deg}")));
    }
    if grid < crate::tolerances::MIN_GRID {
        return Err(Error::InvalidInput(format!("grid must be at least {}, got {grid}", crate::tolerances::MIN_GRID)));
    }
    let outcomes = seeds::map_indices(trials, |i| estimate_trial(r, dim, deg, grid, seed, i as u64));

    let mut report = BoundReport {
        r,
        c_r: bound_constant(r),
        trials,
        dim,
        deg,
        grid,
        seed,
        max_ratio: 0.0,
        witness_seed: 0,
        witness_index: 0,
        max_allowed: 0.0,
        max_identity_residual: 0.0,
        violations: Vec::new(),
    };
    for t in outcomes {
        if t.ratio > report.max_ratio {
            report.max_ratio = t.ratio;
            report.witness_seed = t.seed;
            report.witness_index = t.index;
        }
        report.max_allowed = report.max_allowed.max(t.allowed);
        report.max_identity_residual = report.max_identity_residual.max(t.identity);
        report.violations.extend(t.violations);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub r: f64,
    /// `C(r) − 2`.
    pub excess: f64,
    /// `4.3/r²`.
    pub envelope: f64,
    /// `(C(r) − 2)·r²/4`, which tends to 1.
    pub normalized: f64,
    pub ok: bool,
}

/// Checks `C(r) − 2 ≤ 4.3/r²` at each `r ≥ 2`.
pub fn asymptotic_check(r_list: &[f64]) -> Result<Vec<AsymptoticRow>> {
    r_list
        .iter()
        .map(|&r| {
            if !(r >= 2.0 && r.is_finite()) {
                return Err(Error::InvalidInput(format!("asymptotic check needs finite r ≥ 2, got {r}")));
            }
            let excess = bound_constant(Radius::Finite(r)) - 2.0;
            let envelope = ASYMPTOTIC_CONSTANT / (r * r);
            Ok(AsymptoticRow { r, excess, envelope, normalized: excess * r * r / 4.0, ok: excess <= envelope })
        })
        .collect()
}
