//! Quantum annuli, quantum hyperbolae and the quantum cross: membership,
//! the correspondence `X ↦ (X/r, X⁻¹/r)`, and seeded samplers.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{self, complex_gaussian, haar_unitary, norm, CMatrix, C64};
use crate::seeds;
use crate::tolerances::DEFAULT_DIM_CAP;
use crate::Radius;

/// A pair `(Z, W)` on `Qℍ_r` (`ZW = WZ = 1/r²`) or, for `r = ∞`, on the
/// quantum cross (`ZW = WZ = 0`).
///
/// Construction only checks shapes and finiteness; use
/// [`HyperbolaPair::membership`] for the domain constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolaPair {
    z: CMatrix,
    w: CMatrix,
    r: Radius,
}

/// Per-constraint outcome of a membership test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    /// All constraints of the open domain hold (cross: norms ≤ 1).
    pub ok: bool,
    /// Constraints hold on the closed domain (norms ≤ 1 + tol). Dilated
    /// pairs live here.
    pub closure_ok: bool,
    pub norm_z: f64,
    pub norm_w: f64,
    /// `‖ZW − I/r²‖` (`‖ZW‖` on the cross).
    pub zw_residual: f64,
    /// `‖WZ − I/r²‖` (`‖WZ‖` on the cross).
    pub wz_residual: f64,
    pub tol: f64,
    pub failures: Vec<String>,
}

impl MembershipReport {
    /// Slack of each constraint, `[1 − ‖Z‖, 1 − ‖W‖, tol − zw, tol − wz]`;
    /// negative entries are violations.
    pub fn margins(&self) -> [f64; 4] {
        [1.0 - self.norm_z, 1.0 - self.norm_w, self.tol - self.zw_residual, self.tol - self.wz_residual]
    }
}

impl HyperbolaPair {
    pub fn new(z: CMatrix, w: CMatrix, r: Radius) -> Result<Self> {
        numkernel::ensure_valid(&z)?;
        numkernel::ensure_valid(&w)?;
        if z.nrows() != w.nrows() {
            return Err(Error::InvalidInput(format!("pair dimensions differ: {} and {}", z.nrows(), w.nrows())));
        }
        Ok(HyperbolaPair { z, w, r })
    }

    pub fn z(&self) -> &CMatrix {
        &self.z
    }

    pub fn w(&self) -> &CMatrix {
        &self.w
    }

    pub fn r(&self) -> Radius {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.z.nrows()
    }

    pub fn into_parts(self) -> (CMatrix, CMatrix, Radius) {
        (self.z, self.w, self.r)
    }

    pub fn membership(&self, tol: f64) -> MembershipReport {
        membership(self, tol)
    }
}

pub fn membership(h: &HyperbolaPair, tol: f64) -> MembershipReport {
    let n = h.dim();
    let target = numkernel::identity(n) * C64::new(h.r.inv_sq(), 0.0);
    let norm_z = norm(&h.z);
    let norm_w = norm(&h.w);
    let zw_residual = norm(&(&h.z * &h.w - &target));
    let wz_residual = norm(&(&h.w * &h.z - &target));

    let mut failures = Vec::new();
    let open_bound = |v: f64| match h.r {
        Radius::Finite(_) => v < 1.0,
        Radius::Infinite => v <= 1.0,
    };
    if !open_bound(norm_z) {
        failures.push(format!("‖Z‖ = {norm_z} is not inside the unit ball"));
    }
    if !open_bound(norm_w) {
        failures.push(format!("‖W‖ = {norm_w} is not inside the unit ball"));
    }
    let relation = if h.r.is_infinite() { "0" } else { "I/r²" };
    if zw_residual > tol {
        failures.push(format!("‖ZW − {relation}‖ = {zw_residual:e} exceeds {tol:e}"));
    }
    if wz_residual > tol {
        failures.push(format!("‖WZ − {relation}‖ = {wz_residual:e} exceeds {tol:e}"));
    }
    let relations_ok = zw_residual <= tol && wz_residual <= tol;
    MembershipReport {
        ok: failures.is_empty(),
        closure_ok: relations_ok && norm_z <= 1.0 + tol && norm_w <= 1.0 + tol,
        norm_z,
        norm_w,
        zw_residual,
        wz_residual,
        tol,
        failures,
    }
}

/// An operator with `‖X‖ ≤ r − margin` and `‖X⁻¹‖ ≤ r − margin`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusOperator {
    x: CMatrix,
    r: f64,
    margin: f64,
}

// Rounding slack when re-checking norms that were set by construction.
const NORM_SLACK: f64 = 1e-12;

impl AnnulusOperator {
    pub fn new(x: CMatrix, r: f64, margin: f64) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::InvalidInput("r must exceed 1 or be inf".into()));
        }
        if !(margin > 0.0 && r - margin > 1.0) {
            return Err(Error::InvalidInput(format!("margin must lie in (0, r − 1), got {margin} for r = {r}")));
        }
        let s = numkernel::singular_values(&x)?;
        let bound = (r - margin) * (1.0 + NORM_SLACK);
        let (smax, smin) = (s[0], s[s.len() - 1]);
        if smax > bound || smin * bound < 1.0 {
            return Err(Error::Membership(format!("singular values [{smin}, {smax}] leave [1/{0}, {0}]", r - margin)));
        }
        Ok(AnnulusOperator { x, r, margin })
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }
}

/// `X ↦ (X/r, X⁻¹/r)`.
pub fn hyperbola_from_annulus(a: &AnnulusOperator) -> Result<HyperbolaPair> {
    let inv_r = C64::new(1.0 / a.r, 0.0);
    let x_inv = numkernel::inverse(&a.x)?;
    HyperbolaPair::new(&a.x * inv_r, x_inv * inv_r, Radius::Finite(a.r))
}

/// `(Z, W) ↦ rZ`. The margin is the actual slack
/// `r − max(‖rZ‖, ‖(rZ)⁻¹‖)`, with `(rZ)⁻¹ = rW`.
pub fn annulus_from_hyperbola(h: &HyperbolaPair) -> Result<AnnulusOperator> {
    let r = h.r.finite().ok_or(Error::Unsupported("the cross (r = inf) has no annulus model"))?;
    let x = &h.z * C64::new(r, 0.0);
    let slack = r - (r * norm(&h.z)).max(r * norm(&h.w));
    if slack <= 0.0 {
        return Err(Error::Membership(format!("rZ leaves the quantum annulus (slack {slack})")));
    }
    let margin = slack.min(r - 1.0) * (1.0 - 1e-9);
    AnnulusOperator::new(x, r, margin)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > DEFAULT_DIM_CAP {
        return Err(Error::InvalidInput(format!("dim must lie in 1..={DEFAULT_DIM_CAP}, got {dim}")));
    }
    Ok(())
}

/// `Z = V₁·diag(a)·V₂*` with Haar `V₁, V₂` and `a_i` uniform in
/// `[1/r² + margin, 1 − margin]`; `W = (1/r²)·Z⁻¹`.
pub fn sample_quantum_hyperbola(dim: usize, r: f64, margin: f64, seed: u64) -> Result<HyperbolaPair> {
    sample_quantum_hyperbola_with(dim, r, margin, &mut seeds::rng(seed))
}

pub fn sample_quantum_hyperbola_with<R: Rng + ?Sized>(
    dim: usize,
    r: f64,
    margin: f64,
    rng: &mut R,
) -> Result<HyperbolaPair> {
    check_dim(dim)?;
    if !(r.is_finite() && r > 1.0) {
        return Err(Error::InvalidInput("r must exceed 1 or be inf".into()));
    }
    let inv_r2 = 1.0 / (r * r);
    if !(margin > 0.0 && margin < (1.0 - inv_r2) / 2.0) {
        return Err(Error::InvalidInput(format!(
            "margin must lie in (0, (1 − 1/r²)/2) = (0, {}), got {margin}",
            (1.0 - inv_r2) / 2.0
        )));
    }
    let v1 = haar_unitary(dim, rng);
    let v2 = haar_unitary(dim, rng);
    let (lo, hi) = (inv_r2 + margin, 1.0 - margin);
    let a: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
    let sigma = numkernel::real_diag(&a);
    let sigma_inv = numkernel::real_diag(&a.iter().map(|&x| inv_r2 / x).collect::<Vec<_>>());
    let z = &v1 * sigma * v2.adjoint();
    let w = &v2 * sigma_inv * v1.adjoint();
    HyperbolaPair::new(z, w, Radius::Finite(r))
}

/// Cross sampler family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossMode {
    /// `Z = Q·P·X·(I−P)·Q*`, `W = Q·P·Y·(I−P)·Q*` for a coordinate
    /// projection `P`. Both operators are nilpotent of order two.
    Structured,
    /// Random `Z` with a kernel, then `W = P_{ker Z}·G·P_{(ran Z)⊥}`. Covers
    /// every cross pair, including `W = 0` with `Z` invertible.
    General,
}

impl fmt::Display for CrossMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossMode::Structured => "structured",
            CrossMode::General => "general",
        })
    }
}

impl FromStr for CrossMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structured" => Ok(CrossMode::Structured),
            "general" => Ok(CrossMode::General),
            _ => Err(Error::InvalidInput(format!("unknown cross mode {s:?}"))),
        }
    }
}

// Norms of sampled cross operators are drawn from this range.
const CROSS_NORM_RANGE: (f64, f64) = (0.1, 0.999);

fn rescaled(m: CMatrix, target: f64) -> CMatrix {
    let n = norm(&m);
    if n == 0.0 {
        m
    } else {
        m * C64::new(target / n, 0.0)
    }
}

/// Structured cross pair: with `P` the projection on the first `k`
/// coordinates, `Z = Q·[[0, X], [0, 0]]·Q*` and `W = Q·[[0, Y], [0, 0]]·Q*`
/// where `X, Y` are `k × (n−k)`, rescaled to norms `norm_z`, `norm_w`.
pub fn structured_cross(
    q: &CMatrix,
    k: usize,
    x: &CMatrix,
    y: &CMatrix,
    norm_z: f64,
    norm_w: f64,
) -> Result<HyperbolaPair> {
    let n = q.nrows();
    if k == 0 || k >= n || x.shape() != (k, n - k) || y.shape() != (k, n - k) {
        return Err(Error::InvalidInput(format!(
            "structured cross needs 0 < k < n and k×(n−k) blocks (n = {n}, k = {k})"
        )));
    }
    let embed = |b: &CMatrix| {
        let mut m = CMatrix::zeros(n, n);
        m.view_mut((0, k), (k, n - k)).copy_from(b);
        q * m * q.adjoint()
    };
    HyperbolaPair::new(rescaled(embed(x), norm_z), rescaled(embed(y), norm_w), Radius::Infinite)
}

pub fn sample_quantum_cross(dim: usize, seed: u64, mode: CrossMode) -> Result<HyperbolaPair> {
    sample_quantum_cross_with(dim, mode, &mut seeds::rng(seed))
}

pub fn sample_quantum_cross_with<R: Rng + ?Sized>(dim: usize, mode: CrossMode, rng: &mut R) -> Result<HyperbolaPair> {
    check_dim(dim)?;
    let (lo, hi) = CROSS_NORM_RANGE;
    let norm_z = rng.random_range(lo..=hi);
    let norm_w = rng.random_range(lo..=hi);
    match mode {
        CrossMode::Structured => {
            if dim == 1 {
                let zero = CMatrix::zeros(1, 1);
                return HyperbolaPair::new(zero.clone(), zero, Radius::Infinite);
            }
            let q = haar_unitary(dim, rng);
            let k = rng.random_range(1..dim);
            let x = complex_gaussian(k, dim - k, rng);
            let y = complex_gaussian(k, dim - k, rng);
            structured_cross(&q, k, &x, &y, norm_z, norm_w)
        }
        CrossMode::General => {
            // Z = L·diag(d, 0)·R* with rank n − j; ker Z = R[:, n−j..],
            // (ran Z)⊥ = L[:, n−j..].
            let kernel_dim = rng.random_range(0..=dim);
            let rank = dim - kernel_dim;
            let l = haar_unitary(dim, rng);
            let r = haar_unitary(dim, rng);
            let d: Vec<f64> = (0..dim).map(|i| if i < rank { rng.random_range(0.05..=1.0) } else { 0.0 }).collect();
            let z = rescaled(&l * numkernel::real_diag(&d) * r.adjoint(), norm_z);
            let w = if kernel_dim == 0 {
                CMatrix::zeros(dim, dim)
            } else {
                let ker = r.columns(rank, kernel_dim).into_owned();
                let co_range = l.columns(rank, kernel_dim).into_owned();
                let g = complex_gaussian(dim, dim, rng);
                rescaled(&ker * ker.adjoint() * g * &co_range * co_range.adjoint(), norm_w)
            };
            HyperbolaPair::new(z, w, Radius::Infinite)
        }
    }
}
