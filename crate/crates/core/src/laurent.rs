//! Laurent polynomials on the annulus and their split form on the
//! conservative hyperbola.
//!
//! Under `ζ = r·z`, `ζ⁻¹ = r·w` a Laurent polynomial `Σ c_n ζⁿ` becomes
//! `f(z, w) = f⁺(z)·z + a₀ + w·f⁻(w)` with `f⁺` collecting the positive
//! powers and `f⁻` the negative ones. Sup-norms are taken on boundary
//! circles (maximum modulus) with a first-order Lipschitz pad that turns the
//! sampled maximum into a certified upper bound.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{complex_gaussian, C64};
use crate::seeds;
use crate::tolerances::{DEGREE_CAP, MIN_GRID};
use crate::Radius;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn check_coeffs(coeffs: &[C64]) -> Result<()> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidInput("coefficients must be finite".into()));
    }
    Ok(())
}

/// Ordinary polynomial `Σ_k coeffs[k]·zᵏ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        check_coeffs(&coeffs)?;
        Ok(Polynomial { coeffs })
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Highest stored power (`None` for the empty polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == zero())
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(zero(), |acc, &c| acc * z + c)
    }

    /// `Σ k·|c_k|·ρᵏ⁻¹`, a bound for `|p'|` on the circle of radius `ρ`.
    fn derivative_bound(&self, rho: f64) -> f64 {
        self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c.norm() * rho.powi(k as i32 - 1)).sum()
    }
}

/// Laurent polynomial `Σ_{n=lo}^{hi} c_n ζⁿ` with `lo ≤ 0 ≤ hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaurentPoly {
    lo: i32,
    coeffs: Vec<C64>,
}

impl LaurentPoly {
    /// `coeffs[k]` is the coefficient of `ζ^{lo+k}`.
    pub fn new(lo: i32, coeffs: Vec<C64>) -> Result<Self> {
        if lo > 0 {
            return Err(Error::InvalidInput(format!("lowest power {lo} must be ≤ 0")));
        }
        let hi = lo + coeffs.len() as i32 - 1;
        if hi < 0 {
            return Err(Error::InvalidInput(format!(
                "coefficients must reach the constant term (lo = {lo}, {} coefficients)",
                coeffs.len()
            )));
        }
        let cap = DEGREE_CAP as i32;
        if lo < -cap || hi > cap {
            return Err(Error::InvalidInput(format!("powers [{lo}, {hi}] exceed the degree cap ±{cap}")));
        }
        check_coeffs(&coeffs)?;
        Ok(LaurentPoly { lo, coeffs })
    }

    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: vec![zero()] }
    }

    pub fn constant(c: C64) -> Self {
        LaurentPoly { lo: 0, coeffs: vec![c] }
    }

    /// `c·ζⁿ`.
    pub fn monomial(n: i32, c: C64) -> Result<Self> {
        let (lo, hi) = (n.min(0), n.max(0));
        let mut coeffs = vec![zero(); (hi - lo + 1) as usize];
        coeffs[(n - lo) as usize] = c;
        LaurentPoly::new(lo, coeffs)
    }

    /// `ζ + ζ⁻¹`.
    pub fn joukowski() -> Self {
        let one = C64::new(1.0, 0.0);
        LaurentPoly { lo: -1, coeffs: vec![one, zero(), one] }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: i32) -> C64 {
        if n < self.lo || n > self.hi() {
            zero()
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    /// `(n, c_n)` for every stored power.
    pub fn terms(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(k, &c)| (self.lo + k as i32, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == zero())
    }

    pub fn scaled(&self, s: C64) -> Self {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// `c_n ζⁿ` summed by Horner in `ζ` (nonnegative powers) and in `1/ζ`
    /// (negative powers).
    pub fn eval(&self, zeta: C64) -> Result<C64> {
        let hi = self.hi();
        let positive = (0..=hi).rev().fold(zero(), |acc, n| acc * zeta + self.coeff(n));
        if self.lo == 0 {
            return Ok(positive);
        }
        if zeta == zero() {
            return Err(Error::ZeroArgument);
        }
        let inv = zeta.inv();
        let negative = (1..=-self.lo).rev().fold(zero(), |acc, k| (acc + self.coeff(-k)) * inv);
        Ok(positive + negative)
    }

    /// `Σ |n|·|c_n|·ρⁿ⁻¹`, a bound for `|g'(ζ)|` on `|ζ| = ρ`.
    fn derivative_bound(&self, rho: f64) -> f64 {
        self.terms().filter(|(n, _)| *n != 0).map(|(n, c)| n.unsigned_abs() as f64 * c.norm() * rho.powi(n - 1)).sum()
    }
}

/// Sampled and certified sup-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    /// Largest modulus on the sample grid.
    pub grid_max: f64,
    /// `grid_max` plus the Lipschitz pad; a true upper bound.
    pub certified_upper: f64,
    /// Total number of sampled boundary points.
    pub grid_points: usize,
    /// Boundary point where `grid_max` was attained.
    pub argmax: C64,
}

impl NormEstimate {
    pub fn pad(&self) -> f64 {
        self.certified_upper - self.grid_max
    }

    fn merge(self, other: NormEstimate) -> NormEstimate {
        let best = if other.grid_max > self.grid_max { other } else { self };
        NormEstimate {
            grid_max: best.grid_max,
            certified_upper: self.certified_upper.max(other.certified_upper),
            grid_points: self.grid_points + other.grid_points,
            argmax: best.argmax,
        }
    }
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(Error::InvalidInput(format!("grid must be at least {MIN_GRID}, got {grid}")));
    }
    Ok(())
}

// Any point of the circle of radius ρ is within arc length πρ/N of one of
// the N uniform samples, so |g| there exceeds the sampled maximum by at most
// (πρ/N)·max|g'|.
fn scan_circle(rho: f64, grid: usize, derivative_bound: f64, f: impl Fn(C64) -> C64) -> NormEstimate {
    let mut grid_max = f64::NEG_INFINITY;
    let mut argmax = C64::new(rho, 0.0);
    for k in 0..grid {
        let zeta = C64::from_polar(rho, 2.0 * PI * k as f64 / grid as f64);
        let v = f(zeta).norm();
        if v > grid_max {
            grid_max = v;
            argmax = zeta;
        }
    }
    let pad = PI * rho / grid as f64 * derivative_bound;
    NormEstimate { grid_max, certified_upper: grid_max + pad, grid_points: grid, argmax }
}

/// Sup of `|g|` over the annulus `1/r < |ζ| < r`, sampled on both boundary
/// circles with `grid` points each.
pub fn annulus_sup_norm(g: &LaurentPoly, r: f64, grid: usize) -> Result<NormEstimate> {
    check_grid(grid)?;
    if !(r.is_finite() && r > 1.0) {
        return Err(Error::InvalidInput("r must exceed 1 or be inf".into()));
    }
    let eval = |zeta: C64| g.eval(zeta).expect("boundary circles avoid 0");
    let outer = scan_circle(r, grid, g.derivative_bound(r), eval);
    let inner = scan_circle(1.0 / r, grid, g.derivative_bound(1.0 / r), eval);
    Ok(outer.merge(inner))
}

/// Sup of `|p|` over the closed unit disk, sampled on the unit circle.
pub fn disk_sup_norm(p: &Polynomial, grid: usize) -> Result<NormEstimate> {
    check_grid(grid)?;
    Ok(scan_circle(1.0, grid, p.derivative_bound(1.0), |z| p.eval(z)))
}

/// `f(z, w) = f⁺(z)·z + a₀ + w·f⁻(w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolaFunction {
    pub f_plus: Polynomial,
    pub a0: C64,
    pub f_minus: Polynomial,
}

impl HyperbolaFunction {
    pub fn new(f_plus: Polynomial, a0: C64, f_minus: Polynomial) -> Result<Self> {
        check_coeffs(&[a0])?;
        Ok(HyperbolaFunction { f_plus, a0, f_minus })
    }

    pub fn constant(a0: C64) -> Self {
        HyperbolaFunction { f_plus: Polynomial::zero(), a0, f_minus: Polynomial::zero() }
    }

    /// `f(z, w) = z + w`.
    pub fn z_plus_w() -> Self {
        let one = Polynomial::constant(C64::new(1.0, 0.0));
        HyperbolaFunction { f_plus: one.clone(), a0: zero(), f_minus: one }
    }

    /// Random function with `deg_plus` coefficients in `f⁺` and `deg_minus`
    /// in `f⁻`, all complex standard Gaussian.
    pub fn random<R: Rng + ?Sized>(deg_plus: usize, deg_minus: usize, rng: &mut R) -> Self {
        let a0 = complex_gaussian(1, 1, rng)[(0, 0)];
        let f_plus = complex_gaussian(deg_plus, 1, rng).iter().copied().collect();
        let f_minus = complex_gaussian(deg_minus, 1, rng).iter().copied().collect();
        HyperbolaFunction { f_plus: Polynomial { coeffs: f_plus }, a0, f_minus: Polynomial { coeffs: f_minus } }
    }

    /// Largest power of `z` or `w` present.
    pub fn degree(&self) -> usize {
        self.f_plus.coeffs.len().max(self.f_minus.coeffs.len())
    }

    /// `f⁺(z)·z + a₀`, the restriction to the `z`-disk of the cross.
    pub fn plus_part(&self) -> Polynomial {
        let mut coeffs = vec![self.a0];
        coeffs.extend_from_slice(&self.f_plus.coeffs);
        Polynomial { coeffs }
    }

    /// `w·f⁻(w) + a₀`, the restriction to the `w`-disk of the cross.
    pub fn minus_part(&self) -> Polynomial {
        let mut coeffs = vec![self.a0];
        coeffs.extend_from_slice(&self.f_minus.coeffs);
        Polynomial { coeffs }
    }

    pub fn eval(&self, z: C64, w: C64) -> C64 {
        self.f_plus.eval(z) * z + self.a0 + w * self.f_minus.eval(w)
    }

    pub fn scaled(&self, s: C64) -> Self {
        let scale = |p: &Polynomial| Polynomial { coeffs: p.coeffs.iter().map(|&c| c * s).collect() };
        HyperbolaFunction { f_plus: scale(&self.f_plus), a0: self.a0 * s, f_minus: scale(&self.f_minus) }
    }
}

/// Transport to hyperbola coordinates (`ζ = r·z`, `ζ⁻¹ = r·w`).
pub fn to_hyperbola(g: &LaurentPoly, r: f64) -> HyperbolaFunction {
    let f_plus = (1..=g.hi()).map(|n| g.coeff(n) * r.powi(n)).collect();
    let f_minus = (1..=-g.lo()).map(|n| g.coeff(-n) * r.powi(n)).collect();
    HyperbolaFunction { f_plus: Polynomial { coeffs: f_plus }, a0: g.coeff(0), f_minus: Polynomial { coeffs: f_minus } }
}

/// Inverse of [`to_hyperbola`]. The cross has no annulus model.
pub fn to_annulus(hf: &HyperbolaFunction, r: Radius) -> Result<LaurentPoly> {
    let r = r.finite().ok_or(Error::Unsupported("the cross (r = inf) has no annulus model"))?;
    let lo = -(hf.f_minus.coeffs.len() as i32);
    let mut coeffs = Vec::with_capacity(hf.f_minus.coeffs.len() + 1 + hf.f_plus.coeffs.len());
    for (k, &c) in hf.f_minus.coeffs.iter().enumerate().rev() {
        coeffs.push(c * r.powi(-(k as i32 + 1)));
    }
    coeffs.push(hf.a0);
    for (k, &c) in hf.f_plus.coeffs.iter().enumerate() {
        coeffs.push(c * r.powi(-(k as i32 + 1)));
    }
    LaurentPoly::new(lo, coeffs)
}

/// Sup-norm over `ℍ_r`; on the cross, the larger of the sup-norms over the
/// two coordinate disks.
pub fn hyperbola_sup_norm(hf: &HyperbolaFunction, r: Radius, grid: usize) -> Result<NormEstimate> {
    match r {
        Radius::Finite(radius) => annulus_sup_norm(&to_annulus(hf, r)?, radius, grid),
        Radius::Infinite => Ok(disk_sup_norm(&hf.plus_part(), grid)?.merge(disk_sup_norm(&hf.minus_part(), grid)?)),
    }
}

/// Cauchy-estimate constants `(k1, k2)`:
/// `‖f⁺z + a₀‖_𝔻, ‖wf⁻ + a₀‖_𝔻 ≤ k1·‖f‖_{ℍ_r}` with `k1 = r²/(r² − 1)` and
/// `‖f⁺‖_𝔻, ‖f⁻‖_𝔻 ≤ k2·‖f‖_{ℍ_r}` with `k2 = (2r² − 1)/(r² − 1)`.
/// On the cross these are the limits `(1, 2)`; `k2` only enters the bound
/// through `k2/r²`, which vanishes there.
pub fn cauchy_constants(r: Radius) -> (f64, f64) {
    match r {
        Radius::Finite(r) => {
            let r2 = r * r;
            (r2 / (r2 - 1.0), (2.0 * r2 - 1.0) / (r2 - 1.0))
        }
        Radius::Infinite => (1.0, 2.0),
    }
}

/// Random Laurent polynomial with `c_n` complex standard Gaussian times
/// `r^{−|n|}`, deterministic per seed.
pub fn random_laurent(lo: i32, hi: i32, r: f64, seed: u64) -> Result<LaurentPoly> {
    random_laurent_with(lo, hi, r, &mut seeds::rng(seed))
}

pub fn random_laurent_with<R: Rng + ?Sized>(lo: i32, hi: i32, r: f64, rng: &mut R) -> Result<LaurentPoly> {
    if lo > 0 || hi < 0 {
        return Err(Error::InvalidInput(format!("need lo ≤ 0 ≤ hi, got [{lo}, {hi}]")));
    }
    if !(r.is_finite() && r > 1.0) {
        return Err(Error::InvalidInput("r must exceed 1 or be inf".into()));
    }
    let len = (hi - lo + 1) as usize;
    let g = complex_gaussian(len, 1, rng);
    let coeffs = (0..len)
        .map(|k| {
            let n = lo + k as i32;
            g[(k, 0)] * r.powi(-n.abs())
        })
        .collect();
    LaurentPoly::new(lo, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // Independent of the implementation: plain power sums, no Horner.
    fn naive_eval(g: &LaurentPoly, zeta: C64) -> C64 {
        g.terms().map(|(n, cn)| cn * zeta.powi(n)).sum()
    }

    fn dense_annulus_scan(g: &LaurentPoly, r: f64, points: usize) -> f64 {
        let mut best = 0.0_f64;
        for rho in [r, 1.0 / r] {
            for k in 0..points {
                let zeta = C64::from_polar(rho, 2.0 * PI * (k as f64 + 0.37) / points as f64);
                best = best.max(naive_eval(g, zeta).norm());
            }
        }
        best
    }

    fn dense_disk_scan(p: &Polynomial, points: usize) -> f64 {
        (0..points)
            .map(|k| {
                let z = C64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.37) / points as f64);
                p.coeffs().iter().enumerate().map(|(j, &cj)| cj * z.powi(j as i32)).sum::<C64>().norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn eval_examples() {
        let zeta = LaurentPoly::monomial(1, c(1.0, 0.0)).unwrap();
        assert_eq!(zeta.eval(c(2.0, 0.0)).unwrap(), c(2.0, 0.0));
        let r = 1.7;
        let v = LaurentPoly::joukowski().eval(c(r, 0.0)).unwrap();
        assert!((v - c(r + 1.0 / r, 0.0)).norm() < 1e-15);
        assert_eq!(LaurentPoly::joukowski().eval(zero()), Err(Error::ZeroArgument));
        assert_eq!(zeta.eval(zero()).unwrap(), zero());
    }

    #[test]
    fn eval_matches_naive_summation() {
        for seed in 0..50 {
            let g = random_laurent(-7, 9, 1.6, seed).unwrap();
            let zeta = c(0.3 + seed as f64 * 0.02, -0.8);
            let (a, b) = (g.eval(zeta).unwrap(), naive_eval(&g, zeta));
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn constructor_validation() {
        assert!(LaurentPoly::new(1, vec![c(1.0, 0.0)]).is_err());
        assert!(LaurentPoly::new(-3, vec![c(1.0, 0.0)]).is_err());
        assert!(LaurentPoly::new(-33, vec![zero(); 34]).is_err());
        assert!(LaurentPoly::new(0, vec![c(f64::NAN, 0.0)]).is_err());
        let g = LaurentPoly::new(-2, vec![c(1.0, 0.0), zero(), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert_eq!((g.lo(), g.hi()), (-2, 1));
        assert_eq!(g.coeff(-2), c(1.0, 0.0));
        assert_eq!(g.coeff(5), zero());
    }

    #[test]
    fn annulus_norm_examples() {
        let zeta = LaurentPoly::monomial(1, c(1.0, 0.0)).unwrap();
        let est = annulus_sup_norm(&zeta, 2.0, 4096).unwrap();
        assert!((est.grid_max - 2.0).abs() < 1e-14);

        let est = annulus_sup_norm(&LaurentPoly::joukowski(), 2.0, 4096).unwrap();
        assert!((est.grid_max - 2.5).abs() < 1e-9);

        // max |1 + ζ³| on the annulus is 1 + r³, attained where ζ³ = r³.
        let g = LaurentPoly::new(0, vec![c(1.0, 0.0), zero(), zero(), c(1.0, 0.0)]).unwrap();
        let est = annulus_sup_norm(&g, 1.5, 4096).unwrap();
        let oracle = dense_annulus_scan(&g, 1.5, 1_000_000);
        assert!((oracle - 4.375).abs() < 1e-6);
        assert!((est.grid_max - 4.375).abs() < 1e-6);
        assert!(est.certified_upper >= oracle);
    }

    #[test]
    fn grid_must_be_large_enough() {
        assert!(annulus_sup_norm(&LaurentPoly::joukowski(), 2.0, 32).is_err());
        assert!(disk_sup_norm(&Polynomial::constant(c(1.0, 0.0)), 63).is_err());
    }

    #[test]
    fn disk_norm_examples() {
        let est = disk_sup_norm(&Polynomial::constant(c(1.0, 0.0)), 4096).unwrap();
        assert_eq!(est.grid_max, 1.0);
        assert_eq!(est.certified_upper, 1.0);
        let est = disk_sup_norm(&Polynomial::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), 4096).unwrap();
        assert!((est.grid_max - 2.0).abs() < 1e-15);
        let mut rng = seeds::rng(8);
        for _ in 0..5 {
            let p = Polynomial { coeffs: complex_gaussian(9, 1, &mut rng).iter().copied().collect() };
            let est = disk_sup_norm(&p, 4096).unwrap();
            let oracle = dense_disk_scan(&p, 1_000_000);
            assert!(oracle <= est.certified_upper);
            assert!(est.grid_max <= oracle + 1e-12);
        }
    }

    #[test]
    fn transport_examples() {
        let r = 2.5;
        let hf = to_hyperbola(&LaurentPoly::monomial(1, c(1.0, 0.0)).unwrap(), r);
        assert_eq!(hf.f_plus.coeffs(), &[c(r, 0.0)]);
        assert_eq!(hf.a0, zero());
        assert!(hf.f_minus.is_zero());
        let hf = to_hyperbola(&LaurentPoly::monomial(-1, c(1.0, 0.0)).unwrap(), r);
        assert_eq!(hf.f_minus.coeffs(), &[c(r, 0.0)]);
        assert!(hf.f_plus.is_zero());

        let back = to_annulus(
            &HyperbolaFunction::new(Polynomial::constant(c(r, 0.0)), zero(), Polynomial::zero()).unwrap(),
            Radius::Finite(r),
        )
        .unwrap();
        assert_eq!(back, LaurentPoly::monomial(1, c(1.0, 0.0)).unwrap());
        assert_eq!(
            to_annulus(&HyperbolaFunction::z_plus_w(), Radius::Infinite),
            Err(Error::Unsupported("the cross (r = inf) has no annulus model"))
        );
    }

    #[test]
    fn hyperbola_norm_examples() {
        let est = hyperbola_sup_norm(&HyperbolaFunction::z_plus_w(), Radius::Infinite, 4096).unwrap();
        assert_eq!(est.grid_max, 1.0);
        for r in [Radius::Finite(1.2), Radius::Finite(7.0), Radius::Infinite] {
            let est = hyperbola_sup_norm(&HyperbolaFunction::constant(c(3.0, -4.0)), r, 256).unwrap();
            assert!((est.grid_max - 5.0).abs() < 1e-14);
        }
        let hf = to_hyperbola(&LaurentPoly::joukowski(), 2.0);
        let est = hyperbola_sup_norm(&hf, Radius::Finite(2.0), 4096).unwrap();
        assert!((est.grid_max - 2.5).abs() < 1e-12);
    }

    #[test]
    fn cauchy_constant_values() {
        let (k1, k2) = cauchy_constants(Radius::Finite(2f64.sqrt()));
        assert!((k1 - 2.0).abs() < 1e-12 && (k2 - 3.0).abs() < 1e-12);
        let (k1, k2) = cauchy_constants(Radius::Finite(2.0));
        assert!((k1 - 4.0 / 3.0).abs() < 1e-15 && (k2 - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(cauchy_constants(Radius::Infinite), (1.0, 2.0));
        let (k1, k2) = cauchy_constants(Radius::Finite(1e6));
        assert!((k1 - 1.0).abs() < 1e-11 && (k2 - 2.0).abs() < 1e-11);
    }

    #[test]
    fn cauchy_estimates_hold_on_random_functions() {
        for r in [1.5, 2.0, 4.0] {
            let (k1, k2) = cauchy_constants(Radius::Finite(r));
            for seed in 0..100 {
                let g = random_laurent(-6, 6, r, seed).unwrap();
                let hf = to_hyperbola(&g, r);
                let f = annulus_sup_norm(&g, r, 1024).unwrap();
                let bound1 = k1 * f.certified_upper;
                let bound2 = k2 * f.certified_upper;
                for part in [hf.plus_part(), hf.minus_part()] {
                    assert!(disk_sup_norm(&part, 1024).unwrap().grid_max <= bound1);
                }
                for part in [&hf.f_plus, &hf.f_minus] {
                    assert!(disk_sup_norm(part, 1024).unwrap().grid_max <= bound2);
                }
            }
        }
    }

    #[test]
    fn random_laurent_contract() {
        let g = random_laurent(0, 0, 2.0, 4).unwrap();
        assert_eq!((g.lo(), g.hi()), (0, 0));
        assert_ne!(g.coeff(0), zero());
        assert_eq!(random_laurent(-3, 5, 2.0, 17), random_laurent(-3, 5, 2.0, 17));
        assert!(random_laurent(1, 2, 2.0, 0).is_err());
        let g = random_laurent(-4, 4, 3.0, 5).unwrap();
        assert!(annulus_sup_norm(&g, 3.0, 256).unwrap().grid_max > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transport_round_trip(lo in -12i32..=0, hi in 0i32..=12, seed in any::<u64>(), ri in 0usize..3) {
            let r = [1.1, 2.0, 10.0][ri];
            let g = random_laurent(lo, hi, r, seed).unwrap();
            let back = to_annulus(&to_hyperbola(&g, r), Radius::Finite(r)).unwrap();
            prop_assert_eq!((back.lo(), back.hi()), (g.lo(), g.hi()));
            for n in lo..=hi {
                let (a, b) = (back.coeff(n), g.coeff(n));
                prop_assert!((a - b).norm() <= 1e-12 * b.norm());
            }
        }

        #[test]
        fn norm_transport_within_pads(seed in any::<u64>(), ri in 0usize..3) {
            let r = [1.1, 2.0, 10.0][ri];
            let g = random_laurent(-5, 5, r, seed).unwrap();
            let direct = annulus_sup_norm(&g, r, 512).unwrap();
            let via = hyperbola_sup_norm(&to_hyperbola(&g, r), Radius::Finite(r), 512).unwrap();
            prop_assert!((direct.grid_max - via.grid_max).abs() <= direct.pad() + via.pad() + 1e-12);
        }

        #[test]
        fn certified_upper_dominates_denser_scan(seed in any::<u64>(), ri in 0usize..3) {
            let r = [1.1, 2.0, 10.0][ri];
            let g = random_laurent(-4, 4, r, seed).unwrap();
            let est = annulus_sup_norm(&g, r, 64).unwrap();
            prop_assert!(dense_annulus_scan(&g, r, 6400) <= est.certified_upper);
        }
    }
}
