//! The 2×-size minidilation of a quantum hyperbola pair and the numerical
//! checks of its five properties.
//!
//! For `Z = U·A` (polar) and `Â = A⁻¹/r²` put `c = 1 + 1/r²`,
//! `S = (c² − (A + Â)²)^{1/2}` and `H = U·S`. Then
//!
//! ```text
//! Ẑ = [ Z   H  ]      Ŵ = [ W  −H* ]
//!     [ 0   W* ]          [ 0   Z* ]
//! ```
//!
//! satisfy `ẐŴ = ŴẐ = I/r²`, `‖Ẑ‖ = ‖Ŵ‖ = 1`, and `(Ẑ + Ŵ*)/c` is unitary.
//! On the cross (`r = ∞`) the shared polar unitary of `Z` and `W*` plays
//! the role of `U`, with `A = |Z|`, `Â = |W*|` and `c = 1`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::calculus::eval_pair_matrices;
use crate::domains::{sample_quantum_cross_with, sample_quantum_hyperbola_with, CrossMode, HyperbolaPair};
use crate::error::{Error, Result};
use crate::laurent::HyperbolaFunction;
use crate::numkernel::{
    self, block2x2, eigenvalues, hermitian_part, matched_spectral_distance, norm, psd_sqrt_with_info,
    spectral_inclusion_distance, CMatrix, C64,
};
use crate::radius::Radius;
use crate::seeds;
use crate::tolerances::{CLAMP_TOL, DEFAULT_MARGIN, MEMBERSHIP_TOL};

const A_HAT_CROSS_CHECK: f64 = 1e-9;

/// Maximum degree of the random probe functions used for the compression
/// property.
pub const PROBE_DEGREE: usize = 12;
/// Number of random probe functions in [`default_probes`].
pub const RANDOM_PROBES: usize = 20;

#[derive(Debug, Clone)]
pub struct DilationResult {
    pub z_hat: CMatrix,
    pub w_hat: CMatrix,
    /// `(Ẑ + Ŵ*)/c`.
    pub u_big: CMatrix,
    pub h: CMatrix,
    pub a: CMatrix,
    pub a_hat: CMatrix,
    /// `1 + 1/r²`.
    pub c: f64,
    /// The pair that was dilated.
    pub pair: HyperbolaPair,
    /// Construction diagnostics (`radicand_min_eigenvalue`,
    /// `a_hat_discrepancy`, `hz_symmetry`, ...).
    pub diagnostics: BTreeMap<String, f64>,
}

impl DilationResult {
    pub fn r(&self) -> Radius {
        self.pair.r()
    }

    /// `(Ẑ, Ŵ)` as a pair. It lies on the boundary of the domain.
    pub fn dilated_pair(&self) -> HyperbolaPair {
        HyperbolaPair::new(self.z_hat.clone(), self.w_hat.clone(), self.pair.r())
            .expect("dilation blocks are finite and square")
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_closure(h: &HyperbolaPair) -> Result<()> {
    let report = h.membership(MEMBERSHIP_TOL);
    if report.closure_ok {
        Ok(())
    } else {
        Err(Error::Membership(report.failures.join("; ")))
    }
}

fn assemble(
    pair: HyperbolaPair,
    u: &CMatrix,
    a: CMatrix,
    a_hat: CMatrix,
    c: f64,
    mut diagnostics: BTreeMap<String, f64>,
) -> Result<DilationResult> {
    let n = pair.dim();
    let sum = &a + &a_hat;
    let radicand = hermitian_part(&(numkernel::identity(n) * real(c * c) - &sum * &sum));
    let (s, info) = psd_sqrt_with_info(&radicand, CLAMP_TOL).map_err(|e| match e {
        Error::NotPsd { min_eigenvalue } => Error::Construction(format!(
            "c²I − (A + Â)² has eigenvalue {min_eigenvalue:e} below the clamp tolerance {CLAMP_TOL:e}"
        )),
        other => other,
    })?;
    diagnostics.insert("radicand_min_eigenvalue".into(), info.min_eigenvalue);
    diagnostics.insert("radicand_clamped".into(), info.clamped as f64);

    let h = u * s;
    let (z, w) = (pair.z(), pair.w());
    diagnostics.insert("hz_symmetry".into(), norm(&(z * h.adjoint() - &h * z.adjoint())));

    let zero = CMatrix::zeros(n, n);
    let z_hat = block2x2(z, &h, &zero, &w.adjoint());
    let w_hat = block2x2(w, &(-h.adjoint()), &zero, &z.adjoint());
    let u_big = (&z_hat + w_hat.adjoint()) * real(1.0 / c);
    Ok(DilationResult { z_hat, w_hat, u_big, h, a, a_hat, c, pair, diagnostics })
}

/// Minidilation of a pair on the hyperbola with finite `r`.
pub fn build_dilation(h: &HyperbolaPair) -> Result<DilationResult> {
    let r = match h.r() {
        Radius::Finite(r) => r,
        Radius::Infinite => {
            return Err(Error::InvalidInput("build_dilation needs finite r; use build_cross_dilation".into()))
        }
    };
    check_closure(h)?;
    let inv_sq = 1.0 / (r * r);
    let polar = numkernel::polar(h.z())?;
    let a_hat = hermitian_part(&(numkernel::inverse(&polar.positive)? * real(inv_sq)));
    let a_hat_from_w = numkernel::psd_sqrt(&(h.w() * h.w().adjoint()), CLAMP_TOL)?;

    let mut diagnostics = BTreeMap::new();
    let discrepancy = norm(&(&a_hat - &a_hat_from_w));
    diagnostics.insert("a_hat_discrepancy".into(), discrepancy);
    diagnostics.insert(
        "a_hat_cross_check_failed".into(),
        if discrepancy > A_HAT_CROSS_CHECK * (1.0 + norm(&a_hat)) { 1.0 } else { 0.0 },
    );
    diagnostics.insert("polar_residual".into(), norm(&(h.z() - &polar.unitary * &polar.positive)));
    assemble(h.clone(), &polar.unitary, polar.positive, a_hat, 1.0 + inv_sq, diagnostics)
}

/// Minidilation of a cross pair (`ZW = WZ = 0`, contractions).
pub fn build_cross_dilation(h: &HyperbolaPair) -> Result<DilationResult> {
    if !h.r().is_infinite() {
        return Err(Error::InvalidInput("build_cross_dilation needs r = inf".into()));
    }
    check_closure(h)?;
    let (z, w) = (h.z(), h.w());
    let cp = numkernel::common_polar_unitary(z, w)?;
    // |Z| = U*Z and |W*| = WU. Square roots of Z*Z and WW* would turn
    // rounding noise on the kernels into errors of order √ε.
    let a = hermitian_part(&(cp.unitary.adjoint() * z));
    let a_hat = hermitian_part(&(w * &cp.unitary));

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("free_dim".into(), cp.free_dim as f64);
    diagnostics.insert("polar_residual".into(), norm(&(z - &cp.unitary * &a)));
    diagnostics.insert("w_polar_residual".into(), norm(&(w - &a_hat * cp.unitary.adjoint())));
    diagnostics.insert("support_overlap".into(), norm(&(&a * &a_hat)));
    assemble(h.clone(), &cp.unitary, a, a_hat, 1.0, diagnostics)
}

/// [`build_dilation`] or [`build_cross_dilation`] according to `r`.
pub fn build_any(h: &HyperbolaPair) -> Result<DilationResult> {
    if h.r().is_infinite() {
        build_cross_dilation(h)
    } else {
        build_dilation(h)
    }
}

/// Residuals of the five dilation properties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub norm_z_hat: f64,
    pub norm_w_hat: f64,
    /// `max(|‖Ẑ‖ − 1|, |‖Ŵ‖ − 1|)`.
    pub item1: f64,
    /// `max(‖ẐŴ − I/r²‖, ‖ŴẐ − I/r²‖)`.
    pub item2: f64,
    /// `min(item3_forward, item3_backward)`; the value gated at `tol`.
    pub item3: f64,
    /// Directed distance from `σ(Ẑ)` to `σ(Z) ∪ σ(W*)`, and the `Ŵ` twin.
    /// Defective eigenvalues carry forward errors near `√eps`, so this alone
    /// cannot resolve `1e-8` on nilpotent cross pairs.
    pub item3_forward: f64,
    /// For each eigenvalue of `Ẑ` (and `Ŵ`), `σ_min(Ẑ − λI)` at the nearest
    /// target `λ`: the size of the smallest perturbation of `Ẑ` that has `λ`
    /// as an exact eigenvalue.
    pub item3_backward: f64,
    /// Optimal-matching distance between `σ(Ẑ)` and `σ(Z) ∪ σ(W*)` as
    /// multisets.
    pub item3_matched: f64,
    /// `max(‖U*U − I‖, ‖UU* − I‖)` for `U = (Ẑ + Ŵ*)/c`.
    pub item4: f64,
    /// `max` over probes of `‖f(Z,W)‖ − ‖f(Ẑ,Ŵ)‖`.
    pub item5: f64,
    /// `max` over probes of `‖f(Z,W) − [f(Ẑ,Ŵ)]₁₁‖`.
    pub compression_residual: f64,
    pub probes: usize,
    pub tol: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl VerificationReport {
    /// `(item, residual)` for items 1 to 5.
    pub fn items(&self) -> [(u8, f64); 5] {
        [(1, self.item1), (2, self.item2), (3, self.item3), (4, self.item4), (5, self.item5)]
    }
}

fn spectrum_or_nan(m: &CMatrix) -> Option<Vec<C64>> {
    eigenvalues(m).ok()
}

pub fn verify_dilation(d: &DilationResult, probes: &[HyperbolaFunction], tol: f64) -> VerificationReport {
    let n = d.pair.dim();
    let (z, w) = (d.pair.z(), d.pair.w());
    let big_id = numkernel::identity(2 * n);
    let target = &big_id * real(d.r().inv_sq());

    let norm_z_hat = norm(&d.z_hat);
    let norm_w_hat = norm(&d.w_hat);
    let item1 = (norm_z_hat - 1.0).abs().max((norm_w_hat - 1.0).abs());
    let item2 = norm(&(&d.z_hat * &d.w_hat - &target)).max(norm(&(&d.w_hat * &d.z_hat - &target)));

    let (item3_forward, item3_backward, item3_matched) =
        match (spectrum_or_nan(&d.z_hat), spectrum_or_nan(&d.w_hat), spectrum_or_nan(z), spectrum_or_nan(w)) {
            (Some(sz_hat), Some(sw_hat), Some(sz), Some(sw)) => {
                let conj = |v: &[C64]| v.iter().map(|l| l.conj()).collect::<Vec<_>>();
                let target_z: Vec<C64> = sz.iter().copied().chain(conj(&sw)).collect();
                let target_w: Vec<C64> = sw.iter().copied().chain(conj(&sz)).collect();
                let directed = spectral_inclusion_distance(&sz_hat, &target_z)
                    .max(spectral_inclusion_distance(&sw_hat, &target_w));
                let matched =
                    matched_spectral_distance(&sz_hat, &target_z).max(matched_spectral_distance(&sw_hat, &target_w));
                let backward = inclusion_backward_error(&d.z_hat, &sz_hat, &target_z)
                    .max(inclusion_backward_error(&d.w_hat, &sw_hat, &target_w));
                (directed, backward, matched)
            }
            _ => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
        };
    let item3 = item3_forward.min(item3_backward);

    let item4 = numkernel::unitarity_residual(&d.u_big).max(numkernel::unitarity_residual(&d.u_big.adjoint()));

    let mut item5 = f64::NEG_INFINITY;
    let mut compression_residual: f64 = 0.0;
    for hf in probes {
        let small = eval_pair_matrices(hf, z, w);
        let big = eval_pair_matrices(hf, &d.z_hat, &d.w_hat);
        item5 = item5.max(norm(&small) - norm(&big));
        let corner = big.view((0, 0), (n, n)).into_owned();
        compression_residual = compression_residual.max(norm(&(&small - corner)));
    }
    if probes.is_empty() {
        item5 = 0.0;
    }

    let mut failures = Vec::new();
    let checks = [
        (1, item1, "|‖Ẑ‖ − 1| or |‖Ŵ‖ − 1|"),
        (2, item2, "‖ẐŴ − I/r²‖ or ‖ŴẐ − I/r²‖"),
        (3, item3, "distance from σ(Ẑ) to σ(Z) ∪ σ(W*)"),
        (4, item4, "unitarity defect of (Ẑ + Ŵ*)/c"),
        (5, item5, "‖f(Z,W)‖ − ‖f(Ẑ,Ŵ)‖"),
    ];
    for (item, value, what) in checks {
        if value.is_nan() || value > tol {
            failures.push(format!("item ({item}): {what} = {value:e} exceeds {tol:e}"));
        }
    }
    VerificationReport {
        norm_z_hat,
        norm_w_hat,
        item1,
        item2,
        item3,
        item3_forward,
        item3_backward,
        item3_matched,
        item4,
        item5,
        compression_residual,
        probes: probes.len(),
        tol,
        passed: failures.is_empty(),
        failures,
    }
}

/// [`RANDOM_PROBES`] random functions of degree at most [`PROBE_DEGREE`],
/// followed by `z + w` and the constant `1`.
pub fn default_probes<R: Rng + ?Sized>(rng: &mut R) -> Vec<HyperbolaFunction> {
    let mut probes: Vec<HyperbolaFunction> = (0..RANDOM_PROBES)
        .map(|_| {
            let dp = rng.random_range(0..=PROBE_DEGREE);
            let dm = rng.random_range(0..=PROBE_DEGREE);
            HyperbolaFunction::random(dp, dm, rng)
        })
        .collect();
    probes.push(HyperbolaFunction::z_plus_w());
    probes.push(HyperbolaFunction::constant(real(1.0)));
    probes
}

/// Random pair for trial work: interior hyperbola samples with the default
/// margin for finite `r`, cross samples alternating between the two sampler
/// modes for `r = ∞`.
pub fn sample_pair<R: Rng + ?Sized>(r: Radius, dim: usize, index: u64, rng: &mut R) -> Result<HyperbolaPair> {
    match r {
        Radius::Finite(r) => sample_quantum_hyperbola_with(dim, r, DEFAULT_MARGIN, rng),
        Radius::Infinite => {
            let mode = if index % 2 == 0 { CrossMode::Structured } else { CrossMode::General };
            sample_quantum_cross_with(dim, mode, rng)
        }
    }
}

fn inclusion_backward_error(m: &CMatrix, spectrum: &[C64], targets: &[C64]) -> f64 {
    let n = m.nrows();
    let id = numkernel::identity(n);
    spectrum
        .iter()
        .map(|mu| {
            let Some(lambda) = targets.iter().min_by(|a, b| (*a - mu).norm().total_cmp(&(*b - mu).norm())) else {
                return f64::INFINITY;
            };
            numkernel::singular_values(&(m - &id * *lambda))
                .ok()
                .and_then(|s| s.last().copied())
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

/// One seeded verification trial.
#[derive(Debug, Clone, Serialize)]
pub struct DilationTrial {
    pub index: u64,
    pub seed: u64,
    pub dim: usize,
    pub r: Radius,
    pub report: VerificationReport,
    pub diagnostics: BTreeMap<String, f64>,
}

/// Build and verify the dilation of a freshly sampled pair. Trial `index`
/// draws everything from its own stream of `seed`.
pub fn verify_trial(r: Radius, dim: usize, seed: u64, index: u64, tol: f64) -> Result<DilationTrial> {
    let mut rng = seeds::trial_rng(seed, index);
    let pair = sample_pair(r, dim, index, &mut rng)?;
    let d = build_any(&pair)?;
    let probes = default_probes(&mut rng);
    let report = verify_dilation(&d, &probes, tol);
    Ok(DilationTrial { index, seed: seeds::trial_seed(seed, index), dim, r, report, diagnostics: d.diagnostics })
}

/// `trials` independent trials, cycling through `dims`. Runs concurrently
/// when the `parallel` feature is on; the result does not depend on it.
pub fn verify_random_samples(
    r: Radius,
    dims: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<DilationTrial>> {
    if dims.is_empty() {
        return Err(Error::InvalidInput("no dimensions given".into()));
    }
    seeds::map_indices(trials, |i| verify_trial(r, dims[i % dims.len()], seed, i as u64, tol)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::sample_quantum_hyperbola;
    use crate::numkernel::{real_matrix, singular_values};
    use crate::tolerances::PROPERTY_TOL;

    fn scalar_pair(r2: f64, z: f64) -> HyperbolaPair {
        let zm = CMatrix::from_element(1, 1, real(z));
        let wm = CMatrix::from_element(1, 1, real(1.0 / (r2 * z)));
        HyperbolaPair::new(zm, wm, Radius::new(r2.sqrt()).unwrap()).unwrap()
    }

    #[test]
    fn scalar_seed_singular_values() {
        let d = build_dilation(&scalar_pair(2.0, 0.9)).unwrap();
        assert!((d.c - 1.5).abs() < 1e-15);
        // s² = c² − (a + 1/(r²a))², a = 0.9
        let s = (2.25f64 - (0.9 + 1.0 / 1.8f64).powi(2)).sqrt();
        assert!((d.h[(0, 0)].re - s).abs() < 1e-12);
        assert!((s - 0.3624).abs() < 1e-4);
        let sv = singular_values(&d.z_hat).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-12 && (sv[1] - 0.5).abs() < 1e-12);
        let rep = verify_dilation(&d, &default_probes(&mut seeds::rng(0)), 1e-10);
        assert!(rep.item1 <= 1e-10, "{rep:?}");
        assert!(rep.passed, "{:?}", rep.failures);
    }

    #[test]
    fn boundary_scalar_gives_block_diagonal() {
        // a = 1: A + Â = c, the radicand vanishes.
        let u = C64::from_polar(1.0, 0.7);
        let r = 3.0;
        let z = CMatrix::from_element(1, 1, u);
        let w = CMatrix::from_element(1, 1, u.conj() / (r * r));
        let d = build_dilation(&HyperbolaPair::new(z, w, Radius::Finite(r)).unwrap()).unwrap();
        assert!(norm(&d.h) < 1e-7);
        assert!(d.z_hat[(0, 1)].norm() < 1e-7 && d.z_hat[(1, 0)].norm() == 0.0);
    }

    #[test]
    fn cross_nilpotent_hand_computation() {
        let n = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        let h = HyperbolaPair::new(n.clone(), n.clone(), Radius::Infinite).unwrap();
        let d = build_cross_dilation(&h).unwrap();
        assert!(norm(&(&d.a + &d.a_hat - numkernel::identity(2))) < 1e-14);
        assert!(norm(&d.h) < 1e-14);
        let zero = CMatrix::zeros(2, 2);
        assert!(norm(&(&d.z_hat - block2x2(&n, &zero, &zero, &n.adjoint()))) < 1e-14);
        let sx = real_matrix(2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(norm(&(&d.u_big - block2x2(&sx, &zero, &zero, &sx))) < 1e-14);
        let rep = verify_dilation(&d, &default_probes(&mut seeds::rng(1)), 1e-12);
        for (item, v) in rep.items() {
            assert!(v <= 1e-12, "item {item}: {v}");
        }
    }

    #[test]
    fn degenerate_cross_with_zero_w() {
        let mut rng = seeds::rng(5);
        let z = numkernel::complex_gaussian(3, 3, &mut rng);
        let z = &z * real(0.8 / norm(&z));
        let h = HyperbolaPair::new(z.clone(), CMatrix::zeros(3, 3), Radius::Infinite).unwrap();
        let d = build_cross_dilation(&h).unwrap();
        assert!(norm(&d.a_hat) < 1e-14);
        let s = numkernel::psd_sqrt(&(numkernel::identity(3) - &d.a * &d.a), CLAMP_TOL).unwrap();
        let u = numkernel::polar(&z).unwrap().unitary;
        assert!(norm(&(&d.h - u * s)) < 1e-10);
        let rep = verify_dilation(&d, &default_probes(&mut rng), PROPERTY_TOL);
        assert!(rep.passed, "{rep:?} {:?}", d.diagnostics);
    }

    #[test]
    fn products_and_symmetry_on_random_samples() {
        for (i, &r) in [1.05, 1.5, 2.0, 10.0].iter().enumerate() {
            for dim in [1, 2, 3, 5, 8] {
                let h = sample_quantum_hyperbola(dim, r, 1e-3, (i * 100 + dim) as u64).unwrap();
                let d = build_dilation(&h).unwrap();
                let t = numkernel::identity(2 * dim) * real(1.0 / (r * r));
                assert!(norm(&(&d.z_hat * &d.w_hat - &t)) <= 1e-10);
                assert!(d.diagnostics["hz_symmetry"] <= 1e-10);
                assert!(d.diagnostics["radicand_min_eigenvalue"] >= -1e-10);
                assert_eq!(d.diagnostics["a_hat_cross_check_failed"], 0.0);
                let sv = singular_values(&d.z_hat).unwrap();
                assert!((sv[0] - 1.0).abs() <= 1e-8, "max {}", sv[0]);
                assert!((sv[2 * dim - 1] - 1.0 / (r * r)).abs() <= 1e-8, "min {}", sv[2 * dim - 1]);
                let rep = verify_dilation(&d, &default_probes(&mut seeds::rng(i as u64)), PROPERTY_TOL);
                assert!(rep.passed, "r={r} dim={dim}: {:?}", rep.failures);
                assert!(rep.item3_matched <= 1e-7);
                assert!(rep.compression_residual <= 1e-9);
                // Ẑ = r²·Ŵ⁻¹
                let z_hat = numkernel::inverse(&d.w_hat).unwrap() * real(1.0 / (r * r));
                assert!(norm(&(z_hat - &d.z_hat)) <= 1e-9);
            }
        }
    }

    #[test]
    fn cross_products_vanish() {
        for seed in 0..20u64 {
            let trial = verify_trial(Radius::Infinite, 2 + (seed as usize % 7), 9, seed, PROPERTY_TOL).unwrap();
            assert!(trial.report.item2 <= 1e-10, "{:?}", trial.report);
            assert!(trial.report.item4 <= 1e-10, "{:?} {:?}", trial.report, trial.diagnostics);
            assert!(trial.report.passed, "{:?}", trial.report.failures);
        }
    }

    #[test]
    fn rejects_non_members_and_wrong_branch() {
        let id = numkernel::identity(2);
        let bad = HyperbolaPair::new(id.clone(), id.clone(), Radius::Finite(2.0)).unwrap();
        assert!(matches!(build_dilation(&bad), Err(Error::Membership(_))));
        let cross = HyperbolaPair::new(CMatrix::zeros(2, 2), CMatrix::zeros(2, 2), Radius::Infinite).unwrap();
        assert!(build_dilation(&cross).is_err());
        let finite = scalar_pair(2.0, 0.9);
        assert!(build_cross_dilation(&finite).is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let a = verify_random_samples(Radius::Finite(2.0), &[1, 3], 6, 42, PROPERTY_TOL).unwrap();
        let b = verify_random_samples(Radius::Finite(2.0), &[1, 3], 6, 42, PROPERTY_TOL).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.report, y.report);
        }
    }

    #[test]
    fn backward_inclusion_resolves_defective_spectra() {
        // A perturbed Jordan block: forward eigenvalue error √δ, backward δ.
        let delta = 1e-16;
        let j = real_matrix(2, &[0.0, 1.0, delta, 0.0]);
        let computed = [real(delta.sqrt()), real(-delta.sqrt())];
        let target = [real(0.0)];
        assert!(spectral_inclusion_distance(&computed, &target) >= 1e-8 - 1e-12);
        assert!(inclusion_backward_error(&j, &computed, &target) <= 1e-15);
        let id = numkernel::identity(2);
        assert!((inclusion_backward_error(&id, &[real(1.0)], &[real(0.5)]) - 0.5).abs() < 1e-15);
    }
}
