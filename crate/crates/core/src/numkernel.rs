//! Dense complex linear algebra: norms, SVD, spectra, inverses, Hermitian
//! square roots and polar factors.
//!
//! Factorizations are delegated to `nalgebra`; this module adds the input
//! validation, the singularity and clamping thresholds, and the polar
//! constructions that the dilation needs (including the degenerate
//! common-polar unitary of a cross pair).

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::seeds;
use crate::tolerances::{HERMITIAN_RTOL, MEMBERSHIP_TOL, SINGULAR_RTOL};

pub use num_complex::Complex64 as C64;

/// Dense square complex matrix.
pub type CMatrix = DMatrix<C64>;

// Singular values below this (relative to max(1, ‖M‖)) are treated as
// exact zeros when splitting a cross pair into partial isometries.
const RANK_RTOL: f64 = 1e-10;

fn iteration_cap(n: usize) -> usize {
    2000 * (n + 1)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds an `n×n` complex matrix from real entries in row-major order.
pub fn real_matrix(n: usize, rows: &[f64]) -> CMatrix {
    assert_eq!(rows.len(), n * n, "expected {} entries", n * n);
    CMatrix::from_fn(n, n, |i, j| C64::new(rows[i * n + j], 0.0))
}

pub fn diag(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values))
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    CMatrix::from_fn(
        values.len(),
        values.len(),
        |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        },
    )
}

/// Square, non-empty, finite.
pub fn ensure_valid(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::InvalidInput(format!(
            "expected a non-empty square matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// `M = left · diag(singular_values) · right*`, singular values descending.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: CMatrix,
    pub singular_values: Vec<f64>,
    pub right: CMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> CMatrix {
        let sigma: Vec<C64> = self.singular_values.iter().map(|&s| C64::new(s, 0.0)).collect();
        &self.left * diag(&sigma) * self.right.adjoint()
    }
}

pub fn svd(m: &CMatrix) -> Result<SvdResult> {
    ensure_valid(m)?;
    jacobi_svd(m, true)
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    ensure_valid(m)?;
    Ok(jacobi_svd(m, false)?.singular_values)
}

const JACOBI_MAX_SWEEPS: usize = 80;

// One-sided (Hestenes) Jacobi: rotate column pairs of M·V until all columns
// are mutually orthogonal; the column norms are then the singular values.
// Accurate for small singular values, which the polar and rank decisions
// depend on.
fn jacobi_svd(m: &CMatrix, vectors: bool) -> Result<SvdResult> {
    let n = m.ncols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j).iter().copied().collect()).collect();
    let mut v: Vec<Vec<C64>> = if vectors {
        (0..n).map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
    } else {
        Vec::new()
    };

    // Columns below this norm are numerically zero; rotating them only
    // stirs rounding noise and never settles.
    let frob_sq: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let floor_sq = (f64::EPSILON * f64::EPSILON) * frob_sq;
    let ortho_tol = (n.max(1) as f64) * f64::EPSILON;

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= floor_sq || g <= ortho_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (sp, sq) = (phase.conj() * s, phase * s);
                let rotate = |x: &mut Vec<Vec<C64>>| {
                    for i in 0..x[p].len() {
                        let (a, b) = (x[p][i], x[q][i]);
                        x[p][i] = a * c - b * sp;
                        x[q][i] = a * sq + b * c;
                    }
                };
                rotate(&mut cols);
                if vectors {
                    rotate(&mut v);
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NumericFailure {
            routine: "svd",
            detail: format!("one-sided Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (dim {n})"),
        });
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    if !vectors {
        return Ok(SvdResult { left: CMatrix::zeros(0, 0), singular_values, right: CMatrix::zeros(0, 0) });
    }

    let right = CMatrix::from_fn(n, n, |i, k| v[order[k]][i]);
    // Left vectors are the normalized columns; columns with negligible norm
    // carry no direction and are replaced during re-orthonormalization.
    let cutoff = (n as f64) * f64::EPSILON * singular_values[0];
    let mut left = CMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        if norms[j] > cutoff && norms[j] > 0.0 {
            for i in 0..n {
                left[(i, k)] = cols[j][i] / norms[j];
            }
        }
    }
    orthonormalize_columns(&mut left);
    Ok(SvdResult { left, singular_values, right })
}

// Modified Gram-Schmidt (two passes) in column order. A zero or dependent
// column is replaced by the standard basis vector with the largest
// component outside the span of the columns already accepted.
fn orthonormalize_columns(m: &mut CMatrix) {
    let n = m.nrows();
    let project_out = |m: &CMatrix, k: usize, mut x: Vec<C64>| {
        for _ in 0..2 {
            for j in 0..k {
                let proj: C64 = (0..n).map(|i| m[(i, j)].conj() * x[i]).sum();
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi -= m[(i, j)] * proj;
                }
            }
        }
        let len = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (x, len)
    };
    for k in 0..m.ncols() {
        let original: Vec<C64> = m.column(k).iter().copied().collect();
        let original_len = original.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let (mut x, mut len) = project_out(m, k, original);
        if original_len == 0.0 || len <= 1e-8 * original_len {
            (x, len) = (0..n)
                .map(|e| {
                    let unit = (0..n).map(|i| C64::new(if i == e { 1.0 } else { 0.0 }, 0.0)).collect();
                    project_out(m, k, unit)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("n ≥ 1");
        }
        for (i, xi) in x.iter().enumerate() {
            m[(i, k)] = xi / len;
        }
    }
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Operator norm for residual reporting. Never fails: non-finite input gives
/// `inf`, and a non-converged SVD falls back to the Frobenius norm, which is
/// an upper bound.
pub fn norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return f64::INFINITY;
    }
    if m.nrows() != m.ncols() {
        return m.norm();
    }
    operator_norm(m).unwrap_or_else(|_| m.norm())
}

/// Eigenvalues with multiplicity, from a complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    ensure_valid(m)?;
    let n = m.nrows();
    let scale = m.norm();
    let failure = || Error::NumericFailure {
        routine: "eigenvalues",
        detail: format!("Schur iteration did not deflate (dim {n}, ‖M‖_F = {scale:.3e}, cap {})", iteration_cap(n)),
    };
    let schur = Schur::try_new(m.clone(), f64::EPSILON, iteration_cap(n)).ok_or_else(failure)?;
    let values = schur.eigenvalues().ok_or_else(failure)?;
    Ok(values.iter().copied().collect())
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    let s = singular_values(m)?;
    let (sigma_max, sigma_min) = (s[0], s[s.len() - 1]);
    if sigma_max == 0.0 || sigma_min <= SINGULAR_RTOL * sigma_max {
        return Err(Error::SingularMatrix { sigma_min, sigma_max });
    }
    m.clone().try_inverse().ok_or(Error::SingularMatrix { sigma_min, sigma_max })
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// `‖M − M*‖`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    norm(&(m - m.adjoint()))
}

/// `‖U*U − I‖`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    norm(&(u.adjoint() * u - identity(u.nrows())))
}

/// Diagnostics of a Hermitian square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdSqrtInfo {
    pub min_eigenvalue: f64,
    pub clamped: usize,
}

/// Hermitian PSD square root. Eigenvalues in `[−clamp_tol, 0)` are clamped
/// to zero; anything more negative is an error.
pub fn psd_sqrt(h: &CMatrix, clamp_tol: f64) -> Result<CMatrix> {
    psd_sqrt_with_info(h, clamp_tol).map(|(s, _)| s)
}

pub fn psd_sqrt_with_info(h: &CMatrix, clamp_tol: f64) -> Result<(CMatrix, PsdSqrtInfo)> {
    ensure_valid(h)?;
    let n = h.nrows();
    let residual = (h - h.adjoint()).norm();
    if residual > HERMITIAN_RTOL * (1.0 + h.norm()) {
        return Err(Error::NotHermitian { residual });
    }
    let eig = SymmetricEigen::try_new(hermitian_part(h), f64::EPSILON, iteration_cap(n)).ok_or_else(|| {
        Error::NumericFailure {
            routine: "psd_sqrt",
            detail: format!("Hermitian eigensolver exceeded {} sweeps (dim {n})", iteration_cap(n)),
        }
    })?;
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -clamp_tol {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let clamped = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
    let roots: Vec<C64> = eig.eigenvalues.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)).collect();
    let q = &eig.eigenvectors;
    let s = hermitian_part(&(q * diag(&roots) * q.adjoint()));
    Ok((s, PsdSqrtInfo { min_eigenvalue, clamped }))
}

/// `M = unitary · positive`, `positive = (M*M)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub unitary: CMatrix,
    pub positive: CMatrix,
}

pub fn polar(m: &CMatrix) -> Result<Polar> {
    let f = svd(m)?;
    let sigma_max = f.singular_values[0];
    let sigma_min = f.singular_values[f.singular_values.len() - 1];
    if sigma_max == 0.0 || sigma_min <= SINGULAR_RTOL * sigma_max {
        return Err(Error::SingularMatrix { sigma_min, sigma_max });
    }
    let sigma: Vec<C64> = f.singular_values.iter().map(|&s| C64::new(s, 0.0)).collect();
    let unitary = &f.left * f.right.adjoint();
    let positive = hermitian_part(&(&f.right * diag(&sigma) * f.right.adjoint()));
    Ok(Polar { unitary, positive })
}

// Unitary polar factor of an arbitrary square matrix (the nearest unitary).
// For singular input the factor is not unique; the SVD fixes one choice.
fn nearest_unitary(m: &CMatrix) -> Result<CMatrix> {
    let f = svd(m)?;
    Ok(&f.left * f.right.adjoint())
}

// Orthonormal basis of the orthogonal complement of the (orthonormal)
// columns of `basis`, as the top eigenvectors of I − B B*.
fn complement_basis(basis: &CMatrix, n: usize) -> Result<CMatrix> {
    let k = basis.ncols();
    if k == 0 {
        return Ok(identity(n));
    }
    if k >= n {
        return Ok(CMatrix::zeros(n, 0));
    }
    let proj = identity(n) - basis * basis.adjoint();
    let eig = SymmetricEigen::try_new(hermitian_part(&proj), f64::EPSILON, iteration_cap(n)).ok_or_else(|| {
        Error::NumericFailure {
            routine: "common_polar_unitary",
            detail: "complement eigensolver did not converge".into(),
        }
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<_> = order[..n - k].iter().map(|&j| eig.eigenvectors.column(j)).collect();
    Ok(CMatrix::from_columns(&cols))
}

/// The shared polar unitary of a cross pair.
#[derive(Debug, Clone)]
pub struct CrossPolar {
    pub unitary: CMatrix,
    /// Dimension of the subspace on which `U` is fixed by convention rather
    /// than by the pair (`n − rank Z − rank W`).
    pub free_dim: usize,
}

/// A unitary `U` with `Z = U·|Z|` and `W = |W*|·U*` for a pair with
/// `ZW = WZ = 0`.
///
/// The polar isometries of `Z` (from `ran Z*` onto `ran Z`) and of `W*`
/// (from `ran W` onto `ran W*`) have orthogonal initial and orthogonal final
/// spaces because `ZW = WZ = 0`. On what is left, the domain complement is
/// sent to the range complement by the nearest unitary, which is the
/// identity whenever the two complements coincide (e.g. `Z = W = 0`).
pub fn common_polar_unitary(z: &CMatrix, w: &CMatrix) -> Result<CrossPolar> {
    ensure_valid(z)?;
    ensure_valid(w)?;
    let n = z.nrows();
    if w.nrows() != n {
        return Err(Error::InvalidInput(format!("pair dimensions differ: {n} and {}", w.nrows())));
    }
    let zw = norm(&(z * w));
    let wz = norm(&(w * z));
    let tol = MEMBERSHIP_TOL * (1.0 + norm(z) * norm(w));
    if zw > tol || wz > tol {
        return Err(Error::NotACrossPair { zw, wz });
    }

    let fz = svd(z)?;
    let fw = svd(&w.adjoint())?;
    let rank = |s: &[f64]| {
        let cut = RANK_RTOL * s[0].max(1.0);
        s.iter().take_while(|&&x| x > cut).count()
    };
    let kz = rank(&fz.singular_values);
    let kw = rank(&fw.singular_values);
    if kz + kw > n {
        // rank Z + rank W ≤ n whenever ran W ⊆ ker Z.
        return Err(Error::NotACrossPair { zw, wz });
    }

    let mut domain_cols = Vec::with_capacity(kz + kw);
    let mut range_cols = Vec::with_capacity(kz + kw);
    for j in 0..kz {
        domain_cols.push(fz.right.column(j).into_owned());
        range_cols.push(fz.left.column(j).into_owned());
    }
    for j in 0..kw {
        domain_cols.push(fw.right.column(j).into_owned());
        range_cols.push(fw.left.column(j).into_owned());
    }
    let (domain, range) = if domain_cols.is_empty() {
        (CMatrix::zeros(n, 0), CMatrix::zeros(n, 0))
    } else {
        (CMatrix::from_columns(&domain_cols), CMatrix::from_columns(&range_cols))
    };

    let mut u0 = &range * domain.adjoint();
    let free_dim = n - kz - kw;
    if free_dim > 0 {
        let dc = complement_basis(&domain, n)?;
        let rc = complement_basis(&range, n)?;
        let link = nearest_unitary(&(rc.adjoint() * &dc))?;
        u0 += &rc * link * dc.adjoint();
    }
    // Polishing removes the O(‖ZW‖/σ) loss of orthogonality between the two
    // singular-vector families.
    let unitary = nearest_unitary(&u0)?;
    Ok(CrossPolar { unitary, free_dim })
}

/// Complex Gaussian matrix with `E|g_ij|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = C64::new(re * scale, im * scale);
        }
    }
    m
}

/// Haar unitary: QR of a complex Gaussian matrix with the phases of the
/// diagonal of `R` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed unitary, deterministic per `(dim, seed)`.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    assert!(dim >= 1, "random_unitary needs dim ≥ 1");
    haar_unitary(dim, &mut seeds::rng(seed))
}

/// `max_{a ∈ from} min_{b ∈ to} |a − b|`: how far `from` is from lying
/// inside `to`.
pub fn spectral_inclusion_distance(from: &[C64], to: &[C64]) -> f64 {
    from.iter().map(|a| to.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// Largest distance in a greedy nearest-first one-to-one pairing of two
/// multisets of equal size (`inf` if the sizes differ).
pub fn matched_spectral_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

/// Row-major `[re, im]` entries, the layout used in serialized reports.
pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Inverse of [`matrix_rows`]; rows must have equal length.
pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput("ragged matrix rows".into()));
    }
    let out = CMatrix::from_fn(n, m, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
    ensure_valid(&out)?;
    Ok(out)
}

/// `[[a, b], [c, d]]` for equally sized square blocks.
pub fn block2x2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}
