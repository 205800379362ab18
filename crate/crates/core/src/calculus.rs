//! Functional calculus: Laurent polynomials on single operators and
//! hyperbola functions on operator pairs, by Horner's rule. No
//! diagonalization is used; the interesting operators are far from normal.

use crate::domains::HyperbolaPair;
use crate::error::{Error, Result};
use crate::laurent::{HyperbolaFunction, LaurentPoly, Polynomial};
use crate::numkernel::{self, CMatrix, C64};
use crate::tolerances::MEMBERSHIP_TOL;

/// `p(X)` by Horner's rule.
pub fn eval_polynomial(p: &Polynomial, x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let id = numkernel::identity(n);
    p.coeffs().iter().rev().fold(CMatrix::zeros(n, n), |acc, &c| acc * x + &id * c)
}

/// `Σ_{n≥0} c_n Xⁿ + Σ_{n≥1} c_{−n} (X⁻¹)ⁿ`, with one inverse.
pub fn eval_on_operator(g: &LaurentPoly, x: &CMatrix) -> Result<CMatrix> {
    numkernel::ensure_valid(x)?;
    let n = x.nrows();
    let id = numkernel::identity(n);
    let positive = (0..=g.hi()).rev().fold(CMatrix::zeros(n, n), |acc, k| acc * x + &id * g.coeff(k));
    if g.lo() == 0 {
        return Ok(positive);
    }
    let x_inv = numkernel::inverse(x)?;
    let negative = (1..=-g.lo()).rev().fold(CMatrix::zeros(n, n), |acc, k| (acc + &id * g.coeff(-k)) * &x_inv);
    Ok(positive + negative)
}

/// `f⁺(Z)·Z + a₀·I + W·f⁻(W)` with no domain checks. Used directly on
/// dilated pairs, which sit on the boundary of the domain.
pub fn eval_pair_matrices(hf: &HyperbolaFunction, z: &CMatrix, w: &CMatrix) -> CMatrix {
    let n = z.nrows();
    eval_polynomial(&hf.f_plus, z) * z + numkernel::identity(n) * hf.a0 + w * eval_polynomial(&hf.f_minus, w)
}

/// `f(Z, W)` for a pair in the closed domain (the algebraic relations hold
/// within tolerance and both norms are at most one).
pub fn eval_on_pair(hf: &HyperbolaFunction, h: &HyperbolaPair) -> Result<CMatrix> {
    let report = h.membership(MEMBERSHIP_TOL);
    if !report.closure_ok {
        return Err(Error::Membership(report.failures.join("; ")));
    }
    Ok(eval_pair_matrices(hf, h.z(), h.w()))
}

/// Leading `k×k` block.
pub fn compression_top_left(m: &CMatrix, k: usize) -> Result<CMatrix> {
    if k == 0 || k > m.nrows() || k > m.ncols() {
        return Err(Error::InvalidInput(format!(
            "compression size {k} out of range for a {}×{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.view((0, 0), (k, k)).into_owned())
}

/// `a₀·I` convenience used by checks on constant functions.
pub fn scalar_matrix(n: usize, a: C64) -> CMatrix {
    numkernel::identity(n) * a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{hyperbola_from_annulus, sample_quantum_hyperbola, AnnulusOperator};
    use crate::laurent::{disk_sup_norm, random_laurent, to_hyperbola};
    use crate::numkernel::{complex_gaussian, norm, real_matrix};
    use crate::{seeds, Radius};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn monomial_and_constant() {
        let x = complex_gaussian(3, 3, &mut seeds::rng(1));
        let zeta = LaurentPoly::monomial(1, c(1.0)).unwrap();
        assert!(norm(&(eval_on_operator(&zeta, &x).unwrap() - &x)) < 1e-15);
        let one = LaurentPoly::constant(c(1.0));
        assert_eq!(eval_on_operator(&one, &x).unwrap(), numkernel::identity(3));
    }

    #[test]
    fn singular_operator_with_negative_powers_fails() {
        let n = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eval_on_operator(&LaurentPoly::joukowski(), &n), Err(Error::SingularMatrix { .. })));
        let zeta2 = LaurentPoly::monomial(2, c(1.0)).unwrap();
        assert_eq!(eval_on_operator(&zeta2, &n).unwrap(), CMatrix::zeros(2, 2));
    }

    #[test]
    fn dimension_one_matches_scalar_evaluation() {
        for seed in 0..40 {
            let g = random_laurent(-6, 8, 1.8, seed).unwrap();
            let zeta = C64::new(0.4 + 0.03 * seed as f64, -0.7);
            let x = CMatrix::from_element(1, 1, zeta);
            let m = eval_on_operator(&g, &x).unwrap()[(0, 0)];
            let s = g.eval(zeta).unwrap();
            assert!((m - s).norm() <= 1e-12 * s.norm().max(1.0));
        }
    }

    #[test]
    fn z_plus_w_on_nilpotent_pair() {
        let n = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        let h = HyperbolaPair::new(n.clone(), n, Radius::Infinite).unwrap();
        let v = eval_on_pair(&HyperbolaFunction::z_plus_w(), &h).unwrap();
        assert_eq!(v, real_matrix(2, &[0.0, 2.0, 0.0, 0.0]));
        let a0 = C64::new(0.3, -2.0);
        let v = eval_on_pair(&HyperbolaFunction::constant(a0), &h).unwrap();
        assert_eq!(v, scalar_matrix(2, a0));
    }

    #[test]
    fn pair_evaluation_rejects_non_members() {
        let id = numkernel::identity(2);
        let h = HyperbolaPair::new(id.clone(), id, Radius::Finite(2.0)).unwrap();
        assert!(matches!(eval_on_pair(&HyperbolaFunction::z_plus_w(), &h), Err(Error::Membership(_))));
    }

    #[test]
    fn annulus_and_hyperbola_paths_agree() {
        for (seed, &r) in [1.1, 1.5, 2.0, 10.0].iter().enumerate() {
            for dim in [1, 3, 5] {
                let h = sample_quantum_hyperbola(dim, r, 1e-3, seed as u64 * 10 + dim as u64).unwrap();
                let x = &h.z().clone() * c(r);
                let a = AnnulusOperator::new(x, r, 1e-4).unwrap();
                let h = hyperbola_from_annulus(&a).unwrap();
                let g = random_laurent(-5, 5, r, seed as u64).unwrap();
                let direct = eval_on_operator(&g, a.x()).unwrap();
                let via = eval_on_pair(&to_hyperbola(&g, r), &h).unwrap();
                assert!(norm(&(&direct - &via)) <= 1e-9 * (1.0 + norm(&direct)));
            }
        }
    }

    #[test]
    fn compression_examples() {
        let m = complex_gaussian(4, 4, &mut seeds::rng(2));
        assert_eq!(compression_top_left(&m, 4).unwrap(), m);
        let b = complex_gaussian(2, 2, &mut seeds::rng(3));
        let tri = numkernel::block2x2(&b, &m.view((0, 0), (2, 2)).into_owned(), &CMatrix::zeros(2, 2), &b);
        assert_eq!(compression_top_left(&tri, 2).unwrap(), b);
        assert!(compression_top_left(&m, 0).is_err());
        assert!(compression_top_left(&m, 5).is_err());
    }

    #[test]
    fn von_neumann_inequality_on_random_contractions() {
        let mut rng = seeds::rng(77);
        for trial in 0..200 {
            let dim = 1 + trial % 6;
            let t = complex_gaussian(dim, dim, &mut rng);
            let t = &t * c(1.0 / norm(&t));
            let p = Polynomial::new(complex_gaussian(1 + trial % 9, 1, &mut rng).iter().copied().collect()).unwrap();
            let bound = disk_sup_norm(&p, 4096).unwrap().certified_upper;
            assert!(norm(&eval_polynomial(&p, &t)) <= bound + 1e-9);
        }
    }

    proptest! {
        #[test]
        fn compression_never_increases_norm(seed in any::<u64>(), n in 1usize..8, k in 1usize..8) {
            let k = k.min(n);
            let m = complex_gaussian(n, n, &mut seeds::rng(seed));
            prop_assert!(norm(&compression_top_left(&m, k).unwrap()) <= norm(&m) * (1.0 + 1e-14));
        }
    }
}
