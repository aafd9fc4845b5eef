//! Eigendecompositions, SVD-based polar decomposition, principal square
//! roots and inverses: the kernels every higher layer consumes.

use faer::c64;
use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use crate::error::{Error, Result};
use crate::matcore::{tol, CMatrix, HermMatrix, C};
use crate::sector::SectorMatrix;

/// Result of an eigendecomposition `A V = V diag(values)`.
#[derive(Clone, Debug)]
pub struct EigResult {
    /// Eigenvalues; real ascending for the Hermitian path.
    pub values: Vec<C>,
    /// Right eigenvectors, one per column.
    pub vectors: CMatrix,
    /// Spectral condition number of the eigenvector matrix (1 for unitary).
    pub vec_condition: f64,
}

/// Polar factorization `A = U |A|` with `U` unitary and `|A|` PSD.
#[derive(Clone, Debug)]
pub struct PolarResult {
    pub unitary: CMatrix,
    pub modulus: HermMatrix,
}

/// Hermitian eigendecomposition: real ascending eigenvalues, unitary
/// eigenvectors, `vec_condition = 1`.
pub fn herm_eig(h: &HermMatrix) -> Result<EigResult> {
    let n = h.dim();
    let evd = h
        .base()
        .mat()
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::SolverFailure)?;
    let s = evd.S();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.partial_cmp(&s[j].re).expect("finite eigenvalues"));
    let values: Vec<C> = order.iter().map(|&i| C::new(s[i].re, 0.0)).collect();
    let vectors = CMatrix::from_fn(n, |i, j| u[(i, order[j])]);
    Ok(EigResult {
        values,
        vectors,
        vec_condition: 1.0,
    })
}

/// General eigendecomposition. Refuses numerically defective matrices
/// (eigenvector condition beyond `DEFECTIVE_CAP`), signalling the caller to
/// take the contour route instead.
pub fn gen_eig(a: &CMatrix) -> Result<EigResult> {
    let n = a.dim();
    let evd = a.mat().eigen().map_err(|_| Error::SolverFailure)?;
    let s = evd.S();
    let u = evd.U();
    let values: Vec<C> = (0..n).map(|i| s[i]).collect();
    let vectors = CMatrix::from_fn(n, |i, j| u[(i, j)]);

    let vec_condition = {
        let svd = vectors.mat().svd().map_err(|_| Error::SolverFailure)?;
        let smax = svd.S()[0].re;
        let smin = svd.S()[n - 1].re;
        if smin <= 0.0 || !smin.is_finite() {
            f64::INFINITY
        } else {
            smax / smin
        }
    };
    if vec_condition.is_nan() || vec_condition > tol::DEFECTIVE_CAP {
        return Err(Error::DefectiveMatrix { vec_condition });
    }

    // Residual guard: A V - V diag should vanish relative to |A| cond(V).
    let av = a * &vectors;
    let vd = CMatrix::from_fn(n, |i, j| vectors.entry(i, j) * values[j]);
    let resid = av.entrywise_dist(&vd);
    if resid > tol::EIG_TOL * a.op_norm().max(1.0) * vec_condition.max(1.0) {
        return Err(Error::SolverFailure);
    }

    Ok(EigResult {
        values,
        vectors,
        vec_condition,
    })
}

/// Polar decomposition from the SVD `A = W S V*`: `U = W V*`,
/// `|A| = V S V*`. Requires `A` comfortably invertible so the unitary
/// factor is unique.
pub fn polar(a: &CMatrix) -> Result<PolarResult> {
    let n = a.dim();
    let svd = a.mat().svd().map_err(|_| Error::SolverFailure)?;
    let smax = svd.S()[0].re;
    let smin = svd.S()[n - 1].re;
    if smin <= tol::SING_TOL * smax.max(1.0) {
        return Err(Error::NearSingular {
            sigma_ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let w = svd.U();
    let v = svd.V();
    let unitary = CMatrix::new((w * v.adjoint()).to_owned())?;
    let sv = Mat::from_fn(n, n, |i, j| v[(i, j)] * svd.S()[j]);
    let modulus = HermMatrix::hermitize(&CMatrix::new(&sv * v.adjoint())?);
    Ok(PolarResult { unitary, modulus })
}

/// `|A| = (A* A)^{1/2}`, computed through the Hermitian eigendecomposition
/// of `A* A` (independent of the SVD route used by [`polar`]).
pub fn abs_val(a: &CMatrix) -> Result<HermMatrix> {
    let ata = HermMatrix::hermitize(&(&a.adjoint() * a));
    sqrt_psd(&ata)
}

/// Applies a real scalar function to a Hermitian matrix eigenvalue-wise.
pub fn herm_apply(h: &HermMatrix, f: impl Fn(f64) -> f64) -> Result<HermMatrix> {
    let eig = herm_eig(h)?;
    let n = h.dim();
    let v = &eig.vectors;
    let fl: Vec<f64> = eig.values.iter().map(|z| f(z.re)).collect();
    let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * C::new(fl[j], 0.0));
    Ok(HermMatrix::hermitize(&(&vf * &v.adjoint())))
}

/// PSD square root. Eigenvalues in `[-ORDER_TOL * scale, 0)` are clamped to
/// zero; materially negative spectra are rejected.
pub fn sqrt_psd(h: &HermMatrix) -> Result<HermMatrix> {
    let eig = herm_eig(h)?;
    let lmin = eig.values.first().map(|z| z.re).unwrap_or(0.0);
    let lmax_abs = eig.values.iter().fold(0.0f64, |acc, z| acc.max(z.re.abs()));
    let scale = 1.0f64.max(lmax_abs);
    if lmin < -tol::ORDER_TOL * scale {
        return Err(Error::NotPsd { lambda_min: lmin });
    }
    let n = h.dim();
    let v = &eig.vectors;
    let sq: Vec<f64> = eig
        .values
        .iter()
        .map(|z| if z.re < 0.0 { 0.0 } else { z.re.sqrt() })
        .collect();
    let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * C::new(sq[j], 0.0));
    Ok(HermMatrix::hermitize(&(&vf * &v.adjoint())))
}

/// `H^{-1/2}` for positive definite `H`.
pub fn herm_inv_sqrt(h: &HermMatrix) -> Result<HermMatrix> {
    let eig = herm_eig(h)?;
    let lmin = eig.values.first().map(|z| z.re).unwrap_or(0.0);
    let lmax = eig.values.last().map(|z| z.re).unwrap_or(0.0);
    if lmin <= tol::SING_TOL * lmax.max(1.0) {
        return Err(Error::NearSingular {
            sigma_ratio: if lmax > 0.0 { lmin / lmax } else { 0.0 },
        });
    }
    let n = h.dim();
    let v = &eig.vectors;
    let inv_sq: Vec<f64> = eig.values.iter().map(|z| 1.0 / z.re.sqrt()).collect();
    let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * C::new(inv_sq[j], 0.0));
    Ok(HermMatrix::hermitize(&(&vf * &v.adjoint())))
}

/// Principal square root of an accretive matrix by diagonalization; the
/// spectrum lies in the open right half-plane, so the principal branch is
/// well defined. Defective inputs propagate for the caller's contour route.
pub fn principal_sqrt_accretive(a: &SectorMatrix) -> Result<CMatrix> {
    let eig = gen_eig(a.base())?;
    let n = a.base().dim();
    let roots: Vec<C> = eig.values.iter().map(|z| z.sqrt()).collect();
    let v = &eig.vectors;
    let vinv = inverse(v)?;
    let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * roots[j]);
    Ok(&vf * &vinv)
}

/// Matrix inverse via full-pivot LU, with a singularity guard.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let svd = a.mat().svd().map_err(|_| Error::SolverFailure)?;
    let smax = svd.S()[0].re;
    let smin = svd.S()[n - 1].re;
    if smin <= tol::SING_TOL * smax.max(1.0) {
        return Err(Error::NearSingular {
            sigma_ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let inv: Mat<c64> = a.mat().full_piv_lu().inverse();
    CMatrix::new(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_gaussian_matrix, random_hermitian, rng_from};
    use crate::sector::random_sector;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn herm_eig_identity_and_swap() {
        let eig = herm_eig(&HermMatrix::identity(2)).unwrap();
        assert!((eig.values[0].re - 1.0).abs() < 1e-14);
        assert!((eig.values[1].re - 1.0).abs() < 1e-14);
        assert_eq!(eig.vec_condition, 1.0);

        let swap = HermMatrix::certify(
            CMatrix::from_rows(2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
        )
        .unwrap();
        let eig = herm_eig(&swap).unwrap();
        assert!((eig.values[0].re + 1.0).abs() < 1e-14);
        assert!((eig.values[1].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn herm_eig_reconstructs() {
        let mut rng = rng_from(1, &[6]);
        let h = random_hermitian(&mut rng, 6);
        let eig = herm_eig(&h).unwrap();
        let v = &eig.vectors;
        let vd = CMatrix::from_fn(6, |i, j| v.entry(i, j) * eig.values[j]);
        let recon = &vd * &v.adjoint();
        assert!(recon.entrywise_dist(h.base()) < 1e-10 * (1.0 + h.op_norm()));
        // eigenvectors unitary
        let vv = &v.adjoint() * v;
        assert!(vv.entrywise_dist(&CMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn gen_eig_diagonal_and_jordan() {
        let d = CMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let eig = gen_eig(&d).unwrap();
        let mut vals: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);

        let jordan =
            CMatrix::from_rows(2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            gen_eig(&jordan),
            Err(Error::DefectiveMatrix { .. })
        ));
    }

    #[test]
    fn gen_eig_residual_bound() {
        let a =
            CMatrix::from_rows(2, &[c(2.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(2.1, 0.0)]).unwrap();
        let eig = gen_eig(&a).unwrap();
        assert!(eig.vec_condition.is_finite());
        let v = &eig.vectors;
        let av = &a * v;
        let vd = CMatrix::from_fn(2, |i, j| v.entry(i, j) * eig.values[j]);
        assert!(av.entrywise_dist(&vd) < 1e-9);
    }

    #[test]
    fn polar_simple_cases() {
        let p = polar(&CMatrix::identity(2)).unwrap();
        assert!(p.unitary.entrywise_dist(&CMatrix::identity(2)) < 1e-12);
        assert!(p.modulus.base().entrywise_dist(&CMatrix::identity(2)) < 1e-12);

        let rot =
            CMatrix::from_rows(2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let p = polar(&rot).unwrap();
        assert!(p.unitary.entrywise_dist(&rot) < 1e-12);
        assert!(p.modulus.base().entrywise_dist(&CMatrix::identity(2)) < 1e-12);

        let two = CMatrix::scalar(c(2.0, 0.0));
        let p = polar(&two).unwrap();
        assert!((p.unitary.entry(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((p.modulus.base().entry(0, 0) - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn polar_rejects_singular() {
        let z = CMatrix::zeros(2);
        assert!(matches!(polar(&z), Err(Error::NearSingular { .. })));
    }

    #[test]
    fn polar_reconstructs_and_never_fails_on_sectorial() {
        for k in 0..50 {
            let a = random_sector(2 + k % 5, 0.9, 1.0, 100 + k as u64);
            let p = polar(a.base()).expect("accretive implies invertible");
            let recon = &p.unitary * p.modulus.base();
            assert!(recon.entrywise_dist(a.base()) <= 1e-10 * (1.0 + a.base().op_norm()));
            let uu = &p.unitary.adjoint() * &p.unitary;
            assert!(uu.entrywise_dist(&CMatrix::identity(a.base().dim())) < 1e-10);
            assert!(p.modulus.lambda_min().unwrap() > -1e-10);
        }
    }

    #[test]
    fn abs_val_cases() {
        let neg = CMatrix::scalar(c(-3.0, 0.0));
        assert!((abs_val(&neg).unwrap().base().entry(0, 0) - c(3.0, 0.0)).norm() < 1e-12);

        let nilp =
            CMatrix::from_rows(2, &[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let m = abs_val(&nilp).unwrap();
        assert!((m.base().entry(0, 0)).norm() < 1e-12);
        assert!((m.base().entry(1, 1) - c(2.0, 0.0)).norm() < 1e-12);

        // unitary input -> identity
        let mut rng = rng_from(8, &[3]);
        let g = complex_gaussian_matrix(&mut rng, 4);
        let u = polar(&g).unwrap().unitary;
        assert!(
            abs_val(&u)
                .unwrap()
                .base()
                .entrywise_dist(&CMatrix::identity(4))
                < 1e-10
        );
    }

    #[test]
    fn abs_val_matches_polar_modulus() {
        let mut rng = rng_from(13, &[1]);
        for _ in 0..50 {
            let g = complex_gaussian_matrix(&mut rng, 4);
            if let Ok(p) = polar(&g) {
                let m = abs_val(&g).unwrap();
                assert!(m.base().entrywise_dist(p.modulus.base()) <= 1e-9 * (1.0 + m.op_norm()));
            }
        }
    }

    #[test]
    fn sqrt_psd_cases() {
        let four_i = HermMatrix::identity(3).scale_re(4.0);
        let s = sqrt_psd(&four_i).unwrap();
        assert!(s.base().entrywise_dist(&CMatrix::identity(3).scale_re(2.0)) < 1e-12);

        let d = HermMatrix::from_real_diag(&[1.0, 9.0]);
        let s = sqrt_psd(&d).unwrap();
        assert!((s.base().entry(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((s.base().entry(1, 1) - c(3.0, 0.0)).norm() < 1e-12);

        assert!(matches!(
            sqrt_psd(&HermMatrix::from_real_diag(&[-1.0, 1.0])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn sqrt_psd_squaring_residual() {
        let mut rng = rng_from(21, &[5]);
        for _ in 0..30 {
            let g = complex_gaussian_matrix(&mut rng, 5);
            let pd = HermMatrix::hermitize(&(&g.adjoint() * &g));
            let s = sqrt_psd(&pd).unwrap();
            let s2 = s.base() * s.base();
            assert!(s2.entrywise_dist(pd.base()) <= 1e-9 * (1.0 + pd.op_norm()));
        }
    }

    #[test]
    fn principal_sqrt_cases() {
        let i3 = random_sector(3, 0.0, 1.0, 4);
        // identity-like Hermitian PD: sqrt squares back
        let s = principal_sqrt_accretive(&i3).unwrap();
        assert!((&s * &s).entrywise_dist(i3.base()) < 1e-9);

        // scalar i: principal branch e^{i pi/4}
        let a = SectorMatrix::certify(CMatrix::scalar(c(1e-12, 1.0))).unwrap_or_else(|_| {
            // Re part must be positive for certification; nudge instead.
            SectorMatrix::certify(CMatrix::scalar(c(1e-9, 1.0))).unwrap()
        });
        let s = principal_sqrt_accretive(&a).unwrap();
        let expected = c(1e-9, 1.0).sqrt();
        assert!((s.entry(0, 0) - expected).norm() < 1e-12);
    }

    #[test]
    fn principal_sqrt_random_sectorial() {
        for k in 0..40 {
            let a = random_sector(5, 1.0, 1.0, 500 + k);
            let s = principal_sqrt_accretive(&a).unwrap();
            let resid = (&s * &s).entrywise_dist(a.base());
            assert!(
                resid <= 1e-9 * (1.0 + a.base().op_norm()),
                "trial {k}: {resid}"
            );
            // sqrt of accretive stays accretive
            assert!(s.re_part().lambda_min().unwrap() > 0.0);
        }
    }

    #[test]
    fn weighted_real_part_identity() {
        // A^{-1/2} Re(A^{1/2} X A^{1/2}) A^{-1/2} = Re X for PD A
        let mut rng = rng_from(29, &[0]);
        for k in 0..200 {
            let n = 2 + k % 4;
            let g = complex_gaussian_matrix(&mut rng, n);
            let a = HermMatrix::hermitize(&(&g.adjoint() * &g))
                .add(&HermMatrix::identity(n).scale_re(0.05));
            let x = complex_gaussian_matrix(&mut rng, n);
            let s = sqrt_psd(&a).unwrap();
            let si = herm_inv_sqrt(&a).unwrap();
            let inner = (&(s.base() * &x) * s.base()).re_part();
            let lhs = &(si.base() * inner.base()) * si.base();
            let rhs = x.re_part();
            assert!(
                lhs.entrywise_dist(rhs.base()) <= 1e-10 * (1.0 + rhs.base().max_abs()),
                "k={k}"
            );
        }
    }

    #[test]
    fn inverse_cases() {
        let i = inverse(&CMatrix::identity(3)).unwrap();
        assert!(i.entrywise_dist(&CMatrix::identity(3)) < 1e-14);

        let d = CMatrix::diag(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let di = inverse(&d).unwrap();
        assert!((di.entry(0, 0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((di.entry(1, 1) - c(0.25, 0.0)).norm() < 1e-14);

        for k in 0..20 {
            let a = random_sector(4, 0.8, 0.9, 900 + k);
            let ai = inverse(a.base()).unwrap();
            let resid = (a.base() * &ai).entrywise_dist(&CMatrix::identity(4));
            assert!(resid < 1e-10);
        }

        assert!(matches!(
            inverse(&CMatrix::zeros(2)),
            Err(Error::NearSingular { .. })
        ));
    }
}
