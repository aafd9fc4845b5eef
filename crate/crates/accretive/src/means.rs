//! Operator means of accretive matrices: the perspective
//! `A sigma_f B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`, the named weighted
//! means (arithmetic, harmonic, geometric, dual), and the quadrature-defined
//! weighted logarithmic mean.

use crate::decomp::{gen_eig, herm_eig, herm_inv_sqrt, inverse, sqrt_psd};
use crate::error::{Error, Result};
use crate::matcore::{tol, CMatrix, HermMatrix, C};
use crate::matfunc::{apply_fn_contour, cut_distance, fn_dual, sqrt_accretive, FunctionSpec};
use crate::quadrature::{gauss_legendre_01, mapped};
use crate::sector::SectorMatrix;

/// Which evaluation path produced a mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanRoute {
    Diagonalization,
    Contour,
}

#[derive(Clone, Debug)]
pub struct MeanResult {
    pub value: CMatrix,
    pub route: MeanRoute,
    /// Inner eigendecomposition residual (diagonalization) or node-doubling
    /// delta (contour / quadrature), relative.
    pub residual: f64,
}

/// Convention for the weighted logarithmic mean integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LogmeanConvention {
    /// Weights `(1-t)/t` and `t/(1-t)`, matching the representing function
    /// `l_t` (so the mean of equal arguments is the argument).
    #[default]
    Representing,
    /// Weight `(1-t)/t` on the first integral only. Exposed for comparison;
    /// note `A l_t A = 2(1-t) A` under this convention except at `t = 1/2`.
    Literal,
}

fn check_dims(a: &SectorMatrix, b: &SectorMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

fn is_hermitian(x: &CMatrix) -> bool {
    (x - &x.adjoint()).max_abs() <= tol::HERMITIAN_TOL * (1.0 + x.max_abs())
}

/// Mean of a positive definite Hermitian pair through the unitary
/// eigendecomposition; exact symmetric arithmetic for the alpha = 0 case.
pub fn mean_sigma_herm(f: &FunctionSpec, p: &HermMatrix, q: &HermMatrix) -> Result<HermMatrix> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let s = sqrt_psd(p)?;
    let si = herm_inv_sqrt(p)?;
    let m = HermMatrix::hermitize(&(&(si.base() * q.base()) * si.base()));
    let fm = crate::decomp::herm_apply(&m, |x| f.eval_real(x))?;
    Ok(HermMatrix::hermitize(&(&(s.base() * fm.base()) * s.base())))
}

/// The mean `A sigma_f B` for an accretive pair. Hermitian pairs route
/// through the unitary path; non-normal inner matrices take diagonalization
/// with a contour fallback when the eigenbasis is too ill-conditioned.
pub fn mean_sigma(f: &FunctionSpec, a: &SectorMatrix, b: &SectorMatrix) -> Result<MeanResult> {
    check_dims(a, b)?;
    if is_hermitian(a.base()) && is_hermitian(b.base()) {
        let value = mean_sigma_herm(f, &a.re_part(), &b.re_part())?;
        return Ok(MeanResult {
            value: value.into_base(),
            route: MeanRoute::Diagonalization,
            residual: 0.0,
        });
    }

    let sa = sqrt_accretive(a.base())?;
    let sai = inverse(&sa)?;
    let m = &(&sai * b.base()) * &sai;

    match gen_eig(&m) {
        Ok(eig) => {
            let scale = m.op_norm();
            for &z in &eig.values {
                let d = cut_distance(z);
                if d <= tol::SPEC_TOL * scale.max(1.0) {
                    return Err(Error::SpectrumOnCut { distance: d });
                }
            }
            let n = m.dim();
            let v = &eig.vectors;
            let vinv = inverse(v)?;
            let fv: Vec<C> = eig.values.iter().map(|&z| f.eval(z)).collect();
            let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * fv[j]);
            let fm = &vf * &vinv;
            // residual of the inner decomposition, the dominant error source
            let av = &m * v;
            let vd = CMatrix::from_fn(n, |i, j| v.entry(i, j) * eig.values[j]);
            let residual = av.entrywise_dist(&vd) / scale.max(1.0);
            Ok(MeanResult {
                value: &(&sa * &fm) * &sa,
                route: MeanRoute::Diagonalization,
                residual,
            })
        }
        Err(Error::DefectiveMatrix { .. }) => {
            let fm = apply_fn_contour(f, &m, 256)?;
            Ok(MeanResult {
                value: &(&sa * &fm) * &sa,
                route: MeanRoute::Contour,
                residual: tol::CONTOUR_TOL,
            })
        }
        Err(e) => Err(e),
    }
}

/// Weighted geometric mean, `f = x^t`; endpoints are exact.
pub fn geom_t(a: &SectorMatrix, b: &SectorMatrix, t: f64) -> Result<MeanResult> {
    check_dims(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParam(format!(
            "geometric weight must lie in [0, 1], got {t}"
        )));
    }
    if t == 0.0 || t == 1.0 {
        let value = if t == 0.0 { a.base() } else { b.base() }.clone();
        return Ok(MeanResult {
            value,
            route: MeanRoute::Diagonalization,
            residual: 0.0,
        });
    }
    mean_sigma(&FunctionSpec::power(t)?, a, b)
}

/// Weighted arithmetic mean `(1-t) A + t B`, closed form.
pub fn arith_t(a: &SectorMatrix, b: &SectorMatrix, t: f64) -> Result<MeanResult> {
    check_dims(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParam(format!(
            "arithmetic weight must lie in [0, 1], got {t}"
        )));
    }
    Ok(MeanResult {
        value: &a.base().scale_re(1.0 - t) + &b.base().scale_re(t),
        route: MeanRoute::Diagonalization,
        residual: 0.0,
    })
}

/// Weighted harmonic mean `((1-t) A^{-1} + t B^{-1})^{-1}`, closed form.
pub fn harm_t(a: &SectorMatrix, b: &SectorMatrix, t: f64) -> Result<MeanResult> {
    check_dims(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParam(format!(
            "harmonic weight must lie in [0, 1], got {t}"
        )));
    }
    let ai = inverse(a.base())?;
    let bi = inverse(b.base())?;
    let combo = &ai.scale_re(1.0 - t) + &bi.scale_re(t);
    Ok(MeanResult {
        value: inverse(&combo)?,
        route: MeanRoute::Diagonalization,
        residual: 0.0,
    })
}

/// Mean of the dual representative `x / f(x)`.
pub fn dual_mean(f: &FunctionSpec, a: &SectorMatrix, b: &SectorMatrix) -> Result<MeanResult> {
    mean_sigma(&fn_dual(f), a, b)
}

/// Weighted logarithmic mean by Gauss-Legendre quadrature of the geometric
/// path `p -> A #_p B` over `[0, t]` and `[t, 1]`, with a node-doubling
/// convergence check.
pub fn logmean_op(
    a: &SectorMatrix,
    b: &SectorMatrix,
    t: f64,
    nodes: usize,
    convention: LogmeanConvention,
) -> Result<MeanResult> {
    check_dims(a, b)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParam(format!(
            "logmean weight must lie in (0, 1), got {t}"
        )));
    }
    let (w1, w2) = match convention {
        LogmeanConvention::Representing => ((1.0 - t) / t, t / (1.0 - t)),
        LogmeanConvention::Literal => ((1.0 - t) / t, 1.0),
    };
    let nodes = nodes.max(4);

    let hermitian = is_hermitian(a.base()) && is_hermitian(b.base());

    // Hoisted outer factors: every #_p shares them by definition.
    let (sa, m_eig_vectors, m_values, route): (CMatrix, CMatrix, Vec<C>, MeanRoute) = if hermitian {
        let p = a.re_part();
        let s = sqrt_psd(&p)?;
        let si = herm_inv_sqrt(&p)?;
        let m = HermMatrix::hermitize(&(&(si.base() * b.re_part().base()) * si.base()));
        let eig = herm_eig(&m)?;
        (
            s.into_base(),
            eig.vectors,
            eig.values,
            MeanRoute::Diagonalization,
        )
    } else {
        let sa = sqrt_accretive(a.base())?;
        let sai = inverse(&sa)?;
        let m = &(&sai * b.base()) * &sai;
        match gen_eig(&m) {
            Ok(eig) => {
                let scale = m.op_norm();
                for &z in &eig.values {
                    let d = cut_distance(z);
                    if d <= tol::SPEC_TOL * scale.max(1.0) {
                        return Err(Error::SpectrumOnCut { distance: d });
                    }
                }
                (sa, eig.vectors, eig.values, MeanRoute::Diagonalization)
            }
            Err(Error::DefectiveMatrix { .. }) => {
                // contour route on the convention's representing function
                let eval = move |z: C| -> C {
                    if (z - C::new(1.0, 0.0)).norm() < 1e-8 {
                        // both pieces are analytic; first-order patch suffices
                        // at contour accuracy
                        return C::new(w1 * t + w2 * (1.0 - t), 0.0)
                            + (z - C::new(1.0, 0.0)) * (0.5 * (w1 * t * t + w2 * (1.0 - t * t)));
                    }
                    let w = z.ln();
                    let zt1 = (w * t).exp() - 1.0;
                    let z1 = z - 1.0;
                    (zt1 * w1 + (z1 - zt1) * w2) / w
                };
                let fspec = FunctionSpec::from_closure("logmean-quadrature-fallback", eval);
                let fm = apply_fn_contour(&fspec, &m, 256)?;
                let value = &(&sa * &fm) * &sa;
                return Ok(MeanResult {
                    value,
                    route: MeanRoute::Contour,
                    residual: tol::CONTOUR_TOL,
                });
            }
            Err(e) => return Err(e),
        }
    };

    let eval_at = |n_nodes: usize| -> Vec<C> {
        let rule = gauss_legendre_01(n_nodes);
        m_values
            .iter()
            .map(|&lam| {
                let lw = lam.ln();
                let mut acc = C::new(0.0, 0.0);
                for (p, w) in mapped(&rule, 0.0, t) {
                    acc += (lw * p).exp() * (w * w1);
                }
                for (p, w) in mapped(&rule, t, 1.0) {
                    acc += (lw * p).exp() * (w * w2);
                }
                acc
            })
            .collect()
    };

    let n = a.dim();
    let assemble = |g: &[C]| -> Result<CMatrix> {
        let v = &m_eig_vectors;
        let vg = CMatrix::from_fn(n, |i, j| v.entry(i, j) * g[j]);
        let inner = if hermitian {
            &vg * &v.adjoint()
        } else {
            &vg * &inverse(v)?
        };
        Ok(&(&sa * &inner) * &sa)
    };

    let coarse = assemble(&eval_at(nodes))?;
    let fine = assemble(&eval_at(2 * nodes))?;
    let delta = fine.entrywise_dist(&coarse) / fine.max_abs().max(1.0);
    if delta > 1e-7 {
        return Err(Error::QuadratureNotConverged { delta });
    }
    Ok(MeanResult {
        value: fine,
        route,
        residual: delta,
    })
}
