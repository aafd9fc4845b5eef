//! Perspective differences `D_{f,g}(A|B) = A sigma_f B - A sigma_g B` and
//! their named specializations: the Tsallis relative operator entropy
//! `T_t(A|B) = (A #_t B - A) / t` and the relative operator entropy
//! `S(A|B) = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}`.

use crate::error::{Error, Result};
use crate::matcore::CMatrix;
use crate::matfunc::FunctionSpec;
use crate::means::{geom_t, mean_sigma};
use crate::sector::SectorMatrix;

/// Difference of two perspectives, with the representative names recorded.
#[derive(Clone, Debug)]
pub struct PerspectiveDiff {
    pub value: CMatrix,
    pub f_name: String,
    pub g_name: String,
    pub t_params: Vec<f64>,
}

/// Tsallis relative operator entropy `(A #_t B - A) / t` for `t` in `(0, 1]`.
/// The `t -> 0` limit is [`rel_entropy`].
pub fn tsallis(a: &SectorMatrix, b: &SectorMatrix, t: f64) -> Result<CMatrix> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParam(format!(
            "tsallis parameter must lie in (0, 1], got {t}"
        )));
    }
    let g = geom_t(a, b, t)?;
    Ok((&g.value - a.base()).scale_re(1.0 / t))
}

/// Relative operator entropy via the principal logarithm of the inner
/// matrix.
pub fn rel_entropy(a: &SectorMatrix, b: &SectorMatrix) -> Result<CMatrix> {
    Ok(mean_sigma(&FunctionSpec::raw_log(), a, b)?.value)
}

/// `D_{f,g}(A|B) = A sigma_f B - A sigma_g B`.
pub fn perspective_diff(
    f: &FunctionSpec,
    g: &FunctionSpec,
    a: &SectorMatrix,
    b: &SectorMatrix,
) -> Result<PerspectiveDiff> {
    let mf = mean_sigma(f, a, b)?;
    let mg = mean_sigma(g, a, b)?;
    let mut t_params = Vec::new();
    for spec in [f, g] {
        t_params.push(spec.deriv_at_1());
    }
    Ok(PerspectiveDiff {
        value: &mf.value - &mg.value,
        f_name: f.name().to_string(),
        g_name: g.name().to_string(),
        t_params,
    })
}

/// Both sides of the congruence identity
/// `C* D_{f,g}(A|B) C = D_{f,g}(C*AC | C*BC)`, returned for comparison.
pub fn congruence_diff(
    c: &CMatrix,
    f: &FunctionSpec,
    g: &FunctionSpec,
    a: &SectorMatrix,
    b: &SectorMatrix,
) -> Result<(CMatrix, CMatrix)> {
    crate::decomp::inverse(c)?; // NearSingular guard
    let d = perspective_diff(f, g, a, b)?;
    let left = &(&c.adjoint() * &d.value) * c;
    let ca = SectorMatrix::certify(&(&c.adjoint() * a.base()) * c)?;
    let cb = SectorMatrix::certify(&(&c.adjoint() * b.base()) * c)?;
    let right = perspective_diff(f, g, &ca, &cb)?.value;
    Ok((left, right))
}
