//! Operator-monotone function registry and matrix functional calculus.
//!
//! `f(A)` is evaluated by diagonalization when the eigenvector basis is
//! well conditioned, and otherwise by a resolvent contour integral. A third,
//! independent route instantiates the classical integral representation of
//! the power functions. The three routes cross-validate each other in the
//! test and acceptance suites.

use std::fmt;
use std::sync::Arc;

use crate::decomp::{gen_eig, herm_eig, inverse};
use crate::error::{Error, Result};
use crate::matcore::{tol, CMatrix, HermMatrix, C};
use crate::quadrature::{gauss_legendre_01, gauss_power_kernel};
use crate::sector::SectorMatrix;

/// Scalar representative of an operator mean / operator-monotone function:
/// an evaluator on the slit plane `C \ (-inf, 0]`, normalized so `f(1) = 1`,
/// with its derivative at 1 recorded (the weight of the associated mean).
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    eval: Arc<dyn Fn(C) -> C + Send + Sync>,
    deriv_at_1: f64,
    normalized: bool,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("deriv_at_1", &self.deriv_at_1)
            .field("normalized", &self.normalized)
            .finish()
    }
}

/// exp(z) - 1 without cancellation for small `z`.
fn cexpm1(z: C) -> C {
    let half = 0.5 * z.im;
    C::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half.sin() * half.sin(),
        z.re.exp() * z.im.sin(),
    )
}

/// Weighted logarithmic mean representing function
/// `l_t(z) = (1-t)/t (z^t - 1)/log z + t/(1-t) (z - z^t)/log z`,
/// with the removable singularity at `z = 1` patched by a fourth-order
/// Taylor expansion (the raw formula loses precision there).
fn ell_eval(t: f64, z: C) -> C {
    let u = z - C::new(1.0, 0.0);
    if u.norm() < 1e-4 {
        let c2 = t * (t - 1.0) / 3.0;
        let c3 = t * (t - 1.0) * (2.0 * t - 5.0) / 24.0;
        let c4 = t * (t - 1.0) * (12.0 * t * t - 72.0 * t + 109.0) / 720.0;
        return C::new(1.0, 0.0)
            + u * (C::new(t, 0.0) + u * (C::new(c2, 0.0) + u * (C::new(c3, 0.0) + u * c4)));
    }
    let w = z.ln();
    let zt1 = cexpm1(w * t); // z^t - 1
    let z1 = cexpm1(w); // z - 1
    (zt1 * ((1.0 - t) / t) + (z1 - zt1) * (t / (1.0 - t))) / w
}

impl FunctionSpec {
    fn new(
        name: impl Into<String>,
        deriv_at_1: f64,
        normalized: bool,
        eval: impl Fn(C) -> C + Send + Sync + 'static,
    ) -> Self {
        let spec = Self {
            name: name.into(),
            eval: Arc::new(eval),
            deriv_at_1,
            normalized,
        };
        if normalized {
            let at_one = spec.eval(C::new(1.0, 0.0));
            debug_assert!(
                (at_one - C::new(1.0, 0.0)).norm() <= 1e-12,
                "{}: f(1) = {at_one}",
                spec.name
            );
        }
        spec
    }

    pub fn eval(&self, z: C) -> C {
        (self.eval)(z)
    }

    /// Evaluation on the positive half-line, for Hermitian arguments.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(C::new(x, 0.0)).re
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn deriv_at_1(&self) -> f64 {
        self.deriv_at_1
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    /// `x^r` for `0 < r <= 1` (operator monotone range).
    pub fn power(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "power exponent must lie in (0, 1], got {r}"
            )));
        }
        Ok(Self::new(format!("power:{r}"), r, true, move |z| z.powf(r)))
    }

    /// `x^p` for any `p` in `[-2, 2]`, principal branch. Not operator
    /// monotone outside `(0, 1]`; used by the order and real-part checks
    /// that need `A^{2r}` and `A^{-r}`.
    pub fn raw_power(p: f64) -> Result<Self> {
        if !((-2.0..=2.0).contains(&p)) || p == 0.0 {
            return Err(Error::InvalidParam(format!(
                "raw power exponent must lie in [-2, 2] \\ {{0}}, got {p}"
            )));
        }
        Ok(Self::new(format!("rawpower:{p}"), p, true, move |z| {
            z.powf(p)
        }))
    }

    /// Weighted arithmetic representative `(1-t) + t x`.
    pub fn affine(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParam(format!(
                "affine weight must lie in [0, 1], got {t}"
            )));
        }
        Ok(Self::new(format!("affine:{t}"), t, true, move |z| {
            C::new(1.0 - t, 0.0) + z * t
        }))
    }

    /// Weighted harmonic representative `((1-t) + t/x)^{-1}`.
    pub fn harm(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParam(format!(
                "harmonic weight must lie in [0, 1], got {t}"
            )));
        }
        Ok(Self::new(format!("harm:{t}"), t, true, move |z| {
            (C::new(1.0 - t, 0.0) + t / z).inv()
        }))
    }

    /// `log x + 1`, the relative-entropy representative.
    pub fn log_shift() -> Self {
        Self::new("log", 1.0, true, |z| z.ln() + 1.0)
    }

    /// Deformed logarithm representative `(x^t - 1)/t + 1` for `t` in `(0, 1]`.
    pub fn tsallis(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "tsallis parameter must lie in (0, 1], got {t}"
            )));
        }
        Ok(Self::new(format!("tsallis:{t}"), t, true, move |z| {
            cexpm1(z.ln() * t) / t + 1.0
        }))
    }

    /// Weighted logarithmic mean representative `l_t`.
    pub fn logmean(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParam(format!(
                "logmean weight must lie in (0, 1), got {t}"
            )));
        }
        Ok(Self::new(format!("logmean:{t}"), t, true, move |z| {
            ell_eval(t, z)
        }))
    }

    /// Constant function 1; its mean is the left argument.
    pub fn one() -> Self {
        Self::new("one", 0.0, true, |_| C::new(1.0, 0.0))
    }

    /// Plain principal logarithm (not normalized: `log 1 = 0`).
    pub fn raw_log() -> Self {
        Self::new("rawlog", 1.0, false, |z| z.ln())
    }

    /// Wraps an ad-hoc evaluator (no normalization checks).
    pub(crate) fn from_closure(name: &str, eval: impl Fn(C) -> C + Send + Sync + 'static) -> Self {
        Self::new(name.to_string(), 0.0, false, eval)
    }

    /// Parses CLI-style names: `power:0.5`, `affine:0.3`, `harm:0.3`,
    /// `tsallis:0.5`, `log`, `logmean:0.25`, `one`.
    pub fn parse(s: &str) -> Result<Self> {
        let (head, param) = match s.split_once(':') {
            Some((h, p)) => {
                let v: f64 = p
                    .parse()
                    .map_err(|_| Error::InvalidParam(format!("bad parameter in '{s}'")))?;
                (h, Some(v))
            }
            None => (s, None),
        };
        let need = |p: Option<f64>| {
            p.ok_or_else(|| Error::InvalidParam(format!("'{head}' needs a parameter")))
        };
        match head {
            "power" => Self::power(need(param)?),
            "affine" | "arith" => Self::affine(need(param)?),
            "harm" => Self::harm(need(param)?),
            "tsallis" => Self::tsallis(need(param)?),
            "logmean" => Self::logmean(need(param)?),
            "log" => Ok(Self::log_shift()),
            "one" => Ok(Self::one()),
            _ => Err(Error::InvalidParam(format!("unknown function '{s}'"))),
        }
    }
}

/// Dual mean representative `x / f(x)`; an involution with
/// `g'(1) = 1 - f'(1)`. The geometric family is self-dual.
pub fn fn_dual(f: &FunctionSpec) -> FunctionSpec {
    let inner = f.eval.clone();
    FunctionSpec::new(
        format!("dual({})", f.name),
        1.0 - f.deriv_at_1,
        f.normalized,
        move |z| z / inner(z),
    )
}

/// The built-in operator-monotone family at canonical parameters, used by
/// property tests and the sanity fuzz checks.
pub fn builtin_registry() -> Vec<FunctionSpec> {
    let mut v = Vec::new();
    for r in [0.25, 0.5, 0.75] {
        v.push(FunctionSpec::power(r).unwrap());
    }
    for t in [0.3, 0.5, 0.7] {
        v.push(FunctionSpec::affine(t).unwrap());
        v.push(FunctionSpec::harm(t).unwrap());
        v.push(FunctionSpec::tsallis(t).unwrap());
        v.push(FunctionSpec::logmean(t).unwrap());
    }
    v.push(FunctionSpec::log_shift());
    v
}

/// Distance from `z` to the cut `(-inf, 0]`.
pub fn cut_distance(z: C) -> f64 {
    if z.re > 0.0 {
        z.norm()
    } else {
        z.im.abs()
    }
}

fn check_spectrum_off_cut(values: &[C], scale: f64) -> Result<()> {
    for &z in values {
        let d = cut_distance(z);
        if d <= tol::SPEC_TOL * scale.max(1.0) {
            return Err(Error::SpectrumOnCut { distance: d });
        }
    }
    Ok(())
}

/// `f(A)` by diagonalization. Hermitian inputs take the unitary route; the
/// general route refuses numerically defective bases (callers fall back to
/// [`apply_fn_contour`]).
pub fn apply_fn(f: &FunctionSpec, a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let defect = (a - &a.adjoint()).max_abs();
    if defect <= tol::HERMITIAN_TOL * (1.0 + a.max_abs()) {
        let h = HermMatrix::hermitize(a);
        let eig = herm_eig(&h)?;
        check_spectrum_off_cut(&eig.values, h.op_norm())?;
        let v = &eig.vectors;
        let fv: Vec<C> = eig.values.iter().map(|&z| f.eval(z)).collect();
        let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * fv[j]);
        return Ok(&vf * &v.adjoint());
    }
    let eig = gen_eig(a)?;
    check_spectrum_off_cut(&eig.values, a.op_norm())?;
    let v = &eig.vectors;
    let vinv = inverse(v)?;
    let fv: Vec<C> = eig.values.iter().map(|&z| f.eval(z)).collect();
    let vf = CMatrix::from_fn(n, |i, j| v.entry(i, j) * fv[j]);
    Ok(&vf * &vinv)
}

/// Eigenvalue locations only (no conditioning gate); used to place contours.
fn eigenvalues_only(a: &CMatrix) -> Result<Vec<C>> {
    let evd = a.mat().eigen().map_err(|_| Error::SolverFailure)?;
    Ok((0..a.dim()).map(|i| evd.S()[i]).collect())
}

/// Circle parameters per the default placement rule, when admissible:
/// centered at the spectral mean, radius 1.5x the spread, recentered right
/// until the clearance from the cut reaches a tenth of the radius.
fn admissible_circle(values: &[C]) -> Option<(C, f64)> {
    let n = values.len() as f64;
    let mut c = values.iter().sum::<C>() / n;
    for _ in 0..10 {
        let spread = values
            .iter()
            .fold(0.0f64, |acc, &z| acc.max((z - c).norm()));
        let rho = (1.5 * spread).max(1e-3 * (1.0 + c.norm()));
        let d = cut_distance(c);
        if d - rho >= 0.1 * rho {
            return Some((c, rho));
        }
        c.re += (1.1 * rho - d) + 0.1 * rho;
    }
    None
}

fn resolvent(a: &CMatrix, z: C) -> Result<CMatrix> {
    let n = a.dim();
    let m = CMatrix::from_fn(n, |i, j| {
        let e = if i == j { z } else { C::new(0.0, 0.0) };
        e - a.entry(i, j)
    });
    inverse(&m)
}

/// Trapezoidal resolvent quadrature over a circle.
fn contour_circle(f: &FunctionSpec, a: &CMatrix, c: C, rho: f64, nodes: usize) -> Result<CMatrix> {
    let n = a.dim();
    let mut acc = CMatrix::zeros(n);
    for k in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (nodes as f64);
        let e = C::new(0.0, theta).exp();
        let z = c + e * rho;
        let r = resolvent(a, z)?;
        acc = &acc + &r.scale(f.eval(z) * e);
    }
    Ok(acc.scale(C::new(rho / nodes as f64, 0.0)))
}

/// Gauss-Legendre resolvent quadrature over a rectangle in the log plane
/// (`w = log z`), which encloses any spectrum off the cut with O(1)
/// clearance regardless of how widely the moduli spread.
fn contour_log_rect(f: &FunctionSpec, a: &CMatrix, values: &[C], nodes: usize) -> Result<CMatrix> {
    let logs: Vec<C> = values.iter().map(|z| z.ln()).collect();
    let re_lo = logs.iter().map(|w| w.re).fold(f64::INFINITY, f64::min) - 0.7;
    let re_hi = logs.iter().map(|w| w.re).fold(f64::NEG_INFINITY, f64::max) + 0.7;
    let arg_max = logs.iter().fold(0.0f64, |acc, w| acc.max(w.im.abs()));
    let y = (arg_max + 0.7).min(0.92 * std::f64::consts::PI);
    if arg_max > y - 0.3 {
        return Err(Error::ContourHitsCut);
    }

    let corners = [
        C::new(re_lo, -y),
        C::new(re_hi, -y),
        C::new(re_hi, y),
        C::new(re_lo, y),
    ];
    let per_side = (nodes / 4).max(8);
    let rule = gauss_legendre_01(per_side);
    let n = a.dim();
    let mut acc = CMatrix::zeros(n);
    for side in 0..4 {
        let w0 = corners[side];
        let w1 = corners[(side + 1) % 4];
        let dw = w1 - w0;
        for (&u, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let w = w0 + dw * u;
            let z = w.exp();
            let r = resolvent(a, z)?;
            acc = &acc + &r.scale(f.eval(z) * z * dw * wt);
        }
    }
    // divide by 2 pi i
    Ok(acc.scale(C::new(0.0, -1.0 / (2.0 * std::f64::consts::PI))))
}

fn contour_once(f: &FunctionSpec, a: &CMatrix, values: &[C], nodes: usize) -> Result<CMatrix> {
    match admissible_circle(values) {
        Some((c, rho)) => contour_circle(f, a, c, rho, nodes),
        None => contour_log_rect(f, a, values, nodes),
    }
}

/// `f(A)` by Cauchy-integral quadrature, with a node-doubling convergence
/// check (up to two extra doublings before giving up).
pub fn apply_fn_contour(f: &FunctionSpec, a: &CMatrix, nodes: usize) -> Result<CMatrix> {
    let values = eigenvalues_only(a)?;
    check_spectrum_off_cut(&values, a.op_norm())?;
    let mut n_nodes = nodes.max(32);
    let mut prev = contour_once(f, a, &values, n_nodes)?;
    let mut delta = f64::INFINITY;
    for _ in 0..3 {
        let next = contour_once(f, a, &values, 2 * n_nodes)?;
        delta = next.entrywise_dist(&prev) / next.max_abs().max(1.0);
        if delta <= tol::CONTOUR_TOL {
            return Ok(next);
        }
        prev = next;
        n_nodes *= 2;
    }
    Err(Error::QuadratureNotConverged { delta })
}

/// `A^{1/2}` with spectrum in the right half-plane: diagonalization when
/// possible, contour route for defective bases.
pub fn sqrt_accretive(a: &CMatrix) -> Result<CMatrix> {
    let f = FunctionSpec::power(0.5).expect("1/2 is a valid exponent");
    match apply_fn(&f, a) {
        Ok(v) => Ok(v),
        Err(Error::DefectiveMatrix { .. }) => apply_fn_contour(&f, a, 256),
        Err(e) => Err(e),
    }
}

/// `A^r` through the integral representation of the power function:
/// `x^r = sin(r pi)/pi * int_0^inf lambda^{r-1} x (lambda + x)^{-1} dlambda`,
/// with `lambda = u/(1-u)` mapped onto `(0, 1)` and the resulting kernel
/// weight `u^{r-1} (1-u)^{-r}` absorbed into a Gaussian rule.
pub fn power_integral_oracle(r: f64, a: &SectorMatrix, nodes: usize) -> Result<CMatrix> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParam(format!(
            "power integral needs r in (0, 1), got {r}"
        )));
    }
    let n = a.dim();
    let rule = gauss_power_kernel(nodes.max(2), r);
    let mut acc = CMatrix::zeros(n);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        // A (u I + (1-u) A)^{-1}
        let m = CMatrix::from_fn(n, |i, j| {
            let e = if i == j {
                C::new(u, 0.0)
            } else {
                C::new(0.0, 0.0)
            };
            e + a.base().entry(i, j) * (1.0 - u)
        });
        let minv = inverse(&m)?;
        acc = &acc + &(a.base() * &minv).scale(C::new(w, 0.0));
    }
    let front = (std::f64::consts::PI * r).sin() / std::f64::consts::PI;
    Ok(acc.scale(C::new(front, 0.0)))
}

/// Scalar weighted logarithmic mean `l_t(x)` for `x > 0`, `t` in `(0, 1)`.
pub fn logmean_scalar(t: f64, x: f64) -> f64 {
    assert!(x > 0.0, "logmean argument must be positive");
    assert!(t > 0.0 && t < 1.0, "logmean weight must lie in (0, 1)");
    ell_eval(t, C::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_hermitian, rng_from};
    use crate::sector::random_sector;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn power_half_of_scalar_matrix() {
        let f = FunctionSpec::power(0.5).unwrap();
        let a = CMatrix::identity(3).scale_re(4.0);
        let r = apply_fn(&f, &a).unwrap();
        assert!(r.entrywise_dist(&CMatrix::identity(3).scale_re(2.0)) < 1e-12);
    }

    #[test]
    fn affine_is_exact() {
        let f = FunctionSpec::affine(0.3).unwrap();
        let a = random_sector(4, 0.9, 1.0, 5).into_base();
        let direct = &CMatrix::identity(4).scale_re(0.7) + &a.scale_re(0.3);
        let routed = apply_fn(&f, &a).unwrap();
        assert!(routed.entrywise_dist(&direct) < 1e-10);
        let contoured = apply_fn_contour(&f, &a, 256).unwrap();
        assert!(contoured.entrywise_dist(&direct) < 1e-8);
    }

    #[test]
    fn contour_reproduces_identity_map() {
        let f = FunctionSpec::raw_power(1.0).unwrap();
        for k in 0..10 {
            let a = random_sector(4, 1.0, 1.0, 40 + k).into_base();
            let r = apply_fn_contour(&f, &a, 256).unwrap();
            assert!(r.entrywise_dist(&a) <= 1e-10 * (1.0 + a.max_abs()), "k={k}");
        }
    }

    #[test]
    fn triangular_example_diag_vs_contour() {
        let a =
            CMatrix::from_rows(2, &[c(2.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(2.1, 0.0)]).unwrap();
        let f = FunctionSpec::power(0.5).unwrap();
        let d = apply_fn(&f, &a).unwrap();
        let q = apply_fn_contour(&f, &a, 256).unwrap();
        assert!(d.entrywise_dist(&q) < 1e-8);
    }

    #[test]
    fn routes_agree_on_random_sectorial() {
        for k in 0..20 {
            let a = random_sector(4, 1.0, 1.0, 700 + k);
            let f = FunctionSpec::power(0.5).unwrap();
            let d = apply_fn(&f, a.base()).unwrap();
            let q = apply_fn_contour(&f, a.base(), 256).unwrap();
            let o = power_integral_oracle(0.5, &a, 200).unwrap();
            let scale = d.max_abs().max(1.0);
            assert!(d.entrywise_dist(&q) <= 1e-7 * scale, "contour k={k}");
            assert!(d.entrywise_dist(&o) <= 1e-6 * scale, "kernel k={k}");
        }
    }

    #[test]
    fn power_oracle_scalar_cases() {
        // identity is a fixed point for every exponent
        let id = SectorMatrix::certify(CMatrix::identity(3)).unwrap();
        for r in [0.1, 0.5, 0.9] {
            let p = power_integral_oracle(r, &id, 64).unwrap();
            assert!(p.entrywise_dist(&CMatrix::identity(3)) < 1e-10, "r={r}");
        }

        let i4 = random_sector(3, 0.0, 1.0, 2);
        for r in [0.25, 0.5, 0.75] {
            let p = power_integral_oracle(r, &i4, 200).unwrap();
            let direct = apply_fn(&FunctionSpec::power(r).unwrap(), i4.base()).unwrap();
            assert!(p.entrywise_dist(&direct) < 1e-8);
        }
        // 4I at r = 1/2 -> 2I
        let a = SectorMatrix::certify(CMatrix::identity(2).scale_re(4.0)).unwrap();
        let p = power_integral_oracle(0.5, &a, 200).unwrap();
        assert!(p.entrywise_dist(&CMatrix::identity(2).scale_re(2.0)) < 1e-6);
    }

    #[test]
    fn spectrum_on_cut_is_refused() {
        let f = FunctionSpec::power(0.5).unwrap();
        let a = CMatrix::diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(apply_fn(&f, &a), Err(Error::SpectrumOnCut { .. })));
        assert!(matches!(
            apply_fn_contour(&f, &a, 128),
            Err(Error::SpectrumOnCut { .. })
        ));
    }

    #[test]
    fn dual_identities() {
        let grid: Vec<f64> = (1..40).map(|k| 0.1 * k as f64).collect();
        // geometric family is self-dual
        let sharp = FunctionSpec::power(0.5).unwrap();
        let dual = fn_dual(&sharp);
        for &x in &grid {
            assert!((dual.eval_real(x) - sharp.eval_real(x)).abs() < 1e-12);
        }
        // dual of the affine weight t is the harmonic weight 1 - t
        let t = 0.3;
        let dual_affine = fn_dual(&FunctionSpec::affine(t).unwrap());
        let harm = FunctionSpec::harm(1.0 - t).unwrap();
        for &x in &grid {
            assert!((dual_affine.eval_real(x) - harm.eval_real(x)).abs() < 1e-12);
        }
        assert!((dual_affine.deriv_at_1() - (1.0 - t)).abs() < 1e-15);
        // involution
        for f in builtin_registry() {
            let ff = fn_dual(&fn_dual(&f));
            for &x in &grid {
                assert!(
                    (ff.eval_real(x) - f.eval_real(x)).abs() < 1e-11,
                    "{} at {x}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn logmean_scalar_properties() {
        for t in [0.1, 0.25, 0.5, 0.9] {
            assert!((logmean_scalar(t, 1.0) - 1.0).abs() < 1e-14);
            // forward difference derivative at 1 equals t
            let h = 1e-7;
            let fd = (logmean_scalar(t, 1.0 + h) - logmean_scalar(t, 1.0 - h)) / (2.0 * h);
            assert!((fd - t).abs() < 1e-6, "t={t}: {fd}");
        }
        // l_{1/2}(x) = x l_{1/2}(1/x): the classical logarithmic mean
        for &x in &[0.3, 0.9, 2.0, 7.7] {
            let lhs = logmean_scalar(0.5, x);
            let rhs = x * logmean_scalar(0.5, 1.0 / x);
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn logmean_patch_is_seamless() {
        // inside the patch radius the Taylor value must match the raw
        // formula evaluated at the same point (the raw formula is still
        // good to ~1e-12 relative there)
        let raw = |t: f64, z: C| -> C {
            let w = z.ln();
            let zt1 = cexpm1(w * t);
            let z1 = cexpm1(w);
            (zt1 * ((1.0 - t) / t) + (z1 - zt1) * (t / (1.0 - t))) / w
        };
        for t in [0.2, 0.5, 0.8] {
            for &eps in &[0.9e-4, -0.9e-4, 0.5e-4] {
                for &im in &[0.0, 0.3e-4] {
                    let z = c(1.0 + eps, im);
                    let a = ell_eval(t, z); // takes the Taylor branch
                    let b = raw(t, z);
                    assert!((a - b).norm() < 1e-10, "t={t} z={z}");
                }
            }
        }
    }

    #[test]
    fn tsallis_tends_to_log() {
        let grid: Vec<f64> = (1..30).map(|k| 0.25 * k as f64).collect();
        let logf = FunctionSpec::log_shift();
        for (t, tol_at_t) in [(1e-6, 1e-5), (1e-8, 1e-7)] {
            let f = FunctionSpec::tsallis(t).unwrap();
            for &x in &grid {
                assert!(
                    (f.eval_real(x) - logf.eval_real(x)).abs() < tol_at_t,
                    "t={t} x={x}"
                );
            }
        }
    }

    #[test]
    fn registry_functions_are_positive_and_normalized() {
        let grid: Vec<f64> = (1..60).map(|k| 0.05 * k as f64 * k as f64).collect();
        for f in builtin_registry() {
            assert!(f.normalized());
            assert!((f.eval_real(1.0) - 1.0).abs() <= 1e-12, "{}", f.name());
            let shifted = f.name().starts_with("tsallis") || f.name() == "log";
            for &x in &grid {
                if shifted {
                    // positive only above a threshold: (1-t)^{1/t} for the
                    // deformed log, 1/e for the shifted log
                    if x >= 1.0 {
                        assert!(f.eval_real(x) > 0.0, "{} at {x}", f.name());
                    }
                } else {
                    assert!(f.eval_real(x) > 0.0, "{} at {x}", f.name());
                }
            }
        }
        // the shifted representatives do dip negative near zero, which is
        // exactly why they sit outside the positive operator-monotone class
        let ts = FunctionSpec::tsallis(0.3).unwrap();
        let threshold = (1.0f64 - 0.3).powf(1.0 / 0.3);
        assert!(ts.eval_real(0.9 * threshold) < 0.0);
        assert!(ts.eval_real(1.1 * threshold) > 0.0);
        let lg = FunctionSpec::log_shift();
        assert!(lg.eval_real(0.9 / std::f64::consts::E) < 0.0);
        assert!(lg.eval_real(1.1 / std::f64::consts::E) > 0.0);
    }

    #[test]
    fn monotonicity_spot_check() {
        // 0 < H <= K implies f(H) <= f(K) for the registry family
        let mut rng = rng_from(31, &[0]);
        let fns = builtin_registry();
        for trial in 0..200 {
            let n = 2 + trial % 3;
            let g = crate::rng::complex_gaussian_matrix(&mut rng, n);
            let h = HermMatrix::hermitize(&(&g.adjoint() * &g))
                .add(&HermMatrix::identity(n).scale_re(0.05));
            let gap = crate::rng::complex_gaussian_matrix(&mut rng, n);
            let k = h.add(&HermMatrix::hermitize(&(&gap.adjoint() * &gap)));
            let f = &fns[trial % fns.len()];
            let fh = crate::decomp::herm_apply(&h, |x| f.eval_real(x)).unwrap();
            let fk = crate::decomp::herm_apply(&k, |x| f.eval_real(x)).unwrap();
            let v = fh.loewner_leq(&fk).unwrap();
            assert!(v.holds, "{} trial {trial}: margin {}", f.name(), v.margin);
        }
    }

    #[test]
    fn concavity_spot_check() {
        // f(l H + (1-l) K) >= l f(H) + (1-l) f(K)
        let mut rng = rng_from(37, &[0]);
        let fns = builtin_registry();
        for trial in 0..120 {
            let n = 2 + trial % 3;
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let g = crate::rng::complex_gaussian_matrix(rng, n);
                HermMatrix::hermitize(&(&g.adjoint() * &g))
                    .add(&HermMatrix::identity(n).scale_re(0.05))
            };
            let h = mk(&mut rng);
            let k = mk(&mut rng);
            let lam = [0.25, 0.5, 0.75][trial % 3];
            let f = &fns[trial % fns.len()];
            let mixed = h.scale_re(lam).add(&k.scale_re(1.0 - lam));
            let lhs = crate::decomp::herm_apply(&mixed, |x| f.eval_real(x)).unwrap();
            let fh = crate::decomp::herm_apply(&h, |x| f.eval_real(x)).unwrap();
            let fk = crate::decomp::herm_apply(&k, |x| f.eval_real(x)).unwrap();
            let rhs = fh.scale_re(lam).add(&fk.scale_re(1.0 - lam));
            let v = rhs.loewner_leq(&lhs).unwrap();
            assert!(v.holds, "{} trial {trial}: margin {}", f.name(), v.margin);
        }
    }

    #[test]
    fn real_part_bounds_smoke() {
        // Re f(A) >= f(Re A) holds for all builtins (shifts cancel in the
        // lower bound); the sec^2 upper bound needs f positive, so the
        // deformed-log representative is checked on the lower side only.
        for k in 0..60 {
            let alpha: f64 = [0.0, 0.5, 1.0][k as usize % 3];
            let a = random_sector(3, alpha, 1.0, 800 + k);
            let sec2 = 1.0 / (alpha.cos() * alpha.cos());
            for f in [
                FunctionSpec::power(0.5).unwrap(),
                FunctionSpec::tsallis(0.5).unwrap(),
                FunctionSpec::log_shift(),
            ] {
                let fa = apply_fn(&f, a.base()).unwrap().re_part();
                let fra = crate::decomp::herm_apply(&a.re_part(), |x| f.eval_real(x)).unwrap();
                assert!(
                    fra.loewner_leq(&fa).unwrap().holds,
                    "{} lower k={k}",
                    f.name()
                );
            }
            for f in [
                FunctionSpec::power(0.5).unwrap(),
                FunctionSpec::harm(0.3).unwrap(),
                FunctionSpec::logmean(0.5).unwrap(),
            ] {
                let fa = apply_fn(&f, a.base()).unwrap().re_part();
                let fra = crate::decomp::herm_apply(&a.re_part(), |x| f.eval_real(x)).unwrap();
                assert!(
                    fa.loewner_leq(&fra.scale_re(sec2)).unwrap().holds,
                    "{} upper k={k}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn parse_round_trips() {
        for s in [
            "power:0.5",
            "affine:0.3",
            "harm:0.3",
            "tsallis:0.5",
            "log",
            "logmean:0.25",
        ] {
            let f = FunctionSpec::parse(s).unwrap();
            assert!((f.eval_real(1.0) - 1.0).abs() < 1e-12, "{s}");
        }
        assert!(FunctionSpec::parse("power:1.5").is_err());
        assert!(FunctionSpec::parse("nope").is_err());
        assert!(FunctionSpec::parse("tsallis").is_err());
    }

    #[test]
    fn hermitian_route_matches_general_route() {
        let mut rng = rng_from(91, &[0]);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, 4);
            let pd = HermMatrix::hermitize(&(&h.base().adjoint() * h.base()))
                .add(&HermMatrix::identity(4).scale_re(0.1));
            let f = FunctionSpec::power(0.5).unwrap();
            let via_matrix = apply_fn(&f, pd.base()).unwrap();
            let via_herm = crate::decomp::herm_apply(&pd, |x| x.sqrt()).unwrap();
            assert!(via_matrix.entrywise_dist(via_herm.base()) < 1e-10);
        }
    }
}
