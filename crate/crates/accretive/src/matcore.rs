//! Dense complex matrix carrier, Hermitian certification and the Löwner order.
//!
//! Everything downstream (sector angles, matrix functions, means, block
//! witnesses) speaks in terms of these three types: [`CMatrix`] for general
//! square complex matrices, [`HermMatrix`] for Hermitian-certified ones, and
//! [`LoewnerVerdict`] for the outcome of an order comparison `A <= B`.

use faer::c64;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C = c64;

/// Shared numerical tolerances. The underlying theorems are exact; floating
/// point demands a declared slack, fixed here once for the whole crate.
pub mod tol {
    /// Relative slack for Löwner comparisons, `margin >= -ORDER_TOL * scale`.
    pub const ORDER_TOL: f64 = 1e-8;
    /// Hermiticity certification: `max|H - H*| <= HERMITIAN_TOL * (1 + max|entry|)`.
    pub const HERMITIAN_TOL: f64 = 1e-10;
    /// Sector angle certification slack (radians).
    pub const ANGLE_TOL: f64 = 1e-9;
    /// Relative singular-value floor for polar/inverse.
    pub const SING_TOL: f64 = 1e-12;
    /// Eigenvector condition number beyond which diagonalization is refused.
    pub const DEFECTIVE_CAP: f64 = 1e8;
    /// Relative distance of a spectrum to the cut (-inf, 0] below which
    /// functional calculus is refused.
    pub const SPEC_TOL: f64 = 1e-10;
    /// Relative node-doubling residual accepted by contour quadrature.
    pub const CONTOUR_TOL: f64 = 1e-7;
    /// Eigendecomposition residual allowance, relative to `|A| * cond(V)`.
    pub const EIG_TOL: f64 = 1e-9;
}

/// Dense `n x n` complex matrix. Immutable after construction; all entries
/// are finite by invariant.
#[derive(Clone, Debug)]
pub struct CMatrix {
    m: Mat<C>,
}

/// Row-major interchange format: `{"n": n, "data": [[re, im], ...]}` with
/// `data.len() == n*n`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    data: Vec<[f64; 2]>,
}

impl CMatrix {
    /// Wraps a faer matrix, checking squareness and finiteness.
    pub fn new(m: Mat<C>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NonSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self { m })
    }

    /// Builds from a row-major slice of `n*n` entries.
    pub fn from_rows(n: usize, entries: &[C]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimMismatch {
                left: n * n,
                right: entries.len(),
            });
        }
        Self::new(Mat::from_fn(n, n, |i, j| entries[i * n + j]))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C) -> Self {
        Self {
            m: Mat::from_fn(n, n, f),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: Mat::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: Mat::identity(n, n),
        }
    }

    pub fn diag(entries: &[C]) -> Self {
        let n = entries.len();
        Self::from_fn(n, |i, j| if i == j { entries[i] } else { C::new(0.0, 0.0) })
    }

    /// 1x1 matrix, handy for scalar sanity checks.
    pub fn scalar(z: C) -> Self {
        Self::from_fn(1, |_, _| z)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C {
        self.m[(i, j)]
    }

    pub fn mat(&self) -> &Mat<C> {
        &self.m
    }

    pub fn adjoint(&self) -> CMatrix {
        Self {
            m: self.m.adjoint().to_owned(),
        }
    }

    pub fn scale(&self, z: C) -> CMatrix {
        Self {
            m: faer::Scale(z) * &self.m,
        }
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        self.scale(C::new(s, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.norm_max()
    }

    pub fn fro_norm(&self) -> f64 {
        self.m.norm_l2()
    }

    /// Operator (spectral) norm, the largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        match self.m.svd() {
            Ok(svd) => svd.S()[0].re,
            // SVD failure is effectively unreachable for finite input; fall
            // back to the Frobenius bound rather than poisoning callers.
            Err(_) => self.fro_norm(),
        }
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> Result<f64> {
        let evd = self.m.eigen().map_err(|_| Error::SolverFailure)?;
        let s = evd.S();
        let mut r = 0.0f64;
        for i in 0..self.dim() {
            r = r.max(s[i].norm());
        }
        Ok(r)
    }

    /// Hermitian part `(X + X*) / 2`.
    pub fn re_part(&self) -> HermMatrix {
        HermMatrix::hermitize(self)
    }

    /// Skew part divided by `i`: `(X - X*) / (2i)`, Hermitian by construction.
    pub fn im_part(&self) -> HermMatrix {
        let n = self.dim();
        let half_i = C::new(0.0, -0.5);
        let m = Mat::from_fn(n, n, |i, j| {
            half_i * (self.m[(i, j)] - self.m[(j, i)].conj())
        });
        HermMatrix {
            base: CMatrix { m },
            defect: 0.0,
        }
    }

    /// Max-modulus entrywise distance to the other matrix.
    pub fn entrywise_dist(&self, other: &CMatrix) -> f64 {
        (self - other).max_abs()
    }

    /// Serializes to the row-major interchange JSON.
    pub fn to_json(&self) -> String {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        serde_json::to_string(&MatrixJson { n, data }).expect("matrix json")
    }

    /// Parses the row-major interchange JSON. Unknown keys are ignored, so
    /// result files carrying route/residual metadata round-trip as inputs.
    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: serde_json::Value = serde_json::from_str(s)?;
        let n = parsed
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::InvalidParam("matrix json: missing \"n\"".into()))?
            as usize;
        let data = parsed
            .get("data")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::InvalidParam("matrix json: missing \"data\"".into()))?;
        if data.len() != n * n {
            return Err(Error::DimMismatch {
                left: n * n,
                right: data.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for v in data {
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::InvalidParam("matrix json: entry is not [re, im]".into()))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::InvalidParam("matrix json: non-numeric entry".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::InvalidParam("matrix json: non-numeric entry".into()))?;
            entries.push(C::new(re, im));
        }
        Self::from_rows(n, &entries)
    }
}

impl std::ops::Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix dimension mismatch");
        CMatrix {
            m: &self.m + &rhs.m,
        }
    }
}

impl std::ops::Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix dimension mismatch");
        CMatrix {
            m: &self.m - &rhs.m,
        }
    }
}

impl std::ops::Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix dimension mismatch");
        CMatrix {
            m: &self.m * &rhs.m,
        }
    }
}

/// Hermitian-certified matrix. Carries the certification defect
/// `max |(H - H*)_{ij}|` observed at construction.
#[derive(Clone, Debug)]
pub struct HermMatrix {
    base: CMatrix,
    defect: f64,
}

impl HermMatrix {
    /// Certifies an existing matrix as Hermitian within
    /// `HERMITIAN_TOL * (1 + max|entry|)`.
    pub fn certify(x: CMatrix) -> Result<Self> {
        let defect = (&x - &x.adjoint()).max_abs();
        if defect > tol::HERMITIAN_TOL * (1.0 + x.max_abs()) {
            return Err(Error::NotHermitian { defect });
        }
        // Symmetrize anyway so downstream eigensolves see an exactly
        // Hermitian matrix; the observed defect is kept for reporting.
        let mut h = Self::hermitize(&x);
        h.defect = defect;
        Ok(h)
    }

    /// Forces Hermitian structure: `(X + X*) / 2`. Always succeeds; the
    /// defect of the result is zero up to rounding.
    pub fn hermitize(x: &CMatrix) -> Self {
        let n = x.dim();
        let m = Mat::from_fn(n, n, |i, j| {
            let z = (x.m[(i, j)] + x.m[(j, i)].conj()) * 0.5;
            // exact real diagonal keeps eigensolvers honest
            if i == j {
                C::new(z.re, 0.0)
            } else {
                z
            }
        });
        Self {
            base: CMatrix { m },
            defect: 0.0,
        }
    }

    pub fn from_real_diag(entries: &[f64]) -> Self {
        Self {
            base: CMatrix::diag(&entries.iter().map(|&x| C::new(x, 0.0)).collect::<Vec<_>>()),
            defect: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            base: CMatrix::identity(n),
            defect: 0.0,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            base: CMatrix::zeros(n),
            defect: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &CMatrix {
        &self.base
    }

    pub fn into_base(self) -> CMatrix {
        self.base
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.defect
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let evd = self
            .base
            .m
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|_| Error::SolverFailure)?;
        let s = evd.S();
        let mut vals: Vec<f64> = (0..self.dim()).map(|i| s[i].re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(vals)
    }

    pub fn lambda_min(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.first().ok_or(Error::SolverFailure)?)
    }

    /// Operator norm of a Hermitian matrix is its largest eigenvalue modulus.
    pub fn op_norm(&self) -> f64 {
        match self.eigenvalues() {
            Ok(v) => v.iter().fold(0.0f64, |a, &x| a.max(x.abs())),
            Err(_) => self.base.fro_norm(),
        }
    }

    pub fn scale_re(&self, s: f64) -> HermMatrix {
        HermMatrix {
            base: self.base.scale_re(s),
            defect: self.defect * s.abs(),
        }
    }

    pub fn add(&self, rhs: &HermMatrix) -> HermMatrix {
        HermMatrix {
            base: &self.base + &rhs.base,
            defect: self.defect + rhs.defect,
        }
    }

    pub fn sub(&self, rhs: &HermMatrix) -> HermMatrix {
        HermMatrix {
            base: &self.base - &rhs.base,
            defect: self.defect + rhs.defect,
        }
    }

    /// Löwner comparison `self <= rhs`, reporting the margin
    /// `lambda_min(rhs - self)` relative to `scale = max(1, |self|, |rhs|)`.
    pub fn loewner_leq(&self, rhs: &HermMatrix) -> Result<LoewnerVerdict> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        let diff = HermMatrix::hermitize(&(&rhs.base - &self.base));
        let margin = diff.lambda_min()?;
        let scale = 1.0f64.max(self.op_norm()).max(rhs.op_norm());
        Ok(LoewnerVerdict::from_margin(margin, scale))
    }

    /// Margin of `self >= 0`.
    pub fn psd_margin(&self) -> Result<LoewnerVerdict> {
        let margin = self.lambda_min()?;
        let scale = 1.0f64.max(self.op_norm());
        Ok(LoewnerVerdict::from_margin(margin, scale))
    }
}

/// Outcome of a Löwner-order comparison `A <= B`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LoewnerVerdict {
    /// Whether the order holds within tolerance.
    pub holds: bool,
    /// `lambda_min(B - A)`; negative values quantify the violation.
    pub margin: f64,
    /// `max(1, |A|, |B|)`, the normalization for the tolerance.
    pub scale: f64,
}

impl LoewnerVerdict {
    pub fn from_margin(margin: f64, scale: f64) -> Self {
        Self {
            holds: margin >= -tol::ORDER_TOL * scale,
            margin,
            scale,
        }
    }
}
