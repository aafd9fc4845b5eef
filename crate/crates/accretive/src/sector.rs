//! Sectorial-angle computation, certification and random generation.
//!
//! An accretive matrix `A` (one with `Re A` positive definite) has numerical
//! range inside a sector `|Im z| <= tan(alpha) Re z` of the right half-plane.
//! The minimal such half-angle is computed algebraically:
//!
//! `alpha = atan( spectral_radius( (Re A)^{-1/2} (Im A) (Re A)^{-1/2} ) )`
//!
//! which is equivalent to the numerical-range definition because
//! `|<Im A x, x>| <= tan(alpha) <Re A x, x>` for all `x` iff
//! `±(Re A)^{-1/2} (Im A) (Re A)^{-1/2} <= tan(alpha) I`.

use rand::Rng;

use crate::decomp::{herm_eig, herm_inv_sqrt};
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, HermMatrix, C};
use crate::rng::{complex_gaussian_matrix, random_hermitian, rng_from};

/// Accretive matrix bundled with its certified minimal sector half-angle.
#[derive(Clone, Debug)]
pub struct SectorMatrix {
    base: CMatrix,
    angle: f64,
    re_min: f64,
}

impl SectorMatrix {
    /// Certifies an arbitrary matrix, computing its minimal sector angle.
    /// Fails with [`Error::NotAccretive`] when `Re A` is not positive definite.
    pub fn certify(base: CMatrix) -> Result<Self> {
        let re_min = base.re_part().lambda_min()?;
        if re_min <= 0.0 {
            return Err(Error::NotAccretive { re_min });
        }
        let angle = sector_angle(&base)?;
        Ok(Self {
            base,
            angle,
            re_min,
        })
    }

    /// Wraps a matrix whose angle is already known exactly by construction.
    /// Used by the generator, where the scaling rule pins the angle.
    pub(crate) fn with_certified(base: CMatrix, angle: f64, re_min: f64) -> Self {
        Self {
            base,
            angle,
            re_min,
        }
    }

    pub fn base(&self) -> &CMatrix {
        &self.base
    }

    pub fn into_base(self) -> CMatrix {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Certified minimal sector half-angle, in `[0, pi/2)`.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Smallest eigenvalue of `Re A`; positive by invariant.
    pub fn re_min(&self) -> f64 {
        self.re_min
    }

    pub fn sec_alpha(&self) -> f64 {
        1.0 / self.angle.cos()
    }

    pub fn re_part(&self) -> HermMatrix {
        self.base.re_part()
    }
}

/// Minimal sector half-angle of an accretive matrix.
pub fn sector_angle(a: &CMatrix) -> Result<f64> {
    let re = a.re_part();
    let re_min = re.lambda_min()?;
    if re_min <= 0.0 {
        return Err(Error::NotAccretive { re_min });
    }
    let rm = herm_inv_sqrt(&re)?;
    let im = a.im_part();
    let weighted = HermMatrix::hermitize(&(&(rm.base() * im.base()) * rm.base()));
    let eig = herm_eig(&weighted)?;
    let rho = eig.values.iter().fold(0.0f64, |acc, z| acc.max(z.re.abs()));
    Ok(rho.atan())
}

/// Sampling lower bound on the sector angle: the best Rayleigh angle
/// `atan(|Im <Ax,x>| / Re <Ax,x>)` found within a budget of `samples`
/// random unit vectors.
///
/// Half the budget goes to uniform draws. The rest refines the best
/// positive-ratio and negative-ratio candidates separately over random
/// two-dimensional subspaces: each step solves the compressed 2x2 pencil
/// on span{x, probe} exactly, which is plain Rayleigh-Ritz for the signed
/// quotient `<(Im A) x, x> / <(Re A) x, x>` and escapes non-extremal
/// critical points with probability one. The result is always realized at
/// a concrete unit vector, hence never exceeds the true angle.
pub fn angle_oracle(a: &CMatrix, samples: usize) -> Result<f64> {
    let n = a.dim();
    let re = a.re_part();
    let re_min = re.lambda_min()?;
    if re_min <= 0.0 {
        return Err(Error::NotAccretive { re_min });
    }
    if samples == 0 {
        return Ok(0.0);
    }
    let im = a.im_part();
    let r = re.base();
    let s = im.base();

    // deterministic stream; the oracle takes no seed by contract
    let mut rng = rng_from(0x0a17_c1e5, &[n as u64, samples as u64]);

    // signed ratio <Sx,x> / <Rx,x>
    let ratio_of = |x: &[C]| -> f64 {
        let mut rq = 0.0;
        let mut sq = 0.0;
        for (i, xi) in x.iter().enumerate() {
            let mut rrow = C::new(0.0, 0.0);
            let mut srow = C::new(0.0, 0.0);
            for (j, xj) in x.iter().enumerate() {
                rrow += r.entry(i, j) * xj;
                srow += s.entry(i, j) * xj;
            }
            rq += (xi.conj() * rrow).re;
            sq += (xi.conj() * srow).re;
        }
        sq / rq
    };

    let uniform_budget = (samples / 2).max(1);
    let first = crate::rng::random_unit_vector(&mut rng, n);
    let first_ratio = ratio_of(&first);
    let mut pos: (f64, Vec<C>) = (first_ratio, first.clone());
    let mut neg: (f64, Vec<C>) = (first_ratio, first);
    for _ in 1..uniform_budget {
        let x = crate::rng::random_unit_vector(&mut rng, n);
        let rho = ratio_of(&x);
        if rho > pos.0 {
            pos = (rho, x.clone());
        }
        if rho < neg.0 {
            neg = (rho, x);
        }
    }
    if n == 1 {
        // the numerical range of a scalar is a point
        return Ok(pos.0.abs().atan());
    }

    let refine_budget = (samples - uniform_budget) / 2;
    let mut best_abs = pos.0.abs().max(neg.0.abs());
    for (want_max, (rho0, x0)) in [(true, pos), (false, neg)] {
        let mut x = x0;
        let mut current = rho0;
        for _ in 0..refine_budget {
            let mut y: Vec<C> = (0..n)
                .map(|_| crate::rng::complex_normal(&mut rng))
                .collect();
            let xy: C = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
            for i in 0..n {
                y[i] -= xy * x[i];
            }
            let ny = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if ny < 1e-12 {
                continue;
            }
            for z in &mut y {
                *z /= C::new(ny, 0.0);
            }

            let matvec = |m: &CMatrix, v: &[C]| -> Vec<C> {
                (0..n)
                    .map(|i| (0..n).map(|j| m.entry(i, j) * v[j]).sum())
                    .collect()
            };
            let rx = matvec(r, &x);
            let ry = matvec(r, &y);
            let sx = matvec(s, &x);
            let sy = matvec(s, &y);
            let dot = |u: &[C], v: &[C]| -> C { u.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };

            // compressed pencil on span{x, y}
            let r2 = [dot(&x, &rx), dot(&x, &ry), dot(&y, &rx), dot(&y, &ry)];
            let s2 = [dot(&x, &sx), dot(&x, &sy), dot(&y, &sx), dot(&y, &sy)];
            if let Some(v) = pencil2_extreme(&r2, &s2, want_max) {
                let cand: Vec<C> = (0..n).map(|i| v[0] * x[i] + v[1] * y[i]).collect();
                let ncand = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if ncand > 1e-12 {
                    let cand: Vec<C> = cand.iter().map(|z| z / C::new(ncand, 0.0)).collect();
                    let rho = ratio_of(&cand);
                    if (want_max && rho > current) || (!want_max && rho < current) {
                        current = rho;
                        x = cand;
                    }
                }
            }
        }
        best_abs = best_abs.max(current.abs());
    }
    Ok(best_abs.atan())
}

/// Unit vector extremizing the signed quotient `<S v, v> / <R v, v>` on a
/// 2-dimensional compression; closed-form Hermitian 2x2 eigensolves only.
fn pencil2_extreme(r2: &[C; 4], s2: &[C; 4], want_max: bool) -> Option<[C; 2]> {
    // R2^{-1/2} from its eigendecomposition
    let (l1, l2, v1, v2) = herm2_eigen(r2[0].re, r2[1], r2[3].re)?;
    if l1 <= 0.0 || l2 <= 0.0 {
        return None; // compression lost positivity to rounding
    }
    let (a, b) = (1.0 / l1.sqrt(), 1.0 / l2.sqrt());
    // R^{-1/2} = a v1 v1* + b v2 v2*
    let rm = [
        C::new(a, 0.0) * v1[0] * v1[0].conj() + C::new(b, 0.0) * v2[0] * v2[0].conj(),
        C::new(a, 0.0) * v1[0] * v1[1].conj() + C::new(b, 0.0) * v2[0] * v2[1].conj(),
        C::new(a, 0.0) * v1[1] * v1[0].conj() + C::new(b, 0.0) * v2[1] * v2[0].conj(),
        C::new(a, 0.0) * v1[1] * v1[1].conj() + C::new(b, 0.0) * v2[1] * v2[1].conj(),
    ];
    // M = R^{-1/2} S R^{-1/2}
    let t = mul2(&rm, s2);
    let m = mul2(&t, &rm);
    let (m1, m2, w1, w2) = herm2_eigen(m[0].re, m[1], m[3].re)?;
    debug_assert!(m1 <= m2);
    let (_, _) = (m1, m2);
    let w = if want_max { w2 } else { w1 };
    // map back through R^{-1/2}
    let v = [rm[0] * w[0] + rm[1] * w[1], rm[2] * w[0] + rm[3] * w[1]];
    Some(v)
}

fn mul2(a: &[C; 4], b: &[C; 4]) -> [C; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Eigenpairs of the Hermitian 2x2 matrix [[p, q], [conj(q), s]].
fn herm2_eigen(p: f64, q: C, s: f64) -> Option<(f64, f64, [C; 2], [C; 2])> {
    let mid = 0.5 * (p + s);
    let rad = (0.25 * (p - s) * (p - s) + q.norm_sqr()).sqrt();
    if !rad.is_finite() || !mid.is_finite() {
        return None;
    }
    let (l1, l2) = (mid - rad, mid + rad);
    let vec_for = |l: f64| -> [C; 2] {
        // choose the numerically larger construction
        let c1 = [q, C::new(l - p, 0.0)];
        let c2 = [C::new(l - s, 0.0), q.conj()];
        let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
        let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
        let (v, nn) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
        if nn < 1e-300 {
            return [C::new(1.0, 0.0), C::new(0.0, 0.0)];
        }
        let inv = 1.0 / nn.sqrt();
        [v[0] * C::new(inv, 0.0), v[1] * C::new(inv, 0.0)]
    };
    Some((l1, l2, vec_for(l1), vec_for(l2)))
}

/// Membership in the closed sector of half-angle `alpha`: accretive and
/// `tan(alpha) Re A ± Im A >= 0` within the order tolerance.
pub fn in_sector(a: &CMatrix, alpha: f64) -> bool {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return false;
    }
    let re = a.re_part();
    let Ok(re_min) = re.lambda_min() else {
        return false;
    };
    if re_min <= 0.0 {
        return false;
    }
    let im = a.im_part();
    let t = alpha.tan();
    let plus = re.scale_re(t).add(&im);
    let minus = re.scale_re(t).sub(&im);
    let ok = |h: &HermMatrix| h.psd_margin().map(|v| v.holds).unwrap_or(false);
    ok(&plus) && ok(&minus)
}

/// Deterministic random sectorial matrix with certified angle
/// `atan(fill * tan(alpha))`.
///
/// The Hermitian part is `G* G + delta I` (delta = 1e-3 of its norm, bounding
/// the condition number), rescaled to unit operator norm; the skew part is a
/// random Hermitian matrix scaled so the weighted spectral radius hits the
/// target exactly.
pub fn random_sector(n: usize, alpha: f64, fill: f64, seed: u64) -> SectorMatrix {
    assert!(n >= 1, "dimension must be positive");
    assert!(
        (0.0..std::f64::consts::FRAC_PI_2).contains(&alpha),
        "alpha must lie in [0, pi/2)"
    );
    assert!(fill > 0.0 && fill <= 1.0, "fill must lie in (0, 1]");
    let mut rng = rng_from(seed, &[n as u64, alpha.to_bits(), fill.to_bits()]);

    let g = complex_gaussian_matrix(&mut rng, n);
    let gtg = HermMatrix::hermitize(&(&g.adjoint() * &g));
    let delta = 1e-3 * gtg.op_norm().max(1e-300);
    let r0 = gtg.add(&HermMatrix::identity(n).scale_re(delta));
    let r = r0.scale_re(1.0 / r0.op_norm());
    let re_min = r.lambda_min().expect("eigensolver on PD matrix");

    let target = fill * alpha.tan();
    if target == 0.0 {
        return SectorMatrix::with_certified(r.base().clone(), 0.0, re_min);
    }

    let rm = herm_inv_sqrt(&r).expect("PD by construction");
    let s = loop {
        let s0 = random_hermitian(&mut rng, n);
        let weighted = HermMatrix::hermitize(&(&(rm.base() * s0.base()) * rm.base()));
        let rho0 = weighted
            .eigenvalues()
            .expect("eigensolver")
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()));
        if rho0 > 1e-12 {
            break s0.scale_re(target / rho0);
        }
    };
    let base = r.base() + &s.base().scale(C::new(0.0, 1.0));
    SectorMatrix::with_certified(base, target.atan(), re_min)
}

/// Sum of two sectorial matrices, re-certified. The sum lemma guarantees the
/// angle does not exceed the larger input angle.
pub fn sum_in_sector(a: &SectorMatrix, b: &SectorMatrix) -> Result<SectorMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    SectorMatrix::certify(a.base() + b.base())
}

/// Fill factor used by generators that want a mix of boundary-tight and
/// interior samples.
pub fn draw_fill<R: Rng>(rng: &mut R) -> f64 {
    if rng.random::<f64>() < 0.5 {
        1.0
    } else {
        0.2 + 0.8 * rng.random::<f64>()
    }
}
