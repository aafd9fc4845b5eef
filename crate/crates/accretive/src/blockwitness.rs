//! 2x2 block positivity machinery: PSD block tests, contraction and unitary
//! witness extraction, and the constructive objects behind the absolute-value
//! and norm bounds for sectorial matrices.

use crate::decomp::{gen_eig, herm_inv_sqrt, polar, sqrt_psd};
use crate::error::{Error, Result};
use crate::matcore::{tol, CMatrix, HermMatrix, LoewnerVerdict, C};
use crate::rng::{random_unit_vector, rng_from};
use crate::sector::SectorMatrix;
use crate::verify::{CheckReport, TheoremId};

/// 2x2 operator block `[[a, x], [x*, b]]` with Hermitian diagonal; the PSD
/// verdict of the assembled matrix is cached at construction.
#[derive(Clone, Debug)]
pub struct BlockPsd {
    a: HermMatrix,
    b: HermMatrix,
    x: CMatrix,
    verdict: LoewnerVerdict,
}

/// Contraction/unitary pair witnessing block positivity:
/// `x = a^{1/2} K b^{1/2}` with `|K| <= 1`, and the unitary SVD factor of `K`.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub contraction: CMatrix,
    pub unitary: CMatrix,
}

impl BlockPsd {
    pub fn new(a: HermMatrix, b: HermMatrix, x: CMatrix) -> Result<Self> {
        if a.dim() != b.dim() || a.dim() != x.dim() {
            return Err(Error::DimMismatch {
                left: a.dim(),
                right: x.dim(),
            });
        }
        let assembled = assemble(&a, &b, &x);
        let verdict = assembled.psd_margin()?;
        Ok(Self { a, b, x, verdict })
    }

    pub fn a(&self) -> &HermMatrix {
        &self.a
    }

    pub fn b(&self) -> &HermMatrix {
        &self.b
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    /// The assembled `2n x 2n` Hermitian matrix.
    pub fn assembled(&self) -> HermMatrix {
        assemble(&self.a, &self.b, &self.x)
    }
}

fn assemble(a: &HermMatrix, b: &HermMatrix, x: &CMatrix) -> HermMatrix {
    let n = a.dim();
    let big = CMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a.base().entry(i, j),
        (true, false) => x.entry(i, j - n),
        (false, true) => x.entry(j, i - n).conj(),
        (false, false) => b.base().entry(i - n, j - n),
    });
    HermMatrix::hermitize(&big)
}

/// Eigenvalue test on the assembled block.
pub fn block_is_psd(blk: &BlockPsd) -> LoewnerVerdict {
    blk.verdict
}

/// Extracts the contraction `K = a^{-1/2} x b^{-1/2}` witnessing positivity
/// of a PSD block with positive definite diagonal, plus the unitary factor
/// from K's singular value decomposition (defined even when K is singular,
/// e.g. `x = 0`).
pub fn extract_contraction(blk: &BlockPsd) -> Result<WitnessPair> {
    if !blk.verdict.holds {
        return Err(Error::NotPsd {
            lambda_min: blk.verdict.margin,
        });
    }
    let ai = herm_inv_sqrt(&blk.a)?;
    let bi = herm_inv_sqrt(&blk.b)?;
    let k = &(ai.base() * &blk.x) * bi.base();
    let svd = k.mat().svd().map_err(|_| Error::SolverFailure)?;
    let n = k.dim();
    let u = svd.U();
    let v = svd.V();
    let unitary = CMatrix::from_fn(n, |i, j| {
        let mut acc = C::new(0.0, 0.0);
        for l in 0..n {
            acc += u[(i, l)] * v[(j, l)].conj();
        }
        acc
    });
    Ok(WitnessPair {
        contraction: k,
        unitary,
    })
}

/// The canonical PSD block of a sectorial matrix:
/// `[[sec(a) Re T, T], [T*, sec(a) Re T]]`. Positivity is recorded in the
/// cached verdict rather than raised, so margin reports survive.
pub fn sector_block(t: &SectorMatrix) -> Result<BlockPsd> {
    let d = t.re_part().scale_re(t.sec_alpha());
    BlockPsd::new(d.clone(), d, t.base().clone())
}

/// Constructive unitary for the absolute-value bound
/// `|T| <= sec(a) |(Re T)^{1/2} U (Re T)^{1/2}|`: with
/// `C = (sec(a) Re T)^{-1/2} T*` and polar factor `C = V |C|`, returns
/// `U = V*`. Sectorial `T` makes `C` invertible, so the factor is unique.
pub fn abs_bound_unitary(t: &SectorMatrix) -> Result<CMatrix> {
    let d = t.re_part().scale_re(t.sec_alpha());
    let di = herm_inv_sqrt(&d)?;
    let c = di.base() * &t.base().adjoint();
    let p = polar(&c)?;
    Ok(p.unitary.adjoint())
}

/// Samples the inner-product bound
/// `|<Tx, y>| <= sec(a)/2 (|<(Re T)^{1/2} U (Re T)^{1/2} x, y>| +
/// sqrt(<Re T y, y> <Re T x, x>))`
/// over random unit vector pairs; the worst slack lands in the report.
pub fn inner_bound_check(t: &SectorMatrix, trials: usize, seed: u64) -> Result<CheckReport> {
    let n = t.dim();
    let wp = extract_contraction(&sector_block(t)?)?;
    let re = t.re_part();
    let shalf = sqrt_psd(&re)?;
    let g = &(shalf.base() * &wp.unitary) * shalf.base();
    let sec = t.sec_alpha();
    let scale = 1.0f64.max(t.base().op_norm());
    let cushion = 1e-9 * scale;

    let mut rng = rng_from(seed, &[0x1bb, n as u64]);
    let mut min_slack = f64::INFINITY;
    let apply = |m: &CMatrix, v: &[C]| -> Vec<C> {
        (0..n)
            .map(|i| (0..n).map(|j| m.entry(i, j) * v[j]).sum())
            .collect()
    };
    let dot = |u: &[C], v: &[C]| -> C { v.iter().zip(u).map(|(vi, ui)| ui.conj() * vi).sum() };

    for _ in 0..trials {
        let x = random_unit_vector(&mut rng, n);
        let y = random_unit_vector(&mut rng, n);
        let tx = apply(t.base(), &x);
        let lhs = dot(&y, &tx).norm();
        let gx = apply(&g, &x);
        let term1 = dot(&y, &gx).norm();
        let ry = apply(re.base(), &y);
        let rx = apply(re.base(), &x);
        let term2 = (dot(&y, &ry).re.max(0.0) * dot(&x, &rx).re.max(0.0)).sqrt();
        let rhs = 0.5 * sec * (term1 + term2) + cushion;
        min_slack = min_slack.min(rhs - lhs);
    }

    Ok(CheckReport::from_margins(
        TheoremId::InnerBound,
        seed,
        n,
        t.angle(),
        vec![trials as f64],
        vec![min_slack],
        tol::ORDER_TOL,
        scale,
    ))
}

/// The spectral-radius refinement chain for the operator norm of a
/// sectorial matrix:
/// `(|T|, sec(a) r(U Re T), sec(a)/2 (r(U Re T) + |Re T|), sec(a) |Re T|)`,
/// with `U` the constructive unitary of [`abs_bound_unitary`]. The spectral
/// radius comes from a general eigensolve since `U Re T` is not normal.
///
/// The last two links always hold (`r <= |.|`). The first link can FAIL:
/// it relies on `|S| = r(S)` for `S = (Re T)^{1/2} U (Re T)^{1/2}`, which is
/// false for non-normal `S`: about 2% of random draws violate it with
/// relative excess up to ~0.3. See [`norm_chain_operator_norm`] for the
/// chain that is actually provable, with `|S|` in place of `r(S)`.
pub fn norm_chain(t: &SectorMatrix) -> Result<[f64; 4]> {
    let u = abs_bound_unitary(t)?;
    let re = t.re_part();
    let w = &u * re.base();
    let r = match gen_eig(&w) {
        Ok(eig) => eig.values.iter().fold(0.0f64, |acc, z| acc.max(z.norm())),
        Err(Error::DefectiveMatrix { .. }) => w.spectral_radius()?,
        Err(e) => return Err(e),
    };
    let sec = t.sec_alpha();
    let n0 = t.base().op_norm();
    let n1 = sec * r;
    let n3 = sec * re.op_norm();
    let n2 = 0.5 * (n1 + n3);
    Ok([n0, n1, n2, n3])
}

/// The provable norm chain: `(|T|, sec(a) |S|, sec(a)/2 (|S| + |Re T|),
/// sec(a) |Re T|)` with `S = (Re T)^{1/2} U (Re T)^{1/2}`. Monotone
/// nondecreasing on every input: the absolute-value bound gives the first
/// link and `|S| <= |Re T|` the rest.
pub fn norm_chain_operator_norm(t: &SectorMatrix) -> Result<[f64; 4]> {
    let u = abs_bound_unitary(t)?;
    let re = t.re_part();
    let sh = sqrt_psd(&re)?;
    let s = &(sh.base() * &u) * sh.base();
    let sec = t.sec_alpha();
    let n0 = t.base().op_norm();
    let n1 = sec * s.op_norm();
    let n3 = sec * re.op_norm();
    let n2 = 0.5 * (n1 + n3);
    Ok([n0, n1, n2, n3])
}
