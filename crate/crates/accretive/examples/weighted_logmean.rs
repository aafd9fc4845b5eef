//! The weighted logarithmic mean: quadrature of the geometric path against
//! the scalar representing function, plus its two-sided sectorial bounds.
//!
//! Run with: cargo run --release --example weighted_logmean

use accretive::matfunc::logmean_scalar;
use accretive::means::{arith_t, geom_t, harm_t, logmean_op, LogmeanConvention};
use accretive::sector::random_sector;
use accretive::{CMatrix, SectorMatrix, C};

fn main() {
    // commuting inputs reduce to the scalar function entrywise
    let xs = [0.4, 1.0, 2.5, 9.0];
    let a = SectorMatrix::certify(CMatrix::identity(4)).unwrap();
    let b = SectorMatrix::certify(CMatrix::diag(
        &xs.iter().map(|&x| C::new(x, 0.0)).collect::<Vec<_>>(),
    ))
    .unwrap();
    println!(
        "{:>6} {:>12} {:>12} {:>10}",
        "t", "operator", "scalar", "error"
    );
    for t in [0.1, 0.5, 0.9] {
        let m = logmean_op(&a, &b, t, 32, LogmeanConvention::Representing).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            let s = logmean_scalar(t, x);
            println!(
                "{t:>6} {:>12.8} {s:>12.8} {:>10.2e}",
                m.value.entry(i, i).re,
                (m.value.entry(i, i).re - s).abs()
            );
        }
    }

    // the literal integral convention skips one weight and no longer fixes
    // equal arguments: A l_t A = 2 (1 - t) A
    let t = 0.3;
    let lit = logmean_op(&a, &a, t, 32, LogmeanConvention::Literal).unwrap();
    println!(
        "\nliteral convention at t = {t}: (A l_t A) entry = {:.4} vs 2(1-t) = {:.4}",
        lit.value.entry(0, 0).re,
        2.0 * (1.0 - t)
    );

    // sectorial bounds around the operator logarithmic mean
    let alpha = 0.8;
    let a = random_sector(4, alpha, 1.0, 31);
    let b = random_sector(4, alpha, 1.0, 32);
    let (s2, c2) = (1.0 / (alpha.cos() * alpha.cos()), alpha.cos() * alpha.cos());
    let t = 0.4;
    let lm = logmean_op(&a, &b, t, 32, LogmeanConvention::Representing)
        .unwrap()
        .value
        .re_part();
    let sh = geom_t(&a, &b, t).unwrap().value.re_part();
    let har = harm_t(&a, &b, t).unwrap().value.re_part();
    let ari = arith_t(&a, &b, t).unwrap().value.re_part();
    let lower = har.scale_re(c2).add(&sh).sub(&ari.scale_re(s2));
    let upper = ari.scale_re(s2).add(&sh).sub(&har.scale_re(c2));
    println!(
        "\nsectorial bounds at alpha = {alpha}, t = {t}: lower margin {:.6}, upper margin {:.6}",
        lower.loewner_leq(&lm).unwrap().margin,
        lm.loewner_leq(&upper).unwrap().margin
    );
}
