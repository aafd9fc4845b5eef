//! Block positivity machinery: the canonical PSD block of a sectorial
//! matrix, its contraction witness, the constructive absolute-value bound,
//! and the two norm chains (the provable operator-norm one, and the
//! spectral-radius one with its genuine counterexamples).
//!
//! Run with: cargo run --release --example block_witnesses

use accretive::blockwitness::{
    abs_bound_unitary, block_is_psd, extract_contraction, inner_bound_check, norm_chain,
    norm_chain_operator_norm, sector_block,
};
use accretive::decomp::{abs_val, sqrt_psd};
use accretive::sector::random_sector;

fn main() {
    let alpha = 1.0;
    let t = random_sector(4, alpha, 1.0, 77);

    let blk = sector_block(&t).unwrap();
    let v = block_is_psd(&blk);
    println!(
        "canonical block [[sec Re T, T], [T*, sec Re T]]: lambda_min = {:.3e} (PSD: {})",
        v.margin, v.holds
    );

    let wp = extract_contraction(&blk).unwrap();
    println!(
        "contraction witness: |K| = {:.12} (<= 1)",
        wp.contraction.op_norm()
    );

    // |T| <= sec(a) |(Re T)^{1/2} U (Re T)^{1/2}| with the constructive U
    let u = abs_bound_unitary(&t).unwrap();
    let sh = sqrt_psd(&t.re_part()).unwrap();
    let inner = &(sh.base() * &u) * sh.base();
    let lhs = abs_val(t.base()).unwrap();
    let rhs = abs_val(&inner).unwrap().scale_re(t.sec_alpha());
    println!(
        "absolute-value bound margin: {:.6}",
        lhs.loewner_leq(&rhs).unwrap().margin
    );

    // sampled inner-product bound
    let rep = inner_bound_check(&t, 20_000, 1).unwrap();
    println!(
        "inner-product bound, 2e4 vector pairs: worst slack {:.4e}",
        rep.margins[0]
    );

    // norm chains
    let [m0, m1, m2, m3] = norm_chain_operator_norm(&t).unwrap();
    println!("\noperator-norm chain (provable): {m0:.6} <= {m1:.6} <= {m2:.6} <= {m3:.6}");

    // the spectral-radius variant fails on a few percent of draws
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
    let mut shown = 0;
    for seed in 0..600u64 {
        let n = 2 + (seed as usize) % 5;
        let alpha = [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3][(seed as usize) % 3];
        let t = random_sector(n, alpha, 1.0, 8200 + seed);
        let [n0, n1, _, n3] = norm_chain(&t).unwrap();
        if n0 > n1 + 1e-8 * n3.max(1.0) {
            println!(
                "spectral-radius chain counterexample (n = {n}, alpha = {alpha:.4}, seed {}): \
                 |T| = {n0:.6} > sec(a) r(U Re T) = {n1:.6}",
                8200 + seed
            );
            shown += 1;
            if shown >= 3 {
                break;
            }
        }
    }
    if shown == 0 {
        println!("no spectral-radius counterexample in this scan (rate is a few percent)");
    }
}
