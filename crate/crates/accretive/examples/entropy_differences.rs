//! Perspective differences: Tsallis and relative operator entropies, the
//! congruence identity, and the two-sided real-part bounds: including a
//! demonstration of why the deformed-log representative must be excluded
//! from the sec^2-type bounds.
//!
//! Run with: cargo run --release --example entropy_differences

use accretive::entropy::{congruence_diff, perspective_diff, rel_entropy, tsallis};
use accretive::matfunc::FunctionSpec;
use accretive::means::mean_sigma_herm;
use accretive::rng::{complex_gaussian_matrix, rng_from};
use accretive::sector::random_sector;
use accretive::HermMatrix;

fn main() {
    let alpha = 0.7;
    let a = random_sector(3, alpha, 1.0, 5);
    let b = random_sector(3, alpha, 1.0, 6);

    // entropies and their t -> 0 limit
    let s = rel_entropy(&a, &b).unwrap();
    println!("relative entropy S(A|B), |S| = {:.4}", s.op_norm());
    for t in [0.5, 0.1, 0.01] {
        let tt = tsallis(&a, &b, t).unwrap();
        println!("  |T_{t}(A|B) - S(A|B)| = {:.4e}", (&tt - &s).op_norm());
    }

    // the congruence identity is exact for any representative pair
    let c = complex_gaussian_matrix(&mut rng_from(9, &[0]), 3);
    let f = FunctionSpec::tsallis(0.5).unwrap();
    let g = FunctionSpec::one();
    let (left, right) = congruence_diff(&c, &f, &g, &a, &b).unwrap();
    println!(
        "\ncongruence defect |C* D C - D(C*AC|C*BC)| = {:.3e}",
        left.entrywise_dist(&right)
    );

    // two-sided bounds hold for positive operator-monotone pairs
    let sec2 = 1.0 / (alpha.cos() * alpha.cos());
    let f = FunctionSpec::affine(0.4).unwrap();
    let g = FunctionSpec::power(0.4).unwrap();
    let d_op = perspective_diff(&f, &g, &a, &b).unwrap().value.re_part();
    let sf = mean_sigma_herm(&f, &a.re_part(), &b.re_part()).unwrap();
    let sg = mean_sigma_herm(&g, &a.re_part(), &b.re_part()).unwrap();
    let d_h = sf.sub(&sg);
    let lower = d_h.add(&sg.scale_re(1.0 - sec2));
    let upper = d_h.add(&sf.scale_re(sec2 - 1.0));
    println!(
        "\n(affine, power) bounds: lower margin {:.6}, upper margin {:.6}",
        lower.loewner_leq(&d_op).unwrap().margin,
        d_op.loewner_leq(&upper).unwrap().margin
    );

    // ... but fail for the deformed-log pair (tsallis, one), whose
    // representative is negative near zero and hence not a positive
    // operator-monotone function: scan for a counterexample
    let t = 0.3;
    for seed in 0..50u64 {
        let a = random_sector(3, std::f64::consts::FRAC_PI_4, 1.0, 1000 + seed);
        let b = random_sector(3, std::f64::consts::FRAC_PI_4, 1.0, 2000 + seed);
        let d_op = HermMatrix::hermitize(&tsallis(&a, &b, t).unwrap());
        let d_h = {
            let gm = mean_sigma_herm(&FunctionSpec::power(t).unwrap(), &a.re_part(), &b.re_part())
                .unwrap();
            gm.sub(&a.re_part()).scale_re(1.0 / t)
        };
        let upper = d_h.scale_re(2.0).add(&a.re_part()); // sec^2 = 2 at pi/4
        let v = d_op.loewner_leq(&upper).unwrap();
        if !v.holds {
            println!(
                "\n(tsallis, one) upper bound violated at seed {seed}: margin {:.4}: \
                 the shifted representative sits outside the hypothesis set",
                v.margin
            );
            break;
        }
    }
}
