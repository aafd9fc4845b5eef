//! Operator means of accretive pairs and the two sandwich inequalities that
//! control their real parts.
//!
//! Run with: cargo run --release --example operator_means

use accretive::matfunc::FunctionSpec;
use accretive::means::{arith_t, geom_t, harm_t, mean_sigma, mean_sigma_herm};
use accretive::sector::random_sector;

fn main() {
    let alpha = 0.9;
    let a = random_sector(4, alpha, 1.0, 11);
    let b = random_sector(4, alpha, 1.0, 12);
    let sec2 = 1.0 / (alpha.cos() * alpha.cos());

    println!("sector angle {alpha:.3}, sec^2 = {sec2:.4}\n");
    println!(
        "{:>14} {:>14} {:>14} {:>14}",
        "mean", "lower margin", "upper margin", "route"
    );

    // Re A sigma Re B <= Re(A sigma B) <= sec^2 (Re A sigma Re B)
    for spec in ["power:0.5", "affine:0.3", "harm:0.7", "logmean:0.25"] {
        let f = FunctionSpec::parse(spec).unwrap();
        let m = mean_sigma(&f, &a, &b).unwrap();
        let op = m.value.re_part();
        let hm = mean_sigma_herm(&f, &a.re_part(), &b.re_part()).unwrap();
        let low = hm.loewner_leq(&op).unwrap();
        let up = op.loewner_leq(&hm.scale_re(sec2)).unwrap();
        println!(
            "{:>14} {:>14.6} {:>14.6} {:>14}",
            spec,
            low.margin,
            up.margin,
            format!("{:?}", m.route)
        );
    }

    // the arithmetic / harmonic envelope around any mean with f'(1) = t
    let t = 0.4;
    let cos2 = alpha.cos() * alpha.cos();
    let mid = mean_sigma(&FunctionSpec::power(t).unwrap(), &a, &b)
        .unwrap()
        .value
        .re_part();
    let low = harm_t(&a, &b, t).unwrap().value.re_part().scale_re(cos2);
    let up = arith_t(&a, &b, t)
        .unwrap()
        .value
        .re_part()
        .scale_re(1.0 / cos2);
    println!(
        "\nenvelope at t = {t}: lambda_min(mid - cos^2 harm) = {:.6}, lambda_min(sec^2 arith - mid) = {:.6}",
        low.loewner_leq(&mid).unwrap().margin,
        mid.loewner_leq(&up).unwrap().margin
    );

    // equal weights interpolate the endpoints exactly
    let g0 = geom_t(&a, &b, 0.0).unwrap().value;
    let g1 = geom_t(&a, &b, 1.0).unwrap().value;
    println!(
        "endpoints: |A#_0B - A| = {:.1e}, |A#_1B - B| = {:.1e}",
        g0.entrywise_dist(a.base()),
        g1.entrywise_dist(b.base())
    );
}
