//! Drive the theorem registry directly from code: fuzz a few statements,
//! print the CSV summary, and measure how tight a constant is.
//!
//! Run with: cargo run --release --example fuzz_theorems

use accretive::verify::{fuzz, sharpness, CheckParams, TheoremId};

fn main() {
    let ids = [
        TheoremId::LhOrder,
        TheoremId::InvSec,
        TheoremId::Callebaut,
        TheoremId::Submult,
        TheoremId::R2r,
        TheoremId::Entropy2,
    ];
    let params = CheckParams::default();
    let alpha_grid = [0.0, std::f64::consts::FRAC_PI_4];
    let res = fuzz(&ids, 200, &[2, 3, 4, 5, 6], &alpha_grid, &params, 7).unwrap();

    print!("{}", res.to_csv());
    println!("\ntotal violations: {}", res.violations());

    // How much of the sec^2 budget does the order-preservation bound use?
    for alpha in alpha_grid {
        let rec = sharpness(TheoremId::LhOrder, 300, 4, alpha, &params, 3).unwrap();
        println!(
            "LH-ORDER sharpness at alpha = {alpha:.4}: max attained/bound = {:.6}",
            rec.max_ratio.unwrap()
        );
    }

    // a single check with a pinned function and seed, as the CLI would run it
    let rep = accretive::verify::run_check(
        TheoremId::LhOrder,
        4,
        std::f64::consts::FRAC_PI_6,
        &CheckParams {
            fn_spec: Some("power:0.5".into()),
            ..Default::default()
        },
        99,
    )
    .unwrap();
    println!("\nsingle check as JSON:\n{}", rep.to_json_line());
}
