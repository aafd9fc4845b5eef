//! Generate random sectorial matrices, certify their minimal sector angle,
//! and cross-validate the algebraic angle against pure Rayleigh sampling.
//!
//! Run with: cargo run --release --example generate_and_certify

use accretive::sector::{angle_oracle, in_sector, random_sector, sector_angle, sum_in_sector};

fn main() {
    println!(
        "{:>4} {:>8} {:>12} {:>12} {:>10}",
        "n", "alpha", "certified", "sampled", "gap"
    );
    for (k, &alpha) in [0.0, 0.5, 0.9, 1.2].iter().enumerate() {
        let n = 3 + k;
        let a = random_sector(n, alpha, 1.0, 42 + k as u64);
        let algebraic = sector_angle(a.base()).unwrap();
        let sampled = angle_oracle(a.base(), 50_000).unwrap();
        println!(
            "{n:>4} {alpha:>8.4} {algebraic:>12.8} {sampled:>12.8} {:>10.2e}",
            algebraic - sampled
        );
        assert!(in_sector(a.base(), alpha + 1e-12));
        if a.angle() > 0.05 {
            assert!(!in_sector(a.base(), a.angle() - 0.05));
        }
    }

    // sums stay inside the larger sector
    let a = random_sector(4, 1.0, 1.0, 7);
    let b = random_sector(4, 0.4, 1.0, 8);
    let s = sum_in_sector(&a, &b).unwrap();
    println!(
        "\nangle(A) = {:.4}, angle(B) = {:.4}, angle(A+B) = {:.4} (<= max)",
        a.angle(),
        b.angle(),
        s.angle()
    );
}
