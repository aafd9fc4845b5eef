//! Deterministic, splittable randomness.
//!
//! Every random quantity in the crate flows from a single `u64` seed through
//! [`derive_seed`], so independent trials (and parallel fuzzing shards) get
//! statistically independent, reproducible streams regardless of thread
//! scheduling or worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matcore::{CMatrix, HermMatrix, C};

/// splitmix64 finalizer; decorrelates consecutive tags.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a tag path.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut s = mix(base ^ 0xa076_1d64_78bd_642f);
    for &t in tags {
        s = mix(s ^ mix(t));
    }
    s
}

/// Counter-based stream for the given seed path.
pub fn rng_from(base: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, tags))
}

/// Standard normal via Box-Muller; two uniforms per call keeps the stream
/// layout platform-independent.
pub fn std_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        if u1 > f64::MIN_POSITIVE {
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C {
    C::new(std_normal(rng), std_normal(rng))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let entries: Vec<C> = (0..n * n).map(|_| complex_normal(rng)).collect();
    CMatrix::from_rows(n, &entries).expect("gaussian entries are finite")
}

/// Random Hermitian matrix `(G + G*) / 2`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermMatrix {
    complex_gaussian_matrix(rng, n).re_part()
}

/// Random unit vector in `C^n`.
pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C> {
    loop {
        let v: Vec<C> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.iter().map(|z| z / C::new(norm, 0.0)).collect();
        }
    }
}
