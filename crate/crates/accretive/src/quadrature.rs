//! Gaussian quadrature rules via Golub-Welsch.
//!
//! Nodes are eigenvalues of the symmetric Jacobi recurrence matrix, weights
//! come from the first eigenvector components. Rules are cached; the two
//! weight families used in this crate are Legendre (`w = 1`) and the power
//! kernel `u^{r-1} (1-u)^{-r}`, whose zeroth moment is `pi / sin(pi r)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::decomp::herm_eig;
use crate::matcore::{CMatrix, HermMatrix, C};

/// Quadrature rule on the open interval `(0, 1)`.
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type RuleCache = Mutex<HashMap<(usize, u64, u64), Arc<QuadRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Golub-Welsch for the Jacobi weight `(1-x)^a (1+x)^b` on `[-1, 1]`,
/// mapped to `(0, 1)`; `mu0` is the zeroth moment on `[-1, 1]`.
fn jacobi_rule_01(n: usize, a: f64, b: f64, mu0: f64) -> QuadRule {
    assert!(n >= 1);
    // monic three-term recurrence coefficients
    let alpha = |k: usize| -> f64 {
        let k = k as f64;
        if k == 0.0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * k + a + b) * (2.0 * k + a + b + 2.0))
        }
    };
    let beta = |k: usize| -> f64 {
        let kf = k as f64;
        if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                / ((2.0 * kf + a + b).powi(2) * (2.0 * kf + a + b + 1.0) * (2.0 * kf + a + b - 1.0))
        }
    };

    let tridiag = CMatrix::from_fn(n, |i, j| {
        if i == j {
            C::new(alpha(i), 0.0)
        } else if j == i + 1 || i == j + 1 {
            C::new(beta(i.max(j)).sqrt(), 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    });
    let eig = herm_eig(&HermMatrix::certify(tridiag).expect("tridiagonal is symmetric"))
        .expect("symmetric tridiagonal eigensolve");

    // interval map [-1,1] -> (0,1) and weight transform 2^{-(a+b+1)}
    let half_pow = 2.0f64.powf(-(a + b + 1.0));
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let x = eig.values[i].re;
        let v0 = eig.vectors.entry(0, i).norm_sqr();
        nodes.push(0.5 * (x + 1.0));
        weights.push(mu0 * v0 * half_pow);
    }
    QuadRule { nodes, weights }
}

fn cached(n: usize, a: f64, b: f64, mu0: f64) -> Arc<QuadRule> {
    let key = (n, a.to_bits(), b.to_bits());
    if let Some(rule) = cache().lock().unwrap().get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(jacobi_rule_01(n, a, b, mu0));
    cache().lock().unwrap().insert(key, rule.clone());
    rule
}

/// Gauss-Legendre rule on `(0, 1)`.
pub fn gauss_legendre_01(n: usize) -> Arc<QuadRule> {
    cached(n, 0.0, 0.0, 2.0)
}

/// Gaussian rule for the weight `u^{r-1} (1-u)^{-r}` on `(0, 1)`, the image
/// of the power-function integral kernel under `lambda = u / (1 - u)`.
pub fn gauss_power_kernel(n: usize, r: f64) -> Arc<QuadRule> {
    assert!(r > 0.0 && r < 1.0, "power kernel needs r in (0, 1)");
    let mu0 = std::f64::consts::PI / (std::f64::consts::PI * r).sin();
    cached(n, -r, r - 1.0, mu0)
}

/// Maps a `(0,1)` rule onto `(lo, hi)`.
pub fn mapped(rule: &QuadRule, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let len = hi - lo;
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(move |(&u, &w)| (lo + len * u, w * len))
}
