#![allow(dead_code)]

use logbloch_core::{CoefficientSeries, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian-like complex coefficients with mild decay.
pub fn random_series(rng: &mut ChaCha8Rng, degree: usize) -> CoefficientSeries {
    CoefficientSeries::from_fn(degree, |n| {
        let s = 1.0 / (n as f64 + 1.0).sqrt();
        Complex64::new(rng.random_range(-1.0..1.0) * s, rng.random_range(-1.0..1.0) * s)
    })
    .unwrap()
}

pub fn random_positive(rng: &mut ChaCha8Rng, degree: usize) -> CoefficientSeries {
    CoefficientSeries::from_fn(degree, |n| {
        Complex64::new(rng.random_range(0.0..1.0) / (n as f64 + 1.0), 0.0)
    })
    .unwrap()
}

/// `Σ c_n z^n` by explicit powers, no nesting.
pub fn naive_eval(f: &CoefficientSeries, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for c in f.coeffs() {
        acc += c * zn;
        zn *= z;
    }
    acc
}

/// Dense scan of `max_θ |f(r e^{iθ})|`.
pub fn brute_sup(f: &CoefficientSeries, r: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            naive_eval(f, Complex64::from_polar(r, t)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
