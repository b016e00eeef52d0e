//! Radix-2 evaluation of polynomials at roots of unity.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

/// `e^{2πij/n}` for `0 <= j < n/2`.
#[derive(Debug, Clone)]
pub struct Twiddles {
    n: usize,
    w: Vec<Complex64>,
}

impl Twiddles {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two() && n >= 2);
        let w = (0..n / 2)
            .map(|j| {
                let t = 2.0 * PI * (j as f64) / (n as f64);
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        Self { n, w }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `e^{2πij/m}` for `m` dividing the table size.
    fn root(&self, j: usize, m: usize) -> Complex64 {
        let idx = (j % m) * (self.n / m);
        let half = self.n / 2;
        if idx < half {
            self.w[idx]
        } else {
            -self.w[idx - half]
        }
    }
}

fn bit_reverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
}

/// In place `y_j = Σ_k x_k e^{2πijk/K}` (no normalisation), `K = buf.len()`.
///
/// `tw` must have size at least `K`; smaller tables are rejected.
pub fn transform(buf: &mut [Complex64], tw: &Twiddles) {
    let n = buf.len();
    assert!(n.is_power_of_two());
    assert!(tw.n >= n, "twiddle table smaller than transform");
    if n < 2 {
        return;
    }
    bit_reverse(buf);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = tw.n / len;
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw.w.iter().step_by(stride)) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        len <<= 1;
    }
}

/// Values `P(e^{2πij/K})`, `j = 0..K`, for `P(z) = Σ c_n z^n`.
///
/// Coefficients are folded modulo `K`, so the samples are exact for any `K`.
pub fn circle_values(coeffs: &[Complex64], k: usize, tw: &Twiddles) -> Vec<Complex64> {
    let mut buf = vec![Complex64::zero(); k];
    for (idx, c) in coeffs.iter().enumerate() {
        buf[idx & (k - 1)] += c;
    }
    if k > tw.n {
        transform(&mut buf, &Twiddles::new(k));
    } else {
        transform(&mut buf, tw);
    }
    buf
}

/// Values `P(e^{2πi(2j+1)/(2K)})`, `j = 0..K`: the samples that `2K` points
/// add to a `K`-point grid.
pub fn odd_circle_values(coeffs: &[Complex64], k: usize, tw: &Twiddles) -> Vec<Complex64> {
    let local;
    let tw = if 2 * k > tw.n {
        local = Twiddles::new(2 * k);
        &local
    } else {
        tw
    };
    let mut buf = vec![Complex64::zero(); k];
    for (idx, c) in coeffs.iter().enumerate() {
        buf[idx & (k - 1)] += c * tw.root(idx, 2 * k);
    }
    transform(&mut buf, tw);
    buf
}
