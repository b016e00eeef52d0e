//! Truncated Taylor series on the unit disk.
//!
//! A [`CoefficientSeries`] stores `f̂(0), …, f̂(N)` densely. Everything else in
//! the crate (frame blocks, integral means, operators) is written against
//! this representation. Shorter operands are treated as zero-padded.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Slack allowed on `|z| <= 1` for points generated as `r e^{iθ}` with `r = 1`.
const DISK_SLACK: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoefficientSeries {
    coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    /// Builds a series from its coefficients. An empty vector is the zero
    /// series of degree 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("series coefficient"));
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::zero());
        }
        Ok(Self { coeffs })
    }

    /// Real coefficients `a_0, …, a_N`.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Builds a series from a coefficient generator `n ↦ f̂(n)`, `0 <= n <= degree`.
    pub fn from_fn<F: FnMut(usize) -> Complex64>(degree: usize, f: F) -> Result<Self> {
        Self::new((0..=degree).map(f).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::zero(); degree + 1],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut s = Self::zero(k);
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        s
    }

    /// `1 + z + … + z^degree`, the truncated geometric series.
    pub fn ones(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0); degree + 1],
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `f̂(n)`, zero beyond the degree.
    #[inline]
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the last nonzero coefficient (0 for the zero series).
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(&self) -> Self {
        Self {
            coeffs: self.coeffs[..=self.effective_degree()].to_vec(),
        }
    }

    /// Zero-pads (or truncates) to the given degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Complex64::zero());
        Self { coeffs }
    }

    /// Coefficientwise product `f * g`; the result has degree `min(deg f, deg g)`.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Multiplies coefficient `n` by the real multiplier `m(n)`.
    pub fn multiplier<F: FnMut(usize) -> f64>(&self, mut m: F) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * m(n))
                .collect(),
        }
    }

    /// `f'`; a constant maps to the zero series of degree 0.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(n, c)| c * (n + 1) as f64)
                .collect(),
        }
    }

    /// `ℛf = (z f)'`, i.e. `f̂(n) ↦ (n+1) f̂(n)`.
    pub fn r_operator(&self) -> Self {
        self.multiplier(|n| (n + 1) as f64)
    }

    /// `z f(z)`.
    pub fn times_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::zero());
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// `f_r(z) = f(rz)`.
    pub fn scale_radius(&self, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain("radius must lie in [0, 1]"));
        }
        Ok(Self {
            coeffs: scaled_by_powers(&self.coeffs, r),
        })
    }

    /// `f(z)` by Horner's scheme on the closed disk.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + DISK_SLACK) {
            return Err(Error::Domain("evaluation point outside the closed unit disk"));
        }
        Ok(horner(&self.coeffs, z))
    }

    /// `Σ |f̂(n)|² r^{2n}`, the squared `M_2(r, f)` by Parseval.
    pub fn parseval_sq(&self, r: f64) -> f64 {
        let mut acc = crate::sum::CompensatedSum::new();
        let mut rn = 1.0;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n % 64 == 0 {
                rn = r.powi(n as i32);
            }
            acc.add(c.norm_sqr() * rn * rn);
            rn *= r;
        }
        acc.value()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Horner evaluation of `Σ c_n z^n`.
pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, c| acc * z + c)
}

/// `c_n r^n`, with the running power re-anchored every 64 steps.
pub(crate) fn scaled_by_powers(coeffs: &[Complex64], r: f64) -> Vec<Complex64> {
    if r == 1.0 {
        return coeffs.to_vec();
    }
    let mut rn = 1.0;
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n % 64 == 0 {
                rn = r.powi(n as i32);
            }
            let v = c * rn;
            rn *= r;
            v
        })
        .collect()
}

fn zip_pad(
    a: &CoefficientSeries,
    b: &CoefficientSeries,
    op: impl Fn(Complex64, Complex64) -> Complex64,
) -> CoefficientSeries {
    let n = a.coeffs.len().max(b.coeffs.len());
    CoefficientSeries {
        coeffs: (0..n).map(|k| op(a.coeff(k), b.coeff(k))).collect(),
    }
}

impl Add for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn add(self, rhs: Self) -> CoefficientSeries {
        zip_pad(self, rhs, |x, y| x + y)
    }
}

impl Sub for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn sub(self, rhs: Self) -> CoefficientSeries {
        zip_pad(self, rhs, |x, y| x - y)
    }
}

impl Neg for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn neg(self) -> CoefficientSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn mul(self, rhs: Complex64) -> CoefficientSeries {
        self.scale(rhs)
    }
}

impl Mul<f64> for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn mul(self, rhs: f64) -> CoefficientSeries {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
