//! Smooth dyadic blocks `V_n` with `Σ_n V_n * f = f`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::CoefficientSeries;

type Transition = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A cut-off `ω` equal to 1 on `t <= 1` and 0 on `t >= 2`.
///
/// Only the transition on `(1, 2)` is pluggable; the plateaus are enforced
/// here so the partition of unity never depends on the transition.
#[derive(Clone)]
pub struct BumpFunction {
    transition: Transition,
    description: String,
}

impl fmt::Debug for BumpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BumpFunction")
            .field("description", &self.description)
            .finish()
    }
}

impl Default for BumpFunction {
    fn default() -> Self {
        Self::mollifier(1.0).expect("unit sharpness is valid")
    }
}

impl BumpFunction {
    /// `h(2-t) / (h(2-t) + h(t-1))` with `h(x) = exp(-s/x)`.
    pub fn mollifier(sharpness: f64) -> Result<Self> {
        if !(sharpness > 0.0 && sharpness.is_finite()) {
            return Err(Error::Domain("mollifier sharpness must be positive"));
        }
        let description = if sharpness == 1.0 {
            String::from("default")
        } else {
            format!("mollifier:{sharpness}")
        };
        Ok(Self {
            transition: Arc::new(move |t| {
                let e = sharpness * (1.0 / (2.0 - t) - 1.0 / (t - 1.0));
                1.0 / (1.0 + e.exp())
            }),
            description,
        })
    }

    /// A custom transition, called only for `1 < t < 2`.
    pub fn from_transition<F>(description: impl Into<String>, transition: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            transition: Arc::new(transition),
            description: description.into(),
        }
    }

    /// Parses `default` or `mollifier:<sharpness>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "default" {
            return Ok(Self::default());
        }
        match spec.strip_prefix("mollifier:") {
            Some(s) => {
                let s: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain("mollifier sharpness is not a number"))?;
                Self::mollifier(s)
            }
            None => Err(Error::Domain("unknown bump spec")),
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn omega(&self, t: f64) -> f64 {
        if t <= 1.0 {
            1.0
        } else if t >= 2.0 {
            0.0
        } else {
            (self.transition)(t)
        }
    }

    /// `φ(t) = ω(t/2) - ω(t)`, supported in `(1, 4)`.
    pub fn phi(&self, t: f64) -> f64 {
        self.omega(0.5 * t) - self.omega(t)
    }

    /// Weight of coefficient `k` in block `n`.
    pub fn block_weight(&self, n: usize, k: usize) -> f64 {
        if n == 0 {
            return if k <= 1 { 1.0 } else { 0.0 };
        }
        let (lo, hi) = block_support(n);
        if k < lo || k > hi {
            return 0.0;
        }
        self.phi(k as f64 / (lo as f64))
    }
}

/// The default cut-off.
pub fn bump_omega(t: f64) -> f64 {
    BumpFunction::default().omega(t)
}

/// The default profile `ω(t/2) - ω(t)`.
pub fn phi(t: f64) -> f64 {
    BumpFunction::default().phi(t)
}

/// Index range `[lo, hi]` carrying block `n`.
pub fn block_support(n: usize) -> (usize, usize) {
    if n == 0 {
        (0, 1)
    } else {
        (1 << (n - 1), (1 << (n + 1)) - 1)
    }
}

/// One block `V_n`, stored as real weights over its support.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePolynomial {
    n: usize,
    lo: usize,
    weights: Vec<f64>,
}

impl FramePolynomial {
    pub fn index(&self) -> usize {
        self.n
    }

    pub fn support_lo(&self) -> usize {
        self.lo
    }

    pub fn support_hi(&self) -> usize {
        self.lo + self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coeff(&self, k: usize) -> f64 {
        if k < self.lo {
            0.0
        } else {
            self.weights.get(k - self.lo).copied().unwrap_or(0.0)
        }
    }

    pub fn to_series(&self) -> CoefficientSeries {
        let mut c = vec![Complex64::zero(); self.support_hi() + 1];
        for (dst, &w) in c[self.lo..].iter_mut().zip(&self.weights) {
            *dst = Complex64::new(w, 0.0);
        }
        CoefficientSeries::new(c).expect("block weights are finite")
    }

    /// `V_n * f`, of degree `min(support_hi, deg f)`.
    pub fn apply(&self, f: &CoefficientSeries) -> CoefficientSeries {
        let deg = self.support_hi().min(f.degree());
        let mut c = vec![Complex64::zero(); deg + 1];
        if self.lo <= deg {
            let src = &f.coeffs()[self.lo..=deg];
            for ((dst, a), &w) in c[self.lo..].iter_mut().zip(src).zip(&self.weights) {
                *dst = a * w;
            }
        }
        CoefficientSeries::new(c).expect("finite input stays finite")
    }

    /// `Q_k = V_n * Δ_{n,k}`: the block truncated after index `k`.
    pub fn partial(&self, k: usize) -> Result<CoefficientSeries> {
        let delta = delta_polynomial(self.n, k)?;
        Ok(self.to_series().hadamard(&delta))
    }
}

/// `V_0 = 1 + z`; for `n >= 1`, `V_n = Σ φ(k/2^{n-1}) z^k` over `[2^{n-1}, 2^{n+1}-1]`.
pub fn build_vn(n: usize, bump: &BumpFunction) -> FramePolynomial {
    let (lo, hi) = block_support(n);
    let weights = (lo..=hi).map(|k| bump.block_weight(n, k)).collect();
    FramePolynomial { n, lo, weights }
}

/// Indicator polynomial of `[2^{n-1}, k]`.
pub fn delta_polynomial(n: usize, k: usize) -> Result<CoefficientSeries> {
    if n == 0 {
        return Err(Error::Domain("window index n must be at least 1"));
    }
    let lo = 1usize << (n - 1);
    let hi = 1usize << (n + 1);
    if k < lo || k > hi {
        return Err(Error::Range { index: k, lo, hi });
    }
    let mut c = vec![Complex64::zero(); k + 1];
    for x in &mut c[lo..] {
        *x = Complex64::new(1.0, 0.0);
    }
    CoefficientSeries::new(c)
}

/// Cached blocks `V_0..=V_{n_max}`.
#[derive(Debug, Clone)]
pub struct Frame {
    bump: BumpFunction,
    blocks: Vec<FramePolynomial>,
}

impl Default for Frame {
    fn default() -> Self {
        Self::new(14)
    }
}

impl Frame {
    pub fn new(n_max: usize) -> Self {
        Self::with_bump(BumpFunction::default(), n_max)
    }

    pub fn with_bump(bump: BumpFunction, n_max: usize) -> Self {
        assert!(n_max < usize::BITS as usize - 2, "n_max too large");
        let blocks = (0..=n_max).map(|n| build_vn(n, &bump)).collect();
        Self { bump, blocks }
    }

    /// Smallest frame (at least `n_max = 1`) whose blocks cover `0..=degree`.
    pub fn covering(degree: usize, bump: BumpFunction) -> Self {
        let mut n_max = 1;
        while (1usize << n_max) - 1 < degree {
            n_max += 1;
        }
        Self::with_bump(bump, n_max)
    }

    pub fn bump(&self) -> &BumpFunction {
        &self.bump
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[FramePolynomial] {
        &self.blocks
    }

    pub fn block(&self, n: usize) -> Result<&FramePolynomial> {
        self.blocks.get(n).ok_or(Error::Range {
            index: n,
            lo: 0,
            hi: self.n_max(),
        })
    }

    /// Largest degree reconstructed exactly.
    pub fn covered_degree(&self) -> usize {
        (1usize << self.n_max()) - 1
    }

    pub fn check_covers(&self, f: &CoefficientSeries) -> Result<()> {
        if f.degree() > self.covered_degree() {
            return Err(Error::Coverage {
                degree: f.degree(),
                n_max: self.n_max(),
                covered: self.covered_degree() + 1,
            });
        }
        Ok(())
    }

    /// `P_n = V_{n-1} + V_n + V_{n+1}`.
    pub fn build_pn(&self, n: usize) -> Result<CoefficientSeries> {
        if n + 1 > self.n_max() {
            return Err(Error::Range {
                index: n,
                lo: 0,
                hi: self.n_max().saturating_sub(1),
            });
        }
        let mut out = &self.blocks[n].to_series() + &self.blocks[n + 1].to_series();
        if n > 0 {
            out = &out + &self.blocks[n - 1].to_series();
        }
        Ok(out)
    }

    /// `[V_n * f]` for `n = 0..=n_max`.
    pub fn decompose(&self, f: &CoefficientSeries) -> Result<Vec<CoefficientSeries>> {
        self.check_covers(f)?;
        Ok(self.blocks.iter().map(|b| b.apply(f)).collect())
    }
}

/// Sum of a block list, as returned by [`Frame::decompose`].
pub fn reconstruct(blocks: &[CoefficientSeries]) -> CoefficientSeries {
    let deg = blocks.iter().map(|b| b.degree()).max().unwrap_or(0);
    let mut re = vec![crate::sum::CompensatedSum::new(); deg + 1];
    let mut im = vec![crate::sum::CompensatedSum::new(); deg + 1];
    for b in blocks {
        for (k, c) in b.coeffs().iter().enumerate() {
            re[k].add(c.re);
            im[k].add(c.im);
        }
    }
    let c = re
        .iter()
        .zip(&im)
        .map(|(a, b)| Complex64::new(a.value(), b.value()))
        .collect();
    CoefficientSeries::new(c).expect("sums of finite blocks are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_plateaus_and_midpoint() {
        assert_eq!(bump_omega(0.5), 1.0);
        assert_eq!(bump_omega(1.0), 1.0);
        assert_eq!(bump_omega(3.0), 0.0);
        assert_eq!(bump_omega(2.0), 0.0);
        assert!((bump_omega(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn omega_strictly_decreasing_inside() {
        let ts: Vec<f64> = (10..=190).map(|i| 1.0 + i as f64 / 200.0).collect();
        for w in ts.windows(2) {
            let (a, b) = (bump_omega(w[0]), bump_omega(w[1]));
            assert!(a > b, "t={} {a} {b}", w[0]);
        }
        for &t in &ts {
            let v = bump_omega(t);
            assert!(v > 0.0 && v < 1.0);
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(1.0), 0.0);
        assert_eq!(phi(2.0), 1.0);
        assert_eq!(phi(4.0), 0.0);
        assert_eq!(phi(0.3), 0.0);
        assert_eq!(phi(5.0), 0.0);
    }

    #[test]
    fn first_blocks() {
        let bump = BumpFunction::default();
        let v0 = build_vn(0, &bump);
        assert_eq!(v0.weights(), &[1.0, 1.0]);
        let v1 = build_vn(1, &bump);
        assert_eq!((v1.support_lo(), v1.support_hi()), (1, 3));
        assert_eq!(v1.coeff(1), 0.0);
        assert_eq!(v1.coeff(2), 1.0);
        for n in 1..16 {
            assert_eq!(build_vn(n, &bump).coeff(1 << n), 1.0);
        }
    }

    #[test]
    fn partition_of_unity() {
        let frame = Frame::new(14);
        for k in 0..(1usize << 14) {
            let s: f64 = frame.blocks().iter().map(|b| b.coeff(k)).sum();
            assert!((s - 1.0).abs() <= 1e-12, "k={k} s={s}");
        }
    }

    #[test]
    fn pn_reproduces_vn() {
        let frame = Frame::new(8);
        let v3 = frame.blocks()[3].to_series();
        let p3 = frame.build_pn(3).unwrap();
        assert_eq!(p3.hadamard(&v3).max_abs_diff(&v3), 0.0);
        let v5 = frame.blocks()[5].to_series();
        assert!(!p3.hadamard(&v5).is_zero());
        let v6 = frame.blocks()[6].to_series();
        assert!(p3.hadamard(&v6).is_zero());
        let p0 = frame.build_pn(0).unwrap();
        let expect = &frame.blocks()[0].to_series() + &frame.blocks()[1].to_series();
        assert_eq!(p0.max_abs_diff(&expect), 0.0);
        assert!(matches!(frame.build_pn(8), Err(Error::Range { .. })));
    }

    #[test]
    fn delta_windows() {
        let d = delta_polynomial(1, 1).unwrap();
        assert_eq!(d.max_abs_diff(&CoefficientSeries::monomial(1)), 0.0);
        assert!(delta_polynomial(2, 1).is_err());
        assert!(delta_polynomial(2, 9).is_err());
        let bump = BumpFunction::default();
        let q = build_vn(2, &bump).partial(5).unwrap();
        for j in 0..=5 {
            let expect = if j >= 2 { phi(j as f64 / 2.0) } else { 0.0 };
            assert_eq!(q.coeff(j).re, expect);
        }
    }

    #[test]
    fn decompose_monomials() {
        let frame = Frame::new(6);
        let blocks = frame.decompose(&CoefficientSeries::constant(Complex64::new(1.0, 0.0))).unwrap();
        assert!(!blocks[0].is_zero());
        assert!(blocks[1..].iter().all(|b| b.is_zero()));
        let f = CoefficientSeries::monomial(8);
        let blocks = frame.decompose(&f).unwrap();
        for (n, b) in blocks.iter().enumerate() {
            assert_eq!(b.is_zero(), n != 3, "n={n}");
        }
        assert!(frame.decompose(&CoefficientSeries::monomial(64)).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(BumpFunction::from_spec("default").unwrap().description(), "default");
        let b = BumpFunction::from_spec("mollifier:2").unwrap();
        assert!((b.omega(1.5) - 0.5).abs() < 1e-15);
        assert!(BumpFunction::from_spec("mollifier:-1").is_err());
        assert!(BumpFunction::from_spec("box").is_err());
    }
}
