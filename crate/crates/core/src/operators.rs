//! Cesàro and Libera operators, the duality pairing and the inequalities
//! tying them to integral means.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gauss::GaussLegendre;
use crate::quadrature::Quadrature;
use crate::series::{horner, CoefficientSeries};
use crate::sum::CompensatedSum;

/// `⟨f, g⟩ = Σ f̂(n) ĝ(n)` over the common degree range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingValue {
    pub value: Complex64,
    pub terms: usize,
}

#[derive(Clone, Copy, Default)]
struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `(𝒞f)ˆ(n) = (n+1)^{-1} Σ_{k<=n} f̂(k)`.
pub fn cesaro(f: &CoefficientSeries) -> CoefficientSeries {
    let mut acc = ComplexSum::default();
    let c: Vec<Complex64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| {
            acc.add(*a);
            acc.value() / (n as f64 + 1.0)
        })
        .collect();
    CoefficientSeries::new(c).expect("averages of finite values are finite")
}

/// `(ℒg)ˆ(n) = Σ_{k=n}^{deg g} ĝ(k)/(k+1)`.
pub fn libera_coeff(g: &CoefficientSeries) -> CoefficientSeries {
    let mut acc = ComplexSum::default();
    let mut c: Vec<Complex64> = g
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .map(|(k, a)| {
            acc.add(a / (k as f64 + 1.0));
            acc.value()
        })
        .collect();
    c.reverse();
    CoefficientSeries::new(c).expect("tail sums of finite values are finite")
}

/// `ℒg(z) = ∫_0^1 g(t + (1-t)z) dt` by `quad_points`-point Gauss–Legendre.
pub fn libera_integral(g: &CoefficientSeries, z: Complex64, quad_points: usize) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain("Libera integral needs |z| < 1"));
    }
    if quad_points == 0 {
        return Err(Error::Domain("quadrature needs at least one point"));
    }
    let rule = GaussLegendre::new(quad_points);
    let mut acc = ComplexSum::default();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = 0.5 * (x + 1.0);
        let zeta = z * (1.0 - t) + t;
        acc.add(horner(g.coeffs(), zeta) * (0.5 * w));
    }
    Ok(acc.value())
}

pub fn pairing(f: &CoefficientSeries, g: &CoefficientSeries) -> PairingValue {
    let mut acc = ComplexSum::default();
    let terms = f.degree().min(g.degree()) + 1;
    for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
        acc.add(a * b);
    }
    PairingValue {
        value: acc.value(),
        terms,
    }
}

/// `Σ |ĝ(n)|/(n+1)`.
pub fn ell1_minus1_norm(g: &CoefficientSeries) -> f64 {
    crate::sum::sum(
        g.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c.norm() / (n as f64 + 1.0)),
    )
}

/// `π M_1(r, g) - Σ |ĝ(n)| r^n/(n+1)`.
pub fn hardy_inequality_gap(quad: &Quadrature, g: &CoefficientSeries, r: f64) -> Result<f64> {
    let m = quad.mean(g, r, 1.0)?.value;
    let log_r = r.ln();
    let rhs = crate::sum::sum(g.coeffs().iter().enumerate().map(|(n, c)| {
        let rn = if n == 0 { 1.0 } else { (n as f64 * log_r).exp() };
        c.norm() * rn / (n as f64 + 1.0)
    }));
    Ok(PI * m - rhs)
}

/// `2(1-r)^{-1} ∫_r^1 M_1(s, f′) ds - r M_1(r, (ℒf)′)`.
pub fn libera_derivative_bound_gap(quad: &Quadrature, f: &CoefficientSeries, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain("radius must lie in (0, 1)"));
    }
    let lhs = r * quad.mean(&libera_coeff(f).derivative(), r, 1.0)?.value;
    let tail = quad.radial_mean_integral(&f.derivative(), r, 1.0)?.value;
    Ok(2.0 * tail / (1.0 - r) - lhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(c: &[f64]) -> CoefficientSeries {
        CoefficientSeries::from_real(c).unwrap()
    }

    #[test]
    fn cesaro_examples() {
        assert!(cesaro(&CoefficientSeries::zero(4)).is_zero());
        let one = cesaro(&real(&[1.0, 0.0, 0.0, 0.0]));
        for n in 0..4 {
            assert_eq!(one.coeff(n).re, 1.0 / (n as f64 + 1.0));
        }
        let g = CoefficientSeries::ones(50);
        assert!(cesaro(&g).max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn libera_examples() {
        assert_eq!(libera_coeff(&real(&[1.0])).max_abs_diff(&real(&[1.0])), 0.0);
        let l = libera_coeff(&CoefficientSeries::monomial(3));
        assert!(l.max_abs_diff(&real(&[0.25; 4])) < 1e-16);
        let h = libera_coeff(&CoefficientSeries::ones(9));
        let mut tail = 0.0;
        for n in (0..=9).rev() {
            tail += 1.0 / (n as f64 + 1.0);
            assert!((h.coeff(n).re - tail).abs() < 1e-15);
        }
    }

    #[test]
    fn libera_integral_closed_forms() {
        let v = libera_integral(&real(&[1.0]), Complex64::new(0.3, -0.2), 4).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        let v = libera_integral(&CoefficientSeries::monomial(1), Complex64::new(0.0, 0.0), 4).unwrap();
        assert!((v.re - 0.5).abs() < 1e-15);
        assert!(libera_integral(&real(&[1.0]), Complex64::new(1.0, 0.0), 4).is_err());
    }

    #[test]
    fn pairing_of_monomials() {
        let p = pairing(&CoefficientSeries::monomial(3), &CoefficientSeries::monomial(3));
        assert_eq!(p.value, Complex64::new(1.0, 0.0));
        let p = pairing(&CoefficientSeries::monomial(3), &CoefficientSeries::monomial(2));
        assert_eq!(p.value, Complex64::new(0.0, 0.0));
        assert_eq!(p.terms, 3);
    }

    #[test]
    fn ell1_examples() {
        assert_eq!(ell1_minus1_norm(&real(&[1.0])), 1.0);
        assert_eq!(ell1_minus1_norm(&CoefficientSeries::monomial(4)), 0.2);
        let h: f64 = (0..=20).map(|n| 1.0 / (n as f64 + 1.0)).sum();
        assert!((ell1_minus1_norm(&CoefficientSeries::ones(20)) - h).abs() < 1e-14);
    }

    #[test]
    fn hardy_gap_examples() {
        let q = Quadrature::default();
        let g = hardy_inequality_gap(&q, &real(&[1.0]), 0.5).unwrap();
        assert!((g - (PI - 1.0)).abs() < 1e-14);
        let g = hardy_inequality_gap(&q, &CoefficientSeries::monomial(4), 0.9).unwrap();
        let rk = 0.9f64.powi(4);
        assert!((g - (PI * rk - rk / 5.0)).abs() < 1e-14);
    }

    #[test]
    fn libera_bound_for_z() {
        let q = Quadrature::default();
        let g = libera_derivative_bound_gap(&q, &CoefficientSeries::monomial(1), 0.5).unwrap();
        assert!((g - 1.75).abs() < 1e-12, "{g}");
        let c = libera_derivative_bound_gap(&q, &real(&[2.0]), 0.5).unwrap();
        assert_eq!(c, 0.0);
        assert!(libera_derivative_bound_gap(&q, &real(&[2.0]), 1.0).is_err());
    }
}
