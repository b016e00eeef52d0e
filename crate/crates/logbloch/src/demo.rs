//! Bounded family in the weighted area space whose Libera transforms blow up
//! at the origin when `α < 0`.
//!
//! `f(z) = Σ a_k z^k` with `a_k = log^{-ε-α}(k+2)` and `f_r(z) = f(rz)`.

use logbloch_core::{BumpFunction, CoefficientSeries, CompensatedSum, Complex64, Quadrature};

use crate::config::DemoSection;
use crate::error::{Error, Result};
use crate::report::{DivergenceReport, DivergenceRow};

/// Blocks with `2^{n-1}` above this are evaluated at this scale instead.
pub const RESAMPLE_SCALE: usize = 1 << 12;

/// Extra dyadic factor of the truncation degree over `1/(1-r)`.
const TRUNCATION_OCTAVES: u32 = 4;

/// `M_1(1, V_n * P)` where `P` has coefficients `c(k)` for `k <= cutoff`,
/// `c` a smooth function of a real index.
///
/// For `2^{n-1} > scale` the block is rebuilt at `2^{n-1} = scale` with
/// coefficients `c(k 2^{n-1}/scale)`. The mean of a block with smooth
/// coefficient profile `F(k/2^{n-1})` tends to `(2π)^{-1}∫|F̂|`, which is
/// independent of the scale, so the rebuilt block has the same mean up to
/// aliasing of `F̂`.
pub fn block_mean_l1<C: Fn(f64) -> f64>(
    quad: &Quadrature,
    bump: &BumpFunction,
    n: usize,
    c: C,
    cutoff: f64,
    scale: usize,
) -> Result<f64> {
    if n == 0 {
        let coeffs: Vec<f64> = (0..=1).filter(|&k| k as f64 <= cutoff).map(|k| c(k as f64)).collect();
        let s = CoefficientSeries::from_real(&coeffs)?;
        return Ok(quad.hardy_norm(&s, 1.0)?.value);
    }
    let lo = 1usize << (n - 1);
    let (lo_eff, stretch) = if lo > scale {
        (scale, (lo / scale) as f64)
    } else {
        (lo, 1.0)
    };
    let hi_eff = 4 * lo_eff - 1;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); hi_eff + 1];
    for (j, slot) in coeffs.iter_mut().enumerate().skip(lo_eff) {
        let k = j as f64 * stretch;
        if k > cutoff {
            break;
        }
        *slot = Complex64::new(bump.phi(j as f64 / lo_eff as f64) * c(k), 0.0);
    }
    let s = CoefficientSeries::new(coeffs)?;
    Ok(quad.hardy_norm(&s, 1.0)?.value)
}

pub fn demo_coefficient(k: f64, power: f64, log_r: f64) -> f64 {
    let damp = if k == 0.0 { 1.0 } else { (k * log_r).exp() };
    (k + 2.0).ln().powf(-power) * damp
}

/// `ℒ(f_r)(0)` and `Σ_n (n+1)^α ‖V_n * f_r‖_1` for each `r_m = 1 - 2^{-m}`.
pub fn run_divergence_demo(
    quad: &Quadrature,
    alpha: f64,
    eps: Option<f64>,
    m_list: &[u32],
    band: f64,
    min_growth: f64,
) -> Result<DivergenceReport> {
    if !(alpha < 0.0) {
        return Err(Error::Scope(format!(
            "the divergence demo needs alpha < 0, got {alpha}"
        )));
    }
    let eps = eps.unwrap_or(1.0 - alpha);
    if !eps.is_finite() {
        return Err(Error::Scope(String::from("eps must be finite")));
    }
    if m_list.is_empty() {
        return Err(Error::Config(String::from("m list must not be empty")));
    }
    if m_list.iter().any(|&m| m > 26) {
        return Err(Error::Config(String::from("m above 26 exceeds the truncation budget")));
    }
    let power = eps + alpha;
    let bump = BumpFunction::default();
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let r = 1.0 - 0.5f64.powi(m as i32);
        let log_r = r.ln();
        let degree = 1usize << (m + TRUNCATION_OCTAVES);
        let mut lib = CompensatedSum::new();
        for k in 0..=degree {
            let kf = k as f64;
            lib.add(demo_coefficient(kf, power, log_r) / (kf + 1.0));
        }
        let mut frame = CompensatedSum::new();
        let mut n = 0;
        loop {
            let lo = if n == 0 { 0 } else { 1usize << (n - 1) };
            if lo > degree {
                break;
            }
            let v = block_mean_l1(
                quad,
                &bump,
                n,
                |k| demo_coefficient(k, power, log_r),
                degree as f64,
                RESAMPLE_SCALE,
            )?;
            frame.add((n as f64 + 1.0).powf(alpha) * v);
            n += 1;
        }
        rows.push(DivergenceRow {
            m,
            r,
            degree,
            libera_at_zero: lib.value(),
            frame_norm_b1: frame.value(),
        });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].libera_at_zero > w[0].libera_at_zero);
    let growth = rows[rows.len() - 1].libera_at_zero / rows[0].libera_at_zero;
    let hi = rows.iter().map(|r| r.frame_norm_b1).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.frame_norm_b1).fold(f64::INFINITY, f64::min);
    let frame_band = hi / lo;
    let pass = strictly_increasing && growth >= min_growth && frame_band <= band;
    let notes = format!(
        "require strictly increasing Libera values, last/first >= {min_growth}, frame band <= {band}; blocks beyond 2^{} rebuilt at that scale",
        RESAMPLE_SCALE.trailing_zeros() + 1
    );
    Ok(DivergenceReport {
        alpha,
        eps,
        rows,
        strictly_increasing,
        growth,
        frame_band,
        pass,
        notes,
    })
}

pub fn run_configured_demo(quad: &Quadrature, demo: &DemoSection) -> Result<DivergenceReport> {
    run_divergence_demo(quad, demo.alpha, demo.eps, &demo.m, demo.band, demo.min_growth)
}
