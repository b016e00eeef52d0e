//! Coefficient criteria and frame-block characterisations of the
//! logarithmic Bloch-type spaces.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::quadrature::Quadrature;
use crate::series::CoefficientSeries;
use crate::sum::CompensatedSum;

const MONOTONE_TOL: f64 = 1e-12;

/// Result of [`monotone_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneCheck {
    pub ok: bool,
    pub first_violation: Option<usize>,
}

/// A criterion sum and whether `α` lies where the characterisation applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionValue {
    pub value: f64,
    pub in_scope: bool,
}

/// Two sides of one norm equivalence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MembershipVerdict {
    pub space_tag: String,
    pub direct_norm: f64,
    pub sequence_side: f64,
    pub ratio: f64,
    pub verdict_note: String,
}

impl MembershipVerdict {
    pub fn new(
        space_tag: impl Into<String>,
        direct_norm: f64,
        sequence_side: f64,
        verdict_note: impl Into<String>,
    ) -> Result<Self> {
        if !direct_norm.is_finite() || !sequence_side.is_finite() {
            return Err(Error::NonFinite("verdict side"));
        }
        let ratio = if direct_norm > 0.0 {
            sequence_side / direct_norm
        } else {
            0.0
        };
        Ok(Self {
            space_tag: space_tag.into(),
            direct_norm,
            sequence_side,
            ratio,
            verdict_note: verdict_note.into(),
        })
    }
}

/// Nonincreasing and nonnegative within `1e-12`; reports the first index `n`
/// with `a_n < a_{n+1} - tol` or `a_n < -tol`.
pub fn monotone_check(a: &[f64]) -> MonotoneCheck {
    for (n, &x) in a.iter().enumerate() {
        let next_up = a.get(n + 1).is_some_and(|&y| x < y - MONOTONE_TOL);
        if x < -MONOTONE_TOL || next_up || !x.is_finite() {
            return MonotoneCheck {
                ok: false,
                first_violation: Some(n),
            };
        }
    }
    MonotoneCheck {
        ok: true,
        first_violation: None,
    }
}

fn log_factor(n: usize, power: f64) -> f64 {
    (n as f64 + 2.0).ln().powf(power) / (n as f64 + 1.0)
}

/// `Σ a_n log^α(n+2)/(n+1)` for nonincreasing nonnegative `a`.
pub fn s_alpha(a: &[f64], alpha: f64) -> Result<CriterionValue> {
    if let Some(index) = monotone_check(a).first_violation {
        return Err(Error::Precondition {
            index,
            reason: "coefficients must be nonnegative and nonincreasing",
        });
    }
    let value = crate::sum::sum(a.iter().enumerate().map(|(n, x)| x * log_factor(n, alpha)));
    Ok(CriterionValue {
        value,
        in_scope: alpha >= -1.0,
    })
}

/// `Σ ĝ(n) log^{α+1}(n+2)/(n+1)` for nonnegative coefficients.
pub fn k_alpha(g: &CoefficientSeries, alpha: f64) -> Result<CriterionValue> {
    let mut acc = CompensatedSum::new();
    for (n, c) in g.coeffs().iter().enumerate() {
        if c.im != 0.0 || c.re < 0.0 {
            return Err(Error::Precondition {
                index: n,
                reason: "coefficients must be real and nonnegative",
            });
        }
        acc.add(c.re * log_factor(n, alpha + 1.0));
    }
    Ok(CriterionValue {
        value: acc.value(),
        in_scope: alpha > -1.0,
    })
}

/// `Σ_{n=0}^k log^α(n+2)/(n+1)`.
pub fn log_sum(k: usize, alpha: f64) -> f64 {
    crate::sum::sum((0..=k).map(|n| log_factor(n, alpha)))
}

fn block_means(quad: &Quadrature, f: &CoefficientSeries, p: f64, frame: &Frame) -> Result<Vec<f64>> {
    frame.check_covers(f)?;
    frame
        .blocks()
        .iter()
        .map(|b| Ok(quad.mean_at_gap(&b.apply(f), 0.0, p)?.value))
        .collect()
}

/// `Σ_n (n+1)^α ‖V_n * f‖_1`.
pub fn frame_norm_b1(quad: &Quadrature, f: &CoefficientSeries, alpha: f64, frame: &Frame) -> Result<f64> {
    let m = block_means(quad, f, 1.0, frame)?;
    Ok(crate::sum::sum(
        m.iter().enumerate().map(|(n, v)| (n as f64 + 1.0).powf(alpha) * v),
    ))
}

/// `sup_n (n+1)^{-α} ‖V_n * f‖_∞`.
pub fn frame_norm_bloch(quad: &Quadrature, f: &CoefficientSeries, alpha: f64, frame: &Frame) -> Result<f64> {
    Ok(little_bloch_profile(quad, f, alpha, frame)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `(n+1)^{-α} ‖V_n * f‖_∞` for `n = 0..=n_max`.
pub fn little_bloch_profile(
    quad: &Quadrature,
    f: &CoefficientSeries,
    alpha: f64,
    frame: &Frame,
) -> Result<Vec<f64>> {
    let m = block_means(quad, f, f64::INFINITY, frame)?;
    Ok(m.iter()
        .enumerate()
        .map(|(n, v)| (n as f64 + 1.0).powf(-alpha) * v)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogLogMode {
    /// `Σ log(n+2) ‖V_n * f‖_1`.
    B1,
    /// `sup ‖V_n * f‖_∞ / log(n+2)`.
    Bloch,
}

pub fn frame_norm_loglog(
    quad: &Quadrature,
    f: &CoefficientSeries,
    mode: LogLogMode,
    frame: &Frame,
) -> Result<f64> {
    let weight = |n: usize| (n as f64 + 2.0).ln();
    Ok(match mode {
        LogLogMode::B1 => {
            let m = block_means(quad, f, 1.0, frame)?;
            crate::sum::sum(m.iter().enumerate().map(|(n, v)| weight(n) * v))
        }
        LogLogMode::Bloch => block_means(quad, f, f64::INFINITY, frame)?
            .iter()
            .enumerate()
            .map(|(n, v)| v / weight(n))
            .fold(0.0, f64::max),
    })
}
