//! Integral means `M_p(r, f)`, Hardy norms and the radial norms built on them.
//!
//! Radial integrals use `u = ln(2/(1-r))`, so `1 - r = 2e^{-u}` and
//! `dr = (1 - r) du`. All weights are evaluated from the gap `1 - r`, never
//! from `r`, which keeps them accurate right up to the boundary.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::fft::{circle_values, odd_circle_values, Twiddles};
use crate::gauss::kronrod15;
use crate::series::CoefficientSeries;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Relative change between `K/2` and `K` samples at which `K` stops doubling.
    pub circle_rtol: f64,
    /// Largest `K` reached by doubling.
    pub circle_cap: usize,
    /// Oversampling factor used to seed the sup search on the circle.
    pub sup_oversampling: usize,
    /// Most local maxima refined per sup evaluation.
    pub sup_candidates: usize,
    /// Dyadic refinement rounds around the radial maximiser.
    pub sup_refinements: usize,
    /// Panel width in `u` before the boundary layer.
    pub panel_width: f64,
    /// Main grid stops at `1 - r = 2^{-boundary_bits}`.
    pub boundary_bits: u32,
    /// Terms with `r^n < 2^{-truncation_bits}` are dropped inside the disk.
    pub truncation_bits: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            circle_rtol: 1e-9,
            circle_cap: 1 << 18,
            sup_oversampling: 8,
            sup_candidates: 32,
            sup_refinements: 3,
            panel_width: 1.0,
            boundary_bits: 40,
            truncation_bits: 80,
        }
    }
}

/// A computed norm with quadrature metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormResult {
    pub value: f64,
    pub radial_points: usize,
    pub circle_points: usize,
    pub est_error: f64,
}

/// One integral mean with the sample count that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValue {
    pub value: f64,
    pub samples: usize,
    /// Relative change against the `K/2` estimate (0 when exact).
    pub rel_change: f64,
}

/// `φ` with exponents `0 < β <= γ` such that `φ(x)/x^γ` is nonincreasing
/// and `φ(x)/x^β` nondecreasing on `(0, 1]`.
#[derive(Clone)]
pub struct NormalFunction {
    phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    beta: f64,
    gamma: f64,
    description: String,
}

impl fmt::Debug for NormalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalFunction")
            .field("description", &self.description)
            .field("beta", &self.beta)
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl NormalFunction {
    pub fn new<F>(description: impl Into<String>, beta: f64, gamma: f64, phi: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(beta > 0.0 && gamma > 0.0) {
            return Err(Error::Domain("normal exponents must be positive"));
        }
        Ok(Self {
            phi: Arc::new(phi),
            beta,
            gamma,
            description: description.into(),
        })
    }

    /// `x^s`, normal with `β = γ = s`.
    pub fn power(s: f64) -> Result<Self> {
        Self::new(format!("x^{s}"), s, s, move |x: f64| x.powf(s))
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.phi)(x)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// A radial weight on `[0, 1)`.
#[derive(Debug, Clone)]
pub enum WeightSpec {
    /// `log^α(2/(1-r))`.
    LogAlpha(f64),
    /// `log log(4/(1-r))`.
    LogLog,
    /// `φ(1-r)/(1-r)`.
    Normal(NormalFunction),
}

impl WeightSpec {
    /// Weight at gap `x = 1 - r`, `0 < x <= 1`.
    pub fn at_gap(&self, x: f64) -> f64 {
        match self {
            WeightSpec::LogAlpha(a) => (2.0 / x).ln().powf(*a),
            WeightSpec::LogLog => (4.0 / x).ln().ln(),
            WeightSpec::Normal(phi) => phi.eval(x) / x,
        }
    }

    pub fn at(&self, r: f64) -> f64 {
        self.at_gap(1.0 - r)
    }

    pub fn describe(&self) -> String {
        match self {
            WeightSpec::LogAlpha(a) => format!("log_alpha({a})"),
            WeightSpec::LogLog => String::from("loglog"),
            WeightSpec::Normal(phi) => format!(
                "normal({}, beta={}, gamma={})",
                phi.description, phi.beta, phi.gamma
            ),
        }
    }
}

/// Composite Gauss–Kronrod 7/15 rule in `u = ln(2/(1-r))`.
///
/// The main nodes cover `u_start <= u <= u_max` (`r < 1`, strictly
/// increasing). Beyond `u_max` a short tail rule is kept separately; callers
/// evaluate integrands there with boundary values.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    u: Vec<f64>,
    gap: Vec<f64>,
    wk: Vec<f64>,
    wg: Vec<f64>,
    tail_u: Vec<f64>,
    tail_gap: Vec<f64>,
    tail_wk: Vec<f64>,
    tail_wg: Vec<f64>,
    u_start: f64,
    u_max: f64,
}

const TAIL_LENGTH: f64 = 40.0;

impl RadialGrid {
    /// Grid on `[0, 1)` adapted to polynomials of the given degree.
    pub fn new(degree: usize, config: &QuadratureConfig) -> Self {
        Self::starting_at(0.0, degree, config, false)
    }

    /// Grid on `[r0, 1)`. With `graded`, panels are refined geometrically
    /// toward `r0` to absorb integrable endpoint singularities.
    pub fn starting_at(r0: f64, degree: usize, config: &QuadratureConfig, graded: bool) -> Self {
        let u_start = (2.0 / (1.0 - r0)).ln();
        let u_max = LN_2 * (1.0 + config.boundary_bits as f64);
        let knee = (2.0 * (degree as f64 + 1.0)).ln() + 6.0;
        let mut edges = Vec::new();
        let mut a = u_start;
        if graded && u_start < u_max {
            let w = config.panel_width.min(u_max - u_start);
            edges.push(a);
            for j in (1..40).rev() {
                edges.push(u_start + w * 0.5.powi(j));
            }
            a = u_start + w;
            if a >= u_max {
                edges.push(a);
            }
        }
        if a < u_max {
            edges.push(a);
            let mut width = config.panel_width;
            while a < u_max {
                if a >= knee {
                    width *= 2.0;
                }
                a = (a + width).min(u_max);
                edges.push(a);
            }
        }
        let mut grid = Self {
            u: Vec::new(),
            gap: Vec::new(),
            wk: Vec::new(),
            wg: Vec::new(),
            tail_u: Vec::new(),
            tail_gap: Vec::new(),
            tail_wk: Vec::new(),
            tail_wg: Vec::new(),
            u_start,
            u_max,
        };
        let rule = kronrod15();
        for e in edges.windows(2) {
            let (half, mid) = (0.5 * (e[1] - e[0]), 0.5 * (e[1] + e[0]));
            for &(x, k, g) in &rule {
                let u = mid + half * x;
                grid.u.push(u);
                grid.gap.push(2.0 * (-u).exp());
                grid.wk.push(k * half);
                grid.wg.push(g * half);
            }
        }
        let t0 = u_start.max(u_max);
        let n_tail = 4;
        let w = TAIL_LENGTH / n_tail as f64;
        for i in 0..n_tail {
            let (half, mid) = (0.5 * w, t0 + (i as f64 + 0.5) * w);
            for &(x, k, g) in &rule {
                let u = mid + half * x;
                grid.tail_u.push(u);
                grid.tail_gap.push(2.0 * (-u).exp());
                grid.tail_wk.push(k * half);
                grid.tail_wg.push(g * half);
            }
        }
        grid
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Radii of the main nodes, strictly increasing and below 1.
    pub fn nodes(&self) -> Vec<f64> {
        self.gap.iter().map(|x| 1.0 - x).collect()
    }

    /// Gaps `1 - r` of the main nodes.
    pub fn gaps(&self) -> &[f64] {
        &self.gap
    }

    pub fn u_nodes(&self) -> &[f64] {
        &self.u
    }

    /// Weights for `∫ dr` at the main nodes.
    pub fn weights(&self) -> Vec<f64> {
        self.wk.iter().zip(&self.gap).map(|(w, x)| w * x).collect()
    }

    pub fn u_start(&self) -> f64 {
        self.u_start
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn transform(&self) -> &'static str {
        "u = ln(2/(1-r)), composite Gauss-Kronrod 7/15 in u, tail beyond 1-r = 2^-40"
    }

    /// `∫_{r0}^1 f(r) dr` with an embedded error estimate. `f` receives the
    /// gap `1 - r`; `tail` is used beyond the main nodes.
    pub fn integrate<F, T>(&self, mut f: F, mut tail: T) -> (f64, f64)
    where
        F: FnMut(usize, f64) -> f64,
        T: FnMut(f64) -> f64,
    {
        let mut fine = CompensatedSum::new();
        let mut coarse = CompensatedSum::new();
        for (i, &x) in self.gap.iter().enumerate() {
            let v = f(i, x) * x;
            fine.add(self.wk[i] * v);
            coarse.add(self.wg[i] * v);
        }
        for (i, &x) in self.tail_gap.iter().enumerate() {
            let v = tail(x) * x;
            fine.add(self.tail_wk[i] * v);
            coarse.add(self.tail_wg[i] * v);
        }
        (fine.value(), (fine.value() - coarse.value()).abs())
    }
}

/// `M_p(r_i, g)` at every node of a radial grid, plus the boundary mean.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    grid: RadialGrid,
    p: f64,
    function: CoefficientSeries,
    origin: f64,
    means: Vec<MeanValue>,
    boundary: MeanValue,
}

impl RadialProfile {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// The profiled function (`f′` for derivative profiles).
    pub fn function(&self) -> &CoefficientSeries {
        &self.function
    }

    /// `|f(0)|` for derivative profiles, otherwise 0.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn means(&self) -> &[MeanValue] {
        &self.means
    }

    pub fn boundary(&self) -> MeanValue {
        self.boundary
    }

    pub fn circle_points(&self) -> usize {
        self.means
            .iter()
            .map(|m| m.samples)
            .chain(core::iter::once(self.boundary.samples))
            .max()
            .unwrap_or(0)
    }

    /// `2∫ M_p(r) w(r) r dr` over the profiled range, with error estimate.
    pub fn weighted_area(&self, weight: &WeightSpec) -> (f64, f64) {
        let m1 = self.boundary.value;
        let (value, quad_err) = self.grid.integrate(
            |i, x| 2.0 * self.means[i].value * weight.at_gap(x) * (1.0 - x),
            |x| 2.0 * m1 * weight.at_gap(x) * (1.0 - x),
        );
        let mut circle_err = CompensatedSum::new();
        for (i, m) in self.means.iter().enumerate() {
            let x = self.grid.gap[i];
            circle_err.add(self.grid.wk[i] * x * 2.0 * m.value * m.rel_change * weight.at_gap(x));
        }
        (value, quad_err + circle_err.value().abs())
    }
}

/// Outcome of [`Quadrature::normality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub normal: bool,
    /// Grid index and failing condition for the first violation.
    pub first_violation: Option<(usize, &'static str)>,
    pub grid_size: usize,
    pub min_gap: f64,
}

/// Signs of the `(1-r)^{±1/q}` factors on the sup and sum sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapExponents {
    /// `-1/q` on the sup side, `+1/q` on the sum side.
    Printed,
    /// `+1/q` on the sup side, `-1/q` on the sum side.
    Swapped,
    /// `-1/q` on both sides.
    Uniform,
}

impl GapExponents {
    fn signs(self) -> (f64, f64) {
        match self {
            GapExponents::Printed => (-1.0, 1.0),
            GapExponents::Swapped => (1.0, -1.0),
            GapExponents::Uniform => (-1.0, -1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GapExponents::Printed => "printed",
            GapExponents::Swapped => "swapped",
            GapExponents::Uniform => "uniform",
        }
    }
}

/// The three quantities compared by the dyadic discretization of weighted
/// `L^q` norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationSides {
    pub sup_side: f64,
    pub sum_side: f64,
    pub sequence: f64,
}

/// Integral means and radial norms. Holds the configuration and the circle
/// twiddle table, so one instance should be shared across evaluations.
#[derive(Debug, Clone)]
pub struct Quadrature {
    config: QuadratureConfig,
    twiddles: Twiddles,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(QuadratureConfig::default())
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain("exponent p must be positive"))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain("radius must lie in [0, 1]"))
    }
}

fn power_sum(vals: &[Complex64], p: f64, step: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in vals.iter().step_by(step) {
        let a = if p == 1.0 {
            v.norm()
        } else if p == 2.0 {
            v.norm_sqr()
        } else {
            v.norm_sqr().powf(0.5 * p)
        };
        acc.add(a);
    }
    acc.value()
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// `A = Σ b_j z^j`, `B = Σ j b_j z^j`, `C = Σ j² b_j z^j`.
fn horner3(b: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64) {
    let (mut a, mut d1, mut d2) = (Complex64::zero(), Complex64::zero(), Complex64::zero());
    for (j, c) in b.iter().enumerate().rev() {
        let j = j as f64;
        a = a * z + c;
        d1 = d1 * z + c * j;
        d2 = d2 * z + c * (j * j);
    }
    (a, d1, d2)
}

/// Local maximum of `|P(e^{iθ})|²` near `theta`, within `±h`.
fn refine_peak(b: &[Complex64], theta: f64, h: f64, g_prev: f64, g0: f64, g_next: f64) -> f64 {
    let denom = g_prev - 2.0 * g0 + g_next;
    let mut t = theta;
    if denom < 0.0 {
        t += 0.5 * h * (g_prev - g_next) / denom;
    }
    let mut best = g0;
    for _ in 0..8 {
        let (a, d1, d2) = horner3(b, Complex64::from_polar(1.0, t));
        let g = a.norm_sqr();
        best = best.max(g);
        let g1 = -2.0 * (a.conj() * d1).im;
        let g2 = 2.0 * (d1.norm_sqr() - (a.conj() * d2).re);
        if g2 >= 0.0 {
            break;
        }
        let step = g1 / g2;
        let next = t - step;
        if (next - theta).abs() > h {
            break;
        }
        t = next;
        if step.abs() < 1e-14 {
            let g = crate::series::horner(b, Complex64::from_polar(1.0, t)).norm_sqr();
            best = best.max(g);
            break;
        }
    }
    best
}

impl Quadrature {
    pub fn new(config: QuadratureConfig) -> Self {
        let size = config.circle_cap.next_power_of_two().max(2);
        Self {
            twiddles: Twiddles::new(size),
            config,
        }
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    /// `c_n r^n` restricted to the support, with `r = 1 - gap`. Returns the
    /// lowest retained index and the shifted coefficients.
    /// Coefficients of `f(rz)/(rz)^s`, `s` the lowest nonzero index, cut
    /// where `r^j` drops below `2^{-truncation_bits}`. Returns them with
    /// `ln r^s`.
    fn prepare(&self, coeffs: &[Complex64], gap: f64) -> (Vec<Complex64>, f64) {
        let Some(last) = coeffs.iter().rposition(|c| !c.is_zero()) else {
            return (Vec::new(), 0.0);
        };
        if gap >= 1.0 {
            return (vec![coeffs[0]], 0.0);
        }
        let shift = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let mut end = last;
        let log_r = (-gap).ln_1p();
        if gap > 0.0 {
            let cut = (self.config.truncation_bits as f64 * LN_2 / -log_r).ceil();
            if cut < (end - shift) as f64 {
                end = shift + cut as usize;
            }
        }
        let src = &coeffs[shift..=end];
        if gap == 0.0 {
            return (src.to_vec(), 0.0);
        }
        let r = 1.0 - gap;
        let mut pw = 1.0;
        let scaled = src
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j % 64 == 0 {
                    pw = (j as f64 * log_r).exp();
                }
                let v = c * pw;
                pw *= r;
                v
            })
            .collect();
        (scaled, shift as f64 * log_r)
    }

    fn mean_prepared(&self, b: &[Complex64], p: f64) -> Result<MeanValue> {
        let out = match b.len() {
            0 => MeanValue {
                value: 0.0,
                samples: 1,
                rel_change: 0.0,
            },
            1 => MeanValue {
                value: b[0].norm(),
                samples: 1,
                rel_change: 0.0,
            },
            len if p.is_infinite() => self.sup_prepared(b, len),
            len => {
                let mut k = (2 * len).next_power_of_two().max(4);
                let vals = circle_values(b, k, &self.twiddles);
                let mut total = power_sum(&vals, p, 1);
                let mut coarse = power_sum(&vals, p, 2) / (k / 2) as f64;
                loop {
                    let full = total / k as f64;
                    if p == 2.0 {
                        break MeanValue {
                            value: full.sqrt(),
                            samples: k,
                            rel_change: 0.0,
                        };
                    }
                    let (v_full, v_coarse) = (full.powf(1.0 / p), coarse.powf(1.0 / p));
                    let change = rel_diff(v_full, v_coarse);
                    if change < self.config.circle_rtol || k >= self.config.circle_cap {
                        break MeanValue {
                            value: v_full,
                            samples: k,
                            rel_change: change,
                        };
                    }
                    let odd = odd_circle_values(b, k, &self.twiddles);
                    coarse = full;
                    total += power_sum(&odd, p, 1);
                    k *= 2;
                }
            }
        };
        if out.value.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite("integral mean"))
        }
    }

    /// `max |P|` on the unit circle: oversampled FFT, then Newton refinement
    /// of every sampled local maximum that can still hold the maximum.
    fn sup_prepared(&self, b: &[Complex64], len: usize) -> MeanValue {
        let k = (self.config.sup_oversampling * len).next_power_of_two().max(8);
        let vals = circle_values(b, k, &self.twiddles);
        let g: Vec<f64> = vals.iter().map(|v| v.norm_sqr()).collect();
        let sample_max = g.iter().cloned().fold(0.0, f64::max);
        // A real trigonometric polynomial of degree d stays above M cos(d t)
        // within t of its maximum M.
        let d = (len - 1) as f64;
        let h = 2.0 * PI / k as f64;
        let floor = sample_max * (0.5 * d * h).min(0.5 * PI).cos();
        let mut peaks: Vec<usize> = (0..k)
            .filter(|&j| {
                let prev = g[(j + k - 1) % k];
                let next = g[(j + 1) % k];
                g[j] >= floor && g[j] >= prev && g[j] >= next
            })
            .collect();
        peaks.sort_by(|&a, &b| g[b].total_cmp(&g[a]).then(a.cmp(&b)));
        peaks.truncate(self.config.sup_candidates);
        let mut best = sample_max;
        for j in peaks {
            let theta = h * j as f64;
            let v = refine_peak(b, theta, h, g[(j + k - 1) % k], g[j], g[(j + 1) % k]);
            best = best.max(v);
        }
        MeanValue {
            value: best.sqrt(),
            samples: k,
            rel_change: 0.0,
        }
    }

    /// `M_p(r, f)` from exactly `k` uniform samples; `p = ∞` takes the sample
    /// maximum.
    pub fn integral_mean(&self, f: &CoefficientSeries, r: f64, p: f64, k: usize) -> Result<f64> {
        check_p(p)?;
        check_radius(r)?;
        let required = 2 * f.degree() + 2;
        if k < required || !k.is_power_of_two() {
            return Err(Error::Resolution {
                samples: k,
                required: required.next_power_of_two(),
            });
        }
        let b = crate::series::scaled_by_powers(f.coeffs(), r);
        let vals = circle_values(&b, k, &self.twiddles);
        let v = if p.is_infinite() {
            vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
        } else {
            (power_sum(&vals, p, 1) / k as f64).powf(1.0 / p)
        };
        Ok(v)
    }

    /// `M_p(r, f)` with `K` chosen adaptively.
    pub fn mean(&self, f: &CoefficientSeries, r: f64, p: f64) -> Result<MeanValue> {
        check_p(p)?;
        check_radius(r)?;
        self.mean_at_gap(f, 1.0 - r, p)
    }

    /// `M_p(1 - gap, f)`; preferred near the boundary.
    pub fn mean_at_gap(&self, f: &CoefficientSeries, gap: f64, p: f64) -> Result<MeanValue> {
        check_p(p)?;
        if !(0.0..=1.0).contains(&gap) {
            return Err(Error::Domain("radius must lie in [0, 1]"));
        }
        let (b, log_scale) = self.prepare(f.coeffs(), gap);
        let mut m = self.mean_prepared(&b, p)?;
        if log_scale != 0.0 {
            m.value *= log_scale.exp();
        }
        Ok(m)
    }

    /// `‖f‖_{H^p} = M_p(1, f)` for polynomials.
    pub fn hardy_norm(&self, f: &CoefficientSeries, p: f64) -> Result<NormResult> {
        let m = self.mean_at_gap(f, 0.0, p)?;
        Ok(NormResult {
            value: m.value,
            radial_points: 1,
            circle_points: m.samples,
            est_error: m.value * m.rel_change,
        })
    }

    /// `M_p(·, g)` on the nodes of `grid`.
    pub fn profile(
        &self,
        g: &CoefficientSeries,
        p: f64,
        grid: RadialGrid,
    ) -> Result<RadialProfile> {
        check_p(p)?;
        let means = grid
            .gap
            .iter()
            .map(|&x| self.mean_at_gap(g, x, p))
            .collect::<Result<Vec<_>>>()?;
        let boundary = self.mean_at_gap(g, 0.0, p)?;
        Ok(RadialProfile {
            grid,
            p,
            function: g.clone(),
            origin: 0.0,
            means,
            boundary,
        })
    }

    /// Profile of `M_p(r, f′)` on `[0, 1)`, carrying `|f(0)|`.
    pub fn derivative_profile(&self, f: &CoefficientSeries, p: f64) -> Result<RadialProfile> {
        let d = f.derivative();
        let grid = RadialGrid::new(d.degree(), &self.config);
        let mut prof = self.profile(&d, p, grid)?;
        prof.origin = f.coeff(0).norm();
        Ok(prof)
    }

    /// `|f(0)| + sup_r (1-r) M_∞(r, f′) / w(r)`.
    pub fn bloch_norm(&self, f: &CoefficientSeries, weight: &WeightSpec) -> Result<NormResult> {
        let prof = self.derivative_profile(f, f64::INFINITY)?;
        self.bloch_norm_from(&prof, weight)
    }

    pub fn bloch_log_norm(&self, f: &CoefficientSeries, alpha: f64) -> Result<NormResult> {
        self.bloch_norm(f, &WeightSpec::LogAlpha(alpha))
    }

    /// Bloch-type norm from a precomputed `p = ∞` derivative profile.
    pub fn bloch_norm_from(&self, prof: &RadialProfile, weight: &WeightSpec) -> Result<NormResult> {
        if !prof.p.is_infinite() {
            return Err(Error::Domain("Bloch norms need a p = infinity profile"));
        }
        let g = &prof.function;
        let mut samples = prof.circle_points();
        let mut evals = Vec::with_capacity(prof.grid.len() + 1);
        let x0 = 2.0 * (-prof.grid.u_start).exp();
        let m0 = self.mean_at_gap(g, x0, f64::INFINITY)?;
        evals.push((prof.grid.u_start, x0 * m0.value / weight.at_gap(x0)));
        for (i, m) in prof.means.iter().enumerate() {
            let x = prof.grid.gap[i];
            evals.push((prof.grid.u[i], x * m.value / weight.at_gap(x)));
        }
        let grid_best = evals.iter().map(|e| e.1).fold(0.0, f64::max);
        let mut count = evals.len();
        let mut supremand = |u: f64| -> Result<f64> {
            let x = 2.0 * (-u).exp();
            let m = self.mean_at_gap(g, x, f64::INFINITY)?;
            samples = samples.max(m.samples);
            count += 1;
            Ok(x * m.value / weight.at_gap(x))
        };
        let best = refine_sup(&mut evals, self.config.sup_refinements, &mut supremand)?;
        if !best.is_finite() {
            return Err(Error::NonFinite("Bloch supremand"));
        }
        Ok(NormResult {
            value: prof.origin + best,
            radial_points: count,
            circle_points: samples,
            est_error: best - grid_best,
        })
    }

    /// `|f(0)| + 2∫_0^1 M_1(r, f′) w(r) r dr`.
    pub fn bloch1_log_norm(&self, f: &CoefficientSeries, weight: &WeightSpec) -> Result<NormResult> {
        let prof = self.derivative_profile(f, 1.0)?;
        self.bloch1_norm_from(&prof, weight)
    }

    /// Weighted-area norm from a precomputed `p = 1` derivative profile.
    pub fn bloch1_norm_from(&self, prof: &RadialProfile, weight: &WeightSpec) -> Result<NormResult> {
        if prof.p != 1.0 {
            return Err(Error::Domain("area norms need a p = 1 profile"));
        }
        let (area, err) = prof.weighted_area(weight);
        if !area.is_finite() {
            return Err(Error::NonFinite("weighted area"));
        }
        Ok(NormResult {
            value: prof.origin + area,
            radial_points: prof.grid.len() + prof.grid.tail_u.len(),
            circle_points: prof.circle_points(),
            est_error: err,
        })
    }

    /// `∫_r^1 M_p(s, g) ds`.
    pub fn radial_mean_integral(&self, g: &CoefficientSeries, r: f64, p: f64) -> Result<NormResult> {
        check_radius(r)?;
        if r == 1.0 {
            return Ok(NormResult {
                value: 0.0,
                radial_points: 0,
                circle_points: 0,
                est_error: 0.0,
            });
        }
        let grid = RadialGrid::starting_at(r, g.degree(), &self.config, false);
        let prof = self.profile(g, p, grid)?;
        let m1 = prof.boundary.value;
        let (v, e) = prof.grid.integrate(|i, _| prof.means[i].value, |_| m1);
        Ok(NormResult {
            value: v,
            radial_points: prof.grid.len(),
            circle_points: prof.circle_points(),
            est_error: e,
        })
    }

    /// Checks `φ(x)/x^γ` nonincreasing and `φ(x)/x^β` nondecreasing on a
    /// geometric grid of `(0, 1]`.
    pub fn normality_check<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        beta: f64,
        gamma: f64,
        grid_size: usize,
    ) -> Result<NormalityReport> {
        if !(beta > 0.0 && gamma > 0.0) {
            return Err(Error::Domain("normal exponents must be positive"));
        }
        let n = grid_size.max(2);
        let lo = 1e-12f64.ln();
        let xs: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 == n {
                    1.0
                } else {
                    (lo * (1.0 - i as f64 / (n - 1) as f64)).exp()
                }
            })
            .collect();
        let mut upper = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        for &x in &xs {
            let v = phi(x);
            if !v.is_finite() {
                return Err(Error::NonFinite("normal function value"));
            }
            upper.push(v / x.powf(gamma));
            lower.push(v / x.powf(beta));
        }
        const TOL: f64 = 1e-9;
        let mut first = None;
        for i in 0..n - 1 {
            let scale_u = upper[i].abs().max(upper[i + 1].abs()).max(f64::MIN_POSITIVE);
            if upper[i + 1] - upper[i] > TOL * scale_u {
                first = Some((i, "phi(x)/x^gamma increases"));
                break;
            }
            let scale_l = lower[i].abs().max(lower[i + 1].abs()).max(f64::MIN_POSITIVE);
            if lower[i] - lower[i + 1] > TOL * scale_l {
                first = Some((i, "phi(x)/x^beta decreases"));
                break;
            }
        }
        Ok(NormalityReport {
            normal: first.is_none(),
            first_violation: first,
            grid_size: n,
            min_gap: xs[0],
        })
    }

    /// `(‖F₁‖_{L^q}, ‖F₂‖_{L^q}, ‖{φ(2^{-n}) λ_n}‖_{ℓ^q})` with
    /// `F₁(r) = (1-r)^{-1/q} φ(1-r) sup_{n>=1} λ_n r^{2^{n+1}-1}` and
    /// `F₂(r) = (1-r)^{1/q} φ(1-r) Σ_n λ_n r^{2^{n-1}-1}`.
    pub fn discretization_sides<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        q: f64,
        lambda: &[f64],
    ) -> Result<DiscretizationSides> {
        self.discretization_sides_with(phi, q, lambda, GapExponents::Printed)
    }

    /// As [`Self::discretization_sides`] with the gap exponents exchanged
    /// (`+1/q` on the sup side, `-1/q` on the sum side).
    pub fn discretization_sides_swapped<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        q: f64,
        lambda: &[f64],
    ) -> Result<DiscretizationSides> {
        self.discretization_sides_with(phi, q, lambda, GapExponents::Swapped)
    }

    pub fn discretization_sides_with<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        q: f64,
        lambda: &[f64],
        exponents: GapExponents,
    ) -> Result<DiscretizationSides> {
        let (sup, sum) = exponents.signs();
        self.discretization_sides_signed(phi, q, lambda, sup, sum)
    }

    fn discretization_sides_signed<F: Fn(f64) -> f64>(
        &self,
        phi: F,
        q: f64,
        lambda: &[f64],
        sign_sup: f64,
        sign_sum: f64,
    ) -> Result<DiscretizationSides> {
        if !(q > 0.0) {
            return Err(Error::Domain("q must be positive"));
        }
        if lambda.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::Domain("lambda must be finite and nonnegative"));
        }
        let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
        let seq_terms: Vec<f64> = lambda
            .iter()
            .enumerate()
            .map(|(n, l)| phi(0.5f64.powi(n as i32)) * l)
            .collect();
        let sequence = if q.is_infinite() {
            seq_terms.iter().cloned().fold(0.0, f64::max)
        } else {
            crate::sum::sum(seq_terms.iter().map(|t| t.powf(q))).powf(inv_q)
        };
        if lambda.iter().all(|&l| l == 0.0) {
            return Ok(DiscretizationSides {
                sup_side: 0.0,
                sum_side: 0.0,
                sequence,
            });
        }
        let sup_part = |x: f64| -> f64 {
            let log_r = (-x).ln_1p();
            lambda
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, l)| l * (((1u64 << (n + 1)) - 1) as f64 * log_r).exp())
                .fold(0.0, f64::max)
        };
        let sum_part = |x: f64| -> f64 {
            let log_r = (-x).ln_1p();
            crate::sum::sum(lambda.iter().enumerate().map(|(n, l)| {
                let e = if n == 0 { -0.5 } else { ((1u64 << (n - 1)) - 1) as f64 };
                if *l == 0.0 {
                    0.0
                } else {
                    l * (e * log_r).exp()
                }
            }))
        };
        let f1 = |x: f64| x.powf(sign_sup * inv_q) * phi(x) * sup_part(x);
        let f2 = |x: f64| x.powf(sign_sum * inv_q) * phi(x) * sum_part(x);
        let degree = 1usize << lambda.len().min(40);
        let (sup_side, sum_side) = if q.is_infinite() {
            let grid = RadialGrid::new(degree, &self.config);
            let sup_of = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
                let mut evals: Vec<(f64, f64)> =
                    grid.u.iter().zip(&grid.gap).map(|(&u, &x)| (u, f(x))).collect();
                refine_sup(&mut evals, DISCRETE_SUP_ROUNDS, &mut |u: f64| {
                    Ok(f(2.0 * (-u).exp()))
                })
            };
            let s1 = sup_of(&f1)?;
            let s2 = if lambda[0] > 0.0 { f64::INFINITY } else { sup_of(&f2)? };
            (s1, s2)
        } else {
            let grid = RadialGrid::starting_at(0.0, degree, &self.config, true);
            let (i1, _) = grid.integrate(|_, x| f1(x).powf(q), |x| f1(x).powf(q));
            let (i2, _) = grid.integrate(|_, x| f2(x).powf(q), |x| f2(x).powf(q));
            (i1.powf(inv_q), i2.powf(inv_q))
        };
        Ok(DiscretizationSides {
            sup_side,
            sum_side,
            sequence,
        })
    }

    /// `(∫_0^1 φ(1-r)/(1-r) r^n dr, φ(1/(n+1)))`.
    pub fn normal_weight_moment_bound<F: Fn(f64) -> f64>(&self, phi: F, n: usize) -> (f64, f64) {
        let grid = RadialGrid::new(n, &self.config);
        let moment = |x: f64| phi(x) / x * (n as f64 * (-x).ln_1p()).exp();
        let (v, _) = grid.integrate(|_, x| moment(x), moment);
        (v, phi(1.0 / (n as f64 + 1.0)))
    }
}

/// Closed-form supremands are cheap, so their sup is bisected to convergence.
const DISCRETE_SUP_ROUNDS: usize = 48;

/// Maximises over sampled `(u, value)` pairs, then bisects toward the best
/// sample's neighbours for `rounds` rounds.
fn refine_sup<F>(evals: &mut [(f64, f64)], rounds: usize, f: &mut F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if evals.is_empty() {
        return Ok(0.0);
    }
    evals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let argmax = |e: &[(f64, f64)]| {
        let mut k = 0;
        for (i, v) in e.iter().enumerate() {
            if v.1 > e[k].1 {
                k = i;
            }
        }
        k
    };
    let mut k = argmax(evals);
    let mut left = if k > 0 { Some(evals[k - 1].0) } else { None };
    let mut right = evals.get(k + 1).map(|e| e.0);
    let (mut u_best, mut v_best) = evals[k];
    for _ in 0..rounds {
        let mut cands = Vec::new();
        if let Some(l) = left {
            cands.push(0.5 * (l + u_best));
        }
        if let Some(r) = right {
            cands.push(0.5 * (u_best + r));
        }
        let mut pts = vec![(u_best, v_best)];
        for u in cands {
            pts.push((u, f(u)?));
        }
        if let Some(l) = left {
            pts.push((l, f64::NEG_INFINITY));
        }
        if let Some(r) = right {
            pts.push((r, f64::NEG_INFINITY));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        k = argmax(&pts);
        u_best = pts[k].0;
        v_best = pts[k].1;
        left = if k > 0 { Some(pts[k - 1].0) } else { None };
        right = pts.get(k + 1).map(|e| e.0);
    }
    Ok(v_best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> Quadrature {
        Quadrature::default()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn monomial_means() {
        let q = quad();
        let f = CoefficientSeries::monomial(5);
        for &p in &[0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
            let v = q.integral_mean(&f, 0.7, p, 16).unwrap();
            assert!((v - 0.7f64.powi(5)).abs() < 1e-14, "p={p} v={v}");
            let a = q.mean(&f, 0.7, p).unwrap().value;
            assert!((a - 0.7f64.powi(5)).abs() < 1e-14, "p={p} a={a}");
        }
    }

    #[test]
    fn high_degree_support_keeps_tiny_means() {
        let q = quad();
        let f = CoefficientSeries::from_fn(1001, |n| c(if n >= 1000 { 1.0 } else { 0.0 })).unwrap();
        let m = q.mean(&f, 0.5, f64::INFINITY).unwrap().value;
        let expect = 0.5f64.powi(1000) * 1.5;
        assert!((m - expect).abs() < 1e-12 * expect, "{m:e}");
    }

    #[test]
    fn sup_of_one_plus_z() {
        let q = quad();
        let f = CoefficientSeries::from_real(&[1.0, 1.0]).unwrap();
        let v = q.integral_mean(&f, 0.3, f64::INFINITY, 4).unwrap();
        assert!((v - 1.3).abs() < 1e-15);
        let a = q.mean(&f, 0.3, f64::INFINITY).unwrap().value;
        assert!((a - 1.3).abs() < 1e-15);
    }

    #[test]
    fn explicit_mean_rejects_bad_input() {
        let q = quad();
        let f = CoefficientSeries::monomial(5);
        assert!(matches!(q.integral_mean(&f, 0.5, 1.0, 8), Err(Error::Resolution { .. })));
        assert!(matches!(q.integral_mean(&f, 0.5, 1.0, 24), Err(Error::Resolution { .. })));
        assert!(matches!(q.integral_mean(&f, 0.5, 0.0, 16), Err(Error::Domain(_))));
        assert!(matches!(q.integral_mean(&f, 1.5, 1.0, 16), Err(Error::Domain(_))));
    }

    #[test]
    fn sup_finds_off_grid_peak() {
        let q = quad();
        // |1 + e^{i(θ - a)} z^0 ...|: rotate 1 + z by an irrational angle.
        let a = 0.123_456_789;
        let f = CoefficientSeries::new(vec![c(1.0), Complex64::from_polar(1.0, -a), c(0.0)]).unwrap();
        let v = q.mean(&f, 1.0, f64::INFINITY).unwrap().value;
        assert!((v - 2.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn bloch_trivial_cases() {
        let q = quad();
        let k = q.bloch_log_norm(&CoefficientSeries::constant(c(-3.0)), 1.5).unwrap();
        assert_eq!(k.value, 3.0);
        let z = q.bloch_log_norm(&CoefficientSeries::monomial(1), 0.0).unwrap();
        assert!((z.value - 1.0).abs() < 1e-15, "{}", z.value);
    }

    #[test]
    fn bloch1_closed_forms() {
        let q = quad();
        let w = WeightSpec::LogAlpha(0.0);
        let k = q.bloch1_log_norm(&CoefficientSeries::constant(c(2.0)), &w).unwrap();
        assert_eq!(k.value, 2.0);
        let z = q.bloch1_log_norm(&CoefficientSeries::monomial(1), &w).unwrap();
        assert!((z.value - 1.0).abs() < 1e-13, "{}", z.value);
        let z2 = q.bloch1_log_norm(&CoefficientSeries::monomial(2), &w).unwrap();
        assert!((z2.value - 4.0 / 3.0).abs() < 1e-13, "{}", z2.value);
        assert!(z2.est_error >= 0.0 && z2.est_error < 1e-10);
    }

    #[test]
    fn weights_from_gap() {
        assert!((WeightSpec::LogAlpha(1.0).at(0.0) - LN_2).abs() < 1e-15);
        assert!((WeightSpec::LogLog.at(0.0) - (4.0f64.ln()).ln()).abs() < 1e-15);
        let n = WeightSpec::Normal(NormalFunction::power(3.0).unwrap());
        assert!((n.at_gap(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn grid_nodes_increase_below_one() {
        let g = RadialGrid::new(8191, &QuadratureConfig::default());
        let nodes = g.nodes();
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(*nodes.last().unwrap() < 1.0);
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn normality_examples() {
        let q = quad();
        assert!(q.normality_check(|x| x, 0.5, 2.0, 200).unwrap().normal);
        let r = q.normality_check(|x| x * x, 1.0, 1.0, 200).unwrap();
        assert!(!r.normal);
        assert!(q.normality_check(|x| x, 0.0, 1.0, 10).is_err());
        assert!(q.normality_check(|_| f64::NAN, 1.0, 1.0, 10).is_err());
    }

    #[test]
    fn moment_bound_power_weight() {
        let q = quad();
        let (v, p) = q.normal_weight_moment_bound(|x| x, 0);
        assert!((v - 1.0).abs() < 1e-12 && p == 1.0);
        let (v, p) = q.normal_weight_moment_bound(|x| x, 7);
        assert!((v - 0.125).abs() < 1e-12 && p == 0.125, "{v}");
    }

    #[test]
    fn discretization_zero_and_single() {
        let q = quad();
        let z = q.discretization_sides(|x| x, 2.0, &[0.0; 6]).unwrap();
        assert_eq!((z.sup_side, z.sum_side, z.sequence), (0.0, 0.0, 0.0));
        assert!(q.discretization_sides(|x| x, 0.0, &[1.0]).is_err());
        let mut lam = [0.0; 6];
        lam[3] = 1.0;
        let s = q.discretization_sides(|x| x, f64::INFINITY, &lam).unwrap();
        assert_eq!(s.sequence, 0.125);
        assert!(s.sup_side > 0.0 && s.sum_side > 0.0);
    }
}
