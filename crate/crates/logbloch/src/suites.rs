//! Ratio suites over seeded test families.
//!
//! Work is split into independent tasks (one per family member and degree,
//! plus family-free tasks per degree). Each task yields tagged ratio
//! samples; samples are merged by sorted `(tag, variant, α)` keys, so the
//! reports do not depend on scheduling.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use logbloch_core::{
    cesaro, ell1_minus1_norm, frame_norm_b1, frame_norm_bloch, frame_norm_loglog, hardy_inequality_gap,
    k_alpha, libera_coeff, libera_derivative_bound_gap, log_sum, pairing, s_alpha, BumpFunction,
    CoefficientSeries, CompensatedSum, Complex64, Frame, GapExponents, LogLogMode, NormalFunction, Quadrature,
    RadialProfile, WeightSpec,
};
use rand::Rng;
use rayon::prelude::*;

use crate::config::VerifyConfig;
use crate::demo::run_configured_demo;
use crate::error::Result;
use crate::families::{task_rng, FamilyKind, FamilyMember, TestFamilySpec};
use crate::report::{sort_reports, DegreeStats, DivergenceReport, EquivalenceReport, PassRule};

/// Tags produced by the equivalence suite.
pub const EQUIVALENCE_TAGS: [&str; 20] = [
    "thm1",
    "thm2",
    "lib_remark",
    "thm7i",
    "thm7iii",
    "thm7_loglog",
    "eq2",
    "eq3",
    "eq4",
    "eq5",
    "rrr",
    "stud",
    "hardy",
    "ineq_li",
    "reform",
    "moment",
    "logsum",
    "thm3a",
    "thm3b",
    "adjoint",
];

/// Tags produced by the operator mapping suite.
pub const MAPPING_TAGS: [&str; 8] = [
    "thm4a",
    "thm4b",
    "assert_c",
    "assert_d",
    "thm5a",
    "thm5b",
    "thm5c",
    "thm6_pairing",
];

const DIVERGENT_VARIANT: &str = "logpower_divergent";
/// `ln` of the smallest radial factor still evaluated in the block bounds.
const LOG_UNDERFLOW: f64 = -600.0;
/// Variant suffix for one-sided mapping checks run on every family.
const ALL_FAMILIES: &str = " all_families";
const REFORM_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy)]
struct Alpha(Option<f64>);

impl PartialEq for Alpha {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Alpha {}

impl PartialOrd for Alpha {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Alpha {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    tag: &'static str,
    variant: String,
    alpha: Alpha,
}

#[derive(Debug, Clone)]
struct Sample {
    key: Key,
    degree: usize,
    value: std::result::Result<f64, String>,
}

type Ratio = std::result::Result<f64, String>;

fn err_string(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Collects samples for one task.
struct Sink {
    degree: usize,
    label: String,
    out: Vec<Sample>,
}

impl Sink {
    fn new(degree: usize, label: String) -> Self {
        Self {
            degree,
            label,
            out: Vec::new(),
        }
    }

    fn push(&mut self, tag: &'static str, variant: impl Into<String>, alpha: Option<f64>, value: Ratio) {
        let value = match value {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            Ok(v) => Err(format!("{}: ratio {v} is not positive and finite", self.label)),
            Err(e) => Err(format!("{}: {e}", self.label)),
        };
        self.out.push(Sample {
            key: Key {
                tag,
                variant: variant.into(),
                alpha: Alpha(alpha),
            },
            degree: self.degree,
            value,
        });
    }

    /// `num/den`; a vanishing pair is skipped.
    fn quotient(&mut self, tag: &'static str, variant: impl Into<String>, alpha: Option<f64>, num: Ratio, den: Ratio) {
        let value = match (num, den) {
            (Ok(n), Ok(d)) if n == 0.0 && d == 0.0 => return,
            (Ok(n), Ok(d)) => Ok(n / d),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        self.push(tag, variant, alpha, value);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Prof {
    F1,
    FInf,
    L1,
    CInf,
}

/// Lazily computed derivative profiles of `f`, `ℒf` and `𝒞f` with memoised norms.
struct Profiles<'a> {
    quad: &'a Quadrature,
    f: &'a CoefficientSeries,
    lf: &'a CoefficientSeries,
    cf: &'a CoefficientSeries,
    cache: HashMap<Prof, std::result::Result<RadialProfile, String>>,
    norms: HashMap<(Prof, String), Ratio>,
}

impl<'a> Profiles<'a> {
    fn profile(&mut self, which: Prof) -> std::result::Result<&RadialProfile, String> {
        let (quad, f, lf, cf) = (self.quad, self.f, self.lf, self.cf);
        self.cache
            .entry(which)
            .or_insert_with(|| {
                let r = match which {
                    Prof::F1 => quad.derivative_profile(f, 1.0),
                    Prof::FInf => quad.derivative_profile(f, f64::INFINITY),
                    Prof::L1 => quad.derivative_profile(lf, 1.0),
                    Prof::CInf => quad.derivative_profile(cf, f64::INFINITY),
                };
                r.map_err(err_string)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn norm(&mut self, which: Prof, weight: &WeightSpec) -> Ratio {
        let key = (which, weight.describe());
        if let Some(v) = self.norms.get(&key) {
            return v.clone();
        }
        let quad = self.quad;
        let v = self.profile(which).and_then(|prof| {
            let r = if prof.exponent().is_infinite() {
                quad.bloch_norm_from(prof, weight)
            } else {
                quad.bloch1_norm_from(prof, weight)
            };
            r.map(|n| n.value).map_err(err_string)
        });
        self.norms.insert(key, v.clone());
        v
    }
}

fn log_alpha(a: f64) -> WeightSpec {
    WeightSpec::LogAlpha(a)
}

fn p_label(p: f64) -> String {
    format!("p={p}")
}

struct Context<'a> {
    config: &'a VerifyConfig,
    quad: Quadrature,
    frames: BTreeMap<usize, Frame>,
    equivalence: bool,
    mapping: bool,
}

enum Task {
    Member { spec: usize, index: usize },
    Eq3,
    Stud { degree: usize },
    Reform { degree: usize },
    Moment { degree: usize },
    LogSum { degree: usize },
}

fn member_samples(ctx: &Context, spec: &TestFamilySpec, index: usize) -> Vec<Sample> {
    let member = spec.member(index);
    let fam = &ctx.config.families;
    let heavy = index < fam.heavy_members;
    let ineq = index < fam.inequality_members;
    let mut sink = Sink::new(spec.degree, format!("{}@{}", member.label(), spec.degree));
    let f = &member.series;
    let lf = libera_coeff(f);
    let cf = cesaro(f);
    let mut prof = Profiles {
        quad: &ctx.quad,
        f,
        lf: &lf,
        cf: &cf,
        cache: HashMap::new(),
        norms: HashMap::new(),
    };
    let frame = &ctx.frames[&spec.degree];
    if ctx.equivalence {
        equivalence_member(ctx, &member, spec, heavy, ineq, frame, &mut prof, &mut sink);
    }
    if ctx.mapping {
        mapping_member(ctx, &member, heavy, &mut prof, &mut sink);
    }
    sink.out
}

#[allow(clippy::too_many_arguments)]
fn equivalence_member(
    ctx: &Context,
    member: &FamilyMember,
    spec: &TestFamilySpec,
    heavy: bool,
    ineq: bool,
    frame: &Frame,
    prof: &mut Profiles,
    sink: &mut Sink,
) {
    let eq = &ctx.config.equivalence;
    let quad = &ctx.quad;
    let f = &member.series;
    let kind = member.kind;

    if kind.is_decreasing() {
        let a = member.real_coeffs();
        for &alpha in &eq.thm1_alphas {
            let s = s_alpha(&a, alpha).map(|v| v.value).map_err(err_string);
            let d = prof.norm(Prof::F1, &log_alpha(alpha));
            sink.quotient("thm1", "s_alpha", Some(alpha), s, d);
        }
    }
    if kind.is_nonnegative() {
        for &alpha in &eq.thm2_alphas {
            let k = k_alpha(f, alpha).map(|v| v.value).map_err(err_string);
            let d = prof.norm(Prof::L1, &log_alpha(alpha));
            sink.quotient("thm2", "k_alpha", Some(alpha), k, d);
        }
        let d = prof.norm(Prof::L1, &log_alpha(-1.0));
        let mut partial = CompensatedSum::new();
        let proof = logbloch_core::sum::sum(f.coeffs().iter().enumerate().map(|(k, c)| {
            partial.add((k as f64 + 2.0).ln().recip() / (k as f64 + 1.0));
            c.re * partial.value() / (k as f64 + 1.0)
        }));
        sink.quotient("lib_remark", "proof", Some(-1.0), Ok(proof), d.clone());
        let printed = logbloch_core::sum::sum(
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c.re / (n as f64 + 4.0).ln().ln()),
        );
        sink.quotient("lib_remark", "printed", Some(-1.0), Ok(printed), d);
    }

    for &alpha in &eq.thm7_alphas {
        let s = frame_norm_b1(quad, f, alpha, frame).map_err(err_string);
        let d = prof.norm(Prof::F1, &log_alpha(alpha));
        sink.quotient("thm7iii", "b1", Some(alpha), s, d);
        if heavy {
            let s = frame_norm_bloch(quad, f, alpha, frame).map_err(err_string);
            let d = prof.norm(Prof::FInf, &log_alpha(alpha));
            sink.quotient("thm7i", "bloch", Some(alpha), s, d);
        }
    }
    let s = frame_norm_loglog(quad, f, LogLogMode::B1, frame).map_err(err_string);
    let d = prof.norm(Prof::F1, &WeightSpec::LogLog);
    sink.quotient("thm7_loglog", "b1", None, s, d);
    if heavy {
        let s = frame_norm_loglog(quad, f, LogLogMode::Bloch, frame).map_err(err_string);
        let d = prof.norm(Prof::FInf, &WeightSpec::LogLog);
        sink.quotient("thm7_loglog", "bloch", None, s, d);
    }

    let ell1 = ell1_minus1_norm(f);
    for &alpha in &eq.thm3b_alphas {
        let d = prof.norm(Prof::F1, &log_alpha(alpha));
        sink.quotient("thm3b", "area", Some(alpha), Ok(ell1), d);
    }
    if let FamilyKind::Logpower { .. } = kind {
        let alpha = eq.thm3b_divergent_alpha;
        let d = prof.norm(Prof::F1, &log_alpha(alpha));
        sink.quotient("thm3b", DIVERGENT_VARIANT, Some(alpha), Ok(ell1), d);
    }
    if heavy {
        for &alpha in &eq.thm3a_alphas {
            let d = prof.norm(Prof::FInf, &log_alpha(alpha));
            sink.quotient("thm3a", "bloch", Some(alpha), Ok(ell1), d);
        }
        block_checks(ctx, f, frame, sink);
    }

    if ineq {
        for &r in &eq.radii {
            let rhs = hardy_rhs(f, r);
            let gap = hardy_inequality_gap(quad, f, r).map_err(err_string);
            sink.push("hardy", format!("r={r}"), None, gap.map(|g| 1.0 + g / rhs));
            let lhs = quad
                .mean(&libera_coeff(f).derivative(), r, 1.0)
                .map(|m| r * m.value)
                .map_err(err_string);
            let gap = libera_derivative_bound_gap(quad, f, r).map_err(err_string);
            let ratio = match (gap, lhs) {
                (Ok(_), Ok(0.0)) => None,
                (Ok(g), Ok(l)) => Some(Ok(1.0 + g / l)),
                (Err(e), _) | (_, Err(e)) => Some(Err(e)),
            };
            if let Some(ratio) = ratio {
                sink.push("ineq_li", format!("r={r}"), None, ratio);
            }
        }
    }

    let mut rng = task_rng(spec.seed, &[0xad, spec.degree as u64, index_of(member)]);
    let g = CoefficientSeries::from_fn(spec.degree, |n| {
        let s = 1.0 / (n as f64 + 1.0).sqrt();
        Complex64::new(rng.random_range(-1.0..1.0) * s, rng.random_range(-1.0..1.0) * s)
    })
    .expect("finite coefficients");
    let lhs = pairing(&cesaro(f), &g).value;
    let rhs = pairing(f, &libera_coeff(&g)).value;
    sink.push("adjoint", "cesaro_libera", None, Ok(1.0 + (lhs - rhs).norm() / (1.0 + rhs.norm())));
}

fn index_of(member: &FamilyMember) -> u64 {
    let kind = match member.kind {
        FamilyKind::RandomDecreasing => 1u64,
        FamilyKind::RandomPhases => 2,
        FamilyKind::Lacunary => 3,
        FamilyKind::GeometricLike => 4,
        FamilyKind::Logpower { .. } => 5,
    };
    (kind << 32) | member.index as u64
}

fn hardy_rhs(g: &CoefficientSeries, r: f64) -> f64 {
    let log_r = r.ln();
    logbloch_core::sum::sum(g.coeffs().iter().enumerate().map(|(n, c)| {
        let rn = if n == 0 { 1.0 } else { (n as f64 * log_r).exp() };
        c.norm() * rn / (n as f64 + 1.0)
    }))
}

/// Block comparisons (eq2, eq4, eq5, rrr) for one member.
fn block_checks(ctx: &Context, f: &CoefficientSeries, frame: &Frame, sink: &mut Sink) {
    let eq = &ctx.config.equivalence;
    let quad = &ctx.quad;
    let df = f.derivative();
    let rf = f.r_operator();
    let hardy = |s: &CoefficientSeries, p: f64| quad.hardy_norm(s, p).map(|v| v.value).map_err(err_string);
    for &p in &eq.block_p {
        let whole = hardy(f, p);
        for (n, block) in frame.blocks().iter().enumerate() {
            let bf = block.apply(f);
            let vb = hardy(&bf, p);
            if matches!(vb, Ok(v) if v == 0.0) {
                continue;
            }
            sink.quotient("eq2", p_label(p), None, vb.clone(), whole.clone());
            if n == 0 {
                continue;
            }
            let scale = 2f64.powi(n as i32);
            let den = vb.map(|v| v * scale);
            let vd = hardy(&block.apply(&df), p);
            sink.quotient("eq5", p_label(p), None, vd, den.clone());
            let vr = hardy(&block.apply(&rf), p);
            sink.quotient("rrr", p_label(p), None, vr, den);
        }
    }
    for &p in &eq.inequality_p {
        for (n, block) in frame.blocks().iter().enumerate().skip(1) {
            let b = block.apply(&df);
            if b.is_zero() {
                continue;
            }
            let (lo, hi) = ((1u64 << (n - 1)) - 1, (1u64 << (n + 1)) - 1);
            for &r in &eq.radii {
                radial_bounds(quad, "eq4", &b, r, p, lo as f64, hi as f64, sink);
            }
        }
    }
}

/// `r^hi ‖P‖_p ≤ M_p(r, P) ≤ r^lo ‖P‖_p`, recorded as `1 + ln(larger/smaller)`
/// for each side.
#[allow(clippy::too_many_arguments)]
fn radial_bounds(
    quad: &Quadrature,
    tag: &'static str,
    poly: &CoefficientSeries,
    r: f64,
    p: f64,
    lo: f64,
    hi: f64,
    sink: &mut Sink,
) {
    let log_r = r.ln();
    if hi * log_r < LOG_UNDERFLOW {
        return;
    }
    let inner = quad.mean(poly, r, p).map(|m| m.value).map_err(err_string);
    let outer = quad.hardy_norm(poly, p).map(|m| m.value).map_err(err_string);
    let (lower, upper) = match (inner, outer) {
        (Ok(i), Ok(o)) => {
            if !i.is_normal() || !o.is_normal() {
                return;
            }
            let (li, lo_n) = (i.ln(), o.ln());
            if lo_n + hi * log_r < LOG_UNDERFLOW {
                return;
            }
            (Ok(1.0 + li - hi * log_r - lo_n), Ok(1.0 + lo * log_r + lo_n - li))
        }
        (Err(e), _) | (_, Err(e)) => (Err(e.clone()), Err(e)),
    };
    sink.push(tag, format!("lower {} r={r}", p_label(p)), None, lower);
    sink.push(tag, format!("upper {} r={r}", p_label(p)), None, upper);
}

fn mapping_member(ctx: &Context, member: &FamilyMember, heavy: bool, prof: &mut Profiles, sink: &mut Sink) {
    let mp = &ctx.config.mapping;
    let f = &member.series;
    if heavy {
        for &alpha in &mp.cesaro_alphas {
            let t = prof.norm(Prof::CInf, &log_alpha(alpha + 1.0));
            let s = prof.norm(Prof::FInf, &log_alpha(alpha));
            sink.quotient("thm4a", "cesaro", Some(alpha), t, s);
        }
        let t = prof.norm(Prof::CInf, &WeightSpec::LogLog);
        let s = prof.norm(Prof::FInf, &log_alpha(-1.0));
        sink.quotient("thm4b", "cesaro_loglog", Some(-1.0), t, s);
        let t = prof.norm(Prof::CInf, &log_alpha(1.0));
        let s = prof.norm(Prof::FInf, &log_alpha(0.0));
        sink.quotient("assert_c", "cesaro_bloch_to_log", Some(0.0), t, s);

        let square = logbloch_core::sum::sum(f.coeffs().iter().map(|c| c.norm_sqr()));
        let conj = CoefficientSeries::new(f.coeffs().iter().map(|c| c.conj()).collect())
            .expect("finite coefficients");
        let value = pairing(f, &conj).value.norm();
        debug_assert!((value - square).abs() <= 1e-9 * square.max(1.0));
        for &alpha in &mp.pairing_alphas {
            let w = log_alpha(alpha);
            let den = prof.norm(Prof::F1, &w).and_then(|a| prof.norm(Prof::FInf, &w).map(|b| a * b));
            sink.quotient("thm6_pairing", "log_alpha", Some(alpha), Ok(value), den);
        }
        let w = WeightSpec::LogLog;
        let den = prof.norm(Prof::F1, &w).and_then(|a| prof.norm(Prof::FInf, &w).map(|b| a * b));
        sink.quotient("thm6_pairing", "loglog", None, Ok(value), den);
    }
    let decreasing = member.kind.is_decreasing();
    let one_sided = |sink: &mut Sink, tag: &'static str, variant: &str, alpha, t: Ratio, s: Ratio| {
        if decreasing {
            sink.quotient(tag, variant, alpha, t.clone(), s.clone());
        }
        sink.quotient(tag, format!("{variant}{ALL_FAMILIES}"), alpha, t, s);
    };
    if member.kind.is_nonnegative() {
        let t = prof.norm(Prof::L1, &log_alpha(0.0));
        let s = prof.norm(Prof::F1, &log_alpha(1.0));
        one_sided(sink, "assert_d", "libera_log_to_b1", Some(1.0), t, s);
    }
    for &alpha in &mp.libera_alphas {
        let t = prof.norm(Prof::L1, &log_alpha(alpha - 1.0));
        let s = prof.norm(Prof::F1, &log_alpha(alpha));
        one_sided(sink, "thm5a", "libera", Some(alpha), t, s);
    }
    let t = prof.norm(Prof::L1, &log_alpha(-1.0));
    let s = prof.norm(Prof::F1, &WeightSpec::LogLog);
    one_sided(sink, "thm5b", "libera_loglog", Some(-1.0), t, s);

    let a = mp.power_alpha;
    let s = prof.norm(Prof::F1, &log_alpha(0.0));
    let power = NormalFunction::power(1.0 - a)
        .map_err(err_string)
        .and_then(|phi| prof.norm(Prof::L1, &WeightSpec::Normal(phi)));
    one_sided(sink, "thm5c", "power", Some(a), power, s.clone());
    let t = prof.norm(Prof::L1, &log_alpha(a));
    one_sided(sink, "thm5c", "log", Some(a), t, s);
}

fn eq3_samples(ctx: &Context) -> Vec<Sample> {
    let eq = &ctx.config.equivalence;
    let n_max = eq.eq3_n_max;
    let degree = (1usize << (n_max + 1)) - 1;
    let mut sink = Sink::new(degree, String::from("frame"));
    let frame = Frame::new(n_max);
    for &p in &eq.eq3_p {
        let expo = if p.is_infinite() { 1.0 } else { 1.0 - 1.0 / p };
        for n in 1..=n_max {
            let v = ctx
                .quad
                .hardy_norm(&frame.blocks()[n].to_series(), p)
                .map(|m| m.value / 2f64.powf(n as f64 * expo))
                .map_err(err_string);
            sink.push("eq3", p_label(p), None, v);
        }
    }
    sink.out
}

fn stud_samples(ctx: &Context, degree: usize) -> Vec<Sample> {
    let eq = &ctx.config.equivalence;
    let mut sink = Sink::new(degree, format!("stud@{degree}"));
    let mut rng = task_rng(ctx.config.seed, &[0x57, degree as u64]);
    for w in 0..eq.stud_windows_per_degree {
        let m = rng.random_range(0..eq.stud_max_start.min(degree).max(1));
        let len = rng.random_range(1..=eq.stud_max_len);
        let j = m + len - 1;
        let p_poly = CoefficientSeries::from_fn(j, |k| {
            if k < m {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
        })
        .expect("finite coefficients");
        sink.label = format!("stud@{degree}#{w}");
        for &p in &eq.inequality_p {
            for &r in &eq.radii {
                radial_bounds(&ctx.quad, "stud", &p_poly, r, p, m as f64, j as f64, &mut sink);
            }
        }
    }
    sink.out
}

/// `φ(x) = x / log(2/x)`, normal on `(0, 1]`.
fn reform_phi(x: f64) -> f64 {
    x / (2.0 / x).ln()
}

fn reform_samples(ctx: &Context, degree: usize) -> Vec<Sample> {
    let eq = &ctx.config.equivalence;
    let len = (degree + 1).trailing_zeros() as usize;
    let mut sink = Sink::new(degree, format!("reform@{degree}"));
    let mut rng = task_rng(ctx.config.seed, &[0x4e, degree as u64]);
    for _ in 0..REFORM_SAMPLES {
        let lambda: Vec<f64> = (0..len)
            .map(|n| {
                if n == 0 {
                    0.0
                } else {
                    2f64.powi(n as i32) * rng.random_range(0.25..1.0)
                }
            })
            .collect();
        for &q in &eq.reform_q {
            for ex in [GapExponents::Printed, GapExponents::Swapped, GapExponents::Uniform] {
                match ctx.quad.discretization_sides_with(reform_phi, q, &lambda, ex) {
                    Ok(s) => {
                        sink.push("reform", format!("{} sup q={q}", ex.name()), None, Ok(s.sup_side / s.sequence));
                        sink.push("reform", format!("{} sum q={q}", ex.name()), None, Ok(s.sum_side / s.sequence));
                    }
                    Err(e) => {
                        sink.push("reform", format!("{} sup q={q}", ex.name()), None, Err(e.to_string()));
                        sink.push("reform", format!("{} sum q={q}", ex.name()), None, Err(e.to_string()));
                    }
                }
            }
        }
    }
    sink.out
}

fn dyadic_indices(degree: usize) -> impl Iterator<Item = usize> {
    (1..=usize::BITS as usize - 1)
        .map(|k| (1usize << k) - 1)
        .take_while(move |&n| n <= degree)
}

fn moment_samples(ctx: &Context, degree: usize) -> Vec<Sample> {
    let eq = &ctx.config.equivalence;
    let mut sink = Sink::new(degree, format!("moment@{degree}"));
    for n in dyadic_indices(degree) {
        for &s in &eq.moment_exponents {
            let (integral, bound) = ctx.quad.normal_weight_moment_bound(|x| x.powf(s), n);
            sink.push("moment", format!("x^{s}"), None, Ok(bound / integral));
        }
        let (integral, bound) = ctx.quad.normal_weight_moment_bound(reform_phi, n);
        sink.push("moment", "x/log(2/x)", None, Ok(bound / integral));
    }
    sink.out
}

fn logsum_samples(ctx: &Context, degree: usize) -> Vec<Sample> {
    let eq = &ctx.config.equivalence;
    let mut sink = Sink::new(degree, format!("logsum@{degree}"));
    for &alpha in &eq.logsum_alphas {
        for k in dyadic_indices(degree) {
            let v = log_sum(k, alpha) / (k as f64 + 2.0).ln().powf(alpha + 1.0);
            sink.push("logsum", "telescoping", Some(alpha), Ok(v));
        }
    }
    sink.out
}

fn rule_for(key: &Key, config: &VerifyConfig) -> PassRule {
    let pass = &config.pass;
    let band = PassRule::DoublingBand {
        factor: pass.doubling_factor,
    };
    let above = PassRule::BoundedAbove {
        factor: pass.doubling_factor,
    };
    match key.tag {
        "eq2" | "thm3a" | "moment" | "thm6_pairing" => above,
        "thm3b" if key.variant == DIVERGENT_VARIANT => PassRule::Growth {
            factor: pass.unbounded_growth,
        },
        "thm3b" => above,
        "thm5a" | "thm5b" | "thm5c" | "assert_d" if key.variant.ends_with(ALL_FAMILIES) => above,
        "eq3" => PassRule::AbsoluteBand { band: pass.eq3_band },
        "stud" | "eq4" | "hardy" => PassRule::AtLeastOne { tol: pass.gap_tol },
        "ineq_li" => PassRule::AtLeastOne {
            tol: pass.ineq_li_tol,
        },
        "adjoint" => PassRule::NearOne {
            tol: pass.adjoint_tol,
        },
        _ => band,
    }
}

fn rule_note(key: &Key) -> &'static str {
    match key.tag {
        "stud" | "eq4" => "ratio = 1 + ln(larger side / smaller side)",
        "adjoint" => "ratio = 1 + |<Cf,g> - <f,Lg>| / (1 + |<f,Lg>|)",
        "hardy" | "ineq_li" => "ratio = larger side / smaller side",
        "lib_remark" if key.variant == "printed" => "sum a_n / loglog(n+4)",
        "lib_remark" => "sum a_k L_k / (k+1), L_k = sum_{n<=k} 1/((n+1) log(n+2))",
        "thm5a" | "thm5b" | "thm5c" | "assert_d" if key.variant.ends_with(ALL_FAMILIES) => {
            "one-sided bound: ratio bounded above on all families"
        }
        "thm5c" if key.variant == "power" => "target weight (1-r)^|alpha|",
        "thm5c" => "target weight log^alpha(2/(1-r))",
        _ => "",
    }
}

fn aggregate(samples: Vec<Sample>, config: &VerifyConfig) -> Vec<EquivalenceReport> {
    type PerDegree = BTreeMap<usize, (Vec<f64>, Vec<String>)>;
    let mut groups: BTreeMap<Key, PerDegree> = BTreeMap::new();
    for s in samples {
        let slot = groups.entry(s.key).or_default().entry(s.degree).or_default();
        match s.value {
            Ok(v) => slot.0.push(v),
            Err(e) => slot.1.push(e),
        }
    }
    let mut reports = Vec::with_capacity(groups.len());
    for (key, per_degree) in groups {
        let rule = rule_for(&key, config);
        let degrees: Vec<usize> = per_degree.keys().copied().collect();
        let stats: Vec<DegreeStats> = per_degree
            .iter()
            .filter_map(|(&d, (ratios, _))| DegreeStats::from_ratios(d, ratios))
            .collect();
        let errors: Vec<&String> = per_degree.values().flat_map(|(_, e)| e).collect();
        let (mut pass, verdict) = rule.judge(&stats);
        let mut notes = vec![verdict];
        let extra = rule_note(&key);
        if !extra.is_empty() {
            notes.push(extra.to_string());
        }
        if !errors.is_empty() {
            pass = false;
            let shown: Vec<&str> = errors.iter().take(3).map(|s| s.as_str()).collect();
            notes.push(format!("{} failed samples: {}", errors.len(), shown.join("; ")));
        }
        reports.push(EquivalenceReport {
            theorem_tag: key.tag.to_string(),
            variant: key.variant,
            alpha: key.alpha.0,
            degrees,
            stats,
            pass,
            rule: rule.describe(),
            notes: notes.join("; "),
        });
    }
    sort_reports(&mut reports);
    reports
}

fn run_suites(config: &VerifyConfig, equivalence: bool, mapping: bool) -> Result<Vec<EquivalenceReport>> {
    config.validate()?;
    let specs = config.family_specs()?;
    if specs.is_empty() {
        return Ok(Vec::new());
    }
    let bump = BumpFunction::default();
    let frames = config
        .degrees
        .iter()
        .map(|&d| (d, Frame::covering(d, bump.clone())))
        .collect();
    let ctx = Context {
        config,
        quad: Quadrature::new(config.quadrature_config()),
        frames,
        equivalence,
        mapping,
    };
    let mut tasks = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        for index in 0..spec.count {
            tasks.push(Task::Member { spec: i, index });
        }
    }
    if equivalence {
        tasks.push(Task::Eq3);
        for &degree in &config.degrees {
            tasks.push(Task::Stud { degree });
            tasks.push(Task::Reform { degree });
            tasks.push(Task::Moment { degree });
            tasks.push(Task::LogSum { degree });
        }
    }
    let samples: Vec<Vec<Sample>> = tasks
        .par_iter()
        .map(|t| match *t {
            Task::Member { spec, index } => member_samples(&ctx, &specs[spec], index),
            Task::Eq3 => eq3_samples(&ctx),
            Task::Stud { degree } => stud_samples(&ctx, degree),
            Task::Reform { degree } => reform_samples(&ctx, degree),
            Task::Moment { degree } => moment_samples(&ctx, degree),
            Task::LogSum { degree } => logsum_samples(&ctx, degree),
        })
        .collect();
    Ok(aggregate(samples.into_iter().flatten().collect(), config))
}

/// Equivalence and inequality reports. No family members means no reports.
pub fn run_equivalence_suite(config: &VerifyConfig) -> Result<Vec<EquivalenceReport>> {
    run_suites(config, true, false)
}

/// Operator mapping and pairing reports. No family members means no reports.
pub fn run_operator_mapping_suite(config: &VerifyConfig) -> Result<Vec<EquivalenceReport>> {
    run_suites(config, false, true)
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub reports: Vec<EquivalenceReport>,
    pub divergence: DivergenceReport,
    /// Expected tags with no report.
    pub missing_tags: Vec<String>,
}

impl VerifyOutcome {
    pub fn all_pass(&self) -> bool {
        self.missing_tags.is_empty() && self.divergence.pass && self.reports.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| match r.alpha {
                Some(a) => format!("{} [{}] alpha={a}: {}", r.theorem_tag, r.variant, r.notes),
                None => format!("{} [{}]: {}", r.theorem_tag, r.variant, r.notes),
            })
            .collect();
        if !self.divergence.pass {
            out.push(format!(
                "divergence demo: increasing={}, growth={}, frame band={}",
                self.divergence.strictly_increasing, self.divergence.growth, self.divergence.frame_band
            ));
        }
        for t in &self.missing_tags {
            out.push(format!("no report for {t}"));
        }
        out
    }
}

/// Both suites in one pass (profiles are shared), the divergence demo and
/// the completeness check.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyOutcome> {
    let reports = run_suites(config, true, true)?;
    let divergence = run_configured_demo(&Quadrature::new(config.quadrature_config()), &config.demo)?;
    let missing_tags = EQUIVALENCE_TAGS
        .iter()
        .chain(MAPPING_TAGS.iter())
        .filter(|t| !reports.iter().any(|r| r.theorem_tag == **t))
        .map(|t| t.to_string())
        .collect();
    Ok(VerifyOutcome {
        reports,
        divergence,
        missing_tags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> VerifyConfig {
        let mut c = VerifyConfig::default();
        c.degrees = vec![63, 127];
        c.families.random_decreasing = 3;
        c.families.geometric_like = 2;
        c.families.random_phases = 2;
        c.families.lacunary = 1;
        c.families.heavy_members = 1;
        c.equivalence.stud_windows_per_degree = 4;
        c.equivalence.eq3_n_max = 6;
        c.demo.m = vec![2, 4];
        c
    }

    #[test]
    fn tiny_run_covers_every_tag() {
        let out = run_verify(&tiny()).unwrap();
        assert!(out.missing_tags.is_empty(), "{:?}", out.missing_tags);
        for r in &out.reports {
            for s in &r.stats {
                assert!(0.0 < s.ratio_min && s.ratio_min <= s.ratio_median && s.ratio_median <= s.ratio_max);
            }
        }
        for tag in ["adjoint", "stud", "eq4", "hardy", "ineq_li"] {
            assert!(out.reports.iter().filter(|r| r.theorem_tag == tag).all(|r| r.pass), "{tag}");
        }
    }

    #[test]
    fn no_members_no_reports() {
        let mut c = tiny();
        c.families.random_decreasing = 0;
        c.families.geometric_like = 0;
        c.families.random_phases = 0;
        c.families.lacunary = 0;
        c.families.logpower = 0;
        assert!(run_equivalence_suite(&c).unwrap().is_empty());
        assert!(run_operator_mapping_suite(&c).unwrap().is_empty());
    }

    #[test]
    fn suites_split_the_tags() {
        let c = tiny();
        let eq = run_equivalence_suite(&c).unwrap();
        let mp = run_operator_mapping_suite(&c).unwrap();
        assert!(eq.iter().all(|r| EQUIVALENCE_TAGS.contains(&r.theorem_tag.as_str())));
        assert!(mp.iter().all(|r| MAPPING_TAGS.contains(&r.theorem_tag.as_str())));
        assert_eq!(mp.len(), mp.iter().map(|r| (&r.theorem_tag, &r.variant, r.alpha.map(f64::to_bits))).collect::<std::collections::BTreeSet<_>>().len());
    }

    #[test]
    fn rules_follow_tags() {
        let c = VerifyConfig::default();
        let key = |tag: &'static str, v: &str| Key {
            tag,
            variant: v.to_string(),
            alpha: Alpha(None),
        };
        assert!(matches!(rule_for(&key("thm1", "s_alpha"), &c), PassRule::DoublingBand { .. }));
        assert!(matches!(rule_for(&key("thm3b", DIVERGENT_VARIANT), &c), PassRule::Growth { .. }));
        assert!(matches!(rule_for(&key("thm3b", "area"), &c), PassRule::BoundedAbove { .. }));
        assert!(matches!(rule_for(&key("adjoint", ""), &c), PassRule::NearOne { .. }));
    }
}
