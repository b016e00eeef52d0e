mod common;

use logbloch_core::{
    frame_norm_b1, frame_norm_bloch, frame_norm_loglog, k_alpha, libera_coeff, little_bloch_profile,
    log_sum, monotone_check, s_alpha, BumpFunction, CoefficientSeries, Complex64, Frame, LogLogMode,
    Quadrature, QuadratureConfig, WeightSpec,
};
use proptest::prelude::*;
use rand::Rng;

fn sweep_quadrature() -> Quadrature {
    Quadrature::new(QuadratureConfig {
        circle_rtol: 1e-7,
        circle_cap: 1 << 16,
        panel_width: 2.0,
        ..QuadratureConfig::default()
    })
}

fn decreasing_families(rng: &mut impl Rng, degree: usize) -> Vec<Vec<f64>> {
    let mut out = vec![
        vec![1.0; degree + 1],
        (0..=degree).map(|n| 1.0 / (n as f64 + 1.0)).collect(),
        (0..=degree).map(|n| (n as f64 + 1.0).powf(-0.5)).collect(),
    ];
    for _ in 0..2 {
        let mut a: Vec<f64> = (0..=degree).map(|n| rng.random_range(0.0..1.0) / (n as f64 + 1.0)).collect();
        for n in (0..degree).rev() {
            a[n] += a[n + 1];
        }
        out.push(a);
    }
    out
}

fn band(ratios: &[f64]) -> (f64, f64) {
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    (lo, hi)
}

/// S_α against the weighted area norm: bands recorded at degrees 255 and 1023.
#[test]
fn decreasing_coefficients_criterion_band() {
    let quad = sweep_quadrature();
    let alphas = [-1.0, -0.5, 0.0, 1.0, 2.0];
    let mut widths = vec![Vec::new(); alphas.len()];
    for (seed, degree) in [(31u64, 255usize), (32, 1023)] {
        let mut rng = common::rng(seed);
        let mut ratios = vec![Vec::new(); alphas.len()];
        for a in decreasing_families(&mut rng, degree) {
            assert!(monotone_check(&a).ok);
            let f = CoefficientSeries::from_real(&a).unwrap();
            let prof = quad.derivative_profile(&f, 1.0).unwrap();
            for (i, &alpha) in alphas.iter().enumerate() {
                let s = s_alpha(&a, alpha).unwrap();
                assert!(s.in_scope);
                let norm = quad.bloch1_norm_from(&prof, &WeightSpec::LogAlpha(alpha)).unwrap().value;
                ratios[i].push(s.value / norm);
            }
        }
        for (i, r) in ratios.iter().enumerate() {
            let (lo, hi) = band(r);
            assert!(lo > 0.15 && hi < 2.0, "alpha {} [{lo}, {hi}]", alphas[i]);
            widths[i].push(hi / lo);
        }
    }
    for w in &widths {
        assert!(w[1] <= 1.2 * w[0], "{w:?}");
    }
}

#[test]
fn positive_coefficients_libera_band() {
    let quad = sweep_quadrature();
    let alphas = [-0.5, 0.0, 1.0];
    let mut widths = vec![Vec::new(); alphas.len()];
    for (seed, degree) in [(33u64, 255usize), (34, 1023)] {
        let mut rng = common::rng(seed);
        let mut ratios = vec![Vec::new(); alphas.len()];
        let mut family: Vec<CoefficientSeries> = decreasing_families(&mut rng, degree)
            .iter()
            .map(|a| CoefficientSeries::from_real(a).unwrap())
            .collect();
        family.push(common::random_positive(&mut rng, degree));
        for g in &family {
            let prof = quad.derivative_profile(&libera_coeff(g), 1.0).unwrap();
            for (i, &alpha) in alphas.iter().enumerate() {
                let k = k_alpha(g, alpha).unwrap().value;
                let norm = quad.bloch1_norm_from(&prof, &WeightSpec::LogAlpha(alpha)).unwrap().value;
                ratios[i].push(k / norm);
            }
        }
        for (i, r) in ratios.iter().enumerate() {
            let (lo, hi) = band(r);
            assert!(lo > 0.4 && hi < 2.0, "alpha {} [{lo}, {hi}]", alphas[i]);
            widths[i].push(hi / lo);
        }
    }
    for w in &widths {
        assert!(w[1] <= 1.2 * w[0], "{w:?}");
    }
}

#[test]
fn frame_norms_track_direct_norms() {
    let quad = sweep_quadrature();
    let mut rng = common::rng(35);
    for degree in [255usize, 1023] {
        let frame = Frame::covering(degree, BumpFunction::default());
        let mut family = vec![
            CoefficientSeries::from_fn(degree, |n| Complex64::new(1.0 / (n as f64 + 1.0), 0.0)).unwrap(),
            CoefficientSeries::from_fn(degree, |n| {
                Complex64::new(if n.is_power_of_two() { 1.0 } else { 0.0 }, 0.0)
            })
            .unwrap(),
        ];
        for _ in 0..2 {
            family.push(
                CoefficientSeries::from_fn(degree, |n| {
                    Complex64::from_polar(1.0 / (n as f64 + 1.0), rng.random_range(0.0..std::f64::consts::TAU))
                })
                .unwrap(),
            );
        }
        for f in &family {
            let p1 = quad.derivative_profile(f, 1.0).unwrap();
            let pinf = quad.derivative_profile(f, f64::INFINITY).unwrap();
            for alpha in [-0.5, 0.0, 1.0] {
                let w = WeightSpec::LogAlpha(alpha);
                let area = frame_norm_b1(&quad, f, alpha, &frame).unwrap() / quad.bloch1_norm_from(&p1, &w).unwrap().value;
                let sup = frame_norm_bloch(&quad, f, alpha, &frame).unwrap() / quad.bloch_norm_from(&pinf, &w).unwrap().value;
                assert!((0.7..2.0).contains(&area), "deg {degree} alpha {alpha} area {area}");
                assert!((0.4..1.5).contains(&sup), "deg {degree} alpha {alpha} sup {sup}");
            }
            let area = frame_norm_loglog(&quad, f, LogLogMode::B1, &frame).unwrap()
                / quad.bloch1_norm_from(&p1, &WeightSpec::LogLog).unwrap().value;
            let sup = frame_norm_loglog(&quad, f, LogLogMode::Bloch, &frame).unwrap()
                / quad.bloch_norm_from(&pinf, &WeightSpec::LogLog).unwrap().value;
            assert!((0.7..2.0).contains(&area) && (0.3..1.5).contains(&sup), "{area} {sup}");
        }
    }
}

#[test]
fn lacunary_profile_is_exact() {
    let quad = Quadrature::default();
    let frame = Frame::new(12);
    let f = CoefficientSeries::from_fn(2047, |n| {
        Complex64::new(if n.is_power_of_two() { 1.0 } else { 0.0 }, 0.0)
    })
    .unwrap();
    for alpha in [-1.0, 0.0, 0.5, 2.0] {
        let prof = little_bloch_profile(&quad, &f, alpha, &frame).unwrap();
        for (n, v) in prof.iter().enumerate().take(11) {
            let expect = (n as f64 + 1.0).powf(-alpha);
            assert!((v - expect).abs() < 1e-12 * expect, "alpha {alpha} n {n}");
        }
        assert_eq!((prof[11], prof[12]), (0.0, 0.0));
    }
    // Decay for α > 0 makes the blocks of a long lacunary series vanish in the little space.
    let tail = little_bloch_profile(&quad, &f, 0.5, &frame).unwrap();
    assert!(tail[10] < tail[1] / 2.0);
    assert_eq!(frame_norm_bloch(&quad, &f, 0.0, &frame).unwrap(), 1.0);
}

#[test]
fn log_sum_grows_like_the_primitive() {
    for (alpha, lo, hi) in [(-1.0, 1.5, 3.5), (-0.5, 0.85, 1.0), (0.0, 1.0, 1.3), (1.0, 1.0, 1.4)] {
        for k in [10usize, 100, 1000, 16383] {
            let l = (k as f64 + 2.0).ln();
            let primitive = if alpha == -1.0 { l.ln() } else { l.powf(alpha + 1.0) / (alpha + 1.0) };
            let ratio = log_sum(k, alpha) / primitive;
            assert!(ratio > lo && ratio < hi, "alpha {alpha} k {k} {ratio}");
        }
    }
    // Telescoping: consecutive differences are the summands.
    for k in 1..200 {
        let d = log_sum(k, 0.7) - log_sum(k - 1, 0.7);
        let term = (k as f64 + 2.0).ln().powf(0.7) / (k as f64 + 1.0);
        assert!((d - term).abs() < 1e-14);
    }
}

#[test]
fn logpower_criterion_stabilises() {
    // a_n = log^{-2}(n+2) keeps S_0 bounded; S_1 diverges like log log.
    let s = |k: usize, alpha: f64| {
        let a: Vec<f64> = (0..=k).map(|n| (n as f64 + 2.0).ln().powi(-3)).collect();
        s_alpha(&a, alpha).unwrap().value
    };
    let (a, b) = (s(1 << 12, 0.0), s(1 << 16, 0.0));
    assert!(b > a && b - a < 0.03, "{a} {b}");
    let (a, b) = (s(1 << 12, 2.0), s(1 << 16, 2.0));
    assert!(b - a > 0.2, "{a} {b}");
}

proptest! {
    #[test]
    fn s_alpha_is_positively_homogeneous(v in prop::collection::vec(0.0f64..1.0, 1..60), c in 0.0f64..10.0, alpha in -1.0f64..3.0) {
        let mut a = v;
        a.sort_by(|x, y| y.total_cmp(x));
        let base = s_alpha(&a, alpha).unwrap().value;
        let scaled: Vec<f64> = a.iter().map(|x| x * c).collect();
        let s = s_alpha(&scaled, alpha).unwrap().value;
        prop_assert!((s - c * base).abs() <= 1e-12 * (1.0 + c * base));
    }

    #[test]
    fn monotone_check_finds_first_rise(v in prop::collection::vec(0.0f64..1.0, 2..40)) {
        let check = monotone_check(&v);
        let first = (0..v.len() - 1).find(|&n| v[n] < v[n + 1] - 1e-12);
        prop_assert_eq!(check.first_violation, first);
        prop_assert_eq!(check.ok, first.is_none());
    }
}
