mod common;

use logbloch_core::{
    cesaro, ell1_minus1_norm, hardy_inequality_gap, libera_coeff, libera_derivative_bound_gap,
    libera_integral, pairing, CoefficientSeries, Complex64, Quadrature, QuadratureConfig,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn cesaro_and_libera_are_adjoint() {
    let mut rng = common::rng(21);
    for _ in 0..1000 {
        let f = common::random_series(&mut rng, 511);
        let g = common::random_series(&mut rng, 511);
        let lhs = pairing(&cesaro(&f), &g).value;
        let rhs = pairing(&f, &libera_coeff(&g)).value;
        assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

#[test]
fn cesaro_matches_geometric_convolution() {
    let mut rng = common::rng(22);
    let f = common::random_series(&mut rng, 300);
    let c = cesaro(&f);
    // (z 𝒞f)′ = f/(1 - z): coefficient n is the n-th partial sum of f̂.
    let lhs = c.times_z().derivative();
    for n in 0..=300 {
        let partial: Complex64 = f.coeffs()[..=n].iter().sum();
        assert!((lhs.coeff(n) - partial).norm() < 1e-12 * (1.0 + partial.norm()), "n={n}");
    }
}

#[test]
fn libera_coefficients_match_double_sum() {
    let mut rng = common::rng(23);
    let g = common::random_series(&mut rng, 200);
    let l = libera_coeff(&g);
    for n in 0..=200 {
        let naive: Complex64 = (n..=200).map(|k| g.coeff(k) / (k as f64 + 1.0)).sum();
        assert!((l.coeff(n) - naive).norm() < 1e-13);
    }
    for n in 0..200 {
        let back = (l.coeff(n) - l.coeff(n + 1)) * (n as f64 + 1.0);
        assert!((back - g.coeff(n)).norm() < 1e-11, "n={n}");
    }
}

#[test]
fn libera_forms_agree_in_the_disk() {
    let mut rng = common::rng(24);
    for degree in [256usize, 1024] {
        let g = common::random_series(&mut rng, degree);
        let coeff_form = libera_coeff(&g);
        for _ in 0..25 {
            let z = Complex64::from_polar(rng.random_range(0.0..0.95f64).sqrt(), rng.random_range(0.0..6.3));
            let a = libera_integral(&g, z, degree / 2 + 8).unwrap();
            let b = common::naive_eval(&coeff_form, z);
            assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-3), "deg {degree} z {z}");
        }
    }
}

#[test]
fn hardy_step_holds_on_random_series() {
    let quad = Quadrature::default();
    let mut rng = common::rng(25);
    for i in 0..1000 {
        let degree = rng.random_range(0..=256usize);
        let g = if i % 2 == 0 {
            common::random_series(&mut rng, degree)
        } else {
            common::random_positive(&mut rng, degree)
        };
        for r in [0.5, 0.9, 0.99] {
            let gap = hardy_inequality_gap(&quad, &g, r).unwrap();
            assert!(gap >= -1e-9, "gap {gap} r {r}");
        }
    }
}

#[test]
fn libera_derivative_bound_on_random_series() {
    let quad = Quadrature::new(QuadratureConfig {
        circle_rtol: 1e-7,
        circle_cap: 1 << 16,
        panel_width: 2.0,
        ..QuadratureConfig::default()
    });
    let mut rng = common::rng(26);
    for _ in 0..200 {
        let degree = rng.random_range(1..=96usize);
        let f = common::random_series(&mut rng, degree);
        for r in [0.5, 0.9, 0.99] {
            let gap = libera_derivative_bound_gap(&quad, &f, r).unwrap();
            assert!(gap >= -1e-8, "gap {gap} r {r} deg {degree}");
        }
    }
}

#[test]
fn ell1_bounds_the_libera_value_at_zero() {
    let mut rng = common::rng(27);
    for _ in 0..50 {
        let g = common::random_series(&mut rng, 128);
        let at_zero = libera_coeff(&g).coeff(0).norm();
        assert!(at_zero <= ell1_minus1_norm(&g) * (1.0 + 1e-14));
        let pos = common::random_positive(&mut rng, 128);
        let v = libera_coeff(&pos).coeff(0).re;
        assert!((v - ell1_minus1_norm(&pos)).abs() < 1e-14);
    }
}

fn arb_series(max_degree: usize) -> impl Strategy<Value = CoefficientSeries> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1).prop_map(|v| {
        CoefficientSeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn operators_are_linear(f in arb_series(40), g in arb_series(40), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let (ca, cb) = (Complex64::new(a, 0.5), Complex64::new(-0.25, b));
        let degree = f.degree().max(g.degree());
        let (f, g) = (f.with_degree(degree), g.with_degree(degree));
        let combo = &f.scale(ca) + &g.scale(cb);
        for op in [cesaro as fn(&CoefficientSeries) -> CoefficientSeries, libera_coeff] {
            let lhs = op(&combo);
            let rhs = &op(&f).scale(ca) + &op(&g).scale(cb);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn pairing_is_symmetric_and_counts_terms(f in arb_series(30), g in arb_series(30)) {
        let a = pairing(&f, &g);
        let b = pairing(&g, &f);
        prop_assert_eq!(a.terms, f.degree().min(g.degree()) + 1);
        prop_assert!((a.value - b.value).norm() < 1e-14);
    }
}
