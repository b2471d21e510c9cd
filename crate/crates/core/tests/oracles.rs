//! Checks against values computed independently of the library code paths.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use hosc_core::hermite::hermite_functions;
use hosc_core::norms::{
    field_lp_norm, oscillator_xt_norm, time_lq_profile, tl_norm, Discretization, TimeRoute, TWO_PI,
};
use hosc_core::propagators::{heat_kernel_apply_field, heat_spectral, FreePropagator, MehlerVariant, TimeGrid};
use hosc_core::verify::{FamilyKind, TrialFamily};
use hosc_core::{gauss_hermite, MultiIndex, Multiplier, SpectralField};
use num_complex::Complex64;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// ψ_k from the explicit sum for the physicists' polynomial.
fn hermite_explicit(k: usize, x: f64) -> f64 {
    let h: f64 = (0..=k / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * (2.0 * x).powi((k - 2 * m) as i32) / (factorial(m) * factorial(k - 2 * m))
        })
        .sum::<f64>()
        * factorial(k);
    h * (-x * x / 2.0).exp() / (2f64.powi(k as i32) * factorial(k) * PI.sqrt()).sqrt()
}

fn random(n: usize, cutoff: usize, seed: u64) -> SpectralField {
    TrialFamily { kind: FamilyKind::RandomBandLimited, dimension: n, cutoff, seed, real: false }
        .draw(0)
        .unwrap()
}

#[test]
fn hermite_functions_match_the_explicit_polynomials() {
    for &x in &[-2.7, -1.0, -0.3, 0.0, 0.45, 1.9, 3.0] {
        let row = hermite_functions(x, 12);
        for (k, &v) in row.iter().enumerate() {
            assert!((v - hermite_explicit(k, x)).abs() < 1e-12, "k={k} x={x}");
        }
    }
}

#[test]
fn small_gauss_hermite_rules_match_closed_forms() {
    let rule = gauss_hermite(3).unwrap();
    let s = (1.5f64).sqrt();
    for (got, want) in rule.nodes.iter().zip([-s, 0.0, s]) {
        assert_relative_eq!(*got, want, epsilon = 1e-14);
    }
    let rp = PI.sqrt();
    for (got, want) in rule.weights.iter().zip([rp / 6.0, 2.0 * rp / 3.0, rp / 6.0]) {
        assert_relative_eq!(*got, want, epsilon = 1e-14);
    }
    let rule = gauss_hermite(4).unwrap();
    let r6 = 6f64.sqrt();
    let inner = ((3.0 - r6) / 2.0).sqrt();
    let outer = ((3.0 + r6) / 2.0).sqrt();
    for (got, want) in rule.nodes.iter().zip([-outer, -inner, inner, outer]) {
        assert_relative_eq!(*got, want, epsilon = 1e-14);
    }
    let w_inner = rp / (4.0 * (3.0 - r6));
    let w_outer = rp / (4.0 * (3.0 + r6));
    for (got, want) in rule.weights.iter().zip([w_outer, w_inner, w_inner, w_outer]) {
        assert_relative_eq!(*got, want, epsilon = 1e-14);
    }
}

#[test]
fn free_gaussian_closed_form() {
    // e^{itΔ}φ₀ = π^{−1/4}(1+2it)^{−1/2} exp(−x²/(2(1+2it)))
    let phi0 = SpectralField::unit(1, 7, &MultiIndex::zero(1)).unwrap();
    let points: Vec<Vec<f64>> = (0..41).map(|i| vec![-8.0 + 0.4 * i as f64]).collect();
    for &t in &[0.3, 2.0, 9.0] {
        let got = FreePropagator::default().apply(&phi0, t, &points).unwrap();
        let z = Complex64::new(1.0, 2.0 * t);
        for (p, v) in points.iter().zip(got) {
            let want = PI.powf(-0.25) * z.powf(-0.5) * (-(p[0] * p[0]) / (2.0 * z)).exp();
            assert!((v - want).norm() < 1e-7, "t={t} x={}", p[0]);
        }
    }
}

#[test]
fn heat_quadrature_route_matches_spectral_route() {
    let f = random(2, 10, 3);
    let points = vec![vec![0.2, -0.7], vec![1.3, 0.4], vec![-2.0, 1.1]];
    for &t in &[0.2, 1.0] {
        let spectral = hosc_core::synthesize(&heat_spectral(&f, t).unwrap(), &points).unwrap();
        let kernel = heat_kernel_apply_field(&f, t, &points, MehlerVariant::Symmetric).unwrap();
        for (a, b) in spectral.iter().zip(&kernel) {
            assert!((a - b).norm() < 1e-7);
        }
    }
}

#[test]
fn exact_time_route_matches_brute_force_time_quadrature() {
    let f = random(1, 12, 5);
    let disc = Discretization::new(1, 12).unwrap();
    let sampler = disc.sampler(3.0).unwrap();
    let levels = sampler.level_values(&f).unwrap();
    // Independent oracle: direct Riemann sum with many more nodes than needed.
    let brute = TimeGrid::periodic(TWO_PI, 4096).unwrap();
    for q in [4.0, 6.0] {
        let exact = time_lq_profile(&levels, q, TimeRoute::Exact).unwrap();
        let values: Vec<f64> = (0..levels.num_points())
            .map(|i| {
                let at: Vec<(usize, Complex64)> = levels.at_point(i).collect();
                let sum: f64 = brute
                    .nodes()
                    .iter()
                    .zip(brute.weights())
                    .map(|(&t, &w)| {
                        let u: Complex64 = at.iter().map(|&(l, v)| v * Complex64::from_polar(1.0, -t * l as f64)).sum();
                        w * u.norm().powf(q)
                    })
                    .sum();
                sum.powf(1.0 / q)
            })
            .collect();
        for (a, b) in exact.iter().zip(&values) {
            assert!((a - b).abs() <= 1e-10 * b.max(1.0));
        }
    }
    let _ = oscillator_xt_norm(&f, 3.0, 4.0, &sampler, TimeRoute::Exact).unwrap();
}

#[test]
fn ground_state_lp_norms_in_two_dimensions() {
    // ‖φ₀‖_p^p = π^{−np/4}(2π/p)^{n/2}
    let phi0 = SpectralField::unit(2, 6, &MultiIndex::zero(2)).unwrap();
    let disc = Discretization::new(2, 6).unwrap();
    for p in [1.0, 1.5, 3.0, 7.0] {
        let want = (PI.powf(-p / 2.0) * 2.0 * PI / p).powf(1.0 / p);
        assert_relative_eq!(field_lp_norm(&phi0, p, &disc).unwrap(), want, max_relative = 1e-12);
    }
    assert_relative_eq!(field_lp_norm(&phi0, f64::INFINITY, &disc).unwrap(), 1.0 / PI.sqrt(), max_relative = 1e-12);
}

#[test]
fn triebel_lizorkin_two_two_is_l2() {
    // 𝔽⁰_{2,2} = L² and ℋ^{2s} = 𝔽^s_{2,2}
    let f = random(2, 12, 11);
    let disc = Discretization::new(2, 12).unwrap();
    assert_relative_eq!(tl_norm(&f, 0.0, 2.0, 2.0, &disc).unwrap(), f.l2_norm(), max_relative = 1e-12);
    assert_relative_eq!(
        tl_norm(&f, 0.75, 2.0, 2.0, &disc).unwrap(),
        hosc_core::norms::sobolev_h(&f, 1.5),
        max_relative = 1e-12
    );
}

#[test]
fn partial_sum_operators_have_norm_one() {
    // ‖S_ℓ′‖ on 𝔽⁰_{p,q} equals 1: attained by any eigenfunction below ℓ′.
    let disc = Discretization::new(1, 15).unwrap();
    let e = SpectralField::unit(1, 15, &MultiIndex::new(vec![3]).unwrap()).unwrap();
    let s = Multiplier::Indicator { upper: 9.0 };
    for (p, q) in [(1.5, 2.0), (4.0, 1.0), (f64::INFINITY, 3.0)] {
        let a = tl_norm(&e.apply_multiplier(&s).unwrap(), 0.0, p, q, &disc).unwrap();
        let b = tl_norm(&e, 0.0, p, q, &disc).unwrap();
        assert_relative_eq!(a / b, 1.0, max_relative = 1e-14);
    }
}
