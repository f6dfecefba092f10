//! Closed-form values checked through the public API, one module at a time.

use jacobi_spectra::core::{
    classify_decay, default_beta_grid, envelope, inverse_joukowski, joukowski, moment, ComplexJacobiSpec, DecayClass,
    RealJacobiSpec,
};
use jacobi_spectra::detkit::{det_truncation_ratio, det_volterra, derivative_max_bound, determinant_series, eval_series};
use jacobi_spectra::pavlov::{recurrence_from_weight, PavlovModel, WeightTable};
use jacobi_spectra::scattering::{inverse_scattering, jost_function_check, scattering_function, verify_decay_bound, ScatteringData};
use jacobi_spectra::spectra::{
    cantor_endpoints, default_eps_grid, dense_truncation_oracle, discrete_spectrum, gevrey_envelope, limit_set_metrics,
    spectral_singularities,
};
use jacobi_spectra::C64;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn diag(b: &[C64]) -> ComplexJacobiSpec {
    ComplexJacobiSpec::from_diagonal(b)
}

#[test]
fn spectral_parameter_map() {
    assert_eq!(joukowski(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert_eq!(joukowski(c(0.5, 0.0)).unwrap(), c(1.25, 0.0));
    let l = joukowski(c(0.0, 0.4)).unwrap();
    assert!(l.re == 0.0 && (l.im - (0.4 - 2.5) / 2.0).abs() < 1e-15);
    assert!((inverse_joukowski(c(2.0, 0.0)).unwrap() - c(2.0 - 3f64.sqrt(), 0.0)).norm() < 1e-15);
}

#[test]
fn moments_and_envelopes() {
    let one = diag(&[c(1.0, 0.0)]);
    for r in 0..4 {
        assert_eq!(moment(&ComplexJacobiSpec::free(), r), 0.0);
        assert_eq!(moment(&one, r), 1.0);
    }
    assert_eq!(moment(&diag(&[c(1.0, 0.0), c(0.5, 0.0)]), 2), 3.0);
    let e = envelope(&one);
    assert_eq!((e.h(0), e.h(1), e.h(7)), (2.0, 0.0, 0.0));
    assert_eq!(envelope(&ComplexJacobiSpec::free()).hprod(-1, 5), 1.0);
}

#[test]
fn decay_class_fixtures() {
    let fit = |f: &dyn Fn(f64) -> f64| match classify_decay(&(1..=64).map(|n| (n as f64, f(n as f64))).collect::<Vec<_>>(), &default_beta_grid()).unwrap() {
        DecayClass::Fitted(d) => d,
        DecayClass::FiniteSupport => panic!("unexpected finite support"),
    };
    assert!((fit(&|n| (-n.sqrt()).exp()).beta - 0.5).abs() < 0.05);
    assert!((fit(&|n| (-n).exp()).beta - 1.0).abs() < 1e-6);
    assert!(fit(&|_| 1.0).c2.abs() < 1e-12);
}

#[test]
fn determinant_values() {
    let one = diag(&[c(1.0, 0.0)]);
    assert!((det_truncation_ratio(&one, c(0.3, 0.0), 200).unwrap() - c(0.4, 0.0)).norm() < 1e-8);
    assert!(det_truncation_ratio(&one, c(0.5, 0.0), 400).unwrap().norm() < 1e-8);
    assert!((det_volterra(&one, c(0.3, 0.0), -1).unwrap() - c(0.4, 0.0)).norm() < 1e-12);
    let s = determinant_series(&one, 8).unwrap();
    assert_eq!((s.coeff(0), s.coeff(1)), (c(1.0, 0.0), c(-2.0, 0.0)));
    assert!((4..=8).all(|j| s.tail_bound(j) == 0.0));
    assert!(eval_series(&s, c(0.5, 0.0)).0.norm() < 1e-15);
    let free = determinant_series(&ComplexJacobiSpec::free(), 4).unwrap();
    assert!((1..=4).all(|j| free.coeff(j) == c(0.0, 0.0) && free.tail_bound(j) == 0.0));
    let b = derivative_max_bound(&one, 0).unwrap();
    assert!(b.moment_bound >= 3.0 && b.series_bound >= 3.0 - 1e-12);
}

#[test]
fn discrete_spectra_in_closed_form() {
    assert!(discrete_spectrum(&ComplexJacobiSpec::free(), 0.99).unwrap().is_empty());
    let ev = discrete_spectrum(&diag(&[c(0.0, 1.0)]), 0.99).unwrap();
    assert!(ev.len() == 1 && (ev[0].0 - c(0.0, 0.75)).norm() < 1e-10);
    let th = FRAC_PI_3;
    let ev = discrete_spectrum(&diag(&[C64::from_polar(1.0, th)]), 0.99).unwrap();
    assert!((ev[0].0 - c(5.0 * th.cos() / 4.0, 3.0 * th.sin() / 4.0)).norm() < 1e-10);

    assert!(dense_truncation_oracle(&ComplexJacobiSpec::free(), 100).unwrap().stable.is_empty());
    let o = dense_truncation_oracle(&diag(&[c(0.0, 1.0)]), 400).unwrap().stable;
    assert!(o.len() == 1 && (o[0] - c(0.0, 0.75)).norm() < 1e-8);

    let s = spectral_singularities(&diag(&[C64::from_polar(0.5, FRAC_PI_4)]), 512).unwrap();
    assert!(s.len() == 1 && (s[0].0 - C64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-8);
    assert!(spectral_singularities(&diag(&[c(1.0, 0.0)]), 512).unwrap().is_empty());
}

#[test]
fn point_sets_and_envelopes() {
    let grid = default_eps_grid();
    assert_eq!(limit_set_metrics(&[0.1, 0.7], &grid).unwrap().tau_estimate, 0.0);
    let geo: Vec<f64> = (1..=20).map(|k| 1.0 - 2f64.powi(-k)).collect();
    assert!(limit_set_metrics(&geo, &grid).unwrap().tau_estimate <= 0.05);
    let tau = limit_set_metrics(&cantor_endpoints(10), &grid).unwrap().tau_estimate;
    assert!((tau - 2f64.ln() / 3f64.ln()).abs() < 0.05);

    let e = gevrey_envelope(&determinant_series(&diag(&[c(1.0, 0.0)]), 2).unwrap(), 2, &[0.5, 1.0]).unwrap();
    assert_eq!(e.g, vec![3.0, 2.0, 0.0]);
    assert!(e.t.iter().all(|t| t.1 == 0.0));
}

#[test]
fn scattering_values() {
    assert!(jost_function_check(&RealJacobiSpec::single_site(0.3)).unwrap().admissible());
    assert!(jost_function_check(&RealJacobiSpec::single_site(0.5)).unwrap().resonance_plus);
    assert!(!jost_function_check(&RealJacobiSpec::single_site(1.0)).unwrap().admissible());
    assert!(scattering_function(&RealJacobiSpec::single_site(1.0), 10).is_err());

    let free = scattering_function(&RealJacobiSpec::free(), 10).unwrap();
    assert!((free.coeff(0) + 1.0).abs() < 1e-14 && (1..64).all(|n| free.coeff(n).abs() < 1e-14));
    let back = inverse_scattering(&free, 4).unwrap();
    assert!(back.max_entry_error(&RealJacobiSpec::free()) < 1e-14);
    assert_eq!(verify_decay_bound(&free, &RealJacobiSpec::free(), 10).c_min, 0.0);

    let s = RealJacobiSpec::single_site(0.3);
    let d = scattering_function(&s, 12).unwrap();
    assert!(verify_decay_bound(&d, &s, 20).c_min.is_finite());
    let raw = ScatteringData::from_coefficients(d.grid_k, d.support, d.f.clone());
    assert_eq!(raw.fhat, d.fhat);
}

#[test]
fn pavlov_sequence() {
    let m = PavlovModel::new(0.3, 0.0).unwrap();
    let r = m.find_roots(5).unwrap();
    assert!(r.roots.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
    let l = m.predicted_eigenvalues(&r).unwrap();
    assert!(l.iter().all(|l| l.re == 0.0 && l.im < 0.0));
    assert!(l.windows(2).all(|w| w[1].norm() < w[0].norm()));
    assert!(m.accumulation_point() == 0.0);

    let shifted = PavlovModel::new(0.3, 0.5).unwrap();
    assert!((shifted.accumulation_point() + 0.8).abs() < 1e-15);
    let l = shifted.predicted_eigenvalues(&shifted.find_roots(3).unwrap()).unwrap();
    assert!(l.iter().all(|l| (l.re + 0.8).abs() < 1e-3));
}

#[test]
fn chebyshev_recurrence() {
    let t = WeightTable::from_fn(2048, |x| 1.0 / (PI * (1.0 - x * x).sqrt()));
    let (a, b) = recurrence_from_weight(&t, 50).unwrap();
    assert!((a[0] - 0.5f64.sqrt()).abs() < 1e-12);
    assert!(a[1..].iter().all(|a| (a - 0.5).abs() < 1e-12) && b.iter().all(|b| b.abs() < 1e-12));
}
