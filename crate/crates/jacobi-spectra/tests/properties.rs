use jacobi_spectra::core::{inverse_joukowski, joukowski, ComplexJacobiSpec, RealJacobiSpec};
use jacobi_spectra::detkit::{det_recursion, det_volterra, determinant_series, eval_series};
use jacobi_spectra::fixtures::{disk_sample, random_admissible_real_spec, random_complex_spec};
use jacobi_spectra::io::{any_spec_from_json, complex_spec_from_json, complex_spec_to_json, real_spec_to_json};
use jacobi_spectra::pavlov::PavlovModel;
use jacobi_spectra::scattering::{inverse_scattering, scattering_function};
use jacobi_spectra::spectra::{dense_truncation_oracle, discrete_spectrum, evaluator, Engine};
use jacobi_spectra::C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn complex_spec(seed: u64, max_dev: f64) -> ComplexJacobiSpec {
    random_complex_spec(&mut ChaCha8Rng::seed_from_u64(seed), 6, max_dev).unwrap()
}

fn model() -> &'static PavlovModel {
    static M: OnceLock<PavlovModel> = OnceLock::new();
    M.get_or_init(|| PavlovModel::new(0.3, 0.0).unwrap())
}

fn off_segment() -> impl Strategy<Value = C64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_filter("away from [-1, 1]", |&(x, y)| y.abs() > 1e-3 || x.abs() > 1.001).prop_map(|(x, y)| C64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn joukowski_inverts(l in off_segment()) {
        let z = inverse_joukowski(l).unwrap();
        prop_assert!(z.norm() < 1.0);
        prop_assert!((joukowski(z).unwrap() - l).norm() <= 1e-12 * l.norm().max(1.0) / (1.0 - z.norm()).max(1e-3));
    }

    #[test]
    fn determinant_is_one_at_origin_and_engines_agree(seed in any::<u64>(), r in 0.0f64..0.9, t in 0.0f64..6.3) {
        let s = complex_spec(seed, 1.0);
        prop_assert_eq!(det_recursion(&s, C64::new(0.0, 0.0), -1), C64::new(1.0, 0.0));
        let z = C64::from_polar(r, t);
        let rec = det_recursion(&s, z, -1);
        let scale = rec.norm().max(1.0);
        prop_assert!((det_volterra(&s, z, -1).unwrap() - rec).norm() <= 1e-11 * scale);
        let series = determinant_series(&s, 2 * s.support())?;
        prop_assert!((eval_series(&series, z).0 - rec).norm() <= 1e-11 * scale);
        let ratio = evaluator(&s, Engine::Ratio).unwrap();
        prop_assert!((ratio(z) - rec).norm() <= 1e-9 * scale);
    }

    #[test]
    fn determinant_degree_is_bounded(seed in any::<u64>()) {
        let s = complex_spec(seed, 1.0);
        let series = determinant_series(&s, 2 * s.support() + 6)?;
        for j in 2 * s.support() + 1..series.coeffs.len() {
            prop_assert!(series.coeff(j).norm() < 1e-12, "δ_{} = {}", j, series.coeff(j));
        }
    }

    #[test]
    fn real_specs_have_conjugate_symmetric_determinants(seed in any::<u64>(), r in 0.0f64..1.0, t in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed % 5) as usize;
        let s = RealJacobiSpec::new(
            (0..n).map(|_| 0.5 + disk_sample(&mut rng, 0.4).re).collect(),
            (0..n).map(|_| disk_sample(&mut rng, 1.0).re).collect(),
        ).unwrap().to_complex();
        let z = C64::from_polar(r, t);
        prop_assert!((det_recursion(&s, z.conj(), -1) - det_recursion(&s, z, -1).conj()).norm() < 1e-12);
    }

    #[test]
    fn spec_files_roundtrip(seed in any::<u64>()) {
        let s = complex_spec(seed, 2.0);
        // Files store `a - 1/2`, so entries come back within an ulp of 1/2.
        let text = complex_spec_to_json(&s);
        for back in [complex_spec_from_json(&text).unwrap(), any_spec_from_json(&text).unwrap()] {
            prop_assert_eq!(back.support(), s.support());
            for n in 0..s.support() {
                prop_assert!((back.a(n) - s.a(n)).norm() <= 1e-15 && (back.c(n) - s.c(n)).norm() <= 1e-15);
                prop_assert_eq!(back.b(n), s.b(n));
            }
        }
    }

    #[test]
    fn herglotz_function_is_positive(x in -2.0f64..2.0, y in 1e-3f64..3.0) {
        prop_assert!(model().weyl_f(C64::new(x, y)).unwrap().im > 0.0);
    }

    #[test]
    fn v_is_real_on_real_axis_and_maps_half_disks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = disk_sample(&mut rng, 0.98);
        prop_assume!(z.im.abs() > 1e-6);
        let v = model().v(z).unwrap();
        prop_assert!((model().v(z.conj()).unwrap() - v.conj()).norm() < 1e-12);
        prop_assert!(v.im * z.im > 0.0);
        prop_assert!(model().v(C64::new(z.re, 0.0)).unwrap().im.abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn finder_and_oracle_agree_inside(seed in any::<u64>()) {
        let s = complex_spec(seed, 1.0);
        let mine = discrete_spectrum(&s, 0.95).unwrap();
        let oracle = dense_truncation_oracle(&s, 300).unwrap().stable;
        for (l, _) in &mine {
            if inverse_joukowski(*l).unwrap().norm() > 0.9 {
                continue;
            }
            let d = oracle.iter().map(|o| (o - l).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-6, "{} not in oracle (distance {})", l, d);
        }
        for o in &oracle {
            if inverse_joukowski(*o).unwrap().norm() < 0.9 {
                prop_assert!(mine.iter().any(|(l, _)| (l - o).norm() < 1e-6), "oracle {} not found", o);
            }
        }
    }

    #[test]
    fn scattering_recovers_the_spec(seed in any::<u64>()) {
        let s = random_admissible_real_spec(&mut ChaCha8Rng::seed_from_u64(seed), 6).unwrap();
        let d = scattering_function(&s, 12).unwrap();
        let r = inverse_scattering(&d, s.support() + 1).unwrap();
        prop_assert!(r.max_entry_error(&s) < 1e-6, "{}", real_spec_to_json(&s));
    }
}
