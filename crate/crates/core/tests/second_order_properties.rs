use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use regdom::generate::{commuting_pair, triangular_pair, uniform_matrix};
use regdom::linalg::multiset_distance;
use regdom::report::Verdict;
use regdom::second_order::{
    companion, pencil_at, rh_analysis, sample_perturbed, sufficient_d_stability,
    triangular_shifted_stable, triangular_spectrum, PerturbationForm, RhData, SecondOrderSystem,
};
use regdom::spectra::{eigenvalues, trial_rng, ScalingClass, ScalingTag};
use regdom::{Matrix, Region};

fn max_re(sys: &SecondOrderSystem) -> f64 {
    eigenvalues(&companion(sys)).unwrap().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn companion_eigenvectors_solve_the_pencil() {
    let mut rng = trial_rng(40, 0);
    for _ in 0..300 {
        let n = rng.random_range(1..6);
        let sys = SecondOrderSystem::new(
            uniform_matrix(&mut rng, n, n, -2.0, 2.0),
            uniform_matrix(&mut rng, n, n, -2.0, 2.0),
        )
        .unwrap();
        let c = companion(&sys).map(|v| Complex64::new(v, 0.0));
        for l in eigenvalues(&companion(&sys)).unwrap() {
            // Upper block of a null vector of (C - l I), via SVD.
            let shifted = &c - nalgebra::DMatrix::<Complex64>::identity(2 * n, 2 * n) * l;
            let svd = shifted.svd(false, true);
            let vt = svd.v_t.unwrap();
            let k = (0..2 * n)
                .min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))
                .unwrap();
            let v: Vec<Complex64> = vt.row(k).iter().map(|z| z.conj()).collect();
            // The companion eigenvector is (l u, u); its lower block is u.
            let u = nalgebra::DVector::from_iterator(n, v[n..].iter().copied());
            let g = pencil_at(&sys, l);
            let scale = (1.0 + l.norm()).powi(2) * (1.0 + sys.a.norm() + sys.b.norm());
            assert!((g * &u).norm() <= 1e-6 * scale * u.norm().max(1e-300), "l={l}");
        }
    }
}

#[test]
fn triangular_closed_form_matches_companion() {
    let mut rng = trial_rng(41, 0);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let (a, b) = triangular_pair(&mut rng, n);
        let sys = SecondOrderSystem::new(a, b).unwrap();
        let closed = triangular_spectrum(&sys).unwrap();
        let ev = eigenvalues(&companion(&sys)).unwrap();
        let d = multiset_distance(&closed, &ev);
        // Repeated roots are ill-conditioned in the companion eigensolve.
        let sep = closed
            .iter()
            .enumerate()
            .flat_map(|(i, x)| closed[i + 1..].iter().map(move |y| (x - y).norm()))
            .fold(f64::INFINITY, f64::min);
        if sep > 1e-3 {
            assert!(d < 1e-8 * (1.0 + sys.a.norm() + sys.b.norm()) / sep.min(1.0), "{d}");
        }
    }
}

#[test]
fn triangular_test_is_exact() {
    let mut rng = trial_rng(42, 0);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.random_range(1..=6);
        let (a, b) = triangular_pair(&mut rng, n);
        let sys = SecondOrderSystem::new(a, b).unwrap();
        let alpha = rng.random_range(-2.0..2.0);
        let m = max_re(&sys);
        if (m - alpha).abs() <= 1e-6 {
            continue;
        }
        assert_eq!(triangular_shifted_stable(&sys, alpha).unwrap(), m < alpha, "alpha={alpha}");
        checked += 1;
    }
}

#[test]
fn routh_hurwitz_test_is_exact_for_commuting_pairs() {
    let mut rng = trial_rng(43, 0);
    let mut checked = 0;
    let mut stable = 0;
    while checked < 200 {
        let n = rng.random_range(1..=5);
        let (a, b) = commuting_pair(&mut rng, n);
        let sys = SecondOrderSystem::new(a, b).unwrap();
        for alpha in [0.0, -0.5, 0.3] {
            let m = max_re(&sys);
            if (m - alpha).abs() <= 1e-6 {
                continue;
            }
            let r = rh_analysis(&sys, alpha).unwrap();
            if r.pairs.iter().any(|p| p.delta1.abs() < 1e-9 || p.delta2.abs() < 1e-9) {
                continue;
            }
            assert_eq!(r.verdict == Verdict::Pass, m < alpha, "alpha={alpha} max re={m}");
            stable += usize::from(m < alpha);
        }
        checked += 1;
    }
    assert!(stable > 20);
}

#[test]
fn sufficient_passes_survive_sampling() {
    let mut rng = trial_rng(44, 0);
    let mut passes = 0;
    for _ in 0..60 {
        let n = rng.random_range(1..=4);
        let a = uniform_matrix(&mut rng, n, n, -0.5, 0.5) - Matrix::identity(n, n) * rng.random_range(1.0..3.0);
        let b = Matrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| -rng.random_range(0.2..3.0)));
        let sys = SecondOrderSystem::new(a, b).unwrap();
        let r = sufficient_d_stability(&sys).unwrap();
        if r.check.verdict == Verdict::Pass && r.check.claim.as_deref() == Some("D-stable") {
            passes += 1;
            let v = sample_perturbed(
                &sys,
                PerturbationForm::Full,
                ScalingClass::new(ScalingTag::AllPositiveD),
                &Region::half_plane(0.0).unwrap(),
                200,
                5,
                None,
            )
            .unwrap();
            assert!(!v.found_counterexample(), "{}", v.summary());
        }
    }
    assert!(passes > 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shifted_determinant_at_zero_shift(a in -5.0f64..5.0, c in -5.0f64..5.0, b in -5.0f64..5.0, d in -5.0f64..5.0) {
        let r = RhData::new(Complex64::new(a, c), Complex64::new(b, d), 0.0);
        let want = -(a * a * b + a * c * d + d * d);
        prop_assert!((r.delta2 - want).abs() <= 1e-10 * (1.0 + want.abs()));
        prop_assert!((r.delta2_expanded - want).abs() <= 1e-10 * (1.0 + want.abs()));
        prop_assert!((r.delta2_at_zero.unwrap() + want).abs() <= 1e-10 * (1.0 + want.abs()));
    }

    #[test]
    fn shifted_determinants_agree(a in -5.0f64..5.0, c in -5.0f64..5.0, b in -5.0f64..5.0, d in -5.0f64..5.0, alpha in -2.0f64..2.0) {
        let r = RhData::new(Complex64::new(a, c), Complex64::new(b, d), alpha);
        prop_assert!((r.delta2 - r.delta2_expanded).abs() <= 1e-9 * (1.0 + r.delta2.abs()));
    }
}
