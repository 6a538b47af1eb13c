use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use regdom::generate::{interior_real, named_region};
use regdom::spectra::trial_rng;
use regdom::Region;

fn regions(seed: u64) -> Vec<Region> {
    let mut rng = trial_rng(seed, 0);
    (0..6).map(|f| named_region(&mut rng, f).unwrap()).collect()
}

fn point(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-12.0..4.0), rng.random_range(-8.0..8.0))
}

#[test]
fn membership_is_conjugation_symmetric() {
    let mut rng = trial_rng(10, 0);
    for r in regions(10) {
        for _ in 0..1000 {
            let z = point(&mut rng);
            assert_eq!(r.contains(z), r.contains(z.conj()), "{r} at {z}");
        }
    }
}

#[test]
fn regions_are_convex() {
    let mut rng = trial_rng(11, 0);
    for r in regions(11) {
        let inside: Vec<Complex64> = (0..4000).map(|_| point(&mut rng)).filter(|&z| r.contains(z)).collect();
        assert!(inside.len() > 10, "{r}");
        for w in inside.windows(2).take(500) {
            let t = rng.random_range(0.01..0.99);
            let z = w[0] * t + w[1] * (1.0 - t);
            assert!(r.in_closure(z), "{r}: {} {} {z}", w[0], w[1]);
        }
    }
}

#[test]
fn radius_disks_lie_in_the_closure() {
    let mut rng = trial_rng(12, 0);
    for seed in 0..5 {
        for r in regions(seed) {
            for _ in 0..100 {
                let x = interior_real(&mut rng, &r).unwrap();
                let rad = r.radius(x).unwrap();
                let phi = rng.random_range(0.0..std::f64::consts::TAU);
                let z = Complex64::new(x, 0.0) + Complex64::from_polar(rad * (1.0 - 1e-6), phi);
                assert!(r.defining_value(z) <= 1e-9 * (1.0 + z.norm()), "{r} x={x} phi={phi}");
            }
        }
    }
}

#[test]
fn radius_shrinks_under_inclusion() {
    let mut rng = trial_rng(13, 0);
    let pairs = [
        (Region::hyperbola(3.0, 1.0).unwrap(), Region::hyperbola(3.0, 1.0).unwrap().shifted_cone_of().unwrap()),
        (Region::cone(0.0, 0.7).unwrap(), Region::cone(-1.5, 0.7).unwrap()),
        (Region::half_plane(0.0).unwrap(), Region::half_plane(-0.8).unwrap()),
        (Region::horizontal_stripe(2.0).unwrap(), Region::vertical_stripe(-3.0, -1.0).unwrap()),
    ];
    for (outer, inner) in pairs {
        for _ in 0..300 {
            let x = interior_real(&mut rng, &inner).unwrap();
            assert!(inner.radius(x).unwrap() <= outer.radius(x).unwrap() + 1e-9, "{inner} in {outer} at {x}");
        }
    }
}

fn vosp(a: f64, b: f64) -> f64 {
    a * b / (a * a + b * b).sqrt()
}

#[test]
fn altitude_formula_is_monotone() {
    let grid: Vec<f64> = (1..60).map(|k| 0.05 * k as f64 * k as f64).collect();
    for w in grid.windows(2) {
        for &b in &grid {
            assert!(vosp(w[0], b) <= vosp(w[1], b));
            assert!(vosp(b, w[0]) <= vosp(b, w[1]));
        }
    }
}

#[test]
fn generic_form_agrees_with_closed_form() {
    let mut rng = trial_rng(14, 0);
    for r in regions(14) {
        let (l, m) = r.characteristic_matrices();
        let g = Region::lmi(l, m).unwrap();
        let mut disagreements = 0;
        for _ in 0..1000 {
            let z = point(&mut rng);
            // Points within rounding distance of the boundary may differ.
            if r.defining_value(z).abs() > 1e-7 && r.contains(z) != g.contains(z) {
                disagreements += 1;
            }
        }
        assert_eq!(disagreements, 0, "{r}");
    }
}

proptest! {
    #[test]
    fn grammar_round_trips(seed in any::<u64>()) {
        for r in regions(seed) {
            let back: Region = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
