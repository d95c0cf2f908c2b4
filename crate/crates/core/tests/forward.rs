mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsspec_core::io::ProblemFile;
use tsspec_core::propagation::{d_functions, propagate_exact, wronskians, EntireEval};
use tsspec_core::rational::int;
use tsspec_core::spectral::find_spectrum;
use tsspec_core::{PolyRat, Potential, SegmentProfile, TimeScale};

#[test]
fn wronskian_is_one_at_every_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (ts, q) = common::random_discrete(&mut rng, 8);
        let c = propagate_exact(&ts, &q, 1, (int(1), int(0))).unwrap();
        let s = propagate_exact(&ts, &q, 1, (int(0), int(1))).unwrap();
        for w in wronskians(&c, &s) {
            assert_eq!(w, PolyRat::one());
        }
    }
}

#[test]
fn numeric_evaluator_agrees_with_polynomials_on_discrete_scales() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let (ts, q) = common::random_discrete(&mut rng, 6);
        let (t0, t1) = d_functions(&ts, &q, 1).unwrap();
        let eval = EntireEval::new(&ts, &q).unwrap();
        for l in [-7.5, -1.0, 0.0, 0.3, 2.0, 11.0] {
            let [a, b] = eval.theta(Complex64::from(l)).unwrap();
            let (e0, e1) = (t0.eval_f64(l), t1.eval_f64(l));
            assert!((a.re - e0).abs() <= 1e-9 * e0.abs().max(1.0), "Θ₀({l}): {} vs {e0}", a.re);
            assert!((b.re - e1).abs() <= 1e-9 * e1.abs().max(1.0), "Θ₁({l}): {} vs {e1}", b.re);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// A constant potential `c` on `[0, d]` shifts `λ`: `Θ₀ = sin(ρd)/ρ`,
    /// `Θ₁ = cos(ρd)` with `ρ² = λ − c`.
    #[test]
    fn constant_potential_on_a_segment(c in -5.0f64..5.0, d in 0.5f64..3.0, lambda in -30.0f64..300.0) {
        let ts = TimeScale::from_f64(&[(0.0, d)]).unwrap();
        let q = Potential::new(&ts, Default::default(), vec![SegmentProfile::Constant(c)]).unwrap();
        let [t0, t1] = EntireEval::new(&ts, &q).unwrap().theta(Complex64::from(lambda)).unwrap();
        let rho = Complex64::from(lambda - c).sqrt();
        let s = if rho.norm() < 1e-8 { Complex64::from(d) } else { (rho * d).sin() / rho };
        prop_assert!((t0.re - s.re).abs() < 1e-8, "Θ₀: {} vs {}", t0.re, s.re);
        prop_assert!((t1.re - (rho * d).cos().re).abs() < 1e-8);
    }
}

#[test]
fn unit_segment_matches_closed_forms() {
    let ts = TimeScale::from_f64(&[(0.0, 1.0)]).unwrap();
    let q = Potential::zero(&ts);
    let eval = EntireEval::new(&ts, &q).unwrap();
    for i in 0..50 {
        let l = -50.0 + 5.0 * i as f64;
        let [t0, t1] = eval.theta(Complex64::from(l)).unwrap();
        let (s, c) = common::unit_segment_oracle(l);
        assert!((t0.re - s).abs() < 1e-10 && (t1.re - c).abs() < 1e-10, "λ = {l}");
    }
}

#[test]
fn spectra_interlace_on_a_discrete_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let (ts, q) = common::random_discrete(&mut rng, 7);
        let s0 = find_spectrum(&ts, &q, 0, 0.0).unwrap();
        let s1 = find_spectrum(&ts, &q, 1, 0.0).unwrap();
        assert_eq!(s1.len(), s0.len());
        for (i, &l0) in s0.values.iter().enumerate() {
            assert!(s1.values[i] < l0);
            if let Some(&next) = s1.values.get(i + 1) {
                assert!(l0 < next);
            }
        }
    }
}

#[test]
fn problem_file_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let Some((ts, q)) = common::random_mixed(&mut rng, 5) else { continue };
        let text = serde_json::to_string(&ProblemFile::from_problem(&ts, &q)).unwrap();
        let (ts2, q2) = ProblemFile::from_json(&text).unwrap().build().unwrap();
        assert_eq!(ts2.intervals(), ts.intervals());
        assert_eq!(q2.isolated_values(), q.isolated_values());
        assert_eq!(q2.segments(), q.segments());
    }
}
