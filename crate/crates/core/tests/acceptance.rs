//! Acceptance suite: one PASS/FAIL line per criterion, with pinned
//! tolerances and time budgets. Runs as a plain binary (`harness = false`).

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsspec_core::asymptotics::{transfer_leading_coeffs, verify_asymptotics, verify_weights};
use tsspec_core::inverse::{peel_potential, roundtrip_batch, DataKind};
use tsspec_core::propagation::{beta_product, d_functions, propagate_exact, segment_bound, wronskians};
use tsspec_core::rational::{int, Rational};
use tsspec_core::spectral::{
    find_spectrum, spectra_disjointness_check, weight_norm_identity_check, weight_numbers, RootSet,
};
use tsspec_core::{BranchLabel, EntireEval, PolyRat, Potential, Predictor, TimeScale};

use common::{random_discrete, random_mixed, two_segment_oracle, unit_segment_oracle};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn four_points() -> (TimeScale, Potential) {
    let ts = TimeScale::from_points(&[int(0), int(1), int(2), int(3)]).unwrap();
    let q = Potential::zero(&ts);
    (ts, q)
}

fn criterion1() -> Check {
    let (ts, q) = four_points();
    let (t0, t1) = d_functions(&ts, &q, 1).map_err(err)?;
    ensure(t0 == PolyRat::from_i64(&[3, -4, 1]), || format!("Θ₀ = {t0}"))?;
    ensure(t1 == PolyRat::from_i64(&[1, -3, 1]), || format!("Θ₁ = {t1}"))?;
    let s0 = find_spectrum(&ts, &q, 0, 0.0).map_err(err)?;
    let exact0 = s0.exact.as_ref().map(|e| e.root_set());
    ensure(exact0 == Some(RootSet::Values(vec![int(1), int(3)])), || format!("Λ₀ = {exact0:?}"))?;
    let s1 = find_spectrum(&ts, &q, 1, 0.0).map_err(err)?;
    let r5 = 5f64.sqrt();
    let expected = [(3.0 - r5) / 2.0, (3.0 + r5) / 2.0];
    let dev = s1.values.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(s1.len() == 2 && dev <= 1e-12, || format!("Λ₁ = {:?}", s1.values))?;
    Ok(format!("Λ₁ deviation {dev:.1e}"))
}

fn criterion2() -> Check {
    let ts = TimeScale::from_f64(&[(0.0, 1.0)]).unwrap();
    let q = Potential::zero(&ts);
    let eval = EntireEval::new(&ts, &q).map_err(err)?;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let lambda = -50.0 + 250.0 * i as f64 / 99.0;
        let th = eval.theta(Complex64::from(lambda)).map_err(err)?;
        let (s, c) = unit_segment_oracle(lambda);
        worst = worst.max((th[0].re - s).abs()).max((th[1].re - c).abs());
    }
    ensure(worst < 1e-8, || format!("max |Θ − closed form| = {worst:.2e}"))?;
    let s1 = find_spectrum(&ts, &q, 1, (5.2 * PI).powi(2)).map_err(err)?;
    ensure(s1.len() >= 5, || format!("only {} eigenvalues", s1.len()))?;
    let mut dev = 0.0f64;
    for n in 1..=5 {
        dev = dev.max((s1.values[n - 1] - (PI * (n as f64 - 0.5)).powi(2)).abs());
    }
    ensure(dev < 1e-8, || format!("eigenvalue deviation {dev:.2e}"))?;
    Ok(format!("Θ deviation {worst:.1e}, eigenvalue deviation {dev:.1e}"))
}

fn criterion3() -> Check {
    let ts = TimeScale::from_f64(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let q = Potential::zero(&ts);
    let eval = EntireEval::new(&ts, &q).map_err(err)?;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let lambda = -50.0 + 450.0 * i as f64 / 99.0;
        let th = eval.theta(Complex64::from(lambda)).map_err(err)?;
        let (t0, t1) = two_segment_oracle(lambda);
        worst = worst.max((th[0].re - t0).abs()).max((th[1].re - t1).abs());
    }
    ensure(worst < 1e-8, || format!("max |Θ − closed form| = {worst:.2e}"))?;
    let predictor = Predictor::new(&ts, &q);
    let lambda_max = (20.6 * PI).powi(2);
    let mut notes = Vec::new();
    for j in 0..2u8 {
        let s = find_spectrum(&ts, &q, j, lambda_max).map_err(err)?;
        let bounded = s.labels.iter().filter(|l| **l == BranchLabel::Bounded).count();
        ensure(bounded == 1 + j as usize, || format!("j={j}: {bounded} bounded eigenvalues"))?;
        let report = verify_asymptotics(&predictor, j, &s.labeled(), 1..=20).map_err(err)?;
        for k in 1..=2 {
            let e = |n: usize| report.rows.iter().find(|r| r.k == k && r.n == n).map(|r| r.e_n).unwrap();
            ensure(e(20) < e(5), || format!("j={j} k={k}: e_20 = {:.2e} ≥ e_5 = {:.2e}", e(20), e(5)))?;
            notes.push(format!("j{j}k{k} e5={:.1e} e20={:.1e}", e(5), e(20)));
        }
    }
    Ok(format!("Θ deviation {worst:.1e}; {}", notes.join(", ")))
}

fn criterion4() -> Check {
    let (ts, _) = four_points();
    let r = peel_potential(&ts, &PolyRat::from_i64(&[3, -4, 1]), &PolyRat::from_i64(&[1, -3, 1])).map_err(err)?;
    let s = &r.trace.steps;
    ensure(s.len() == 2, || format!("{} steps", s.len()))?;
    ensure(s[0].d0_next == PolyRat::from_i64(&[2, -1]), || format!("D₀² = {}", s[0].d0_next))?;
    ensure(s[0].quotient.coeff(0) == int(2), || format!("first quotient {}", s[0].quotient))?;
    ensure(s[0].q_value == int(0), || format!("q(0) = {}", s[0].q_value))?;
    ensure(s[0].d1_next == PolyRat::from_i64(&[1, -1]), || format!("D₁² = {}", s[0].d1_next))?;
    ensure(s[1].d0_next == PolyRat::one(), || format!("D₀³ = {}", s[1].d0_next))?;
    ensure(s[1].quotient == PolyRat::from_i64(&[2, -1]), || format!("second quotient {}", s[1].quotient))?;
    ensure(s[1].q_value == int(0), || format!("q(1) = {}", s[1].q_value))?;
    Ok("trace reproduced exactly".into())
}

fn criterion5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases: Vec<_> = (0..100).map(|_| random_discrete(&mut rng, 8)).collect();
    let reports = roundtrip_batch(&cases, &DataKind::ALL);
    let failed: Vec<_> = reports.iter().filter(|r| !r.exact_match).collect();
    ensure(failed.is_empty(), || format!("{} of {} failed, first: {:?}", failed.len(), reports.len(), failed[0]))?;
    Ok(format!("{} exact recoveries", reports.len()))
}

fn criterion6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let (ts, q) = random_discrete(&mut rng, 8);
        let c = propagate_exact(&ts, &q, 1, (int(1), int(0))).map_err(err)?;
        let s = propagate_exact(&ts, &q, 1, (int(0), int(1))).map_err(err)?;
        ensure(wronskians(&c, &s).iter().all(|w| *w == PolyRat::one()), || "exact Wronskian ≠ 1".into())?;
        let s0 = find_spectrum(&ts, &q, 0, 0.0).map_err(err)?;
        let s1 = find_spectrum(&ts, &q, 1, 0.0).map_err(err)?;
        ensure(spectra_disjointness_check(&s0, &s1, 1e-12).exact_disjoint == Some(true), || "shared zero".into())?;
        let w = weight_numbers(&ts, &q, &s1).map_err(err)?;
        ensure(w.exact.as_ref().is_some_and(|e| e.all_positive), || "non-positive weight".into())?;
        let norm = weight_norm_identity_check(&ts, &q, &s1, &w, 1e-9).map_err(err)?;
        ensure(norm.exact == Some(true), || format!("norm identity fails on {ts:?}"))?;
    }

    let unit = TimeScale::from_f64(&[(0.0, 1.0)]).unwrap();
    let two = TimeScale::from_f64(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let mixed = TimeScale::from_f64(&[(0.0, 1.0), (2.0, 3.0), (3.5, 3.5), (4.0, 4.0)]).unwrap();
    let mut max_defect = 0.0f64;
    let mut max_abs_defect = 0.0f64;
    let mut max_norm_dev = 0.0f64;
    for ts in [&unit, &two, &mixed] {
        let q = Potential::zero(ts);
        let eval = EntireEval::new(ts, &q).map_err(err)?;
        for i in 0..40 {
            let lambda = -30.0 + 12.0 * i as f64;
            let v = eval.theta_checked(Complex64::from(lambda)).map_err(err)?;
            max_defect = max_defect.max(v.wronskian_defect_scaled);
            max_abs_defect = max_abs_defect.max(v.wronskian_defect);
        }
        let lambda_max = 900.0;
        let s0 = find_spectrum(ts, &q, 0, lambda_max).map_err(err)?;
        let s1 = find_spectrum(ts, &q, 1, lambda_max).map_err(err)?;
        let d = spectra_disjointness_check(&s0, &s1, 1e-10);
        ensure(d.passed, || format!("spectra meet: {:?}", d.violations))?;
        let w = weight_numbers(ts, &q, &s1).map_err(err)?;
        ensure(w.values.iter().all(|a| *a > 0.0), || "non-positive weight".into())?;
        if std::ptr::eq(ts, &unit) {
            let norm = weight_norm_identity_check(ts, &q, &s1, &w, 1e-8).map_err(err)?;
            max_norm_dev = norm.max_deviation;
            ensure(norm.passed, || format!("norm identity deviation {:.2e}", norm.max_deviation))?;
        }
    }
    ensure(max_defect < 1e-10, || format!("scaled Wronskian defect {max_defect:.2e}"))?;
    Ok(format!(
        "scaled Wronskian defect {max_defect:.1e} (absolute {max_abs_defect:.1e}), norm identity deviation {max_norm_dev:.1e}"
    ))
}

fn criterion7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut configs = 0;
    let mut checked = 0;
    while configs < 50 {
        let Some((ts, q)) = random_mixed(&mut rng, 2 + configs % 6) else { continue };
        configs += 1;
        let n = ts.n_segments();
        for k in 1..=n + usize::from(ts.mu1()) {
            let lk = segment_bound(&ts, k);
            for s in 1..=lk - segment_bound(&ts, k - 1) {
                let beta = beta_product(&ts, &q, k, s).map_err(err)?;
                for i in 1..=2 - usize::from(k == n + 1) {
                    for j in 1..=2 {
                        let c = transfer_leading_coeffs(&ts, &q, k, s, i, j).map_err(err)?;
                        let p = beta.entry(i - 1, j - 1).ok_or("missing entry")?;
                        let next = if c.degree() == 0 { Rational::from_integer(0.into()) } else { p.coeff(c.degree() - 1) };
                        ensure(p.degree() == Some(c.degree()) && p.leading() == c.a && next == c.next(), || {
                            format!("mismatch at k={k} s={s} i={i} j={j} on {ts:?}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{configs} configurations, {checked} entries"))
}

fn criterion8() -> Check {
    let ts = TimeScale::from_f64(&[(0.0, 1.0), (2.0, 4.0)]).unwrap();
    let q = Potential::zero(&ts);
    let predictor = Predictor::new(&ts, &q);
    ensure(predictor.commensurability.is_some(), || "segments reported incommensurable".into())?;
    let lambda_max = (31.5 * PI).powi(2);
    let mut notes = Vec::new();
    for j in 0..2u8 {
        let s = find_spectrum(&ts, &q, j, lambda_max).map_err(err)?;
        let report = verify_asymptotics(&predictor, j, &s.labeled(), 1..=30).map_err(err)?;
        for b in &report.branches {
            ensure(b.scaled_bounded, || format!("j={j} k={}: n·e_n not bounded", b.k))?;
            ensure(b.max_n_corrected_residual * 2.0 <= b.max_n_e_n, || {
                format!("j={j} k={}: corrected {:.2e} vs main {:.2e}", b.k, b.max_n_corrected_residual, b.max_n_e_n)
            })?;
            notes.push(format!("j{j}k{} {:.2e}→{:.2e}", b.k, b.max_n_e_n, b.max_n_corrected_residual));
        }
        if j == 1 {
            let w = weight_numbers(&ts, &q, &s).map_err(err)?;
            let wr = verify_weights(&predictor, &w.labeled(), 1..=30).map_err(err)?;
            let b1 = wr.branches.iter().find(|b| b.k == 1).ok_or("no branch 1")?;
            // first segment has length 1
            let limit = 2.0;
            ensure(wr.rows.iter().filter(|r| r.k == 1).all(|r| r.main == limit), || "weight limit ≠ 2/d₁".into())?;
            ensure(b1.scaled_bounded, || "branch-1 n·|α_n − 2/d₁| not bounded".into())?;
            notes.push(format!("weights max n·e_n {:.2e}", b1.max_n_e_n));
        }
    }
    Ok(notes.join(", "))
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "four-point scale: exact characteristic polynomials and eigenvalues", budget: Duration::from_millis(100), run: criterion1 },
        Criterion { id: 2, name: "unit segment: closed forms and first five j=1 eigenvalues", budget: Duration::from_secs(1), run: criterion2 },
        Criterion { id: 3, name: "two unit segments: closed forms and two branch families", budget: Duration::from_secs(5), run: criterion3 },
        Criterion { id: 4, name: "four-point scale: peeling trace", budget: Duration::from_secs(1), run: criterion4 },
        Criterion { id: 5, name: "100 random discrete problems, three data kinds, exact recovery", budget: Duration::from_secs(30), run: criterion5 },
        Criterion { id: 6, name: "invariants: Wronskian, positive weights, disjoint spectra, norm identity", budget: Duration::from_secs(30), run: criterion6 },
        Criterion { id: 7, name: "50 random configurations: two leading transfer coefficients", budget: Duration::from_secs(30), run: criterion7 },
        Criterion { id: 8, name: "segments of lengths 1 and 2: residual scaling, correction and weights", budget: Duration::from_secs(60), run: criterion8 },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {:?}", c.budget)),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "[{}] criterion {}: {} ({:.3}s) {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failures, failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
