#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use tsspec_core::rational::{int, ratio};
use tsspec_core::{Potential, Rational, SegmentProfile, TimeScale};

/// Random purely discrete problem: `M ∈ [3, max_m]` points, gaps `p/r ≤ 5`
/// with `r ≤ 5`, potential values `p/r` with `|p|, r ≤ 20`.
pub fn random_discrete<R: Rng>(rng: &mut R, max_m: usize) -> (TimeScale, Potential) {
    let m = rng.gen_range(3..=max_m);
    let mut x = int(rng.gen_range(-3..=3));
    let mut points = vec![x.clone()];
    for _ in 1..m {
        let den = rng.gen_range(1..=5);
        x += ratio(rng.gen_range(1..=5 * den), den);
        points.push(x.clone());
    }
    let ts = TimeScale::from_points(&points).unwrap();
    let values: Vec<Rational> =
        (0..m - 2).map(|_| ratio(rng.gen_range(-20..=20), rng.gen_range(1..=20))).collect();
    let q = Potential::discrete(&ts, &values).unwrap();
    (ts, q)
}

/// Random scale mixing segments (lengths in halves) and isolated points,
/// with rational gaps and potential values.
pub fn random_mixed<R: Rng>(rng: &mut R, len: usize) -> Option<(TimeScale, Potential)> {
    let mut x = int(0);
    let mut intervals = Vec::new();
    for _ in 0..len {
        let end = if rng.gen_bool(0.5) { &x + ratio(rng.gen_range(1..5), 2) } else { x.clone() };
        intervals.push((x.clone(), end.clone()));
        x = end + ratio(rng.gen_range(1..=20), rng.gen_range(1..=20));
    }
    let ts = TimeScale::new(intervals).ok()?;
    let iso: BTreeMap<usize, Rational> = Potential::required_points(&ts)
        .into_iter()
        .map(|l| (l, ratio(rng.gen_range(-20..=20), rng.gen_range(1..=20))))
        .collect();
    let segments = (0..ts.n_segments()).map(|_| SegmentProfile::Constant(rng.gen_range(-8..=8) as f64 / 4.0)).collect();
    let q = Potential::new(&ts, iso, segments).ok()?;
    Some((ts, q))
}

/// `(sin ρ/ρ, cos ρ)` with `ρ² = λ`.
pub fn unit_segment_oracle(lambda: f64) -> (f64, f64) {
    let rho = Complex64::from(lambda).sqrt();
    let sinc = if rho.norm() < 1e-8 { Complex64::from(1.0) } else { rho.sin() / rho };
    (sinc.re, rho.cos().re)
}

/// Closed forms of both characteristic functions on `[0,1] ∪ [2,3]`, `q ≡ 0`.
pub fn two_segment_oracle(lambda: f64) -> (f64, f64) {
    let rho = Complex64::from(lambda).sqrt();
    let (s, c) = (rho.sin(), rho.cos());
    let l = Complex64::from(lambda);
    let sc_over_rho = if rho.norm() < 1e-8 { c } else { c * s / rho };
    let t0 = c * c + (2.0 - l) * sc_over_rho - s * s;
    let t1 = (l - 1.0) * s * s + c * c - 2.0 * rho * s * c;
    (t0.re, t1.re)
}
