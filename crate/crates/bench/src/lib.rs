//! Fixed problems shared by the benchmarks in `benches/`.

use tsspec_core::rational::{int, ratio};
use tsspec_core::{Potential, Rational, TimeScale};

/// `{0, 1, 2, 3}` with `q = 0`.
pub fn four_points() -> (TimeScale, Potential) {
    let ts = TimeScale::from_points(&[int(0), int(1), int(2), int(3)]).unwrap();
    let q = Potential::zero(&ts);
    (ts, q)
}

/// Eight isolated points with uneven rational gaps and a nonzero potential.
pub fn eight_points() -> (TimeScale, Potential) {
    let gaps = [ratio(1, 2), int(1), ratio(5, 3), ratio(2, 5), int(3), ratio(7, 4), ratio(1, 3)];
    let mut x = int(0);
    let mut points = vec![x.clone()];
    for g in gaps {
        x += g;
        points.push(x.clone());
    }
    let ts = TimeScale::from_points(&points).unwrap();
    let values: Vec<Rational> = [(3, 1), (-2, 7), (1, 1), (0, 1), (-11, 5), (4, 9)].iter().map(|&(p, q)| ratio(p, q)).collect();
    let q = Potential::discrete(&ts, &values).unwrap();
    (ts, q)
}

/// `[0, 1] ∪ [2, 3]` with `q = 0`.
pub fn two_segments() -> (TimeScale, Potential) {
    let ts = TimeScale::from_f64(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let q = Potential::zero(&ts);
    (ts, q)
}

/// `[0, 1] ∪ {1.5} ∪ [2, 4]` with `q(1.5) = 1` and `q = 0` on the segments.
pub fn mixed() -> (TimeScale, Potential) {
    let ts = TimeScale::from_f64(&[(0.0, 1.0), (1.5, 1.5), (2.0, 4.0)]).unwrap();
    let iso = Potential::required_points(&ts).into_iter().map(|l| (l, int(1))).collect();
    let segments = vec![tsspec_core::SegmentProfile::Constant(0.0); ts.n_segments()];
    let q = Potential::new(&ts, iso, segments).unwrap();
    (ts, q)
}
