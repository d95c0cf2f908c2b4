//! Propagation of solutions across a time scale: segment transfer matrices,
//! jump matrices at right-scattered points, characteristic functions
//! `Θ₀ = S(b_{N+M})`, `Θ₁ = C(b_{N+M})` and the tail functions `D_j^m`.
//!
//! Two backends are provided. The exact one works with rational polynomials
//! in λ and is available on purely discrete scales; the numeric one
//! evaluates at a fixed complex λ on any scale.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{check_index, Error, Result};
use crate::ode;
use crate::poly::PolyRat;
use crate::quadrature;
use crate::rational::{self, Rational};
use crate::timescale::{Potential, SegmentProfile, TimeScale};

type C64 = Complex64;
type Mat = [[C64; 2]; 2];

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);
const IDENTITY: Mat = [[ONE, ZERO], [ZERO, ONE]];

/// Coefficients of a jump condition at `b_l`: the full 2×2 matrix for
/// `l ∈ 𝒮`, only the value row for the last jump onto a final isolated point.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpMatrix {
    Full([[PolyRat; 2]; 2]),
    Row([PolyRat; 2]),
}

impl JumpMatrix {
    pub fn row(&self, i: usize) -> Option<&[PolyRat; 2]> {
        match (self, i) {
            (JumpMatrix::Full(m), 0 | 1) => Some(&m[i]),
            (JumpMatrix::Row(r), 0) => Some(r),
            _ => None,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&PolyRat> {
        self.row(i).map(|r| &r[j])
    }

    /// Determinant of the square case.
    pub fn det(&self) -> Option<PolyRat> {
        match self {
            JumpMatrix::Full(m) => Some(&(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])),
            JumpMatrix::Row(_) => None,
        }
    }

    /// `self · rhs`; a row on the left yields a row.
    pub fn compose(&self, rhs: &JumpMatrix) -> Option<JumpMatrix> {
        let JumpMatrix::Full(r) = rhs else { return None };
        let times = |row: &[PolyRat; 2]| -> [PolyRat; 2] {
            [&(&row[0] * &r[0][0]) + &(&row[1] * &r[1][0]), &(&row[0] * &r[0][1]) + &(&row[1] * &r[1][1])]
        };
        Some(match self {
            JumpMatrix::Full(l) => JumpMatrix::Full([times(&l[0]), times(&l[1])]),
            JumpMatrix::Row(l) => JumpMatrix::Row(times(l)),
        })
    }
}

fn jump_entries(gap: &Rational, qb: Option<&Rational>) -> JumpMatrix {
    let top = [PolyRat::one(), PolyRat::constant(gap.clone())];
    match qb {
        None => JumpMatrix::Row(top),
        Some(qb) => {
            // g(q − λ) and 1 + g²(q − λ)
            let a21 = PolyRat::linear(gap * qb, -gap.clone());
            let g2 = gap * gap;
            let a22 = PolyRat::linear(Rational::from_integer(1.into()) + &g2 * qb, -g2);
            JumpMatrix::Full([top, [a21, a22]])
        }
    }
}

/// Jump matrix `α^l` for `1 ≤ l ≤ N+M−1`.
pub fn jump_matrix(ts: &TimeScale, q: &Potential, l: usize) -> Result<JumpMatrix> {
    check_index("l", l, 1, ts.len() - 1)?;
    if ts.in_s(l) {
        Ok(jump_entries(ts.gap(l), Some(&q.jump_value(ts, l)?)))
    } else {
        Ok(jump_entries(ts.gap(l), None))
    }
}

/// `l_k` for `0 ≤ k ≤ N+1`, with `l_0 = 1` and `l_{N+1} = N+M`.
pub fn segment_bound(ts: &TimeScale, k: usize) -> usize {
    match k {
        0 => 1,
        k if k <= ts.n_segments() => ts.segment_interval(k),
        _ => ts.len(),
    }
}

/// Ordered product `β^{l_k−s} = α^{l_k−1} ⋯ α^{l_k−s}` for
/// `1 ≤ k ≤ N+μ₁` and `1 ≤ s ≤ l_k − l_{k−1}`.
pub fn beta_product(ts: &TimeScale, q: &Potential, k: usize, s: usize) -> Result<JumpMatrix> {
    let kmax = ts.n_segments() + usize::from(ts.mu1());
    check_index("k", k, 1, kmax)?;
    let lk = segment_bound(ts, k);
    let prev = segment_bound(ts, k - 1);
    check_index("s", s, 1, (lk - prev).min(lk - 1))?;
    let mut acc = jump_matrix(ts, q, lk - 1)?;
    for l in (lk - s..lk - 1).rev() {
        acc = acc.compose(&jump_matrix(ts, q, l)?).expect("inner jumps are square");
    }
    Ok(acc)
}

/// Which arithmetic a propagation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Rational polynomials in λ (discrete scales only).
    Exact,
    #[default]
    Numeric,
}

/// Value and Δ-derivative of a solution at a breakpoint. The derivative is
/// absent at a final isolated point.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState<T> {
    /// Interval index `l` of the point.
    pub interval: usize,
    pub position: f64,
    pub y: T,
    pub y_delta: Option<T>,
}

/// `(sin √w)/√w` and `cos √w` as entire functions of `w`.
fn sinc_cos(w: C64) -> (C64, C64) {
    if w.norm() < 1e-8 {
        // (−w)^k/(2k+1)! and (−w)^k/(2k)! up to degree 4
        let mut s = ZERO;
        let mut c = ZERO;
        let mut term = ONE;
        for k in 0..5 {
            c += term / factorial(2 * k);
            s += term / factorial(2 * k + 1);
            term *= -w;
        }
        (s, c)
    } else {
        let r = csqrt(w);
        (r.sin() / r, r.cos())
    }
}

/// Principal square root without the polar round trip, which would swamp
/// the tiny imaginary parts used for complex-step derivatives.
fn csqrt(w: C64) -> C64 {
    let m = w.norm();
    if w.re >= 0.0 {
        let s = (0.5 * (m + w.re)).sqrt();
        C64::new(s, w.im / (2.0 * s))
    } else {
        let t = (0.5 * (m - w.re)).sqrt();
        C64::new(w.im.abs() / (2.0 * t), t.copysign(w.im))
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Free transfer matrix over length `d` for `y'' = (c − λ) y`, in terms of
/// `z = λ − c`.
fn constant_transfer(z: C64, d: f64) -> Mat {
    let (s, c) = sinc_cos(z * d * d);
    let sd = s * d;
    [[c, sd], [-z * sd, c]]
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn ode_settings(base: &ode::Settings, lambda: C64, d: f64) -> ode::Settings {
    ode::Settings { initial_step: (0.1 / (1.0 + lambda.norm().sqrt())).min(d), ..*base }
}

/// Knots at which the profile may fail to be smooth.
fn knots(profile: &SegmentProfile, d: f64) -> Vec<f64> {
    match profile {
        SegmentProfile::Samples(s) => {
            let cells = s.len() - 1;
            (0..=cells).map(|i| d * i as f64 / cells as f64).collect()
        }
        _ => vec![0.0, d],
    }
}

/// Transfer matrix mapping `(y, y')` at the left end of a segment of length
/// `d` to the right end.
pub fn segment_transfer(profile: &SegmentProfile, d: f64, lambda: C64) -> Result<Mat> {
    segment_transfer_with(profile, d, lambda, &ode::Settings::default())
}

fn segment_transfer_with(profile: &SegmentProfile, d: f64, lambda: C64, cfg: &ode::Settings) -> Result<Mat> {
    if let SegmentProfile::Constant(c) = profile {
        return Ok(constant_transfer(lambda - c, d));
    }
    let cfg = ode_settings(cfg, lambda, d);
    let rhs = |x: f64, u: &[C64; 4]| {
        let k = profile.value(x, d) - lambda;
        [u[2], u[3], u[0] * k, u[1] * k]
    };
    let mut u = [ONE, ZERO, ZERO, ONE];
    for w in knots(profile, d).windows(2) {
        u = ode::integrate(rhs, w[0], w[1], u, &cfg)?;
    }
    Ok([[u[0], u[1]], [u[2], u[3]]])
}

/// Numeric evaluator of the characteristic functions and `D_j^m` at any
/// complex λ. Holds no mutable state and may be shared across threads.
#[derive(Debug, Clone)]
pub struct EntireEval<'a> {
    ts: &'a TimeScale,
    q: &'a Potential,
    jumps: Vec<Option<f64>>,
    gaps: Vec<f64>,
    cfg: ode::Settings,
}

/// `Θ₀, Θ₁` at one λ together with the Wronskian defect `|W(C,S) − 1|` at
/// the last breakpoint where both derivatives exist, as an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub theta: [C64; 2],
    pub wronskian_defect: f64,
    /// `wronskian_defect / max(1, |C·SΔ| + |CΔ·S|)`: the defect relative to
    /// the rounding floor of the two products.
    pub wronskian_defect_scaled: f64,
}

impl<'a> EntireEval<'a> {
    pub fn new(ts: &'a TimeScale, q: &'a Potential) -> Result<Self> {
        Self::with_tolerance(ts, q, 1e-12)
    }

    pub fn with_tolerance(ts: &'a TimeScale, q: &'a Potential, rtol: f64) -> Result<Self> {
        let jumps = (1..ts.len())
            .map(|l| if ts.in_s(l) { q.jump_value_f64(ts, l).map(Some) } else { Ok(None) })
            .collect::<Result<Vec<_>>>()?;
        let gaps = (1..ts.len()).map(|l| ts.gap_f64(l)).collect();
        let cfg = ode::Settings { rtol, ..ode::Settings::default() };
        Ok(EntireEval { ts, q, jumps, gaps, cfg })
    }

    pub fn timescale(&self) -> &TimeScale {
        self.ts
    }

    pub fn potential(&self) -> &Potential {
        self.q
    }

    /// Walks the fundamental matrix `[[C, S], [CΔ, SΔ]]` started at `a_m`
    /// with the identity, reporting it at every breakpoint. The derivative
    /// row is `None` after a final row-only jump.
    fn walk<F>(&self, m: usize, lambda: C64, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, f64, &[C64; 2], Option<&[C64; 2]>),
    {
        let ts = self.ts;
        let mut fm = IDENTITY;
        for l in m..=ts.len() {
            visit(l, ts.a_f64(l), &fm[0], Some(&fm[1]));
            if let Some(k) = ts.segment_of(l) {
                let t = segment_transfer_with(self.q.segment(k), ts.length_f64(k), lambda, &self.cfg)?;
                fm = matmul(&t, &fm);
                visit(l, ts.b_f64(l), &fm[0], Some(&fm[1]));
            }
            if l == ts.len() {
                break;
            }
            let g = self.gaps[l - 1];
            match self.jumps[l - 1] {
                Some(qb) => {
                    let k = (qb - lambda) * g;
                    let a = [[ONE, C64::from(g)], [k, ONE + k * g]];
                    fm = matmul(&a, &fm);
                }
                None => {
                    let row = [fm[0][0] + fm[1][0] * g, fm[0][1] + fm[1][1] * g];
                    visit(l + 1, ts.a_f64(l + 1), &row, None);
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// `(D₀^m(λ), D₁^m(λ))` for `1 ≤ m ≤ N+M−μ₁`.
    pub fn d_pair(&self, m: usize, lambda: C64) -> Result<[C64; 2]> {
        check_index("m", m, 1, self.ts.len() - usize::from(self.ts.mu1()))?;
        let mut last = [ZERO; 2];
        self.walk(m, lambda, |_, _, row, _| last = *row)?;
        // row = (C, S)
        Ok([last[1], last[0]])
    }

    /// `(Θ₀(λ), Θ₁(λ))`.
    pub fn theta(&self, lambda: C64) -> Result<[C64; 2]> {
        self.d_pair(1, lambda)
    }

    pub fn theta_checked(&self, lambda: C64) -> Result<ThetaValue> {
        let mut last = [ZERO; 2];
        let (mut defect, mut scaled) = (0.0, 0.0);
        self.walk(1, lambda, |_, _, row, drow| {
            last = *row;
            if let Some(d) = drow {
                let (p, r) = (row[0] * d[1], d[0] * row[1]);
                defect = (p - r - ONE).norm();
                scaled = defect / (p.norm() + r.norm()).max(1.0);
            }
        })?;
        Ok(ThetaValue { theta: [last[1], last[0]], wronskian_defect: defect, wronskian_defect_scaled: scaled })
    }

    /// Real values and λ-derivatives of `(Θ₀, Θ₁)` at real λ by complex-step
    /// differentiation.
    pub fn theta_with_derivative(&self, lambda: f64) -> Result<([f64; 2], [f64; 2])> {
        let h = 1e-20 * (1.0 + lambda.abs());
        let t = self.theta(C64::new(lambda, h))?;
        Ok(([t[0].re, t[1].re], [t[0].im / h, t[1].im / h]))
    }

    /// Propagates the solution with initial data `(y, yΔ)` at `a_1`.
    pub fn propagate(&self, init: [C64; 2], lambda: C64) -> Result<Vec<SolutionState<C64>>> {
        let mut out = Vec::new();
        self.walk(1, lambda, |l, x, row, drow| {
            out.push(SolutionState {
                interval: l,
                position: x,
                y: row[0] * init[0] + row[1] * init[1],
                y_delta: drow.map(|d| d[0] * init[0] + d[1] * init[1]),
            })
        })?;
        Ok(out)
    }

    /// `Δ∫_{a_1}^{t_r} C(σ(t), λ)² Δt` at real λ, where `t_r = max T^0`.
    pub fn norm_integral(&self, lambda: f64) -> Result<f64> {
        let ts = self.ts;
        let lam = C64::from(lambda);
        let states = self.propagate([ONE, ZERO], lam)?;
        let t_r = ts.t_r();
        let mut total = 0.0;
        for l in 1..ts.len() {
            if ts.b_f64(l) < t_r {
                let y = states.iter().find(|s| s.interval == l + 1).map(|s| s.y.re).unwrap_or(0.0);
                total += self.gaps[l - 1] * y * y;
            }
        }
        for (k, &l) in ts.segment_indices().iter().enumerate() {
            let start = states.iter().find(|s| s.interval == l).expect("segment start visited");
            let y0 = [start.y, start.y_delta.expect("derivative on a segment")];
            total += self.segment_square_integral(k + 1, y0, lam)?;
        }
        Ok(total)
    }

    fn segment_square_integral(&self, k: usize, y0: [C64; 2], lambda: C64) -> Result<f64> {
        let profile = self.q.segment(k);
        let d = self.ts.length_f64(k);
        if let SegmentProfile::Constant(c) = profile {
            let z = lambda - c;
            let f = |x: f64| {
                let t = constant_transfer(z, x);
                let y = (t[0][0] * y0[0] + t[0][1] * y0[1]).re;
                y * y
            };
            return Ok(quadrature::integrate(f, 0.0, d));
        }
        let cfg = ode_settings(&self.cfg, lambda, d);
        let rhs = |x: f64, u: &[C64; 3]| [u[1], u[0] * (profile.value(x, d) - lambda), u[0] * u[0]];
        let mut u = [y0[0], y0[1], ZERO];
        for w in knots(profile, d).windows(2) {
            u = ode::integrate(rhs, w[0], w[1], u, &cfg)?;
        }
        Ok(u[2].re)
    }

    /// Estimated growth order of `Θ₁` between radii `r1 < r2`, from
    /// `log log max_{|λ|=r} |Θ₁(λ)|`. Close to `1/2` when `N > 0`.
    pub fn growth_order(&self, r1: f64, r2: f64) -> Result<f64> {
        let max_mod = |r: f64| -> Result<f64> {
            let mut best = 0.0f64;
            for i in 0..64 {
                let phi = std::f64::consts::TAU * i as f64 / 64.0;
                best = best.max(self.theta(C64::from_polar(r, phi))?[1].norm());
            }
            Ok(best)
        };
        let (m1, m2) = (max_mod(r1)?, max_mod(r2)?);
        Ok((m2.ln().ln() - m1.ln().ln()) / (r2.ln() - r1.ln()))
    }
}

/// Exact propagation on a discrete scale: the states of the solution with
/// initial data `init = (y, yΔ)` at `a_m`, one per point `a_m, …, a_{N+M}`.
pub fn propagate_exact(
    ts: &TimeScale,
    q: &Potential,
    m: usize,
    init: (Rational, Rational),
) -> Result<Vec<SolutionState<PolyRat>>> {
    if !ts.is_discrete() {
        return Err(Error::BackendMismatch(ts.n_segments()));
    }
    check_index("m", m, 1, ts.len() - usize::from(ts.mu1()))?;
    let mut y = PolyRat::constant(init.0);
    let mut yd = Some(PolyRat::constant(init.1));
    let mut out = Vec::with_capacity(ts.len() - m + 1);
    for l in m..=ts.len() {
        out.push(SolutionState { interval: l, position: ts.a_f64(l), y: y.clone(), y_delta: yd.clone() });
        if l == ts.len() {
            break;
        }
        let d = yd.take().expect("derivative present before the last jump");
        match jump_matrix(ts, q, l)? {
            JumpMatrix::Full(a) => {
                let ny = &(&a[0][0] * &y) + &(&a[0][1] * &d);
                yd = Some(&(&a[1][0] * &y) + &(&a[1][1] * &d));
                y = ny;
            }
            JumpMatrix::Row(r) => {
                y = &(&r[0] * &y) + &(&r[1] * &d);
            }
        }
    }
    Ok(out)
}

/// `(D₀^m, D₁^m)` as exact polynomials on a discrete scale.
pub fn d_functions(ts: &TimeScale, q: &Potential, m: usize) -> Result<(PolyRat, PolyRat)> {
    let s = propagate_exact(ts, q, m, (Rational::zero(), rational::int(1)))?;
    let c = propagate_exact(ts, q, m, (rational::int(1), Rational::zero()))?;
    Ok((s.last().unwrap().y.clone(), c.last().unwrap().y.clone()))
}

/// Characteristic functions in the representation suited to the scale.
#[derive(Debug, Clone)]
pub enum CharacteristicPair<'a> {
    Exact { theta0: PolyRat, theta1: PolyRat },
    Numeric(EntireEval<'a>),
}

impl<'a> CharacteristicPair<'a> {
    pub fn eval(&self, lambda: C64) -> Result<[C64; 2]> {
        match self {
            CharacteristicPair::Exact { theta0, theta1 } => {
                Ok([theta0.eval_complex(lambda), theta1.eval_complex(lambda)])
            }
            CharacteristicPair::Numeric(e) => e.theta(lambda),
        }
    }
}

/// `(Θ₀, Θ₁)`: exact polynomials when `N = 0`, a numeric evaluator otherwise.
pub fn characteristic_pair<'a>(ts: &'a TimeScale, q: &'a Potential) -> Result<CharacteristicPair<'a>> {
    if ts.is_discrete() {
        let (theta0, theta1) = d_functions(ts, q, 1)?;
        Ok(CharacteristicPair::Exact { theta0, theta1 })
    } else {
        Ok(CharacteristicPair::Numeric(EntireEval::new(ts, q)?))
    }
}

/// Wronskian `C·SΔ − CΔ·S` of two exact trajectories at every point where
/// both derivatives exist.
pub fn wronskians(c: &[SolutionState<PolyRat>], s: &[SolutionState<PolyRat>]) -> Vec<PolyRat> {
    c.iter()
        .zip(s)
        .filter_map(|(c, s)| {
            let (cd, sd) = (c.y_delta.as_ref()?, s.y_delta.as_ref()?);
            Some(&(&c.y * sd) - &(cd * &s.y))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn four_points() -> (TimeScale, Potential) {
        let ts = TimeScale::from_points(&[int(0), int(1), int(2), int(3)]).unwrap();
        let q = Potential::zero(&ts);
        (ts, q)
    }

    #[test]
    fn jump_matrix_entries() {
        let (ts, q) = four_points();
        let JumpMatrix::Full(a) = jump_matrix(&ts, &q, 1).unwrap() else { panic!() };
        assert_eq!(a[0], [PolyRat::one(), PolyRat::one()]);
        assert_eq!(a[1], [PolyRat::from_i64(&[0, -1]), PolyRat::from_i64(&[1, -1])]);
        assert_eq!(jump_matrix(&ts, &q, 3).unwrap(), JumpMatrix::Row([PolyRat::one(), PolyRat::one()]));
        assert_eq!(jump_matrix(&ts, &q, 1).unwrap().det(), Some(PolyRat::one()));
        assert!(jump_matrix(&ts, &q, 4).is_err());
    }

    #[test]
    fn beta_row_carries_theta0() {
        let (ts, q) = four_points();
        let b = beta_product(&ts, &q, 1, 3).unwrap();
        assert_eq!(b.entry(0, 1), Some(&PolyRat::from_i64(&[3, -4, 1])));
        assert_eq!(b.entry(0, 0), Some(&PolyRat::from_i64(&[1, -3, 1])));
        assert_eq!(beta_product(&ts, &q, 1, 1).unwrap(), jump_matrix(&ts, &q, 3).unwrap());
    }

    #[test]
    fn four_point_characteristic_functions() {
        let (ts, q) = four_points();
        let (t0, t1) = d_functions(&ts, &q, 1).unwrap();
        assert_eq!(t0, PolyRat::from_i64(&[3, -4, 1]));
        assert_eq!(t1, PolyRat::from_i64(&[1, -3, 1]));
        let (d0, d1) = d_functions(&ts, &q, 2).unwrap();
        assert_eq!(d0, PolyRat::from_i64(&[2, -1]));
        assert_eq!(d1, PolyRat::from_i64(&[1, -1]));
        assert_eq!(d_functions(&ts, &q, 3).unwrap().0, PolyRat::one());
        assert!(d_functions(&ts, &q, 4).is_err());
    }

    #[test]
    fn exact_backend_refuses_segments() {
        let ts = TimeScale::from_f64(&[(0.0, 1.0)]).unwrap();
        let q = Potential::zero(&ts);
        assert_eq!(d_functions(&ts, &q, 1).unwrap_err(), Error::BackendMismatch(1));
    }

    #[test]
    fn exact_wronskian_is_one() {
        let (ts, q) = four_points();
        let s = propagate_exact(&ts, &q, 1, (int(0), int(1))).unwrap();
        let c = propagate_exact(&ts, &q, 1, (int(1), int(0))).unwrap();
        let w = wronskians(&c, &s);
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(|p| *p == PolyRat::one()));
    }

    #[test]
    fn free_transfer_matches_closed_form() {
        let rho = 2.5f64;
        let t = segment_transfer(&SegmentProfile::Constant(0.0), 1.0, C64::from(rho * rho)).unwrap();
        assert!((t[0][0].re - rho.cos()).abs() < 1e-14);
        assert!((t[0][1].re - rho.sin() / rho).abs() < 1e-14);
        assert!((t[1][0].re + rho * rho.sin()).abs() < 1e-13);
        let t0 = segment_transfer(&SegmentProfile::Constant(0.0), 1.0, ZERO).unwrap();
        assert_eq!(t0, [[ONE, ONE], [ZERO, ONE]]);
        // series branch agrees with the trigonometric one near the switch
        let (s1, c1) = sinc_cos(C64::from(0.99e-8));
        let (s2, c2) = sinc_cos(C64::from(1.01e-8));
        assert!((s1 - s2).norm() < 1e-9 && (c1 - c2).norm() < 1e-8);
    }

    #[test]
    fn integrated_transfer_is_unimodular_and_matches_constant() {
        let lam = C64::from(30.0);
        let poly = SegmentProfile::Polynomial(vec![2.0]);
        let a = segment_transfer(&poly, 1.5, lam).unwrap();
        let b = segment_transfer(&SegmentProfile::Constant(2.0), 1.5, lam).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a[i][j] - b[i][j]).norm() < 1e-10);
            }
        }
        let var = SegmentProfile::Samples(vec![0.0, 3.0, -1.0, 2.0]);
        let t = segment_transfer(&var, 2.0, lam).unwrap();
        let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
        assert!((det - ONE).norm() < 1e-10);
    }

    #[test]
    fn numeric_agrees_with_exact_on_discrete_scale() {
        let ts = TimeScale::from_points(&[int(0), int(1), int(3), int(4), int(6)]).unwrap();
        let q = Potential::discrete(&ts, &[int(1), rational::ratio(-1, 2), int(2)]).unwrap();
        let (t0, t1) = d_functions(&ts, &q, 1).unwrap();
        let e = EntireEval::new(&ts, &q).unwrap();
        for lam in [-7.5, -1.0, 0.0, 0.3, 4.0, 9.9] {
            let v = e.theta(C64::from(lam)).unwrap();
            assert!((v[0].re - t0.eval_f64(lam)).abs() <= 1e-12 * t0.magnitude_at(lam).max(1.0));
            assert!((v[1].re - t1.eval_f64(lam)).abs() <= 1e-12 * t1.magnitude_at(lam).max(1.0));
            let (_, d) = e.theta_with_derivative(lam).unwrap();
            let exact = t1.derivative().eval_f64(lam);
            assert!((d[1] - exact).abs() <= 1e-10 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn two_unit_segments_theta1_closed_form() {
        let ts = TimeScale::from_f64(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let q = Potential::zero(&ts);
        let e = EntireEval::new(&ts, &q).unwrap();
        for rho in [0.3f64, 1.0, 4.2, 11.0] {
            let lam = rho * rho;
            let (s, c) = rho.sin_cos();
            let theta1 = (lam - 1.0) * s * s + c * c - 2.0 * rho * s * c;
            let theta0 = c * c + (2.0 - lam) / rho * c * s - s * s;
            let v = e.theta_checked(C64::from(lam)).unwrap();
            assert!((v.theta[1].re - theta1).abs() < 1e-10 * lam.max(1.0));
            assert!((v.theta[0].re - theta0).abs() < 1e-10 * lam.max(1.0));
            assert!(v.wronskian_defect < 1e-12);
        }
    }

    #[test]
    fn norm_integral_on_unit_segment() {
        let ts = TimeScale::from_f64(&[(0.0, 1.0)]).unwrap();
        let q = Potential::zero(&ts);
        let e = EntireEval::new(&ts, &q).unwrap();
        let rho = std::f64::consts::FRAC_PI_2;
        assert!((e.norm_integral(rho * rho).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn growth_order_is_one_half_with_segments() {
        let ts = TimeScale::from_f64(&[(0.0, 1.0)]).unwrap();
        let q = Potential::zero(&ts);
        let e = EntireEval::new(&ts, &q).unwrap();
        let order = e.growth_order(1e4, 1e6).unwrap();
        assert!((order - 0.5).abs() < 0.1, "order {order}");
    }
}
