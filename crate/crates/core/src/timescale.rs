//! Time scales made of finitely many segments and isolated points, the
//! potential living on them, and the Δ-calculus primitives.
//!
//! Interval indices are 1-based throughout: a scale is
//! `[a_1, b_1] ∪ … ∪ [a_{N+M}, b_{N+M}]`, segment `k` (also 1-based) sits at
//! interval `l_k`.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::quadrature;
use crate::rational::{self, Rational};

/// Validated time scale `T = ⋃ [a_l, b_l]` with `b_{l-1} < a_l ≤ b_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[String; 2]>", into = "Vec<[String; 2]>")]
pub struct TimeScale {
    intervals: Vec<(Rational, Rational)>,
    bounds: Vec<(f64, f64)>,
    segment_indices: Vec<usize>,
    gaps: Vec<Rational>,
    lengths: Vec<Rational>,
    mu0: bool,
    mu1: bool,
}

/// Classification of a point by its jump functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// `σ₋(x) = x = σ(x)`, interior of the scale.
    Dense,
    /// `σ₋(x) < x < σ(x)`.
    Isolated,
    LeftIsolatedRightDense,
    RightIsolatedLeftDense,
    /// `x = min T`.
    LeftEnd { right_dense: bool },
    /// `x = max T`.
    RightEnd { left_dense: bool },
}

impl TimeScale {
    /// Validates the interval list and derives the index sets, gaps, segment
    /// lengths and end flags.
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptyScale);
        }
        for (i, (a, b)) in intervals.iter().enumerate() {
            if a > b {
                return Err(Error::ReversedInterval { index: i + 1 });
            }
            if i > 0 && intervals[i - 1].1 >= *a {
                return Err(Error::Overlap { index: i + 1 });
            }
        }
        let segment_indices: Vec<usize> =
            intervals.iter().enumerate().filter(|(_, (a, b))| a < b).map(|(i, _)| i + 1).collect();
        let n = segment_indices.len();
        let m = intervals.len() - n;
        if n == 0 && m < 3 {
            return Err(Error::DegenerateScale { segments: n, points: m });
        }
        let gaps = intervals.windows(2).map(|w| &w[1].0 - &w[0].1).collect();
        let lengths = segment_indices.iter().map(|&l| &intervals[l - 1].1 - &intervals[l - 1].0).collect();
        let bounds = intervals.iter().map(|(a, b)| (rational::to_f64(a), rational::to_f64(b))).collect();
        let mu0 = intervals[0].0 == intervals[0].1;
        let last = intervals.last().unwrap();
        let mu1 = last.0 == last.1;
        Ok(TimeScale { intervals, bounds, segment_indices, gaps, lengths, mu0, mu1 })
    }

    pub fn from_f64(intervals: &[(f64, f64)]) -> Result<Self> {
        let exact = intervals
            .iter()
            .map(|&(a, b)| Ok((rational::from_f64(a)?, rational::from_f64(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(exact)
    }

    /// Purely discrete scale on the given points.
    pub fn from_points(points: &[Rational]) -> Result<Self> {
        Self::new(points.iter().map(|p| (p.clone(), p.clone())).collect())
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    /// `N`, the number of segments.
    pub fn n_segments(&self) -> usize {
        self.segment_indices.len()
    }

    /// `M`, the number of isolated points.
    pub fn n_isolated(&self) -> usize {
        self.intervals.len() - self.segment_indices.len()
    }

    /// `N + M`.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.segment_indices.is_empty()
    }

    /// `l_1 < … < l_N`.
    pub fn segment_indices(&self) -> &[usize] {
        &self.segment_indices
    }

    /// Interval index `l_k` of segment `k`.
    pub fn segment_interval(&self, k: usize) -> usize {
        self.segment_indices[k - 1]
    }

    /// Segment number `k` with `l_k = l`, if interval `l` is a segment.
    pub fn segment_of(&self, l: usize) -> Option<usize> {
        self.segment_indices.binary_search(&l).ok().map(|i| i + 1)
    }

    pub fn is_segment(&self, l: usize) -> bool {
        self.segment_of(l).is_some()
    }

    pub fn a(&self, l: usize) -> &Rational {
        &self.intervals[l - 1].0
    }

    pub fn b(&self, l: usize) -> &Rational {
        &self.intervals[l - 1].1
    }

    pub fn a_f64(&self, l: usize) -> f64 {
        self.bounds[l - 1].0
    }

    pub fn b_f64(&self, l: usize) -> f64 {
        self.bounds[l - 1].1
    }

    /// `a_{l+1} − b_l` for `1 ≤ l < N + M`.
    pub fn gap(&self, l: usize) -> &Rational {
        &self.gaps[l - 1]
    }

    pub fn gap_f64(&self, l: usize) -> f64 {
        rational::to_f64(&self.gaps[l - 1])
    }

    pub fn gaps(&self) -> &[Rational] {
        &self.gaps
    }

    /// Segment lengths `d_k = b_{l_k} − a_{l_k}`.
    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn length(&self, k: usize) -> &Rational {
        &self.lengths[k - 1]
    }

    pub fn length_f64(&self, k: usize) -> f64 {
        rational::to_f64(&self.lengths[k - 1])
    }

    pub fn total_length_f64(&self) -> f64 {
        self.lengths.iter().map(rational::to_f64).sum()
    }

    /// `μ₀`: the first interval is a single point.
    pub fn mu0(&self) -> bool {
        self.mu0
    }

    /// `μ₁`: the last interval is a single point.
    pub fn mu1(&self) -> bool {
        self.mu1
    }

    /// Largest element of `𝒮 = {1, …, N+M−1−μ₁}`, the jumps carrying a full
    /// 2×2 matrix.
    pub fn s_max(&self) -> usize {
        self.len() - 1 - usize::from(self.mu1)
    }

    pub fn in_s(&self, l: usize) -> bool {
        l >= 1 && l <= self.s_max()
    }

    pub fn min(&self) -> f64 {
        self.bounds[0].0
    }

    pub fn max(&self) -> f64 {
        self.bounds[self.len() - 1].1
    }

    fn locate(&self, x: f64) -> Result<usize> {
        self.bounds
            .iter()
            .position(|&(a, b)| a <= x && x <= b)
            .map(|i| i + 1)
            .ok_or(Error::NotInScale(x))
    }

    /// Forward jump `σ(x) = inf {s ∈ T : s > x}`, with `σ(max T) = max T`.
    pub fn sigma(&self, x: f64) -> Result<f64> {
        let l = self.locate(x)?;
        let (_, b) = self.bounds[l - 1];
        Ok(if x < b || l == self.len() { x } else { self.bounds[l].0 })
    }

    /// Backward jump `σ₋(x) = sup {s ∈ T : s < x}`, with `σ₋(min T) = min T`.
    pub fn sigma_minus(&self, x: f64) -> Result<f64> {
        let l = self.locate(x)?;
        let (a, _) = self.bounds[l - 1];
        Ok(if x > a || l == 1 { x } else { self.bounds[l - 2].1 })
    }

    pub fn classify(&self, x: f64) -> Result<PointKind> {
        let fwd = self.sigma(x)?;
        let back = self.sigma_minus(x)?;
        let right_dense = fwd == x && x < self.max();
        let left_dense = back == x && x > self.min();
        Ok(if x == self.min() {
            PointKind::LeftEnd { right_dense }
        } else if x == self.max() {
            PointKind::RightEnd { left_dense }
        } else {
            match (left_dense, right_dense) {
                (true, true) => PointKind::Dense,
                (false, false) => PointKind::Isolated,
                (false, true) => PointKind::LeftIsolatedRightDense,
                (true, false) => PointKind::RightIsolatedLeftDense,
            }
        })
    }

    /// `T^{0^n}`: `n` applications of "drop `max T` if it is left-isolated".
    pub fn truncated(&self, n: usize) -> Vec<(Rational, Rational)> {
        let mut out = self.intervals.clone();
        for _ in 0..n {
            let len = out.len();
            if len >= 2 && out[len - 1].0 == out[len - 1].1 {
                out.pop();
            }
        }
        out
    }

    /// `T^{0²}`, the domain of the potential.
    pub fn core_domain(&self) -> Vec<(Rational, Rational)> {
        self.truncated(2)
    }

    /// `max T^0`: `b_{N+M}` if the last interval is a segment, else `b_{N+M−1}`.
    pub fn t_r(&self) -> f64 {
        if self.mu1 {
            self.b_f64(self.len() - 1)
        } else {
            self.max()
        }
    }

    fn breakpoint(&self, x: f64) -> Result<()> {
        if self.bounds.iter().any(|&(a, b)| a == x || b == x) {
            Ok(())
        } else {
            Err(Error::EndpointNotBreakpoint(x))
        }
    }

    /// Δ-integral of `f` between two interval endpoints `a ≤ b`:
    /// gap-weighted values at right-scattered endpoints plus classical
    /// integrals over the segments inside `[a, b]`.
    ///
    /// Endpoints are matched exactly against the declared interval bounds.
    pub fn delta_integral<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        self.breakpoint(a)?;
        self.breakpoint(b)?;
        if a > b {
            return Err(Error::ReversedBounds { a, b });
        }
        let mut total = 0.0;
        for l in 1..=self.len() {
            let (al, bl) = self.bounds[l - 1];
            if l < self.len() && a <= bl && bl < b {
                total += f(bl) * self.gap_f64(l);
            }
            if al < bl && a <= al && bl <= b {
                total += quadrature::integrate(&f, al, bl);
            }
        }
        Ok(total)
    }
}

impl TryFrom<Vec<[String; 2]>> for TimeScale {
    type Error = Error;
    fn try_from(raw: Vec<[String; 2]>) -> Result<Self> {
        let intervals = raw
            .iter()
            .map(|[a, b]| Ok((rational::parse(a)?.0, rational::parse(b)?.0)))
            .collect::<Result<Vec<_>>>()?;
        TimeScale::new(intervals)
    }
}

impl From<TimeScale> for Vec<[String; 2]> {
    fn from(ts: TimeScale) -> Self {
        ts.intervals.iter().map(|(a, b)| [rational::format(a), rational::format(b)]).collect()
    }
}

/// Potential on one segment, in the local coordinate `x ∈ [0, d_k]`.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentProfile {
    Constant(f64),
    /// Ascending coefficients in `x`.
    Polynomial(Vec<f64>),
    /// Piecewise-linear interpolation of samples on a uniform grid over
    /// `[0, d]` (at least two samples).
    Samples(Vec<f64>),
}

impl SegmentProfile {
    pub fn is_constant(&self) -> bool {
        matches!(self, SegmentProfile::Constant(_))
    }

    pub fn value(&self, x: f64, d: f64) -> f64 {
        match self {
            SegmentProfile::Constant(c) => *c,
            SegmentProfile::Polynomial(cs) => cs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            SegmentProfile::Samples(s) => {
                let cells = (s.len() - 1) as f64;
                let t = (x / d * cells).clamp(0.0, cells);
                let i = (t.floor() as usize).min(s.len() - 2);
                let w = t - i as f64;
                s[i] * (1.0 - w) + s[i + 1] * w
            }
        }
    }

    pub fn derivative(&self, x: f64, d: f64) -> f64 {
        match self {
            SegmentProfile::Constant(_) => 0.0,
            SegmentProfile::Polynomial(cs) => cs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c),
            SegmentProfile::Samples(s) => {
                let cells = (s.len() - 1) as f64;
                let i = ((x / d * cells).floor().max(0.0) as usize).min(s.len() - 2);
                (s[i + 1] - s[i]) * cells / d
            }
        }
    }

    /// `ω = ½ ∫₀^d q`.
    pub fn half_integral(&self, d: f64) -> f64 {
        match self {
            SegmentProfile::Constant(c) => 0.5 * c * d,
            SegmentProfile::Polynomial(cs) => {
                0.5 * cs.iter().enumerate().map(|(k, c)| c * d.powi(k as i32 + 1) / (k + 1) as f64).sum::<f64>()
            }
            SegmentProfile::Samples(s) => {
                let h = d / (s.len() - 1) as f64;
                0.5 * s.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum::<f64>()
            }
        }
    }

    /// Approximate minimum over `[0, d]` (exact for constants and samples).
    pub fn minimum(&self, d: f64) -> f64 {
        match self {
            SegmentProfile::Constant(c) => *c,
            SegmentProfile::Samples(s) => s.iter().copied().fold(f64::INFINITY, f64::min),
            SegmentProfile::Polynomial(_) => {
                (0..=1000).map(|i| self.value(d * i as f64 / 1000.0, d)).fold(f64::INFINITY, f64::min)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            SegmentProfile::Constant(c) if !c.is_finite() => {
                Err(Error::InvalidPotential("non-finite constant".into()))
            }
            SegmentProfile::Polynomial(cs) if cs.is_empty() || !finite(cs) => {
                Err(Error::InvalidPotential("polynomial profile needs finite coefficients".into()))
            }
            SegmentProfile::Samples(s) if s.len() < 2 || !finite(s) => {
                Err(Error::InvalidPotential("sample profile needs at least two finite samples".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Real potential `q` on `T^{0²}`: exact values at the isolated points and one
/// profile per segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    isolated: BTreeMap<usize, Rational>,
    segments: Vec<SegmentProfile>,
}

impl Potential {
    /// Interval indices `l` of isolated points where `q` must be given: the
    /// isolated points of `T^{0²}`, which are exactly the isolated `l ∈ 𝒮`.
    pub fn required_points(ts: &TimeScale) -> Vec<usize> {
        (1..=ts.s_max()).filter(|&l| !ts.is_segment(l)).collect()
    }

    pub fn new(ts: &TimeScale, isolated: BTreeMap<usize, Rational>, segments: Vec<SegmentProfile>) -> Result<Self> {
        let required = Self::required_points(ts);
        for &l in isolated.keys() {
            if !required.contains(&l) {
                return Err(Error::UnexpectedPotentialValue(l));
            }
        }
        if let Some(&l) = required.iter().find(|l| !isolated.contains_key(l)) {
            return Err(Error::MissingPotentialValue(l));
        }
        if segments.len() != ts.n_segments() {
            return Err(Error::InvalidPotential(format!(
                "{} segment profiles given for {} segments",
                segments.len(),
                ts.n_segments()
            )));
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(Potential { isolated, segments })
    }

    /// `q ≡ 0`.
    pub fn zero(ts: &TimeScale) -> Self {
        let isolated = Self::required_points(ts).into_iter().map(|l| (l, Rational::zero())).collect();
        Potential { isolated, segments: vec![SegmentProfile::Constant(0.0); ts.n_segments()] }
    }

    /// Discrete potential from values at the required points, in order.
    pub fn discrete(ts: &TimeScale, values: &[Rational]) -> Result<Self> {
        let required = Self::required_points(ts);
        if required.len() != values.len() {
            return Err(Error::LengthMismatch { left: required.len(), right: values.len() });
        }
        Self::new(ts, required.into_iter().zip(values.iter().cloned()).collect(), vec![SegmentProfile::Constant(0.0); ts.n_segments()])
    }

    pub fn isolated_values(&self) -> &BTreeMap<usize, Rational> {
        &self.isolated
    }

    pub fn segments(&self) -> &[SegmentProfile] {
        &self.segments
    }

    pub fn segment(&self, k: usize) -> &SegmentProfile {
        &self.segments[k - 1]
    }

    /// Values at the isolated points of the core domain, in order.
    pub fn discrete_values(&self) -> Vec<Rational> {
        self.isolated.values().cloned().collect()
    }

    /// `q(b_l)` for a jump `l ∈ 𝒮`, exact when `b_l` is an isolated point.
    pub fn jump_value(&self, ts: &TimeScale, l: usize) -> Result<Rational> {
        check_index("l", l, 1, ts.s_max())?;
        match ts.segment_of(l) {
            Some(k) => rational::from_f64(self.segments[k - 1].value(ts.length_f64(k), ts.length_f64(k))),
            None => self.isolated.get(&l).cloned().ok_or(Error::MissingPotentialValue(l)),
        }
    }

    pub fn jump_value_f64(&self, ts: &TimeScale, l: usize) -> Result<f64> {
        match ts.segment_of(l) {
            Some(k) => Ok(self.segments[k - 1].value(ts.length_f64(k), ts.length_f64(k))),
            None => self.jump_value(ts, l).map(|v| rational::to_f64(&v)),
        }
    }

    /// `ω_k = ½ ∫₀^{d_k} q_k`.
    pub fn omega(&self, ts: &TimeScale, k: usize) -> f64 {
        self.segments[k - 1].half_integral(ts.length_f64(k))
    }

    /// Smallest value of `q` anywhere on its domain.
    pub fn minimum(&self, ts: &TimeScale) -> f64 {
        let iso = self.isolated.values().map(|v| v.to_f64().unwrap_or(0.0));
        let seg = self.segments.iter().enumerate().map(|(i, s)| s.minimum(ts.length_f64(i + 1)));
        iso.chain(seg).fold(f64::INFINITY, f64::min)
    }
}
