//! Closed-form asymptotic data: leading coefficients of the jump-matrix
//! products, the branch structure of the spectra, the `O(1/n)` eigenvalue
//! refinement and the weight-number law, plus a harness that compares them
//! with computed spectra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use std::f64::consts::PI;

use crate::error::{check_index, Error, Result};
use crate::propagation::segment_bound;
use crate::quadrature;
use crate::rational::{self, Rational};
use crate::timescale::{Potential, TimeScale};

/// Which part of a spectrum an eigenvalue belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchLabel {
    /// The finite part `Λ_j` not described by any segment branch.
    Bounded,
    /// `n`-th member of the branch attached to segment `k`.
    Branch { k: usize, n: usize },
    /// Left over by the matching (only near the search cutoff).
    Unmatched,
}

/// Leading data of `β^{l_k−s}_{ij}(λ) = a (λ^{s−2+i} + b λ^{s−3+i} + …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingCoeffs {
    pub k: usize,
    pub s: usize,
    pub i: usize,
    pub j: usize,
    pub a: Rational,
    pub b: Rational,
}

impl LeadingCoeffs {
    /// Degree of the entry, `s − 2 + i`.
    pub fn degree(&self) -> usize {
        self.s + self.i - 2
    }

    /// Coefficient of `λ^{s−3+i}`, i.e. `a·b`.
    pub fn next(&self) -> Rational {
        &self.a * &self.b
    }
}

fn powi(r: &Rational, e: i32) -> Rational {
    Pow::pow(r, e)
}

fn check_leading_indices(ts: &TimeScale, k: usize, s: usize, i: usize, j: usize) -> Result<usize> {
    let n = ts.n_segments();
    check_index("k", k, 1, n + usize::from(ts.mu1()))?;
    let lk = segment_bound(ts, k);
    check_index("s", s, 1, lk - segment_bound(ts, k - 1))?;
    check_index("i", i, 1, 2 - usize::from(k == n + 1))?;
    check_index("j", j, 1, 2)?;
    Ok(lk)
}

/// Leading coefficient `a^{l_k−s}_{ij}`; depends on the gaps only.
pub fn transfer_leading_coefficient(ts: &TimeScale, k: usize, s: usize, i: usize, j: usize) -> Result<Rational> {
    let lk = check_leading_indices(ts, k, s, i, j)?;
    let sign = if (s + i).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut a = sign * powi(ts.gap(lk - s), j as i32 - 2) * powi(ts.gap(lk - 1), i as i32 - 2);
    for l in lk - s..lk {
        a *= ts.gap(l) * ts.gap(l);
    }
    Ok(a)
}

/// Both leading coefficients of `β^{l_k−s}_{ij}`.
pub fn transfer_leading_coeffs(ts: &TimeScale, q: &Potential, k: usize, s: usize, i: usize, j: usize) -> Result<LeadingCoeffs> {
    let a = transfer_leading_coefficient(ts, k, s, i, j)?;
    let lk = segment_bound(ts, k) as i64;
    let (s_, i_, j_) = (s as i64, i as i64, j as i64);
    let range = |lo: i64, hi: i64| (lo..=hi).map(|l| l as usize);
    let mut sum = Rational::zero();
    for l in range(lk - s_ + 2 - j_, lk - 3 + i_) {
        sum += powi(ts.gap(l), -2);
    }
    for l in range(lk - s_ + 1, lk - 1) {
        sum += (ts.gap(l) * ts.gap(l - 1)).recip();
    }
    for l in range(lk - s_, lk - 3 + i_) {
        sum += q.jump_value(ts, l)?;
    }
    Ok(LeadingCoeffs { k, s, i, j, a, b: -sum })
}

/// Cardinality of `Λ_j`: `N + M + j(1−μ₀) sign(N−1+μ₁) − μ₁ − 1`.
pub fn bounded_count(ts: &TimeScale, j: u8) -> i64 {
    let n = ts.n_segments() as i64;
    let m = ts.n_isolated() as i64;
    let mu0 = i64::from(ts.mu0());
    let mu1 = i64::from(ts.mu1());
    n + m + i64::from(j) * (1 - mu0) * (n - 1 + mu1).signum() - mu1 - 1
}

/// Shift `δ_k^{e}` in the main term `π(n − δ_k^{e})/d_k`, with
/// `e = j·δ(1, l_k)`, `δ_k⁰ = ½` when the segment is not last and
/// `δ_k¹ = ½ − δ_k⁰`.
pub fn branch_shift(segment_is_last: bool, j: u8, segment_is_first_interval: bool) -> f64 {
    let d0 = if segment_is_last { 0.0 } else { 0.5 };
    if j == 1 && segment_is_first_interval {
        0.5 - d0
    } else {
        d0
    }
}

/// Constants attached to the branch of segment `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchConstants {
    pub k: usize,
    /// Interval index `l_k`.
    pub interval: usize,
    pub length: f64,
    /// `δ_k = δ(l_k, N+M)`.
    pub is_last: bool,
    /// `ω_k = ½ ∫ q_k`.
    pub omega: f64,
    pub c: f64,
    /// `Ã_{1k}, …, Ã_{4k}`.
    pub a_tilde: [f64; 4],
    /// `A_{k0}, A_{k1}`.
    pub a: [f64; 2],
    pub z: f64,
    /// `γ_k = Σ_{l≥k} d_l`.
    pub gamma: f64,
}

impl BranchConstants {
    pub fn shift(&self, j: u8) -> f64 {
        branch_shift(self.is_last, j, self.interval == 1)
    }
}

/// Branch constants for every segment, in order (empty when `N = 0`).
pub fn structural_constants(ts: &TimeScale, q: &Potential) -> Vec<BranchConstants> {
    let n = ts.n_segments();
    (1..=n)
        .map(|k| {
            let l = ts.segment_interval(k);
            let d = ts.length_f64(k);
            let profile = q.segment(k);
            let is_last = l == ts.len();
            let omega = q.omega(ts, k);
            let q0 = profile.value(0.0, d);
            let qd = profile.value(d, d);
            let a_tilde: [f64; 4] = std::array::from_fn(|idx| {
                let i = idx + 1;
                let s1 = if ((i - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let s2 = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
                s1 * q0 / 4.0 + s2 * qd / 4.0 - omega * omega / 2.0
            });
            let (c, a) = if is_last {
                (omega, [a_tilde[0], a_tilde[2]])
            } else {
                let inv_gap = 1.0 / ts.gap_f64(l);
                (omega + inv_gap, [a_tilde[1] - omega * inv_gap, a_tilde[3] - omega * inv_gap])
            };
            let prev_gap = if l > 1 { 1.0 / ts.gap_f64(l - 1) } else { 0.0 };
            let z = (c + prev_gap) / PI;
            let gamma = (k..=n).map(|m| ts.length_f64(m)).sum();
            BranchConstants { k, interval: l, length: d, is_last, omega, c, a_tilde, a, z, gamma }
        })
        .collect()
}

/// `f_{kj}(x)`: `sin d_k x` or `cos d_k x` by the case split on `δ_k`.
pub fn template(bc: &BranchConstants, j: u8, x: f64) -> f64 {
    if (j == 0) == bc.is_last {
        (bc.length * x).sin()
    } else {
        (bc.length * x).cos()
    }
}

/// `v_{kj}(ρ)` at real `ρ ≠ 0`.
pub fn v_function(bc: &BranchConstants, q: &Potential, j: u8, rho: f64) -> f64 {
    let d = bc.length;
    let profile = q.segment(bc.k);
    let sign = if bc.is_last { -1.0 } else { 1.0 };
    let sign_j = if (u32::from(j) + u32::from(bc.is_last)) % 2 == 0 { 1.0 } else { -1.0 };
    let tail = if profile.is_constant() {
        0.0
    } else {
        quadrature::integrate(|t| template(bc, j, (2.0 * t / d - 1.0) * rho) * profile.derivative(t, d), 0.0, d)
    };
    template(bc, j, rho) * (1.0 + bc.a[j as usize] / (rho * rho))
        + template(bc, 1 - j, rho) * bc.c * sign_j / rho
        + sign * tail / (4.0 * rho * rho)
}

/// `g_k(ρ) = v_{k0}(ρ) + (−1)^{δ_k} v_{k1}(ρ) / (ρ g_{l_k−1})`, for `l_k > 1`.
pub fn g_function(ts: &TimeScale, bc: &BranchConstants, q: &Potential, rho: f64) -> Option<f64> {
    if bc.interval == 1 {
        return None;
    }
    let sign = if bc.is_last { -1.0 } else { 1.0 };
    Some(v_function(bc, q, 0, rho) + sign * v_function(bc, q, 1, rho) / (rho * ts.gap_f64(bc.interval - 1)))
}

/// Multiplicity `η_{kj}(ρ)` of `ρ` as a zero of `Π_{l>k} f_{l0} · f_{kj}`.
///
/// With `ρ/π` given exactly the count is exact; otherwise zeros are detected
/// with tolerance `1e−9` on `d_l ρ/π`.
pub fn eta(ts: &TimeScale, consts: &[BranchConstants], k: usize, j: u8, rho: RhoOverPi) -> usize {
    let vanishes = |bc: &BranchConstants, jj: u8| -> bool {
        // sin(dx) = 0 ⇔ dρ/π ∈ ℤ, cos(dx) = 0 ⇔ dρ/π − ½ ∈ ℤ
        let half = (jj == 0) != bc.is_last;
        match &rho {
            RhoOverPi::Exact(t) => {
                let mut v = ts.length(bc.k) * t;
                if half {
                    v -= rational::ratio(1, 2);
                }
                v.is_integer()
            }
            RhoOverPi::Approx(t) => {
                let v = bc.length * t - if half { 0.5 } else { 0.0 };
                (v - v.round()).abs() < 1e-9
            }
        }
    };
    let later = consts[k..].iter().filter(|bc| vanishes(bc, 0)).count();
    later + usize::from(vanishes(&consts[k - 1], j))
}

/// `ρ/π`, exactly when known.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoOverPi {
    Exact(Rational),
    Approx(f64),
}

/// Common unit `r` and integers `x_k` with `d_k = r x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Commensurability {
    pub r: f64,
    pub x: Vec<BigInt>,
}

/// Commensurability of exact lengths: `r = gcd(d_k)` and coprime `x_k`.
pub fn commensurability_exact(d: &[Rational]) -> Result<(Rational, Vec<BigInt>)> {
    if d.is_empty() || d.iter().any(|v| !v.is_positive()) {
        return Err(Error::NotCommensurable);
    }
    let num_gcd = d.iter().fold(BigInt::zero(), |g, v| g.gcd(v.numer()));
    let den_lcm = d.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let r = Rational::new(num_gcd, den_lcm);
    let x = d.iter().map(|v| (v / &r).to_integer()).collect();
    Ok((r, x))
}

/// Commensurability of float lengths: each ratio `d_k/d_1` must be within
/// relative `tol` of a fraction with denominator at most `10⁴`.
pub fn commensurability_check(d: &[f64], tol: f64) -> Result<Commensurability> {
    if d.is_empty() || d.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::NotCommensurable);
    }
    let mut ratios = Vec::with_capacity(d.len());
    for &v in d {
        let ratio = v / d[0];
        let approx = rational::rationalize(ratio, 10_000)?;
        if (rational::to_f64(&approx) - ratio).abs() > tol * ratio {
            return Err(Error::NotCommensurable);
        }
        ratios.push(approx);
    }
    let (unit, x) = commensurability_exact(&ratios)?;
    Ok(Commensurability { r: d[0] * rational::to_f64(&unit), x })
}

/// Largest multiplier `x_k` for which lengths still count as commensurable.
pub const COMMENSURABILITY_LIMIT: u32 = 10_000;

/// Exact commensurability with every `x_k ≤ 10⁴`. Rational lengths are always
/// commensurable, but with huge `x_k` (decimal approximations of irrational
/// ratios) the corrected term describes no `n` within reach.
pub fn commensurability_bounded(d: &[Rational]) -> Option<Commensurability> {
    let (r, x) = commensurability_exact(d).ok()?;
    let limit = BigInt::from(COMMENSURABILITY_LIMIT);
    if x.iter().any(|v| v > &limit) {
        return None;
    }
    Some(Commensurability { r: rational::to_f64(&r), x })
}

/// Expected size of the residual left by a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualClass {
    /// `o(1)`: main term without commensurability.
    Vanishing,
    /// `O(1/n)`: main term under commensurability.
    InverseN,
    /// `o(1/n)`: corrected term when some `z_k/d_k` coincide.
    SmallInverseN,
    /// `κ_n/n²` with `κ ∈ l²`: corrected term, distinct `z_k/d_k`.
    SquareSummableOverN2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Main,
    Corrected,
}

/// Predicted `ρ` for one branch member.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticPrediction {
    pub k: usize,
    pub j: u8,
    pub n: usize,
    /// `δ_k^{jδ(1,l_k)}`.
    pub shift: f64,
    pub main_term: f64,
    /// `z_k/(n − shift)`, zero for the main order.
    pub correction: f64,
    pub residual_class: ResidualClass,
    /// Set when the corrected order was requested although some `z_k/d_k`
    /// coincide.
    pub distinctness_violated: bool,
}

impl AsymptoticPrediction {
    pub fn rho(&self) -> f64 {
        self.main_term + self.correction
    }

    pub fn lambda(&self) -> f64 {
        self.rho() * self.rho()
    }
}

/// Predicted limit of weight numbers along a branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightPrediction {
    /// `α_n^k → value` with `O(κ_n/n)` relative error.
    Limit(f64),
    /// `α_n^k = κ_n/n`.
    Decay,
}

/// Predictions for one problem, with the hypotheses evaluated once.
#[derive(Debug, Clone)]
pub struct Predictor {
    pub constants: Vec<BranchConstants>,
    pub commensurability: Option<Commensurability>,
    /// All `z_k/d_k` pairwise distinct (relative tolerance `1e−9`).
    pub distinct: bool,
    pub mu0: bool,
}

impl Predictor {
    pub fn new(ts: &TimeScale, q: &Potential) -> Self {
        let constants = structural_constants(ts, q);
        let commensurability = commensurability_bounded(ts.lengths());
        let ratios: Vec<f64> = constants.iter().map(|c| c.z / c.length).collect();
        let distinct = ratios.iter().enumerate().all(|(i, a)| {
            ratios[i + 1..].iter().all(|b| (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1e-300))
        });
        Predictor { constants, commensurability, distinct, mu0: ts.mu0() }
    }

    pub fn n_branches(&self) -> usize {
        self.constants.len()
    }

    pub fn branch(&self, k: usize) -> Result<&BranchConstants> {
        check_index("k", k, 1, self.constants.len())?;
        Ok(&self.constants[k - 1])
    }

    pub fn predict(&self, k: usize, j: u8, n: usize, order: Order) -> Result<AsymptoticPrediction> {
        let bc = self.branch(k)?;
        check_index("n", n, 1, usize::MAX)?;
        let shift = bc.shift(j);
        let main_term = PI * (n as f64 - shift) / bc.length;
        let commensurable = self.commensurability.is_some();
        let (correction, residual_class, distinctness_violated) = match order {
            Order::Main => (0.0, if commensurable { ResidualClass::InverseN } else { ResidualClass::Vanishing }, false),
            Order::Corrected => {
                if !commensurable {
                    return Err(Error::NotCommensurable);
                }
                let class =
                    if self.distinct { ResidualClass::SquareSummableOverN2 } else { ResidualClass::SmallInverseN };
                (bc.z / (n as f64 - shift), class, !self.distinct)
            }
        };
        Ok(AsymptoticPrediction { k, j, n, shift, main_term, correction, residual_class, distinctness_violated })
    }

    /// Best available prediction: corrected under commensurability, else main.
    pub fn best(&self, k: usize, j: u8, n: usize) -> Result<AsymptoticPrediction> {
        let order = if self.commensurability.is_some() { Order::Corrected } else { Order::Main };
        self.predict(k, j, n, order)
    }

    pub fn predict_weight(&self, k: usize) -> Result<WeightPrediction> {
        let bc = self.branch(k)?;
        Ok(if k == 1 && !self.mu0 { WeightPrediction::Limit(2.0 / bc.length) } else { WeightPrediction::Decay })
    }

    /// Whether the weight law's hypotheses (commensurability and distinct
    /// `z_k/d_k`) hold.
    pub fn weight_hypotheses_hold(&self) -> bool {
        self.commensurability.is_some() && self.distinct
    }
}

/// One line of a residual report.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub k: usize,
    pub j: u8,
    pub n: usize,
    /// Computed `ρ` (or weight number for weight rows).
    pub computed: f64,
    pub main: f64,
    pub corrected: f64,
    /// `|computed − main|`.
    pub e_n: f64,
    /// `n·e_n`.
    pub n_e_n: f64,
    /// `n·|computed − corrected|`.
    pub n_corrected_residual: f64,
}

impl ResidualRow {
    /// Short branch tag such as `j0k2`.
    pub fn branch_tag(&self) -> String {
        format!("j{}k{}", self.j, self.k)
    }
}

/// Per-branch summary of a residual report.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSummary {
    pub k: usize,
    pub j: u8,
    pub max_e_n: f64,
    pub max_n_e_n: f64,
    pub max_n_corrected_residual: f64,
    /// `n·e_n` bounded: top-half maximum at most 1.5 × bottom-half maximum.
    pub scaled_bounded: bool,
    /// `e_n` over the top half stays below its bottom-half maximum.
    pub e_n_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub branches: Vec<BranchSummary>,
}

/// Finite-range proxy for boundedness: the maximum over the top half of the
/// sequence is at most `1.5` times the maximum over the bottom half.
pub fn bounded_by_halves(seq: &[f64]) -> bool {
    if seq.len() < 2 {
        return true;
    }
    let mid = seq.len() / 2;
    let lo = seq[..mid].iter().copied().fold(0.0, f64::max);
    let hi = seq[mid..].iter().copied().fold(0.0, f64::max);
    hi <= 1.5 * lo
}

fn summarize(rows: &[ResidualRow]) -> Vec<BranchSummary> {
    let mut keys: Vec<(usize, u8)> = rows.iter().map(|r| (r.k, r.j)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(k, j)| {
            let branch: Vec<&ResidualRow> = rows.iter().filter(|r| r.k == k && r.j == j).collect();
            let e: Vec<f64> = branch.iter().map(|r| r.e_n).collect();
            let ne: Vec<f64> = branch.iter().map(|r| r.n_e_n).collect();
            let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
            let mid = e.len() / 2;
            BranchSummary {
                k,
                j,
                max_e_n: max(&e),
                max_n_e_n: max(&ne),
                max_n_corrected_residual: branch.iter().map(|r| r.n_corrected_residual).fold(0.0, f64::max),
                scaled_bounded: bounded_by_halves(&ne),
                e_n_decreasing: e.len() < 2 || max(&e[mid..]) <= max(&e[..mid]),
            }
        })
        .collect()
}

/// Compares labeled eigenvalues (`λ`, label) of the `j` problem against the
/// branch predictions for `n ∈ n_range`.
pub fn verify_asymptotics(
    predictor: &Predictor,
    j: u8,
    eigenvalues: &[(f64, BranchLabel)],
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<ResidualReport> {
    let mut rows = Vec::new();
    for k in 1..=predictor.n_branches() {
        for n in n_range.clone() {
            let lambda = eigenvalues
                .iter()
                .find(|(_, l)| *l == BranchLabel::Branch { k, n })
                .map(|(v, _)| *v)
                .ok_or(Error::LabelMismatch { k, n })?;
            let computed = lambda.max(0.0).sqrt();
            let main = predictor.predict(k, j, n, Order::Main)?.rho();
            let corrected = predictor.best(k, j, n)?.rho();
            let e_n = (computed - main).abs();
            rows.push(ResidualRow {
                k,
                j,
                n,
                computed,
                main,
                corrected,
                e_n,
                n_e_n: n as f64 * e_n,
                n_corrected_residual: n as f64 * (computed - corrected).abs(),
            });
        }
    }
    let branches = summarize(&rows);
    Ok(ResidualReport { rows, branches })
}

/// Compares weight numbers along branches with their predicted limits.
/// Rows carry `α_n` as `computed`, the limit (or zero for decaying branches)
/// as `main` and `corrected`.
pub fn verify_weights(
    predictor: &Predictor,
    weights: &[(f64, BranchLabel)],
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<ResidualReport> {
    let mut rows = Vec::new();
    for k in 1..=predictor.n_branches() {
        let limit = match predictor.predict_weight(k)? {
            WeightPrediction::Limit(v) => v,
            WeightPrediction::Decay => 0.0,
        };
        for n in n_range.clone() {
            let alpha = weights
                .iter()
                .find(|(_, l)| *l == BranchLabel::Branch { k, n })
                .map(|(v, _)| *v)
                .ok_or(Error::LabelMismatch { k, n })?;
            let e_n = (alpha - limit).abs();
            rows.push(ResidualRow {
                k,
                j: 1,
                n,
                computed: alpha,
                main: limit,
                corrected: limit,
                e_n,
                n_e_n: n as f64 * e_n,
                n_corrected_residual: n as f64 * e_n,
            });
        }
    }
    let branches = summarize(&rows);
    Ok(ResidualReport { rows, branches })
}

/// `ρ/π` as an exact rational when `ρ = π·t` for a rational `t` recoverable
/// from the float (denominator at most `10⁴`, within `1e−12`).
pub fn rho_over_pi(rho: f64) -> RhoOverPi {
    let t = rho / PI;
    match rational::rationalize(t, 10_000) {
        Ok(r) if (rational::to_f64(&r) - t).abs() <= 1e-12 * t.abs().max(1.0) => RhoOverPi::Exact(r),
        _ => RhoOverPi::Approx(t),
    }
}
