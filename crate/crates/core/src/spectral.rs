//! Spectra of the two boundary-value problems, weight numbers, the Weyl
//! function, and reconstruction of characteristic functions and Weyl
//! functions from spectral data.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::asymptotics::{bounded_count, transfer_leading_coefficient, BranchLabel, Predictor};
use crate::error::{Error, Result};
use crate::poly::{real_roots, tarski_query, IsolatedRoot, PolyRat};
use crate::propagation::{d_functions, propagate_exact, EntireEval};
use crate::rational::{self, Rational};
use crate::timescale::{Potential, TimeScale};

type C64 = Complex64;

/// Roots given either as explicit rationals or implicitly as all real roots
/// of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum RootSet {
    Values(Vec<Rational>),
    RootsOf(PolyRat),
}

/// Weight numbers given explicitly, or as the polynomial `R` with
/// `α_n = R(λ_n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSet {
    Values(Vec<Rational>),
    Polynomial(PolyRat),
}

impl RootSet {
    /// Monic polynomial vanishing exactly on the set.
    pub fn monic_polynomial(&self) -> PolyRat {
        match self {
            RootSet::Values(v) => PolyRat::from_roots(v),
            RootSet::RootsOf(p) => p.monic(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RootSet::Values(v) => v.len(),
            RootSet::RootsOf(p) => p.degree().unwrap_or(0),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exact description of a discrete-scale spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSpectrum {
    /// `Θ_j` itself.
    pub polynomial: PolyRat,
    pub roots: Vec<IsolatedRoot>,
}

impl ExactSpectrum {
    /// Explicit rationals when every root is rational, else the defining
    /// polynomial.
    pub fn root_set(&self) -> RootSet {
        match self.roots.iter().map(|r| r.exact.clone()).collect::<Option<Vec<_>>>() {
            Some(v) => RootSet::Values(v),
            None => RootSet::RootsOf(self.polynomial.monic()),
        }
    }
}

/// Empirical check of the `Λ_j` count: eigenvalues below a cutoff against
/// `|Λ_j|` plus the branch members whose main term lies below it.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    /// Cutoff in `ρ`.
    pub rho_cutoff: f64,
    pub computed: usize,
    pub bounded_predicted: i64,
    pub branch_predicted: Vec<usize>,
    /// `|computed − predicted| ≤ N`.
    pub consistent: bool,
}

/// Eigenvalues of `L_j` in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub j: u8,
    pub values: Vec<f64>,
    pub labels: Vec<BranchLabel>,
    /// Present on discrete scales.
    pub exact: Option<ExactSpectrum>,
    /// Search window bound for scales with segments.
    pub lambda_max: Option<f64>,
    pub count: Option<CountReport>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn labeled(&self) -> Vec<(f64, BranchLabel)> {
        self.values.iter().copied().zip(self.labels.iter().copied()).collect()
    }
}

/// Root search settings for scales with segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub lambda_max: f64,
    /// Relative tolerance of the segment integrator and root polishing.
    pub tolerance: f64,
}

impl SearchOptions {
    pub fn new(lambda_max: f64) -> Self {
        SearchOptions { lambda_max, tolerance: 1e-12 }
    }
}

fn check_j(j: u8) -> Result<usize> {
    match j {
        0 | 1 => Ok(j as usize),
        _ => Err(Error::IndexOutOfRange { what: "j", value: j as usize, lo: 0, hi: 1 }),
    }
}

/// Spectrum of `L_j` with eigenvalues up to `lambda_max` (ignored on
/// discrete scales, where the spectrum is finite).
pub fn find_spectrum(ts: &TimeScale, q: &Potential, j: u8, lambda_max: f64) -> Result<Spectrum> {
    find_spectrum_with(ts, q, j, &SearchOptions::new(lambda_max))
}

pub fn find_spectrum_with(ts: &TimeScale, q: &Potential, j: u8, opts: &SearchOptions) -> Result<Spectrum> {
    let jj = check_j(j)?;
    if ts.is_discrete() {
        let (t0, t1) = d_functions(ts, q, 1)?;
        let p = if jj == 0 { t0 } else { t1 };
        let roots = real_roots(&p).ok_or_else(|| Error::PolynomialDegenerate(format!("Θ_{j} = {p} has a repeated root")))?;
        let expected = ts.n_isolated() - 2;
        if roots.len() != expected {
            return Err(Error::PolynomialDegenerate(format!(
                "Θ_{j} has {} real roots, expected {expected}",
                roots.len()
            )));
        }
        let values = roots.iter().map(|r| r.value).collect();
        return Ok(Spectrum {
            j,
            values,
            labels: vec![BranchLabel::Bounded; expected],
            exact: Some(ExactSpectrum { polynomial: p, roots }),
            lambda_max: None,
            count: None,
        });
    }
    let eval = EntireEval::with_tolerance(ts, q, opts.tolerance)?;
    let values = numeric_roots(&eval, ts, q, jj, opts)?;
    let predictor = Predictor::new(ts, q);
    let labels = label_branches(&predictor, ts, j, &values, opts.lambda_max);
    let count = count_report(&predictor, ts, j, &values, opts.lambda_max);
    Ok(Spectrum { j, values, labels, exact: None, lambda_max: Some(opts.lambda_max), count })
}

fn signed_sqrt(x: f64) -> f64 {
    x.signum() * x.abs().sqrt()
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    value: f64,
    /// d value / dt with λ = t|t|.
    slope: f64,
}

fn sample(eval: &EntireEval, j: usize, t: f64) -> Result<Sample> {
    let lam = t * t.abs();
    let (v, d) = eval.theta_with_derivative(lam)?;
    Ok(Sample { t, value: v[j], slope: d[j] * 2.0 * t.abs() })
}

/// Cubic Hermite interpolant on a cell, sampled for sign changes.
fn hermite_sign_changes(a: &Sample, b: &Sample) -> (usize, f64) {
    let h = b.t - a.t;
    let (y0, y1, m0, m1) = (a.value, b.value, a.slope * h, b.slope * h);
    let mut changes = 0;
    let mut prev = y0;
    let mut closest = y0.abs().min(y1.abs());
    for i in 1..=64 {
        let s = i as f64 / 64.0;
        let (s2, s3) = (s * s, s * s * s);
        let p = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        if p.signum() != prev.signum() && p != 0.0 && prev != 0.0 {
            changes += 1;
        }
        closest = closest.min(p.abs());
        prev = p;
    }
    (changes, closest)
}

const MAX_REFINE: usize = 3;

/// Brackets `(a, b)` in `t` with a sign change, refining suspicious cells.
fn scan_cell(eval: &EntireEval, j: usize, a: Sample, b: Sample, depth: usize, out: &mut Vec<(Sample, Sample)>) -> Result<()> {
    if a.value == 0.0 || b.value == 0.0 {
        return Ok(());
    }
    let flips = a.value.signum() != b.value.signum();
    let (predicted, closest) = hermite_sign_changes(&a, &b);
    let heading_in = a.slope * a.value.signum() * (b.t - a.t) < 0.0 && b.slope * b.value.signum() > 0.0;
    let near_miss = !flips && heading_in && closest < 0.25 * a.value.abs().min(b.value.abs());
    let suspicious = predicted != usize::from(flips) || near_miss;
    if !suspicious {
        if flips {
            out.push((a, b));
        }
        return Ok(());
    }
    if !flips && heading_in {
        // one interior extremum: two roots exactly when it crosses zero
        let ext = critical_point(eval, j, a, b)?;
        if ext.value == 0.0 {
            return Err(Error::NonSimpleZero(ext.t * ext.t.abs()));
        }
        if ext.value.signum() != a.value.signum() {
            out.push((a, ext));
            out.push((ext, b));
        }
        return Ok(());
    }
    if depth == MAX_REFINE {
        if predicted > usize::from(flips) && predicted >= 2 {
            return Err(Error::RootMissSuspected(0.5 * (a.t + b.t) * (0.5 * (a.t + b.t)).abs()));
        }
        if flips {
            out.push((a, b));
        }
        return Ok(());
    }
    let mut pts = vec![a];
    for i in 1..4 {
        pts.push(sample(eval, j, a.t + (b.t - a.t) * i as f64 / 4.0)?);
    }
    pts.push(b);
    for w in pts.windows(2) {
        scan_cell(eval, j, w[0], w[1], depth + 1, out)?;
    }
    Ok(())
}

/// Bisection on the slope between two samples whose slopes have opposite
/// signs.
fn critical_point(eval: &EntireEval, j: usize, a: Sample, b: Sample) -> Result<Sample> {
    let (mut lo, mut hi) = (a, b);
    for _ in 0..80 {
        let mid = sample(eval, j, 0.5 * (lo.t + hi.t))?;
        if mid.slope == 0.0 {
            return Ok(mid);
        }
        if mid.slope.signum() == lo.slope.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi.t - lo.t <= 1e-15 * hi.t.abs().max(1.0) {
            break;
        }
    }
    Ok(if lo.value.abs() < hi.value.abs() { lo } else { hi })
}

/// Safeguarded Newton–bisection on `Θ_j(λ)` inside a sign-change bracket.
fn polish(eval: &EntireEval, j: usize, lo: f64, hi: f64, flo: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let sa = flo.signum();
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (v, d) = eval.theta_with_derivative(x)?;
        let (f, df) = (v[j], d[j]);
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        let step = (next - x).abs();
        x = next;
        if step <= tol * x.abs().max(1.0) || (b - a) <= tol * x.abs().max(1.0) {
            break;
        }
    }
    let (_, d) = eval.theta_with_derivative(x)?;
    if d[j] == 0.0 || !d[j].is_finite() {
        return Err(Error::NonSimpleZero(x));
    }
    Ok(x)
}

fn numeric_roots(eval: &EntireEval, ts: &TimeScale, q: &Potential, j: usize, opts: &SearchOptions) -> Result<Vec<f64>> {
    let floor = q.minimum(ts) - 10.0;
    if opts.lambda_max <= floor {
        return Ok(Vec::new());
    }
    let (t_lo, t_hi) = (signed_sqrt(floor), signed_sqrt(opts.lambda_max));
    let step = std::f64::consts::PI / (8.0 * ts.total_length_f64());
    let cells = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let samples = (0..=cells)
        .into_par_iter()
        .map(|i| sample(eval, j, t_lo + (t_hi - t_lo) * i as f64 / cells as f64))
        .collect::<Result<Vec<_>>>()?;
    let mut exact_hits: Vec<f64> = samples.iter().filter(|s| s.value == 0.0).map(|s| s.t * s.t.abs()).collect();
    let brackets = samples
        .par_windows(2)
        .map(|w| {
            let mut out = Vec::new();
            scan_cell(eval, j, w[0], w[1], 0, &mut out).map(|_| out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut roots = brackets
        .into_par_iter()
        .flatten()
        .map(|(a, b)| polish(eval, j, a.t * a.t.abs(), b.t * b.t.abs(), a.value, opts.tolerance))
        .collect::<Result<Vec<_>>>()?;
    roots.append(&mut exact_hits);
    roots.retain(|&r| r <= opts.lambda_max);
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    Ok(roots)
}

/// Branch predictions sorted by predicted `ρ`, enough to cover `rho_max`.
fn predictions_up_to(predictor: &Predictor, j: u8, rho_max: f64) -> Vec<(f64, BranchLabel)> {
    let mut out = Vec::new();
    for bc in &predictor.constants {
        let limit = rho_max + 2.0 * std::f64::consts::PI / bc.length;
        for n in 1.. {
            let Ok(p) = predictor.best(bc.k, j, n) else { break };
            if p.main_term > limit {
                break;
            }
            out.push((p.rho(), BranchLabel::Branch { k: bc.k, n }));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Labels sorted eigenvalues: exactly `|Λ_j|` are assigned to the bounded
/// part and the rest are matched in order to the lowest branch predictions,
/// minimizing the total distance in `ρ`.
pub fn label_branches(predictor: &Predictor, ts: &TimeScale, j: u8, values: &[f64], lambda_max: f64) -> Vec<BranchLabel> {
    let m = values.len();
    let bounded = bounded_count(ts, j).max(0) as usize;
    if m <= bounded {
        return vec![BranchLabel::Bounded; m];
    }
    let rho: Vec<f64> = values.iter().map(|&v| signed_sqrt(v)).collect();
    let preds = predictions_up_to(predictor, j, signed_sqrt(lambda_max));
    let p = (m - bounded).min(preds.len());
    let slack = m - p;
    // cost[i][c]: first i eigenvalues using first c predictions, i − c ≤ slack
    let inf = f64::INFINITY;
    let mut cost = vec![vec![inf; p + 1]; m + 1];
    let mut from_pred = vec![vec![false; p + 1]; m + 1];
    cost[0][0] = 0.0;
    for i in 1..=m {
        for c in 0..=p.min(i) {
            if i - c > slack {
                continue;
            }
            let skip = cost[i - 1][c];
            let take = if c > 0 { cost[i - 1][c - 1] + (rho[i - 1] - preds[c - 1].0).abs() } else { inf };
            if take <= skip {
                cost[i][c] = take;
                from_pred[i][c] = true;
            } else {
                cost[i][c] = skip;
            }
        }
    }
    let mut labels = vec![BranchLabel::Bounded; m];
    let mut c = p;
    for i in (1..=m).rev() {
        if c > 0 && from_pred[i][c] {
            labels[i - 1] = preds[c - 1].1;
            c -= 1;
        }
    }
    if slack > bounded {
        // not enough predictions: the surplus at the top stays unmatched
        let mut extra = slack - bounded;
        for l in labels.iter_mut().rev() {
            if extra == 0 {
                break;
            }
            if *l == BranchLabel::Bounded {
                *l = BranchLabel::Unmatched;
                extra -= 1;
            }
        }
    }
    labels
}

/// Count check at the widest gap between consecutive eigenvalues in the
/// upper half of the window.
pub fn count_report(predictor: &Predictor, ts: &TimeScale, j: u8, values: &[f64], lambda_max: f64) -> Option<CountReport> {
    let rho: Vec<f64> = values.iter().map(|&v| signed_sqrt(v)).collect();
    let rho_max = signed_sqrt(lambda_max);
    let (mut best, mut cut) = (0.0, None);
    for w in rho.windows(2) {
        if w[0] >= 0.5 * rho_max && w[1] <= 0.9 * rho_max && w[1] - w[0] > best {
            best = w[1] - w[0];
            cut = Some(0.5 * (w[0] + w[1]));
        }
    }
    let rho_cutoff = cut?;
    let computed = rho.iter().filter(|&&r| r < rho_cutoff).count();
    let branch_predicted: Vec<usize> = predictor
        .constants
        .iter()
        .map(|bc| {
            let shift = bc.shift(j);
            // main term π(n − shift)/d < cutoff
            let bound = rho_cutoff * bc.length / std::f64::consts::PI + shift;
            (bound.ceil() as i64 - 1).max(0) as usize
        })
        .collect();
    let bounded_predicted = bounded_count(ts, j);
    let predicted = bounded_predicted + branch_predicted.iter().sum::<usize>() as i64;
    Some(CountReport {
        rho_cutoff,
        computed,
        bounded_predicted,
        branch_predicted,
        consistent: (computed as i64 - predicted).unsigned_abs() as usize <= ts.n_segments(),
    })
}

/// Exact weight-number data of a discrete scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWeights {
    /// `R` with `α_n = R(λ_n)`: `−Θ₀ · (Θ₁')^{-1} mod Θ₁`.
    pub polynomial: PolyRat,
    /// `α_n` when `λ_n` is rational.
    pub values: Vec<Option<Rational>>,
    /// Exact sign of every `α_n`.
    pub all_positive: bool,
}

/// Residues `α_n` of the Weyl function at the `j = 1` eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightNumbers {
    pub values: Vec<f64>,
    pub labels: Vec<BranchLabel>,
    pub exact: Option<ExactWeights>,
}

impl WeightNumbers {
    pub fn labeled(&self) -> Vec<(f64, BranchLabel)> {
        self.values.iter().copied().zip(self.labels.iter().copied()).collect()
    }
}

/// `R = −Θ₀ · (Θ₁')^{-1} mod Θ₁`, so that `α_n = R(λ_n)` at every root of
/// `Θ₁`.
pub fn weight_polynomial(theta0: &PolyRat, theta1: &PolyRat) -> Result<PolyRat> {
    let inv = theta1
        .derivative()
        .inverse_mod(theta1)
        .ok_or_else(|| Error::PolynomialDegenerate("Θ₁ and Θ₁' share a root".into()))?;
    Ok((&(-theta0) * &inv).rem(theta1))
}

pub fn weight_numbers(ts: &TimeScale, q: &Potential, spectrum1: &Spectrum) -> Result<WeightNumbers> {
    if spectrum1.j != 1 {
        return Err(Error::NotSupported("weight numbers are residues at the j = 1 spectrum".into()));
    }
    if let Some(ex) = &spectrum1.exact {
        let (t0, t1) = d_functions(ts, q, 1)?;
        let r = weight_polynomial(&t0, &t1)?;
        let mut values = Vec::with_capacity(ex.roots.len());
        let mut exact = Vec::with_capacity(ex.roots.len());
        for root in &ex.roots {
            match &root.exact {
                Some(l) => {
                    let a = r.eval(l);
                    values.push(rational::to_f64(&a));
                    exact.push(Some(a));
                }
                None => {
                    values.push(r.eval_f64(root.value));
                    exact.push(None);
                }
            }
        }
        let all_positive = tarski_query(&t1, &r) == ex.roots.len() as i64;
        return Ok(WeightNumbers {
            values,
            labels: spectrum1.labels.clone(),
            exact: Some(ExactWeights { polynomial: r, values: exact, all_positive }),
        });
    }
    let eval = EntireEval::new(ts, q)?;
    let values = spectrum1
        .values
        .par_iter()
        .map(|&l| {
            let (v, d) = eval.theta_with_derivative(l)?;
            if d[1] == 0.0 || !d[1].is_finite() {
                return Err(Error::NonSimpleZero(l));
            }
            Ok(-v[0] / d[1])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightNumbers { values, labels: spectrum1.labels.clone(), exact: None })
}

/// `M(λ) = −Θ₀(λ)/Θ₁(λ)`.
pub fn weyl_eval(ts: &TimeScale, q: &Potential, lambda: C64) -> Result<C64> {
    weyl_eval_m(ts, q, 1, lambda)
}

/// `M_m(λ) = −D₀^m(λ)/D₁^m(λ)`.
pub fn weyl_eval_m(ts: &TimeScale, q: &Potential, m: usize, lambda: C64) -> Result<C64> {
    let [d0, d1] = if ts.is_discrete() {
        let (p0, p1) = d_functions(ts, q, m)?;
        [p0.eval_complex(lambda), p1.eval_complex(lambda)]
    } else {
        EntireEval::new(ts, q)?.d_pair(m, lambda)?
    };
    if d1.norm() <= 1e-12 * d0.norm().max(1.0) {
        return Err(Error::PoleHit(lambda.re));
    }
    Ok(-d0 / d1)
}

/// Exact `M(λ)` at a rational point of a discrete scale.
pub fn weyl_eval_exact(ts: &TimeScale, q: &Potential, lambda: &Rational) -> Result<Rational> {
    let (t0, t1) = d_functions(ts, q, 1)?;
    let den = t1.eval(lambda);
    if den.is_zero() {
        return Err(Error::PoleHit(rational::to_f64(lambda)));
    }
    Ok(-t0.eval(lambda) / den)
}

/// Limit of `M(λ)` as `λ → −∞`: `−μ₀(a₂ − a₁)`, and `0` for a single segment.
pub fn weyl_constant(ts: &TimeScale) -> Rational {
    if ts.len() == 1 || !ts.mu0() {
        Rational::zero()
    } else {
        -(ts.a(2) - ts.a(1))
    }
}

/// Weyl function assembled from poles and residues.
#[derive(Debug, Clone, PartialEq)]
pub enum WeylFunction {
    /// `constant + numerator/denominator` with `deg numerator < deg denominator`.
    Exact { constant: Rational, numerator: PolyRat, denominator: PolyRat },
    /// `constant + Σ residues_n/(λ − poles_n)`, truncated.
    Numeric { constant: f64, poles: Vec<f64>, residues: Vec<f64> },
}

impl WeylFunction {
    pub fn eval(&self, lambda: C64) -> Result<C64> {
        match self {
            WeylFunction::Exact { constant, numerator, denominator } => {
                let den = denominator.eval_complex(lambda);
                if den.norm() <= 1e-12 * denominator.magnitude_at(lambda.norm()).max(1.0) {
                    return Err(Error::PoleHit(lambda.re));
                }
                Ok(C64::from(rational::to_f64(constant)) + numerator.eval_complex(lambda) / den)
            }
            WeylFunction::Numeric { constant, poles, residues } => {
                let mut sum = C64::from(*constant);
                for (p, r) in poles.iter().zip(residues) {
                    let d = lambda - p;
                    if d.norm() <= 1e-12 * p.abs().max(1.0) {
                        return Err(Error::PoleHit(lambda.re));
                    }
                    sum += r / d;
                }
                Ok(sum)
            }
        }
    }

    /// `(P, Q)` with `M = P/Q` for the exact form.
    pub fn as_ratio(&self) -> Option<(PolyRat, PolyRat)> {
        match self {
            WeylFunction::Exact { constant, numerator, denominator } => {
                Some((&denominator.scale(constant) + numerator, denominator.clone()))
            }
            WeylFunction::Numeric { .. } => None,
        }
    }
}

/// Exact partial-fraction assembly on a discrete scale.
pub fn weyl_from_exact(ts: &TimeScale, roots: &RootSet, weights: &WeightSet) -> Result<WeylFunction> {
    let constant = weyl_constant(ts);
    let denominator = roots.monic_polynomial();
    let numerator = match (roots, weights) {
        (RootSet::Values(l), WeightSet::Values(a)) => {
            if l.len() != a.len() {
                return Err(Error::LengthMismatch { left: l.len(), right: a.len() });
            }
            let mut num = PolyRat::zero();
            for (n, an) in a.iter().enumerate() {
                let others: Vec<Rational> = l.iter().enumerate().filter(|(m, _)| *m != n).map(|(_, v)| v.clone()).collect();
                num = &num + &PolyRat::from_roots(&others).scale(an);
            }
            num
        }
        (_, WeightSet::Polynomial(r)) => (r * &denominator.derivative()).rem(&denominator),
        (RootSet::RootsOf(_), WeightSet::Values(_)) => {
            return Err(Error::NotSupported(
                "explicit weight values need explicit eigenvalues; give the weights as a polynomial".into(),
            ))
        }
    };
    Ok(WeylFunction::Exact { constant, numerator, denominator })
}

/// Weyl function from a spectrum and its weight numbers: exact on discrete
/// scales, a truncated partial-fraction sum otherwise.
pub fn weyl_from_spectral_data(ts: &TimeScale, spectrum1: &Spectrum, weights: &WeightNumbers) -> Result<WeylFunction> {
    if spectrum1.len() != weights.values.len() {
        return Err(Error::LengthMismatch { left: spectrum1.len(), right: weights.values.len() });
    }
    if let (Some(s), Some(w)) = (&spectrum1.exact, &weights.exact) {
        return weyl_from_exact(ts, &s.root_set(), &WeightSet::Polynomial(w.polynomial.clone()));
    }
    Ok(WeylFunction::Numeric {
        constant: rational::to_f64(&weyl_constant(ts)),
        poles: spectrum1.values.clone(),
        residues: weights.values.clone(),
    })
}

/// `Θ_j` from its zeros on a discrete scale. The leading coefficient depends
/// only on the gaps.
pub fn hadamard_reconstruct(ts: &TimeScale, j: u8, roots: &RootSet) -> Result<PolyRat> {
    let jj = check_j(j)?;
    if !ts.is_discrete() {
        return Err(Error::NotSupported("reconstruction from zeros needs a discrete scale".into()));
    }
    let m = ts.n_isolated();
    if roots.len() != m - 2 {
        return Err(Error::WrongCount { expected: m - 2, got: roots.len() });
    }
    if let RootSet::RootsOf(p) = roots {
        let real = real_roots(p).map(|r| r.len());
        if real != Some(m - 2) {
            return Err(Error::PolynomialDegenerate(format!("{p} does not have {} simple real roots", m - 2)));
        }
    }
    let lead = transfer_leading_coefficient(ts, 1, m - 1, 1, 2 - jj)?;
    Ok(roots.monic_polynomial().scale(&lead))
}

/// Result of the spectra-disjointness check.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointnessReport {
    pub min_gap: f64,
    pub violations: Vec<(f64, f64)>,
    /// `gcd(Θ₀, Θ₁) = 1` on discrete scales.
    pub exact_disjoint: Option<bool>,
    pub passed: bool,
}

pub fn spectra_disjointness_check(s0: &Spectrum, s1: &Spectrum, tol: f64) -> DisjointnessReport {
    let mut min_gap = f64::INFINITY;
    let mut violations = Vec::new();
    for &a in &s0.values {
        for &b in &s1.values {
            let gap = (a - b).abs();
            min_gap = min_gap.min(gap);
            if gap <= tol * a.abs().max(1.0) {
                violations.push((a, b));
            }
        }
    }
    let exact_disjoint = match (&s0.exact, &s1.exact) {
        (Some(a), Some(b)) => Some(a.polynomial.gcd(&b.polynomial).degree() == Some(0)),
        _ => None,
    };
    let passed = exact_disjoint.unwrap_or(violations.is_empty());
    DisjointnessReport { min_gap, violations, exact_disjoint, passed }
}

/// Result of checking `α_n · ∫ C(σ(t), λ_n)² Δt = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormIdentityReport {
    pub products: Vec<f64>,
    pub max_deviation: f64,
    /// Exact polynomial identity on discrete scales.
    pub exact: Option<bool>,
    pub passed: bool,
}

/// `Σ_{b_l < t_r} g_l C(a_{l+1})²` as a polynomial on a discrete scale.
pub fn norm_polynomial(ts: &TimeScale, q: &Potential) -> Result<PolyRat> {
    let c = propagate_exact(ts, q, 1, (rational::int(1), Rational::zero()))?;
    let t_r = ts.t_r();
    let mut total = PolyRat::zero();
    for (l, state) in (1..ts.len()).zip(&c[1..]) {
        if ts.b_f64(l) < t_r {
            let y = &state.y;
            total = &total + &(y * y).scale(ts.gap(l));
        }
    }
    Ok(total)
}

pub fn weight_norm_identity_check(
    ts: &TimeScale,
    q: &Potential,
    spectrum1: &Spectrum,
    weights: &WeightNumbers,
    tol: f64,
) -> Result<NormIdentityReport> {
    if spectrum1.len() != weights.values.len() {
        return Err(Error::LengthMismatch { left: spectrum1.len(), right: weights.values.len() });
    }
    let (products, exact) = if ts.is_discrete() {
        let nrm = norm_polynomial(ts, q)?;
        let exact = match (&weights.exact, &spectrum1.exact) {
            (Some(w), Some(s)) => {
                let defect = &(&w.polynomial * &nrm) - &PolyRat::one();
                Some(defect.rem(&s.polynomial).is_zero())
            }
            _ => None,
        };
        let products = spectrum1.values.iter().zip(&weights.values).map(|(&l, &a)| a * nrm.eval_f64(l)).collect();
        (products, exact)
    } else {
        let eval = EntireEval::new(ts, q)?;
        let products = spectrum1
            .values
            .par_iter()
            .zip(weights.values.par_iter())
            .map(|(&l, &a)| eval.norm_integral(l).map(|n| a * n))
            .collect::<Result<Vec<_>>>()?;
        (products, None)
    };
    let max_deviation = products.iter().map(|p: &f64| (p - 1.0).abs()).fold(0.0, f64::max);
    let passed = exact.unwrap_or(true) && max_deviation <= tol;
    Ok(NormIdentityReport { products, max_deviation, exact, passed })
}
