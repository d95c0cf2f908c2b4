//! Recovery of the potential on a purely discrete scale from spectral data.
//!
//! Three equivalent kinds of data are accepted: the Weyl function, two
//! spectra, or the `j = 1` spectrum with its weight numbers. Each is first
//! turned into the characteristic pair `(Θ₀, Θ₁)`, which is then peeled one
//! isolated point at a time by exact polynomial division.

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::transfer_leading_coefficient;
use crate::error::{Error, Result};
use crate::poly::{real_roots, tarski_query, PolyRat};
use crate::propagation::d_functions;
use crate::rational::{self, Rational};
use crate::spectral::{hadamard_reconstruct, weight_polynomial, weyl_from_exact, RootSet, WeightSet};
use crate::timescale::{Potential, TimeScale};

/// Spectral data on a discrete scale.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralInput {
    /// `M(λ) = numerator / denominator`, not necessarily in lowest terms.
    WeylFunction { numerator: PolyRat, denominator: PolyRat },
    TwoSpectra { spectrum0: RootSet, spectrum1: RootSet },
    SpectrumPlusWeights { spectrum1: RootSet, weights: WeightSet },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    WeylFunction,
    TwoSpectra,
    SpectrumPlusWeights,
}

impl DataKind {
    pub const ALL: [DataKind; 3] = [DataKind::WeylFunction, DataKind::TwoSpectra, DataKind::SpectrumPlusWeights];

    pub fn name(self) -> &'static str {
        match self {
            DataKind::WeylFunction => "weyl_function",
            DataKind::TwoSpectra => "two_spectra",
            DataKind::SpectrumPlusWeights => "spectrum_plus_weights",
        }
    }
}

impl SpectralInput {
    pub fn kind(&self) -> DataKind {
        match self {
            SpectralInput::WeylFunction { .. } => DataKind::WeylFunction,
            SpectralInput::TwoSpectra { .. } => DataKind::TwoSpectra,
            SpectralInput::SpectrumPlusWeights { .. } => DataKind::SpectrumPlusWeights,
        }
    }
}

/// One peeling step at `a_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryStep {
    pub m: usize,
    pub d0: PolyRat,
    pub d1: PolyRat,
    /// `D₀^{m+1} = D₀^m − g_m D₁^m`.
    pub d0_next: PolyRat,
    /// `D₀^m = quotient · D₀^{m+1} + remainder`.
    pub quotient: PolyRat,
    pub remainder: PolyRat,
    pub q_value: Rational,
    pub d1_next: PolyRat,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecoveryTrace {
    pub steps: Vec<RecoveryStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    /// `q(a_1), …, q(a_{M−2})`.
    pub values: Vec<Rational>,
    pub potential: Potential,
    pub trace: RecoveryTrace,
}

fn require_discrete(ts: &TimeScale) -> Result<()> {
    if ts.is_discrete() {
        Ok(())
    } else {
        Err(Error::NotSupported(format!(
            "potential recovery needs a purely discrete scale; this one has {} segment(s), where the spectral data \
             determine q uniquely but no constructive recovery is available",
            ts.n_segments()
        )))
    }
}

fn inconsistent(msg: impl Into<String>) -> Error {
    Error::InconsistentData(msg.into())
}

/// Every weight must be positive at every root.
fn check_weights_positive(spectrum1: &RootSet, weights: &WeightSet) -> Result<()> {
    match (spectrum1, weights) {
        (_, WeightSet::Values(a)) => {
            if let Some(n) = a.iter().position(|x| !x.is_positive()) {
                return Err(inconsistent(format!("weight number {} is {} (must be positive)", n + 1, a[n])));
            }
        }
        (RootSet::Values(l), WeightSet::Polynomial(r)) => {
            if let Some(n) = l.iter().position(|x| !r.eval(x).is_positive()) {
                return Err(inconsistent(format!("weight at λ = {} is not positive", l[n])));
            }
        }
        (RootSet::RootsOf(p), WeightSet::Polynomial(r)) => {
            let roots = real_roots(p).ok_or_else(|| inconsistent(format!("{p} has a repeated root")))?;
            if tarski_query(p, r) != roots.len() as i64 {
                return Err(inconsistent("a weight number is not positive"));
            }
        }
    }
    Ok(())
}

fn check_simple_real(p: &PolyRat, expected: usize, what: &str) -> Result<()> {
    match real_roots(p) {
        Some(r) if r.len() == expected && p.degree() == Some(expected) => Ok(()),
        _ => Err(inconsistent(format!("{what} = {p} does not have {expected} simple real zeros"))),
    }
}

/// The characteristic pair `(Θ₀, Θ₁)` determined by any of the three data
/// kinds, with leading coefficients fixed by the gaps.
pub fn normalize_input(ts: &TimeScale, input: &SpectralInput) -> Result<(PolyRat, PolyRat)> {
    require_discrete(ts)?;
    let m = ts.n_isolated();
    let (t0, t1) = match input {
        SpectralInput::WeylFunction { numerator, denominator } => {
            if denominator.is_zero() {
                return Err(inconsistent("Weyl function has a zero denominator"));
            }
            let g = numerator.gcd(denominator);
            let (num, _) = numerator.div_rem(&g);
            let (den, _) = denominator.div_rem(&g);
            let t1 = hadamard_reconstruct(ts, 1, &RootSet::RootsOf(den.clone()))?;
            let (t0, rem) = (&num * &t1).div_rem(&den);
            debug_assert!(rem.is_zero());
            let t0 = -t0;
            let lead0 = transfer_leading_coefficient(ts, 1, m - 1, 1, 2)?;
            if t0.degree() != Some(m - 2) || t0.leading() != lead0 {
                return Err(inconsistent(format!(
                    "Weyl function numerator gives Θ₀ = {t0}, expected degree {} with leading coefficient {lead0}",
                    m - 2
                )));
            }
            check_simple_real(&t0, m - 2, "Θ₀")?;
            (t0, t1)
        }
        SpectralInput::TwoSpectra { spectrum0, spectrum1 } => {
            let common = spectrum0.monic_polynomial().gcd(&spectrum1.monic_polynomial());
            if common.degree() != Some(0) {
                return Err(inconsistent(format!("the two spectra share the zeros of {common}")));
            }
            (hadamard_reconstruct(ts, 0, spectrum0)?, hadamard_reconstruct(ts, 1, spectrum1)?)
        }
        SpectralInput::SpectrumPlusWeights { spectrum1, weights } => {
            check_weights_positive(spectrum1, weights)?;
            let (numerator, denominator) =
                weyl_from_exact(ts, spectrum1, weights)?.as_ratio().expect("exact Weyl function");
            return normalize_input(ts, &SpectralInput::WeylFunction { numerator, denominator });
        }
    };
    if t0.gcd(&t1).degree() != Some(0) {
        return Err(inconsistent("Θ₀ and Θ₁ have a common zero"));
    }
    Ok((t0, t1))
}

/// [`normalize_input`] for data that were rounded, for example decimal
/// eigenvalues: every coefficient of the pair is replaced by the simplest
/// rational within relative distance `rel_tol`.
pub fn normalize_input_approx(ts: &TimeScale, input: &SpectralInput, rel_tol: f64) -> Result<(PolyRat, PolyRat)> {
    let (t0, t1) = normalize_input(ts, input)?;
    let tol = rational::from_f64(rel_tol)?;
    let snap = |p: &PolyRat| {
        PolyRat::new(
            p.coeffs()
                .iter()
                .map(|c| {
                    let w = c.abs() * &tol;
                    rational::simplest_between(&(c - &w), &(c + &w))
                })
                .collect(),
        )
    };
    Ok((snap(&t0), snap(&t1)))
}

/// Peels the pair `(Θ₀, Θ₁)` point by point, recovering `q(a_1), …,
/// q(a_{M−2})`.
///
/// At step `m`, `D₀^{m+1} = D₀^m − g_m D₁^m`; dividing `D₀^m` by `D₀^{m+1}`
/// leaves a linear quotient whose constant term is
/// `1 + g_m² q(a_m) + g_m/g_{m+1}`.
pub fn peel_potential(ts: &TimeScale, theta0: &PolyRat, theta1: &PolyRat) -> Result<Recovery> {
    require_discrete(ts)?;
    let count = ts.n_isolated() - 2;
    let mut d0 = theta0.clone();
    let mut d1 = theta1.clone();
    let mut steps = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count);
    for m in 1..=count {
        let g = ts.gap(m).clone();
        let g_next = ts.gap(m + 1).clone();
        let d0_next = &d0 - &d1.scale(&g);
        if d0_next.is_zero() {
            return Err(Error::DivisionDegenerate(m + 1));
        }
        let (quotient, remainder) = d0.div_rem(&d0_next);
        if quotient.degree() != Some(1) {
            return Err(Error::NonLinearQuotient { step: m, degree: quotient.degree().unwrap_or(0) });
        }
        let g2 = &g * &g;
        let q_value = (quotient.coeff(0) - Rational::one()) / &g2 - (&g * &g_next).recip();
        // jump matrix entries at a_m: α₂₁ = g(q − λ), α₂₂ = 1 + g²(q − λ)
        let a21 = PolyRat::linear(&g * &q_value, -g.clone());
        let a22 = PolyRat::linear(Rational::one() + &g2 * &q_value, -g2);
        let d1_next = &(&a22 * &d1) - &(&a21 * &d0);
        steps.push(RecoveryStep {
            m,
            d0: d0.clone(),
            d1: d1.clone(),
            d0_next: d0_next.clone(),
            quotient,
            remainder,
            q_value: q_value.clone(),
            d1_next: d1_next.clone(),
        });
        values.push(q_value);
        d0 = d0_next;
        d1 = d1_next;
    }
    // the last two points carry the boundary conditions alone
    let g_last = ts.gap(count + 1);
    if d0 != PolyRat::constant(g_last.clone()) || d1 != PolyRat::one() {
        return Err(inconsistent(format!(
            "peeling ends at (D₀, D₁) = ({d0}, {d1}), expected ({g_last}, 1); the data match no potential on this scale"
        )));
    }
    let potential = Potential::discrete(ts, &values)?;
    Ok(Recovery { values, potential, trace: RecoveryTrace { steps } })
}

/// Normalizes the data and runs [`peel_potential`].
pub fn recover(ts: &TimeScale, input: &SpectralInput) -> Result<Recovery> {
    let (t0, t1) = normalize_input(ts, input)?;
    peel_potential(ts, &t0, &t1)
}

/// Roots of `p` as explicit rationals when all are rational.
fn exact_roots(p: &PolyRat) -> Result<RootSet> {
    let roots = real_roots(p).ok_or_else(|| Error::PolynomialDegenerate(format!("{p} has a repeated root")))?;
    Ok(match roots.iter().map(|r| r.exact.clone()).collect::<Option<Vec<_>>>() {
        Some(v) => RootSet::Values(v),
        None => RootSet::RootsOf(p.monic()),
    })
}

/// Spectral data of the given kind for a discrete problem, computed exactly.
pub fn spectral_data(ts: &TimeScale, q: &Potential, kind: DataKind) -> Result<SpectralInput> {
    require_discrete(ts)?;
    let (t0, t1) = d_functions(ts, q, 1)?;
    Ok(match kind {
        DataKind::WeylFunction => SpectralInput::WeylFunction { numerator: -t0, denominator: t1 },
        DataKind::TwoSpectra => SpectralInput::TwoSpectra { spectrum0: exact_roots(&t0)?, spectrum1: exact_roots(&t1)? },
        DataKind::SpectrumPlusWeights => {
            let spectrum1 = exact_roots(&t1)?;
            let r = weight_polynomial(&t0, &t1)?;
            let weights = match &spectrum1 {
                RootSet::Values(l) => WeightSet::Values(l.iter().map(|x| r.eval(x)).collect()),
                RootSet::RootsOf(_) => WeightSet::Polynomial(r),
            };
            SpectralInput::SpectrumPlusWeights { spectrum1, weights }
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    pub kind: DataKind,
    pub original: Vec<Rational>,
    pub recovered: Option<Vec<Rational>>,
    pub error: Option<String>,
    pub exact_match: bool,
}

/// Forward solve, extraction of one data kind, recovery and exact comparison.
pub fn roundtrip_check(ts: &TimeScale, q: &Potential, kind: DataKind) -> RoundtripReport {
    let original = q.discrete_values();
    let outcome = spectral_data(ts, q, kind).and_then(|data| recover(ts, &data));
    match outcome {
        Ok(r) => RoundtripReport { kind, exact_match: r.values == original, original, recovered: Some(r.values), error: None },
        Err(e) => RoundtripReport { kind, original, recovered: None, error: Some(e.to_string()), exact_match: false },
    }
}

/// Roundtrips for every case and data kind, run in parallel.
pub fn roundtrip_batch(cases: &[(TimeScale, Potential)], kinds: &[DataKind]) -> Vec<RoundtripReport> {
    cases
        .par_iter()
        .flat_map_iter(|(ts, q)| kinds.iter().map(move |&k| roundtrip_check(ts, q, k)))
        .collect()
}
