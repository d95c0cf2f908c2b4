//! JSON file formats: problem files and spectral-data files.
//!
//! Numbers may be written as JSON numbers or as strings (`"3"`, `"-7/12"`,
//! `"0.25"`). Rationals are always written back as `"p/q"` strings.
//! Polynomials are coefficient arrays in ascending powers of λ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::SpectralInput;
use crate::poly::PolyRat;
use crate::propagation::Backend;
use crate::rational::{self, Literal, Rational};
use crate::spectral::{RootSet, WeightSet};
use crate::timescale::{Potential, SegmentProfile, TimeScale};

/// Relative tolerance used when snapping rounded spectral data back to
/// rationals.
pub const SNAP_TOLERANCE: f64 = 1e-9;
/// Denominator bound for decimal literals in tolerant mode.
pub const DECIMAL_MAX_DEN: u64 = 1_000_000_000_000;

/// A number as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Float(f64),
}

impl Number {
    fn literal(&self) -> Result<(Rational, Literal)> {
        match self {
            Number::Text(s) => rational::parse(s),
            // shortest round-trip decimal, so `0.1` reads as 1/10
            Number::Float(x) if x.is_finite() => rational::parse(&format!("{x}")),
            Number::Float(x) => Err(Error::Parse(format!("non-finite number {x}"))),
        }
    }

    /// Exact value; decimals are taken at face value.
    pub fn exact(&self) -> Result<Rational> {
        Ok(self.literal()?.0)
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(_) => Ok(rational::to_f64(&self.exact()?)),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Number::Text(rational::format(r))
    }
}

fn parse_intervals(raw: &[[Number; 2]]) -> Result<TimeScale> {
    let pairs = raw.iter().map(|[a, b]| Ok((a.exact()?, b.exact()?))).collect::<Result<Vec<_>>>()?;
    TimeScale::new(pairs)
}

fn intervals_of(ts: &TimeScale) -> Vec<[Number; 2]> {
    (1..=ts.len()).map(|l| [Number::from_rational(ts.a(l)), Number::from_rational(ts.b(l))]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentSpec {
    Constant(f64),
    /// Coefficients in ascending powers of the local coordinate `x − a_l`.
    Polynomial(Vec<f64>),
    /// Equally spaced values across the segment, endpoints included.
    Samples(Vec<f64>),
}

impl From<SegmentSpec> for SegmentProfile {
    fn from(s: SegmentSpec) -> Self {
        match s {
            SegmentSpec::Constant(c) => SegmentProfile::Constant(c),
            SegmentSpec::Polynomial(p) => SegmentProfile::Polynomial(p),
            SegmentSpec::Samples(v) => SegmentProfile::Samples(v),
        }
    }
}

impl From<&SegmentProfile> for SegmentSpec {
    fn from(s: &SegmentProfile) -> Self {
        match s {
            SegmentProfile::Constant(c) => SegmentSpec::Constant(*c),
            SegmentProfile::Polynomial(p) => SegmentSpec::Polynomial(p.clone()),
            SegmentProfile::Samples(v) => SegmentSpec::Samples(v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    /// Values at isolated points, keyed by interval index `l` (1-based).
    #[serde(default)]
    pub isolated: BTreeMap<usize, Number>,
    /// One profile per segment, in order; omitted means `q ≡ 0` on segments.
    #[serde(default)]
    pub segments: Option<Vec<SegmentSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    Exact,
    Numeric,
}

impl From<BackendName> for Backend {
    fn from(b: BackendName) -> Self {
        match b {
            BackendName::Exact => Backend::Exact,
            BackendName::Numeric => Backend::Numeric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    pub lambda_max: Option<f64>,
    pub n_max: Option<usize>,
    pub tolerance: Option<f64>,
    pub backend: Option<BackendName>,
    /// Extra λ values at which to sample the characteristic functions.
    pub lambda_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub intervals: Vec<[Number; 2]>,
    #[serde(default)]
    pub potential: PotentialSpec,
    #[serde(default)]
    pub options: ProblemOptions,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Validated scale and potential. Missing isolated values default to
    /// zero only when the whole `isolated` map is absent.
    pub fn build(&self) -> Result<(TimeScale, Potential)> {
        let ts = parse_intervals(&self.intervals)?;
        let isolated = if self.potential.isolated.is_empty() {
            Potential::required_points(&ts).into_iter().map(|l| (l, Rational::from_integer(0.into()))).collect()
        } else {
            self.potential.isolated.iter().map(|(l, v)| Ok((*l, v.exact()?))).collect::<Result<BTreeMap<_, _>>>()?
        };
        let segments = match &self.potential.segments {
            Some(s) => s.iter().cloned().map(SegmentProfile::from).collect(),
            None => vec![SegmentProfile::Constant(0.0); ts.n_segments()],
        };
        let q = Potential::new(&ts, isolated, segments)?;
        Ok((ts, q))
    }

    pub fn from_problem(ts: &TimeScale, q: &Potential) -> Self {
        ProblemFile {
            intervals: intervals_of(ts),
            potential: PotentialSpec {
                isolated: q.isolated_values().iter().map(|(l, v)| (*l, Number::from_rational(v))).collect(),
                segments: Some(q.segments().iter().map(SegmentSpec::from).collect()),
            },
            options: ProblemOptions::default(),
        }
    }
}

/// A root list: explicit values, or all real roots of a polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootsSpec {
    Values(Vec<Number>),
    RootsOf {
        roots_of: Vec<Number>,
    },
}

/// Weight numbers: explicit values, or a polynomial `R` with `α_n = R(λ_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsSpec {
    Values(Vec<Number>),
    Polynomial {
        polynomial: Vec<Number>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    WeylFunction { numerator: Vec<Number>, denominator: Vec<Number> },
    TwoSpectra { spectrum0: RootsSpec, spectrum1: RootsSpec },
    SpectrumPlusWeights { spectrum1: RootsSpec, weights: WeightsSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralDataFile {
    pub intervals: Vec<[Number; 2]>,
    /// Reject decimal literals instead of rationalizing them.
    #[serde(default)]
    pub strict: bool,
    pub data: DataSpec,
}

/// Parsed spectral data with a flag recording whether any decimal literal was
/// rationalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedData {
    pub ts: TimeScale,
    pub input: SpectralInput,
    pub approximate: bool,
}

struct Reader {
    strict: bool,
    approximate: bool,
}

impl Reader {
    fn number(&mut self, n: &Number) -> Result<Rational> {
        let (value, lit) = n.literal()?;
        if lit == Literal::Exact {
            return Ok(value);
        }
        if self.strict {
            return Err(Error::Parse(format!("decimal literal {n:?} not allowed in strict mode; write it as p/q")));
        }
        let r = rational::rationalize_exact(&value, DECIMAL_MAX_DEN);
        self.approximate |= r != value || n_is_long(n);
        Ok(r)
    }

    fn list(&mut self, v: &[Number]) -> Result<Vec<Rational>> {
        v.iter().map(|n| self.number(n)).collect()
    }

    fn poly(&mut self, v: &[Number]) -> Result<PolyRat> {
        Ok(PolyRat::new(self.list(v)?))
    }

    fn roots(&mut self, r: &RootsSpec) -> Result<RootSet> {
        Ok(match r {
            RootsSpec::Values(v) => RootSet::Values(self.list(v)?),
            RootsSpec::RootsOf { roots_of } => RootSet::RootsOf(self.poly(roots_of)?),
        })
    }

    fn weights(&mut self, w: &WeightsSpec) -> Result<WeightSet> {
        Ok(match w {
            WeightsSpec::Values(v) => WeightSet::Values(self.list(v)?),
            WeightsSpec::Polynomial { polynomial } => WeightSet::Polynomial(self.poly(polynomial)?),
        })
    }
}

/// A decimal with 15 or more significant digits is taken to be a rounded
/// irrational.
fn n_is_long(n: &Number) -> bool {
    let digits = |s: &str| s.split(['e', 'E']).next().unwrap_or("").chars().filter(char::is_ascii_digit).count();
    match n {
        Number::Text(s) => digits(s) >= 15,
        Number::Float(x) => digits(&format!("{x}")) >= 15,
    }
}

impl SpectralDataFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(&self) -> Result<ParsedData> {
        let ts = parse_intervals(&self.intervals)?;
        let mut rd = Reader { strict: self.strict, approximate: false };
        let input = match &self.data {
            DataSpec::WeylFunction { numerator, denominator } => {
                SpectralInput::WeylFunction { numerator: rd.poly(numerator)?, denominator: rd.poly(denominator)? }
            }
            DataSpec::TwoSpectra { spectrum0, spectrum1 } => {
                SpectralInput::TwoSpectra { spectrum0: rd.roots(spectrum0)?, spectrum1: rd.roots(spectrum1)? }
            }
            DataSpec::SpectrumPlusWeights { spectrum1, weights } => {
                SpectralInput::SpectrumPlusWeights { spectrum1: rd.roots(spectrum1)?, weights: rd.weights(weights)? }
            }
        };
        Ok(ParsedData { ts, input, approximate: rd.approximate })
    }

    pub fn from_input(ts: &TimeScale, input: &SpectralInput) -> Self {
        let nums = |v: &[Rational]| v.iter().map(Number::from_rational).collect::<Vec<_>>();
        let roots = |r: &RootSet| match r {
            RootSet::Values(v) => RootsSpec::Values(nums(v)),
            RootSet::RootsOf(p) => RootsSpec::RootsOf { roots_of: nums(p.coeffs()) },
        };
        let data = match input {
            SpectralInput::WeylFunction { numerator, denominator } => {
                DataSpec::WeylFunction { numerator: nums(numerator.coeffs()), denominator: nums(denominator.coeffs()) }
            }
            SpectralInput::TwoSpectra { spectrum0, spectrum1 } => {
                DataSpec::TwoSpectra { spectrum0: roots(spectrum0), spectrum1: roots(spectrum1) }
            }
            SpectralInput::SpectrumPlusWeights { spectrum1, weights } => DataSpec::SpectrumPlusWeights {
                spectrum1: roots(spectrum1),
                weights: match weights {
                    WeightSet::Values(v) => WeightsSpec::Values(nums(v)),
                    WeightSet::Polynomial(p) => WeightsSpec::Polynomial { polynomial: nums(p.coeffs()) },
                },
            },
        };
        SpectralDataFile { intervals: intervals_of(ts), strict: true, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::{recover, spectral_data, DataKind};
    use crate::rational::{int, ratio};

    #[test]
    fn problem_file_round_trip() {
        let text = r#"{
            "intervals": [[0, 1], ["2", "2"], ["5/2", "5/2"], [3, 3]],
            "potential": {"isolated": {"2": "1/3"}, "segments": [{"kind": "constant", "data": 1.5}]},
            "options": {"lambda_max": 100, "backend": "numeric"}
        }"#;
        let pf = ProblemFile::from_json(text).unwrap();
        let (ts, q) = pf.build().unwrap();
        assert_eq!(ts.n_segments(), 1);
        assert_eq!(q.jump_value(&ts, 2).unwrap(), ratio(1, 3));
        let back = ProblemFile::from_problem(&ts, &q);
        let again = ProblemFile::from_json(&serde_json::to_string(&back).unwrap()).unwrap();
        assert_eq!(again.build().unwrap(), (ts, q));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ProblemFile::from_json(r#"{"intervals": [[0, 1]], "extra": 1}"#).is_err());
        let bad = r#"{"intervals": [[0,0],[1,1],[2,2]], "data": {"kind": "two_spectra", "spectrum0": [], "spectrum1": [], "x": 1}}"#;
        assert!(SpectralDataFile::from_json(bad).is_err());
    }

    #[test]
    fn overlap_keeps_its_index() {
        let pf = ProblemFile::from_json(r#"{"intervals": [[0, 2], [1, 3]]}"#).unwrap();
        assert!(matches!(pf.build(), Err(Error::Overlap { index: 2 })));
    }

    #[test]
    fn spectral_data_round_trip() {
        let ts = TimeScale::from_points(&[int(0), int(1), int(3), int(4), int(6)]).unwrap();
        let q = Potential::discrete(&ts, &[ratio(1, 2), int(-1), ratio(2, 7)]).unwrap();
        for kind in DataKind::ALL {
            let data = spectral_data(&ts, &q, kind).unwrap();
            let file = SpectralDataFile::from_input(&ts, &data);
            let text = serde_json::to_string(&file).unwrap();
            let parsed = SpectralDataFile::from_json(&text).unwrap().parse().unwrap();
            assert_eq!(parsed.input, data);
            assert!(!parsed.approximate);
            assert_eq!(recover(&parsed.ts, &parsed.input).unwrap().values, q.discrete_values());
        }
    }

    #[test]
    fn strict_mode_rejects_decimals() {
        let text = r#"{"intervals": [[0,0],[1,1],[2,2],[3,3]], "strict": true,
            "data": {"kind": "two_spectra", "spectrum0": [1, 3], "spectrum1": [0.3819660112501051, 2.618033988749895]}}"#;
        assert!(SpectralDataFile::from_json(text).unwrap().parse().is_err());
        let loose = text.replace("\"strict\": true", "\"strict\": false");
        let parsed = SpectralDataFile::from_json(&loose).unwrap().parse().unwrap();
        assert!(parsed.approximate);
    }
}
