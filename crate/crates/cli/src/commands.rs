//! One function per subcommand. Each returns a report payload and, where it
//! has one, a table for `--csv`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use tsspec_core::asymptotics::{verify_asymptotics, verify_weights, WeightPrediction};
use tsspec_core::inverse::{self, peel_potential, normalize_input, normalize_input_approx};
use tsspec_core::io::{BackendName, ProblemFile, ProblemOptions, SpectralDataFile, SNAP_TOLERANCE};
use tsspec_core::propagation::{d_functions, EntireEval};
use tsspec_core::rational::{self};
use tsspec_core::spectral::{
    find_spectrum_with, weight_norm_identity_check, weight_numbers, weyl_constant, weyl_eval,
    weyl_from_exact, weyl_from_spectral_data, SearchOptions,
};
use tsspec_core::{BranchLabel, DataKind, Error, Potential, Predictor, Spectrum, TimeScale, WeightSet, WeylFunction};

use crate::report::{num, nums, rat, rats, ReportBundle, Table};
use crate::{Cli, CliError, Command, Outcome, DEFAULT_TOLERANCE};

/// Upper end of the search window when neither `--lambda-max` nor `--n-max`
/// is given.
pub const DEFAULT_LAMBDA_MAX: f64 = 400.0;
/// Default `n` range of the asymptotics command.
pub const DEFAULT_N_MAX: usize = 30;
/// Tolerance of the numeric norm identity `α_n ‖C‖² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-8;
const GRID_POINTS: usize = 101;

/// Options after merging command-line flags over the problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub j: Option<u8>,
    pub n_max: Option<usize>,
    pub lambda_max: Option<f64>,
    pub backend: Option<BackendName>,
    pub tolerance: f64,
    pub lambda_grid: Option<Vec<f64>>,
}

impl Settings {
    pub fn resolve(cli: &Cli, file: &ProblemOptions) -> Self {
        Settings {
            j: cli.j,
            n_max: cli.n_max.or(file.n_max),
            lambda_max: cli.lambda_max.or(file.lambda_max),
            backend: cli.backend.map(Into::into).or(file.backend),
            tolerance: cli.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE),
            lambda_grid: file.lambda_grid.clone(),
        }
    }

    fn echo(&self, command: Command) -> Value {
        json!({
            "name": command.name(),
            "j": self.j,
            "n_max": self.n_max,
            "lambda_max": self.lambda_max.map(num),
            "backend": self.backend,
            "tolerance": num(self.tolerance),
        })
    }

    fn search(&self, lambda_max: f64) -> SearchOptions {
        SearchOptions { lambda_max, tolerance: self.tolerance }
    }

    /// The problem file's grid, or evenly spaced points from just below the
    /// potential's minimum up to `λ_max`.
    fn grid(&self, q: &Potential, ts: &TimeScale) -> Vec<f64> {
        if let Some(g) = &self.lambda_grid {
            return g.clone();
        }
        let lo = q.minimum(ts).min(0.0) - 10.0;
        let hi = self.lambda_max.unwrap_or(100.0).max(lo + 1.0);
        (0..GRID_POINTS).map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).collect()
    }
}

struct Problem {
    ts: TimeScale,
    q: Potential,
    options: ProblemOptions,
    bytes: Vec<u8>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn in_file(path: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |source| CliError::InFile { path: path.display().to_string(), source }
}

fn load_problem(cli: &Cli) -> Result<Problem, CliError> {
    let path = cli.problem.as_deref().ok_or_else(|| CliError::Usage("--problem <path> is required".into()))?;
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let file = ProblemFile::from_json(&text).map_err(in_file(path))?;
    let (ts, q) = file.build().map_err(in_file(path))?;
    Ok(Problem { ts, q, options: file.options, bytes })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.command == Command::Inverse {
        return inverse_cmd(cli);
    }
    let p = load_problem(cli)?;
    let s = Settings::resolve(cli, &p.options);
    let (payload, table, failure) = match cli.command {
        Command::Forward => forward(&p, &s).map(|(v, t)| (v, Some(t), None))?,
        Command::Spectrum => spectrum_cmd(&p, &s).map(|(v, t)| (v, Some(t), None))?,
        Command::Weights => weights_cmd(&p, &s).map(|(v, t)| (v, Some(t), None))?,
        Command::Weyl => weyl_cmd(&p, &s).map(|(v, t)| (v, t, None))?,
        Command::Asymptotics => asymptotics_cmd(&p, &s).map(|(v, t)| (v, Some(t), None))?,
        Command::Roundtrip => roundtrip_cmd(&p).map(|(v, t, f)| (v, Some(t), f))?,
        Command::Inverse => unreachable!(),
    };
    let bundle = ReportBundle::new(s.echo(cli.command), &[&p.bytes], payload);
    Ok(Outcome { bundle, table, failure })
}

pub fn label_name(l: BranchLabel) -> String {
    match l {
        BranchLabel::Bounded => "bounded".into(),
        BranchLabel::Branch { k, n } => format!("k{k}n{n}"),
        BranchLabel::Unmatched => "unmatched".into(),
    }
}

fn forward(p: &Problem, s: &Settings) -> Result<(Value, Table), CliError> {
    let (ts, q) = (&p.ts, &p.q);
    let backend = s.backend.unwrap_or(if ts.is_discrete() { BackendName::Exact } else { BackendName::Numeric });
    let mut out = Map::new();
    out.insert("backend".into(), json!(backend));
    out.insert("discrete".into(), json!(ts.is_discrete()));
    let mut table = Table::new(&["lambda", "theta0", "theta1", "wronskian_defect"]);
    let grid = s.grid(q, ts);
    let samples: Vec<[f64; 4]> = match backend {
        BackendName::Exact => {
            if !ts.is_discrete() {
                return Err(Error::BackendMismatch(ts.n_segments()).into());
            }
            let (t0, t1) = d_functions(ts, q, 1)?;
            out.insert("theta0".into(), rats(t0.coeffs()));
            out.insert("theta1".into(), rats(t1.coeffs()));
            out.insert("theta0_text".into(), json!(t0.to_string()));
            out.insert("theta1_text".into(), json!(t1.to_string()));
            let data = inverse::spectral_data(ts, q, DataKind::WeylFunction)?;
            let file = SpectralDataFile::from_input(ts, &data);
            out.insert("spectral_data".into(), serde_json::to_value(file).expect("plain data"));
            grid.iter().map(|&l| [l, t0.eval_f64(l), t1.eval_f64(l), 0.0]).collect()
        }
        BackendName::Numeric => {
            let eval = EntireEval::with_tolerance(ts, q, s.tolerance)?;
            grid.par_iter()
                .map(|&l| {
                    let v = eval.theta_checked(Complex64::from(l))?;
                    Ok([l, v.theta[0].re, v.theta[1].re, v.wronskian_defect_scaled])
                })
                .collect::<Result<Vec<_>, Error>>()?
        }
    };
    let mut rows = Vec::with_capacity(samples.len());
    for v in &samples {
        table.push(v.iter().map(|&x| rational::format_f64(x)).collect());
        rows.push(json!({ "lambda": num(v[0]), "theta0": num(v[1]), "theta1": num(v[2]), "wronskian_defect": num(v[3]) }));
    }
    out.insert("samples".into(), Value::Array(rows));
    Ok((Value::Object(out), table))
}

/// Spectrum of the `j` problem. On scales with segments the window is
/// `--lambda-max`, or grown until it holds `n_max` eigenvalues.
fn compute_spectrum(p: &Problem, s: &Settings, j: u8) -> Result<Spectrum, CliError> {
    let (ts, q) = (&p.ts, &p.q);
    if ts.is_discrete() {
        return Ok(find_spectrum_with(ts, q, j, &s.search(0.0))?);
    }
    if let Some(lm) = s.lambda_max {
        return Ok(find_spectrum_with(ts, q, j, &s.search(lm))?);
    }
    let Some(n) = s.n_max else {
        return Ok(find_spectrum_with(ts, q, j, &s.search(DEFAULT_LAMBDA_MAX))?);
    };
    let mut rho = PI * (n as f64 + 2.0) / ts.total_length_f64();
    loop {
        let spec = find_spectrum_with(ts, q, j, &s.search(rho * rho))?;
        if spec.len() > n {
            return Ok(spec);
        }
        rho *= 1.5;
    }
}

fn truncated(len: usize, n_max: Option<usize>) -> usize {
    n_max.map_or(len, |n| n.min(len))
}

fn spectrum_cmd(p: &Problem, s: &Settings) -> Result<(Value, Table), CliError> {
    let j = s.j.unwrap_or(0);
    let spec = compute_spectrum(p, s, j)?;
    let weights = if j == 1 { Some(weight_numbers(&p.ts, &p.q, &spec)?) } else { None };
    let count = truncated(spec.len(), s.n_max);
    let mut table = Table::new(&["index", "lambda", "label", "weight"]);
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let exact = spec.exact.as_ref().and_then(|e| e.roots[i].exact.as_ref()).map(rat);
        let weight = weights.as_ref().map(|w| w.values[i]);
        let weight_exact =
            weights.as_ref().and_then(|w| w.exact.as_ref()).and_then(|e| e.values[i].as_ref()).map(rat);
        table.push(vec![
            (i + 1).to_string(),
            rational::format_f64(spec.values[i]),
            label_name(spec.labels[i]),
            weight.map(rational::format_f64).unwrap_or_default(),
        ]);
        rows.push(json!({
            "index": i + 1,
            "lambda": num(spec.values[i]),
            "exact": exact,
            "label": label_name(spec.labels[i]),
            "weight": weight.map(num),
            "weight_exact": weight_exact,
        }));
    }
    let mut out = Map::new();
    out.insert("j".into(), json!(j));
    out.insert("eigenvalues".into(), Value::Array(rows));
    out.insert("lambda_max".into(), json!(spec.lambda_max.map(num)));
    if let Some(ex) = &spec.exact {
        out.insert("characteristic_polynomial".into(), rats(ex.polynomial.coeffs()));
    }
    if let Some(c) = &spec.count {
        out.insert(
            "count".into(),
            json!({
                "rho_cutoff": num(c.rho_cutoff),
                "computed": c.computed,
                "bounded_predicted": c.bounded_predicted,
                "branch_predicted": c.branch_predicted,
                "consistent": c.consistent,
            }),
        );
    }
    if let Some(ex) = weights.as_ref().and_then(|w| w.exact.as_ref()) {
        out.insert("weight_polynomial".into(), rats(ex.polynomial.coeffs()));
        out.insert("weights_positive".into(), json!(ex.all_positive));
    }
    Ok((Value::Object(out), table))
}

fn weights_cmd(p: &Problem, s: &Settings) -> Result<(Value, Table), CliError> {
    let (ts, q) = (&p.ts, &p.q);
    let spec = compute_spectrum(p, s, 1)?;
    let w = weight_numbers(ts, q, &spec)?;
    let norm = weight_norm_identity_check(ts, q, &spec, &w, NORM_TOLERANCE)?;
    let all_positive = match &w.exact {
        Some(e) => e.all_positive,
        None => w.values.iter().all(|&a| a > 0.0),
    };
    let count = truncated(spec.len(), s.n_max);
    let mut table = Table::new(&["index", "lambda", "label", "weight", "norm_product"]);
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let exact = w.exact.as_ref().and_then(|e| e.values[i].as_ref()).map(rat);
        table.push(vec![
            (i + 1).to_string(),
            rational::format_f64(spec.values[i]),
            label_name(w.labels[i]),
            rational::format_f64(w.values[i]),
            rational::format_f64(norm.products[i]),
        ]);
        rows.push(json!({
            "index": i + 1,
            "lambda": num(spec.values[i]),
            "label": label_name(w.labels[i]),
            "weight": num(w.values[i]),
            "weight_exact": exact,
            "norm_product": num(norm.products[i]),
        }));
    }
    let mut out = Map::new();
    out.insert("weights".into(), Value::Array(rows));
    out.insert("all_positive".into(), json!(all_positive));
    out.insert(
        "norm_identity".into(),
        json!({ "max_deviation": num(norm.max_deviation), "exact": norm.exact, "passed": norm.passed }),
    );
    if let Some(e) = &w.exact {
        out.insert("weight_polynomial".into(), rats(e.polynomial.coeffs()));
    }
    if !ts.is_discrete() {
        let predictor = Predictor::new(ts, q);
        let limits = (1..=predictor.n_branches())
            .map(|k| match predictor.predict_weight(k) {
                Ok(WeightPrediction::Limit(v)) => json!({ "k": k, "limit": num(v) }),
                _ => json!({ "k": k, "limit": null }),
            })
            .collect();
        out.insert("branch_limits".into(), Value::Array(limits));
    }
    Ok((Value::Object(out), table))
}

fn weyl_cmd(p: &Problem, s: &Settings) -> Result<(Value, Option<Table>), CliError> {
    let (ts, q) = (&p.ts, &p.q);
    let mut out = Map::new();
    out.insert("constant".into(), rat(&weyl_constant(ts)));
    let wf = if ts.is_discrete() {
        let (t0, t1) = d_functions(ts, q, 1)?;
        out.insert("ratio_numerator".into(), rats((-t0).coeffs()));
        out.insert("ratio_denominator".into(), rats(t1.coeffs()));
        let spec = compute_spectrum(p, s, 1)?;
        let w = weight_numbers(ts, q, &spec)?;
        out.insert("poles".into(), nums(&spec.values));
        out.insert("residues".into(), nums(&w.values));
        let (Some(ex), Some(ew)) = (&spec.exact, &w.exact) else {
            unreachable!("discrete spectra and weights are exact")
        };
        let wf = weyl_from_exact(ts, &ex.root_set(), &WeightSet::Polynomial(ew.polynomial.clone()))?;
        if let WeylFunction::Exact { numerator, denominator, .. } = &wf {
            out.insert("numerator".into(), rats(numerator.coeffs()));
            out.insert("denominator".into(), rats(denominator.coeffs()));
        }
        wf
    } else {
        let spec = compute_spectrum(p, s, 1)?;
        let w = weight_numbers(ts, q, &spec)?;
        let wf = weyl_from_spectral_data(ts, &spec, &w)?;
        if let WeylFunction::Numeric { poles, residues, .. } = &wf {
            out.insert("poles".into(), nums(poles));
            out.insert("residues".into(), nums(residues));
        }
        wf
    };
    let Some(grid) = s.lambda_grid.as_ref() else {
        return Ok((Value::Object(out), None));
    };
    let mut table = Table::new(&["lambda", "direct", "partial_fractions"]);
    let mut rows = Vec::with_capacity(grid.len());
    for &l in grid {
        let z = Complex64::from(l);
        let direct = weyl_eval(ts, q, z).ok().map(|v| v.re);
        let pf = wf.eval(z).ok().map(|v| v.re);
        let cell = |v: Option<f64>| v.map(rational::format_f64).unwrap_or_default();
        table.push(vec![rational::format_f64(l), cell(direct), cell(pf)]);
        rows.push(json!({ "lambda": num(l), "direct": direct.map(num), "partial_fractions": pf.map(num) }));
    }
    out.insert("samples".into(), Value::Array(rows));
    Ok((Value::Object(out), Some(table)))
}

fn asymptotics_cmd(p: &Problem, s: &Settings) -> Result<(Value, Table), CliError> {
    let (ts, q) = (&p.ts, &p.q);
    if ts.is_discrete() {
        return Err(Error::NotSupported("asymptotics describe segment branches; this scale has no segments".into()).into());
    }
    let n_max = s.n_max.unwrap_or(DEFAULT_N_MAX);
    let predictor = Predictor::new(ts, q);
    let d_min = (1..=ts.n_segments()).map(|k| ts.length_f64(k)).fold(f64::INFINITY, f64::min);
    let rho_max = PI * (n_max as f64 + 1.5) / d_min;
    let lambda_max = s.lambda_max.map_or(rho_max * rho_max, |l| l.max(rho_max * rho_max));
    let js: Vec<u8> = s.j.map_or(vec![0, 1], |j| vec![j]);

    let mut table = Table::new(&["branch", "n", "computed", "main", "corrected", "e_n", "n_e_n"]);
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut weight_summaries = Vec::new();
    for &j in &js {
        let spec = find_spectrum_with(ts, q, j, &s.search(lambda_max))?;
        let report = verify_asymptotics(&predictor, j, &spec.labeled(), 1..=n_max)?;
        let mut reports = vec![("", report)];
        if j == 1 {
            let w = weight_numbers(ts, q, &spec)?;
            reports.push(("alpha_", verify_weights(&predictor, &w.labeled(), 1..=n_max)?));
        }
        for (prefix, report) in reports {
            for r in &report.rows {
                let branch = if prefix.is_empty() { r.branch_tag() } else { format!("{prefix}k{}", r.k) };
                let cells = [r.computed, r.main, r.corrected, r.e_n, r.n_e_n];
                let mut row = vec![branch.clone(), r.n.to_string()];
                row.extend(cells.iter().map(|&x| rational::format_f64(x)));
                table.push(row);
                rows.push(json!({
                    "branch": branch,
                    "n": r.n,
                    "computed": num(r.computed),
                    "main": num(r.main),
                    "corrected": num(r.corrected),
                    "e_n": num(r.e_n),
                    "n_e_n": num(r.n_e_n),
                }));
            }
            for b in &report.branches {
                let v = json!({
                    "j": b.j,
                    "k": b.k,
                    "max_e_n": num(b.max_e_n),
                    "max_n_e_n": num(b.max_n_e_n),
                    "max_n_corrected_residual": num(b.max_n_corrected_residual),
                    "scaled_bounded": b.scaled_bounded,
                    "e_n_decreasing": b.e_n_decreasing,
                });
                if prefix.is_empty() { summaries.push(v) } else { weight_summaries.push(v) }
            }
        }
    }
    let branches: Vec<Value> = predictor
        .constants
        .iter()
        .map(|c| {
            json!({
                "k": c.k,
                "length": num(c.length),
                "shift_j0": num(c.shift(0)),
                "shift_j1": num(c.shift(1)),
                "omega": num(c.omega),
                "z": num(c.z),
            })
        })
        .collect();
    let commensurable = predictor.commensurability.is_some();
    let payload = json!({
        "n_max": n_max,
        "lambda_max": num(lambda_max),
        "commensurable": commensurable,
        "commensurability_unit": predictor.commensurability.as_ref().map(|c| num(c.r)),
        "order": if commensurable { "corrected" } else { "main" },
        "distinct": predictor.distinct,
        "weight_hypotheses_hold": predictor.weight_hypotheses_hold(),
        "branches": branches,
        "residuals": summaries,
        "weight_residuals": weight_summaries,
        "rows": rows,
    });
    Ok((payload, table))
}

fn roundtrip_cmd(p: &Problem) -> Result<(Value, Table, Option<CliError>), CliError> {
    if !p.ts.is_discrete() {
        return Err(Error::NotSupported(
            "roundtrip needs a purely discrete scale; recovery on scales with segments is not constructive".into(),
        )
        .into());
    }
    let reports = inverse::roundtrip_batch(&[(p.ts.clone(), p.q.clone())], &DataKind::ALL);
    let mut table = Table::new(&["kind", "exact_match", "error"]);
    let mut items = Vec::new();
    let mut failed = Vec::new();
    for r in &reports {
        if !r.exact_match {
            failed.push(r.kind.name());
        }
        table.push(vec![r.kind.name().into(), r.exact_match.to_string(), r.error.clone().unwrap_or_default()]);
        items.push(json!({
            "kind": r.kind.name(),
            "recovered": r.recovered.as_deref().map(rats),
            "exact_match": r.exact_match,
            "error": r.error,
        }));
    }
    let original = p.q.discrete_values();
    let payload = json!({ "original": rats(&original), "reports": items, "all_exact": failed.is_empty() });
    let failure = (!failed.is_empty()).then(|| CliError::RoundtripMismatch(failed.join(", ")));
    Ok((payload, table, failure))
}

/// Reads a spectral-data file, or the `spectral_data` entry of a forward
/// report.
fn load_data(path: &Path, text: &str) -> Result<SpectralDataFile, CliError> {
    match SpectralDataFile::from_json(text) {
        Ok(f) => Ok(f),
        Err(err) => {
            let embedded = serde_json::from_str::<Value>(text)
                .ok()
                .and_then(|v| v.get("payload").and_then(|p| p.get("spectral_data")).cloned());
            match embedded {
                Some(v) => serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string())).map_err(in_file(path)),
                None => Err(in_file(path)(err)),
            }
        }
    }
}

fn inverse_cmd(cli: &Cli) -> Result<Outcome, CliError> {
    let path = cli.data.as_deref().ok_or_else(|| CliError::Usage("--data <path> is required".into()))?;
    let bytes = read(path)?;
    let file = load_data(path, &String::from_utf8_lossy(&bytes))?;
    let parsed = file.parse().map_err(in_file(path))?;
    let ts = &parsed.ts;
    let (t0, t1) = if parsed.approximate {
        normalize_input_approx(ts, &parsed.input, SNAP_TOLERANCE)?
    } else {
        normalize_input(ts, &parsed.input)?
    };
    let rec = peel_potential(ts, &t0, &t1)?;

    let mut table = Table::new(&["m", "d0", "d1", "d0_next", "quotient", "remainder", "q", "d1_next"]);
    let mut steps = Vec::with_capacity(rec.trace.steps.len());
    for st in &rec.trace.steps {
        table.push(vec![
            st.m.to_string(),
            st.d0.to_string(),
            st.d1.to_string(),
            st.d0_next.to_string(),
            st.quotient.to_string(),
            st.remainder.to_string(),
            rational::format(&st.q_value),
            st.d1_next.to_string(),
        ]);
        steps.push(json!({
            "m": st.m,
            "point": rat(ts.a(st.m)),
            "d0": rats(st.d0.coeffs()),
            "d1": rats(st.d1.coeffs()),
            "d0_next": rats(st.d0_next.coeffs()),
            "quotient": rats(st.quotient.coeffs()),
            "remainder": rats(st.remainder.coeffs()),
            "q": rat(&st.q_value),
            "d1_next": rats(st.d1_next.coeffs()),
        }));
    }
    let problem = ProblemFile::from_problem(ts, &rec.potential);
    let payload = json!({
        "data_kind": parsed.input.kind().name(),
        "approximate": parsed.approximate,
        "q": rats(&rec.values),
        "points": (1..=rec.values.len()).map(|m| rat(ts.a(m))).collect::<Vec<_>>(),
        "theta0": rats(t0.coeffs()),
        "theta1": rats(t1.coeffs()),
        "trace": steps,
        "problem": serde_json::to_value(problem).expect("plain data"),
    });
    let echo = json!({ "name": Command::Inverse.name() });
    let bundle = ReportBundle::new(echo, &[&bytes], payload);
    Ok(Outcome { bundle, table: Some(table), failure: None })
}
