use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use qig_core::geodesics::{
    bures_distance_cone, bures_distance_density, curve_length, rld_upper_bound_cone, rld_upper_bound_density,
    wy_distance_cone, wy_distance_density, write_curve_csv, write_curve_csv_at, CurveKind, CurveSpec,
};
use qig_core::matkern::{validate_state, TOL_TRACE};
use qig_core::metrics::metric_eval;
use qig_core::numfmt::{format_sig, round_sig};
use qig_core::verify::{run_suite, sample_state, rng_for, Suite, COMMUTATOR_THRESHOLD};
use qig_core::{MatrixJson, MetricKind, StateMatrix};
use serde_json::{json, Value};

use crate::Format;

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or invalid input files (exit 2).
    Input(String),
    /// Output could not be written (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<qig_core::Error> for CliError {
    fn from(e: qig_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

/// Loads a state, marking it unit-trace when its trace is within tolerance of 1.
fn load_state(path: &Path) -> Result<StateMatrix, CliError> {
    let h = MatrixJson::read_hermitian(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let unit = (h.trace() - 1.0).abs() <= TOL_TRACE;
    validate_state(&h, unit).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn print_record(record: &[(&str, Value)], format: Format) -> CliResult {
    let mut stdout = io::stdout().lock();
    let text = match format {
        Format::Json => {
            let map: serde_json::Map<String, Value> = record.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values always serialize")
        }
        Format::Csv => {
            let mut lines = vec!["quantity,value".to_string()];
            lines.extend(record.iter().map(|(k, v)| format!("{k},{}", csv_value(v))));
            lines.join("\n")
        }
    };
    writeln!(stdout, "{text}").map_err(|e| CliError::Io(format!("stdout: {e}")))?;
    Ok(ExitCode::SUCCESS)
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), format_sig),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn dist(p0: &Path, p1: &Path, format: Format) -> CliResult {
    let a = load_state(p0)?;
    let b = load_state(p1)?;
    a.check_same_dim(&b)?;

    let bures = bures_distance_cone(&a, &b)?;
    let wy = wy_distance_cone(&a, &b)?;
    let upper = rld_upper_bound_cone(&a, &b)?;
    let mut chain = wy >= bures - 1e-9 && upper >= wy - 1e-9 && upper < 2.0 * (a.trace() + b.trace()).sqrt();

    let mut record = vec![
        ("bures_cone", num(bures)),
        ("wy_cone", num(wy)),
        ("rld_upper_cone", num(upper)),
    ];
    let density = a.is_unit_trace() && b.is_unit_trace();
    if density {
        let bures = bures_distance_density(&a, &b)?;
        let wy = wy_distance_density(&a, &b)?;
        let upper = rld_upper_bound_density(&a, &b)?;
        chain &= wy >= bures - 1e-10 && upper >= wy - 1e-10 && upper < std::f64::consts::PI;
        record.extend([
            ("bures_density", num(bures)),
            ("wy_density", num(wy)),
            ("rld_upper_density", num(upper)),
        ]);
    } else {
        record.extend([("bures_density", Value::Null), ("wy_density", Value::Null), ("rld_upper_density", Value::Null)]);
    }
    let commutator = a.commutator_norm(&b);
    record.extend([
        ("commutator_norm", num(commutator)),
        ("commuting", json!(commutator <= COMMUTATOR_THRESHOLD)),
        ("chain_holds", json!(chain)),
    ]);
    print_record(&record, format)
}

pub struct GeodesicRequest<'a> {
    pub kind: &'a str,
    pub rho0: &'a Path,
    pub rho1: &'a Path,
    pub samples: usize,
    pub ts: Option<&'a [f64]>,
    pub normalized: bool,
    pub metric: Option<(&'a str, Option<f64>)>,
    pub stray_alpha: bool,
    pub panels: usize,
    pub out: Option<&'a Path>,
}

pub fn geodesic(req: GeodesicRequest<'_>) -> CliResult {
    let kind: CurveKind = req.kind.parse()?;
    if req.stray_alpha {
        return Err(CliError::Input("--alpha requires --metric wyd".into()));
    }
    if req.panels < 8 {
        return Err(CliError::Input(format!("--panels must be at least 8, got {}", req.panels)));
    }
    let metric = req.metric.map(|(name, alpha)| MetricKind::from_name(name, alpha)).transpose()?;
    let curve = CurveSpec::new(kind, load_state(req.rho0)?, load_state(req.rho1)?, req.normalized)?;

    let mut buf = Vec::new();
    match req.ts {
        Some(ts) => write_curve_csv_at(&mut buf, &curve, ts)?,
        None => write_curve_csv(&mut buf, &curve, req.samples)?,
    }
    match req.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path).map_err(io_err(path))?);
            file.write_all(&buf).and_then(|_| file.flush()).map_err(io_err(path))?;
        }
        None => io::stdout()
            .lock()
            .write_all(&buf)
            .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
    }
    if let Some(m) = metric {
        let length = curve_length(&m, &curve, req.panels)?;
        eprintln!("length({m}) = {}", format_sig(length));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn metric(name: &str, alpha: Option<f64>, rho: &Path, h: &Path, k: Option<&Path>, format: Format) -> CliResult {
    let m = MetricKind::from_name(name, alpha)?;
    let rho = load_state(rho)?;
    let read = |p: &Path| MatrixJson::read_hermitian(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())));
    let h = read(h)?;
    let k = match k {
        Some(p) => read(p)?,
        None => h.clone(),
    };
    let value = metric_eval(&m, &rho, &h, &k)?;
    print_record(&[("metric", json!(m.to_string())), ("value", num(value))], format)
}

pub fn verify(suite: &str, trials: usize, seed: u64, out: Option<&Path>) -> CliResult {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, trials, seed);
    let text = report.to_json();
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(io_err(path))?,
        None => println!("{text}"),
    }
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        eprintln!("{suite}: {} checks passed over {trials} trials", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{suite}: failing checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

pub fn rand(n: usize, count: usize, unit_trace: bool, seed: u64, out_dir: &Path) -> CliResult {
    let states = (0..count)
        .map(|k| sample_state(&mut rng_for(seed, k as u64), n, unit_trace))
        .collect::<qig_core::Result<Vec<_>>>()?;
    if count > 0 {
        fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    }
    for (k, s) in states.iter().enumerate() {
        let path = out_dir.join(format!("rho_{k:04}.json"));
        let text = MatrixJson::from(s.matrix()).to_json_string();
        fs::write(&path, format!("{text}\n")).map_err(io_err(&path))?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
