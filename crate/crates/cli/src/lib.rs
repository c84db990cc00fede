//! Argument handling, dispatch and output for the `sakai` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sakai_core::dynamics::{base_points_verify, orbit, sk7_batch, theorem1_batch, XYState};
use sakai_core::lattice::lattice_report;
use sakai_core::orthopoly::{run_pipeline, PipelineConfig};
use sakai_core::scalars::{check_precision, format_rational, parse_decimal, parse_rational, QuadExt, Rational, DEFAULT_PRECISION};
use sakai_core::weyl::relations_report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sakai_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use sakai_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::InvalidArgument(_) | E::InvalidPrecision(_)) => EXIT_USAGE,
            CliError::Core(E::NonConverged(_) | E::PrecisionExhausted { .. }) => EXIT_NONCONVERGED,
            _ => EXIT_FAIL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "sakai", version, about = "Exact and multiprecision checks of the semiclassical Laguerre d-P(E6) dynamics")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Residual bound for numeric suites, as a decimal.
    #[arg(long, default_value = "1e-30", global = true)]
    pub tolerance: String,
    /// Working precision in bits.
    #[arg(long, env = "SAKAI_PRECISION", default_value_t = DEFAULT_PRECISION, global = true)]
    pub precision: usize,
    #[arg(long, default_value_t = 7, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 100, global = true)]
    pub trials: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intersection numbers, isometries and translation vectors on Pic.
    LatticeVerify,
    /// Relations of the birational Weyl group action at random exact points.
    WeylVerify,
    /// ψ against the standard step through the coordinate change, plus the relabelled system.
    Theorem1Verify,
    /// Indeterminacy at the base points and the blow-up cascade.
    BasepointsVerify {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Moments, recurrence coefficients and every residual suite.
    OpRun {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        n_max: usize,
    },
    /// Iterate ψ from an exact starting point.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        steps: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LatticeVerify => "lattice-verify",
            Command::WeylVerify => "weyl-verify",
            Command::Theorem1Verify => "theorem1-verify",
            Command::BasepointsVerify { .. } => "basepoints-verify",
            Command::OpRun { .. } => "op-run",
            Command::Orbit { .. } => "orbit",
        }
    }
}

/// Everything a run depends on, echoed into the output.
#[derive(Debug, Default, Serialize)]
pub struct RunConfig {
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

/// Rendered output plus the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub body: String,
}

fn exact(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn tolerance(text: &str) -> Result<Rational, CliError> {
    let t = parse_decimal(text).map_err(|e| CliError::Usage(format!("--tolerance: {e}")))?;
    if t <= Rational::from_integer(0.into()) {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    Ok(t)
}

fn trials(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    Ok(n)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Encode(e.to_string()))
}

struct Results {
    json: Value,
    csv: String,
    failures: Vec<Value>,
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let encode = |e: csv::Error| CliError::Encode(e.to_string());
    w.write_record(header).map_err(encode)?;
    for row in rows {
        w.write_record(&row).map_err(encode)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
}

fn check_rows(rows: Vec<(String, bool, String)>) -> Result<String, CliError> {
    csv_table(&["check", "pass", "detail"], rows.into_iter().map(|(c, p, d)| vec![c, p.to_string(), d]))
}

fn execute(cli: &Cli, cfg: &mut RunConfig) -> Result<Results, CliError> {
    match &cli.command {
        Command::LatticeVerify => {
            let rep = lattice_report();
            let failures = rep.failures().map(to_value).collect::<Result<_, _>>()?;
            let mut rows: Vec<_> = rep.checks.iter().map(|c| (c.name.clone(), c.pass, c.detail.clone())).collect();
            for t in &rep.translation_vectors {
                let v = t.vector.as_ref().map_or("none".to_string(), |v| format!("{v:?}"));
                rows.push((format!("translation {} on {:?}", t.map, t.basis), t.vector.as_ref() == Some(&t.expected), v));
            }
            Ok(Results { json: to_value(&rep)?, csv: check_rows(rows)?, failures })
        }
        Command::WeylVerify => {
            let n = trials(cli.trials)?;
            cfg.seed = Some(cli.seed);
            cfg.trials = Some(n);
            let rep = relations_report(n, cli.seed)?;
            let failures = rep.relations.iter().filter(|r| !r.passed()).map(to_value).collect::<Result<_, _>>()?;
            let rows = rep
                .relations
                .iter()
                .map(|r| (r.relation.clone(), r.passed(), format!("{} failures in {} trials, {} resamples", r.failures, r.trials, r.resamples)))
                .collect();
            Ok(Results { json: to_value(&rep)?, csv: check_rows(rows)?, failures })
        }
        Command::Theorem1Verify => {
            let n = trials(cli.trials)?;
            cfg.seed = Some(cli.seed);
            cfg.trials = Some(n);
            let t1 = theorem1_batch(n, cli.seed)?;
            let sk = sk7_batch(n, cli.seed)?;
            let mut failures = Vec::new();
            if !t1.passed() {
                failures.push(to_value(&t1)?);
            }
            if !sk.passed() {
                failures.push(to_value(&sk)?);
            }
            let detail = |f: usize, t: usize, r: usize| format!("{f} failures in {t} trials, {r} singular resamples");
            let rows = vec![
                (t1.check.clone(), t1.passed(), detail(t1.failures, t1.trials, t1.singular_resamples)),
                (sk.check.clone(), sk.passed(), detail(sk.failures, sk.trials, sk.singular_resamples)),
            ];
            Ok(Results { json: json!({ "theorem1": to_value(&t1)?, "sk7": to_value(&sk)? }), csv: check_rows(rows)?, failures })
        }
        Command::BasepointsVerify { lambda, s, n } => {
            let (l, sv, nv) = (exact("lambda", lambda)?, exact("s", s)?, exact("n", n)?);
            cfg.lambda = Some(format_rational(&l));
            cfg.s = Some(format_rational(&sv));
            cfg.n = Some(format_rational(&nv));
            let rep = base_points_verify(&l, &sv, &nv)?;
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for v in &rep.vanishing {
                let num = v.numerator_order.map_or("inf".to_string(), |o| o.to_string());
                let detail = format!("vanishing orders {num}/{}", v.denominator_order);
                rows.push((format!("{} 0/0 in {}", v.point, v.chart), v.pass, detail));
                if !v.pass {
                    failures.push(to_value(v)?);
                }
            }
            for c in &rep.cascade {
                for l in c.coordinates.iter().chain(&c.image) {
                    let got = l.limit.value().map_or("pole".to_string(), ToString::to_string);
                    rows.push((format!("W={} {}", c.w, l.name), l.pass, format!("limit {got}, expected {}", l.expected)));
                }
                rows.push((format!("W={} image consistency", c.w), c.image_consistent, String::new()));
                if !c.pass {
                    failures.push(to_value(c)?);
                }
            }
            Ok(Results { json: to_value(&rep)?, csv: check_rows(rows)?, failures })
        }
        Command::OpRun { lambda, s, n_max } => {
            let (l, sv) = (exact("lambda", lambda)?, exact("s", s)?);
            if *n_max < 2 {
                return Err(CliError::Usage("--n-max must be at least 2".into()));
            }
            check_precision(cli.precision)?;
            let tol = tolerance(&cli.tolerance)?;
            cfg.lambda = Some(format_rational(&l));
            cfg.s = Some(format_rational(&sv));
            cfg.n_max = Some(*n_max);
            cfg.precision = Some(cli.precision);
            cfg.tolerance = Some(cli.tolerance.clone());
            let rep = run_pipeline(&PipelineConfig { lambda: l, s: sv, n_max: *n_max, precision: cli.precision, tolerance: tol })?;
            let failures = rep.failures.iter().map(|f| Value::String(f.clone())).collect();
            Ok(Results { json: to_value(&rep)?, csv: rep.to_csv(), failures })
        }
        Command::Orbit { lambda, s, n, x, y, steps } => {
            let q = |name: &str, t: &str| exact(name, t).map(QuadExt::from_rational);
            let start = XYState::new(q("lambda", lambda)?, q("s", s)?, q("n", n)?, q("x", x)?, q("y", y)?);
            cfg.lambda = Some(start.lambda.to_string());
            cfg.s = Some(start.s.to_string());
            cfg.n = Some(start.n.to_string());
            cfg.x = Some(start.x.to_string());
            cfg.y = Some(start.y.to_string());
            cfg.steps = Some(*steps);
            let rows = orbit(&start, *steps)?;
            let csv = csv_table(
                &["n", "x", "y", "q", "p"],
                rows.iter().map(|r| vec![r.state.n.to_string(), r.state.x.to_string(), r.state.y.to_string(), r.q.clone(), r.p.clone()]),
            )?;
            Ok(Results { json: to_value(&rows)?, csv, failures: Vec::new() })
        }
    }
}

/// Runs one command and renders its output; never panics on bad input.
pub fn run(cli: &Cli) -> Outcome {
    let mut cfg = RunConfig { format: Some(cli.format), ..RunConfig::default() };
    let command = cli.command.name();
    let (exit_code, results, failures, csv) = match execute(cli, &mut cfg) {
        Ok(r) => {
            let code = if r.failures.is_empty() { EXIT_PASS } else { EXIT_FAIL };
            (code, r.json, r.failures, r.csv)
        }
        Err(e) => {
            let code = e.exit_code();
            let msg = e.to_string();
            let csv = check_rows(vec![("error".into(), false, msg.clone())]).unwrap_or_else(|_| format!("error,{msg}\n"));
            (code, Value::Null, vec![json!({ "error": msg })], csv)
        }
    };
    let body = match cli.format {
        Format::Csv => csv,
        Format::Json => {
            let envelope = json!({ "command": command, "config": cfg, "results": results, "failures": failures });
            let mut s = serde_json::to_string_pretty(&envelope).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"));
            s.push('\n');
            s
        }
    };
    Outcome { exit_code, body }
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomically(path: &Path, body: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
