//! The `walkers` command line: parsing, dispatch and output formatting.
//!
//! [`run`] is pure apart from the optional `--out` file, so the binary is a
//! thin wrapper and tests can drive every subcommand in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use walkers_core::asymptotics::{free_energy_density, free_energy_finite, free_energy_integral};
use walkers_core::formulas::{signed_gf_det, unsigned_count_gf, z_closed_form, z_count, z_exact};
use walkers_core::lattice::{enumerate_families_with, validate_config, EnumerationOptions, DEFAULT_ENUMERATION_CAP};
use walkers_core::verify::run_suite;
use walkers_core::{BigInt, Error, FreeEnergyReport, LaurentPoly2, Length, Suite, Tolerance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Environment variable overriding the default relative tolerance.
pub const TOLERANCE_VAR: &str = "WALKERS_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "walkers", version, about = "Nonintersecting lattice paths on a cylinder")]
pub struct CommandRequest {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct Instance {
    /// Circumference of the cylinder.
    #[arg(long = "M")]
    pub m: i64,

    /// Number of steps.
    #[arg(long = "N")]
    pub n: i64,

    /// Starting points, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub a: Vec<i64>,

    /// End points, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub e: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Det,
    Brute,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZMethod {
    Closed,
    Det,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count nonintersecting families (unsigned weights).
    #[command(allow_negative_numbers = true)]
    Count {
        #[command(flatten)]
        instance: Instance,
        /// Also evaluate the generating function at this x.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, value_enum, default_value = "both")]
        method: CountMethod,
        /// Largest r·N the brute-force enumerator accepts.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u32,
    },
    /// Print the generating function of an instance.
    #[command(allow_negative_numbers = true)]
    Gf {
        #[command(flatten)]
        instance: Instance,
        /// The signed function in x and y instead of the unsigned one in x.
        #[arg(long)]
        signed: bool,
    },
    /// Equidistant count Z(N, r, ν).
    Z {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        nu: u32,
        #[arg(long, value_enum, default_value = "both")]
        method: ZMethod,
    },
    /// Free energy at finite r, in the r → ∞ limit, or per site.
    FreeEnergy {
        #[arg(long)]
        nu: u32,
        #[arg(long = "N")]
        n: Option<u32>,
        #[arg(long, conflicts_with_all = ["integral", "density"])]
        r: Option<u32>,
        #[arg(long, conflicts_with = "density")]
        integral: bool,
        #[arg(long, conflicts_with = "n")]
        density: bool,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn invalid(message: String) -> Self {
        Outcome {
            status: EXIT_INVALID,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Reads the tolerance override, if any.
pub fn tolerance_from(value: Option<&str>) -> Result<Tolerance, String> {
    match value {
        None => Ok(Tolerance::default()),
        Some(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(Tolerance::new(t)),
            _ => Err(format!("{TOLERANCE_VAR} must be a positive number, got {raw:?}")),
        },
    }
}

/// Parses `args` (including the program name) and runs the request.
pub fn run_args<I, T>(args: I, tol_var: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let request = match CommandRequest::try_parse_from(args) {
        Ok(request) => request,
        Err(err) => {
            let status = err.exit_code();
            let text = err.render().to_string();
            return if status == 0 {
                Outcome {
                    status,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::invalid(text)
            };
        }
    };
    match tolerance_from(tol_var) {
        Ok(tol) => run(&request, tol),
        Err(message) => Outcome::invalid(format!("error: {message}\n")),
    }
}

/// Structured result of a subcommand, rendered per output format.
struct Report {
    status: i32,
    json: Value,
    text: String,
    csv: String,
    notes: String,
}

/// Why a subcommand produced no report. Both map to the invalid-input status.
enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Core(err)
    }
}

impl Failure {
    fn outcome(&self) -> Outcome {
        match self {
            Failure::Core(err) => Outcome::invalid(format!("error[{}]: {err}\n", err.kind())),
            Failure::Usage(message) => Outcome::invalid(format!("error: {message}\n")),
        }
    }
}

/// Executes a parsed request.
pub fn run(request: &CommandRequest, tol: Tolerance) -> Outcome {
    let report = match &request.command {
        Command::Count {
            instance,
            x,
            method,
            cap,
        } => count(instance, *x, *method, *cap),
        Command::Gf { instance, signed } => gf(instance, *signed),
        Command::Z { n, r, nu, method } => z(*n, *r, *nu, *method),
        Command::FreeEnergy {
            nu,
            n,
            r,
            integral,
            density,
        } => free_energy(*nu, *n, *r, *integral, *density),
        Command::Verify { suite, seed } => Ok(verify(*suite, *seed, tol)),
    };
    let report = match report {
        Ok(report) => report,
        Err(failure) => return failure.outcome(),
    };
    let body = match request.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => report.csv,
        Format::Text => report.text,
    };
    let mut stderr = report.notes;
    let stdout = match &request.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => String::new(),
            Err(err) => {
                let _ = writeln!(stderr, "error: cannot write {}: {err}", path.display());
                return Outcome {
                    status: EXIT_INVALID,
                    stdout: String::new(),
                    stderr,
                };
            }
        },
        None => body,
    };
    Outcome {
        status: report.status,
        stdout,
        stderr,
    }
}

/// Rounds to 12 significant digits so output is stable across platforms.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float")
}

fn float(v: f64) -> Value {
    let v = round12(v);
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn big(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

fn list(v: &[i64]) -> Value {
    Value::String(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A single-record report: `key: value` lines, a two-row CSV, a flat object.
fn flat(status: i32, fields: Vec<(&str, Value)>, notes: String) -> Report {
    let mut text = String::new();
    let mut header = Vec::new();
    let mut row = Vec::new();
    let mut object = Map::new();
    for (key, value) in fields {
        let s = scalar_text(&value);
        let _ = writeln!(text, "{key}: {s}");
        header.push(key.to_string());
        row.push(csv_field(&s));
        object.insert(key.to_string(), value);
    }
    Report {
        status,
        json: Value::Object(object),
        text,
        csv: format!("{}\n{}\n", header.join(","), row.join(",")),
        notes,
    }
}

fn count(instance: &Instance, x: Option<f64>, method: CountMethod, cap: u32) -> Result<Report, Failure> {
    let config = validate_config(instance.m, instance.n, &instance.a, &instance.e)?;
    let det = matches!(method, CountMethod::Det | CountMethod::Both).then(|| unsigned_count_gf(&config));
    let brute = match method {
        CountMethod::Brute | CountMethod::Both => {
            let options = EnumerationOptions {
                cap,
                keep_families: false,
            };
            Some(enumerate_families_with(&config, options)?.unsigned_gf.substitute_y(1))
        }
        CountMethod::Det => None,
    };
    let gf = det.as_ref().or(brute.as_ref()).expect("at least one method");
    let agree = match (&det, &brute) {
        (Some(d), Some(b)) => Some(d == b),
        _ => None,
    };

    let mut fields = vec![
        ("M", json!(config.m())),
        ("N", json!(config.n())),
        ("a", list(config.starts())),
        ("e", list(config.ends())),
        ("r", json!(config.r())),
        (
            "method",
            json!(match method {
                CountMethod::Det => "det",
                CountMethod::Brute => "brute",
                CountMethod::Both => "both",
            }),
        ),
        ("count", big(&gf.value_at_one())),
        ("gf", json!(gf.to_string())),
    ];
    if let Some(x) = x {
        fields.push(("x", float(x)));
        fields.push(("value", float(gf.eval_real(x, 1.0))));
    }
    let mut notes = String::new();
    let mut status = EXIT_OK;
    if let (Some(d), Some(b), Some(agree)) = (&det, &brute, agree) {
        fields.push(("det_count", big(&d.value_at_one())));
        fields.push(("brute_count", big(&b.value_at_one())));
        fields.push(("methods_agree", json!(agree)));
        if !agree {
            status = EXIT_DISAGREE;
            let _ = writeln!(notes, "determinant and enumeration disagree: {d} vs {b}");
        }
    }
    Ok(flat(status, fields, notes))
}

fn gf(instance: &Instance, signed: bool) -> Result<Report, Failure> {
    let config = validate_config(instance.m, instance.n, &instance.a, &instance.e)?;
    let poly: LaurentPoly2 = if signed {
        signed_gf_det(&config)
    } else {
        unsigned_count_gf(&config)
    };
    let records = poly.records();
    let mut csv = String::from("xexp,yexp,coeff\n");
    for t in &records {
        let _ = writeln!(csv, "{},{},{}", t.xexp, t.yexp, t.coeff);
    }
    Ok(Report {
        status: EXIT_OK,
        json: json!({
            "M": config.m(),
            "N": config.n(),
            "a": list(config.starts()),
            "e": list(config.ends()),
            "signed": signed,
            "polynomial": poly.to_string(),
            "terms": records,
        }),
        text: format!("{poly}\n"),
        csv,
        notes: String::new(),
    })
}

fn z(n: u32, r: u32, nu: u32, method: ZMethod) -> Result<Report, Failure> {
    let mut fields = vec![("N", json!(n)), ("r", json!(r)), ("nu", json!(nu))];
    let mut status = EXIT_OK;
    let mut notes = String::new();
    match method {
        ZMethod::Closed => {
            let v = z_closed_form(n, r, nu)?;
            fields.push(("closed_form", float(v)));
            fields.push(("rounded", json!(format!("{:.0}", v.round()))));
        }
        ZMethod::Det => fields.push(("exact", big(&z_exact(n, r, nu)?))),
        ZMethod::Both => {
            let z = z_count(n, r, nu)?;
            fields.push(("closed_form", float(z.closed_form_value)));
            fields.push(("rounded", big(&z.rounded)));
            fields.push(("exact", big(&z.exact)));
            fields.push(("methods_agree", json!(z.methods_agree)));
            if !z.methods_agree {
                status = EXIT_DISAGREE;
                let _ = writeln!(
                    notes,
                    "closed form {} does not round to {}",
                    z.closed_form_value, z.exact
                );
            }
        }
    }
    Ok(flat(status, fields, notes))
}

fn free_energy(nu: u32, n: Option<u32>, r: Option<u32>, integral: bool, density: bool) -> Result<Report, Failure> {
    let missing = |what: &str| Failure::Usage(format!("free-energy needs {what}"));
    let report: FreeEnergyReport = if density {
        free_energy_density(nu)?
    } else {
        let n = n.ok_or_else(|| missing("--N (or --density)"))?;
        if integral {
            free_energy_integral(n, nu)?
        } else {
            free_energy_finite(n, r.ok_or_else(|| missing("--r, --integral or --density"))?, nu)?
        }
    };
    let length = match report.length {
        Length::Finite(n) => json!(n),
        Length::Infinite => json!("infinity"),
    };
    let method = serde_json::to_value(report.method).expect("serializable");
    Ok(flat(
        EXIT_OK,
        vec![
            ("nu", json!(report.nu)),
            ("N", length),
            ("method", method),
            ("r", report.r_used.map_or(Value::Null, |r| json!(r))),
            ("value", float(report.value)),
            ("error_estimate", float(report.error_estimate)),
        ],
        String::new(),
    ))
}

fn verify(suite: Suite, seed: u64, tol: Tolerance) -> Report {
    let reports = run_suite(suite, seed, tol);
    let ok = reports.iter().all(|r| r.ok());
    let mut text = String::new();
    let mut csv = String::from("suite,passed,failed\n");
    let mut notes = String::new();
    for r in &reports {
        let _ = writeln!(
            text,
            "{:<10} {} passed, {} failed{}",
            r.name,
            r.passed,
            r.failed,
            if r.ok() { "" } else { "  FAIL" }
        );
        let _ = writeln!(csv, "{},{},{}", r.name, r.passed, r.failed);
        for f in &r.failures {
            let _ = writeln!(notes, "{}: {f}", r.name);
        }
    }
    let _ = writeln!(text, "{}", if ok { "ok" } else { "FAILED" });
    Report {
        status: if ok { EXIT_OK } else { EXIT_DISAGREE },
        json: json!({
            "suite": suite.name(),
            "seed": seed,
            "tolerance": tol.relative,
            "ok": ok,
            "reports": reports,
        }),
        text,
        csv,
        notes,
    }
}
