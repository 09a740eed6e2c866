//! Command-line front end: subcommand dispatch, deterministic CSV/JSON
//! emission, and exit-code mapping.
//!
//! Exit codes: 0 success, 2 domain error, 3 assertion or monitor
//! failure, 4 non-convergence, 64 usage errors. Identical configuration
//! and seed produce byte-identical output files: numbers are printed
//! with 17 significant digits, rationals as `p/q`, rows in input order,
//! and all randomness flows from the explicit `--seed`.
//!
//! Exact-mode commands (`matching`, `pseudocenter`, `witness`, a
//! rational `classify`, and `expand`/`sync` on `p/q` inputs) accept
//! rationals only in `p/q` form; decimals are rejected there rather than
//! silently rounded.

use crate::dyadic::Dyadic;
use crate::dynamics::{orbit, AlphaParam, Scalar};
use crate::entropy::{constancy_report, entropy_estimate};
use crate::eval::{grid_emit, wilton_eval, EvalConfig};
use crate::exact::{parse_rational, Rational};
use crate::matching::{exponents_from_pseudocenter, find_matching_exponents, pseudocenter_check};
use crate::singularity::{
    bmo_witness, classify, AlphaSpec, Provenance, SingKind, SingularityError,
};
use crate::sync::{monitor_report, supnorm_scan, sync_trace, validate_trace, SyncTrace};
use std::collections::BTreeMap;
use std::io::Write;

/// Process exit codes of the `wilton` binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
    Assertion(String),
    NonConvergence(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Assertion(_) => EXIT_ASSERTION,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            CliError::Io(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Domain(m)
            | CliError::Assertion(m)
            | CliError::NonConvergence(m)
            | CliError::Io(m) => m,
        }
    }
}

const USAGE: &str = "\
usage: wilton <command> [--flag value ...]

commands:
  expand        orbit/digit table            --alpha --x [--kmax --format --out]
  wilton        single function value        --alpha --x [--tol --kmax --format --out]
  grid          graph samples over (a, b)    --alpha --a --b --n [--tol --format --out]
  matching      matching exponents           --alpha p/q [--format --out]
  pseudocenter  pseudocenter test            --r p/q [--format --out]
  classify      singularity type at xi       --alpha --xi p/q [--format --out]
  witness       vanishing-integral interval  --alpha p/q --xi p/q [--eps --tol --format --out]
  sync          synchronized state trace     --alpha --x [--kmax --format --out]
  diffnorm      sup |W_alpha - W_1/2| scan   --alpha --n [--tol --format --out]
  entropy       entropy estimates            --alpha | --alphas a,b,.. --k --trials --seed

common flags: --format csv|json (default csv), --out PATH (default stdout).
Rationals are written p/q; exact-mode commands reject decimals.
WILTON_PRECISION_BITS overrides the float-mode precision (default 128).
";

/// Parse arguments and run; returns the process exit code. Output goes
/// to `--out` or stdout, diagnostics to stderr.
pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if matches!(e, CliError::Usage(_)) {
                eprintln!("error: {}", e.message());
                eprint!("{USAGE}");
            } else {
                eprintln!("error: {}", e.message());
            }
            e.exit_code()
        }
    }
}

fn allowed_flags(command: &str) -> Option<&'static [&'static str]> {
    Some(match command {
        "expand" => &["alpha", "x", "kmax", "format", "out"],
        "wilton" => &["alpha", "x", "tol", "kmax", "format", "out"],
        "grid" => &["alpha", "a", "b", "n", "tol", "format", "out"],
        "matching" => &["alpha", "format", "out"],
        "pseudocenter" => &["r", "format", "out"],
        "classify" => &["alpha", "xi", "format", "out"],
        "witness" => &["alpha", "xi", "eps", "tol", "format", "out"],
        "sync" => &["alpha", "x", "kmax", "format", "out"],
        "diffnorm" => &["alpha", "n", "tol", "format", "out"],
        "entropy" => &["alpha", "alphas", "k", "trials", "seed", "format", "out"],
        _ => return None,
    })
}

fn dispatch(args: &[String]) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    let allowed = allowed_flags(command)
        .ok_or_else(|| CliError::Usage(format!("unknown command {command:?}")))?;
    let flags = parse_flags(&args[1..], allowed)?;
    let out = render(command, &flags)?;
    write_out(flags.get("out").map(String::as_str), &out)
}

fn parse_flags(args: &[String], allowed: &[&str]) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(stripped) = arg.strip_prefix("--") else {
            return Err(CliError::Usage(format!("unexpected argument {arg:?}")));
        };
        let (key, value) = match stripped.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let Some(v) = it.next() else {
                    return Err(CliError::Usage(format!("flag --{stripped} needs a value")));
                };
                (stripped.to_string(), v.clone())
            }
        };
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown flag --{key}")));
        }
        map.insert(key, value);
    }
    Ok(map)
}

type Flags = BTreeMap<String, String>;

fn render(command: &str, flags: &Flags) -> Result<String, CliError> {
    match command {
        "expand" => cmd_expand(flags),
        "wilton" => cmd_wilton(flags),
        "grid" => cmd_grid(flags),
        "matching" => cmd_matching(flags),
        "pseudocenter" => cmd_pseudocenter(flags),
        "classify" => cmd_classify(flags),
        "witness" => cmd_witness(flags),
        "sync" => cmd_sync(flags),
        "diffnorm" => cmd_diffnorm(flags),
        "entropy" => cmd_entropy(flags),
        _ => unreachable!("validated above"),
    }
}

// ---------------------------------------------------------------------
// flag access and value parsing
// ---------------------------------------------------------------------

fn require<'a>(flags: &'a Flags, key: &str) -> Result<&'a str, CliError> {
    flags
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::Usage(format!("missing required flag --{key}")))
}

fn format_of(flags: &Flags) -> Result<Format, CliError> {
    match flags.get("format").map(String::as_str).unwrap_or("csv") {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Usage(format!(
            "format must be csv or json, got {other:?}"
        ))),
    }
}

fn parse_f64(flags: &Flags, key: &str, default: f64) -> Result<f64, CliError> {
    match flags.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--{key} expects a number, got {v:?}"))),
    }
}

fn parse_usize(flags: &Flags, key: &str, default: usize) -> Result<usize, CliError> {
    match flags.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("--{key} expects an integer, got {v:?}"))),
    }
}

/// A rational in `p/q` (or integer) form; decimals are a domain error
/// on exact-mode inputs.
fn parse_exact(value: &str, what: &str) -> Result<Rational, CliError> {
    if value.contains('.') {
        return Err(CliError::Domain(format!(
            "{what} requires an exact rational written p/q, got the decimal {value:?}"
        )));
    }
    parse_rational(value).map_err(|e| CliError::Domain(e.to_string()))
}

/// Either an exact rational (`p/q`) or a float-mode real (decimal).
enum Number {
    Exact(Rational),
    Float(f64),
}

fn parse_number(value: &str, what: &str) -> Result<Number, CliError> {
    if !value.contains('.') {
        if let Ok(r) = parse_rational(value) {
            return Ok(Number::Exact(r));
        }
    }
    value
        .parse::<f64>()
        .map(Number::Float)
        .map_err(|_| CliError::Domain(format!("cannot parse {what} from {value:?}")))
}

fn eval_config(flags: &Flags) -> Result<EvalConfig, CliError> {
    let mut cfg = EvalConfig::from_env();
    cfg.tol = parse_f64(flags, "tol", cfg.tol)?;
    if cfg.tol <= 0.0 {
        return Err(CliError::Domain("tolerance must be positive".into()));
    }
    cfg.kmax = parse_usize(flags, "kmax", cfg.kmax)?;
    Ok(cfg)
}

// ---------------------------------------------------------------------
// output shaping
// ---------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

/// 17 significant digits, stable across runs.
fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON field value for an f64 (non-finite values become strings).
fn jnum(v: f64) -> String {
    if v.is_finite() {
        num(v)
    } else {
        format!("\"{}\"", num(v))
    }
}

fn jstr(s: &str) -> String {
    format!("\"{s}\"")
}

fn json_object(fields: &[(&str, String)]) -> String {
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("\"{k}\":{v}")).collect();
    format!("{{{}}}", body.join(","))
}

fn json_array(items: Vec<String>) -> String {
    format!("[{}]", items.join(","))
}

fn csv(header: &str, rows: Vec<String>) -> String {
    let mut s = String::with_capacity(rows.len() * 48 + header.len() + 2);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row);
        s.push('\n');
    }
    s
}

fn write_out(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io(e.to_string())),
    }
}

// ---------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------

fn cmd_expand(flags: &Flags) -> Result<String, CliError> {
    let kmax = parse_usize(flags, "kmax", 40)?;
    let format = format_of(flags)?;
    let alpha_in = parse_number(require(flags, "alpha")?, "alpha")?;
    let x_in = parse_number(require(flags, "x")?, "x")?;
    let header = "n,a,eps,x,p,q,beta,log_q";

    let rows: Vec<(String, Vec<(&str, String)>)> = match (alpha_in, x_in) {
        (Number::Exact(a), Number::Exact(x)) => {
            let param =
                AlphaParam::from_rational(a).map_err(|e| CliError::Domain(e.to_string()))?;
            let trace = orbit(&x, &param, kmax).map_err(|e| CliError::Assertion(e.to_string()))?;
            trace
                .steps
                .iter()
                .map(|s| {
                    let fields = vec![
                        ("n", s.index.to_string()),
                        ("a", s.digit.a.to_string()),
                        ("eps", s.digit.eps.to_string()),
                        ("x", jstr(&s.x.to_string())),
                        ("p", s.p.to_string()),
                        ("q", s.q.to_string()),
                        ("beta", jstr(&s.beta.to_string())),
                        ("log_q", jnum(s.log_q)),
                    ];
                    let csv_row = format!(
                        "{},{},{},{},{},{},{},{}",
                        s.index,
                        s.digit.a,
                        s.digit.eps,
                        s.x,
                        s.p,
                        s.q,
                        s.beta,
                        num(s.log_q)
                    );
                    (csv_row, fields)
                })
                .collect()
        }
        (alpha, x) => {
            let bits = crate::dyadic::precision_bits_from_env();
            let param = match alpha {
                Number::Exact(a) => AlphaParam::from_exact(&a, bits),
                Number::Float(a) => AlphaParam::from_f64(a, bits),
            }
            .map_err(|e| CliError::Domain(e.to_string()))?;
            let xd = match x {
                Number::Exact(r) => Dyadic::from_rational(&r, bits),
                Number::Float(v) => Dyadic::from_f64(v, bits),
            };
            let trace = orbit(&xd, &param, kmax).map_err(|e| CliError::Assertion(e.to_string()))?;
            trace
                .steps
                .iter()
                .map(|s| {
                    let fields = vec![
                        ("n", s.index.to_string()),
                        ("a", s.digit.a.to_string()),
                        ("eps", s.digit.eps.to_string()),
                        ("x", jnum(s.x.to_f64())),
                        ("p", s.p.to_string()),
                        ("q", s.q.to_string()),
                        ("beta", jnum(s.beta.to_f64())),
                        ("log_q", jnum(s.log_q)),
                    ];
                    let csv_row = format!(
                        "{},{},{},{},{},{},{},{}",
                        s.index,
                        s.digit.a,
                        s.digit.eps,
                        num(s.x.to_f64()),
                        s.p,
                        s.q,
                        num(s.beta.to_f64()),
                        num(s.log_q)
                    );
                    (csv_row, fields)
                })
                .collect()
        }
    };

    Ok(match format {
        Format::Csv => csv(header, rows.into_iter().map(|(r, _)| r).collect()),
        Format::Json => {
            let items = rows.into_iter().map(|(_, f)| json_object(&f)).collect();
            let mut s = json_array(items);
            s.push('\n');
            s
        }
    })
}

fn cmd_wilton(flags: &Flags) -> Result<String, CliError> {
    let cfg = eval_config(flags)?;
    let format = format_of(flags)?;
    let alpha_in = parse_number(require(flags, "alpha")?, "alpha")?;
    let x_in = parse_number(require(flags, "x")?, "x")?;
    let param = match &alpha_in {
        Number::Exact(a) => AlphaParam::from_exact(a, cfg.bits),
        Number::Float(a) => AlphaParam::from_f64(*a, cfg.bits),
    }
    .map_err(|e| CliError::Domain(e.to_string()))?;
    let x = match &x_in {
        Number::Exact(r) => Dyadic::from_rational(r, cfg.bits),
        Number::Float(v) => Dyadic::from_f64(*v, cfg.bits),
    };
    let v = wilton_eval(&x, &param, &cfg).map_err(|e| CliError::Domain(e.to_string()))?;
    if !v.converged && !v.hit_zero {
        return Err(CliError::NonConvergence(format!(
            "kmax = {} exhausted with err_est = {:e}",
            cfg.kmax, v.err_est
        )));
    }
    let fields = [
        ("x", jnum(x.to_f64())),
        ("alpha", jnum(param.to_f64())),
        ("value", jnum(v.value)),
        ("err_est", jnum(v.err_est)),
        ("k_used", v.k_used.to_string()),
        ("hit_zero", v.hit_zero.to_string()),
    ];
    Ok(match format {
        Format::Json => {
            let mut s = json_object(&fields);
            s.push('\n');
            s
        }
        Format::Csv => csv(
            "x,alpha,value,err_est,k_used,hit_zero",
            vec![format!(
                "{},{},{},{},{},{}",
                num(x.to_f64()),
                num(param.to_f64()),
                num(v.value),
                num(v.err_est),
                v.k_used,
                v.hit_zero
            )],
        ),
    })
}

fn cmd_grid(flags: &Flags) -> Result<String, CliError> {
    let cfg = eval_config(flags)?;
    let format = format_of(flags)?;
    let a = parse_f64(flags, "a", 0.0)?;
    let b = parse_f64(flags, "b", 1.0)?;
    let n = parse_usize(flags, "n", 1024)?;
    let alpha_in = parse_number(require(flags, "alpha")?, "alpha")?;
    let param = match &alpha_in {
        Number::Exact(r) => AlphaParam::from_exact(r, cfg.bits),
        Number::Float(v) => AlphaParam::from_f64(*v, cfg.bits),
    }
    .map_err(|e| CliError::Domain(e.to_string()))?;
    let rows = grid_emit(&param, a, b, n, &cfg).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(match format {
        Format::Csv => csv(
            "x,value,err_est,k_used,flag",
            rows.iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{}",
                        num(r.x),
                        num(r.value),
                        num(r.err_est),
                        r.k_used,
                        r.flag
                    )
                })
                .collect(),
        ),
        Format::Json => {
            let items = rows
                .iter()
                .map(|r| {
                    json_object(&[
                        ("x", jnum(r.x)),
                        ("value", jnum(r.value)),
                        ("err_est", jnum(r.err_est)),
                        ("k_used", r.k_used.to_string()),
                        ("flag", r.flag.to_string()),
                    ])
                })
                .collect();
            let mut s = json_array(items);
            s.push('\n');
            s
        }
    })
}

fn cmd_matching(flags: &Flags) -> Result<String, CliError> {
    let format = format_of(flags)?;
    let alpha = parse_exact(require(flags, "alpha")?, "matching")?;
    let data = find_matching_exponents(&alpha).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(match data {
        None => match format {
            Format::Json => "{\"matched\":false}\n".into(),
            Format::Csv => csv("matched,n,m,index,verified", vec!["false,,,,".into()]),
        },
        Some(d) => match format {
            Format::Json => {
                let mut s = json_object(&[
                    ("n", d.n.to_string()),
                    ("m", d.m.to_string()),
                    ("index", d.index.to_string()),
                    ("verified", d.verified.to_string()),
                ]);
                s.push('\n');
                s
            }
            Format::Csv => csv(
                "matched,n,m,index,verified",
                vec![format!("true,{},{},{},{}", d.n, d.m, d.index, d.verified)],
            ),
        },
    })
}

fn cmd_pseudocenter(flags: &Flags) -> Result<String, CliError> {
    let format = format_of(flags)?;
    let r = parse_exact(require(flags, "r")?, "pseudocenter")?;
    let is_pc = pseudocenter_check(&r).map_err(|e| CliError::Domain(e.to_string()))?;
    let exponents = if is_pc {
        Some(exponents_from_pseudocenter(&r).map_err(|e| CliError::Domain(e.to_string()))?)
    } else {
        None
    };
    Ok(match format {
        Format::Json => {
            let mut fields = vec![
                ("r", jstr(&r.to_string())),
                ("is_pseudocenter", is_pc.to_string()),
            ];
            if let Some((n, m)) = exponents {
                fields.push(("n", n.to_string()));
                fields.push(("m", m.to_string()));
                fields.push(("index", (m as i64 - n as i64).to_string()));
            }
            let mut s = json_object(&fields);
            s.push('\n');
            s
        }
        Format::Csv => {
            let row = match exponents {
                Some((n, m)) => format!("{},{},{},{},{}", r, is_pc, n, m, m as i64 - n as i64),
                None => format!("{},{},,,", r, is_pc),
            };
            csv("r,is_pseudocenter,n,m,index", vec![row])
        }
    })
}

fn cmd_classify(flags: &Flags) -> Result<String, CliError> {
    let format = format_of(flags)?;
    let xi = parse_exact(require(flags, "xi")?, "classify xi")?;
    let alpha = match parse_number(require(flags, "alpha")?, "alpha")? {
        Number::Exact(r) => AlphaSpec::Exact(r),
        Number::Float(v) => AlphaSpec::Float(v),
    };
    let t = classify(&xi, &alpha).map_err(|e| match e {
        SingularityError::Domain(m) => CliError::Domain(m),
        other => CliError::Assertion(other.to_string()),
    })?;
    let kind = match t.kind {
        SingKind::A => "A",
        SingKind::B => "B",
    };
    let provenance = match t.provenance {
        Provenance::Regular => "regular",
        Provenance::MatchingParity => "matching-parity",
    };
    Ok(match format {
        Format::Csv => csv(
            "kind,provenance,float_warning",
            vec![format!("{kind},{provenance},{}", t.float_warning)],
        ),
        Format::Json => {
            let mut s = json_object(&[
                ("kind", jstr(kind)),
                ("provenance", jstr(provenance)),
                ("float_warning", t.float_warning.to_string()),
            ]);
            s.push('\n');
            s
        }
    })
}

fn cmd_witness(flags: &Flags) -> Result<String, CliError> {
    let format = format_of(flags)?;
    let alpha = parse_exact(require(flags, "alpha")?, "witness")?;
    let xi = parse_exact(require(flags, "xi")?, "witness xi")?;
    let eps = parse_f64(flags, "eps", 0.05)?;
    let tol = parse_f64(flags, "tol", 1e-3)?;
    let cfg = EvalConfig {
        tol: 1e-7,
        ..EvalConfig::from_env()
    };
    let w = bmo_witness(&alpha, &xi, eps, tol, &cfg).map_err(|e| match e {
        SingularityError::NotTypeA(m) | SingularityError::Domain(m) => CliError::Domain(m),
        SingularityError::Unconverged(m) => CliError::NonConvergence(m),
        other => CliError::Assertion(other.to_string()),
    })?;
    Ok(match format {
        Format::Json => {
            let mut s = json_object(&[
                ("x_minus", jnum(w.x_minus)),
                ("x_plus", jnum(w.x_plus)),
                ("integral", jnum(w.integral_value)),
                (
                    "normalized",
                    jnum(w.integral_value / (w.x_plus - w.x_minus)),
                ),
            ]);
            s.push('\n');
            s
        }
        Format::Csv => csv(
            "x_minus,x_plus,integral,normalized",
            vec![format!(
                "{},{},{},{}",
                num(w.x_minus),
                num(w.x_plus),
                num(w.integral_value),
                num(w.integral_value / (w.x_plus - w.x_minus))
            )],
        ),
    })
}

fn cmd_sync(flags: &Flags) -> Result<String, CliError> {
    let kmax = parse_usize(flags, "kmax", 50)?;
    let format = format_of(flags)?;
    let alpha_in = parse_number(require(flags, "alpha")?, "alpha")?;
    let x_in = parse_number(require(flags, "x")?, "x")?;

    // Exact when both inputs are rational, float otherwise.
    match (alpha_in, x_in) {
        (Number::Exact(a), Number::Exact(x)) => {
            let param =
                AlphaParam::from_rational(a).map_err(|e| CliError::Domain(e.to_string()))?;
            let trace = sync_trace(&x, &param, kmax, 0.0)
                .map_err(|e| CliError::Assertion(e.to_string()))?;
            render_sync(&trace, format, |s: &Rational| s.to_string())
        }
        (alpha, x) => {
            let bits = crate::dyadic::precision_bits_from_env();
            let param = match alpha {
                Number::Exact(a) => AlphaParam::from_exact(&a, bits),
                Number::Float(a) => AlphaParam::from_f64(a, bits),
            }
            .map_err(|e| CliError::Domain(e.to_string()))?;
            let xd = match x {
                Number::Exact(r) => Dyadic::from_rational(&r, bits),
                Number::Float(v) => Dyadic::from_f64(v, bits),
            };
            let trace = sync_trace(&xd, &param, kmax, 1e-9)
                .map_err(|e| CliError::Assertion(e.to_string()))?;
            render_sync(&trace, format, |s: &Dyadic| num(s.to_f64()))
        }
    }
}

fn render_sync<S: Scalar>(
    trace: &SyncTrace<S>,
    format: Format,
    show: impl Fn(&S) -> String,
) -> Result<String, CliError> {
    let report = validate_trace(trace);
    let monitors = monitor_report(trace);
    let out = match format {
        Format::Csv => csv(
            "i,state,x,x_half,q,q_half",
            trace
                .steps
                .iter()
                .map(|s| {
                    format!(
                        "{},{},{},{},{},{}",
                        s.index,
                        s.state,
                        show(&s.x),
                        show(&s.x_half),
                        s.q,
                        s.q_half
                    )
                })
                .collect(),
        ),
        Format::Json => {
            let steps = trace
                .steps
                .iter()
                .map(|s| {
                    json_object(&[
                        ("i", s.index.to_string()),
                        ("state", jstr(&s.state.to_string())),
                        ("x", jstr(&show(&s.x))),
                        ("x_half", jstr(&show(&s.x_half))),
                        ("q", s.q.to_string()),
                        ("q_half", s.q_half.to_string()),
                    ])
                })
                .collect();
            let mut s = json_object(&[
                ("steps", json_array(steps)),
                ("truncated", trace.truncated.to_string()),
                ("b_runs", report.b_runs.to_string()),
                ("valid", report.is_valid().to_string()),
                ("monitors_valid", monitors.is_valid().to_string()),
                ("hurwitz_max_ratio", jnum(monitors.hurwitz_max_ratio)),
                ("max_log_ratio", jnum(monitors.max_log_ratio)),
            ]);
            s.push('\n');
            s
        }
    };
    if !report.is_valid() || !monitors.is_valid() {
        let mut all = report.violations;
        all.extend(monitors.violations);
        return Err(CliError::Assertion(format!(
            "trace validation failed: {}",
            all.join("; ")
        )));
    }
    Ok(out)
}

fn cmd_diffnorm(flags: &Flags) -> Result<String, CliError> {
    let format = format_of(flags)?;
    let n = parse_usize(flags, "n", 10_000)?;
    let mut cfg = EvalConfig::from_env();
    cfg.tol = parse_f64(flags, "tol", 1e-6)?;
    let alpha = match parse_number(require(flags, "alpha")?, "alpha")? {
        Number::Exact(r) => Scalar::to_f64(&r),
        Number::Float(v) => v,
    };
    let scan = supnorm_scan(alpha, n, &cfg).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(match format {
        Format::Json => {
            let mut s = json_object(&[
                ("alpha", jnum(alpha)),
                ("max_abs", jnum(scan.max_abs)),
                ("argmax", jnum(scan.argmax)),
                ("samples", scan.samples.to_string()),
            ]);
            s.push('\n');
            s
        }
        Format::Csv => csv(
            "alpha,max_abs,argmax,samples",
            vec![format!(
                "{},{},{},{}",
                num(alpha),
                num(scan.max_abs),
                num(scan.argmax),
                scan.samples
            )],
        ),
    })
}

fn cmd_entropy(flags: &Flags) -> Result<String, CliError> {
    let format = format_of(flags)?;
    let seed = require(flags, "seed")?
        .parse::<u64>()
        .map_err(|_| CliError::Usage("--seed expects an unsigned integer".into()))?;
    let k = parse_usize(flags, "k", 10_000)?;
    let trials = parse_usize(flags, "trials", 100)?;

    let alphas: Vec<f64> = if let Some(list) = flags.get("alphas") {
        list.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad alpha {s:?} in --alphas")))
            })
            .collect::<Result<_, _>>()?
    } else {
        let a = match parse_number(require(flags, "alpha")?, "alpha")? {
            Number::Exact(r) => Scalar::to_f64(&r),
            Number::Float(v) => v,
        };
        vec![a]
    };

    if alphas.len() > 1 {
        let report = constancy_report(&alphas, k, trials, seed)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        Ok(match format {
            Format::Csv => {
                let mut rows: Vec<String> = report
                    .estimates
                    .iter()
                    .map(|e| {
                        format!(
                            "{},{},{},{},{},{}",
                            num(e.alpha),
                            e.orbit_len,
                            e.trials,
                            num(e.mean),
                            num(e.stderr),
                            e.redraws
                        )
                    })
                    .collect();
                rows.push(format!("spread,,,{},,", num(report.max_rel_spread)));
                csv("alpha,k,trials,mean,stderr,redraws", rows)
            }
            Format::Json => {
                let items = report
                    .estimates
                    .iter()
                    .map(|e| {
                        json_object(&[
                            ("alpha", jnum(e.alpha)),
                            ("k", e.orbit_len.to_string()),
                            ("trials", e.trials.to_string()),
                            ("mean", jnum(e.mean)),
                            ("stderr", jnum(e.stderr)),
                            ("redraws", e.redraws.to_string()),
                        ])
                    })
                    .collect();
                let mut s = json_object(&[
                    ("estimates", json_array(items)),
                    ("max_rel_spread", jnum(report.max_rel_spread)),
                    ("seed", seed.to_string()),
                ]);
                s.push('\n');
                s
            }
        })
    } else {
        let e = entropy_estimate(alphas[0], k, trials, seed)
            .map_err(|er| CliError::Domain(er.to_string()))?;
        Ok(match format {
            Format::Csv => csv(
                "alpha,k,trials,mean,stderr,redraws",
                vec![format!(
                    "{},{},{},{},{},{}",
                    num(e.alpha),
                    e.orbit_len,
                    e.trials,
                    num(e.mean),
                    num(e.stderr),
                    e.redraws
                )],
            ),
            Format::Json => {
                let mut s = json_object(&[
                    ("alpha", jnum(e.alpha)),
                    ("k", e.orbit_len.to_string()),
                    ("trials", e.trials.to_string()),
                    ("mean", jnum(e.mean)),
                    ("stderr", jnum(e.stderr)),
                    ("redraws", e.redraws.to_string()),
                    ("seed", seed.to_string()),
                ]);
                s.push('\n');
                s
            }
        })
    }
}
