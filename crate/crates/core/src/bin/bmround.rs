use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use bmround::banach_mazur::{canonical_deviation, minimize_ratio, RoundingOptions};
use bmround::envelopes::john_ellipse;
use bmround::experiments::{
    area_batch, area_row, fmt_sig, uniqueness_batch, uniqueness_row, AreaRow, UniquenessRow, AREA_HEADER,
    MODULUS_HEADER, UNIQUENESS_HEADER, UNIQUENESS_TOL,
};
use bmround::io::{parse_body, parse_family, parse_field};
use bmround::modulus::{build_grid_on, discrete_modulus, modulus_ratio, ModulusOptions};
use bmround::{Error, LinearMap2, SymmetricConvexBody};

const EXIT_INPUT: u8 = 1;
const EXIT_UNCERTIFIED: u8 = 2;
const EXIT_PROPERTY: u8 = 3;
const EXIT_SOLVER: u8 = 4;

const RATIO_LO: f64 = 2.0 / std::f64::consts::PI - 0.06;
const RATIO_HI: f64 = 4.0 / std::f64::consts::PI + 0.06;

/// Banach–Mazur rounding, area bounds and discrete modulus experiments.
#[derive(Parser)]
#[command(name = "bmround", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON experiment config; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Optimizer tolerance (simplex diameter).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Round one body and print rho, T*, radii, contacts and the certificate.
    Rho {
        /// Body spec: a JSON file or an inline JSON object.
        #[arg(long)]
        body: Option<String>,
    },
    /// Check the area bounds 2 L^2 <= |T*A| <= 4 l^2 and their envelopes.
    AreaBounds {
        #[arg(long)]
        body: Option<String>,
    },
    /// Compare minimizers from independently seeded restarts.
    Uniqueness {
        #[arg(long)]
        body: Option<String>,
        /// A map "a,b,c,d" (row-major); two or more compare the given maps.
        #[arg(long = "map", value_parser = parse_map, allow_hyphen_values = true)]
        maps: Vec<LinearMap2>,
    },
    /// Discrete modulus of a curve family in a norm field and its Euclidean image.
    Modulus {
        #[arg(long)]
        field: String,
        #[arg(long)]
        family: String,
        /// Grid sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "64")]
        n: Vec<usize>,
        /// Constraint-generation rounds per solve (default 10 n).
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Write an SVG figure of the rounded body.
    Svg {
        #[arg(long)]
        body: Option<String>,
    },
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ExperimentConfig {
    seed: Option<u64>,
    count: Option<usize>,
    restarts: Option<usize>,
    grid_n: Option<usize>,
    body_spec_path: Option<PathBuf>,
    output: Option<PathBuf>,
    /// Keys: tol, contact_tol, area_tol, feas_tol, qp_tol.
    tolerances: BTreeMap<String, f64>,
}

struct Settings {
    seed: u64,
    count: Option<usize>,
    restarts: Option<usize>,
    rounding: RoundingOptions,
    area_tol: Option<f64>,
    modulus: ModulusOptions,
    body: Option<String>,
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: error_code(&e),
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::SolverLimit { .. } => EXIT_SOLVER,
        Error::Cell { source, .. } => error_code(source),
        _ => EXIT_INPUT,
    }
}

fn parse_map(s: &str) -> Result<LinearMap2, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 4 {
        return Err(format!("expected 4 entries, got {}", v.len()));
    }
    LinearMap2::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn spec_text(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| input_error(format!("{arg}: {e}")))
    }
}

fn load_body(arg: &str) -> Result<SymmetricConvexBody, Failure> {
    Ok(parse_body(&spec_text(arg)?)?)
}

fn settings(g: &GlobalArgs, body: Option<String>) -> Result<Settings, Failure> {
    let cfg: ExperimentConfig = match &g.config {
        Some(path) => serde_json::from_str(&spec_text(&path.to_string_lossy())?)
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?,
        None => ExperimentConfig::default(),
    };
    for key in cfg.tolerances.keys() {
        if !["tol", "contact_tol", "area_tol", "feas_tol", "qp_tol"].contains(&key.as_str()) {
            return Err(input_error(format!("unknown tolerance {key:?}")));
        }
    }
    let tol = |k: &str| cfg.tolerances.get(k).copied();
    let defaults = RoundingOptions::default();
    let rounding = RoundingOptions {
        grid_n: g.grid_n.or(cfg.grid_n).unwrap_or(defaults.grid_n),
        restarts: defaults.restarts,
        tol: g.tol.or(tol("tol")).unwrap_or(defaults.tol),
        seed: 0,
        contact_tol: tol("contact_tol").unwrap_or(defaults.contact_tol),
        max_iter: defaults.max_iter,
    };
    if rounding.grid_n < 2 || rounding.tol.is_nan() || rounding.tol <= 0.0 {
        return Err(input_error("grid-n must be at least 2 and tol positive"));
    }
    let mdef = ModulusOptions::default();
    let count = g.count.or(cfg.count);
    if count == Some(0) {
        return Err(input_error("count must be at least 1"));
    }
    Ok(Settings {
        seed: g.seed.or(cfg.seed).unwrap_or(0),
        count,
        restarts: g.restarts.or(cfg.restarts),
        rounding,
        area_tol: tol("area_tol"),
        modulus: ModulusOptions {
            feas_tol: tol("feas_tol").unwrap_or(mdef.feas_tol),
            qp_tol: tol("qp_tol").unwrap_or(mdef.qp_tol),
            max_iter: None,
        },
        body: body.or_else(|| cfg.body_spec_path.map(|p| p.to_string_lossy().into_owned())),
        out: g.out.clone().or(cfg.output),
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| input_error(format!("stdout: {e}")))
        }
    }
}

fn need_body(s: &Settings) -> Result<SymmetricConvexBody, Failure> {
    match &s.body {
        Some(b) => load_body(b),
        None => Err(input_error("--body is required")),
    }
}

fn angles(v: &[f64]) -> String {
    v.iter().map(|a| fmt_sig(*a)).collect::<Vec<_>>().join(",")
}

fn cmd_rho(s: &Settings) -> Result<u8, Failure> {
    let body = need_body(s)?;
    let r = minimize_ratio(&body, &s.rounding)?;
    let t = r.t_star;
    let text = format!(
        "rho: {}\nt_star: [{}, {}; {}, {}]\ninner: {}\nouter: {}\nouter_contacts: {}\ninner_contacts: {}\nfull_circle: {}\ncertified: {}\n",
        fmt_sig(r.rho),
        fmt_sig(t.a),
        fmt_sig(t.b),
        fmt_sig(t.c),
        fmt_sig(t.d),
        fmt_sig(r.inner),
        fmt_sig(r.outer),
        angles(&r.outer_contacts),
        angles(&r.inner_contacts),
        r.full_circle,
        r.certified
    );
    emit(&s.out, &text)?;
    Ok(if r.certified { 0 } else { EXIT_UNCERTIFIED })
}

fn report_rows<R>(
    rows: Vec<bmround::Result<R>>,
    header: &str,
    csv: impl Fn(&R) -> String,
    passed: impl Fn(&R) -> bool,
) -> (String, u8) {
    let mut text = format!("{header}\n");
    let mut code = 0;
    for (i, row) in rows.iter().enumerate() {
        match row {
            Ok(r) => {
                text.push_str(&csv(r));
                text.push('\n');
                if !passed(r) {
                    eprintln!("row {i}: property check failed");
                    code = code.max(EXIT_PROPERTY);
                }
            }
            Err(e) => {
                eprintln!("row {i}: {e}");
                code = code.max(error_code(e));
            }
        }
    }
    (text, code)
}

fn cmd_area_bounds(s: &Settings) -> Result<u8, Failure> {
    let rows: Vec<bmround::Result<AreaRow>> = match &s.body {
        Some(b) => vec![area_row(0, &load_body(b)?, &s.rounding, s.area_tol)],
        None => area_batch(s.seed, s.count.unwrap_or(500), &s.rounding, s.area_tol),
    };
    let (text, code) = report_rows(rows, AREA_HEADER, AreaRow::csv, AreaRow::passed);
    emit(&s.out, &text)?;
    Ok(code)
}

fn cmd_uniqueness(s: &Settings, maps: &[LinearMap2]) -> Result<u8, Failure> {
    if !maps.is_empty() {
        if maps.len() < 2 {
            return Err(input_error("give at least two maps to compare"));
        }
        let mut dev = 0.0f64;
        for (i, a) in maps.iter().enumerate() {
            for b in &maps[i + 1..] {
                dev = dev.max(canonical_deviation(a, b)?);
            }
        }
        emit(&s.out, &format!("deviation: {}\n", fmt_sig(dev)))?;
        return Ok(if dev <= UNIQUENESS_TOL { 0 } else { EXIT_PROPERTY });
    }
    let restarts = s.restarts.unwrap_or(5);
    let opts = RoundingOptions {
        seed: s.seed,
        ..s.rounding
    };
    let rows: Vec<bmround::Result<UniquenessRow>> = match &s.body {
        Some(b) => vec![uniqueness_row(0, &load_body(b)?, restarts, &opts)],
        None => uniqueness_batch(s.seed, s.count.unwrap_or(20), restarts, &opts),
    };
    for r in rows.iter().flatten().filter(|r| r.skipped) {
        eprintln!("row {}: skipped, rho = {} is within 1e-3 of 1", r.index, fmt_sig(r.rho));
    }
    let (text, code) = report_rows(rows, UNIQUENESS_HEADER, UniquenessRow::csv, UniquenessRow::passed);
    emit(&s.out, &text)?;
    Ok(code)
}

fn cmd_modulus(s: &Settings, field: &str, family: &str, ns: &[usize]) -> Result<u8, Failure> {
    let field = parse_field(&spec_text(field)?)?;
    let fam_json = parse_family(&spec_text(family)?)?;
    let fam = fam_json.build()?;
    let domain = fam_json.domain(field.rect);
    let mut text = format!("{MODULUS_HEADER}\n");
    let mut code = 0;
    let certified = match field.constant_body() {
        Some(b) => minimize_ratio(b, &s.rounding)?.certified,
        None => {
            eprintln!("field is not constant: only the field modulus is reported");
            false
        }
    };
    for &n in ns {
        if field.constant_body().is_some() {
            let c = modulus_ratio(&field, &fam, domain, n, &s.rounding, &s.modulus)?;
            text.push_str(&format!(
                "{n},{},{},{}\n",
                fmt_sig(c.field.value),
                fmt_sig(c.euclidean.value),
                fmt_sig(c.ratio)
            ));
            if certified && !(RATIO_LO..=RATIO_HI).contains(&c.ratio) {
                eprintln!("n = {n}: ratio {} outside [2/pi - 0.06, 4/pi + 0.06]", fmt_sig(c.ratio));
                code = EXIT_PROPERTY;
            }
        } else {
            let grid = build_grid_on(&field, domain, n)?;
            let m = discrete_modulus(&grid, &fam, &s.modulus)?;
            text.push_str(&format!("{n},{},,\n", fmt_sig(m.value)));
        }
    }
    emit(&s.out, &text)?;
    Ok(code)
}

fn cmd_svg(s: &Settings) -> Result<u8, Failure> {
    let body = need_body(s)?;
    let r = minimize_ratio(&body, &s.rounding)?;
    let john = john_ellipse(&body)?;
    emit(&s.out, &bmround::svg::render(&body, &r, Some(&john)))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Rho { body } => cmd_rho(&settings(&cli.global, body)?),
        Command::AreaBounds { body } => cmd_area_bounds(&settings(&cli.global, body)?),
        Command::Uniqueness { body, maps } => cmd_uniqueness(&settings(&cli.global, body)?, &maps),
        Command::Modulus {
            field,
            family,
            n,
            max_iter,
        } => {
            if n.is_empty() || n.iter().any(|&k| k < 2) {
                return Err(input_error("every --n must be at least 2"));
            }
            let mut s = settings(&cli.global, None)?;
            s.modulus.max_iter = max_iter;
            cmd_modulus(&s, &field, &family, &n)
        }
        Command::Svg { body } => cmd_svg(&settings(&cli.global, body)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
