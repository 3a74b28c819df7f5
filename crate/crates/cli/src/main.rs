use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use leibniz_core::algebra::{AlgebraError, LeibnizAlgebra, DEFAULT_DEFECT_CAP};
use leibniz_core::cohomology::{
    cohomology_report, CohomologyConfig, CohomologyError, LeibnizModule, DEFAULT_MAX_CELLS, DEFAULT_MAX_DEGREE,
};
use leibniz_core::constructions::{
    build_l_general, build_l_particular, build_n_c, build_r_c, build_r_general, build_r_particular,
    normalize_alpha1, CharSeqSpec, ConstructionError, LFamilyParams,
};
use leibniz_core::derivations::{
    characteristic_sequence, derivation_space, inner_derivations, DerivationError, DEFAULT_CHARSEQ_SAMPLES,
    DEFAULT_NIL_TRIALS,
};
use leibniz_core::rational::Rational;
use leibniz_core::suite::{self, Status, SuiteConfig, SuiteReport, DEFAULT_SEED};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "leibniz", version, about = "Exact computations with finite-dimensional Leibniz algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Output format; only JSON is stable.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for every randomized search.
    #[arg(long, env = "LEIBNIZ_SEED", default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Random combinations tried by the nil-independence search.
    #[arg(long, default_value_t = DEFAULT_NIL_TRIALS, global = true)]
    trials: usize,
    /// Refuse to assemble coboundary matrices with more cells than this.
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS, value_parser = positive_u128, global = true)]
    max_cells: u128,
    /// Highest cochain degree that may be assembled.
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE, global = true)]
    max_degree: usize,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Leibniz identity on an algebra file.
    Check { path: PathBuf },
    /// Build a member of one of the families and print it as JSON.
    Build(Box<BuildArgs>),
    /// Lower central and derived series.
    Series { path: PathBuf },
    /// Derivation and inner derivation spaces.
    Derivations {
        path: PathBuf,
        /// Print a basis of Der(L) as matrices.
        #[arg(long)]
        with_basis: bool,
    },
    /// Characteristic sequence of a nilpotent algebra.
    Charseq {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CHARSEQ_SAMPLES)]
        samples: usize,
    },
    /// Leibniz cohomology with coefficients in the adjoint module.
    Cohomology {
        path: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        with_bases: bool,
    },
    /// Run the verification suites for the rigid solvable families.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = SuiteKind::All)]
        suite: SuiteKind,
        #[arg(long, default_value_t = 2)]
        n1: usize,
        #[arg(long, default_value_t = 1)]
        n2: usize,
        /// Characteristic sequence for the general suite, e.g. 3,2,1.
        #[arg(long, default_value = "2,1")]
        seq: CharSeqSpec,
    },
    /// HL^1 and HL^2 of the solvable extension for every partition of n <= nmax.
    Sweep {
        #[arg(long)]
        nmax: usize,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SuiteKind {
    Particular,
    General,
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Filiform-type nilpotent Lie algebra of a characteristic sequence.
    #[value(name = "n-c")]
    NC,
    /// Its solvable extension by a torus.
    #[value(name = "r-c")]
    RC,
    /// Nilpotent Leibniz family with parameters alphas, betas.
    LGeneral,
    /// `k+1` alphas before normalization; prints the normalized algebra.
    LNormalized,
    /// Solvable Leibniz algebra on the zero-parameter family.
    RGeneral,
    /// Two-block family with a2, a3, b1, b2.
    LParticular,
    /// Two-block solvable algebra.
    RParticular,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    seq: Option<CharSeqSpec>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Comma-separated rationals.
    #[arg(long, value_parser = parse_rationals, allow_hyphen_values = true)]
    alphas: Option<RatList>,
    #[arg(long, value_parser = parse_rationals, allow_hyphen_values = true)]
    betas: Option<RatList>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a2: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a3: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b1: Rational,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b2: Rational,
    /// Write the algebra here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// A comma-separated list of rationals such as `1,-2,3/4`.
#[derive(Clone, Debug)]
struct RatList(Vec<Rational>);

fn parse_rationals(s: &str) -> Result<RatList, String> {
    if s.trim().is_empty() {
        return Ok(RatList(Vec::new()));
    }
    s.split(',').map(|p| p.trim().parse::<Rational>().map_err(|e| format!("'{p}': {e}"))).collect::<Result<_, _>>().map(RatList)
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Exit classes: 1 mathematical failure, 2 input error, 3 resource guard.
#[derive(Debug)]
enum CliError {
    Input(String),
    Guard(String),
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DerivationError> for CliError {
    fn from(e: DerivationError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::TooLarge { .. } | CohomologyError::DegreeTooHigh { .. } => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// What a command produced: the JSON body, a text rendering and the exit code.
struct Outcome {
    body: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(body: Value, text: String) -> Self {
        Outcome { body, text, code: 0 }
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<LeibnizAlgebra, CliError> {
    Ok(LeibnizAlgebra::from_json_str(&read_input(path)?)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cohomology_config(g: &Global) -> CohomologyConfig {
    CohomologyConfig { max_degree: g.max_degree, max_cells: g.max_cells }
}

fn cmd_check(path: &PathBuf) -> Result<Outcome, CliError> {
    let a = LeibnizAlgebra::from_json_str_with(&read_input(path)?, false)?;
    let report = a.check_identity_capped(Some(DEFAULT_DEFECT_CAP));
    let labels = a.labels();
    let first = report.defects.first().map(|d| {
        let (i, j, k) = d.triple;
        vec![labels[i].clone(), labels[j].clone(), labels[k].clone()]
    });
    let text = match &first {
        None => format!("Leibniz identity holds ({} triples)", report.triples_checked),
        Some(t) => format!("Leibniz identity fails at {} of {} triples; first at ({})", report.failures, report.triples_checked, t.join(", ")),
    };
    let code = if report.passed() { 0 } else { 1 };
    let mut body = to_value(&report);
    body["passed"] = json!(report.passed());
    body["first_failure"] = json!(first);
    Ok(Outcome { body, text, code })
}

fn need<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("this family needs --{what}")))
}

fn cmd_build(b: BuildArgs) -> Result<Outcome, CliError> {
    let mut extra = None;
    let algebra = match b.family {
        Family::NC => build_n_c(&need(b.seq, "seq")?)?,
        Family::RC => build_r_c(&need(b.seq, "seq")?)?,
        Family::RGeneral => build_r_general(&need(b.seq, "seq")?)?,
        Family::LGeneral => {
            let spec = need(b.seq, "seq")?;
            let params = match (b.alphas, b.betas) {
                (None, None) => LFamilyParams::zero(spec),
                (a, bt) => LFamilyParams::new(spec, need(a, "alphas")?.0, need(bt, "betas")?.0)?,
            };
            build_l_general(&params)?
        }
        Family::LNormalized => {
            let norm = normalize_alpha1(&need(b.seq, "seq")?, &need(b.alphas, "alphas")?.0, &need(b.betas, "betas")?.0)?;
            extra = Some(to_value(&norm));
            norm.algebra
        }
        Family::LParticular => build_l_particular(need(b.n1, "n1")?, need(b.n2, "n2")?, b.a2, b.a3, b.b1, b.b2)?,
        Family::RParticular => build_r_particular(need(b.n1, "n1")?, need(b.n2, "n2")?)?,
    };
    let json = algebra.to_json_string();
    if let Some(path) = &b.output {
        fs::write(path, format!("{json}\n")).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let mut body = json!({ "dim": algebra.dim(), "algebra": to_value(&algebra.to_json()) });
    if let Some(n) = extra {
        body["normalization"] = n;
    }
    let text = if b.output.is_some() { format!("wrote algebra of dimension {}", algebra.dim()) } else { json };
    Ok(Outcome::ok(body, text))
}

fn cmd_series(path: &PathBuf) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let lower = a.lower_central_series();
    let derived = a.derived_series();
    let l2 = a.subalgebra(&a.derived_algebra())?;
    let body = json!({
        "dim": a.dim(),
        "lower_central": to_value(&lower),
        "derived": to_value(&derived),
        "nilpotent": lower.terminated,
        "solvable": derived.terminated,
        "derived_algebra_nilpotent": l2.is_nilpotent(),
        "is_lie": a.is_lie(),
    });
    let text = format!(
        "lower central dims {:?} (nilpotent: {})\nderived dims {:?} (solvable: {})",
        lower.dims, lower.terminated, derived.dims, derived.terminated
    );
    Ok(Outcome::ok(body, text))
}

fn cmd_derivations(path: &PathBuf, with_basis: bool) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let der = derivation_space(&a);
    let inner = inner_derivations(&a);
    let mut body = json!({ "dim": a.dim(), "dim_der": der.dim(), "dim_inner": inner.dim(), "outer": der.dim() - inner.dim() });
    if with_basis {
        body["basis"] = to_value(&der.basis().iter().map(|m| m.to_dense()).collect::<Vec<_>>());
    }
    let text = format!("dim Der = {}, dim Inner = {}", der.dim(), inner.dim());
    Ok(Outcome::ok(body, text))
}

fn cmd_charseq(path: &PathBuf, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let cs = characteristic_sequence(&a, samples, seed)?;
    let text = format!("C(L) = {:?}", cs.parts);
    Ok(Outcome::ok(to_value(&cs), text))
}

fn cmd_cohomology(path: &PathBuf, degree: usize, with_bases: bool, g: &Global) -> Result<Outcome, CliError> {
    let a = load(path)?;
    let r = cohomology_report(&LeibnizModule::adjoint(&a), degree, with_bases, &cohomology_config(g))?;
    let text = format!(
        "degree {}: dim CL = {}, dim ZL = {}, dim BL = {}, dim HL = {}",
        r.degree, r.dim_cl, r.dim_zl, r.dim_bl, r.dim_hl
    );
    Ok(Outcome::ok(to_value(&r), text))
}

fn suite_text(r: &SuiteReport) -> String {
    let mut out = format!("suite {} ({})", r.suite, r.params);
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        out.push_str(&format!("\n  {tag} {}: {}", c.name, c.detail));
        if let Some(ms) = c.elapsed_ms {
            out.push_str(&format!(" [{ms} ms]"));
        }
    }
    out
}

fn cmd_verify(kind: SuiteKind, n1: usize, n2: usize, seq: &CharSeqSpec, g: &Global) -> Result<Outcome, CliError> {
    let cfg = SuiteConfig { seed: g.seed, trials: g.trials, cohomology: cohomology_config(g), timings: g.timings };
    let mut reports = Vec::new();
    if kind != SuiteKind::General {
        reports.push(suite::run_particular(n1, n2, &cfg)?);
    }
    if kind != SuiteKind::Particular {
        reports.push(suite::run_general(seq, &cfg)?);
    }
    let failed = reports.iter().any(SuiteReport::any_failed);
    let skipped = reports.iter().any(|r| r.checks.iter().any(|c| c.status == Status::Skipped));
    let code = if failed { 1 } else if skipped { 3 } else { 0 };
    let text = reports.iter().map(suite_text).collect::<Vec<_>>().join("\n");
    Ok(Outcome { body: json!({ "passed": !failed && !skipped, "suites": to_value(&reports) }), text, code })
}

fn cmd_sweep(nmax: usize, g: &Global) -> Result<Outcome, CliError> {
    let r = suite::sweep(nmax, &cohomology_config(g))?;
    let mut text = String::from("n  seq        dim  HL1  HL2");
    for c in &r.counts {
        text.push_str(&format!("\np({}) = {}", c.n, c.p));
    }
    for row in &r.rows {
        let show = |v: Option<usize>| v.map_or("-".to_string(), |d| d.to_string());
        let line = format!("{:<2} {:<10} {:<4} {:<4} {}", row.n, row.seq, show(row.dim), show(row.hl1), show(row.hl2));
        text.push_str(&format!("\n{line}"));
        if let Some(s) = &row.skipped {
            text.push_str(&format!(" skipped: {s}"));
        }
    }
    let code = if r.nonvanishing().is_empty() { 0 } else { 1 };
    Ok(Outcome { body: to_value(&r), text, code })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let g = cli.global;
    match cli.command {
        Command::Check { path } => cmd_check(&path),
        Command::Build(b) => cmd_build(*b),
        Command::Series { path } => cmd_series(&path),
        Command::Derivations { path, with_basis } => cmd_derivations(&path, with_basis),
        Command::Charseq { path, samples } => cmd_charseq(&path, samples, g.seed),
        Command::Cohomology { path, degree, with_bases } => cmd_cohomology(&path, degree, with_bases, &g),
        Command::VerifyPaper { suite, n1, n2, seq } => cmd_verify(suite, n1, n2, &seq, &g),
        Command::Sweep { nmax } => cmd_sweep(nmax, &g),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Build(_) => "build",
        Command::Series { .. } => "series",
        Command::Derivations { .. } => "derivations",
        Command::Charseq { .. } => "charseq",
        Command::Cohomology { .. } => "cohomology",
        Command::VerifyPaper { .. } => "verify-paper",
        Command::Sweep { .. } => "sweep",
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let name = command_name(&cli.command);
    let (body, text, code) = match run(cli) {
        Ok(o) => (o.body, o.text, o.code),
        Err(e) => {
            let (kind, msg, code) = match e {
                CliError::Input(m) => ("input", m, 2),
                CliError::Guard(m) => ("guard", m, 3),
            };
            eprintln!("error: {msg}");
            (json!({ "error": { "kind": kind, "message": msg } }), String::new(), code)
        }
    };
    match format {
        Format::Json => {
            let mut envelope = json!({ "schema_version": SCHEMA_VERSION, "command": name });
            if let (Value::Object(env), Value::Object(fields)) = (&mut envelope, body) {
                env.extend(fields);
            }
            emit(&serde_json::to_string_pretty(&envelope).expect("json value"));
        }
        Format::Text if !text.is_empty() => emit(&text),
        Format::Text => {}
    }
    ExitCode::from(code)
}
