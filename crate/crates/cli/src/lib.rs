//! Command-line front end: reads algebra and deformation files, runs the
//! library operations and prints deterministic reports.
//!
//! Exit codes: 0 pass or equivalent, 1 fail or not equivalent, 2 unknown,
//! 3 usage, file or input errors.

pub mod files;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use novdef::algebra::*;
use novdef::deform::*;
use novdef::dim2::*;
use novdef::equiv::*;
use novdef::scalar::parse_expr;
use novdef::{Error, Field, ParamPoly, Ring, TruncSeries, Q, QPoly, Qi, QiPoly};

use files::{AlgebraFile, DeformationFile, FileError, ScalarReader};

#[derive(Parser, Debug)]
#[command(name = "novdef", version, about = "Exact checks and constructions for Novikov deformations")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Values for declared file parameters, e.g. `a=1/2,b=3`.
    #[arg(long, global = true, value_name = "NAME=VALUE,...")]
    params: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Q,
    Qi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    ClosedForm,
    Solver,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an identity on every basis tuple of an algebra file.
    Check {
        #[arg(long)]
        identity: String,
        file: PathBuf,
    },
    /// Classical limit of a deformation file, with TPA and LIE checks.
    Limit { file: PathBuf },
    /// Deform `dot` by `h·circ` for a Novikov-Poisson algebra file.
    DeformNp {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Deform the zero product by `h·op` for a Novikov product.
    DeformCommutator {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value = "circ")]
        op: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether two deformation files are equivalent.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Build the two-dimensional family member with parameters `a`, `b`.
    Family2d {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = FieldArg::Q)]
        field: FieldArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Normal form of a family member, given by `--a/--b` or a deformation file.
    Normalize {
        file: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, requires = "b", conflicts_with = "file")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<String>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = FieldArg::Q)]
        field: FieldArg,
    },
    /// Compatible Novikov products for the Lie bracket of an algebra file.
    SolveCompatible {
        file: PathBuf,
        #[arg(long, default_value = "bracket")]
        op: String,
    },
    /// The two-dimensional transposed Poisson algebras with bracket [e1,e2]=e2.
    Catalog {
        #[arg(long, default_value = "λ", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_enum, default_value_t = FieldArg::Q)]
        field: FieldArg,
        /// Write only this entry (A00, A01 or Alam) as an algebra file.
        #[arg(long, requires = "output")]
        entry: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dimensions of the Novikov and transposed Poisson operads in arity n.
    OperadDims { n: usize },
    /// Gel'fand product `x∘y = x·D(y)` and its commutator.
    Gelfand {
        /// Algebra file with a `dot` op and a derivation map.
        #[arg(required_unless_present_any = ["euler", "dd"])]
        file: Option<PathBuf>,
        /// Name of the derivation in the file's `maps`.
        #[arg(long, default_value = "D")]
        map: String,
        /// Use K[t]/(t^N) with the Euler derivation t·d/dt.
        #[arg(long, conflicts_with_all = ["file", "dd"])]
        euler: Option<usize>,
        /// Use polynomials of degree < N with d/dt; products are exact only
        /// while degrees stay below N.
        #[arg(long, conflicts_with = "file")]
        dd: Option<usize>,
        /// Check this identity on the result.
        #[arg(long)]
        identity: Option<String>,
        /// Restrict the bracket to a span, vectors separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        span: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: FileError },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                Error::NotDerivation(_)
                | Error::NotCommAssoc(_)
                | Error::NotNovikov(_)
                | Error::NotNovikovPoisson(_)
                | Error::NotLie(_)
                | Error::NotTpa(_)
                | Error::NotUnit(_)
                | Error::NotCommutativeBase
                | Error::NotAQuantization(_)
                | Error::PreconditionViolated(_),
            ) => 1,
            _ => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// A finished command: its report and exit status.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn new(text: String, json: Value, passed: bool) -> Self {
        Self {
            text,
            json,
            code: if passed { 0 } else { 1 },
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let written = match cli.format {
                Format::Text => write!(out, "{}", report.text),
                Format::Json => write!(out, "{}", files::to_json_lines(&report.json)),
            };
            if written.is_err() {
                return 3;
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Sizes the global thread pool from `TPA_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("TPA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let params = parse_param_list(cli.params.as_deref())?;
    match &cli.command {
        Command::Check { identity, file } => check(file, identity, &params),
        Command::Limit { file } => limit(file, &params),
        Command::DeformNp { file, order, output } => deform_np(file, *order, output.as_deref(), &params),
        Command::DeformCommutator { file, order, op, output } => {
            deform_commutator(file, *order, op, output.as_deref(), &params)
        }
        Command::Equiv { first, second, method } => equiv(first, second, *method, &params),
        Command::Family2d {
            a,
            b,
            order,
            field,
            output,
        } => match field {
            FieldArg::Q => family2d::<Q>(a, b, *order, output.as_deref()),
            FieldArg::Qi => family2d::<Qi>(a, b, *order, output.as_deref()),
        },
        Command::Normalize {
            file,
            a,
            b,
            order,
            field,
        } => match (file, a, b) {
            (Some(file), None, None) => normalize_file(file, &params),
            (None, Some(a), Some(b)) => match field {
                FieldArg::Q => normalize_pair::<Q>(a, b, *order),
                FieldArg::Qi => normalize_pair::<Qi>(a, b, *order),
            },
            _ => Err(CliError::Usage("normalize needs a deformation file or both --a and --b".into())),
        },
        Command::SolveCompatible { file, op } => solve_compatible(file, op, &params),
        Command::Catalog {
            lambda,
            field,
            entry,
            output,
        } => match field {
            FieldArg::Q => catalog_cmd::<Q>(lambda, entry.as_deref(), output.as_deref()),
            FieldArg::Qi => catalog_cmd::<Qi>(lambda, entry.as_deref(), output.as_deref()),
        },
        Command::OperadDims { n } => operad(*n),
        Command::Gelfand {
            file,
            map,
            euler,
            dd,
            identity,
            span,
            output,
        } => gelfand(file.as_deref(), map, *euler, *dd, identity.as_deref(), span.as_deref(), output.as_deref(), &params),
    }
}

// ---------------------------------------------------------------------------
// Loading

type RawParams = BTreeMap<String, String>;

fn parse_param_list(s: Option<&str>) -> CliResult<RawParams> {
    let mut out = BTreeMap::new();
    for item in s.unwrap_or("").split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--params entry {item:?} is not NAME=VALUE")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> CliResult<()> {
    let text = files::to_json_lines(&serde_json::to_value(value).expect("serializable"));
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn series<F: Field>(s: &str, order: Option<usize>) -> CliResult<TruncSeries<F>> {
    let s = match order {
        Some(n) if !s.contains('@') => format!("{s}@order={n}"),
        _ => s.to_string(),
    };
    let v: TruncSeries<F> = s.parse().map_err(|e: novdef::scalar::ParseScalarError| CliError::Usage(e.to_string()))?;
    Ok(match order {
        Some(n) => v.with_order(n),
        None => v,
    })
}

/// A document that becomes a value over any coefficient ring.
trait Build {
    type Out<R: Ring>;
    fn params(&self) -> &[String];
    fn field(&self) -> &str;
    fn build<R: Ring>(&self, read: &dyn Fn(&str, &str) -> Result<R, FileError>) -> Result<Self::Out<R>, FileError>;
}

impl Build for AlgebraFile {
    type Out<R: Ring> = AlgebraPresentation<R>;
    fn params(&self) -> &[String] {
        &self.params
    }
    fn field(&self) -> &str {
        &self.field
    }
    fn build<R: Ring>(&self, read: &dyn Fn(&str, &str) -> Result<R, FileError>) -> Result<Self::Out<R>, FileError> {
        self.presentation(read)
    }
}

impl Build for DeformationFile {
    type Out<R: Ring> = TruncatedDeformation<R>;
    fn params(&self) -> &[String] {
        &self.base.params
    }
    fn field(&self) -> &str {
        &self.base.field
    }
    fn build<R: Ring>(&self, read: &dyn Fn(&str, &str) -> Result<R, FileError>) -> Result<Self::Out<R>, FileError> {
        self.deformation(read)
    }
}

/// A loaded document over the rationals, the Gaussian rationals, or
/// polynomials in unbound parameters over either.
enum Loaded<B: Build> {
    Q(B::Out<Q>),
    Qi(B::Out<Qi>),
    QPoly(B::Out<QPoly>),
    QiPoly(B::Out<QiPoly>),
}

/// Runs `$body` with `$x` bound to the value over whichever ring it lives in.
macro_rules! any_ring {
    ($v:expr, $x:ident => $body:expr) => {
        match $v {
            Loaded::Q($x) => $body,
            Loaded::Qi($x) => $body,
            Loaded::QPoly($x) => $body,
            Loaded::QiPoly($x) => $body,
        }
    };
}

/// Like `any_ring!`, but requires every parameter to be bound.
macro_rules! any_field {
    ($v:expr, $x:ident => $body:expr) => {
        match $v {
            Loaded::Q($x) => $body,
            Loaded::Qi($x) => $body,
            Loaded::QPoly(_) | Loaded::QiPoly(_) => {
                return Err(CliError::Usage("this command needs every file parameter bound with --params".into()))
            }
        }
    };
}

type ConcreteOrSymbolic<F, B> = Result<<B as Build>::Out<F>, <B as Build>::Out<ParamPoly<F>>>;

fn load_over<F: Field, B: Build>(doc: &B, raw: &RawParams) -> Result<ConcreteOrSymbolic<F, B>, FileError> {
    let mut bound = BTreeMap::new();
    for (k, v) in raw {
        if !doc.params().contains(k) {
            return Err(FileError::Invalid(format!("--params names undeclared parameter {k:?}")));
        }
        let value = parse_expr(v, &F::symbol).map_err(|e| FileError::BadScalar {
            field: format!("--params {k}"),
            message: e.to_string(),
        })?;
        bound.insert(k.clone(), value);
    }
    let reader = ScalarReader::new(doc.params(), &bound);
    if reader.is_concrete() {
        Ok(Ok(doc.build(&|f: &str, s: &str| reader.read_concrete(f, s))?))
    } else {
        Ok(Err(doc.build(&|f: &str, s: &str| reader.read(f, s))?))
    }
}

fn load<B: Build>(doc: &B, raw: &RawParams) -> Result<Loaded<B>, FileError> {
    match doc.field() {
        "Q" => Ok(match load_over::<Q, B>(doc, raw)? {
            Ok(v) => Loaded::Q(v),
            Err(v) => Loaded::QPoly(v),
        }),
        "Qi" => Ok(match load_over::<Qi, B>(doc, raw)? {
            Ok(v) => Loaded::Qi(v),
            Err(v) => Loaded::QiPoly(v),
        }),
        other => Err(FileError::Invalid(format!("unknown field tag {other:?}, expected \"Q\" or \"Qi\""))),
    }
}

fn load_algebra(path: &Path, raw: &RawParams) -> CliResult<Loaded<AlgebraFile>> {
    let with_path = |source| CliError::File {
        path: path.to_path_buf(),
        source,
    };
    let doc = files::parse_algebra_file(&read_bytes(path)?).map_err(with_path)?;
    load(&doc, raw).map_err(with_path)
}

fn load_deformation(path: &Path, raw: &RawParams) -> CliResult<Loaded<DeformationFile>> {
    let with_path = |source| CliError::File {
        path: path.to_path_buf(),
        source,
    };
    let doc = files::parse_deformation_file(&read_bytes(path)?).map_err(with_path)?;
    load(&doc, raw).map_err(with_path)
}

// ---------------------------------------------------------------------------
// Rendering

fn strings<R: Ring>(v: &[R]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn report_json<R: Ring>(r: &IdentityReport<R>) -> Value {
    json!({
        "identity": r.identity,
        "passed": r.passed,
        "counterexample": r.counterexample.as_ref().map(|c| json!({
            "tuple": c.tuple.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "residual": strings(&c.residual),
        })),
    })
}

fn algebra_json<R: Ring>(alg: &AlgebraPresentation<R>) -> Value {
    serde_json::to_value(AlgebraFile::from_presentation(alg)).expect("serializable")
}

fn deformation_json<R: Ring>(d: &TruncatedDeformation<R>) -> Value {
    serde_json::to_value(DeformationFile::from_deformation(d)).expect("serializable")
}

fn map_json<R: Ring>(m: &LinearMap<R>) -> Value {
    let n = m.dim();
    Value::Array((0..n).map(|j| Value::Array(m.column(j).iter().map(|x| json!(x.to_string())).collect())).collect())
}

/// `e_j -> Σ (s_ij) e_i` lines with the common truncation order stated once.
fn series_map_text<R: Ring>(m: &LinearMap<TruncSeries<R>>) -> String {
    let mut order = None;
    let mut text = String::new();
    for j in 0..m.dim() {
        let terms: Vec<String> = m
            .column(j)
            .iter()
            .enumerate()
            .filter(|(_, s)| s.valuation().is_some())
            .map(|(i, s)| {
                order = order.or(s.order());
                let body = s.to_string();
                let body = body.split_once('@').map_or(body.as_str(), |(b, _)| b).to_string();
                if body == "1" {
                    format!("e{}", i + 1)
                } else {
                    format!("({body})*e{}", i + 1)
                }
            })
            .collect();
        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        text.push_str(&format!("e{} -> {rhs}\n", j + 1));
    }
    if let Some(n) = order {
        text.push_str(&format!("(mod h^{n})\n"));
    }
    text
}

fn witness_json<R: Ring>(w: &EquivalenceWitness<R>) -> Value {
    map_json(&w.as_series_map())
}

/// `(a_h, b_h)` when `d` is exactly a member of the two-dimensional family.
fn family_parameters<R: Ring>(d: &TruncatedDeformation<R>) -> Option<(TruncSeries<R>, TruncSeries<R>)> {
    if d.dim() != 2 {
        return None;
    }
    let n = d.order();
    let a = TruncSeries::new(d.mu().iter().map(|op| op.get(1, 0, 1).clone()).collect(), n);
    let b = TruncSeries::new(d.mu().iter().map(|op| op.get(0, 0, 1).clone()).collect(), n);
    let fam = family2d_construct(&a, &b).ok()?;
    (fam.mu() == d.mu()).then_some((a, b))
}

fn family_line<R: Ring>(d: &TruncatedDeformation<R>) -> (String, Value) {
    match family_parameters(d) {
        Some((a, b)) => (
            format!("family member: a_h = {a}, b_h = {b}\n"),
            json!({"a": a.to_string(), "b": b.to_string()}),
        ),
        None => (String::new(), Value::Null),
    }
}

// ---------------------------------------------------------------------------
// Commands

fn parse_identity(name: &str) -> CliResult<Identity> {
    name.parse().map_err(|e: UnknownIdentity| CliError::Usage(e.to_string()))
}

fn check(path: &Path, identity: &str, params: &RawParams) -> CliResult<Report> {
    let id = parse_identity(identity)?;
    let alg = load_algebra(path, params)?;
    any_ring!(alg, a => {
        let r = check_identity(&a, id)?;
        Ok(Report::new(format!("{r}\n"), report_json(&r), r.passed))
    })
}

fn limit_report<R: Ring>(d: &TruncatedDeformation<R>) -> CliResult<(String, Value, bool)> {
    let lim = classical_limit(d)?;
    let text = format!("{}{}\n{}\n", lim.algebra, lim.tpa, lim.lie);
    let json = json!({
        "algebra": algebra_json(&lim.algebra),
        "tpa": report_json(&lim.tpa),
        "lie": report_json(&lim.lie),
    });
    Ok((text, json, lim.passed()))
}

fn limit(path: &Path, params: &RawParams) -> CliResult<Report> {
    let d = load_deformation(path, params)?;
    any_ring!(d, d => {
        let (text, json, passed) = limit_report(&d)?;
        Ok(Report::new(text, json, passed))
    })
}

fn deformation_report<R: Ring>(d: &TruncatedDeformation<R>, output: Option<&Path>) -> CliResult<Report> {
    let nov = check_novikov_deformation(d);
    let (lim_text, lim_json, lim_passed) = limit_report(d)?;
    let (fam_text, fam_json) = family_line(d);
    if let Some(path) = output {
        write_json(path, &DeformationFile::from_deformation(d))?;
    }
    let text = format!("{d}{fam_text}{nov}\n[classical limit]\n{lim_text}");
    let json = json!({
        "deformation": deformation_json(d),
        "family": fam_json,
        "novikov": report_json(&nov),
        "limit": lim_json,
    });
    Ok(Report::new(text, json, nov.passed && lim_passed))
}

fn deform_np(path: &Path, order: usize, output: Option<&Path>, params: &RawParams) -> CliResult<Report> {
    let alg = load_algebra(path, params)?;
    any_ring!(alg, a => deformation_report(&deform_from_np(&a, order)?, output))
}

fn deform_commutator(path: &Path, order: usize, op: &str, output: Option<&Path>, params: &RawParams) -> CliResult<Report> {
    let alg = load_algebra(path, params)?;
    any_ring!(alg, a => deformation_report(&commutator_deform(a.op(op)?, order)?, output))
}

fn family2d<F: Field>(a: &str, b: &str, order: Option<usize>, output: Option<&Path>) -> CliResult<Report> {
    let d = family2d_construct(&series::<F>(a, order)?, &series::<F>(b, order)?)?;
    deformation_report(&d, output)
}

fn verdict_report<F: Field>(method: &str, v: &EquivVerdict<F>) -> Report {
    let (text, json, code) = match v {
        EquivVerdict::Equivalent(w) => (
            format!("equivalent\nwitness:\n{}", series_map_text(&w.as_series_map())),
            json!({"verdict": "equivalent", "witness": witness_json(w)}),
            0,
        ),
        EquivVerdict::NotEquivalent { order, reason } => (
            format!("not equivalent at order {order}: {reason}\n"),
            json!({"verdict": "not-equivalent", "order": order, "reason": reason}),
            1,
        ),
        EquivVerdict::Unknown { reason } => (
            format!("unknown: {reason}\n"),
            json!({"verdict": "unknown", "reason": reason}),
            2,
        ),
    };
    let mut json = json;
    json["method"] = json!(method);
    Report {
        text: format!("method: {method}\n{text}"),
        json,
        code,
    }
}

fn equiv_over<F: Field>(d1: &TruncatedDeformation<F>, d2: &TruncatedDeformation<F>, method: Method) -> CliResult<Report> {
    let pair = family_parameters(d1).zip(family_parameters(d2));
    match (method, pair) {
        (Method::Auto | Method::ClosedForm, Some(((a, b), (a2, b2)))) => {
            Ok(verdict_report("closed-form", &family2d_equiv(&a, &b, &a2, &b2)?))
        }
        (Method::ClosedForm, None) => Err(CliError::Usage(
            "closed-form method needs two members of the two-dimensional family".into(),
        )),
        _ => Ok(verdict_report("solver", &solve_equivalence(d1, d2)?)),
    }
}

fn equiv(first: &Path, second: &Path, method: Method, params: &RawParams) -> CliResult<Report> {
    let d1 = load_deformation(first, params)?;
    let d2 = load_deformation(second, params)?;
    match (d1, d2) {
        (Loaded::Q(x), Loaded::Q(y)) => equiv_over(&x, &y, method),
        (Loaded::Qi(x), Loaded::Qi(y)) => equiv_over(&x, &y, method),
        (Loaded::Q(x), Loaded::Qi(y)) => equiv_over(&x.map(|c| Qi::from(c.clone())), &y, method),
        (Loaded::Qi(x), Loaded::Q(y)) => equiv_over(&x, &y.map(|c| Qi::from(c.clone())), method),
        _ => Err(CliError::Usage("equiv needs every file parameter bound with --params".into())),
    }
}

fn normal_form_report<F: Field>(nf: &NormalForm<F>, prefix: String, mut json: Value) -> Report {
    let text = format!(
        "{prefix}case: {}\ncanonical: a_h = {}, b_h = {}\nepsilon_h = {}\nmu_h = {}\n",
        nf.case, nf.a, nf.b, nf.epsilon, nf.mu
    );
    json["case"] = json!(nf.case.to_string());
    json["a"] = json!(nf.a.to_string());
    json["b"] = json!(nf.b.to_string());
    json["epsilon"] = json!(nf.epsilon.to_string());
    json["mu"] = json!(nf.mu.to_string());
    json["witness"] = witness_json(&nf.witness);
    Report::new(text, json, true)
}

fn normalize_pair<F: Field>(a: &str, b: &str, order: Option<usize>) -> CliResult<Report> {
    let nf = normalize_family(&series::<F>(a, order)?, &series::<F>(b, order)?)?;
    Ok(normal_form_report(&nf, String::new(), json!({})))
}

fn normalize_over<F: Field>(d: &TruncatedDeformation<F>) -> CliResult<Report> {
    let basis = normalize_basis(d)?;
    let nf = normalize_family(&basis.a, &basis.b)?;
    let prefix = format!(
        "basis:\n{}family member: a_h = {}, b_h = {}\n",
        series_map_text(&basis.basis),
        basis.a,
        basis.b
    );
    let json = json!({
        "basis": map_json(&basis.basis),
        "basis_order": basis.order,
        "family": {"a": basis.a.to_string(), "b": basis.b.to_string()},
        "basis_witness": witness_json(&basis.witness),
    });
    Ok(normal_form_report(&nf, prefix, json))
}

fn normalize_file(path: &Path, params: &RawParams) -> CliResult<Report> {
    let d = load_deformation(path, params)?;
    any_field!(d, d => normalize_over(&d))
}

fn solve_compatible_over<F: Field>(bracket: &BilinearOp<F>) -> CliResult<Report> {
    let fam = solve_novikov_compatible(bracket)?;
    let Some(family) = &fam.family else {
        return Ok(Report::new(
            "no compatible product: the linear system is inconsistent\n".into(),
            json!({"family": null}),
            false,
        ));
    };
    let alg = AlgebraPresentation::new(bracket.dim()).with_op("circ", family.clone());
    let mut text = format!("parameters: {}\n{alg}", fam.params.join(", "));
    for c in &fam.obstructions {
        let tuple: Vec<String> = c.tuple.iter().map(|i| format!("e{}", i + 1)).collect();
        text.push_str(&format!("NOV_RIGHTCOMM residual at ({}): {}\n", tuple.join(","), format_vector(&c.residual)));
    }
    if fam.obstructions.is_empty() {
        text.push_str("NOV_RIGHTCOMM holds identically\n");
    }
    let json = json!({
        "params": fam.params,
        "family": algebra_json(&alg),
        "obstructions": fam.obstructions.iter().map(|c| json!({
            "tuple": c.tuple.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "residual": strings(&c.residual),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(text, json, fam.is_novikov()))
}

fn solve_compatible(path: &Path, op: &str, params: &RawParams) -> CliResult<Report> {
    let alg = load_algebra(path, params)?;
    any_field!(alg, a => solve_compatible_over(a.op(op)?))
}

fn catalog_entries<R: Ring>(lambda: R, entry: Option<&str>, output: Option<&Path>) -> CliResult<Report> {
    let entries = catalog(lambda);
    if let (Some(name), Some(path)) = (entry, output) {
        let e = entries
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Usage(format!("unknown catalog entry {name:?}")))?;
        write_json(path, &AlgebraFile::from_presentation(&e.algebra))?;
    }
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    for e in &entries {
        text.push_str(&format!("== {}\n{}", e.name, e.algebra));
        json.insert(e.name.to_string(), algebra_json(&e.algebra));
    }
    Ok(Report::new(text, Value::Object(json), true))
}

fn catalog_cmd<F: Field>(lambda: &str, entry: Option<&str>, output: Option<&Path>) -> CliResult<Report> {
    let p: ParamPoly<F> = lambda.parse().map_err(|e: novdef::scalar::ParseScalarError| CliError::Usage(e.to_string()))?;
    match p.as_constant() {
        Some(c) => catalog_entries(c, entry, output),
        None => catalog_entries(p, entry, output),
    }
}

fn operad(n: usize) -> CliResult<Report> {
    let (nov, tpois) = operad_dims(n)?;
    Ok(Report::new(
        format!("Nov({n})={nov} TPois({n})={tpois}\n"),
        json!({"n": n, "nov": nov, "tpois": tpois}),
        true,
    ))
}

fn parse_span<R: Ring>(s: &str, dim: usize) -> CliResult<Vec<Vec<R>>> {
    s.split(';')
        .map(|v| {
            let coords: Vec<R> = v
                .split(',')
                .map(|x| parse_expr(x.trim(), &R::symbol).map_err(|e| CliError::Usage(e.to_string())))
                .collect::<CliResult<_>>()?;
            if coords.len() != dim {
                return Err(CliError::Usage(format!("span vector {v:?} has {} coordinates, expected {dim}", coords.len())));
            }
            Ok(coords)
        })
        .collect()
}

struct GelfandOptions<'a> {
    identity: Option<Identity>,
    span: Option<&'a str>,
    output: Option<&'a Path>,
}

fn gelfand_report<F: Field>(dot: BilinearOp<F>, d: LinearMap<F>, checked: bool, opts: &GelfandOptions) -> CliResult<Report> {
    let circ = if checked {
        gelfand_construct(&dot, &d)?
    } else {
        gelfand_unchecked(&dot, &d)
    };
    let n = dot.dim();
    let bracket = commutator(&circ);
    let alg = AlgebraPresentation::new(n)
        .with_op("dot", dot)
        .with_op("circ", circ)
        .with_op("bracket", bracket.clone());
    if let Some(path) = opts.output {
        write_json(path, &AlgebraFile::from_presentation(&alg))?;
    }
    let mut text = alg.to_string();
    let mut json = json!({"algebra": algebra_json(&alg)});
    let mut passed = true;
    if let Some(id) = opts.identity {
        let r = check_identity(&alg, id)?;
        text.push_str(&format!("{r}\n"));
        json["check"] = report_json(&r);
        passed &= r.passed;
    }
    if let Some(span) = opts.span {
        let vectors = parse_span::<F>(span, n)?;
        let res = subalgebra_check(&AlgebraPresentation::new(n).with_op("bracket", bracket), &vectors)?;
        match (&res.induced, &res.escape) {
            (Some(induced), _) => {
                text.push_str(&format!("[span] closed\n{induced}"));
                json["span"] = json!({"closed": true, "induced": algebra_json(induced)});
            }
            (None, escape) => {
                let (label, i, j) = escape.clone().expect("escape recorded");
                text.push_str(&format!("[span] not closed: {label}(f{}, f{}) leaves the span\n", i + 1, j + 1));
                json["span"] = json!({"closed": false, "escape": [label, i + 1, j + 1]});
                passed = false;
            }
        }
    }
    Ok(Report::new(text, json, passed))
}

/// An algebra file read together with one of its maps.
struct WithMap<'a> {
    doc: &'a AlgebraFile,
    map: &'a str,
}

impl Build for WithMap<'_> {
    type Out<R: Ring> = (AlgebraPresentation<R>, LinearMap<R>);
    fn params(&self) -> &[String] {
        &self.doc.params
    }
    fn field(&self) -> &str {
        &self.doc.field
    }
    fn build<R: Ring>(&self, read: &dyn Fn(&str, &str) -> Result<R, FileError>) -> Result<Self::Out<R>, FileError> {
        Ok((self.doc.presentation(read)?, self.doc.map(self.map, read)?))
    }
}

#[allow(clippy::too_many_arguments)]
fn gelfand(
    file: Option<&Path>,
    map: &str,
    euler: Option<usize>,
    dd: Option<usize>,
    identity: Option<&str>,
    span: Option<&str>,
    output: Option<&Path>,
    params: &RawParams,
) -> CliResult<Report> {
    let opts = GelfandOptions {
        identity: identity.map(parse_identity).transpose()?,
        span,
        output,
    };
    if let Some(n) = euler {
        return gelfand_report(truncated_poly_dot::<Q>(n), euler_derivation(n), true, &opts);
    }
    if let Some(n) = dd {
        return gelfand_report(truncated_poly_dot::<Q>(n), d_dt(n), false, &opts);
    }
    let path = file.ok_or_else(|| CliError::Usage("gelfand needs a file, --euler or --dd".into()))?;
    let with_path = |source| CliError::File {
        path: path.to_path_buf(),
        source,
    };
    let doc = files::parse_algebra_file(&read_bytes(path)?).map_err(with_path)?;
    let loaded = load(&WithMap { doc: &doc, map }, params).map_err(with_path)?;
    any_field!(loaded, pair => {
        let (alg, d) = pair;
        gelfand_report(alg.op("dot")?.clone(), d, true, &opts)
    })
}
