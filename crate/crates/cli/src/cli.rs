//! Argument parsing and subcommands.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use commvar_core::census::{CountMethod, DEFAULT_BUDGET};
use commvar_core::certify::{
    bounds_ledger, certify, certify_algebra, certify_component_dim, certify_gamma, formula_dims, verify, Certificate,
    Verdict, DEFAULT_SEARCH_BUDGET,
};
use commvar_core::geomdim::{commuting_tangent_dim, nilpotent_commuting_tangent_dim};
use commvar_core::nilcore::{algebra_closure, is_nilpotent, regular_nilpotent, simultaneous_centralizer};
use commvar_core::witnesses::{parabolic_nilradical, sample_regular_tuple};
use commvar_core::{with_field, AnyMat, DynField, Error, FieldSpec, MatTuple};
use serde_json::{json, Value};

use crate::census::{count, growth_probe, thread_count, write_csv, write_growth_csv};
use crate::format::{
    certificate_json, matrix_json, parse_certificate, parse_tuple, to_text, tuple_json, FieldJson, FormatError,
    MatBody, Tuple, FORMAT_VERSION,
};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    NotFound = 2,
    VerifyFailed = 3,
    BudgetExceeded = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "commvar", version, about = "Exact computations on commuting varieties of nilpotent matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// PRNG seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "fp:2147483647", value_parser = parse_field)]
    pub field: FieldSpec,
    /// Compute over the rationals (overrides --field).
    #[arg(long, global = true)]
    pub exact: bool,
    /// Search attempts for `certify`, enumeration cap for `count`.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Echo the parsed run configuration on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertMethod {
    Auto,
    Component,
    Algebra,
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CensusMethod {
    Pruned,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form dimensions for (n, r).
    Dims { n: usize, r: usize },
    /// Known bounds on the least n with a reducible variety.
    Bounds,
    /// Search for a reducibility certificate of C_r(N_n).
    Certify {
        n: usize,
        r: usize,
        #[arg(long, value_enum, default_value_t = CertMethod::Auto)]
        method: CertMethod,
    },
    /// Re-verify a certificate file (`-` for stdin).
    Verify { path: String },
    /// Exact point count of C_r(N_n) over F_q as CSV.
    Count {
        n: usize,
        r: usize,
        q: u64,
        #[arg(long, value_enum, default_value_t = CensusMethod::Pruned)]
        method: CensusMethod,
    },
    /// Point counts for several q with log_q of each count.
    Growth {
        n: usize,
        r: usize,
        #[arg(value_delimiter = ',', required = true)]
        qs: Vec<u64>,
    },
    /// A seeded commuting nilpotent tuple on the regular component.
    Sample { n: usize, r: usize },
    /// The regular nilpotent Jordan block.
    Regular { n: usize },
    /// The basis of the two-block parabolic nilradical u_P as a tuple.
    Nilradical { n: usize },
    /// Simultaneous centralizer of a matrix or tuple file.
    Centralizer { path: String },
    /// Dimension of the non-unital algebra generated by a tuple file.
    AlgebraDim { path: String },
    /// Tangent space dimensions of the commuting variety at a tuple file.
    Tangent { path: String },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse::<FieldSpec>().map_err(|e| e.to_string())
}

/// A failed command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            exit: Exit::Usage,
            message: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::BudgetExceeded { .. } => Exit::BudgetExceeded,
            _ => Exit::Usage,
        };
        Self {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(e) => e.into(),
            e => Failure::usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// What a successful command produced.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub exit: Exit,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, exit: Exit::Ok }
    }
}

type CmdResult = Result<Output, Failure>;

impl Cli {
    pub fn field_spec(&self) -> FieldSpec {
        if self.exact {
            FieldSpec::Rationals
        } else {
            self.field
        }
    }

    /// Runs the subcommand and returns its output without writing it.
    pub fn execute(&self) -> CmdResult {
        let field = self.field_spec();
        match &self.command {
            Command::Dims { n, r } => cmd_dims(*n, *r),
            Command::Bounds => Ok(Output::ok(to_text(&bounds_json()))),
            Command::Certify { n, r, method } => {
                let budget = match self.budget {
                    None => DEFAULT_SEARCH_BUDGET,
                    Some(b) => u64::try_from(b).map_err(|_| Failure::usage("budget too large"))?,
                };
                cmd_certify(*n, *r, *method, field, self.seed, budget)
            }
            Command::Verify { path } => cmd_verify(&read_input(path)?),
            Command::Count { n, r, q, method } => {
                let method = match method {
                    CensusMethod::Pruned => CountMethod::CentralizerPruned,
                    CensusMethod::Full => CountMethod::FullEnumeration,
                };
                if *r == 0 {
                    return Err(Failure::usage("r must be at least 1"));
                }
                let c = count(*n, *r, *q, method, self.budget.unwrap_or(DEFAULT_BUDGET), thread_count())?;
                let mut buf = Vec::new();
                write_csv(&mut buf, &[c])?;
                Ok(Output::ok(String::from_utf8(buf).expect("utf-8 csv")))
            }
            Command::Growth { n, r, qs } => {
                if *r == 0 {
                    return Err(Failure::usage("r must be at least 1"));
                }
                let rows = growth_probe(*n, *r, qs, self.budget.unwrap_or(DEFAULT_BUDGET), thread_count())?;
                let mut buf = Vec::new();
                write_growth_csv(&mut buf, &rows)?;
                Ok(Output::ok(String::from_utf8(buf).expect("utf-8 csv")))
            }
            Command::Sample { n, r } => cmd_sample(*n, *r, field, self.seed),
            Command::Regular { n } => {
                if *n == 0 {
                    return Err(Failure::usage("n must be at least 1"));
                }
                let m = with_field!(field, |f| DynField::wrap(regular_nilpotent(&f, *n)));
                Ok(Output::ok(to_text(&matrix_json(&m))))
            }
            Command::Nilradical { n } => {
                let mats = with_field!(field, |f| {
                    let (_, basis) = parabolic_nilradical(*n, &f)?;
                    basis.into_iter().map(DynField::wrap).collect::<Vec<AnyMat>>()
                });
                Ok(Output::ok(to_text(&tuple_json(field, &mats))))
            }
            Command::Centralizer { path } => cmd_centralizer(&parse_tuple(&read_input(path)?)?),
            Command::AlgebraDim { path } => cmd_algebra_dim(&parse_tuple(&read_input(path)?)?),
            Command::Tangent { path } => cmd_tangent(&parse_tuple(&read_input(path)?)?),
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn cmd_dims(n: usize, r: usize) -> CmdResult {
    if n < 1 || r < 1 {
        return Err(Failure::usage("n and r must be at least 1"));
    }
    let d = formula_dims(n, r);
    let v = json!({
        "format_version": FORMAT_VERSION,
        "n": d.n,
        "r": d.r,
        "dim_N_component": d.dim_n_component,
        "dim_G_component": d.dim_g_component,
        "dim_uP": d.dim_u_p,
        "dim_VP": d.dim_v_p,
        "lower_bound_nilpotent": d.lower_bound_nilpotent,
        "lower_bound_general": d.lower_bound_general,
    });
    Ok(Output::ok(to_text(&v)))
}

fn bounds_json() -> Value {
    let rows: Vec<Value> = bounds_ledger()
        .into_iter()
        .map(|b| json!({"r": b.r, "quantity": b.quantity, "lower": b.lower, "upper": b.upper}))
        .collect();
    json!({"format_version": FORMAT_VERSION, "rows": rows})
}

fn verdict_exit(c: &Certificate) -> Exit {
    match c.verdict {
        Verdict::Reducible => Exit::Ok,
        Verdict::NotFound | Verdict::Unknown => Exit::NotFound,
    }
}

fn cmd_certify(n: usize, r: usize, method: CertMethod, field: FieldSpec, seed: u64, budget: u64) -> CmdResult {
    let cert = match method {
        CertMethod::Auto => certify(n, r, field, seed, budget)?,
        CertMethod::Component => certify_component_dim(n, r, field, seed)?,
        CertMethod::Algebra => certify_algebra(n, r, field, seed, budget)?,
        CertMethod::Gamma => {
            if r != 3 || n == 0 || !n.is_multiple_of(4) {
                return Err(Failure::usage("the gamma method needs r = 3 and n = 4s"));
            }
            certify_gamma(n / 4, field, seed)?
        }
    };
    Ok(Output {
        text: to_text(&certificate_json(&cert)),
        exit: verdict_exit(&cert),
    })
}

/// Exit 0 iff the certificate re-verifies, 3 if it does not, 1 if the text
/// does not parse.
pub fn cmd_verify(text: &str) -> CmdResult {
    let cert = parse_certificate(text).map_err(|e| Failure::usage(format!("cannot parse certificate: {e}")))?;
    match verify(&cert) {
        Ok(()) => {
            let v = json!({
                "format_version": FORMAT_VERSION,
                "verified": true,
                "kind": cert.kind.name(),
                "quantity": cert.quantity,
                "threshold": cert.threshold,
                "verdict": cert.verdict.name(),
            });
            Ok(Output::ok(to_text(&v)))
        }
        Err(e) => Err(Failure {
            exit: Exit::VerifyFailed,
            message: e.to_string(),
        }),
    }
}

fn cmd_sample(n: usize, r: usize, field: FieldSpec, seed: u64) -> CmdResult {
    let mats = with_field!(field, |f| {
        sample_regular_tuple(n, r, &f, seed)?
            .into_mats()
            .into_iter()
            .map(DynField::wrap)
            .collect::<Vec<AnyMat>>()
    });
    let mut v = tuple_json(field, &mats);
    v["seed"] = json!(seed);
    Ok(Output::ok(to_text(&v)))
}

fn typed<F: DynField>(_field: &F, t: &Tuple) -> Result<MatTuple<F>, Failure> {
    let mats = t
        .mats
        .iter()
        .map(|m| F::unwrap(m).cloned().expect("parsed over the document field"))
        .collect();
    Ok(MatTuple::new(mats)?)
}

fn report(t: &Tuple, extra: Value) -> Value {
    let mut v = json!({
        "format_version": FORMAT_VERSION,
        "field": FieldJson::from(t.field),
        "n": t.n(),
        "r": t.mats.len(),
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

fn bodies(mats: Vec<AnyMat>) -> Vec<MatBody> {
    mats.iter().map(MatBody::from_mat).collect()
}

fn cmd_centralizer(t: &Tuple) -> CmdResult {
    let (dim, basis) = with_field!(t.field, |f| {
        let space = simultaneous_centralizer(&typed(&f, t)?);
        (space.dim, space.basis.into_iter().map(DynField::wrap).collect::<Vec<AnyMat>>())
    });
    let v = report(t, json!({"dim": dim, "basis": bodies(basis)}));
    Ok(Output::ok(to_text(&v)))
}

fn cmd_algebra_dim(t: &Tuple) -> CmdResult {
    let (dim, generations, basis) = with_field!(t.field, |f| {
        let a = algebra_closure(&typed(&f, t)?);
        (a.dim, a.generations, a.basis.into_iter().map(DynField::wrap).collect::<Vec<AnyMat>>())
    });
    let v = report(t, json!({"dim": dim, "generations": generations, "basis": bodies(basis)}));
    Ok(Output::ok(to_text(&v)))
}

fn cmd_tangent(t: &Tuple) -> CmdResult {
    let (full, nil) = with_field!(t.field, |f| {
        let tt = typed(&f, t)?;
        let full = commuting_tangent_dim(&tt)?;
        let nil = if tt.mats().iter().all(is_nilpotent) {
            nilpotent_commuting_tangent_dim(&tt).ok()
        } else {
            None
        };
        (full, nil)
    });
    let v = report(
        t,
        json!({"commuting_tangent_dim": full, "nilpotent_commuting_tangent_dim": nil}),
    );
    Ok(Output::ok(to_text(&v)))
}

/// Parses `args`, runs the command, writes its output and returns the exit
/// code. Errors go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Usage.code() } else { Exit::Ok.code() };
        }
    };
    if cli.verbose {
        eprintln!("{:?} field={} seed={} budget={:?}", cli.command, cli.field_spec(), cli.seed, cli.budget);
    }
    let start = Instant::now();
    let result = cli.execute();
    // Timing stays off stdout so output files are reproducible byte for byte.
    eprintln!("elapsed_ms={}", start.elapsed().as_millis());
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(out.text.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return Exit::Usage.code();
            }
            out.exit.code()
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.exit.code()
        }
    }
}
