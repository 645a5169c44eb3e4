//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or invalid
//! input, 3 a resource cap was hit or the archive is unwritable.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytic::{self, Analytic, AnalyticError, EntropyValue, InfoValue};
use crate::archive::{self, RunRecord};
use crate::exactmath::{BigReal, Rational};
use crate::partition::{FactorList, Selector};
use crate::sampler::{self, Caps, Quantity, SampleSpec, SamplerError};
use crate::verify::{self, CheckReport, VerifyConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "subentropy",
    version,
    about = "Average subsystem entropies of random pure states"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Append a run record to this newline-delimited JSON file.
    #[arg(long, global = true)]
    pub archive: Option<PathBuf>,
    /// Decimal digits for analytic values.
    #[arg(long, default_value_t = 30, global = true)]
    pub precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Evaluate a closed-form average.
    Analytic(AnalyticArgs),
    /// Monte Carlo estimate over Haar-random states.
    Mc(McArgs),
    /// Run verification checks.
    Verify(VerifyArgs),
    /// Convergence tables toward thermodynamic limits.
    Sweep(SweepArgs),
    /// Print the claims ledger.
    Ledger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticQuantity {
    Entropy,
    Deficit,
    SymmetricInfo,
    AsymmetricInfo,
    Purity,
    Tangle,
    TangleDeficit,
    ConcurrenceBound,
    MutualInfo,
    MutualInfoBound,
    EntropySumApprox,
    ThermoEntropy,
    ThermoTangle,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyticArgs {
    /// Factor dimensions, e.g. 2x3x5.
    #[arg(long)]
    pub dims: String,
    #[arg(long, value_enum)]
    pub quantity: AnalyticQuantity,
    /// Collection for single-subsystem quantities, e.g. 0,2.
    #[arg(long)]
    pub keep: Option<String>,
    /// First collection for mutual information.
    #[arg(long)]
    pub a: Option<String>,
    /// Second collection for mutual information.
    #[arg(long)]
    pub b: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum McQuantity {
    Entropy,
    Purity,
    Tangle,
    Concurrence,
    Negativity,
    Renyi,
    Tsallis,
    MutualInfo,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[arg(long)]
    pub dims: String,
    #[arg(long, value_enum)]
    pub quantity: McQuantity,
    #[arg(long, default_value = "0")]
    pub keep: String,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// Order for renyi and tsallis.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    DeltaInterval,
    Harmonic,
    Tripartite,
    Mc,
    Slacks,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = CheckName::All)]
    pub check: CheckName,
    #[arg(long, default_value_t = 64)]
    pub m_max: u64,
    /// Largest M in the Δ sweep (defaults to --m-max).
    #[arg(long = "big-m-max")]
    pub big_m_max: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 4)]
    pub na_max: u64,
    #[arg(long, default_value_t = 4)]
    pub nb_max: u64,
    #[arg(long, default_value_t = 64)]
    pub nc_max: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limit {
    Entropy,
    Tangle,
    MutualInfo,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub limit: Limit,
    #[arg(long, default_value_t = 2)]
    pub m: u64,
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
    #[arg(long, default_value_t = 2)]
    pub na: u64,
    #[arg(long, default_value_t = 2)]
    pub nb: u64,
    #[arg(long, default_value_t = 64)]
    pub nc_max: u64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Cap(String),
    Archive(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) | CliError::Archive(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Cap(m) => write!(f, "resource cap: {m}"),
            CliError::Archive(m) => write!(f, "archive: {m}"),
            CliError::CheckFailed(name) => write!(f, "check failed: {name}"),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        if e.is_cap() {
            CliError::Cap(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        usage(e)
    }
}

/// Tabular result plus its JSON payload.
pub struct Output {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub payload: Value,
    /// Extra lines shown after a table.
    pub details: Vec<String>,
    pub oracle: Option<Value>,
    pub z: Option<f64>,
    /// First failing check, if any.
    pub failed: Option<String>,
}

impl Output {
    fn table(columns: Vec<&'static str>, rows: Vec<Vec<String>>, payload: Value) -> Self {
        Output {
            columns,
            rows,
            payload,
            details: Vec::new(),
            oracle: None,
            z: None,
            failed: None,
        }
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let caps = Caps::from_env().map_err(usage)?;
    let digits = cli.precision.clamp(1, crate::exactmath::MAX_DIGITS);
    let output = match &cli.command {
        Command::Analytic(a) => cmd_analytic(a, digits)?,
        Command::Mc(m) => cmd_mc(m, digits, &caps)?,
        Command::Verify(v) => cmd_verify(v, digits, &caps)?,
        Command::Sweep(s) => cmd_sweep(s, digits)?,
        Command::Ledger => cmd_ledger(),
    };
    let config = json!({
        "cli": cli,
        "precision": digits,
        "caps": caps,
    });
    render(cli.format, &config, &output, out).map_err(|e| CliError::Archive(e.to_string()))?;
    if let Some(path) = &cli.archive {
        let mut record = RunRecord::new(config, output.payload.clone());
        record.oracle = output.oracle.clone();
        record.z = output.z;
        archive::archive(&record, path).map_err(|e| CliError::Archive(e.to_string()))?;
    }
    match output.failed {
        Some(name) => Err(CliError::CheckFailed(name)),
        None => Ok(()),
    }
}

fn render(format: Format, config: &Value, o: &Output, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let doc = json!({
                "tool": "subentropy",
                "version": VERSION,
                "config": config,
                "result": o.payload,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("json value")
            )
        }
        Format::Csv => {
            writeln!(out, "# subentropy {VERSION}")?;
            writeln!(out, "# config: {config}")?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&o.columns)?;
            for row in &o.rows {
                w.write_record(row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            out.write_all(&bytes)
        }
        Format::Table => {
            writeln!(out, "# subentropy {VERSION}")?;
            writeln!(out, "# config: {config}")?;
            let mut widths: Vec<usize> = o.columns.iter().map(|c| c.chars().count()).collect();
            for row in &o.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| -> String {
                let parts: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                parts.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(o.columns.clone()))?;
            for row in &o.rows {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
            for d in &o.details {
                writeln!(out, "{d}")?;
            }
            Ok(())
        }
    }
}

fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_dims(s: &str) -> Result<FactorList, CliError> {
    s.parse().map_err(usage)
}

fn parse_sel(f: &FactorList, s: &str) -> Result<Selector, CliError> {
    f.parse_selector(s).map_err(usage)
}

fn small(d: &BigUint) -> Result<u64, CliError> {
    d.to_u64()
        .ok_or_else(|| usage(format!("dimension {d} does not fit in 64 bits")))
}

/// A value row: `(label, exact, decimal, note)`.
struct Value4 {
    label: String,
    exact: Option<Rational>,
    nats: BigReal,
    note: Option<String>,
}

impl Value4 {
    fn entropy(label: &str, v: EntropyValue) -> Self {
        Value4 {
            label: label.to_string(),
            exact: v.exact,
            nats: v.nats,
            note: v
                .approximation
                .map(|a| format!("approximation, slack {} nat", a.slack_nats)),
        }
    }

    fn info(label: &str, v: InfoValue) -> Self {
        Value4 {
            label: label.to_string(),
            exact: v.exact,
            nats: v.nats,
            note: None,
        }
    }

    fn rational(label: &str, r: Rational, digits: u32) -> Self {
        Value4 {
            label: label.to_string(),
            nats: BigReal::from_ratio(&r, digits + 10),
            exact: Some(r),
            note: None,
        }
    }

    fn real(label: &str, nats: BigReal) -> Self {
        Value4 {
            label: label.to_string(),
            exact: None,
            nats,
            note: None,
        }
    }
}

/// Kept and complement dimensions of the single-subsystem argument.
fn bipartite_dims(f: &FactorList, keep: Option<&str>) -> Result<(BigUint, BigUint), CliError> {
    match keep {
        Some(k) => {
            let sel = parse_sel(f, k)?;
            Ok((sel.kept_dim().clone(), sel.complement_dim().clone()))
        }
        None if f.len() == 2 => Ok((f.dims()[0].into(), f.dims()[1].into())),
        None => Err(usage(format!(
            "dims {f} has {} factors; pass --keep to choose a collection",
            f.len()
        ))),
    }
}

fn pair_ab(a: &AnalyticArgs) -> Option<(&str, &str)> {
    Some((a.a.as_deref()?, a.b.as_deref()?))
}

pub fn cmd_analytic(args: &AnalyticArgs, digits: u32) -> Result<Output, CliError> {
    let f = parse_dims(&args.dims)?;
    let an = Analytic::new(digits);
    use AnalyticQuantity as Q;
    let values: Vec<Value4> = match args.quantity {
        Q::Entropy => match (&args.keep, f.len()) {
            (None, 2) => vec![Value4::entropy(
                "entropy",
                an.page_sen_entropy(f.dims()[0], f.dims()[1]),
            )],
            (Some(k), _) => {
                let sel = parse_sel(&f, k)?;
                vec![Value4::entropy(
                    "entropy",
                    an.multipartite_collection_entropy(&f, &sel)?,
                )]
            }
            (None, _) => return Err(usage("entropy needs two factors or --keep")),
        },
        Q::Deficit
        | Q::SymmetricInfo
        | Q::AsymmetricInfo
        | Q::Purity
        | Q::Tangle
        | Q::TangleDeficit
        | Q::ConcurrenceBound => {
            let (na, nb) = bipartite_dims(&f, args.keep.as_deref())?;
            let (na, nb) = (small(&na)?, small(&nb)?);
            match args.quantity {
                Q::Deficit => vec![Value4::info("deficit", an.entropy_deficit(na, nb))],
                Q::SymmetricInfo => vec![Value4::info("symmetric-info", an.symmetric_info(na, nb))],
                Q::AsymmetricInfo => {
                    let v = an.asymmetric_info(na, nb);
                    vec![
                        Value4::info("asymmetric-info-ab", v.ab),
                        Value4::info("asymmetric-info-ba", v.ba),
                        Value4::info("asymmetric-info-mean", v.average),
                    ]
                }
                Q::Purity => vec![Value4::rational(
                    "purity",
                    analytic::avg_purity(na, nb),
                    digits,
                )],
                Q::Tangle => vec![Value4::rational(
                    "tangle",
                    analytic::avg_tangle(na, nb),
                    digits,
                )],
                Q::TangleDeficit => vec![Value4::rational(
                    "tangle-deficit",
                    analytic::tangle_deficit(na, nb),
                    digits,
                )],
                _ => vec![Value4::real(
                    "concurrence-bound",
                    an.concurrence_bound(na, nb),
                )],
            }
        }
        Q::MutualInfo => match pair_ab(args) {
            Some((a, b)) => {
                let (sa, sb) = (parse_sel(&f, a)?, parse_sel(&f, b)?);
                vec![Value4::info(
                    "mutual-info",
                    an.multipartite_avg_mutual_info(&f, &sa, &sb)?,
                )]
            }
            None => {
                let [na, nb, nc] = three(&f)?;
                vec![Value4::info(
                    "mutual-info",
                    an.tripartite_avg_mutual_info(na, nb, nc)?,
                )]
            }
        },
        Q::MutualInfoBound => match pair_ab(args) {
            Some((a, b)) => {
                let (sa, sb) = (parse_sel(&f, a)?, parse_sel(&f, b)?);
                let r = analytic::multipartite_mutual_info_bound(&f, &sa, &sb)?;
                vec![Value4::rational("mutual-info-bound", r, digits)]
            }
            None => {
                let [na, nb, nc] = three(&f)?;
                let r = analytic::tripartite_mutual_info_bound(na, nb, nc)?;
                vec![Value4::rational("mutual-info-bound", r, digits)]
            }
        },
        Q::EntropySumApprox => {
            let [na, nb, nc] = three(&f)?;
            vec![Value4::entropy(
                "entropy-sum-approx",
                an.tripartite_entropy_sum_approx(na, nb, nc),
            )]
        }
        Q::ThermoEntropy | Q::ThermoTangle => {
            let [m] = f.dims() else {
                return Err(usage(
                    "thermodynamic limits take a single dimension, e.g. --dims 3",
                ));
            };
            if args.quantity == Q::ThermoEntropy {
                vec![Value4::entropy(
                    "thermo-entropy",
                    an.thermo_limit_entropy(*m),
                )]
            } else {
                vec![Value4::rational(
                    "thermo-tangle",
                    analytic::thermo_limit_tangle(*m),
                    digits,
                )]
            }
        }
    };
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for v in values {
        let exact = v.exact.as_ref().map(rational_str);
        let decimal = v.nats.to_decimal(digits);
        rows.push(vec![
            f.to_string(),
            v.label.clone(),
            exact.clone().unwrap_or_default(),
            decimal.clone(),
            v.note.clone().unwrap_or_default(),
        ]);
        items.push(json!({
            "dims": f.to_string(),
            "quantity": v.label,
            "exact": exact,
            "decimal": decimal,
            "approximation": v.note,
        }));
    }
    Ok(Output::table(
        vec!["dims", "quantity", "exact", "decimal", "note"],
        rows,
        json!({ "values": items }),
    ))
}

fn three(f: &FactorList) -> Result<[u64; 3], CliError> {
    match f.dims() {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => Err(usage(format!(
            "dims {f} must have exactly three factors (A x B x C), or pass --a and --b"
        ))),
    }
}

pub fn mc_spec(args: &McArgs) -> Result<SampleSpec, CliError> {
    let factors = parse_dims(&args.dims)?;
    let keep = parse_sel(&factors, &args.keep)?.indices().to_vec();
    let q = || args.q.ok_or_else(|| usage("renyi and tsallis need --q"));
    use McQuantity as M;
    let quantity = match args.quantity {
        M::Entropy => Quantity::Entropy { keep },
        M::Purity => Quantity::Purity { keep },
        M::Tangle => Quantity::Tangle { keep },
        M::Concurrence => Quantity::Concurrence { keep },
        M::Negativity => Quantity::Negativity { keep },
        M::Renyi => Quantity::Renyi { keep, q: q()? },
        M::Tsallis => Quantity::Tsallis { keep, q: q()? },
        M::MutualInfo => {
            let (Some(a), Some(b)) = (&args.a, &args.b) else {
                return Err(usage("mutual-info needs --a and --b"));
            };
            Quantity::MutualInfo {
                a: parse_sel(&factors, a)?.indices().to_vec(),
                b: parse_sel(&factors, b)?.indices().to_vec(),
            }
        }
    };
    Ok(SampleSpec {
        factors,
        quantity,
        samples: args.samples,
        seed: args.seed,
    })
}

pub fn cmd_mc(args: &McArgs, digits: u32, caps: &Caps) -> Result<Output, CliError> {
    let spec = mc_spec(args)?;
    let est = sampler::estimate(&spec, args.workers, caps)?;
    let oracle = sampler::oracle_for(&spec, &Analytic::new(digits))?;
    let mut row = vec![
        est.dims.clone(),
        est.quantity.clone(),
        format!("{:.12}", est.mean),
        format!("{:.3e}", est.stderr),
        est.samples.to_string(),
        est.seed.to_string(),
    ];
    let mut payload = json!({ "estimate": est });
    let (mut oracle_json, mut z) = (None, None);
    match &oracle {
        Some(o) => {
            let value = o.value.to_f64();
            let exact = o.exact.as_ref().map(rational_str);
            let kind = if o.upper_bound {
                "upper-bound"
            } else {
                "exact"
            };
            let oj = json!({
                "kind": kind,
                "exact": exact,
                "decimal": o.value.to_decimal(digits),
            });
            row.push(exact.unwrap_or_else(|| o.value.to_decimal(digits)));
            if o.upper_bound {
                row.push(format!(
                    "mean <= bound: {}",
                    est.mean <= value + verify::Z_MAX * est.stderr
                ));
            } else {
                let zv = sampler::z_score(&est, value);
                row.push(format!("{zv:.3}"));
                z = Some(zv);
            }
            payload["oracle"] = oj.clone();
            payload["z"] = json!(z);
            oracle_json = Some(oj);
        }
        None => {
            row.push(String::new());
            row.push(String::new());
        }
    }
    let mut out = Output::table(
        vec![
            "dims", "quantity", "mean", "stderr", "samples", "seed", "oracle", "z",
        ],
        vec![row],
        payload,
    );
    out.oracle = oracle_json;
    out.z = z;
    Ok(out)
}

pub fn cmd_verify(args: &VerifyArgs, digits: u32, caps: &Caps) -> Result<Output, CliError> {
    let cfg = VerifyConfig {
        m_max: args.m_max,
        big_m_max: args.big_m_max.unwrap_or(args.m_max),
        n_max: args.n_max,
        na_max: args.na_max,
        nb_max: args.nb_max,
        nc_max: args.nc_max,
        digits,
        seed: args.seed,
        workers: args.workers,
    };
    let names: Vec<&str> = match args.check {
        CheckName::All => verify::CHECKS.to_vec(),
        c => vec![check_str(c)],
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for name in names {
        let r = verify::run_named(name, &cfg, caps)?.expect("known check name");
        reports.push(r);
    }
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                if r.passed { "pass" } else { "fail" }.to_string(),
                r.points.to_string(),
                format!("{:.6e}", r.worst_margin),
                r.worst_point.clone(),
                r.failure_count.to_string(),
            ]
        })
        .collect();
    let mut out = Output::table(
        vec![
            "check",
            "status",
            "points",
            "worst_margin",
            "worst_point",
            "failures",
        ],
        rows,
        json!({ "verify_config": cfg, "reports": reports }),
    );
    out.details = reports
        .iter()
        .flat_map(|r| {
            r.to_string()
                .lines()
                .map(|l| format!("# {l}"))
                .collect::<Vec<_>>()
        })
        .collect();
    out.failed = reports.iter().find(|r| !r.passed).map(|r| r.name.clone());
    Ok(out)
}

fn check_str(c: CheckName) -> &'static str {
    match c {
        CheckName::DeltaInterval => "delta-interval",
        CheckName::Harmonic => "harmonic",
        CheckName::Tripartite => "tripartite",
        CheckName::Mc => "mc",
        CheckName::Slacks => "slacks",
        CheckName::All => "all",
    }
}

pub fn cmd_sweep(args: &SweepArgs, digits: u32) -> Result<Output, CliError> {
    let an = Analytic::new(digits);
    let dec = |r: &Rational| BigReal::from_ratio(r, digits + 10).to_decimal(digits);
    let mut rows = Vec::new();
    let columns = match args.limit {
        Limit::Entropy | Limit::Tangle => {
            if args.m == 0 || args.k_max > 40 {
                return Err(usage("need m >= 1 and k-max <= 40"));
            }
            let m = args.m;
            for k in 0..=args.k_max {
                let big_m = m << k;
                if args.limit == Limit::Entropy {
                    let s = an.page_sen_entropy(m, big_m);
                    let deficit = an.symmetric_info(m, big_m).nats;
                    rows.push(vec![
                        k.to_string(),
                        big_m.to_string(),
                        s.nats.to_decimal(digits),
                        deficit.to_decimal(digits),
                        dec(&Rational::new(m.into(), (2 * big_m).into())),
                    ]);
                } else {
                    let t = analytic::avg_tangle(m, big_m);
                    rows.push(vec![
                        k.to_string(),
                        big_m.to_string(),
                        dec(&t),
                        dec(&analytic::tangle_deficit(m, big_m)),
                        dec(&Rational::new(2.into(), big_m.into())),
                    ]);
                }
            }
            if args.limit == Limit::Entropy {
                vec!["k", "M", "entropy", "ln_m_minus_entropy", "bound_m_over_2M"]
            } else {
                vec!["k", "M", "tangle", "limit_minus_tangle", "bound_2_over_M"]
            }
        }
        Limit::MutualInfo => {
            let (na, nb) = (args.na, args.nb);
            if na == 0 || nb == 0 {
                return Err(usage("need na, nb >= 1"));
            }
            for nc in na * nb..=args.nc_max {
                let i = an.tripartite_avg_mutual_info(na, nb, nc)?;
                let bound = analytic::tripartite_mutual_info_bound(na, nb, nc)?;
                rows.push(vec![nc.to_string(), i.nats.to_decimal(digits), dec(&bound)]);
            }
            vec!["nC", "mutual_info", "bound"]
        }
    };
    let payload = json!({
        "columns": columns,
        "rows": rows,
    });
    Ok(Output::table(columns, rows, payload))
}

pub fn cmd_ledger() -> Output {
    let claims = archive::claims_ledger();
    let rows = claims
        .iter()
        .map(|c| {
            vec![
                c.claim.to_string(),
                c.module.to_string(),
                c.operation.to_string(),
                c.command.to_string(),
            ]
        })
        .collect();
    Output::table(
        vec!["claim", "module", "operation", "command"],
        rows,
        json!({ "claims": claims }),
    )
}
