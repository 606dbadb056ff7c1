//! Command implementations behind the `golden-susy` binary.
//!
//! Each `cmd_*` function renders its table or report to a string and picks an
//! exit code, so the binary only parses arguments and prints.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use golden_susy::coherent::{reference_states, super_coherent, Cutoff, Family};
use golden_susy::entangle::{
    beta_limit, coherent_concurrence_closed, concurrence_gram, entropy_from_concurrence, reduce_fermion, von_neumann,
    CoherentKind,
};
use golden_susy::fock::{spectrum_closed_form, SpectrumKind, SpectrumTable};
use golden_susy::golden::{fib_divisor, phi_pow};
use golden_susy::susy::{binet, eigen_residual, super_fib_binet, super_number_state, BlochPoint};
use golden_susy::verify::{run_suite, Fault, VerifyConfig, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] golden_susy::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k_list: Vec<u32>,
    pub n_max: usize,
    pub cutoff: Cutoff,
    pub hbar_omega: f64,
    pub tol: f64,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k_list: vec![0, 1, 2, 3, 4, 5],
            n_max: 5,
            cutoff: Cutoff::Adaptive,
            hbar_omega: 1.0,
            tol: DEFAULT_TOL,
            format: OutputFormat::Csv,
            seed: 2024,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if let Cutoff::Fixed(d) = self.cutoff {
            if d < 2 {
                return Err(CliError::Config(format!("dim must be at least 2, got {d}")));
            }
        }
        if !self.hbar_omega.is_finite() {
            return Err(CliError::Config("hbar-omega must be finite".into()));
        }
        if self.k_list.is_empty() {
            return Err(CliError::Config("at least one k is required".into()));
        }
        Ok(())
    }
}

/// Parses `--dim`: a positive integer or `adaptive`.
pub fn parse_cutoff(s: &str) -> Result<Cutoff, String> {
    if s.eq_ignore_ascii_case("adaptive") {
        return Ok(Cutoff::Adaptive);
    }
    s.parse::<usize>().map(Cutoff::Fixed).map_err(|_| format!("dim must be an integer or 'adaptive', got {s:?}"))
}

/// Parses a spectrum kind name.
pub fn parse_kind(s: &str) -> Result<SpectrumKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "bosonic" => Ok(SpectrumKind::Bosonic),
        "fermionic" => Ok(SpectrumKind::Fermionic),
        "susy" => Ok(SpectrumKind::Susy),
        _ => Err(format!("unknown spectrum kind {s:?}")),
    }
}

/// One output value. Integers stay integers; floats carry 17 significant
/// digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Str(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Str(x)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(x: $t) -> Self {
                Cell::Int(BigInt::from(x))
            }
        }
    )*};
}
int_cell!(u32, u64, usize, i32, i64, BigInt);

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

/// `{:.16e}` rendering, e.g. 8.9442719099991586e-1.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.16e}", x + 0.0)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => f.write_str(&format_float(*x)),
            Cell::Str(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Null => Ok(()),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        let number = |s: String| s.parse::<Number>().map(Value::Number).unwrap_or(Value::Null);
        match self {
            Cell::Int(i) => number(i.to_string()),
            Cell::Float(x) if x.is_finite() => number(format_float(*x)),
            Cell::Float(_) | Cell::Null => Value::Null,
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

pub type Record = Vec<(&'static str, Cell)>;

fn record_json(r: &Record) -> Value {
    let mut m = Map::new();
    for (k, v) in r {
        m.insert((*k).to_string(), v.to_json());
    }
    Value::Object(m)
}

/// Rows sharing one fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| record_json(&self.columns.iter().copied().zip(row.iter().cloned()).collect()))
                .collect(),
        )
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => Ok(serde_json::to_string_pretty(&self.to_json_value())? + "\n"),
        }
    }
}

/// Rendered output, an exit code and an optional diagnostic for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: None, code: EXIT_OK }
    }
}

/// Energy levels with the exact integer in units of ħω/2 and the
/// table-free closed form.
pub fn cmd_spectrum(cfg: &RunConfig, kind: SpectrumKind) -> Result<CmdOutput, CliError> {
    cfg.validate()?;
    let mut t = Table::new(&["k", "n", "kind", "half_quanta", "energy", "closed_form"]);
    for &k in &cfg.k_list {
        let table = SpectrumTable::new(k, cfg.n_max, cfg.hbar_omega, kind).map_err(|e| match e {
            golden_susy::Error::InvalidLevel(_) => {
                CliError::Config(format!("{} spectrum needs odd k, got k = {k}", kind.as_str()))
            }
            e => e.into(),
        })?;
        for n in 0..=cfg.n_max {
            let half = 0.5 * cfg.hbar_omega;
            let closed = match kind {
                SpectrumKind::Bosonic => spectrum_closed_form(k, n, cfg.hbar_omega),
                SpectrumKind::Fermionic => half * (binet(k, n as f64 + 1.0) - binet(k, n as f64)),
                SpectrumKind::Susy => half * binet(k, n as f64),
            };
            t.push(vec![
                k.into(),
                n.into(),
                kind.as_str().into(),
                table.half_quanta[n].clone().into(),
                table.levels[n].into(),
                closed.into(),
            ]);
        }
    }
    Ok(CmdOutput::ok(t.render(cfg.format)?))
}

/// Which super-coherent family a concurrence curve follows.
pub fn parse_coherent_kind(s: &str) -> Result<CoherentKind, String> {
    match s {
        "L" | "l" => Ok(CoherentKind::L),
        "B" | "b" => Ok(CoherentKind::B),
        _ => Err(format!("family must be L or B, got {s:?}")),
    }
}

fn grid(max: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![0.0];
    }
    (0..steps).map(|i| max * i as f64 / (steps - 1) as f64).collect()
}

/// Closed-form concurrence of the L+ or B+ super-coherent states against the
/// Gram determinant of the constructed state.
pub fn cmd_concurrence(
    cfg: &RunConfig,
    kind: CoherentKind,
    beta_max: f64,
    steps: usize,
) -> Result<CmdOutput, CliError> {
    cfg.validate()?;
    let (family, label) = match kind {
        CoherentKind::L => (Family::LPlus, "L"),
        CoherentKind::B => (Family::BPlus, "B"),
    };
    let mut t = Table::new(&["k", "family", "beta", "c_closed", "c_gram", "abs_delta"]);
    let mut worst: Option<(f64, usize)> = None;
    for &k in &cfg.k_list {
        if !(beta_max >= 0.0 && beta_max <= beta_limit(k)) {
            return Err(CliError::Config(format!("beta-max {beta_max} outside [0, {}] for k = {k}", beta_limit(k))));
        }
        for beta in grid(beta_max, steps) {
            let closed = coherent_concurrence_closed(k, beta, kind)?;
            let st = super_coherent(family, k, Complex64::new(beta, 0.0), cfg.cutoff)?.state;
            let gram = concurrence_gram(&st.psi0, &st.psi1);
            let delta = (closed - gram).abs();
            if worst.is_none_or(|(w, _)| delta > w) {
                worst = Some((delta, t.rows.len()));
            }
            t.push(vec![k.into(), label.into(), beta.into(), closed.into(), gram.into(), delta.into()]);
        }
    }
    let mut out = CmdOutput::ok(t.render(cfg.format)?);
    if let Some((w, row)) = worst {
        if w > cfg.tol {
            let cells: Vec<String> = t.rows[row].iter().map(|c| c.to_string()).collect();
            out.code = EXIT_TOLERANCE;
            out.stderr = Some(format!(
                "tolerance breach: |delta| = {} > tol = {}; worst row: {}",
                format_float(w),
                format_float(cfg.tol),
                cells.join(",")
            ));
        }
    }
    Ok(out)
}

/// Runs the identity suite. Exit 0 iff every check passes.
pub fn cmd_verify(cfg: &RunConfig, fault: Option<Fault>) -> Result<CmdOutput, CliError> {
    cfg.validate()?;
    let report = run_suite(&VerifyConfig { tol: cfg.tol, seed: cfg.seed, fault });
    let mut t = Table::new(&["name", "passed", "exact", "max_residual", "threshold", "safe_rows"]);
    for c in &report.checks {
        t.push(vec![
            c.name.into(),
            c.passed.into(),
            c.exact.into(),
            c.max_residual.into(),
            c.threshold.into(),
            c.safe_rows.into(),
        ]);
    }
    let failures = report.failures();
    let stdout = match cfg.format {
        OutputFormat::Csv => t.to_csv()?,
        OutputFormat::Json => {
            let mut m = Map::new();
            m.insert("tol".into(), Cell::Float(cfg.tol).to_json());
            m.insert("seed".into(), Cell::from(cfg.seed).to_json());
            m.insert("all_passed".into(), Value::Bool(failures.is_empty()));
            m.insert("failures".into(), Value::Array(failures.iter().map(|f| Value::String(f.to_string())).collect()));
            m.insert("checks".into(), t.to_json_value());
            serde_json::to_string_pretty(&Value::Object(m))? + "\n"
        }
    };
    let mut out = CmdOutput::ok(stdout);
    if !failures.is_empty() {
        out.code = EXIT_IDENTITY_FAILURE;
        out.stderr = Some(format!("failing identities: {}", failures.join(", ")));
    }
    Ok(out)
}

/// Super-number state report: eigenvalue F_n^(k), residual, concurrence,
/// entropy and stereographic coordinate.
pub fn cmd_bloch(cfg: &RunConfig, n: usize, theta: f64, phi: f64) -> Result<CmdOutput, CliError> {
    cfg.validate()?;
    let &[k] = cfg.k_list.as_slice() else {
        return Err(CliError::Config("bloch takes exactly one k".into()));
    };
    let d = match cfg.cutoff {
        Cutoff::Fixed(d) => d,
        Cutoff::Adaptive => n + 2,
    };
    if n == 0 || n >= d {
        return Err(CliError::Config(format!("n must satisfy 1 <= n <= dim - 1 (n = {n}, dim = {d})")));
    }
    let point = BlochPoint::new(theta, phi).map_err(|e| CliError::Config(e.to_string()))?;
    let state = super_number_state(n, k, point, d)?;
    let fk = fib_divisor(k, n as u64)?;
    let fop = super_fib_binet(k, d)?;
    let ev = num_traits::ToPrimitive::to_f64(&fk).unwrap_or(f64::INFINITY);
    let residual = eigen_residual(&fop, &state, Complex64::new(ev, 0.0));
    let c = concurrence_gram(&state.psi0, &state.psi1);
    let e = von_neumann(&reduce_fermion(&state)?)?;
    let xi = point.stereographic();
    let reference = if n == 1 {
        let refs = reference_states(k, d)?;
        ["L+", "L-"]
            .into_iter()
            .zip(refs.iter())
            .find(|(_, r)| (1.0 - r.inner(&state).norm()).abs() <= cfg.tol)
            .map(|(name, _)| name)
    } else {
        None
    };
    let rec: Record = vec![
        ("n", n.into()),
        ("k", k.into()),
        ("dim", d.into()),
        ("theta", point.theta.into()),
        ("phi", point.phi.into()),
        ("eigenvalue", BigInt::from(fk).into()),
        ("eigen_residual", residual.into()),
        ("concurrence", c.into()),
        ("sin_theta", point.theta.sin().into()),
        ("entropy", e.into()),
        ("entropy_from_concurrence", entropy_from_concurrence(c).into()),
        ("xi_re", xi.re.into()),
        ("xi_im", xi.im.into()),
        ("phi_pow_k", phi_pow(k).into()),
        ("reference", reference.map(Cell::from).unwrap_or(Cell::Null)),
    ];
    let stdout = match cfg.format {
        OutputFormat::Json => serde_json::to_string_pretty(&record_json(&rec))? + "\n",
        OutputFormat::Csv => {
            let mut t = Table::new(&rec.iter().map(|(k, _)| *k).collect::<Vec<_>>());
            t.push(rec.into_iter().map(|(_, v)| v).collect());
            t.to_csv()?
        }
    };
    Ok(CmdOutput::ok(stdout))
}

/// Super-coherent family table: cutoff, normalizers, residual, concurrence.
/// Exits 3 when a residual exceeds 100·tol (1e−8 at the default tol).
pub fn cmd_coherent(cfg: &RunConfig, families: &[Family], beta_max: f64, steps: usize) -> Result<CmdOutput, CliError> {
    cfg.validate()?;
    let mut t =
        Table::new(&["k", "family", "beta", "dim", "norm_sq_closed", "norm_sq_direct", "residual", "concurrence"]);
    let limit = 100.0 * cfg.tol;
    let mut breach: Option<String> = None;
    for &k in &cfg.k_list {
        if !(beta_max >= 0.0 && beta_max <= beta_limit(k)) {
            return Err(CliError::Config(format!("beta-max {beta_max} outside [0, {}] for k = {k}", beta_limit(k))));
        }
        for &fam in families {
            for beta in grid(beta_max, steps) {
                let f = super_coherent(fam, k, Complex64::new(beta, 0.0), cfg.cutoff)?;
                let c = concurrence_gram(&f.state.psi0, &f.state.psi1);
                if f.residual > limit && breach.is_none() {
                    breach = Some(format!(
                        "residual {} > {} at k = {k}, family = {}, beta = {}",
                        format_float(f.residual),
                        format_float(limit),
                        fam.as_str(),
                        format_float(beta)
                    ));
                }
                t.push(vec![
                    k.into(),
                    fam.as_str().into(),
                    beta.into(),
                    f.state.dim().into(),
                    f.norm_sq_closed.into(),
                    f.norm_sq_direct.into(),
                    f.residual.into(),
                    c.into(),
                ]);
            }
        }
    }
    let mut out = CmdOutput::ok(t.render(cfg.format)?);
    if let Some(msg) = breach {
        out.code = EXIT_TOLERANCE;
        out.stderr = Some(msg);
    }
    Ok(out)
}
