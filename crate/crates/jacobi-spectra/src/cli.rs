//! Command-line front end.
//!
//! Every subcommand prints one table, as CSV (default) or as a JSON array of
//! row objects, to stdout or `--output`. Exit status is 0 on success, 2 when a
//! verification step disagrees and 1 on any error. The worker count is capped
//! by the `JACOBI_SPECTRA_THREADS` environment variable.

use crate::core::{inverse_joukowski, joukowski, ComplexJacobiSpec, RealJacobiSpec};
use crate::detkit::determinant_series;
use crate::io::{any_spec_from_json, complex_spec_to_json, read_to_string, real_spec_from_json};
use crate::pavlov::{self, PavlovModel};
use crate::scattering::{inverse_scattering, scattering_function, verify_decay_bound, ScatteringData};
use crate::spectra::{self, Engine, FinderOptions};
use crate::{Error, Result, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const THREADS_ENV: &str = "JACOBI_SPECTRA_THREADS";

#[derive(Parser, Debug)]
#[command(name = "jacobi-spectra", version, about = "Discrete spectra and scattering for complex Jacobi matrices")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomised internals such as contour jitter.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Recursion,
    Volterra,
    Ratio,
    Series,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Recursion => Engine::Recursion,
            EngineArg::Volterra => Engine::Volterra,
            EngineArg::Ratio => Engine::Ratio,
            EngineArg::Series => Engine::Series,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the perturbation determinant on a circle of points.
    Det {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Volterra)]
        engine: EngineArg,
        /// Number of equally spaced points.
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
    },
    /// Eigenvalues from zeros of the determinant in `|z| <= radius`.
    Spectrum {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0.99)]
        radius: f64,
        /// Cross-check against dense sections of this size (and twice it).
        #[arg(long)]
        oracle: Option<usize>,
        #[arg(long, value_enum, default_value_t = EngineArg::Recursion)]
        engine: EngineArg,
    },
    /// Zeros of the determinant on the unit circle.
    Singularities {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Forward and inverse scattering for real symmetric specs.
    #[command(subcommand)]
    Scatter(ScatterCommand),
    /// Build or check the accumulating-eigenvalue example.
    #[command(subcommand)]
    Pavlov(PavlovCommand),
    /// Convergence exponent of point sets and derivative envelopes.
    #[command(subcommand)]
    Metrics(MetricsCommand),
}

#[derive(Subcommand, Debug)]
pub enum ScatterCommand {
    Forward {
        #[arg(long)]
        spec: PathBuf,
        /// The grid has 2^grid_k points.
        #[arg(long, default_value_t = 12)]
        grid_k: u32,
        /// Also write the scattering data as JSON.
        #[arg(long)]
        data_out: Option<PathBuf>,
    },
    Inverse {
        #[arg(long)]
        data: PathBuf,
        /// Reconstruct rows `0..=n_max` (default: support + 1 from the file, else 8).
        #[arg(long)]
        n_max: Option<usize>,
    },
    Roundtrip {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 12)]
        grid_k: u32,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PavlovParams {
    #[arg(long, default_value_t = 0.3)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kappa: f64,
    /// Number of predicted eigenvalues.
    #[arg(long, default_value_t = 4)]
    pub count: usize,
}

#[derive(Subcommand, Debug)]
pub enum PavlovCommand {
    Build {
        #[command(flatten)]
        params: PavlovParams,
        /// Rows taken from the orthogonal-polynomial recurrence.
        #[arg(long, default_value_t = 4000)]
        nmax: usize,
        /// Where to write the assembled spec.
        #[arg(long)]
        out: PathBuf,
    },
    Verify {
        #[command(flatten)]
        params: PavlovParams,
        #[arg(long)]
        spec: PathBuf,
        /// Dense oracle section size (raised to support + 10 if smaller).
        #[arg(long, default_value_t = 400)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MetricsCommand {
    LimitSet {
        /// JSON array of points in [-1, 1].
        #[arg(long, conflicts_with = "cantor")]
        points: Option<PathBuf>,
        /// Use the middle-third Cantor endpoints of this depth, mapped to [-1, 1].
        #[arg(long)]
        cantor: Option<u32>,
    },
    Gevrey {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.01, 0.1, 0.5, 1.0])]
        s: Vec<f64>,
    },
}

/// Outcome of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

/// A result table with fixed column order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            }))
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect();
                Value::Object(m)
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("table serialises") + "\n"
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn load_spec(path: &Path) -> Result<ComplexJacobiSpec> {
    any_spec_from_json(&read_to_string(path)?).map_err(|e| with_path(e, path))
}

fn load_real_spec(path: &Path) -> Result<RealJacobiSpec> {
    real_spec_from_json(&read_to_string(path)?).map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse { context, message } => Error::Parse { context: format!("{} ({context})", path.display()), message },
        other => other,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

/// Run a parsed configuration and write its table.
pub fn run(cfg: &RunConfig) -> i32 {
    match execute(cfg) {
        Ok((table, status)) => {
            let text = match cfg.format {
                Format::Csv => table.to_csv(),
                Format::Json => Ok(table.to_json()),
            };
            let written = text.and_then(|t| match &cfg.output {
                Some(p) => write_file(p, &t),
                None => std::io::stdout().write_all(t.as_bytes()).map_err(Error::from),
            });
            match (written, status) {
                (Err(e), _) => {
                    eprintln!("error: {e}");
                    1
                }
                (Ok(()), Status::Ok) => 0,
                (Ok(()), Status::Mismatch) => 2,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Run a configuration and return its table without writing it.
pub fn execute(cfg: &RunConfig) -> Result<(Table, Status)> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

fn finder_opts(seed: u64) -> FinderOptions {
    FinderOptions { seed, ..FinderOptions::default() }
}

fn dispatch(cfg: &RunConfig) -> Result<(Table, Status)> {
    match &cfg.command {
        Command::Det { spec, engine, grid, radius } => det(&load_spec(spec)?, (*engine).into(), *grid, *radius),
        Command::Spectrum { spec, radius, oracle, engine } => {
            spectrum(&load_spec(spec)?, *radius, *oracle, (*engine).into(), cfg.seed)
        }
        Command::Singularities { spec, grid } => singularities(&load_spec(spec)?, *grid),
        Command::Scatter(sc) => scatter(sc),
        Command::Pavlov(pc) => pavlov_cmd(pc, cfg.seed),
        Command::Metrics(mc) => metrics(mc),
    }
}

fn det(spec: &ComplexJacobiSpec, engine: Engine, grid: usize, radius: f64) -> Result<(Table, Status)> {
    if grid == 0 {
        return Err(Error::Precondition("grid must be positive".into()));
    }
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::Precondition(format!("radius must lie in (0, 1], got {radius}")));
    }
    let f = spectra::evaluator(spec, engine)?;
    let mut t = Table::new(&["k", "re_z", "im_z", "re_delta", "im_delta"]);
    for k in 0..grid {
        let z = C64::from_polar(radius, std::f64::consts::TAU * k as f64 / grid as f64);
        let d = f(z);
        t.push(vec![k.into(), num(z.re), num(z.im), num(d.re), num(d.im)]);
    }
    Ok((t, Status::Ok))
}

fn spectrum(spec: &ComplexJacobiSpec, radius: f64, oracle: Option<usize>, engine: Engine, seed: u64) -> Result<(Table, Status)> {
    let (zeros, warnings) = spectra::disk_zeros(spec, radius, engine, &finder_opts(seed))?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let mut zeros = zeros;
    zeros.sort_by(|a, b| {
        a.eigenvalue.im.abs().total_cmp(&b.eigenvalue.im.abs()).then(a.eigenvalue.re.total_cmp(&b.eigenvalue.re))
    });
    let stable = match oracle {
        Some(m) => Some(spectra::dense_truncation_oracle(spec, m)?.stable),
        None => None,
    };
    let mut status = Status::Ok;
    let mut t = Table::new(&["re_lambda", "im_lambda", "multiplicity", "abs_z", "residual", "oracle_distance"]);
    let mut used = vec![false; stable.as_ref().map_or(0, |s| s.len())];
    for z in &zeros {
        let dist = stable.as_ref().map(|s| {
            let best = s
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, l)| (i, (l - z.eigenvalue).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, d)) if d <= 1e-6 => {
                    used[i] = true;
                    d
                }
                Some((_, d)) => d,
                None => f64::INFINITY,
            }
        });
        if let Some(d) = dist {
            if !(d <= 1e-6) && z.z.norm() < radius - 1e-6 && z.eigenvalue.im.abs() + (z.eigenvalue.re.abs() - 1.0).max(0.0) > 1e-3 {
                status = Status::Mismatch;
            }
        }
        t.push(vec![
            num(z.eigenvalue.re),
            num(z.eigenvalue.im),
            z.multiplicity.into(),
            num(z.z.norm()),
            num(z.residual),
            dist.map_or(Value::Null, num),
        ]);
    }
    if let Some(s) = &stable {
        // Oracle eigenvalues strictly inside the disk must all be found.
        for (i, l) in s.iter().enumerate() {
            if !used[i] {
                if let Ok(z) = inverse_joukowski(*l) {
                    if z.norm() < radius - 1e-6 {
                        eprintln!("warning: oracle eigenvalue {l} was not found by the zero finder");
                        status = Status::Mismatch;
                    }
                }
            }
        }
    }
    Ok((t, status))
}

fn singularities(spec: &ComplexJacobiSpec, grid: usize) -> Result<(Table, Status)> {
    let mut t = Table::new(&["re_zeta", "im_zeta", "lambda", "abs_delta"]);
    for (zeta, v) in spectra::spectral_singularities(spec, grid)? {
        t.push(vec![num(zeta.re), num(zeta.im), num(joukowski(zeta)?.re), num(v)]);
    }
    Ok((t, Status::Ok))
}

fn scatter(sc: &ScatterCommand) -> Result<(Table, Status)> {
    match sc {
        ScatterCommand::Forward { spec, grid_k, data_out } => {
            let data = scattering_function(&load_real_spec(spec)?, *grid_k)?;
            if let Some(p) = data_out {
                write_file(p, &(serde_json::to_string_pretty(&data).expect("data serialises") + "\n"))?;
            }
            let mut t = Table::new(&["n", "F", "Fhat"]);
            for (n, (f, fh)) in data.f.iter().zip(&data.fhat).enumerate() {
                t.push(vec![n.into(), num(*f), num(*fh)]);
            }
            Ok((t, Status::Ok))
        }
        ScatterCommand::Inverse { data, n_max } => {
            let text = read_to_string(data)?;
            let d: ScatteringData = serde_json::from_str(&text).map_err(|e| Error::Parse {
                context: data.display().to_string(),
                message: e.to_string(),
            })?;
            let d = ScatteringData::from_coefficients(d.grid_k, d.support, d.f);
            let n_max = n_max.or(d.support.map(|s| s + 1)).unwrap_or(8);
            let spec = inverse_scattering(&d, n_max)?;
            let mut t = Table::new(&["k", "a", "b"]);
            for k in 0..=n_max {
                t.push(vec![k.into(), num(spec.a(k)), num(spec.b(k))]);
            }
            Ok((t, Status::Ok))
        }
        ScatterCommand::Roundtrip { spec, tol, grid_k } => {
            let s = load_real_spec(spec)?;
            let d = scattering_function(&s, *grid_k)?;
            let r = inverse_scattering(&d, s.support() + 1)?;
            let err = r.max_entry_error(&s);
            let bound = verify_decay_bound(&d, &s, s.support() + 1);
            eprintln!("max entry error {err:e}, decay-bound constant {:e}", bound.c_min);
            let mut t = Table::new(&["k", "a", "a_recovered", "b", "b_recovered"]);
            for k in 0..=s.support() {
                t.push(vec![k.into(), num(s.a(k)), num(r.a(k)), num(s.b(k)), num(r.b(k))]);
            }
            Ok((t, if err <= *tol { Status::Ok } else { Status::Mismatch }))
        }
    }
}

fn pavlov_cmd(pc: &PavlovCommand, seed: u64) -> Result<(Table, Status)> {
    match pc {
        PavlovCommand::Build { params, nmax, out } => {
            let model = PavlovModel::new(params.gamma, params.kappa)?;
            let b = pavlov::build(&model, *nmax, params.count)?;
            for w in &b.roots.warnings {
                eprintln!("warning: {w}");
            }
            write_file(out, &(complex_spec_to_json(&b.spec) + "\n"))?;
            eprintln!(
                "alpha {} beta {} A {} weight mass {}",
                b.herglotz.alpha, b.herglotz.beta, b.herglotz.a_norm, b.weight_mass
            );
            let mut t = Table::new(&["k", "t_k", "re_lambda", "im_lambda", "residual"]);
            for (k, ((tk, l), r)) in b.roots.roots.iter().zip(&b.predicted).zip(&b.weyl_residuals).enumerate() {
                t.push(vec![(k + 1).into(), num(*tk), num(l.re), num(l.im), num(*r)]);
            }
            Ok((t, Status::Ok))
        }
        PavlovCommand::Verify { params, spec, m } => {
            let s = load_spec(spec)?;
            let model = PavlovModel::new(params.gamma, params.kappa)?;
            let roots = model.find_roots(params.count)?;
            let predicted = model.predicted_eigenvalues(&roots)?;
            let pz = model.predicted_z(&roots);
            let h = model.herglotz_constants()?;
            let residuals = pavlov::weyl_residuals(&model, &h, s.b(0), &roots)?;
            let rep = pavlov::verify_accumulation(&s, &predicted, &pz, model.accumulation_z(), *m, &finder_opts(seed))?;
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            let mut t = Table::new(&["k", "t_k", "re_lambda", "im_lambda", "matched", "distance", "residual"]);
            for (row, (tk, r)) in rep.matches.iter().zip(roots.roots.iter().zip(&residuals)) {
                t.push(vec![
                    row.k.into(),
                    num(*tk),
                    num(row.predicted.re),
                    num(row.predicted.im),
                    row.computed.is_some().into(),
                    num(row.distance),
                    num(*r),
                ]);
            }
            let need = params.count.min(2);
            let ok = rep.matched_count >= need && residuals.iter().take(3).all(|r| *r <= 1e-6);
            Ok((t, if ok { Status::Ok } else { Status::Mismatch }))
        }
    }
}

fn metrics(mc: &MetricsCommand) -> Result<(Table, Status)> {
    match mc {
        MetricsCommand::LimitSet { points, cantor } => {
            let pts: Vec<f64> = match (points, cantor) {
                (Some(p), _) => serde_json::from_str(&read_to_string(p)?).map_err(|e| Error::Parse {
                    context: p.display().to_string(),
                    message: e.to_string(),
                })?,
                (None, Some(d)) => spectra::metrics::cantor_endpoints(*d),
                (None, None) => return Err(Error::Precondition("give --points FILE or --cantor DEPTH".into())),
            };
            let m = spectra::limit_set_metrics(&pts, &spectra::default_eps_grid())?;
            let mut t = Table::new(&["points", "gaps", "gap_sum", "tau_estimate"]);
            t.push(vec![m.points.len().into(), m.gaps.len().into(), num(m.gaps.iter().sum()), num(m.tau_estimate)]);
            Ok((t, Status::Ok))
        }
        MetricsCommand::Gevrey { spec, n_max, s } => {
            let spec = load_spec(spec)?;
            let series = determinant_series(&spec, (2 * spec.support() + 1).max(n_max + 10))?;
            let env = spectra::gevrey_envelope(&series, *n_max, s)?;
            let mut t = Table::new(&["quantity", "argument", "value"]);
            for (n, g) in env.g.iter().enumerate() {
                t.push(vec!["G".into(), num(n as f64), num(*g)]);
            }
            for (s, v) in &env.t {
                t.push(vec!["T".into(), num(*s), num(*v)]);
            }
            Ok((t, Status::Ok))
        }
    }
}
