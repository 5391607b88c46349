//! The `gsqg` command line.
//!
//! Values come from `--config` (TOML), then individual flags override them.
//! Exit codes: 0 success, 1 invalid input or domain error, 2 numerical failure.
//! Errors are also printed to stderr as one JSON line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::certify::{
    certify_eventual, certify_subcritical, decay_bound, eventual_bounds, fit_decay_constant,
    lambda_for_data, regularity_ladder, subcritical_thresholds, Certificate, EventualParams,
    SCHEMA_VERSION,
};
use crate::config::{Criterion, Mode, ParamValue, Regime, RunConfig, Validation};
use crate::diagnostics::{
    besov_seminorm, holder_seminorm, write_csv_header, write_csv_row, write_json_line,
    DecayMonitor, Tracker,
};
use crate::error::{Error, Result};
use crate::evolution::{InitialData, Scheme, Stepper};
use crate::moc::{obeys, Moc, MocFamily};
use crate::spectral::{gradient, read_field, write_field, Grid2D, Representation, ScalarField2D};

#[derive(Debug, Parser)]
#[command(name = "gsqg", version, about = "Generalized SQG solver and modulus-of-continuity certifier")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the equation and write a diagnostic time series.
    Simulate(SimulateArgs),
    /// Grid-check the breakdown inequality for a modulus of continuity.
    Certify(CertifyArgs),
    /// Exponent arithmetic of the regularity bootstrap.
    Ladder(LadderArgs),
    /// Norms, seminorms and modulus obedience of one field.
    Diagnose(DiagnoseArgs),
    /// Fit the L∞ decay constant to a simulated series.
    DecayFit(DecayFitArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config and $GSQG_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct Physics {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Rk2,
    Rk4,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    physics: Physics,
    /// Grid points per side.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Seed of random_smooth initial data.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample_interval: Option<f64>,
    #[arg(long)]
    holder_gamma: Option<f64>,
    #[arg(long)]
    truncation_modes: Option<f64>,
    /// Step through CFL violations.
    #[arg(long)]
    force: bool,
    /// Also write series.jsonl.
    #[arg(long)]
    json_lines: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CriterionArg {
    Subcritical,
    Eventual,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    KiselNv,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    physics: Physics,
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Certify the explicit family built from --delta and --gamma, ignoring any [moc] block.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Number or `half-threshold`.
    #[arg(long)]
    delta: Option<ParamValue>,
    /// Number or `half-threshold`.
    #[arg(long)]
    gamma: Option<ParamValue>,
    /// Eventual: number or `half-threshold`.
    #[arg(long)]
    c1: Option<ParamValue>,
    /// Eventual: number or `half-threshold`.
    #[arg(long)]
    c2: Option<ParamValue>,
    #[arg(long)]
    c_alpha: Option<f64>,
    #[arg(long)]
    c_beta: Option<f64>,
    #[arg(long)]
    c_beta_prime: Option<f64>,
    #[arg(long = "A")]
    a: Option<f64>,
    /// Subcritical grid density away from δ.
    #[arg(long)]
    per_decade: Option<usize>,
}

#[derive(Debug, Args)]
struct LadderArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    physics: Physics,
    #[arg(long)]
    sigma1: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    physics: Physics,
    /// Field checkpoint; the configured initial data is used otherwise.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    holder_gamma: Vec<f64>,
    #[arg(long)]
    besov_s: Vec<f64>,
}

#[derive(Debug, Args)]
struct DecayFitArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    beta: Option<f64>,
    /// Series CSV from `simulate`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    t_fit: Option<f64>,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_record(&e));
            e.exit_code()
        }
    }
}

/// Machine-readable description of a failure.
pub fn error_record(e: &Error) -> serde_json::Value {
    let mut rec = json!({
        "schema_version": SCHEMA_VERSION,
        "error": e.kind(),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    });
    let extra = match e {
        Error::BlowUp {
            step,
            t,
            blowup_integral,
            ..
        } => json!({"step": step, "t": t, "blowup_integral": blowup_integral}),
        Error::Cfl { dt, limit } => json!({"dt": dt, "limit": limit}),
        Error::LadderStall { increment, min_p } => json!({"increment": increment, "min_p": min_p}),
        Error::Quadrature { estimate, error } => json!({"estimate": estimate, "error_estimate": error}),
        _ => json!({}),
    };
    if let (Some(r), Some(x)) = (rec.as_object_mut(), extra.as_object()) {
        for (k, v) in x {
            r.insert(k.clone(), v.clone());
        }
    }
    rec
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Certify(a) => certify(a),
        Command::Ladder(a) => ladder(a),
        Command::Diagnose(a) => diagnose(a),
        Command::DecayFit(a) => decay_fit(a),
    }
}

#[derive(Debug, Serialize)]
struct Manifest {
    schema_version: u32,
    config_hash: String,
    tool_version: &'static str,
    command: String,
    regime: Regime,
    warnings: Vec<String>,
    started_unix: f64,
    finished_unix: f64,
    artifacts: Vec<String>,
    verdicts: BTreeMap<String, String>,
}

/// Resolved configuration plus the bookkeeping every subcommand shares.
struct Session {
    cfg: RunConfig,
    mode: Mode,
    hash: String,
    regime: Regime,
    out: PathBuf,
    started: f64,
    artifacts: Vec<String>,
    warnings: Vec<String>,
    verdicts: BTreeMap<String, String>,
}

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl Session {
    fn open(common: &Common, physics: Option<&Physics>, mode: Mode, edit: impl FnOnce(&mut RunConfig)) -> Result<Session> {
        let started = now();
        let mut cfg = match &common.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(ph) = physics {
            set(&mut cfg.alpha, ph.alpha);
            set(&mut cfg.beta, ph.beta);
            set(&mut cfg.nu, ph.nu);
            set(&mut cfg.epsilon, ph.epsilon);
        }
        if common.threads.is_some() {
            cfg.threads = common.threads;
        }
        edit(&mut cfg);
        let regime = match cfg.validate(mode) {
            Validation::Valid { regime } => regime,
            Validation::Invalid { violations } => return Err(Error::Config(violations.join("; "))),
        };
        if let Some(n) = cfg.threads {
            // the global pool can only be configured once per process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        let out = cfg.output_dir(common.out.as_deref());
        fs::create_dir_all(&out)?;
        let hash = cfg.hash();
        let mut s = Session {
            cfg,
            mode,
            hash,
            regime,
            out,
            started,
            artifacts: Vec::new(),
            warnings: Vec::new(),
            verdicts: BTreeMap::new(),
        };
        let text = s.cfg.to_toml();
        s.write("config.toml", |w| Ok(w.write_all(text.as_bytes())?))?;
        Ok(s)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let mut w = BufWriter::new(File::create(self.path(name))?);
        body(&mut w)?;
        w.flush()?;
        if !self.artifacts.iter().any(|a| a == name) {
            self.artifacts.push(name.to_string());
        }
        Ok(())
    }

    fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
        self.write(name, |w| Ok(writeln!(w, "{text}")?))
    }

    fn csv_header(&self) -> String {
        format!("# schema_version={SCHEMA_VERSION} config_hash={}", self.hash)
    }

    fn finish(mut self) -> Result<()> {
        let m = Manifest {
            schema_version: SCHEMA_VERSION,
            config_hash: self.hash.clone(),
            tool_version: env!("CARGO_PKG_VERSION"),
            command: self.mode.to_string(),
            regime: self.regime,
            warnings: self.warnings.clone(),
            started_unix: self.started,
            finished_unix: now(),
            artifacts: {
                let mut a = self.artifacts.clone();
                a.push("manifest.json".into());
                a
            },
            verdicts: self.verdicts.clone(),
        };
        self.write_json("manifest.json", &m)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut s = Session::open(&a.common, Some(&a.physics), Mode::Simulate, |c| {
        set(&mut c.solver.n, a.n);
        set(&mut c.solver.dt, a.dt);
        set(&mut c.solver.t_end, a.t_end);
        if let Some(sc) = a.scheme {
            c.solver.scheme = match sc {
                SchemeArg::Rk2 => Scheme::Rk2,
                SchemeArg::Rk4 => Scheme::Rk4,
            };
        }
        if let (Some(seed), InitialData::RandomSmooth { seed: slot, .. }) = (a.seed, &mut c.initial) {
            *slot = seed;
        }
        set(&mut c.sampling.interval, a.sample_interval);
        if a.holder_gamma.is_some() {
            c.sampling.holder_gamma = a.holder_gamma;
        }
        if a.truncation_modes.is_some() {
            c.solver.truncation_modes = a.truncation_modes;
        }
        c.solver.force |= a.force;
        c.sampling.json_lines |= a.json_lines;
    })?;
    let cfg = s.cfg.clone();
    let grid = Grid2D::new(cfg.solver.n, cfg.solver.length)?;
    let theta0 = cfg.initial.build(&grid)?;
    let stepper = Stepper::new(&grid, &cfg.solver_params())?;
    s.warnings.extend(stepper.warnings().iter().cloned());
    for w in stepper.warnings() {
        eprintln!("warning: {w}");
    }

    let mut tracker = Tracker::new(cfg.pairs);
    if let Some(g) = cfg.sampling.holder_gamma {
        tracker = tracker.with_holder(g)?;
    }
    if cfg.sampling.obedience {
        if let Some(f) = &cfg.moc {
            tracker = tracker.with_moc(f.build()?);
        }
    }
    if let Some(t_fit) = cfg.sampling.decay_fit_time {
        tracker = tracker.with_decay(DecayMonitor {
            beta: cfg.beta,
            t_fit,
        })?;
    }

    write_checkpoint(&mut s, "initial.gsqg", &theta0)?;
    let mut csv = BufWriter::new(File::create(s.path("series.csv"))?);
    write_csv_header(&mut csv, &s.hash)?;
    let mut jsonl = if cfg.sampling.json_lines {
        Some(BufWriter::new(File::create(s.path("series.jsonl"))?))
    } else {
        None
    };
    let mut records = 0usize;
    let mut io_error: Option<Error> = None;
    let result = stepper.run(&theta0, cfg.sampling.interval, |state| {
        if io_error.is_some() {
            return;
        }
        let step = tracker.record(state).and_then(|r| {
            write_csv_row(&mut csv, &r)?;
            if let Some(j) = jsonl.as_mut() {
                write_json_line(j, &r)?;
            }
            Ok(())
        });
        match step {
            Ok(()) => records += 1,
            Err(e) => io_error = Some(e),
        }
    });
    let result = match (result, io_error) {
        (_, Some(e)) => Err(e),
        (r, None) => r,
    };
    if let Err(e) = &result {
        writeln!(csv, "# truncated: {e}")?;
    }
    csv.flush()?;
    s.artifacts.push("series.csv".into());
    if let Some(mut j) = jsonl {
        j.flush()?;
        s.artifacts.push("series.jsonl".into());
    }
    match result {
        Ok(end) => {
            write_checkpoint(&mut s, "final.gsqg", &end.theta)?;
            println!(
                "simulate: {records} records, t = {}, steps = {}, Linf = {:e}, energy residual = {:e}",
                end.t,
                end.step_count,
                end.theta.linf_norm(),
                end.energy_residual()
            );
            if let Some(fit) = tracker.decay_fit() {
                println!("decay constant fitted on t <= {}: C = {:e}", cfg.sampling.decay_fit_time.unwrap_or(0.0), fit.c);
            }
            s.verdicts.insert("run".into(), "complete".into());
            s.finish()
        }
        Err(e) => {
            s.verdicts.insert("run".into(), format!("truncated: {}", e.kind()));
            s.finish()?;
            Err(e)
        }
    }
}

fn write_checkpoint(s: &mut Session, name: &str, field: &ScalarField2D) -> Result<()> {
    s.write(name, |w| write_field(w, field, Representation::Physical))
}

fn certify(a: CertifyArgs) -> Result<()> {
    let use_family = a.family.is_some();
    let mut s = Session::open(&a.common, Some(&a.physics), Mode::Certify, |c| {
        if let Some(cr) = a.criterion {
            c.certify.criterion = match cr {
                CriterionArg::Subcritical => Criterion::Subcritical,
                CriterionArg::Eventual => Criterion::Eventual,
            };
        }
        if use_family {
            c.moc = None;
        }
        set(&mut c.certify.delta, a.delta);
        set(&mut c.certify.gamma, a.gamma);
        set(&mut c.certify.c1, a.c1);
        set(&mut c.certify.c2, a.c2);
        set(&mut c.constants.c_alpha, a.c_alpha);
        set(&mut c.constants.c_beta, a.c_beta);
        set(&mut c.constants.c_beta_prime, a.c_beta_prime);
        set(&mut c.constants.a, a.a);
        set(&mut c.certify.subcritical_grid.per_decade, a.per_decade);
    })?;
    let cfg = s.cfg.clone();
    let c = cfg.criterion_constants();
    let mut cert: Certificate = match cfg.certify.criterion {
        Criterion::Subcritical => {
            let moc = match &cfg.moc {
                Some(f) => f.build()?,
                None => {
                    let delta = cfg.certify.delta.resolve(subcritical_thresholds(&c, 1.0)?.delta);
                    let gamma = cfg.certify.gamma.resolve(subcritical_thresholds(&c, delta)?.gamma);
                    Moc::kisel_nv(delta, gamma, c.beta)?
                }
            };
            for n in moc.notes() {
                s.warnings.push(n.clone());
            }
            certify_subcritical(&moc, &c, &cfg.certify.subcritical_grid)?
        }
        Criterion::Eventual => {
            let delta = cfg.certify.delta.resolve(f64::NAN);
            let gamma = cfg.certify.gamma.resolve(f64::NAN);
            let b = eventual_bounds(&c, gamma);
            let c1 = cfg.certify.c1.resolve(b.c1);
            let c2 = cfg.certify.c2.resolve(b.c2);
            let p = EventualParams::from_c1(c1, c2, delta, gamma, &c);
            certify_eventual(&p, &c, &cfg.certify.eventual_grid)?
        }
    };
    cert.config_hash = Some(s.hash.clone());
    let json = cert.to_json();
    s.write("certificate.json", |w| Ok(writeln!(w, "{json}")?))?;
    let header = s.csv_header();
    s.write("margins.csv", |w| cert.write_margins_csv(w, &header))?;
    s.verdicts.insert(cert.criterion.clone(), cert.verdict.to_string());
    println!(
        "certificate: {} ({}) worst margin {:e} at xi = {:e}{} over {} points",
        cert.verdict,
        cert.criterion,
        cert.worst_margin,
        cert.witness_xi,
        cert.witness_xi0.map(|x| format!(", xi0 = {x:e}")).unwrap_or_default(),
        cert.grid.points
    );
    if let Some(r) = &cert.reason {
        println!("reason: {r}");
    }
    s.finish()
}

fn ladder(a: LadderArgs) -> Result<()> {
    let mut s = Session::open(&a.common, Some(&a.physics), Mode::Ladder, |c| {
        set(&mut c.ladder.sigma1, a.sigma1);
        set(&mut c.ladder.p, a.p);
    })?;
    let cfg = s.cfg.clone();
    let l = regularity_ladder(cfg.alpha, cfg.beta, cfg.ladder.sigma1, cfg.ladder.p)?;
    for (i, sigma) in l.sigmas.iter().enumerate() {
        println!("sigma_{} = {}", i + 1, sigma);
    }
    println!("N0 = {}", l.n0);
    println!("increment = {}, p1 = {}, p2 = {}", l.increment, l.p1, l.p2);
    if !l.p_admissible {
        let msg = format!("p = {} does not exceed max(p1, p2) = {}", cfg.ladder.p, l.p1.max(l.p2));
        println!("warning: {msg}");
        s.warnings.push(msg);
    }
    let rec = json!({"schema_version": SCHEMA_VERSION, "config_hash": s.hash, "ladder": l});
    s.write_json("ladder.json", &rec)?;
    s.verdicts.insert("N0".into(), l.n0.to_string());
    s.finish()
}

#[derive(Debug, Serialize)]
struct FieldReport {
    schema_version: u32,
    config_hash: String,
    source: String,
    n: usize,
    mean: f64,
    l2: f64,
    linf: f64,
    grad_linf: f64,
    holder: Vec<crate::diagnostics::HolderEstimate>,
    besov: Vec<crate::diagnostics::BesovEstimate>,
    obedience: Option<crate::moc::ObedienceReport>,
    scaling: Option<serde_json::Value>,
}

fn diagnose(a: DiagnoseArgs) -> Result<()> {
    let mut s = Session::open(&a.common, Some(&a.physics), Mode::Diagnose, |c| {
        if a.input.is_some() {
            c.diagnose.input = a.input.clone();
        }
        if !a.holder_gamma.is_empty() {
            c.diagnose.holder_gamma = a.holder_gamma.clone();
        }
        if !a.besov_s.is_empty() {
            c.diagnose.besov_s = a.besov_s.clone();
        }
    })?;
    let cfg = s.cfg.clone();
    let (field, source) = match &cfg.diagnose.input {
        Some(p) => (read_field(BufReader::new(File::open(p)?))?.0, p.display().to_string()),
        None => {
            let grid = Grid2D::new(cfg.solver.n, cfg.solver.length)?;
            (cfg.initial.build(&grid)?, "initial data".to_string())
        }
    };
    let holder = cfg
        .diagnose
        .holder_gamma
        .iter()
        .map(|&g| holder_seminorm(&field, g, &cfg.pairs))
        .collect::<Result<Vec<_>>>()?;
    let besov = cfg
        .diagnose
        .besov_s
        .iter()
        .map(|&x| besov_seminorm(&field, x))
        .collect::<Result<Vec<_>>>()?;
    for b in &besov {
        if let Some(w) = &b.warning {
            s.warnings.push(w.clone());
        }
    }
    let moc = cfg.moc.as_ref().map(MocFamily::build).transpose()?;
    let obedience = moc.as_ref().map(|m| obeys(&field, m, &cfg.pairs));
    let grad_linf = gradient(&field).linf_norm();
    let scaling = match (&moc, s.regime) {
        (Some(m), Regime::Subcritical) => match m.breakpoints().first() {
            Some(&d) => {
                let c0 = m.value(d);
                let choice = lambda_for_data(field.linf_norm(), grad_linf, c0, m, cfg.alpha, cfg.beta)?;
                let report = choice.verify(m, &field, &cfg.pairs)?;
                Some(json!({"c0": c0, "choice": choice, "scaled_obedience": report}))
            }
            None => None,
        },
        _ => None,
    };
    let rep = FieldReport {
        schema_version: SCHEMA_VERSION,
        config_hash: s.hash.clone(),
        source,
        n: field.grid().n(),
        mean: field.mean(),
        l2: field.l2_norm(),
        linf: field.linf_norm(),
        grad_linf,
        holder,
        besov,
        obedience,
        scaling,
    };
    println!("diagnose: L2 = {:e}, Linf = {:e}, grad Linf = {:e}", rep.l2, rep.linf, rep.grad_linf);
    for h in &rep.holder {
        println!("holder seminorm (gamma = {}) = {:e}", h.gamma, h.value);
    }
    if let Some(o) = &rep.obedience {
        println!("moc obedience ratio = {:e} ({})", o.ratio, if o.obeyed { "obeyed" } else { "violated" });
        s.verdicts.insert("obedience".into(), if o.obeyed { "obeyed" } else { "violated" }.into());
    }
    s.write_json("diagnose.json", &rep)?;
    s.finish()
}

/// `(t, L2, Linf)` rows of a series CSV.
pub fn read_series_csv(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let fmt = |e: csv::Error| Error::Format(e.to_string());
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(fmt)?;
    let headers = rdr.headers().map_err(fmt)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format(format!("series has no `{name}` column")))
    };
    let (it, il2, ili) = (col("t")?, col("L2")?, col("Linf")?);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(fmt)?;
        let get = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad series row at line {}", rec.position().map_or(0, |p| p.line()))))
        };
        rows.push((get(it)?, get(il2)?, get(ili)?));
    }
    if rows.is_empty() {
        return Err(Error::Format("series has no data rows".into()));
    }
    Ok(rows)
}

fn decay_fit(a: DecayFitArgs) -> Result<()> {
    let mut s = Session::open(&a.common, None, Mode::DecayFit, |c| {
        set(&mut c.beta, a.beta);
        if a.input.is_some() {
            c.decay_fit.input = a.input.clone();
        }
        set(&mut c.decay_fit.t_fit, a.t_fit);
    })?;
    let cfg = s.cfg.clone();
    let input = cfg.decay_fit.input.clone().expect("validated");
    let rows = read_series_csv(&input)?;
    let (t0, l2_0, linf0) = rows[0];
    if t0 != 0.0 {
        return Err(Error::Format(format!("series starts at t = {t0}, expected 0")));
    }
    let early: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.0 > 0.0 && r.0 <= cfg.decay_fit.t_fit)
        .map(|r| (r.0, r.2))
        .collect();
    let fit = fit_decay_constant(linf0, l2_0, cfg.beta, &early)?;
    let max_ratio = rows
        .iter()
        .map(|&(t, _, li)| li / decay_bound(linf0, l2_0, cfg.beta, fit.c, t))
        .fold(0.0, f64::max);
    println!(
        "decay-fit: C = {:e} from {} samples (rms residual {:e}); max Linf/envelope = {}",
        fit.c, fit.samples, fit.rms_residual, max_ratio
    );
    let rec = json!({
        "schema_version": SCHEMA_VERSION,
        "config_hash": s.hash,
        "input": input.display().to_string(),
        "beta": cfg.beta,
        "t_fit": cfg.decay_fit.t_fit,
        "fit": fit,
        "max_envelope_ratio": max_ratio,
    });
    s.write_json("decay_fit.json", &rec)?;
    s.finish()
}
