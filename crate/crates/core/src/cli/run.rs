//! Subcommand dispatch, exit codes and side files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use thiserror::Error;

use super::config::{ConfigError, ExperimentConfig};
use super::report::{Check, RunReport, Status, Timings, Versions, REPORT_SCHEMA_VERSION};
use crate::analysis::{
    algebra_check, convergence_study, convergence_to_csv, fit_gaussian_decay, perturbation_sweep, sweep_to_csv,
};
use crate::error::{AnalysisError, LatticeError, SpectralError, SusyError};
use crate::lattice::csv::field_to_csv;
use crate::lattice::{discretize, GridSpec};
use crate::opcalc::{defect_dirac, oscillator, random, BlockOperator, OperatorExpression};
use crate::spectral::{pairing_check, winding_number, witten_index, EigenReport};
use crate::susy::{
    build_defect_operator, odd_embedding, parity_classify, zero_mode_ansatz, DefectOperatorSet, Parity, SusyQuartet,
    DEFAULT_PARITY_TOL,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

/// Pairing window and tolerance used by `index`.
const PAIRING_CUTOFF: f64 = 2.5;
const PAIRING_TOL: f64 = 0.05;
const ALGEBRA_TOL: f64 = 1e-12;
const DECAY_REL_TOL: f64 = 0.02;

#[derive(Debug, Parser)]
#[command(name = "dil", version, about = "Witten index, zero modes and SUSY algebra of the defect Dirac operator")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// TOML config with flat dotted keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Where to write the JSON report; side CSVs go next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Single-threaded, reproducible run without timings.
    #[arg(long, global = true)]
    pub serial: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Residuals of the supersymmetry algebra and operator parities.
    AlgebraCheck,
    /// Witten index from zero-mode counts, with the winding cross-check.
    Index,
    /// Zero modes of both partner Hamiltonians and their decay profile.
    ZeroModes,
    /// Index and decay rate over `sweep.c_values`.
    Sweep,
    /// Discretization order of the low `H₋` spectrum.
    Convergence,
    /// Winding of the lower-left mass entry.
    Winding,
    /// Exact symbolic identities.
    OpcalcSelftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::AlgebraCheck => "algebra-check",
            Command::Index => "index",
            Command::ZeroModes => "zero-modes",
            Command::Sweep => "sweep",
            Command::Convergence => "convergence",
            Command::Winding => "winding",
            Command::OpcalcSelftest => "opcalc-selftest",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    NoConvergence(String),
    #[error("{0}")]
    Failed(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::NoConvergence(_) => EXIT_NO_CONVERGENCE,
            RunError::Failed(_) => EXIT_FAILED_CHECK,
        }
    }
}

impl From<SpectralError> for RunError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NoConvergence { .. } => RunError::NoConvergence(e.to_string()),
            other => RunError::Failed(other.to_string()),
        }
    }
}

impl From<AnalysisError> for RunError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Spectral(s) => s.into(),
            other => RunError::Failed(other.to_string()),
        }
    }
}

impl From<SusyError> for RunError {
    fn from(e: SusyError) -> Self {
        RunError::Failed(e.to_string())
    }
}

impl From<LatticeError> for RunError {
    fn from(e: LatticeError) -> Self {
        RunError::Failed(e.to_string())
    }
}

/// Forces single-threaded linear algebra and a one-thread rayon pool.
pub fn configure_serial() {
    faer::set_global_parallelism(faer::Par::Seq);
    // the global pool can only be set once; a second call is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with<I, T>(args: I, env: impl IntoIterator<Item = (String, String)>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    if args.serial {
        configure_serial();
    }
    let report = run(&args, env);
    let text = report.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_FAILED_CHECK;
            }
        }
        None => println!("{text}"),
    }
    if let Some(err) = &report.error {
        eprintln!("error: {err}");
    }
    report.exit_code
}

/// Loads the config (file, then `DIL_*` overrides, then `--seed`) and runs
/// one subcommand. Errors become a failed report with the matching exit code.
pub fn run(args: &Args, env: impl IntoIterator<Item = (String, String)>) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        subcommand: args.command.name().to_string(),
        status: Status::Fail,
        exit_code: EXIT_FAILED_CHECK,
        config: Json::Null,
        versions: Versions::default(),
        serial: args.serial,
        results: Json::Null,
        checks: Vec::new(),
        error: None,
        timings: None,
    };
    let outcome = load_config(args, env).and_then(|cfg| {
        report.config = cfg.to_flat_json();
        dispatch(args.command, &cfg, args.out.as_deref())
    });
    match outcome {
        Ok((results, checks)) => {
            let pass = checks.iter().all(|c| c.passed);
            report.status = if pass { Status::Pass } else { Status::Fail };
            report.exit_code = if pass { EXIT_PASS } else { EXIT_FAILED_CHECK };
            report.results = results;
            report.checks = checks;
        }
        Err(e) => {
            report.exit_code = e.exit_code();
            report.error = Some(e.to_string());
        }
    }
    if !args.serial {
        report.timings = Some(Timings { total_seconds: start.elapsed().as_secs_f64() });
    }
    report
}

fn load_config(args: &Args, env: impl IntoIterator<Item = (String, String)>) -> Result<ExperimentConfig, RunError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?,
        None => String::new(),
    };
    let mut cfg = ExperimentConfig::parse(&text, env)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

type Outcome = Result<(Json, Vec<Check>), RunError>;

fn dispatch(cmd: Command, cfg: &ExperimentConfig, out: Option<&Path>) -> Outcome {
    match cmd {
        Command::AlgebraCheck => algebra(cfg),
        Command::Index => index(cfg, out),
        Command::ZeroModes => zero_modes(cfg, out),
        Command::Sweep => sweep(cfg, out),
        Command::Convergence => convergence(cfg, out),
        Command::Winding => winding(cfg),
        Command::OpcalcSelftest => selftest(cfg),
    }
}

fn json<T: serde::Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("serializable")
}

/// `report.json` → `report.<suffix>.csv`.
fn side_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn write_side(out: Option<&Path>, suffix: &str, text: &str) -> Result<Option<String>, RunError> {
    let Some(out) = out else { return Ok(None) };
    let path = side_path(out, suffix);
    std::fs::write(&path, text).map_err(|e| RunError::Failed(format!("cannot write {}: {e}", path.display())))?;
    Ok(Some(path.display().to_string()))
}

fn spectra_csv(reports: &[&EigenReport]) -> String {
    let mut out = String::from("matrix_id,index,eigenvalue,residual\n");
    for r in reports {
        for (i, (l, res)) in r.eigenvalues.iter().zip(&r.residuals).enumerate() {
            out.push_str(&format!("{},{i},{l},{res}\n", r.matrix_id));
        }
    }
    out
}

fn algebra(cfg: &ExperimentConfig) -> Outcome {
    let set = DefectOperatorSet::from_model(&cfg.model)?;
    let coarse = GridSpec::new(cfg.grid.half_width(), (cfg.grid.n() / 2).max(8))?;
    let mut checks = Vec::new();
    let mut per_grid = Vec::new();
    for (label, grid) in [("grid", cfg.grid), ("coarse", coarse)] {
        let disc = set.discretize(&grid);
        let q = SusyQuartet::build(&disc.d)?;
        let r = algebra_check(&q)?;
        checks.push(Check::new(
            format!("algebra residuals ({label}, n = {})", grid.n()),
            r.passes(ALGEBRA_TOL),
            format!("max relative residual {:e} (limit {ALGEBRA_TOL:e})", r.max_residual()),
        ));
        let mut parities = vec![
            ("H", parity_classify(&q.ham, &q.w, DEFAULT_PARITY_TOL)?, Parity::Even),
            ("Q", parity_classify(&q.q, &q.w, DEFAULT_PARITY_TOL)?, Parity::Odd),
            ("Q_dag", parity_classify(&q.q_dag, &q.w, DEFAULT_PARITY_TOL)?, Parity::Odd),
        ];
        if !set.k_is_zero() {
            let k = odd_embedding(&disc.k)?;
            parities.push(("K", parity_classify(&k, &q.w, DEFAULT_PARITY_TOL)?, Parity::Odd));
        }
        for (name, got, want) in &parities {
            checks.push(Check::new(format!("{name} parity ({label})"), got == want, format!("{got:?}, expected {want:?}")));
        }
        let parities: Json = parities.iter().map(|(n, p, _)| (n.to_string(), json(p))).collect::<serde_json::Map<_, _>>().into();
        per_grid.push(json!({ "label": label, "grid": grid, "residuals": r, "parities": parities }));
    }
    Ok((json!({ "grids": per_grid }), checks))
}

fn index(cfg: &ExperimentConfig, out: Option<&Path>) -> Outcome {
    let set = DefectOperatorSet::from_model(&cfg.model)?;
    let report = witten_index(&set, &cfg.grid, &cfg.index_params())?;
    let pairing = pairing_check(&report.spectrum_minus, &report.spectrum_plus, cfg.gap_threshold, PAIRING_CUTOFF, PAIRING_TOL);
    let side = write_side(out, "spectrum", &spectra_csv(&[&report.spectrum_minus, &report.spectrum_plus]))?;
    let checks = vec![
        Check::new("delta = 1", report.delta == 1, format!("n_minus = {}, n_plus = {}, delta = {}", report.n_minus, report.n_plus, report.delta)),
        Check::new(
            "winding agrees with delta",
            report.winding_agrees == Some(true),
            format!("winding {:?}", report.winding),
        ),
        Check::new(
            "partner spectra pair up",
            pairing.all_matched,
            format!("unmatched H_minus values {:?} in ({}, {PAIRING_CUTOFF})", pairing.unmatched_minus, cfg.gap_threshold),
        ),
    ];
    Ok((json!({ "index": report, "pairing": pairing, "spectrum_csv": side }), checks))
}

fn zero_modes(cfg: &ExperimentConfig, out: Option<&Path>) -> Outcome {
    let set = DefectOperatorSet::from_model(&cfg.model)?;
    let report = witten_index(&set, &cfg.grid, &cfg.index_params())?;
    let predicted = cfg.model.predicted_decay();
    let mut checks = vec![
        Check::new("one zero mode of H_minus", report.n_minus == 1, format!("n_minus = {}", report.n_minus)),
        Check::new("no zero mode of H_plus", report.n_plus == 0, format!("n_plus = {}", report.n_plus)),
    ];
    let mut modes = Vec::new();
    for i in 0..report.n_minus.min(report.spectrum_minus.len()) {
        let field = report.spectrum_minus.mode_field(i, &cfg.grid)?;
        let fit = fit_gaussian_decay(&field)?;
        let loc2 = if cfg.grid.half_width() >= 2.0 { Some(field.localization_fraction(2.0)?) } else { None };
        if i == 0 {
            checks.push(Check::new(
                "decay rate matches sqrt(1 - c)",
                (fit.alpha - predicted).abs() <= DECAY_REL_TOL * predicted,
                format!("alpha_fit = {:.6}, predicted = {predicted:.6}", fit.alpha),
            ));
            write_side(out, "mode", &field_to_csv(&field))?;
        }
        modes.push(json!({
            "eigenvalue": report.spectrum_minus.eigenvalues[i],
            "decay": fit,
            "localization_r2": loc2,
            "localization_loc_radius": field.localization_fraction(report.loc_radius)?,
        }));
    }
    Ok((json!({ "n_minus": report.n_minus, "n_plus": report.n_plus, "alpha_predicted": predicted, "modes": modes, "index": report }), checks))
}

fn sweep(cfg: &ExperimentConfig, out: Option<&Path>) -> Outcome {
    let rows = perturbation_sweep(&cfg.c_values, &cfg.grid, &cfg.index_params());
    if let Some(err) = rows.iter().find_map(|r| r.error.as_ref()) {
        if err.contains("did not converge") && rows.iter().all(|r| r.error.is_some()) {
            return Err(RunError::NoConvergence(err.clone()));
        }
    }
    let side = write_side(out, "sweep", &sweep_to_csv(&rows))?;
    let mut checks = Vec::new();
    for r in &rows {
        let c = r.c;
        if let Some(err) = &r.error {
            checks.push(Check::new(format!("row c = {c}"), false, err.clone()));
            continue;
        }
        checks.push(Check::new(format!("delta = 1 at c = {c}"), r.delta == Some(1), format!("delta = {:?}", r.delta)));
        checks.push(Check::new(format!("winding = delta at c = {c}"), r.winding == r.delta, format!("winding = {:?}", r.winding)));
        let ok = matches!((r.alpha_error(), r.alpha_predicted), (Some(e), Some(p)) if e <= DECAY_REL_TOL * p);
        checks.push(Check::new(
            format!("decay rate at c = {c}"),
            ok,
            format!("alpha_fit = {:?}, predicted = {:?}", r.alpha_fit, r.alpha_predicted),
        ));
    }
    Ok((json!({ "rows": rows, "sweep_csv": side }), checks))
}

fn convergence(cfg: &ExperimentConfig, out: Option<&Path>) -> Outcome {
    let grids: Vec<GridSpec> =
        cfg.convergence_n.iter().map(|&n| GridSpec::new(cfg.grid.half_width(), n)).collect::<Result<_, _>>()?;
    let report = match convergence_study(&grids, &cfg.model, &cfg.eigen_options()) {
        Err(AnalysisError::DegenerateGrids(n)) => {
            return Err(ConfigError::Invalid {
                key: "convergence.n_values".into(),
                message: format!("need at least 3 distinct grid sizes, got {n}"),
            }
            .into())
        }
        other => other?,
    };
    let side = write_side(out, "convergence", &convergence_to_csv(&report))?;
    let checks = vec![
        Check::new(
            "second-eigenvalue order in [1.7, 2.3]",
            (1.7..=2.3).contains(&report.order_second),
            format!("p = {:.4}", report.order_second),
        ),
        Check::new("lowest-eigenvalue error decreases with h", report.monotone_first, format!("p = {:.4}", report.order_first)),
    ];
    Ok((json!({ "study": report, "convergence_csv": side }), checks))
}

fn winding(cfg: &ExperimentConfig) -> Outcome {
    let d = build_defect_operator(&cfg.model)?;
    let entry = d.entry(1, 0);
    let w = winding_number(entry, cfg.winding_radius, cfg.winding_samples)?;
    let checks = vec![Check::new("winding = 1", w == 1, format!("winding {w} of {entry}"))];
    Ok((
        json!({ "entry": entry.to_string(), "radius": cfg.winding_radius, "samples": cfg.winding_samples, "winding": w }),
        checks,
    ))
}

fn selftest(cfg: &ExperimentConfig) -> Outcome {
    let mut checks = Vec::new();
    let df = defect_dirac();
    let osc = BlockOperator::scalar(2, &oscillator());
    let minus_one = OperatorExpression::constant(crate::opcalc::coeff::int(-1));
    let sigma = BlockOperator::from_rows([[OperatorExpression::zero(), minus_one.clone()], [minus_one, OperatorExpression::zero()]]);
    let h_minus = df.adjoint().compose(&df).map_err(|e| RunError::Failed(e.to_string()))?;
    let h_plus = df.compose(&df.adjoint()).map_err(|e| RunError::Failed(e.to_string()))?;
    let want_minus = osc.add(&sigma).map_err(|e| RunError::Failed(e.to_string()))?;
    checks.push(Check::new("adjoint(D_F) D_F closed form", h_minus == want_minus, h_minus.to_string()));
    checks.push(Check::new("D_F adjoint(D_F) closed form", h_plus == osc, h_plus.to_string()));

    let commutator = OperatorExpression::d().compose(&OperatorExpression::z());
    let want = &OperatorExpression::z().compose(&OperatorExpression::d()) + &OperatorExpression::one();
    checks.push(Check::new("d z = z d + 1", commutator == want, commutator.to_string()));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let trials = 100;
    let (mut involutive, mut anti) = (0, 0);
    for _ in 0..trials {
        let a = random::random_block(&mut rng, 2, 2, 3);
        let b = random::random_block(&mut rng, 2, 2, 3);
        involutive += usize::from(a.adjoint().adjoint() == a);
        let lhs = a.compose(&b).map_err(|e| RunError::Failed(e.to_string()))?.adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).map_err(|e| RunError::Failed(e.to_string()))?;
        anti += usize::from(lhs == rhs);
    }
    checks.push(Check::new("adjoint is involutive", involutive == trials, format!("{involutive}/{trials}")));
    checks.push(Check::new("adjoint is anti-multiplicative", anti == trials, format!("{anti}/{trials}")));

    let mut associative = 0;
    let triples = 20;
    for _ in 0..triples {
        let (a, b, c) = (random::random_block(&mut rng, 2, 2, 2), random::random_block(&mut rng, 2, 2, 2), random::random_block(&mut rng, 2, 2, 2));
        let left = a.compose(&b).and_then(|ab| ab.compose(&c));
        let right = b.compose(&c).and_then(|bc| a.compose(&bc));
        associative += usize::from(matches!((left, right), (Ok(l), Ok(r)) if l == r));
    }
    checks.push(Check::new("compose is associative", associative == triples, format!("{associative}/{triples}")));

    let annihilated = match zero_mode_ansatz(&cfg.model)? {
        Some(psi) => {
            let d = build_defect_operator(&cfg.model)?;
            let out = d.apply_gaussian(&psi).map_err(|e| RunError::Failed(e.to_string()))?;
            checks.push(Check::new("D annihilates (alpha, 1) exp(-alpha |z|^2)", out.is_zero(), format!("alpha = {}", psi.alpha())));
            Some(out.is_zero())
        }
        None => None,
    };

    // the discrete and symbolic adjoints agree on interior rows
    let grid = GridSpec::new(4.0, 16)?;
    let lhs = discretize(&df, &grid).adjoint();
    let rhs = discretize(&df.adjoint(), &grid);
    let interior = (0..2 * grid.nodes()).filter(|&r| {
        let k = r % grid.nodes();
        let (i, j) = (k % grid.n(), k / grid.n());
        i > 0 && j > 0 && i + 1 < grid.n() && j + 1 < grid.n()
    });
    let worst = interior.map(|r| lhs.row_max_abs_diff(&rhs, r)).fold(0.0, f64::max);
    checks.push(Check::new("discrete adjoint matches on interior rows", worst == 0.0, format!("max deviation {worst:e}")));

    Ok((
        json!({
            "h_minus": h_minus.to_string(),
            "h_plus": h_plus.to_string(),
            "random_trials": trials,
            "zero_mode_annihilated": annihilated,
            "interior_adjoint_deviation": worst,
        }),
        checks,
    ))
}
