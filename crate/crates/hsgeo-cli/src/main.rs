//! `hsgeo`: batch front end for the Hilbert-Schmidt curvature engine.
//!
//! Subcommands: `ricci` (closed-form curvature queries), `verify` (dual-path
//! closed-form vs brute-force matrix with CSV/JSON reports), `sweep`
//! (principal-curvature asymptotics over a truncation grid), `counterexample`
//! (divergent bracket partial sums under a non-product weight), `bcdh`
//! (truncated composition remainder) and `selfadjoint` (coefficients of the
//! self-adjoint Ricci operator on a basis vector).
//!
//! Configuration is `key = value` text pointed to by `HSGEO_CONFIG`, with
//! command-line flags taking precedence. Exit codes: 0 success, 1 residuals
//! above tolerance in `verify`, 2 configuration/parse errors, 3 inadmissible
//! indices or violated preconditions.

mod config;
mod grid;

use clap::{Args, Parser, Subcommand};
use config::{CliError, Config, ExitCode};
use hsgeo::curvature::{self, CurvatureEngine};
use hsgeo::explog;
use hsgeo::report::{fmt17, CurvatureReport, ReportRow};
use hsgeo::scaling::counterexample_partial_sum;
use hsgeo::{AlgebraVector, Error, Family, ScalingSequence, TruncatedAlgebra};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "hsgeo",
    version,
    about = "Curvature engine for Hilbert-Schmidt operator families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Family tag: gl, so or tri
    #[arg(long, global = true)]
    family: Option<String>,

    /// Scaling spec: const:<c>, power:<p>, geometric:<r> or file:<path>
    #[arg(long, global = true)]
    scaling: Option<String>,

    /// Truncation level
    #[arg(long = "N", global = true)]
    n: Option<u32>,

    /// Truncation grid a:b:step (sweep)
    #[arg(long = "N-range", global = true)]
    n_range: Option<String>,

    /// First basis index
    #[arg(long, global = true)]
    i: Option<u32>,

    /// Second basis index
    #[arg(long, global = true)]
    j: Option<u32>,

    /// First principal index (alias of --i for sweeps)
    #[arg(long, global = true)]
    k: Option<u32>,

    /// Second principal index (alias of --j for sweeps)
    #[arg(long, global = true)]
    m: Option<u32>,

    /// Residual tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output file for reports (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format: csv or json
    #[arg(long, global = true)]
    format: Option<String>,

    /// Worker threads for grid commands (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Byte-identical output across runs and parallelism degrees.
    /// Grid results are always reduced in index order, so this holds
    /// regardless; the flag is accepted for script compatibility.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form truncated Ricci curvature of a basis vector
    Ricci {
        /// Also run the brute-force path and print the residual
        #[arg(long)]
        both: bool,
    },
    /// Dual-path verification matrix: closed form vs brute force
    Verify {
        /// Inject a fault of this size into one closed-form value
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Principal-curvature sweep over a truncation grid, with slope fit
    Sweep,
    /// Partial sums of the divergent bracket-norm construction
    Counterexample {
        /// Number of blocks in the partial sum
        #[arg(long)]
        terms: Option<u32>,
    },
    /// Truncated composition remainder ||exp(bcdh(x,y)) - exp(x)exp(y)||
    Bcdh {
        /// Truncation order, 1..=6
        #[arg(long)]
        order: Option<usize>,
        /// JSON matrix file for x ({"n":N,"rows":[[..],..]})
        #[arg(long)]
        x: Option<PathBuf>,
        /// JSON matrix file for y
        #[arg(long)]
        y: Option<PathBuf>,
    },
    /// Coefficients of the self-adjoint Ricci operator on xi_km
    Selfadjoint,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes; anything else is a
            // configuration error under the exit-code contract
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(ExitCode::Config as i32);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("hsgeo: {}", err.message);
            err.code
        }
    };
    std::process::exit(code as i32);
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = Config::load(&cli.common)?;
    if let Some(jobs) = cfg.jobs() {
        grid::set_jobs(jobs)?;
    }
    match cli.cmd {
        Cmd::Ricci { both } => cmd_ricci(&cfg, both),
        Cmd::Verify { perturb } => cmd_verify(&cfg, perturb),
        Cmd::Sweep => cmd_sweep(&cfg),
        Cmd::Counterexample { terms } => cmd_counterexample(&cfg, terms),
        Cmd::Bcdh { order, x, y } => cmd_bcdh(&cfg, order, x, y),
        Cmd::Selfadjoint => cmd_selfadjoint(&cfg),
    }
}

fn cmd_ricci(cfg: &Config, both: bool) -> Result<ExitCode, CliError> {
    let family = cfg.family()?.ok_or_else(|| CliError::config("--family is required"))?;
    let scaling = cfg.scaling()?.unwrap_or(ScalingSequence::Constant(1.0));
    let n = cfg.n()?.ok_or_else(|| CliError::config("--N is required"))?;
    let (i, j) = cfg.index_pair()?.ok_or_else(|| CliError::config("--i and --j are required"))?;

    let closed =
        curvature::ricci_closed_form(family, i, j, n, &scaling).map_err(CliError::from_core)?;
    println!("family={} scaling={} N={} (i,j)=({},{})", family.tag(), scaling.describe(), n, i, j);
    println!("closed_form = {}", fmt17(closed));
    if both {
        let alg = TruncatedAlgebra::new(family, scaling, n);
        let x = alg.basis_vector(i, j).map_err(CliError::from_core)?;
        let oracle = hsgeo::oracle::oracle_ricci(&x, &alg).map_err(CliError::from_core)?;
        let residual = (closed - oracle).abs() / (1.0 + closed.abs());
        println!("oracle = {}", fmt17(oracle));
        println!("residual = {}", fmt17(residual));
    }
    Ok(ExitCode::Success)
}

/// One (family, scaling, N) cell of the verification matrix: every admissible
/// base pair with both indices `<= min(4, N-2)` compared along both paths.
fn verify_cell(
    family: Family,
    scaling: &ScalingSequence,
    n: u32,
    pair: Option<(u32, u32)>,
) -> Result<Vec<ReportRow>, CliError> {
    let cap = 4.min(n.saturating_sub(2));
    let alg = TruncatedAlgebra::new(family, scaling.clone(), n);
    let oracle = hsgeo::oracle::Oracle::new(&alg).map_err(CliError::from_core)?;
    let mut rows = Vec::new();
    for i in 1..=cap {
        for j in 1..=cap {
            if !family.admits(i, j) {
                continue;
            }
            if let Some((pi, pj)) = pair {
                if (i, j) != (pi, pj) {
                    continue;
                }
            }
            let closed = curvature::ricci_closed_form(family, i, j, n, scaling)
                .map_err(CliError::from_core)?;
            let x = alg.basis_vector(i, j).map_err(CliError::from_core)?;
            let value = oracle.ricci(&x, &alg).map_err(CliError::from_core)?;
            let residual = (closed - value).abs() / (1.0 + closed.abs());
            rows.push(ReportRow {
                family: family.tag().to_string(),
                scaling: scaling.describe(),
                n,
                i,
                j,
                closed_form: closed,
                oracle: Some(value),
                residual: Some(residual),
            });
        }
    }
    Ok(rows)
}

fn cmd_verify(cfg: &Config, perturb: Option<f64>) -> Result<ExitCode, CliError> {
    let families = match cfg.family()? {
        Some(f) => vec![f],
        None => vec![Family::GeneralHS, Family::OrthogonalHS, Family::TriangularHS],
    };
    let scalings = match cfg.scaling()? {
        Some(s) => vec![s],
        None => vec![
            ScalingSequence::Constant(1.0),
            ScalingSequence::Power(1.0),
            ScalingSequence::Geometric(0.5f64.sqrt()),
        ],
    };
    let levels = match cfg.n()? {
        Some(n) => vec![n],
        None => vec![6, 8, 10, 12],
    };
    let pair = cfg.index_pair()?;
    let tol = cfg.tol()?.unwrap_or(1e-9);

    // validate an explicit pair against every requested cell up front, so
    // violated preconditions exit 3 before any computation runs
    if let Some((i, j)) = pair {
        for &family in &families {
            for &n in &levels {
                curvature::check_closed_form_indices(family, i, j, n)
                    .map_err(CliError::from_core)?;
            }
        }
    }

    let mut cells = Vec::new();
    for &family in &families {
        for scaling in &scalings {
            for &n in &levels {
                cells.push((family, scaling.clone(), n));
            }
        }
    }
    let results =
        grid::ordered_map(cells, |(family, scaling, n)| verify_cell(family, &scaling, n, pair))?;

    let mut report = CurvatureReport::default();
    for rows in results {
        for row in rows {
            report.push(row);
        }
    }
    if let Some(eps) = perturb {
        if let Some(row) = report.rows.first_mut() {
            row.closed_form += eps;
            let value = row.oracle.unwrap_or(0.0);
            row.residual = Some((row.closed_form - value).abs() / (1.0 + row.closed_form.abs()));
        }
    }

    cfg.emit(&match cfg.format()?.as_str() {
        "json" => report.to_json(),
        _ => report.to_csv(),
    })?;
    let worst = report.max_residual();
    eprintln!("verify: {} rows, max residual {}", report.rows.len(), fmt17(worst));
    if worst <= tol {
        Ok(ExitCode::Success)
    } else {
        Ok(ExitCode::ResidualFailure)
    }
}

fn cmd_sweep(cfg: &Config) -> Result<ExitCode, CliError> {
    let family = cfg.family()?.ok_or_else(|| CliError::config("--family is required"))?;
    let scaling = cfg.scaling()?.unwrap_or(ScalingSequence::Constant(1.0));
    let grid_levels = cfg.n_range()?.ok_or_else(|| CliError::config("--N-range is required"))?;
    let (k, m) = cfg
        .principal_pair()?
        .ok_or_else(|| CliError::config("--k and --m (or --i and --j) are required"))?;

    for &n in &grid_levels {
        curvature::check_closed_form_indices(family, k, m, n).map_err(CliError::from_core)?;
    }

    let values = {
        let scaling = scaling.clone();
        grid::ordered_map(grid_levels.clone(), move |n| match family {
            Family::GeneralHS => {
                curvature::ricci_closed_form(family, k, m, n, &scaling).map_err(CliError::from_core)
            }
            _ => curvature::principal_curvature(family, k, m, n, &scaling)
                .map_err(CliError::from_core),
        })?
    };
    let mut curve = hsgeo::PrincipalCurve::new(k, m);
    for (&n, &v) in grid_levels.iter().zip(&values) {
        curve.push(n, v);
    }
    let fit = curve.fit_top_half();

    let l2 = |q: u32| scaling.lambda(q) * scaling.lambda(q);
    let predicted = match family {
        // theorem N-coefficients
        Family::TriangularHS => -0.5 * l2(m) * l2(m),
        Family::OrthogonalHS => 0.125 * (2.0 * l2(k) - 3.0 * l2(m)) * (l2(m) - l2(k)),
        // no principal-curvature theorem; report the top-of-grid increment of
        // the closed form as the runtime prediction
        Family::GeneralHS => {
            let last = grid_levels.len() - 1;
            let dn = (grid_levels[last] - grid_levels[last - 1]) as f64;
            (values[last] - values[last - 1]) / dn
        }
    };

    cfg.emit(&curve.to_csv())?;
    if let Some(out) = cfg.out() {
        let mut fit_path = out.clone();
        fit_path.set_extension("fit.json");
        std::fs::write(&fit_path, serde_json::to_string_pretty(&fit).unwrap())
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", fit_path.display())))?;
    }
    println!("fitted slope    = {}", fmt17(fit.slope));
    println!("predicted slope = {}", fmt17(predicted));
    let verdict = if fit.slope < -1e-12 {
        "diverges -> -infinity"
    } else if fit.slope > 1e-12 {
        "diverges -> +infinity"
    } else {
        "bounded"
    };
    println!("verdict: {verdict}");
    Ok(ExitCode::Success)
}

fn cmd_counterexample(cfg: &Config, terms: Option<u32>) -> Result<ExitCode, CliError> {
    let k = match terms {
        Some(k) => k,
        None => cfg.u32_key("terms")?.unwrap_or(1000),
    };
    if k < 1 {
        return Err(CliError::config("--terms must be at least 1"));
    }
    let sum = counterexample_partial_sum(k);
    println!("partial_sum({k}) = {}", fmt17(sum));
    println!("partial_sum({k})/{k} = {}", fmt17(sum / k as f64));
    println!("verdict: unbounded");
    Ok(ExitCode::Success)
}

fn cmd_bcdh(
    cfg: &Config,
    order: Option<usize>,
    x_path: Option<PathBuf>,
    y_path: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let order = match order {
        Some(o) => o,
        None => cfg.usize_key("order")?.unwrap_or(4),
    };
    let family = cfg.family()?.unwrap_or(Family::GeneralHS);
    let scaling = cfg.scaling()?.unwrap_or(ScalingSequence::Constant(1.0));

    let load = |path: &PathBuf| -> Result<(u32, AlgebraVector), CliError> {
        let m = hsgeo::matio::read_matrix(path).map_err(CliError::from_core)?;
        let n = m.nrows() as u32;
        let alg = TruncatedAlgebra::new(family, scaling.clone(), n);
        Ok((n, alg.project_matrix(&m)))
    };
    let (n, x, y) = match (&x_path, &y_path) {
        (Some(px), Some(py)) => {
            let (nx, x) = load(px)?;
            let (ny, y) = load(py)?;
            if nx != ny {
                return Err(CliError::config(format!("matrix sizes differ: {nx} vs {ny}")));
            }
            (nx, x, y)
        }
        (None, None) => {
            // built-in non-commuting pair with |x| = |y| = 0.1; the chained
            // supports keep the degree-3 brackets nonzero in every family
            let n = cfg.n()?.unwrap_or(4);
            let unit = |entries: [(u32, u32); 2]| -> Result<AlgebraVector, CliError> {
                let v = AlgebraVector::from_entries(
                    family,
                    entries.iter().map(|&(i, j)| ((i, j), 1.0)),
                )
                .map_err(CliError::from_core)?;
                Ok(v.scaled(0.1 / v.norm()))
            };
            (n, unit([(1, 2), (2, 3)])?, unit([(2, 3), (3, 4)])?)
        }
        _ => return Err(CliError::config("--x and --y must be given together")),
    };

    let alg = TruncatedAlgebra::new(family, scaling, n);
    let z = explog::bcdh_truncated(&x, &y, order, &alg).map_err(CliError::from_core)?;
    let left = explog::exp_matrix(&z, &alg).map_err(CliError::from_core)?;
    let gx = explog::exp_matrix(&x, &alg).map_err(CliError::from_core)?;
    let gy = explog::exp_matrix(&y, &alg).map_err(CliError::from_core)?;
    let remainder = (left.matrix() - gx.matrix() * gy.matrix()).norm();
    println!("order = {order}");
    println!("|x| = {}, |y| = {}", fmt17(x.norm()), fmt17(y.norm()));
    println!("remainder = {}", fmt17(remainder));
    Ok(ExitCode::Success)
}

fn cmd_selfadjoint(cfg: &Config) -> Result<ExitCode, CliError> {
    let family = cfg.family()?.ok_or_else(|| CliError::config("--family is required"))?;
    let scaling = cfg.scaling()?.unwrap_or(ScalingSequence::Constant(1.0));
    let n = cfg.n()?.ok_or_else(|| CliError::config("--N is required"))?;
    let (k, m) = cfg
        .principal_pair()?
        .ok_or_else(|| CliError::config("--k and --m (or --i and --j) are required"))?;

    let alg = TruncatedAlgebra::new(family, scaling, n);
    let x = alg.basis_vector(k, m).map_err(CliError::from_core)?;
    let engine = CurvatureEngine::new(&alg).map_err(CliError::from_core)?;
    let rhat = engine.ricci_selfadjoint(&x).map_err(CliError::from_core)?;

    let mut out = String::from("i,j,coefficient\n");
    for (idx, c) in rhat.iter() {
        out.push_str(&format!("{},{},{}\n", idx.i, idx.j, fmt17(c)));
    }
    cfg.emit(&out)?;
    Ok(ExitCode::Success)
}

impl CliError {
    /// Map core errors to the exit-code contract: inadmissible indices and
    /// violated preconditions exit 3, everything else is a config error.
    fn from_core(e: Error) -> Self {
        let code = match e {
            Error::InadmissibleIndex { .. }
            | Error::IndexOutOfRange { .. }
            | Error::TruncationTooSmall { .. } => ExitCode::Precondition,
            _ => ExitCode::Config,
        };
        CliError { code, message: e.to_string() }
    }
}
