//! Command-line surface: classification, verification, stability verdicts,
//! region rasters, trajectory simulation, Schur tests and replication of the
//! worked examples, all with machine-readable output on stdout.

use crate::dynamics::{simulate, AlgorithmSpec};
use crate::envelope::{verify_local_minimax, verify_lrp, EnvelopeCfg};
use crate::fixtures::{fixture, fixture_ids};
use crate::optimality::{local_saddle_check, second_order_invertible};
use crate::oracle::{MirroredGame, SmoothGame};
use crate::quadratic::{GameParseError, QuadraticGame};
use crate::replication;
use crate::stability::{exponential_stability, region_raster, schur_real, RegionAlgo, Window};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_UNKNOWN_FIXTURE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "minimaxlab",
    about = "Classify optimal points of smooth zero-sum games and decide stability of gradient algorithms",
    long_about = None,
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for rasters and sweeps (default: MINIMAXLAB_THREADS or 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a quadratic game from a JSON file.
    Classify {
        /// Path to the game JSON ({"A": [[..]], "B": [[..]], "C": [[..]], "a": [..], "b": [..], "c": ..}).
        game: PathBuf,
        /// Eigenvalue tolerance for the semidefiniteness tests.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Verify a solution concept at a point of a registered fixture.
    Check {
        /// Fixture id (see `check --list`).
        fixture: Option<String>,
        /// Comma-separated point, x-coordinates first.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, value_enum)]
        concept: Option<Concept>,
        /// Radii for the envelope tests.
        #[arg(long, default_value = "0.1,0.05,0.01", allow_hyphen_values = true)]
        eps_list: String,
        /// Own-variable window for the envelope minimization test.
        #[arg(long, default_value_t = 0.05)]
        x_radius: f64,
        /// Sampling radius for the saddle inequalities.
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        /// Tolerance for derivative tests.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// List the registered fixtures and exit.
        #[arg(long)]
        list: bool,
    },
    /// Exponential-stability verdict for an algorithm at a point.
    Stability {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        /// Point, comma-separated, x-coordinates first (default: the fixture's reference point).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Rasterize a stability region over a λ-plane window to CSV.
    Region {
        /// gda | eg | eg-limit | ogd | ogd-limit | hb | nag | all
        #[arg(long)]
        algo: String,
        /// β for eg/hb/nag, k for ogd.
        #[arg(long, allow_hyphen_values = true)]
        param: Option<f64>,
        /// re_min,re_max,im_min,im_max
        #[arg(long, default_value = "-2.5,0.5,-1.5,1.5", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 801)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an algorithm and export the trajectory.
    Simulate {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        /// Initial point, comma-separated, x-coordinates first.
        #[arg(long, allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        stop_tol: f64,
        #[arg(long, default_value_t = 1e8)]
        divergence_bound: f64,
        /// Trajectory file; the summary always goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TrajectoryFormat::Csv)]
        format: TrajectoryFormat,
    },
    /// Test whether a real polynomial has all roots inside the unit disk.
    Schur {
        /// Coefficients a0,a1,...,an of a0 λ^n + ... + an.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Re-run the worked-example replication cases.
    Replicate {
        /// Case id; use --all for the whole table.
        case: Option<String>,
        #[arg(long)]
        all: bool,
        /// List available cases and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct TargetArgs {
    /// Fixture id.
    #[arg(long)]
    fixture: Option<String>,
    /// Path to a quadratic game JSON file.
    #[arg(long)]
    game: Option<PathBuf>,
}

#[derive(Args)]
struct AlgoArgs {
    /// gda | hb | nag | eg | past-eg | ogd
    #[arg(long)]
    algo: String,
    #[arg(long, default_value_t = 0.1)]
    alpha1: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha2: f64,
    /// Momentum (hb/nag) or extra-gradient ratio (eg/past-eg).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Optimistic coefficient (ogd), must be > 1.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    alternating: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Concept {
    Saddle,
    Minimax,
    Maximin,
    Lrp,
    #[value(name = "second-order")]
    SecondOrder,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrajectoryFormat {
    Csv,
    Json,
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<GameParseError> for CliError {
    fn from(e: GameParseError) -> Self {
        match e {
            GameParseError::Json(_) => CliError::new(EXIT_PARSE, e.to_string()),
            GameParseError::Dimension(_) => CliError::new(EXIT_DIMENSION, e.to_string()),
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("MINIMAXLAB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    match dispatch(cli.command, cli.seed, threads) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: Command, seed: u64, threads: usize) -> Result<i32, CliError> {
    match cmd {
        Command::Classify { game, tol } => cmd_classify(&game, tol),
        Command::Check { fixture, point, concept, eps_list, x_radius, radius, tol, list } => {
            if list {
                for id in fixture_ids() {
                    let fx = crate::fixtures::fixture(id).unwrap();
                    println!("{id}: {}", fx.description);
                }
                return Ok(EXIT_OK);
            }
            let Some(fixture) = fixture else {
                return Err(CliError::new(EXIT_PARSE, "missing fixture id (or use --list)"));
            };
            let Some(concept) = concept else {
                return Err(CliError::new(EXIT_PARSE, "missing --concept"));
            };
            cmd_check(&fixture, point.as_deref(), concept, &eps_list, x_radius, radius, tol)
        }
        Command::Stability { target, algo, point } => cmd_stability(&target, &algo, point.as_deref()),
        Command::Region { algo, param, window, res, out } => {
            cmd_region(&algo, param, &window, res, &out, threads)
        }
        Command::Simulate { target, algo, z0, max_iters, stop_tol, divergence_bound, out, format } => {
            cmd_simulate(&target, &algo, &z0, max_iters, stop_tol, divergence_bound, out.as_deref(), format)
        }
        Command::Schur { coeffs } => cmd_schur(&coeffs),
        Command::Replicate { case, all, list } => {
            if list {
                for c in replication::cases() {
                    println!("{}: {}", c.id, c.description);
                }
                return Ok(EXIT_OK);
            }
            cmd_replicate(case.as_deref(), all, seed, threads)
        }
    }
}

fn cmd_classify(path: &std::path::Path, tol: f64) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let game = QuadraticGame::from_json(&text)?;
    let report = game.classify(tol);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(EXIT_OK)
}

fn lookup_fixture(id: &str) -> Result<crate::fixtures::Fixture, CliError> {
    fixture(id).ok_or_else(|| CliError::new(EXIT_UNKNOWN_FIXTURE, format!("unknown fixture '{id}'")))
}

fn parse_point(text: &str, nx: usize, ny: usize) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let vals: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|e| CliError::new(EXIT_PARSE, format!("bad point '{text}': {e}")))?;
    if vals.len() != nx + ny {
        return Err(CliError::new(
            EXIT_DIMENSION,
            format!("point has {} coordinates, the game needs {}", vals.len(), nx + ny),
        ));
    }
    let (x, y) = vals.split_at(nx);
    Ok((x.to_vec(), y.to_vec()))
}

fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| CliError::new(EXIT_PARSE, format!("bad list '{text}': {e}")))
}

fn cmd_check(
    fixture_id: &str,
    point: Option<&str>,
    concept: Concept,
    eps_list: &str,
    x_radius: f64,
    radius: f64,
    tol: f64,
) -> Result<i32, CliError> {
    let fx = lookup_fixture(fixture_id)?;
    let (x, y) = match point {
        Some(p) => parse_point(p, fx.oracle.nx(), fx.oracle.ny())?,
        None => fx.point.clone(),
    };
    let eps = parse_list(eps_list)?;
    let cfg = EnvelopeCfg::default();
    let value = match concept {
        Concept::Saddle => {
            let check = local_saddle_check(fx.oracle.as_ref(), (&x, &y), radius, tol.max(1e-9));
            serde_json::to_value(&check).expect("serializable")
        }
        Concept::Minimax => {
            let v = verify_local_minimax(fx.oracle.as_ref(), (&x, &y), &eps, x_radius, &cfg)
                .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
            serde_json::to_value(&v).expect("serializable")
        }
        Concept::Maximin => {
            let mirrored = MirroredGame::new(fx.oracle.as_ref());
            let v = verify_local_minimax(&mirrored, (&y, &x), &eps, x_radius, &cfg)
                .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
            serde_json::to_value(&v).expect("serializable")
        }
        Concept::Lrp => {
            let mut radii = eps.clone();
            if !radii.contains(&0.0) {
                radii.push(0.0);
            }
            let v = verify_lrp(fx.oracle.as_ref(), (&x, &y), &radii, &radii, &cfg)
                .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
            serde_json::to_value(&v).expect("serializable")
        }
        Concept::SecondOrder => {
            let rep = second_order_invertible(fx.oracle.as_ref(), (&x, &y), tol)
                .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
            serde_json::to_value(&rep).expect("serializable")
        }
    };
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    Ok(EXIT_OK)
}

fn build_spec(algo: &AlgoArgs) -> Result<AlgorithmSpec, CliError> {
    let err = |m: String| CliError::new(EXIT_PARSE, m);
    let spec = match algo.algo.as_str() {
        "gda" => AlgorithmSpec::gda(algo.alpha1, algo.alpha2),
        "hb" => AlgorithmSpec::hb(algo.alpha1, algo.alpha2, algo.beta.unwrap_or(0.0)),
        "nag" => AlgorithmSpec::nag(algo.alpha1, algo.alpha2, algo.beta.unwrap_or(0.0)),
        "eg" => AlgorithmSpec::eg(algo.alpha1, algo.alpha2, algo.beta.unwrap_or(1.0))
            .map_err(|e| err(e.to_string()))?,
        "past-eg" => AlgorithmSpec::past_eg(algo.alpha1, algo.alpha2, algo.beta.unwrap_or(1.0))
            .map_err(|e| err(e.to_string()))?,
        "ogd" => AlgorithmSpec::ogd(algo.k.unwrap_or(2.0), algo.alpha1, algo.alpha2)
            .map_err(|e| err(e.to_string()))?,
        other => return Err(err(format!("unknown algorithm '{other}'"))),
    };
    if algo.alternating {
        return spec.alternating().map_err(|e| err(e.to_string()));
    }
    Ok(spec)
}

enum Target {
    Fixture(crate::fixtures::Fixture),
    Game(QuadraticGame),
}

impl Target {
    fn oracle(&self) -> &dyn SmoothGame {
        match self {
            Target::Fixture(f) => f.oracle.as_ref(),
            Target::Game(g) => g,
        }
    }

    fn default_point(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Target::Fixture(f) => f.point.clone(),
            Target::Game(g) => (vec![0.0; g.n()], vec![0.0; g.m()]),
        }
    }
}

fn resolve_target(target: &TargetArgs) -> Result<Target, CliError> {
    match (&target.fixture, &target.game) {
        (Some(id), None) => Ok(Target::Fixture(lookup_fixture(id)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
            Ok(Target::Game(QuadraticGame::from_json(&text)?))
        }
        _ => Err(CliError::new(EXIT_PARSE, "give exactly one of --fixture or --game")),
    }
}

fn cmd_stability(target: &TargetArgs, algo: &AlgoArgs, point: Option<&str>) -> Result<i32, CliError> {
    let target = resolve_target(target)?;
    let oracle = target.oracle();
    let (x, y) = match point {
        Some(p) => parse_point(p, oracle.nx(), oracle.ny())?,
        None => target.default_point(),
    };
    let spec = build_spec(algo)?;
    let verdict = exponential_stability(&spec, oracle, (&x, &y))
        .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&verdict.to_json()).expect("serializable"));
    Ok(EXIT_OK)
}

fn parse_window(text: &str) -> Result<Window, CliError> {
    let vals = parse_list(text)?;
    if vals.len() != 4 {
        return Err(CliError::new(EXIT_PARSE, "window needs re_min,re_max,im_min,im_max"));
    }
    Ok(Window { re_min: vals[0], re_max: vals[1], im_min: vals[2], im_max: vals[3] })
}

fn cmd_region(
    algo: &str,
    param: Option<f64>,
    window: &str,
    res: usize,
    out: &std::path::Path,
    threads: usize,
) -> Result<i32, CliError> {
    let window = parse_window(window)?;
    if res < 2 {
        return Err(CliError::new(EXIT_PARSE, "resolution must be at least 2 per axis"));
    }
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(out)
            .map_err(|e| CliError::new(EXIT_FAILURE, format!("cannot create {}: {e}", out.display())))?,
    );
    let mut single = |a: RegionAlgo| -> Result<(), CliError> {
        let grid = region_raster(a, window, res, res, threads);
        writeln!(file, "re,im,stable").map_err(io_err)?;
        for i_im in 0..res {
            for i_re in 0..res {
                let l = grid.lambda_at(i_re, i_im);
                writeln!(file, "{},{},{}", l.re, l.im, grid.at(i_re, i_im) as u8).map_err(io_err)?;
            }
        }
        Ok(())
    };
    match algo {
        "gda" => single(RegionAlgo::Gda)?,
        "eg" => single(RegionAlgo::Eg { beta: param.unwrap_or(1.0) })?,
        "eg-limit" => single(RegionAlgo::EgLimit)?,
        "ogd" => single(RegionAlgo::Ogd { k: param.unwrap_or(2.0) })?,
        "ogd-limit" => single(RegionAlgo::OgdLimit)?,
        "hb" => single(RegionAlgo::Hb { beta: param.unwrap_or(0.4) })?,
        "nag" => single(RegionAlgo::Nag { beta: param.unwrap_or(0.4) })?,
        "all" => {
            let beta = param.unwrap_or(0.4);
            let grids = [
                region_raster(RegionAlgo::Gda, window, res, res, threads),
                region_raster(RegionAlgo::Eg { beta: 1.0 }, window, res, res, threads),
                region_raster(RegionAlgo::Ogd { k: 2.0 }, window, res, res, threads),
                region_raster(RegionAlgo::Hb { beta }, window, res, res, threads),
                region_raster(RegionAlgo::Nag { beta }, window, res, res, threads),
            ];
            writeln!(file, "re,im,gda,eg_b1,ogd_k2,hb_b,nag_b").map_err(io_err)?;
            for i_im in 0..res {
                for i_re in 0..res {
                    let l = grids[0].lambda_at(i_re, i_im);
                    writeln!(
                        file,
                        "{},{},{},{},{},{},{}",
                        l.re,
                        l.im,
                        grids[0].at(i_re, i_im) as u8,
                        grids[1].at(i_re, i_im) as u8,
                        grids[2].at(i_re, i_im) as u8,
                        grids[3].at(i_re, i_im) as u8,
                        grids[4].at(i_re, i_im) as u8,
                    )
                    .map_err(io_err)?;
                }
            }
        }
        other => return Err(CliError::new(EXIT_PARSE, format!("unknown region algorithm '{other}'"))),
    }
    Ok(EXIT_OK)
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::new(EXIT_FAILURE, format!("write failed: {e}"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    target: &TargetArgs,
    algo: &AlgoArgs,
    z0: &str,
    max_iters: usize,
    stop_tol: f64,
    divergence_bound: f64,
    out: Option<&std::path::Path>,
    format: TrajectoryFormat,
) -> Result<i32, CliError> {
    let target = resolve_target(target)?;
    let oracle = target.oracle();
    let z0 = parse_list(z0)?;
    if z0.len() != oracle.nx() + oracle.ny() {
        return Err(CliError::new(
            EXIT_DIMENSION,
            format!("z0 has {} coordinates, the game needs {}", z0.len(), oracle.nx() + oracle.ny()),
        ));
    }
    let spec = build_spec(algo)?;
    let rec = simulate(&spec, oracle, &z0, max_iters, stop_tol, divergence_bound, None)
        .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    if let Some(path) = out {
        let mut file = std::io::BufWriter::new(
            std::fs::File::create(path)
                .map_err(|e| CliError::new(EXIT_FAILURE, format!("cannot create {}: {e}", path.display())))?,
        );
        match format {
            TrajectoryFormat::Csv => {
                let n = oracle.nx();
                let m = oracle.ny();
                let header: Vec<String> = std::iter::once("iter".to_string())
                    .chain((0..n).map(|i| format!("x{i}")))
                    .chain((0..m).map(|j| format!("y{j}")))
                    .chain(std::iter::once("vnorm".to_string()))
                    .collect();
                writeln!(file, "{}", header.join(",")).map_err(io_err)?;
                for (t, (z, vn)) in rec.iterates.iter().zip(&rec.vector_field_norms).enumerate() {
                    let coords: Vec<String> = z.iter().map(|v| v.to_string()).collect();
                    writeln!(file, "{t},{},{vn}", coords.join(",")).map_err(io_err)?;
                }
            }
            TrajectoryFormat::Json => {
                serde_json::to_writer_pretty(&mut file, &rec)
                    .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
            }
        }
    }
    let summary = serde_json::json!({
        "converged": rec.converged,
        "diverged": rec.diverged,
        "iterations_used": rec.iterations_used,
        "final_vector_field_norm": rec.vector_field_norms.last(),
        "final_state": rec.iterates.last(),
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    Ok(EXIT_OK)
}

fn cmd_schur(coeffs: &str) -> Result<i32, CliError> {
    let coeffs = parse_list(coeffs)?;
    let inside = schur_real(&coeffs).map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))?;
    let roots = crate::linalg::poly_roots(&coeffs)
        .map(|rs| rs.iter().map(|r| vec![r.re, r.im]).collect::<Vec<_>>())
        .unwrap_or_default();
    let value = serde_json::json!({
        "all_roots_inside_unit_disk": inside,
        "roots": roots,
    });
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    Ok(EXIT_OK)
}

fn cmd_replicate(case: Option<&str>, all: bool, seed: u64, threads: usize) -> Result<i32, CliError> {
    let mut failures = 0;
    let run_and_print = |id: &str, result: replication::CaseResult, failures: &mut i32| {
        match result {
            Ok(()) => println!("{id}: PASS"),
            Err(msg) => {
                println!("{id}: FAIL — {msg}");
                *failures += 1;
            }
        }
    };
    if all {
        for c in replication::cases() {
            run_and_print(c.id, (c.run)(seed, threads), &mut failures);
        }
    } else if let Some(id) = case {
        match replication::run_case(id, seed, threads) {
            Some(result) => run_and_print(id, result, &mut failures),
            None => {
                // fall back to per-fixture spot checks
                if fixture(id).is_some() {
                    run_and_print(id, replication::fixture_spot_check(id), &mut failures);
                } else {
                    return Err(CliError::new(EXIT_UNKNOWN_FIXTURE, format!("unknown case '{id}'")));
                }
            }
        }
    } else {
        return Err(CliError::new(EXIT_PARSE, "give a case id or --all"));
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILURE })
}
