//! qcw: build the contextuality graph family and its qudit realization,
//! verify every claimed property, optimize the inequality, render Majorana
//! constellations, and run finite-shot simulations.
//!
//! Exit codes: 0 when all requested checks pass, 2 on a check failure,
//! 1 on usage or I/O errors.

use std::collections::BTreeMap;
use std::error::Error;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use qcw_core::formats;
use qcw_core::svg::render_svg;
use qcw_core::{
    build_family_graph, build_measurements, classical_analysis, constellation,
    hardy_quantum_report, independence_number, kcbs_value, max_violation_state, onc_threshold,
    perturb_family, simulate_contexts, verify_family, Graph, MeasurementFamily,
};

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "qcw", version, about = "Qudit contextuality workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Write the main output here instead of stdout (atomic: temp + rename).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Build the measurement family for n vertices and emit it as JSON.
    Construct {
        #[arg(long)]
        n: u32,
    },
    /// Check orthogonality, Hardy spans, P(1|1), beta, and the classical side.
    Verify {
        #[arg(long)]
        n: Option<u32>,
        /// Audit a family from a JSON file instead of building one.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The inequality value beta against its classical bound.
    Kcbs {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// The Hardy span conditions and P(1|1).
    Hardy {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Exhaustive deterministic-assignment analysis of the graph.
    Classical {
        #[arg(long)]
        n: Option<u32>,
        /// Analyze a graph from a JSON file instead of building one.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Maximize beta over states for the fixed measurements (top eigenvalue).
    Optimize {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        #[arg(long, default_value_t = 20_000)]
        iters: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, env = "QCW_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Majorana constellations of the state and every measurement vector.
    Majorana {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Discs per row in the SVG grid.
        #[arg(long, default_value_t = 4)]
        columns: usize,
    },
    /// Precision threshold below which no epsilon-faithful model exists.
    Onc {
        #[arg(long)]
        n: u32,
        /// Observed violation above the classical bound (default 1/9).
        #[arg(long, default_value_t = 1.0 / 9.0)]
        delta: f64,
    },
    /// Finite-shot Born-rule sampling of every context.
    Simulate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        /// Per-(vertex, context) projector jitter amplitude.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, env = "QCW_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// CSV sweep of the simulator over noise amplitudes and seeds.
    Sweep {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.0,0.001,0.01,0.1")]
        etas: Vec<f64>,
        /// Number of seeds per eta, starting at --seed.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, env = "QCW_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

/// Loads a family from --in or builds it from --n; exactly one is required.
fn load_family(n: Option<u32>, input: Option<&Path>) -> CliResult<MeasurementFamily> {
    match (n, input) {
        (Some(n), None) => Ok(build_measurements(n)?),
        (None, Some(path)) => Ok(formats::family_from_json(&fs::read_to_string(path)?)?),
        _ => Err("provide exactly one of --n or --in".into()),
    }
}

fn load_graph(n: Option<u32>, input: Option<&Path>) -> CliResult<Graph> {
    match (n, input) {
        (Some(n), None) => Ok(build_family_graph(n)?),
        (None, Some(path)) => Ok(formats::graph_from_json(&fs::read_to_string(path)?)?),
        _ => Err("provide exactly one of --n or --in".into()),
    }
}

/// Writes to --out atomically (temp file in place, then rename), or stdout.
fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, content)?;
            fs::rename(&tmp, path)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn summary(quiet: bool, line: String) {
    if !quiet {
        eprintln!("{line}");
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    let out = cli.out.as_deref();
    let quiet = cli.quiet;
    match &cli.command {
        Command::Construct { n } => {
            let family = build_measurements(*n)?;
            emit(out, &formats::family_to_json(&family))?;
            summary(quiet, format!("constructed family n={} in dimension d={}", n, family.d()));
            Ok(true)
        }
        Command::Verify { n, input, tol } => {
            let family = load_family(*n, input.as_deref())?;
            let graph = build_family_graph(family.n())?;
            let report = verify_family(&graph, &family, *tol)?;
            emit(out, &formats::report_to_json(&report))?;
            summary(
                quiet,
                format!(
                    "verify n={}: exclusivity {} (worst {:.3e}), hardy {} (residuals {:.3e}/{:.3e}), p11={:.9}, beta={:.9}, alpha={} -> {}",
                    report.n,
                    if report.exclusivity_ok { "ok" } else { "FAIL" },
                    report.worst_edge_overlap,
                    if report.hardy_conditions_ok { "ok" } else { "FAIL" },
                    report.residual_a,
                    report.residual_b,
                    report.p11,
                    report.beta,
                    report.classical_alpha,
                    if report.all_pass() { "PASS" } else { "FAIL" }
                ),
            );
            Ok(report.all_pass())
        }
        Command::Kcbs { n, input } => {
            let family = load_family(*n, input.as_deref())?;
            let graph = build_family_graph(family.n())?;
            let beta = kcbs_value(&family);
            let bound = independence_number(&graph)?;
            emit(out, &formats::kcbs_to_json(family.n(), beta, bound))?;
            let pass = beta > bound as f64;
            summary(
                quiet,
                format!(
                    "kcbs n={}: beta={beta:.9} vs classical bound {bound} -> {}",
                    family.n(),
                    if pass { "VIOLATION" } else { "no violation" }
                ),
            );
            Ok(pass)
        }
        Command::Hardy { n, input, tol } => {
            let family = load_family(*n, input.as_deref())?;
            let graph = build_family_graph(family.n())?;
            let hardy = hardy_quantum_report(&graph, &family, *tol)?;
            emit(
                out,
                &formats::hardy_to_json(
                    family.n(),
                    hardy.p11,
                    hardy.residual_a,
                    hardy.residual_b,
                    hardy.conditions_ok,
                ),
            )?;
            let pass = hardy.conditions_ok && hardy.p11 > 0.0;
            summary(
                quiet,
                format!(
                    "hardy n={}: p11={:.9}, residuals {:.3e}/{:.3e} -> {}",
                    family.n(),
                    hardy.p11,
                    hardy.residual_a,
                    hardy.residual_b,
                    if pass { "PASS" } else { "FAIL" }
                ),
            );
            Ok(pass)
        }
        Command::Classical { n, input } => {
            let graph = load_graph(*n, input.as_deref())?;
            let analysis = classical_analysis(&graph)?;
            emit(out, &formats::classical_to_json(&graph, &analysis))?;
            summary(
                quiet,
                format!(
                    "classical n={}: alpha={}, hardy with X1 possible: {:?}",
                    graph.n(),
                    analysis.alpha,
                    analysis.hardy_possible_with_x1
                ),
            );
            Ok(true)
        }
        Command::Optimize { n, input, restarts, iters, tol, seed } => {
            let family = load_family(*n, input.as_deref())?;
            let outcome = max_violation_state(&family, *restarts, *iters, *tol, *seed)?;
            emit(out, &formats::optimization_to_json(&outcome))?;
            summary(
                quiet,
                format!(
                    "optimize n={}: lambda_max={:.9} after {} iterations ({} restarts, converged: {})",
                    family.n(),
                    outcome.lambda_max,
                    outcome.iterations,
                    outcome.restarts_used,
                    outcome.converged
                ),
            );
            Ok(outcome.converged)
        }
        Command::Majorana { n, input, format, columns } => {
            let family = load_family(*n, input.as_deref())?;
            let state = constellation(family.state())?;
            let mut vectors = BTreeMap::new();
            for (&v, vec) in family.vectors() {
                vectors.insert(v, constellation(vec)?);
            }
            match format {
                OutputFormat::Json => {
                    emit(
                        out,
                        &formats::family_constellations_to_json(
                            family.n(),
                            family.d(),
                            &state,
                            &vectors,
                        ),
                    )?;
                }
                OutputFormat::Svg => {
                    let mut items = vec![("psi".to_string(), state)];
                    for (v, c) in vectors {
                        items.push((format!("v{v}"), c));
                    }
                    emit(out, &render_svg(&items, *columns))?;
                }
            }
            summary(
                quiet,
                format!(
                    "majorana n={}: {} constellations of {} points",
                    family.n(),
                    family.n() + 1,
                    family.d() - 1
                ),
            );
            Ok(true)
        }
        Command::Onc { n, delta } => {
            let threshold = onc_threshold(*n, *delta)?;
            emit(out, &formats::onc_to_json(&threshold))?;
            summary(
                quiet,
                format!(
                    "onc n={n}: epsilon must stay below {:.9} for delta={:.9}",
                    threshold.epsilon_bound, threshold.delta
                ),
            );
            Ok(true)
        }
        Command::Simulate { n, shots, noise, seed } => {
            let family = build_measurements(*n)?;
            let map = perturb_family(&family, *noise, *seed)?;
            let result = simulate_contexts(&map, family.state(), *shots, *seed)?;
            emit(out, &formats::simulation_to_json(*n, &result))?;
            summary(
                quiet,
                format!(
                    "simulate n={n} shots={shots} eta={noise}: beta={:.6}, exclusivity violation={:.3e}, epsilon={:.6}",
                    result.empirical_beta,
                    result.empirical_exclusivity_violation,
                    result.epsilon_estimate
                ),
            );
            Ok(true)
        }
        Command::Sweep { n, shots, etas, seeds, seed } => {
            let family = build_measurements(*n)?;
            let mut csv = String::from(formats::SWEEP_CSV_HEADER);
            csv.push('\n');
            for &eta in etas {
                for k in 0..*seeds {
                    let run_seed = seed + k;
                    let map = perturb_family(&family, eta, run_seed)?;
                    let result = simulate_contexts(&map, family.state(), *shots, run_seed)?;
                    let delta = (result.empirical_beta - 2.0).max(0.0);
                    let bound = onc_threshold(*n, delta)?.epsilon_bound;
                    csv.push_str(&formats::sweep_csv_row(
                        *n,
                        eta,
                        run_seed,
                        *shots,
                        result.empirical_beta,
                        result.epsilon_estimate,
                        bound,
                    ));
                    csv.push('\n');
                }
            }
            emit(out, csv.trim_end())?;
            summary(
                quiet,
                format!("sweep n={n}: {} etas x {seeds} seeds at {shots} shots", etas.len()),
            );
            Ok(true)
        }
    }
}
