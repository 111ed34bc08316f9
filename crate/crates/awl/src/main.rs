//! Command-line front end: experiment subcommands, graph generation, sweeps,
//! and the acceptance suite.
//!
//! Exit codes: 0 success, 2 configuration error, 3 acceptance failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use awl::harness::{
    run_experiment, sweep, sweep_csv, verify_acceptance, ExperimentConfig, OutputFormat,
    RawConfig, Statistic,
};
use awl::shortest_path::dijkstra_trace;
use awl::DEFAULT_BASE_SEED;

#[derive(Parser)]
#[command(name = "awl", version, about = "Monte Carlo lab for optimization on randomly weighted graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default, Clone)]
struct CommonArgs {
    /// circulant | bip_regular | complete | complete_bipartite | mst_extremal | bip_extremal
    #[arg(long)]
    ensemble: Option<String>,
    /// vertex count (per side for bipartite ensembles)
    #[arg(long)]
    n: Option<usize>,
    /// density: degree = round(alpha * n)
    #[arg(long)]
    alpha: Option<f64>,
    /// explicit degree; copy size r for the extremal ensembles
    #[arg(long)]
    d: Option<usize>,
    /// add exactly m random absent edges
    #[arg(long)]
    m: Option<usize>,
    /// add each absent edge independently with probability p
    #[arg(long)]
    p: Option<f64>,
    /// weight distribution: uniform | exp
    #[arg(long)]
    dist: Option<String>,
    /// statistic (sp only: pair_distance | eccentricity | diameter | trace)
    #[arg(long)]
    stat: Option<String>,
    /// number of replications
    #[arg(long)]
    reps: Option<usize>,
    /// base seed (default: AWL_SEED env var, then the built-in default)
    #[arg(long)]
    seed: Option<u64>,
    /// output file
    #[arg(long)]
    out: Option<PathBuf>,
    /// output format: csv | json
    #[arg(long)]
    format: Option<String>,
    /// flat key = value config file; CLI flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one instance and write its edge list (weighted when --dist is given)
    Gen(CommonArgs),
    /// Minimum spanning tree experiment
    Mst(CommonArgs),
    /// Shortest path experiment (--stat pair_distance | eccentricity | diameter | trace)
    Sp(CommonArgs),
    /// Minimum-weight perfect matching experiment
    Match(CommonArgs),
    /// Incremental matching statistics (reps = 1 emits the raw per-step table)
    Increments(CommonArgs),
    /// Run every block of a config file, one summary row each
    Sweep(CommonArgs),
    /// Run the acceptance suite and report per-criterion verdicts
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        /// write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_seed() -> Result<u64, String> {
    match std::env::var("AWL_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("AWL_SEED is not a valid u64: {:?}", text)),
        Err(_) => Ok(DEFAULT_BASE_SEED),
    }
}

fn args_to_raw(a: &CommonArgs) -> RawConfig {
    RawConfig {
        ensemble: a.ensemble.clone(),
        n: a.n,
        alpha: a.alpha,
        d: a.d,
        m: a.m,
        p: a.p,
        dist: a.dist.clone(),
        stat: a.stat.clone(),
        reps: a.reps,
        seed: a.seed,
        out: a.out.clone(),
        format: a.format.clone(),
    }
}

/// Merge CLI flags over each config-file block (or use the flags alone).
fn load_raws(a: &CommonArgs) -> Result<Vec<RawConfig>, String> {
    let cli = args_to_raw(a);
    match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
            let blocks = RawConfig::parse_blocks(&text).map_err(|e| e.to_string())?;
            Ok(blocks.into_iter().map(|b| cli.clone().over(&b)).collect())
        }
        None => Ok(vec![cli]),
    }
}

fn resolve_single(a: &CommonArgs, forced_stat: Option<&str>) -> Result<ExperimentConfig, String> {
    let seed = default_seed()?;
    let mut raws = load_raws(a)?;
    if raws.len() != 1 {
        return Err("this subcommand takes a single-block config".to_string());
    }
    let mut raw = raws.remove(0);
    if let Some(stat) = forced_stat {
        raw.stat = Some(stat.to_string());
    }
    raw.resolve(seed).map_err(|e| e.to_string())
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("cannot write {}: {}", p.display(), e)),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn run_statistic_command(a: &CommonArgs, forced_stat: Option<&str>) -> Result<(), String> {
    let cfg = resolve_single(a, forced_stat)?;
    let out = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let rendered = if cfg.statistic == Statistic::MatchingIncrements {
        match cfg.format {
            OutputFormat::Json => out.to_json(),
            OutputFormat::Csv => {
                if cfg.reps == 1 {
                    // raw per-step record of the single replication
                    out.rep0_matching
                        .as_ref()
                        .expect("increments statistic records the run")
                        .increments_csv()
                } else {
                    out.increments_table_csv().expect("aggregate table present")
                }
            }
        }
    } else {
        out.render(cfg.format)
    };
    emit(&cfg.out, &rendered)?;
    if cfg.out.is_some() {
        println!("{}", out.summary.csv_row());
    }
    Ok(())
}

fn run_gen(a: &CommonArgs) -> Result<(), String> {
    // the statistic is irrelevant for generation; any valid one satisfies
    // the config schema
    let mut args = a.clone();
    if args.stat.is_none() {
        args.stat = Some("mst".to_string());
    }
    let cfg = resolve_single(&args, None)?;
    let wg = awl::harness::build_instance(&cfg, 0).map_err(|e| e.to_string())?;
    let mut buf = Vec::new();
    if a.dist.is_some() {
        wg.write_text(&mut buf).map_err(|e| e.to_string())?;
    } else {
        wg.graph.write_text(&mut buf).map_err(|e| e.to_string())?;
    }
    emit(&cfg.out, &String::from_utf8(buf).expect("edge list is utf-8"))
}

fn run_sp(a: &CommonArgs) -> Result<(), String> {
    if a.stat.as_deref() == Some("trace") {
        // one full instrumented run from vertex 0 on replication 0
        let mut args = a.clone();
        args.stat = Some("eccentricity".to_string());
        let cfg = resolve_single(&args, None)?;
        let wg = awl::harness::build_instance(&cfg, 0).map_err(|e| e.to_string())?;
        let trace = dijkstra_trace(&wg, 0).map_err(|e| e.to_string())?;
        return emit(&cfg.out, &trace.to_csv());
    }
    let mut args = a.clone();
    if args.stat.is_none() {
        args.stat = Some("pair_distance".to_string());
    }
    match args.stat.as_deref() {
        Some("pair_distance") | Some("eccentricity") | Some("diameter") => {}
        Some(other) => return Err(format!("sp statistic must be pair_distance, eccentricity, diameter, or trace; got {}", other)),
        None => unreachable!(),
    }
    run_statistic_command(&args, None)
}

fn run_sweep(a: &CommonArgs) -> Result<(), String> {
    if a.config.is_none() {
        return Err("sweep requires --config FILE".to_string());
    }
    let seed = default_seed()?;
    let raws = load_raws(a)?;
    let mut configs = Vec::new();
    let mut pre_errors = Vec::new();
    for (i, raw) in raws.iter().enumerate() {
        match raw.resolve(seed) {
            Ok(cfg) => configs.push(cfg),
            Err(e) => pre_errors.push((i, e.to_string())),
        }
    }
    if !pre_errors.is_empty() && configs.is_empty() {
        return Err(pre_errors[0].1.clone());
    }
    let mut rows = sweep(&configs);
    for (i, msg) in pre_errors {
        rows.insert(
            i.min(rows.len()),
            awl::harness::run::SweepRow {
                index: i,
                label: ",,,,,,".to_string(),
                result: Err(msg),
            },
        );
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.index = i;
    }
    let csv = sweep_csv(&rows);
    emit(&a.out, &csv)
}

fn real_main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<(), String> = match &cli.cmd {
        Cmd::Gen(a) => run_gen(a),
        Cmd::Mst(a) => run_statistic_command(a, Some("mst")),
        Cmd::Sp(a) => run_sp(a),
        Cmd::Match(a) => run_statistic_command(a, Some("matching_total")),
        Cmd::Increments(a) => run_statistic_command(a, Some("matching_increments")),
        Cmd::Sweep(a) => run_sweep(a),
        Cmd::Verify { seed, out } => {
            let base = match seed.map(Ok).unwrap_or_else(default_seed) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(2);
                }
            };
            let report = verify_acceptance(base);
            print!("{}", report.render_lines());
            if let Some(path) = out {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            return if report.all_passed { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    real_main()
}
