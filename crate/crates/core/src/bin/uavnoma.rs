//! Thin command-line front end over the library: single runs, parameter
//! sweeps, scheme comparisons, and convergence traces.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use uav_noma::experiment::{compare_schemes, run_single, SweepSpec, SweptParameter};
use uav_noma::output::{
    emit, result_rows_csv, result_rows_json, trace_csv, trace_json, OutputFormat,
};
use uav_noma::power::SolverParams;
use uav_noma::{Scheme, ScenarioConfig};

#[derive(Parser)]
#[command(name = "uavnoma", about = "Two-tier UAV-assisted NOMA uplink simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario configuration file (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread count (0 = library default). Never affects results.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario under one scheme and print a summary row.
    Run {
        #[command(flatten)]
        common: Common,
        /// Scheme: noma_optimal, noma_random, or oma_tdma.
        #[arg(long, default_value = "noma_optimal", value_parser = parse_scheme)]
        scheme: Scheme,
    },
    /// Sweep a scenario parameter over several values with paired trials.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to sweep: num_devices, num_sectors, or p_u_max.
        #[arg(long, value_parser = parse_param)]
        param: SweptParameter,
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Paired trials per value (minimum 2).
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Comma-separated schemes to evaluate.
        #[arg(long, value_delimiter = ',', default_values_t = vec![
            "noma_optimal".to_string(), "oma_tdma".to_string()
        ])]
        schemes: Vec<String>,
    },
    /// Compare all schemes at the configured operating point.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Paired trials (minimum 2).
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Emit the solver convergence trace for one scenario.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Scheme: noma_optimal or noma_random.
        #[arg(long, default_value = "noma_optimal", value_parser = parse_scheme)]
        scheme: Scheme,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::parse(s).ok_or_else(|| format!("unknown format '{s}', expected csv or json"))
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    Scheme::parse(s).ok_or_else(|| {
        format!("unknown scheme '{s}', expected noma_optimal, noma_random, or oma_tdma")
    })
}

fn parse_param(s: &str) -> Result<SweptParameter, String> {
    SweptParameter::parse(s).ok_or_else(|| {
        format!("unknown parameter '{s}', expected num_devices, num_sectors, or p_u_max")
    })
}

fn load_config(common: &Common) -> Result<ScenarioConfig, Box<dyn std::error::Error>> {
    let mut cfg = match &common.config {
        Some(path) => ScenarioConfig::from_path(path)?,
        None => ScenarioConfig::with_defaults(60, 1),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn setup_threads(threads: usize) {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("rayon pool is configured once at startup");
    }
}

fn main() {
    if let Err(e) = real_main() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn real_main() -> Result<(), Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { common, scheme } => {
            setup_threads(common.threads);
            let cfg = load_config(&common)?;
            let solver = SolverParams::from_config(&cfg);
            let run = run_single(&cfg, scheme, &solver)?;
            let content = match common.format {
                OutputFormat::Csv => {
                    let mut s = String::from(
                        "#schema=1\nscheme,sum_rate,served_fraction,nonconverged_solves,relay_bottleneck,seed\n",
                    );
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        scheme.label(),
                        run.report.sum_rate,
                        run.report.served_fraction,
                        run.nonconvergence_count,
                        run.report.relay_bottleneck,
                        cfg.seed
                    ));
                    s
                }
                OutputFormat::Json => {
                    let v = serde_json::json!({
                        "scheme": scheme.label(),
                        "sum_rate": run.report.sum_rate,
                        "sector_rates": run.report.sector_rates,
                        "served_fraction": run.report.served_fraction,
                        "nonconverged_solves": run.nonconvergence_count,
                        "relay_bottleneck": run.report.relay_bottleneck,
                        "seed": cfg.seed,
                    });
                    let mut s = serde_json::to_string_pretty(&v)?;
                    s.push('\n');
                    s
                }
            };
            emit(&content, common.out.as_deref())?;
        }
        Command::Sweep {
            common,
            param,
            values,
            trials,
            schemes,
        } => {
            setup_threads(common.threads);
            let cfg = load_config(&common)?;
            let solver = SolverParams::from_config(&cfg);
            let schemes = schemes
                .iter()
                .map(|s| parse_scheme(s))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = SweepSpec {
                parameter: param,
                values,
                trials,
                schemes,
                base: cfg,
            };
            let rows = uav_noma::experiment::run_sweep(&spec, &solver)?;
            let content = match common.format {
                OutputFormat::Csv => result_rows_csv(&rows),
                OutputFormat::Json => result_rows_json(&rows)?,
            };
            emit(&content, common.out.as_deref())?;
        }
        Command::Compare { common, trials } => {
            setup_threads(common.threads);
            let cfg = load_config(&common)?;
            let solver = SolverParams::from_config(&cfg);
            let rows = compare_schemes(&cfg, &Scheme::all(), trials, &solver)?;
            let content = match common.format {
                OutputFormat::Csv => result_rows_csv(&rows),
                OutputFormat::Json => result_rows_json(&rows)?,
            };
            emit(&content, common.out.as_deref())?;
        }
        Command::Trace { common, scheme } => {
            setup_threads(common.threads);
            let cfg = load_config(&common)?;
            let solver = SolverParams::from_config(&cfg);
            let run = run_single(&cfg, scheme, &solver)?;
            let content = match common.format {
                OutputFormat::Csv => trace_csv(&run.convergence_trace),
                OutputFormat::Json => trace_json(&run.convergence_trace)?,
            };
            emit(&content, common.out.as_deref())?;
        }
    }
    Ok(())
}
