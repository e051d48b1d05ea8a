use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use torsionlab_cli::params::{expand_grid, parse_list, Param};
use torsionlab_cli::registry::{self, CHECKS};
use torsionlab_cli::report::ReportSet;
use torsionlab_cli::runner::{run_all, Job, RunOptions};
use torsionlab_cli::suite::{SuiteConfig, DEFAULT_SUITE};
use torsionlab_cli::CliError;

#[derive(Parser)]
#[command(name = "torsionlab", version, about = "Exact verification of finite torsion computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List every check with its parameters and defaults.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one check; parameters accept comma-separated lists.
    Run {
        check_id: String,
        #[arg(long = "p")]
        p: Option<String>,
        #[arg(long = "k")]
        k: Option<String>,
        #[arg(long = "N")]
        big_n: Option<String>,
        #[arg(long = "g")]
        g: Option<String>,
        #[arg(long = "d")]
        d: Option<String>,
        #[arg(long = "r")]
        r: Option<String>,
        #[arg(long = "B")]
        big_b: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a suite file (the built-in suite when no config is given).
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Print the built-in suite and exit.
        #[arg(long)]
        print_default: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; results keep declaration order.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for randomized spot checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Attach relation matrices (and the S6 table) to reports that have them.
    #[arg(long)]
    dump_relations: bool,
    /// Record wall-clock time per check (reports are then not reproducible).
    #[arg(long)]
    timing: bool,
}

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn emit(set: &ReportSet, format: Format) -> ExitCode {
    match format {
        Format::Text => out(&set.to_text()),
        Format::Json => out(&format!("{}\n", set.to_json())),
    }
    if set.any_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn list(format: Format) {
    match format {
        Format::Text => {
            for c in CHECKS {
                let params = c
                    .params
                    .iter()
                    .map(|(p, d)| format!("--{p} {d}"))
                    .chain(c.seeded.then(|| "--seed 0".to_string()))
                    .collect::<Vec<_>>()
                    .join(" ");
                out(&format!("{:<20} {}\n", c.id, c.summary));
                if !params.is_empty() {
                    out(&format!("{:<20} defaults: {params}\n", ""));
                }
            }
        }
        Format::Json => {
            let items: Vec<_> = CHECKS
                .iter()
                .map(|c| {
                    let params: BTreeMap<&str, u64> = c.params.iter().map(|(p, d)| (p.name(), *d)).collect();
                    json!({"check_id": c.id, "summary": c.summary, "params": params, "seeded": c.seeded, "dump_relations": c.dump.is_some()})
                })
                .collect();
            out(&format!("{}\n", serde_json::to_string_pretty(&items).expect("list serializes")));
        }
    }
}

fn options(common: &Common) -> RunOptions {
    RunOptions {
        dump_relations: common.dump_relations,
        timing: common.timing,
    }
}

fn real_main(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::List { format } => {
            list(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            check_id,
            p,
            k,
            big_n,
            g,
            d,
            r,
            big_b,
            common,
        } => {
            let check = registry::find(&check_id)?;
            let mut given = BTreeMap::new();
            let raw = [
                (Param::P, p),
                (Param::K, k),
                (Param::N, big_n),
                (Param::G, g),
                (Param::D, d),
                (Param::R, r),
                (Param::B, big_b),
            ];
            for (param, value) in raw {
                let Some(value) = value else { continue };
                if !check.accepts(param) {
                    return Err(CliError::Usage(format!("check `{check_id}` does not take --{param}")));
                }
                let vals = parse_list(&value).map_err(|e| CliError::Usage(format!("--{param}: {e}")))?;
                given.insert(param, vals);
            }
            let seed = check.seeded.then_some(common.seed.unwrap_or(0));
            let jobs: Vec<Job> = expand_grid(check.params, &given, seed)
                .into_iter()
                .map(|params| Job {
                    check,
                    params,
                    expect: BTreeMap::new(),
                })
                .collect();
            let reports = run_all(&jobs, common.jobs.unwrap_or(1), options(&common))?;
            Ok(emit(&ReportSet::new(reports), common.format))
        }
        Command::Suite {
            config,
            print_default,
            common,
        } => {
            if print_default {
                out(DEFAULT_SUITE);
                return Ok(ExitCode::SUCCESS);
            }
            let text = match &config {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
                None => DEFAULT_SUITE.to_string(),
            };
            let cfg = SuiteConfig::parse(&text)?;
            let jobs = cfg.jobs(common.seed)?;
            if jobs.is_empty() {
                eprintln!("warning: suite contains no checks");
            }
            let threads = common.jobs.or(cfg.jobs).unwrap_or(1);
            let reports = run_all(&jobs, threads, options(&common))?;
            Ok(emit(&ReportSet::new(reports), common.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
