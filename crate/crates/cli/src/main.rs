mod config;
mod registry;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{PairMode, RawConfig, RunConfig};
use registry::{lookup, CATALOG};
use runner::Options;

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;

/// Exact verifier for the local structure of bilinear forms graphs.
#[derive(Parser, Debug)]
#[command(name = "bsc-verify", version, about)]
struct Cli {
    /// Field size (prime).
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Number of matrix rows.
    #[arg(long = "D", default_value_t = 3)]
    d: usize,
    /// Rows plus columns.
    #[arg(long = "N", default_value_t = 7)]
    n: usize,
    /// Distance between the base vertices x and y.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value_t = PairMode::Canonical)]
    pair: PairMode,
    /// Vertex x for `--pair explicit`, rows separated by ';'.
    #[arg(long)]
    x: Option<String>,
    /// Vertex y for `--pair explicit`.
    #[arg(long)]
    y: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Run the checks that sum over every vertex of the graph.
    #[arg(long)]
    heavy: bool,
    /// Longest word length for the balanced-word check.
    #[arg(long, default_value_t = 10)]
    n_max_words: usize,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, env = "BSC_THREADS", default_value_t = 0)]
    threads: usize,
    /// Directory for cached neighborhoods and BFS audits.
    #[arg(long, env = "BSC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Keep the full cross-distance table in memory.
    #[arg(long)]
    cross_table: bool,
    /// Print the check catalog and exit.
    #[arg(long)]
    list_checks: bool,
    /// Write the coordinate model as JSON to this path.
    #[arg(long)]
    export: Option<PathBuf>,
    /// Record per-group wall time in the report.
    #[arg(long)]
    timings: bool,
}

fn parse_checks(s: &str) -> Result<Vec<String>, String> {
    let names: Vec<String> = s
        .split(',')
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .map(String::from)
        .collect();
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(Vec::new());
    }
    match names.iter().find(|n| lookup(n).is_none()) {
        Some(bad) => Err(format!("unknown check {bad:?}; see --list-checks")),
        None => Ok(names),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.list_checks {
        for e in CATALOG {
            if e.exploratory {
                println!("{} (exploratory)", e.name);
            } else {
                println!("{}", e.name);
            }
        }
        return ExitCode::SUCCESS;
    }

    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }

    let checks = match parse_checks(&cli.checks) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let raw = RawConfig {
        q: cli.q,
        d: cli.d,
        n: cli.n,
        k: cli.k,
        pair: cli.pair,
        x: cli.x,
        y: cli.y,
        seed: cli.seed,
        checks,
        heavy: cli.heavy,
        n_max_words: cli.n_max_words,
    };
    let cfg = match RunConfig::validate(raw) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };

    let opts = Options {
        cache_dir: cli.cache_dir,
        cross_table: cli.cross_table,
        timings: cli.timings,
        progress: true,
        export: cli.export,
    };
    let report = match runner::run(&cfg, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };

    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &cli.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(EXIT_FAIL);
            }
        }
        None => println!("{text}"),
    }
    let s = report.summary;
    eprintln!(
        "{} passed, {} failed, {} skipped",
        s.pass, s.fail, s.skipped
    );
    if s.fail > 0 {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_selection() {
        assert!(parse_checks("all").unwrap().is_empty());
        assert!(parse_checks("").unwrap().is_empty());
        assert_eq!(
            parse_checks("n-commute, thm-bbalanced").unwrap(),
            ["n-commute", "thm-bbalanced"]
        );
        assert!(parse_checks("n-commute,bogus")
            .unwrap_err()
            .contains("bogus"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
