use std::io::{Read, Write};
use std::process;

use clap::Parser;
use rayon::prelude::*;

use circuit_roots::counter::CountOptions;
use circuit_roots::io::{parse, run, ExitCode, Report, RunFlags, Targets};

/// Count real roots of circuit polynomial systems given as JSON lines.
#[derive(Parser, Debug)]
#[command(name = "count", version)]
struct Args {
    /// Roots in the positive orthant (default when no target is given).
    #[arg(long)]
    positive: bool,
    /// Roots in the real torus.
    #[arg(long)]
    torus: bool,
    /// Roots in real affine space.
    #[arg(long)]
    affine: bool,
    /// Cross-check counts by sampling and, for n = 1, by direct isolation.
    #[arg(long)]
    verify: bool,
    /// Include intermediate data in each report.
    #[arg(long)]
    explain: bool,
    /// Worker threads for batch input.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Input file, or `-` for standard input.
    #[arg(default_value = "-")]
    input: String,
}

fn read_input(path: &str) -> std::io::Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path)?;
    }
    Ok(s)
}

/// A single pretty-printed document, or one document per line.
fn documents(text: &str) -> Vec<String> {
    let trimmed = text.trim();
    if trimmed.contains('\n') && serde_json::from_str::<serde_json::Value>(trimmed).is_ok() {
        return vec![trimmed.to_string()];
    }
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
}

fn main() {
    let args = Args::parse();
    let mut targets = Targets { positive: args.positive, torus: args.torus, affine: args.affine };
    if !(targets.positive || targets.torus || targets.affine) {
        targets.positive = true;
    }
    let cap = match std::env::var("COUNT_PRECISION_CAP_BITS") {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(b) => Some(b),
            Err(_) => {
                eprintln!("COUNT_PRECISION_CAP_BITS must be a positive integer, got {v:?}");
                process::exit(ExitCode::Internal.code());
            }
        },
        Err(_) => None,
    };
    let flags = RunFlags {
        verify: args.verify,
        explain: args.explain,
        options: CountOptions { precision_cap_bits: cap },
        samples: 100_000,
    };
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input);
            process::exit(ExitCode::Internal.code());
        }
    };
    let docs = documents(&text);
    let work = || -> Vec<Report> {
        docs.par_iter()
            .map(|line| match parse(line) {
                Ok(doc) => run(&doc, targets, &flags),
                Err(e) => Report::input_failure(None, &e),
            })
            .collect()
    };
    let reports = match args.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("cannot start worker pool: {e}");
                process::exit(ExitCode::Internal.code());
            }
        },
        None => work(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut code = ExitCode::Counted;
    for r in &reports {
        let _ = writeln!(out, "{}", r.to_json());
        eprintln!("{}", r.summary());
        code = code.worst(r.exit_code());
    }
    let _ = out.flush();
    process::exit(code.code());
}
