use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use phonosynth::harness::report::{alignment_dump, program_dump, trace_dump};
use phonosynth::harness::{load_problems, solve_all, verify};
use phonosynth::{Config, RunReport, SolveOptions, Variant};

#[derive(Parser, Debug)]
#[command(name = "phonosynth", version, about = "Learn rewrite programs for phonology problem matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve every problem file in a directory.
    Solve(SolveArgs),
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    /// Directory of problem `.json` files.
    #[arg(long)]
    problems: PathBuf,
    #[arg(long, default_value = "feature")]
    variant: Variant,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_passes: Option<usize>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Context window as `L,R`: offsets from -L to +R.
    #[arg(long, value_parser = parse_window)]
    window: Option<(u32, u32)>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    emit_program: bool,
    #[arg(long)]
    trace_passes: bool,
    #[arg(long)]
    dump_alignments: bool,
    /// Train only the column pairs a test cell can use.
    #[arg(long)]
    lazy: bool,
}

fn parse_window(s: &str) -> Result<(u32, u32), String> {
    let (l, r) = s.split_once(',').ok_or_else(|| format!("expected L,R, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(l)?, n(r)?))
}

fn config(args: &SolveArgs) -> Result<Config, String> {
    let mut cfg = Config::new(args.variant);
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.max_passes {
        cfg.max_passes = n;
    }
    if let Some(k) = args.top_k {
        cfg.top_k = k;
    }
    if let Some(w) = args.window {
        cfg.window = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn solve(args: SolveArgs) -> ExitCode {
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let problems = match load_problems(&args.problems) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let start = Instant::now();
    let solutions = solve_all(&problems, &cfg, SolveOptions { lazy: args.lazy });
    log::info!("solved {} problems in {:.2?}", solutions.len(), start.elapsed());

    for (p, s) in problems.iter().zip(&solutions) {
        if let Err(e) = verify(s, &p.feature_table, &cfg) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    if args.emit_program {
        print!("{}", program_dump(&solutions));
    }
    if args.trace_passes {
        print!("{}", trace_dump(&solutions));
    }
    if args.dump_alignments {
        print!("{}", alignment_dump(&solutions, &cfg));
    }

    let report = RunReport::new(solutions.into_iter().map(|s| s.report).collect(), &cfg);
    let json = report.to_json();
    match &args.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => println!("{json}"),
    }
    eprintln!(
        "overall: {} problems, exact {:.3}{}",
        report.overall.problems,
        report.overall.exact,
        report.overall.chrf.map(|c| format!(", chrF {c:.3}")).unwrap_or_default()
    );
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Solve(args) => solve(args),
    }
}
