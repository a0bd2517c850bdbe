use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quatmax::harness::{
    parse_complex, parse_exclusion, parse_grid, parse_tolerances, run_convergence, run_generate,
    run_suite, ConvergenceOp, RunConfig, Solution, Suite,
};

/// Verification harness for the biquaternionic form of the time-harmonic
/// Maxwell system: identity suites, exact-solution generators and grid
/// refinement studies.
#[derive(Parser)]
#[command(name = "quatmax", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Medium profile, e.g. `vacuum`, `exp:a=1,0,0`,
    /// `product-exp:a=1,2,0,b=0,0,1`, `planewave-phi:c=0,0,1`,
    /// `spherical:c=2`.
    #[arg(long)]
    profile: Option<String>,
    /// Frequency as `re` or `re,im`.
    #[arg(long)]
    omega: Option<String>,
    /// Grid spec `o=x,y,z,h=H,n=N` (or `n=N1,N2,N3`).
    #[arg(long)]
    grid: Option<String>,
    /// Exclusion ball `c=x,y,z,r=R` removed from grid evaluation.
    #[arg(long)]
    exclude: Option<String>,
    /// Seed for the randomized suites; echoed in every report.
    #[arg(long)]
    seed: Option<u64>,
    /// Constant-potential parameter of the fundamental solution,
    /// `re` or `re,im`.
    #[arg(long)]
    c: Option<String>,
    /// Per-check tolerance override `name=value`; repeatable.
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
}

impl ConfigArgs {
    fn build(&self) -> quatmax::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        cfg.profile = self.profile.clone();
        if let Some(o) = &self.omega {
            cfg.omega = parse_complex(o)?;
        }
        if let Some(g) = &self.grid {
            let mut spec = parse_grid(g)?;
            if let Some(e) = &self.exclude {
                spec = spec.with_exclusion(parse_exclusion(e)?)?;
            }
            cfg.grid = Some(spec);
        } else if let Some(e) = &self.exclude {
            let spec = RunConfig::default_grid().with_exclusion(parse_exclusion(e)?)?;
            cfg.grid = Some(spec);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(c) = &self.c {
            cfg.c = parse_complex(c)?;
        }
        cfg.tolerances = parse_tolerances(&self.tolerances)?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample an exact solution onto a grid and write CSV + sidecar.
    Generate {
        #[arg(value_enum)]
        solution: Solution,
        #[command(flatten)]
        config: ConfigArgs,
        /// Seed scalar for the transform, e.g. `wave:c=1,0,0`,
        /// `exp:a=-1,0,0`, `radial:c=1`, `linear:a=1,0,0`.
        #[arg(long)]
        psi: Option<String>,
        /// Output path stem; files are `<out>.csv` (or `<out>.E.csv`,
        /// `<out>.H.csv`) and `<out>.meta.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid refinement study; exit 0 iff the observed order is second
    /// order (or the operation is exact on the test field).
    Convergence {
        #[arg(value_enum)]
        op: ConvergenceOp,
        /// Coarsest grid spacing.
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        /// Number of half-spacing refinements (including the coarsest).
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QUATMAX_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) => {
                quatmax::configure_threads(n);
            }
            Err(_) => {
                eprintln!("error: QUATMAX_THREADS must be a non-negative integer");
                return ExitCode::from(2);
            }
        }
    }

    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> quatmax::Result<bool> {
    match cli.command {
        Command::Verify { suite, config, out } => {
            let cfg = config.build()?;
            let report = run_suite(suite, &cfg)?;
            for check in &report.checks {
                println!("{}", check.render_line());
            }
            println!(
                "suite {}: {} ({} checks, seed {})",
                report.suite,
                if report.passed { "PASS" } else { "FAIL" },
                report.checks.len(),
                report.seed
            );
            let json = report.to_json()?;
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            Ok(report.passed)
        }
        Command::Generate { solution, config, psi, out } => {
            let cfg = config.build()?;
            let output = run_generate(solution, &cfg, psi.as_deref(), &out)?;
            for f in &output.files {
                println!("wrote {}", f.display());
            }
            println!("wrote {}", output.sidecar_path.display());
            Ok(true)
        }
        Command::Convergence { op, h, levels, out } => {
            let report = run_convergence(op, h, levels)?;
            for level in &report.levels {
                println!(
                    "h={:<10} n={:<4} linf={:.6e}",
                    level.h, level.nodes_per_axis, level.linf
                );
            }
            if report.exact {
                println!("op {}: exact at rounding level, order test skipped", report.op);
            } else {
                println!(
                    "op {}: observed orders {}",
                    report.op,
                    report
                        .orders
                        .iter()
                        .map(|o| format!("{o:.3}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            println!("convergence: {}", if report.passed { "PASS" } else { "FAIL" });
            let json = report.to_json()?;
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            Ok(report.passed)
        }
    }
}
