mod commands;
mod config;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{execute, EXIT_OK, EXIT_USAGE};
use config::{Command, Real, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "sol3",
    version,
    about = "Invariant surfaces in Sol3: integrate, classify, shoot, mesh, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Clone)]
struct IcArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    x0: Real,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    y0: Real,
    /// radians; `pi/8`-style values are accepted
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    theta0: Real,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// integration horizon in arc length, each direction
    #[arg(long)]
    max_s: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    /// integrate line angles numerically instead of using the closed form
    #[arg(long)]
    no_snap: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Integrate a generating curve and write `s,x,y,theta,theta_prime,H,K` rows
    Integrate {
        #[command(flatten)]
        ic: IcArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// minimal, cmc or flat (default: cmc if --H is given, else minimal)
        #[arg(long)]
        system: Option<String>,
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<Real>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a minimal generating curve and estimate its asymptotes
    Classify {
        #[command(flatten)]
        ic: IcArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        tail_fraction: Option<f64>,
        #[arg(long)]
        settle_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a closed constant mean curvature generating curve
    Shoot {
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<Real>,
        /// LO:HI in y0; scanned geometrically when omitted
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an OBJ mesh of the surface over a parameter grid
    Mesh {
        #[command(flatten)]
        ic: IcArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        system: Option<String>,
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<Real>,
        /// closed-form curve instead of integration: type-i..type-iv, flat-circle
        #[arg(long)]
        curve: Option<String>,
        /// radius for flat-circle
        #[arg(long, default_value = "1")]
        r: Real,
        /// sMIN:sMAX:tMIN:tMAX:NS:NT
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed-form invariants against the finite-difference oracle
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every entry of a TOML file of runs on a bounded worker pool
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn with_ic(cfg: &mut RunConfig, ic: IcArgs) {
    cfg.x0 = ic.x0;
    cfg.y0 = ic.y0;
    cfg.theta0 = ic.theta0;
}

fn with_solver(cfg: &mut RunConfig, s: SolverArgs) {
    cfg.max_s = s.max_s;
    cfg.abs_tol = s.abs_tol;
    cfg.rel_tol = s.rel_tol;
    cfg.max_step = s.max_step;
    cfg.no_snap = s.no_snap;
}

fn to_config(cmd: Cmd) -> RunConfig {
    let mut cfg = RunConfig::default();
    match cmd {
        Cmd::Integrate {
            ic,
            solver,
            system,
            h,
            out,
        } => {
            cfg.command = Command::Integrate;
            with_ic(&mut cfg, ic);
            with_solver(&mut cfg, solver);
            cfg.system = system;
            cfg.h = h;
            cfg.out = out;
        }
        Cmd::Classify {
            ic,
            solver,
            tail_fraction,
            settle_tol,
            out,
        } => {
            cfg.command = Command::Classify;
            with_ic(&mut cfg, ic);
            with_solver(&mut cfg, solver);
            cfg.tail_fraction = tail_fraction;
            cfg.settle_tol = settle_tol;
            cfg.out = out;
        }
        Cmd::Shoot {
            h,
            bracket,
            solver,
            out,
        } => {
            cfg.command = Command::Shoot;
            with_solver(&mut cfg, solver);
            cfg.h = h;
            cfg.bracket = bracket;
            cfg.out = out;
        }
        Cmd::Mesh {
            ic,
            solver,
            system,
            h,
            curve,
            r,
            grid,
            out,
        } => {
            cfg.command = Command::Mesh;
            with_ic(&mut cfg, ic);
            with_solver(&mut cfg, solver);
            cfg.system = system;
            cfg.h = h;
            cfg.curve = curve;
            cfg.r = r;
            cfg.grid = grid;
            cfg.out = out;
        }
        Cmd::Verify { samples, seed, out } => {
            cfg.command = Command::Verify;
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.out = out;
        }
        Cmd::Sweep { .. } => unreachable!("sweep is dispatched separately"),
    }
    cfg
}

fn run_sweep(config: PathBuf, jobs: Option<usize>) -> u8 {
    let file = match sweep::load(&config) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("sol3: {e}");
            return e.code();
        }
    };
    let base = config.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    match sweep::run(&file, &base, jobs) {
        Ok(outcomes) => {
            for o in &outcomes {
                match &o.message {
                    Some(m) => println!("{}\t{}\t{}", o.label, o.code, m),
                    None => println!("{}\t{}", o.label, o.code),
                }
            }
            sweep::exit_code(&outcomes)
        }
        Err(e) => {
            eprintln!("sol3: {e}");
            e.code()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Cmd::Sweep { config, jobs } = cli.command {
        return ExitCode::from(run_sweep(config, jobs));
    }
    let cfg = to_config(cli.command);
    match execute(&cfg) {
        Ok(out) => {
            if let Err(e) = output::emit(cfg.out.as_deref(), &out.bytes) {
                eprintln!("sol3: cannot write output: {e}");
                return ExitCode::from(commands::EXIT_FAILURE);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("sol3: {e}");
            ExitCode::from(e.code())
        }
    }
}
