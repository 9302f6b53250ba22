use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use collapse_core::eigenproblem::EigenMethod;
use collapse_sim::commands::{self, SelfSimilarArgs, ShootArgs};
use collapse_sim::config::RunConfig;
use collapse_sim::CliError;

#[derive(Parser)]
#[command(
    name = "collapse-sim",
    version,
    about = "Groundwater dome collapse: simulation, fitting and closed forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation from a config file or a previous run's manifest.
    Simulate {
        #[arg(
            long,
            conflicts_with = "manifest",
            required_unless_present = "manifest"
        )]
        config: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Output directory; overrides the config and COLLAPSE_SIM_OUT.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated values of c, run concurrently.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
    },
    /// Fit t0, B and mu to a series CSV.
    Fit {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the closed-form solution.
    Selfsimilar {
        #[arg(long)]
        c: f64,
        #[arg(long = "B")]
        b: Option<f64>,
        #[arg(long)]
        t0: Option<f64>,
        /// e-folding time at c = 3/2.
        #[arg(long)]
        theta: Option<f64>,
        /// Amplitude at c = 3/2.
        #[arg(long = "C")]
        amplitude: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Emit t, x_f, h_max over [t-start, t-end] instead of a profile.
        #[arg(long)]
        series: bool,
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        /// Output file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the similarity eigenvalue problem numerically.
    Shoot {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        mu_lo: Option<f64>,
        #[arg(long)]
        mu_hi: Option<f64>,
        /// auto, shooting or collocation.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Write the profile as xi,F.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Reduce rock and fluid parameters to c.
    Reduce {
        #[arg(long)]
        params: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            manifest,
            out,
            sweep,
        } => {
            let cfg = match (config, manifest) {
                (Some(p), _) => RunConfig::load(&p)?,
                (None, Some(m)) => commands::config_from_manifest(&m)?,
                (None, None) => return Err(CliError::config("need --config or --manifest")),
            };
            if sweep.is_empty() {
                let outputs = commands::simulate_config(&cfg, out.as_deref())?;
                println!("{}", outputs.summary);
            } else {
                for o in commands::simulate_sweep(&cfg, &sweep, out.as_deref())? {
                    println!("{}", o.summary);
                }
            }
        }
        Command::Fit { series, c, out } => {
            let o = commands::fit(&series, c, out.as_deref())?;
            print!("{}", std::fs::read_to_string(&o.report)?);
        }
        Command::Selfsimilar {
            c,
            b,
            t0,
            theta,
            amplitude,
            t,
            x0,
            points,
            series,
            t_start,
            t_end,
            output,
        } => {
            let args = SelfSimilarArgs {
                c,
                b,
                t0,
                theta,
                amplitude,
                x0,
                t,
                points,
                series,
                t_start,
                t_end,
            };
            match output {
                Some(p) => {
                    let mut f = std::fs::File::create(&p)?;
                    commands::selfsimilar(&args, &mut f)?;
                }
                None => commands::selfsimilar(&args, &mut io::stdout().lock())?,
            }
        }
        Command::Shoot {
            c,
            delta,
            step,
            mu_lo,
            mu_hi,
            method,
            profile,
        } => {
            let mut args = ShootArgs::new(c);
            let cfg = &mut args.config;
            if let Some(d) = delta {
                cfg.start_offset = d;
                cfg.ode_step = cfg.ode_step.min(d);
            }
            if let Some(s) = step {
                cfg.ode_step = s;
            }
            if let Some(lo) = mu_lo {
                cfg.mu_bracket.0 = lo;
            }
            if let Some(hi) = mu_hi {
                cfg.mu_bracket.1 = hi;
            }
            cfg.method = match method.as_str() {
                "auto" => EigenMethod::Auto,
                "shooting" => EigenMethod::Shooting,
                "collocation" => EigenMethod::Collocation,
                other => return Err(CliError::config(format!("unknown method {other:?}"))),
            };
            args.profile = profile;
            print!("{}", commands::shoot(&args)?);
        }
        Command::Reduce { params } => println!("{}", commands::reduce_params(&params)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
