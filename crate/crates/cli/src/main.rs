mod commands;
mod config;
mod report;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use report::{Format, Report};

#[derive(Parser)]
#[command(name = "sharpckn", version, about = "Verify sharp second-order weighted inequalities numerically")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat key = value file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args, Default)]
struct ParamArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Profile in the family syntax, e.g. "gauss(1)"; repeatable.
    #[arg(long)]
    profile: Vec<String>,
    /// Named battery: identity, stability or perturbed.
    #[arg(long)]
    battery: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an inequality or identity check on profiles.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::possible_values()))]
        check: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long)]
        kmax: Option<u32>,
        /// Pass threshold on the ratio deficit or relative residual.
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        #[command(flatten)]
        profiles: ProfileArgs,
    },
    /// Bracket the sharp constant over spherical-harmonic modes.
    SharpConstant {
        #[command(flatten)]
        params: ParamArgs,
        /// Outer evaluations per mode.
        #[arg(long)]
        evals: Option<usize>,
        /// Trial basis size per mode.
        #[arg(long)]
        basis: Option<usize>,
    },
    /// Deficit against distance to the gaussians.
    Stability {
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        profiles: ProfileArgs,
    },
    #[command(subcommand)]
    Hermite(HermiteCommand),
}

#[derive(Subcommand)]
enum HermiteCommand {
    /// Spectral gap of the truncated form for D = 0..=dmax.
    Gap {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Closed-form second moments of Hermite products against quadrature.
    CheckProducts {
        #[arg(long)]
        imax: Option<u32>,
    },
    /// Gaussian Poincaré inequality on seeded random expansions.
    Poincare {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dmax: Option<u32>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

impl ParamArgs {
    fn apply(self, cfg: &mut RunConfig) {
        cfg.set_opt("n", self.n);
        cfg.set_opt("alpha", self.alpha);
        cfg.set_opt("beta", self.beta);
        cfg.set_opt("gamma", self.gamma);
    }
}

impl ProfileArgs {
    fn apply(self, cfg: &mut RunConfig) {
        cfg.set("profile", self.profile);
        cfg.set_opt("battery", self.battery);
    }
}

fn execute(cli: Cli) -> Result<Report> {
    let g = cli.global;
    let mut cfg = match &g.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    // `{:?}` keeps every digit of the tolerances
    cfg.set_opt("abs_tol", g.abs_tol.map(|x| format!("{x:?}")));
    cfg.set_opt("rel_tol", g.rel_tol.map(|x| format!("{x:?}")));
    cfg.set_opt("seed", g.seed);
    cfg.set_opt("out", g.out.as_ref().map(|p| p.display().to_string()));
    cfg.set_opt("format", g.format.map(|f| if f == Format::Csv { "csv" } else { "json" }));
    let seed: u64 = cfg.or("seed", 0)?;

    let report = match cli.command {
        Command::Verify {
            check,
            params,
            t,
            kmax,
            tol,
            profiles,
        } => {
            params.apply(&mut cfg);
            profiles.apply(&mut cfg);
            cfg.set_opt("t", t);
            cfg.set_opt("kmax", kmax);
            cfg.set_opt("tol", tol);
            let check = verify::find(&check).ok_or_else(|| anyhow!("unknown check '{check}'"))?;
            verify::run(check, &cfg, seed)?
        }
        Command::SharpConstant { params, evals, basis } => {
            params.apply(&mut cfg);
            cfg.set_opt("evals", evals);
            cfg.set_opt("basis", basis);
            commands::sharp_constant(&cfg, seed)?
        }
        Command::Stability { n, profiles } => {
            cfg.set_opt("n", n);
            profiles.apply(&mut cfg);
            commands::stability(&cfg, seed)?
        }
        Command::Hermite(HermiteCommand::Gap { n, dmax }) => {
            cfg.set_opt("n", n);
            cfg.set_opt("dmax", dmax);
            commands::hermite_gap(&cfg, seed)?
        }
        Command::Hermite(HermiteCommand::CheckProducts { imax }) => {
            cfg.set_opt("imax", imax);
            commands::hermite_products(&cfg, seed)?
        }
        Command::Hermite(HermiteCommand::Poincare { n, dmax, samples }) => {
            cfg.set_opt("n", n);
            cfg.set_opt("dmax", dmax);
            cfg.set_opt("samples", samples);
            commands::hermite_poincare(&cfg, seed)?
        }
    };

    let format: Format = cfg.or("format", Format::Csv).map_err(|e| anyhow!("{e}"))?;
    match cfg.raw("out") {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {path}"))?;
            report.write(format, BufWriter::new(file))?;
        }
        None => report.write(format, io::stdout().lock())?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(report) if report.finding => {
            eprintln!("{}: {} rows, finding reported", report.command, report.rows.len());
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
