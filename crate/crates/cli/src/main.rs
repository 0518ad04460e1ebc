mod commands;
mod config;
mod context;
mod error;
mod output;
mod report;

use clap::{Args, Parser, Subcommand};
use commands::{LiMethod, Side};
use context::Ctx;
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "zscrew", version, about = "Screw function of the Riemann xi-function: evaluation and checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// key = value configuration file (also ZSCREW_CONFIG)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Zero ordinates, one per line (also ZSCREW_ZEROS)
    #[arg(long, global = true)]
    zeros: Option<String>,
    #[arg(long, global = true)]
    zeros_limit: Option<String>,
    /// Sieve limit for Λ(n); Ψ is available for t ≤ log of it
    #[arg(long, global = true)]
    prime_limit: Option<String>,
    #[arg(long, global = true)]
    abs_tol: Option<String>,
    /// Moment integration cutoff (at least 40)
    #[arg(long, global = true)]
    t_cut: Option<String>,
    /// csv or jsonl
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Binary cache for the full prime-power table
    #[arg(long, global = true)]
    sieve_cache: Option<String>,
    /// Write output here (atomically) instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ψ(t) from the primes and/or the zeros
    Psi {
        /// [0, log 10] in 1000 points with a marker at log 2
        #[arg(long, conflicts_with_all = ["t", "step"])]
        figure1: bool,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        t: Option<Vec<f64>>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_enum)]
        side: Option<Side>,
    },
    /// Ψ_ω(t)
    PsiOmega {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, value_enum, default_value = "prime")]
        side: Side,
    },
    /// First sign change of Ψ_ω on (0, t_max]
    ScanSign {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// μ_n = ∫ e^{−t/2}Ψ(t)tⁿ dt/4
    Moments {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Li coefficients λ_n
    Li {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "both")]
        method: LiMethod,
    },
    /// Hankel determinants of the moments
    Hankel {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Eigenvalues of the Nyström operator on [−a, a]
    Spectrum {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 200)]
        nodes: usize,
        /// Also solve the 2m×2m system over the first m zeros
        #[arg(long, value_name = "M")]
        zero_system: Option<usize>,
        /// Leave the zero system without its tail border
        #[arg(long, requires = "zero_system")]
        plain: bool,
    },
    /// Explicit formula for triangle test functions
    WeilCheck {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
        t: Vec<f64>,
    },
    /// Zero side against prime side of the chi pairings
    ChiCheck {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<u32>,
    },
    /// Acceptance checks as JSON lines; exit 3 if any fails
    Report {
        #[arg(long, value_enum, default_value = "all")]
        suite: report::Suite,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let flags = [
        ("zeros_path", g.zeros.clone()),
        ("zeros_limit", g.zeros_limit.clone()),
        ("prime_limit", g.prime_limit.clone()),
        ("abs_tol", g.abs_tol.clone()),
        ("t_cut", g.t_cut.clone()),
        ("output_format", g.format.clone()),
        ("threads", g.threads.clone()),
        ("sieve_cache", g.sieve_cache.clone()),
    ];
    let cfg = config::resolve(&flags, g.config.as_deref(), |k| std::env::var(k).ok())?;
    let format = cfg.output_format;
    let ctx = Ctx::new(cfg);
    let table = match cli.cmd {
        Cmd::Psi { figure1, t, step, side } => {
            if figure1 {
                commands::psi(&ctx, &commands::figure1_grid(), side.unwrap_or(Side::Both), true)?
            } else {
                let t = t.ok_or_else(|| CliError::config("psi needs --figure1 or --t LO HI"))?;
                let ts = commands::grid(t[0], t[1], step.unwrap_or(0.01))?;
                commands::psi(&ctx, &ts, side.unwrap_or(Side::Prime), false)?
            }
        }
        Cmd::PsiOmega { omega, t, step, side } => commands::psi_omega(&ctx, omega, &commands::grid(t[0], t[1], step)?, side)?,
        Cmd::ScanSign { omega, t_max, step } => commands::scan_sign(&ctx, omega, t_max, step)?,
        Cmd::Moments { n_max } => commands::moments(&ctx, n_max)?,
        Cmd::Li { n_max, method } => commands::li(&ctx, n_max, method)?,
        Cmd::Hankel { n_max } => commands::hankel(&ctx, n_max)?,
        Cmd::Spectrum { a, nodes, zero_system, plain } => commands::spectrum_cmd(&ctx, a, nodes, zero_system, plain)?,
        Cmd::WeilCheck { t } => commands::weil_check(&ctx, &t)?,
        Cmd::ChiCheck { a, k } => commands::chi_check(&ctx, a, &k)?,
        Cmd::Report { suite } => {
            let recs = report::run(&ctx, suite)?;
            let text: String = recs.iter().map(|r| r.to_json() + "\n").collect();
            output::emit(&text, g.out.as_deref())?;
            let failed = recs.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                return Err(CliError::numerical(format!("{failed} of {} checks failed", recs.len())));
            }
            return Ok(());
        }
    };
    output::emit(&table.render(format), g.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zscrew: {e}");
            ExitCode::from(e.code)
        }
    }
}
