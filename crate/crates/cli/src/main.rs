use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hodgevir::pairing::PairingData;
use hodgevir::par::{self, ExecMode};
use hodgevir::pipeline::{self, Suite, VerificationConfig};
use hodgevir::{special, witten, Report, Truncation};

#[derive(Parser)]
#[command(name = "hodgevir", version, about = "Exact verification of the Hodge/Virasoro operator identities")]
struct Cli {
    /// Run every check on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the a_m, C_i and R_i tables.
    Constants {
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write a.json and c.json into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        window: Window,
        /// Suites to run, repeatable or comma separated; all when omitted.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Print point intersection numbers <tau_k1 ... tau_kn>_g.
    Oracle {
        #[arg(long, default_value_t = 2)]
        max_genus: u32,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        /// Defaults to 3g-3+n, i.e. every dimensional key.
        #[arg(long)]
        max_index: Option<u32>,
    },
    /// Run only the end-to-end theorem suite.
    Theorem {
        #[command(flatten)]
        window: Window,
    },
}

#[derive(Args)]
struct Window {
    /// `point`, `hyperbolic2`, or a JSON file {rank, eta}.
    #[arg(long, default_value = "point")]
    pairing: String,
    #[arg(long, default_value_t = 3)]
    max_t_degree: u32,
    #[arg(long, default_value_t = 6)]
    max_u_degree: u32,
    #[arg(long, default_value_t = 8)]
    max_index: u32,
    #[arg(long, default_value_t = 2)]
    max_hbar: u32,
    #[arg(long, default_value_t = 4)]
    max_omega_weight: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Window {
    fn config(&self, suites: Vec<Suite>) -> Result<VerificationConfig> {
        let pairing = PairingData::from_spec(&self.pairing).with_context(|| format!("pairing `{}`", self.pairing))?;
        let trunc = Truncation::new(self.max_t_degree, self.max_index, self.max_u_degree, self.max_hbar, self.max_omega_weight);
        let mut config = VerificationConfig::new(pairing, trunc);
        config.seed = self.seed;
        config.suites = suites;
        config.validate()?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.sequential {
        par::set_exec_mode(ExecMode::Sequential);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(passed)`; errors are input problems rather than failed checks.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Constants { order, format, out_dir } => {
            constants(order, format, out_dir)?;
            Ok(true)
        }
        Command::Verify { window, suite } => {
            let suites = if suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite.iter().map(|s| s.trim().parse()).collect::<hodgevir::Result<Vec<Suite>>>()?
            };
            verify(&window, suites)
        }
        Command::Theorem { window } => verify(&window, vec![Suite::Theorem]),
        Command::Oracle { max_genus, max_points, max_index } => {
            let max_index = max_index.unwrap_or(3 * max_genus + max_points as u32);
            let table = witten::table(max_genus, max_points, max_index);
            println!("{}", serde_json::to_string_pretty(&table)?);
            Ok(true)
        }
    }
}

fn verify(window: &Window, suites: Vec<Suite>) -> Result<bool> {
    let config = window.config(suites)?;
    let reports = pipeline::run_suite(&config)?;
    print_reports(&reports, window.format)?;
    Ok(pipeline::all_passed(&reports))
}

fn print_reports(reports: &[Report], format: Format) -> Result<()> {
    match format {
        Format::Text => {
            for r in reports {
                println!("{}", r.render_text());
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!("{} of {} suites passed", reports.len() - failed, reports.len());
        }
        Format::Json => {
            let v: Vec<_> = reports.iter().map(Report::to_json).collect();
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
    }
    Ok(())
}

fn constants(order: u32, format: Format, out_dir: Option<PathBuf>) -> Result<()> {
    if let Some(dir) = out_dir {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, table) in [("a.json", pipeline::a_table(order)), ("c.json", pipeline::c_table(order))] {
            let path = dir.join(name);
            fs::write(&path, serde_json::to_string_pretty(&table)? + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&pipeline::constants_json(order))?),
        Format::Text => {
            for (i, a) in special::a_coeffs(order as usize).iter().enumerate() {
                println!("a_{} = {a}", i + 1);
            }
            for i in 0..=order {
                println!("C_{i} = {}", special::c_const(i));
            }
            for (i, r) in special::r_table(order) {
                println!("R_{i} = {}", r.render());
            }
        }
    }
    Ok(())
}
