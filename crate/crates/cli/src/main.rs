use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tcdyn::{cmd_compare, cmd_exact, cmd_perturb, cmd_sweep, Overrides, Report, Result, RunConfig};

#[derive(Parser)]
#[command(
    name = "tcdyn",
    version,
    about = "Qubits in a switched resonator: exact, perturbative and closed-form dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact propagation: t_ns, p_excite, photon_exp, norm
    Exact {
        #[command(flatten)]
        common: Common,
    },
    /// Truncated perturbative wavefunction: t_ns, p_excite, norm_truncated
    Perturb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Exact vs perturbative vs closed form, with a sup/RMS summary on stdout
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: Option<usize>,
    },
    /// sup|p_exact - p_pert| and peak probabilities over a range of switching ratios
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        ratio_min: Option<f64>,
        #[arg(long)]
        ratio_max: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON config; omitted keys take the default device parameters
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV
    #[arg(long)]
    out: PathBuf,
    /// Switching frequency in units of omega0 (replaces switch_freq_ghz)
    #[arg(long)]
    switch_ratio: Option<f64>,
    #[arg(long)]
    t_final_ns: Option<f64>,
    #[arg(long)]
    nmax: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            switch_ratio: self.switch_ratio,
            t_final_ns: self.t_final_ns,
            n_max: self.nmax,
            ..Default::default()
        }
    }

    fn load(&self, overrides: Overrides) -> Result<RunConfig> {
        match &self.config {
            Some(path) => RunConfig::load(path, &overrides),
            None => RunConfig::from_json("{}", &overrides),
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Exact { common } => cmd_exact(&common.load(common.overrides())?, &common.out),
        Command::Perturb { common, order } => {
            let cfg = common.load(Overrides { order, ..common.overrides() })?;
            cmd_perturb(&cfg, &common.out)
        }
        Command::Compare { common, order } => {
            let cfg = common.load(Overrides { order, ..common.overrides() })?;
            cmd_compare(&cfg, &common.out)
        }
        Command::Sweep { common, order, points, ratio_min, ratio_max } => {
            let cfg = common.load(Overrides { order, points, ratio_min, ratio_max, ..common.overrides() })?;
            cmd_sweep(&cfg, &common.out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            if let Some(summary) = report.summary {
                println!("{summary}");
            }
            if report.guarded_rows > 0 {
                eprintln!("warning: closed form resonant, {} rows left empty", report.guarded_rows);
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
