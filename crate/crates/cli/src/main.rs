//! `hv` — zero counts for a family of harmonic polynomials.
//!
//! The family is f(z) = p(z) + conj(q(z)) with p = S + T, q = S − T,
//! S(z) = i·zⁿ, T(z) = i·(z+a)ⁿ⁻¹·(z−(n−1)a), |a| = 1. The tool prints the
//! closed-form zero count n² − 2n + 2 + 4·k_max(n), certifies it by one-variable
//! root bracketing along the 2n rays where Re S vanishes, optionally
//! re-verifies with a planar Newton search under an argument-principle
//! completeness check, exports the zero set, and emits figure data.
//!
//! Exit codes: 0 success · 1 verification mismatch · 2 usage error ·
//! 3 structural violation (a certification invariant broke).

mod commands;
mod contour;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// RFC-4180 CSV (or plain text for single-value commands)
    #[default]
    Csv,
    /// A JSON envelope: {schema_version, command, parameters, payload}
    Json,
}

#[derive(Parser)]
#[command(
    name = "hv",
    version,
    about = "Zero counts for the harmonic family p + conj(q): closed form, ray certification, planar verification, figure data",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the closed-form zero count for one order
    Predict {
        /// Order n of the construction (n >= 4)
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Tabulate n, k_max, count over a range of orders
    Table {
        /// First order (inclusive, >= 4)
        #[arg(long)]
        n_from: u32,
        /// Last order (inclusive)
        #[arg(long)]
        n_to: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check the closed form against the certified ray totals
    Verify {
        /// First order (inclusive, >= 4)
        #[arg(long)]
        n_from: u32,
        /// Last order (inclusive)
        #[arg(long)]
        n_to: u32,
        /// Also run the planar Newton finder and cross-validate locations
        #[arg(long)]
        planar: bool,
        /// Allow --planar beyond n = 24 (slow)
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Export every zero: location, signed index, multiplicity, residual
    Zeros {
        /// Order n of the construction (n >= 4)
        #[arg(long)]
        n: u32,
        /// Argument t of the unit parameter a = e^(i t); 0 keeps a = 1
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb_arg: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write figure data: the 2n rays and the Im T = 0 contour
    PlotData {
        /// Order n of the construction (n >= 4)
        #[arg(long)]
        n: u32,
        /// Argument t of the unit parameter a = e^(i t); 0 keeps a = 1
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb_arg: f64,
        /// Half-width of the square window (default n + 1)
        #[arg(long)]
        window: Option<f64>,
        /// Grid nodes per side for the contour (>= 16)
        #[arg(long, default_value_t = 800)]
        resolution: u32,
        /// Directory receiving rays.{csv,json} and imT_contour.{csv,json}
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Report k_max/n against the asymptotic slope (1/2 - X/pi)/2
    Asymptote {
        /// Comma-separated orders to evaluate (default 100,500,1000,5000)
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        n_list: Option<Vec<u32>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn main() {
    // Thread cap must land before any rayon pool is touched.
    if let Ok(raw) = std::env::var("HV_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(t) if t >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global();
            }
            _ => {
                eprintln!("HV_THREADS must be a positive integer, got {raw:?}");
                std::process::exit(2);
            }
        }
    }

    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Predict { n, format } => commands::predict(n, format),
        Cmd::Table {
            n_from,
            n_to,
            format,
        } => commands::table(n_from, n_to, format),
        Cmd::Verify {
            n_from,
            n_to,
            planar,
            force,
            format,
        } => commands::verify(n_from, n_to, planar, force, format),
        Cmd::Zeros {
            n,
            perturb_arg,
            format,
            out,
        } => commands::zeros(n, perturb_arg, format, out.as_deref()),
        Cmd::PlotData {
            n,
            perturb_arg,
            window,
            resolution,
            out_dir,
            format,
        } => commands::plot_data(n, perturb_arg, window, resolution, &out_dir, format),
        Cmd::Asymptote { n_list, format } => commands::asymptote(n_list, format),
    };

    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            std::process::exit(out.code);
        }
        Err(failure) => {
            eprintln!("{}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
