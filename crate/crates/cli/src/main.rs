use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ptsym::sweep::{self, DEFAULT_L_MAX, DEFAULT_L_MIN, DEFAULT_L_POINTS};
use ptsym::{parse_input, run_sweep, self_check, CheckGrid, CliError, Figure, SweepSpec};
use ptsym_core::InputState;

#[derive(Parser)]
#[command(name = "ptsym", version, about = "Quantum noise and HBT correlations in a PT-symmetric coupler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate intensities, noise moments and g2 over a (g, l) grid
    Sweep {
        /// Gain-to-coupling ratios
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        g: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_L_MIN, allow_negative_numbers = true)]
        lmin: f64,
        #[arg(long, default_value_t = DEFAULT_L_MAX, allow_negative_numbers = true)]
        lmax: f64,
        #[arg(long, default_value_t = DEFAULT_L_POINTS)]
        points: usize,
        /// vacuum, a, b or noon
        #[arg(long, default_value = "vacuum", value_parser = parse_input)]
        input: InputState,
        /// Drop all spontaneous-generation terms from q and g2
        #[arg(long)]
        no_spontaneous: bool,
        /// Output CSV (standard output if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the data behind figure 2, 3, 4 or 5
    Figure {
        #[arg(value_parser = clap::value_parser!(u32).range(2..=5))]
        number: u32,
        /// Output CSV; figures 4 and 5 write two files with _a/_b or
        /// _spontaneous/_stimulated suffixes
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and print a pass/fail table
    Check {
        #[arg(long, value_delimiter = ',')]
        g: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        l: Option<Vec<f64>>,
    },
}

fn sweep_all(specs: &[SweepSpec]) -> Result<(), CliError> {
    for spec in specs {
        let data = run_sweep(spec)?;
        sweep::write_to(&data, spec.output_path.as_deref())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep {
            g,
            lmin,
            lmax,
            points,
            input,
            no_spontaneous,
            out,
        } => sweep_all(&[SweepSpec {
            g_values: g,
            l_min: lmin,
            l_max: lmax,
            l_points: points,
            input,
            include_spontaneous: !no_spontaneous,
            output_path: out,
        }]),
        Command::Figure { number, out } => {
            let fig = Figure::from_number(number).expect("range checked by clap");
            sweep_all(&fig.sweeps(out.as_deref()))
        }
        Command::Check { g, l } => {
            let default = CheckGrid::default();
            let grid = CheckGrid {
                g_values: g.unwrap_or(default.g_values),
                l_values: l.unwrap_or(default.l_values),
            };
            let report = self_check(&grid);
            println!("{report}");
            return if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
