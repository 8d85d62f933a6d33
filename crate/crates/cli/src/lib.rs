//! Parameter sweeps, figure data export and self-checks on top of
//! `ptsym-core`.

pub mod check;
pub mod error;
pub mod presets;
pub mod sweep;

pub use check::{self_check, CheckGrid, CheckReport, CheckResult};
pub use error::CliError;
pub use presets::Figure;
pub use sweep::{parse_input, run_sweep, write_csv, Dataset, Row, SweepSpec};
