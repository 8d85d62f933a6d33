//! One-command sweeps for the standard figures.
//!
//! | figure | input        | outputs                          |
//! |--------|--------------|----------------------------------|
//! | 2      | vacuum       | spontaneous signals `s_a`, `s_b` |
//! | 3      | vacuum       | HBT `q`                          |
//! | 4      | `a`, `b`     | one file per input               |
//! | 5      | NOON         | with and without spontaneous     |
//!
//! All use `g ∈ {0.9, 1.5}` on the default length grid.

use std::path::{Path, PathBuf};

use ptsym_core::InputState;

use crate::sweep::{SweepSpec, DEFAULT_L_MAX, DEFAULT_L_MIN, DEFAULT_L_POINTS};

pub const FIGURE_GAINS: [f64; 2] = [0.9, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Two,
    Three,
    Four,
    Five,
}

impl Figure {
    pub fn from_number(n: u32) -> Option<Self> {
        match n {
            2 => Some(Figure::Two),
            3 => Some(Figure::Three),
            4 => Some(Figure::Four),
            5 => Some(Figure::Five),
            _ => None,
        }
    }

    /// `(suffix, input, include_spontaneous)` for each output table.
    fn parts(&self) -> &'static [(&'static str, InputState, bool)] {
        match self {
            Figure::Two | Figure::Three => &[("", InputState::Vacuum, true)],
            Figure::Four => &[
                ("a", InputState::PhotonA, true),
                ("b", InputState::PhotonB, true),
            ],
            Figure::Five => &[
                ("spontaneous", InputState::Noon2, true),
                ("stimulated", InputState::Noon2, false),
            ],
        }
    }

    /// Sweeps for this figure. With several tables and an output path
    /// `dir/name.ext`, each table goes to `dir/name_<suffix>.ext`.
    pub fn sweeps(&self, out: Option<&Path>) -> Vec<SweepSpec> {
        let parts = self.parts();
        parts
            .iter()
            .map(|&(suffix, input, include_spontaneous)| SweepSpec {
                g_values: FIGURE_GAINS.to_vec(),
                l_min: DEFAULT_L_MIN,
                l_max: DEFAULT_L_MAX,
                l_points: DEFAULT_L_POINTS,
                input,
                include_spontaneous,
                output_path: out.map(|p| {
                    if parts.len() == 1 {
                        p.to_path_buf()
                    } else {
                        with_suffix(p, suffix)
                    }
                }),
            })
            .collect()
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes() {
        assert_eq!(with_suffix(Path::new("out/fig4.csv"), "a"), PathBuf::from("out/fig4_a.csv"));
        assert_eq!(with_suffix(Path::new("fig5"), "stimulated"), PathBuf::from("fig5_stimulated"));
    }

    #[test]
    fn figure_five_has_both_modes() {
        let s = Figure::Five.sweeps(Some(Path::new("f.csv")));
        assert_eq!(s.len(), 2);
        assert!(s[0].include_spontaneous && !s[1].include_spontaneous);
        assert_eq!(s[1].output_path.as_deref(), Some(Path::new("f_stimulated.csv")));
        assert!(s.iter().all(|s| s.input == InputState::Noon2 && s.validate().is_ok()));
    }

    #[test]
    fn single_table_keeps_the_path() {
        let s = Figure::Two.sweeps(Some(Path::new("f.csv")));
        assert_eq!(s[0].output_path.as_deref(), Some(Path::new("f.csv")));
        assert_eq!(Figure::from_number(6), None);
    }
}
