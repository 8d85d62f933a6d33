use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use ptsym_core::{
    classify_regime, observe, spontaneous_signals, InputState, NoiseMethod, RegimeKind,
    Spontaneous, SystemParams,
};
use serde::Serialize;

use crate::error::CliError;

/// Default propagation-length grid for sweeps and figure presets.
pub const DEFAULT_L_MIN: f64 = 0.0;
pub const DEFAULT_L_MAX: f64 = 6.0;
pub const DEFAULT_L_POINTS: usize = 601;

pub const HEADER: [&str; 14] = [
    "l", "g", "i_a", "i_b", "i_a_st", "i_b_st", "s_a", "s_b", "re_s_ab", "im_s_ab", "q", "g2",
    "regime", "defined",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub g_values: Vec<f64>,
    pub l_min: f64,
    pub l_max: f64,
    pub l_points: usize,
    pub input: InputState,
    pub include_spontaneous: bool,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::InvalidSpec(msg));
        if !(self.l_min.is_finite() && self.l_min >= 0.0) {
            return bad(format!("l_min must be finite and >= 0, got {}", self.l_min));
        }
        if !(self.l_max.is_finite() && self.l_max > self.l_min) {
            return bad(format!("l_max must exceed l_min, got {} <= {}", self.l_max, self.l_min));
        }
        if self.l_points < 2 {
            return bad(format!("need at least 2 points, got {}", self.l_points));
        }
        if self.g_values.is_empty() {
            return bad("no g values given".into());
        }
        if let Some(g) = self.g_values.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return bad(format!("g must be finite and >= 0, got {g}"));
        }
        Ok(())
    }

    /// Sample points `l_min, …, l_max`, endpoints exact.
    pub fn lengths(&self) -> Vec<f64> {
        let n = self.l_points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.l_max
                } else {
                    self.l_min + (self.l_max - self.l_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn uses_default_range(&self) -> bool {
        self.l_min == DEFAULT_L_MIN && self.l_max == DEFAULT_L_MAX
    }
}

pub fn parse_input(s: &str) -> Result<InputState, String> {
    InputState::ALL
        .into_iter()
        .find(|i| i.as_str() == s)
        .ok_or_else(|| format!("unknown input '{s}' (expected vacuum, a, b or noon)"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub l: f64,
    pub g: f64,
    pub i_a: f64,
    pub i_b: f64,
    pub i_a_st: f64,
    pub i_b_st: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub re_s_ab: f64,
    pub im_s_ab: f64,
    /// `None` where an output intensity vanishes.
    pub q: Option<f64>,
    pub g2: Option<f64>,
    pub regime: RegimeKind,
}

impl Row {
    pub fn record(&self) -> [String; 14] {
        // `+ 0.0` folds −0 into 0 so equal values print identically.
        let f = |x: f64| format!("{:e}", x + 0.0);
        let opt = |x: Option<f64>| x.map(f).unwrap_or_default();
        [
            f(self.l),
            f(self.g),
            f(self.i_a),
            f(self.i_b),
            f(self.i_a_st),
            f(self.i_b_st),
            f(self.s_a),
            f(self.s_b),
            f(self.re_s_ab),
            f(self.im_s_ab),
            opt(self.q),
            opt(self.g2),
            self.regime.as_str().to_string(),
            if self.g2.is_some() { "1" } else { "0" }.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: SweepSpec,
    pub rows: Vec<Row>,
}

#[derive(Serialize)]
struct SpecEcho<'a> {
    g_values: &'a [f64],
    l_min: f64,
    l_max: f64,
    l_points: usize,
    input: &'a str,
    include_spontaneous: bool,
}

#[derive(Serialize)]
struct RegimeEcho {
    g: f64,
    regime: &'static str,
    rate: f64,
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    spec: SpecEcho<'a>,
    regimes: Vec<RegimeEcho>,
    columns: &'static str,
    l_range: &'static str,
}

impl Dataset {
    /// Single-line JSON describing the sweep.
    pub fn metadata(&self) -> String {
        let s = &self.spec;
        let regimes = s
            .g_values
            .iter()
            .map(|&g| {
                let r = classify_regime(SystemParams::new(g, 0.0).expect("validated"));
                RegimeEcho {
                    g,
                    regime: r.kind.as_str(),
                    rate: r.rate,
                }
            })
            .collect();
        let meta = Metadata {
            tool: "ptsym",
            version: env!("CARGO_PKG_VERSION"),
            spec: SpecEcho {
                g_values: &s.g_values,
                l_min: s.l_min,
                l_max: s.l_max,
                l_points: s.l_points,
                input: s.input.as_str(),
                include_spontaneous: s.include_spontaneous,
            },
            regimes,
            columns: "intensities and s_* are physical totals; q and g2 follow include_spontaneous",
            l_range: if s.uses_default_range() {
                "default [0, 6]; a plotting choice, not a property of the model"
            } else {
                "user supplied"
            },
        };
        serde_json::to_string(&meta).expect("metadata serializes")
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Dataset, CliError> {
    spec.validate()?;
    let mode = if spec.include_spontaneous {
        Spontaneous::Include
    } else {
        Spontaneous::Exclude
    };
    let lengths = spec.lengths();
    let mut rows = Vec::with_capacity(spec.g_values.len() * lengths.len());
    for &g in &spec.g_values {
        for &l in &lengths {
            let params =
                SystemParams::new(g, l).map_err(|e| CliError::InvalidSpec(e.to_string()))?;
            let o = observe(spec.input, params, mode);
            let s = spontaneous_signals(params, NoiseMethod::ClosedForm)
                .expect("closed form is infallible");
            let i = o.intensities;
            rows.push(Row {
                l,
                g,
                i_a: i.i_a,
                i_b: i.i_b,
                i_a_st: i.i_a_st,
                i_b_st: i.i_b_st,
                s_a: s.s_a,
                s_b: s.s_b,
                re_s_ab: s.s_ab.re,
                im_s_ab: s.s_ab.im,
                q: o.q.value(),
                g2: o.g2.value(),
                regime: classify_regime(params).kind,
            });
        }
    }
    Ok(Dataset {
        spec: spec.clone(),
        rows,
    })
}

/// Metadata comment line, header, then one row per `(g, l)`.
pub fn write_csv<W: Write>(data: &Dataset, mut out: W) -> io::Result<()> {
    writeln!(out, "# {}", data.metadata())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in &data.rows {
        w.write_record(row.record())?;
    }
    w.flush()
}

/// Write `data` to `path`, or to standard output when `path` is `None`.
pub fn write_to(data: &Dataset, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let io_err = |source| CliError::IoFailure {
                path: p.to_path_buf(),
                source,
            };
            let file = File::create(p).map_err(io_err)?;
            let mut buf = BufWriter::new(file);
            write_csv(data, &mut buf).map_err(io_err)?;
            buf.flush().map_err(io_err)
        }
        None => write_csv(data, io::stdout().lock()).map_err(|source| CliError::IoFailure {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}
