//! Self-check: the model's invariants evaluated over a `(g, l)` grid.

use std::fmt;

use ptsym_core::oracle::{
    moment_ode_solve, noise_covariance, normally_ordered, FockState, MomentVector, OutputOp,
};
use ptsym_core::{
    asymptotic_spontaneous, classify_regime, commutator_diagnostics, determinant,
    observe, propagator, semigroup_defect, spontaneous_signals, InputState, NoiseMethod,
    RegimeKind, Spontaneous, SystemParams,
};

const RK4_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckGrid {
    pub g_values: Vec<f64>,
    pub l_values: Vec<f64>,
}

impl Default for CheckGrid {
    fn default() -> Self {
        Self {
            g_values: vec![0.0, 0.3, 0.9, 1.0, 1.1, 1.5, 3.0],
            l_values: vec![0.1, 0.5, 1.0, 2.0, 5.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst deviation found, or a short note.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.results {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict}  {:width$}  {}", r.name, r.detail)?;
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        write!(f, "{} checks, {failed} failed", self.results.len())
    }
}

/// Tracks the largest deviation seen against a fixed bound.
struct Worst {
    bound: f64,
    value: f64,
    at: Option<(f64, f64)>,
    failed: bool,
}

impl Worst {
    fn new(bound: f64) -> Self {
        Self {
            bound,
            value: 0.0,
            at: None,
            failed: false,
        }
    }

    fn record(&mut self, dev: f64, g: f64, l: f64) {
        if dev.is_nan() || dev > self.value {
            self.value = dev;
            self.at = Some((g, l));
        }
        if dev.is_nan() || dev > self.bound {
            self.failed = true;
        }
    }

    fn fail(&mut self, g: f64, l: f64) {
        self.failed = true;
        self.at.get_or_insert((g, l));
    }

    fn finish(self, name: &'static str) -> CheckResult {
        let at = match self.at {
            Some((g, l)) => format!(" at g={g}, l={l}"),
            None => String::new(),
        };
        CheckResult {
            name,
            passed: !self.failed,
            detail: format!("max {:.2e} (bound {:.0e}){at}", self.value, self.bound),
        }
    }
}

/// Relative to `max(1, |b|)`.
fn mixed(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn points(grid: &CheckGrid) -> Vec<(f64, f64, SystemParams)> {
    let mut out = Vec::new();
    for &g in &grid.g_values {
        for &l in &grid.l_values {
            if let Ok(p) = SystemParams::new(g, l) {
                out.push((g, l, p));
            }
        }
    }
    out
}

pub fn self_check(grid: &CheckGrid) -> CheckReport {
    let mut report = CheckReport::default();
    if grid.g_values.is_empty() || grid.l_values.is_empty() {
        report.warnings.push("empty grid: nothing to check".into());
        return report;
    }
    let pts = points(grid);
    if pts.len() != grid.g_values.len() * grid.l_values.len() {
        report.warnings.push("grid points with negative or non-finite values were skipped".into());
    }

    let mut det = Worst::new(1e-12);
    let mut semi = Worst::new(1e-10);
    let mut comm = Worst::new(1e-10);
    let mut noise = Worst::new(1e-9);
    let mut wick = Worst::new(1e-9);
    let mut rk4 = Worst::new(1e-8);
    for &(g, l, p) in &pts {
        det.record((determinant(p) - 1.0).abs(), g, l);
        match semigroup_defect(g, 0.4 * l, 0.6 * l) {
            Ok(d) => semi.record(d, g, l),
            Err(_) => semi.fail(g, l),
        }
        let c = commutator_diagnostics(p);
        comm.record((c.c_aa - 1.0).abs().max(c.c_ab.norm()), g, l);

        let closed = spontaneous_signals(p, NoiseMethod::ClosedForm);
        let quad = spontaneous_signals(p, NoiseMethod::Quadrature);
        match (closed, quad) {
            (Ok(c), Ok(q)) => noise.record(
                mixed(q.s_a, c.s_a)
                    .max(mixed(q.s_b, c.s_b))
                    .max(mixed(q.s_ab.norm(), c.s_ab.norm())),
                g,
                l,
            ),
            _ => noise.fail(g, l),
        }

        let k = propagator(p);
        let cov = noise_covariance(p);
        for input in InputState::ALL {
            let o = observe(input, p, Spontaneous::Include);
            let i = o.intensities;
            match &cov {
                Ok(cov) => {
                    let fock = FockState::from_input(input);
                    let ex = |ops: &[OutputOp]| normally_ordered(ops, &fock, &k, cov).re;
                    let dev = mixed(i.i_a, ex(&[OutputOp::ADag, OutputOp::A]))
                        .max(mixed(i.i_b, ex(&[OutputOp::BDag, OutputOp::B])))
                        .max(mixed(
                            o.coincidence,
                            ex(&[OutputOp::ADag, OutputOp::BDag, OutputOp::A, OutputOp::B]),
                        ));
                    wick.record(dev, g, l);
                }
                Err(_) => wick.fail(g, l),
            }
            match moment_ode_solve(MomentVector::from_input(input), p, RK4_STEPS) {
                Ok(v) => rk4.record(mixed(i.i_a, v.n_a).max(mixed(i.i_b, v.n_b)), g, l),
                Err(_) => rk4.fail(g, l),
            }
        }
    }
    report.results.push(det.finish("det K = 1"));
    report.results.push(semi.finish("semigroup K(l1+l2) = K(l1)K(l2)"));
    report.results.push(comm.finish("commutators [a,a+] = 1, [a,b+] = 0"));
    report.results.push(noise.finish("noise: closed form vs quadrature"));
    report.results.push(wick.finish("observables vs Wick enumeration"));
    report.results.push(rk4.finish("intensities vs RK4 moment equations"));

    report.results.push(continuity(grid));
    if let Some(r) = asymptotics(grid) {
        report.results.push(r);
    }
    report
}

/// `K(1 ± 10⁻⁷, l)` against `K(1, l)` for every grid length.
fn continuity(grid: &CheckGrid) -> CheckResult {
    let mut w = Worst::new(1e-5);
    for &l in &grid.l_values {
        let Ok(at) = SystemParams::new(1.0, l) else {
            continue;
        };
        let at = propagator(at).matrix();
        for g in [1.0 - 1e-7, 1.0 + 1e-7] {
            let near = propagator(SystemParams::new(g, l).expect("valid near 1")).matrix();
            for (x, y) in near.iter().flatten().zip(at.iter().flatten()) {
                w.record((x - y).norm(), g, l);
            }
        }
    }
    w.finish("continuity across g = 1")
}

/// Log-slope of `S_a` and the ratio `S_a/S_b` deep in the broken phase
/// (`λl = 10`) against their limits.
fn asymptotics(grid: &CheckGrid) -> Option<CheckResult> {
    let mut w = Worst::new(1e-3);
    let mut any = false;
    for &g in &grid.g_values {
        let Ok(p) = SystemParams::new(g, 0.0) else {
            continue;
        };
        let regime = classify_regime(p);
        if regime.kind != RegimeKind::Broken {
            continue;
        }
        any = true;
        let l = 10.0 / regime.rate;
        let h = 1e-3 * l;
        let s = |l: f64| {
            spontaneous_signals(SystemParams::new(g, l).expect("l > 0"), NoiseMethod::ClosedForm)
                .expect("closed form is infallible")
        };
        let slope = (s(l + h).s_a.ln() - s(l - h).s_a.ln()) / (2.0 * h);
        let limit = asymptotic_spontaneous(g).expect("broken phase");
        let here = s(l);
        let dev = (slope / limit.growth_rate - 1.0)
            .abs()
            .max((here.s_a / here.s_b / limit.amplitude_ratio - 1.0).abs());
        w.record(dev, g, l);
    }
    any.then(|| w.finish("broken-phase asymptotics"))
}
