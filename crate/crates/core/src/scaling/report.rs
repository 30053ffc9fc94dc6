use serde::Serialize;

use crate::dirichlet::{first_axis_deviation, glue_hm, solve_faces, symmetrize, EnergyForm};
use crate::error::{Error, Result};
use crate::graph::{build_cell_graph, CellGraph};
use crate::spec::CarpetSpec;
use crate::symmetry::first_axis_reflections;

/// One level of a resistance sequence.
#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub level: u32,
    pub cells: usize,
    /// Energy of the symmetrized face solution `h0`.
    pub energy: f64,
    /// Energy straight from the solver, before symmetrization.
    pub solver_energy: f64,
    pub iterations: usize,
    pub residual: f64,
    pub relative_residual: f64,
    pub min_value: f64,
    pub max_value: f64,
    /// Largest change under a first-axis reflection, before symmetrization.
    pub g1_deviation: f64,
    /// The same after symmetrization; zero unless averaging broke down.
    pub symmetrized_deviation: f64,
}

/// Harmonic energy at `outer_level` against the energy of the function glued
/// from `inner_level`.
#[derive(Debug, Clone, Serialize)]
pub struct GlueGap {
    pub inner_level: u32,
    pub outer_level: u32,
    pub glued_energy: f64,
    pub harmonic_energy: f64,
    pub gap: f64,
    pub relative_gap: f64,
    /// `(#S/l²)^m E_inner`.
    pub predicted_energy: f64,
    /// `|glued / predicted − 1|`.
    pub scaling_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Budget,
    Numerical,
}

#[derive(Debug, Clone, Serialize)]
pub struct Incomplete {
    pub level: u32,
    pub kind: FailureKind,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub spec_hash: String,
    pub d: usize,
    pub l: u32,
    pub cells_per_level: usize,
    pub tolerance: f64,
    pub budget: u64,
    pub levels: Vec<LevelRecord>,
    /// `r_n = E_{n+1} / E_n`.
    pub ratios: Vec<f64>,
    /// `log_l(#S / r_n)`.
    pub dw_estimates: Vec<f64>,
    /// `#S / l² − r_n`.
    pub margins: Vec<f64>,
    pub glue_gaps: Vec<GlueGap>,
    /// `log_l #S` minus the least-squares slope of `log_l E_n` in `n`.
    pub dw_regression: Option<f64>,
    /// Whether `r_n` is non-decreasing in `n`.
    pub ratios_monotone: bool,
    pub complete: bool,
    pub failure: Option<Incomplete>,
}

impl ScalingReport {
    /// `#S / l²`, the value of `r` at which `d_w = 2`.
    pub fn critical_ratio(&self) -> f64 {
        self.cells_per_level as f64 / (self.l as f64 * self.l as f64)
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|r| r.energy).collect()
    }

    /// Fills `ratios`, `dw_estimates`, `margins`, `dw_regression` and
    /// `ratios_monotone` from `levels`.
    pub fn derive(&mut self) {
        let e = self.energies();
        let s = self.cells_per_level as f64;
        let ln_l = (self.l as f64).ln();
        self.ratios = e.windows(2).map(|w| w[1] / w[0]).collect();
        self.dw_estimates = self.ratios.iter().map(|r| (s / r).ln() / ln_l).collect();
        let crit = self.critical_ratio();
        self.margins = self.ratios.iter().map(|r| crit - r).collect();
        self.ratios_monotone = self.ratios.windows(2).all(|w| w[1] >= w[0]);
        self.dw_regression = (e.len() >= 2).then(|| {
            let xs: Vec<f64> = self.levels.iter().map(|r| r.level as f64).collect();
            let ys: Vec<f64> = e.iter().map(|v| v.ln() / ln_l).collect();
            let n = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / n;
            let my = ys.iter().sum::<f64>() / n;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            s.ln() / ln_l - sxy / sxx
        });
    }
}

struct Level {
    graph: CellGraph,
    h0: Vec<f64>,
}

fn solve_level(spec: &CarpetSpec, n: u32, tol: f64, budget: u64) -> Result<(Level, LevelRecord)> {
    let graph = build_cell_graph(spec, n, budget)?;
    let h = solve_faces(&graph, 0, tol)?;
    let g1_deviation = first_axis_deviation(&graph, &h.values)?;
    let h0 = symmetrize(&graph, &h.values, &first_axis_reflections(spec.d()))?;
    let record = LevelRecord {
        level: n,
        cells: graph.len(),
        energy: EnergyForm::new(&graph).energy(&h0),
        solver_energy: h.energy,
        iterations: h.iterations,
        residual: h.residual,
        relative_residual: h.relative_residual,
        min_value: h.min_value(),
        max_value: h.max_value(),
        g1_deviation,
        symmetrized_deviation: first_axis_deviation(&graph, &h0)?,
    };
    Ok((Level { graph, h0 }, record))
}

fn gap(spec: &CarpetSpec, inner: &Level, inner_energy: f64, outer: &CellGraph, harmonic: f64) -> Result<GlueGap> {
    let glued = glue_hm(&inner.h0, &inner.graph, outer)?;
    let glued_energy = EnergyForm::new(outer).energy(&glued);
    let m = (outer.level() - inner.graph.level()) as i32;
    let l = spec.l() as f64;
    let predicted_energy = (spec.len() as f64 / (l * l)).powi(m) * inner_energy;
    Ok(GlueGap {
        inner_level: inner.graph.level(),
        outer_level: outer.level(),
        glued_energy,
        harmonic_energy: harmonic,
        gap: glued_energy - harmonic,
        relative_gap: (glued_energy - harmonic) / glued_energy,
        predicted_energy,
        scaling_error: (glued_energy / predicted_energy - 1.0).abs(),
    })
}

fn classify(e: &Error) -> FailureKind {
    match e {
        Error::Budget { .. } => FailureKind::Budget,
        _ => FailureKind::Numerical,
    }
}

/// Solves the first-axis face problem at levels `1..=n_max` and compares each
/// level with the function glued from the level below.
///
/// A budget or solver failure stops the sequence; what was computed is kept
/// and the report is marked incomplete.
pub fn resistance_sequence(spec: &CarpetSpec, n_max: u32, tol: f64, budget: u64) -> Result<ScalingReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("need at least one level".into()));
    }
    let mut report = ScalingReport {
        spec_hash: spec.hash(),
        d: spec.d(),
        l: spec.l(),
        cells_per_level: spec.len(),
        tolerance: tol,
        budget,
        levels: Vec::new(),
        ratios: Vec::new(),
        dw_estimates: Vec::new(),
        margins: Vec::new(),
        glue_gaps: Vec::new(),
        dw_regression: None,
        ratios_monotone: true,
        complete: true,
        failure: None,
    };
    let mut prev: Option<Level> = None;
    for n in 1..=n_max {
        let step = solve_level(spec, n, tol, budget).and_then(|(level, record)| {
            let g = match &prev {
                Some(p) => {
                    let inner_energy = report.levels.last().map(|r| r.energy).unwrap_or_default();
                    Some(gap(spec, p, inner_energy, &level.graph, record.energy)?)
                }
                None => None,
            };
            Ok((level, record, g))
        });
        match step {
            Ok((level, record, g)) => {
                report.levels.push(record);
                report.glue_gaps.extend(g);
                prev = Some(level);
            }
            Err(e) => {
                report.complete = false;
                report.failure = Some(Incomplete {
                    level: n,
                    kind: classify(&e),
                    reason: e.to_string(),
                });
                break;
            }
        }
    }
    report.derive();
    Ok(report)
}

/// Glue gap between levels `n` and `n + m`, both solved from scratch.
pub fn glue_gap(spec: &CarpetSpec, n: u32, m: u32, tol: f64, budget: u64) -> Result<GlueGap> {
    let (inner, record) = solve_level(spec, n, tol, budget)?;
    let outer = build_cell_graph(spec, n + m, budget)?;
    let h = solve_faces(&outer, 0, tol)?;
    let h0 = symmetrize(&outer, &h.values, &first_axis_reflections(spec.d()))?;
    let harmonic = EnergyForm::new(&outer).energy(&h0);
    gap(spec, &inner, record.energy, &outer, harmonic)
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessVerdict {
    pub pass: bool,
    /// Smallest `#S/l² − r_n`; `None` without ratios.
    pub min_margin: Option<f64>,
    pub min_glue_gap: Option<f64>,
    pub failures: Vec<String>,
}

/// Passes iff the report is complete with at least two levels, every ratio is
/// strictly below `#S/l²` and every glue gap is strictly positive.
pub fn dw_witness(report: &ScalingReport) -> WitnessVerdict {
    let mut failures = Vec::new();
    if !report.complete {
        failures.push("report is incomplete".to_string());
    }
    if report.levels.len() < 2 {
        failures.push(format!("{} level(s), need at least 2", report.levels.len()));
    }
    let crit = report.critical_ratio();
    for (k, r) in report.ratios.iter().enumerate() {
        if r.is_nan() || *r >= crit {
            failures.push(format!(
                "ratio at level {} is {r}, not below {crit}",
                report.levels[k].level
            ));
        }
    }
    for g in &report.glue_gaps {
        if g.gap.is_nan() || g.gap <= 0.0 {
            failures.push(format!(
                "glue gap {} -> {} is {}, not positive",
                g.inner_level, g.outer_level, g.gap
            ));
        }
    }
    let min_margin = report.ratios.iter().map(|r| crit - r).reduce(f64::min);
    let min_glue_gap = report.glue_gaps.iter().map(|g| g.gap).reduce(f64::min);
    WitnessVerdict {
        pass: failures.is_empty(),
        min_margin,
        min_glue_gap,
        failures,
    }
}
