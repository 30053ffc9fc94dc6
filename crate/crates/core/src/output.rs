//! Run manifests and JSON/CSV writers.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::Result;
use crate::graph::CellGraph;
use crate::scaling::{EnergyProfile, ScalingReport, WalkStats};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub spec_hash: Option<String>,
    pub config: serde_json::Value,
    pub threads: usize,
    pub created_unix: u64,
}

impl Manifest {
    pub fn new(command: &str, spec_hash: Option<String>, config: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            spec_hash,
            config,
            threads: rayon::current_num_threads(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Output directory of one run.
#[derive(Debug, Clone)]
pub struct RunDir {
    root: PathBuf,
}

impl RunDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self { root })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let path = self.path(name);
        write_json(&path, value)?;
        Ok(path)
    }

    pub fn create_file(&self, name: &str) -> Result<BufWriter<fs::File>> {
        Ok(BufWriter::new(fs::File::create(self.path(name))?))
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `level,cells,energy,ratio,dw_estimate,margin,glue_gap`; the ratio on row
/// `n` is `E_{n+1}/E_n` and the gap is that of the glue into level `n`.
pub fn write_scaling_csv<W: Write>(report: &ScalingReport, mut out: W) -> Result<()> {
    writeln!(out, "level,cells,energy,ratio,dw_estimate,margin,glue_gap")?;
    for (k, rec) in report.levels.iter().enumerate() {
        let gap = report
            .glue_gaps
            .iter()
            .find(|g| g.outer_level == rec.level)
            .map(|g| g.gap);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            rec.level,
            rec.cells,
            rec.energy,
            opt(report.ratios.get(k).copied()),
            opt(report.dw_estimates.get(k).copied()),
            opt(report.margins.get(k).copied()),
            opt(gap)
        )?;
    }
    Ok(())
}

/// `x_1,…,x_d,value` with integer origins at resolution `l^n`.
pub fn write_values_csv<W: Write>(graph: &CellGraph, values: &[f64], mut out: W) -> Result<()> {
    let head: Vec<String> = (1..=graph.d()).map(|k| format!("x_{k}")).collect();
    writeln!(out, "{},value", head.join(","))?;
    let mut origin = vec![0u64; graph.d()];
    for (c, v) in values.iter().enumerate() {
        graph.origin_into(c, &mut origin);
        for o in &origin {
            write!(out, "{o},")?;
        }
        writeln!(out, "{v}")?;
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(profile: &EnergyProfile, mut out: W) -> Result<()> {
    let d = profile.masses.first().map_or(0, |c| c.origin.len());
    let head: Vec<String> = (1..=d).map(|k| format!("x_{k}")).collect();
    writeln!(out, "{},nu,mu", head.join(","))?;
    for c in &profile.masses {
        for o in &c.origin {
            write!(out, "{o},")?;
        }
        writeln!(out, "{},{}", c.nu, c.mu)?;
    }
    Ok(())
}

pub fn write_concentration_csv<W: Write>(profile: &EnergyProfile, mut out: W) -> Result<()> {
    writeln!(out, "q,cells,mass,fractional_mass")?;
    for p in &profile.curve {
        writeln!(out, "{},{},{},{}", p.q, p.cells, p.mass, p.fractional_mass)?;
    }
    Ok(())
}

pub fn write_walk_csv<W: Write>(stats: &WalkStats, mut out: W) -> Result<()> {
    writeln!(out, "level,trials,seed,mean,std_error,std_dev,max_steps")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        stats.level, stats.trials, stats.seed, stats.mean, stats.std_error, stats.std_dev, stats.max_steps
    )?;
    Ok(())
}
