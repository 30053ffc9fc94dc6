//! The `gsc` command line.
//!
//! Exit codes: 0 success, 1 a check came out negative, 2 usage or parse
//! error, 3 cell budget exceeded, 4 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::census::nondiagonality_census;
use crate::counterexample::gen_counterexample;
use crate::dirichlet::{first_axis_deviation, solve_faces, symmetrize, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::{build_cell_graph, DEFAULT_CELL_BUDGET};
use crate::output::{self, Manifest, RunDir};
use crate::scaling::{
    dw_witness, energy_profile, random_walk_crossing, resistance_sequence, FailureKind, ScalingReport,
    WitnessVerdict,
};
use crate::spec::CarpetSpec;
use crate::symmetry::first_axis_reflections;
use crate::validate::{validate_spec_with, NdMethod, ValidationReport, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gsc", version, about = "Generalized Sierpinski carpets: axioms, energies, walk dimension")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the four carpet axioms and the slab condition.
    Validate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Non-diagonality formulation.
        #[arg(long, default_value = "ND_2")]
        method: NdMethod,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write a spec file in canonical form.
    Generate {
        /// Counterexample family member `d,l`.
        #[arg(long, value_name = "D,L", conflicts_with = "builtin")]
        counterexample: Option<String>,
        #[arg(long)]
        builtin: Option<String>,
        /// Spec file to write (default: <out>/spec.json).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Resistance sequence and the strict `d_w > 2` witness.
    Dw {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 4)]
        levels: u32,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Harmonic function between opposite faces at one level.
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 2)]
        level: u32,
        /// Face axis, 1-based.
        #[arg(long, default_value_t = 1)]
        axis: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random-walk crossing time between opposite faces.
    Walk {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Energy distribution of the face solution over coarse cells.
    Profile {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[arg(long, default_value_t = 2)]
        coarsen: u32,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cell graph summary and face-edge list.
    Graph {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Non-diagonality verdicts over all small symmetric specs.
    Census {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        side: u32,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpecArgs {
    /// Spec file (JSON).
    #[arg(value_name = "SPEC", conflicts_with_all = ["spec", "builtin"])]
    pub path: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    pub spec: Option<PathBuf>,
    /// `sc`, `menger` or `counterexample:d,l`.
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
}

impl SpecArgs {
    pub fn load(&self) -> Result<CarpetSpec> {
        match (self.path.as_ref().or(self.spec.as_ref()), &self.builtin) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                CarpetSpec::from_json_str(&text).map_err(|e| match e {
                    Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
                    other => other,
                })
            }
            (None, Some(name)) => CarpetSpec::builtin(name),
            (None, None) => Err(Error::InvalidArgument(
                "give a spec file or --builtin NAME".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// Relative residual tolerance.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Largest cell graph allowed.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    #[arg(long = "out", default_value = "gsc-out")]
    pub dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "json,csv")]
    pub format: Vec<Format>,
}

impl OutArgs {
    fn json(&self) -> bool {
        self.format.contains(&Format::Json)
    }

    fn csv(&self) -> bool {
        self.format.contains(&Format::Csv)
    }

    /// Creates the directory and writes the manifest.
    fn start(&self, command: &str, spec: Option<&CarpetSpec>, config: serde_json::Value) -> Result<RunDir> {
        let dir = RunDir::create(&self.dir)?;
        dir.write_json("manifest.json", &Manifest::new(command, spec.map(CarpetSpec::hash), config))?;
        Ok(dir)
    }
}

/// Parses `args` and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not configure {n} threads: {e}");
        }
    }
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Validate { spec, method, out } => cmd_validate(spec, *method, out),
        Command::Generate {
            counterexample,
            builtin,
            output,
            out,
        } => cmd_generate(counterexample.as_deref(), builtin.as_deref(), output.as_ref(), out),
        Command::Dw {
            spec,
            levels,
            solver,
            out,
        } => cmd_dw(spec, *levels, solver, out),
        Command::Solve {
            spec,
            level,
            axis,
            solver,
            out,
        } => cmd_solve(spec, *level, *axis, solver, out),
        Command::Walk {
            spec,
            level,
            trials,
            seed,
            budget,
            out,
        } => cmd_walk(spec, *level, *trials, *seed, *budget, out),
        Command::Profile {
            spec,
            level,
            coarsen,
            solver,
            out,
        } => cmd_profile(spec, *level, *coarsen, solver, out),
        Command::Graph {
            spec,
            level,
            budget,
            out,
        } => cmd_graph(spec, *level, *budget, out),
        Command::Census { dim, side, out } => cmd_census(*dim, *side, out),
    }
}

fn verdict_line(name: &str, v: &Verdict) {
    match &v.witness {
        None => println!("{name}: {}", if v.pass { "pass" } else { "fail" }),
        Some(w) => println!(
            "{name}: fail, witness {}",
            serde_json::to_string(w).unwrap_or_default()
        ),
    }
}

pub fn print_validation(report: &ValidationReport) {
    println!("spec {} (d = {}, l = {}, {} cells)", report.spec_hash, report.d, report.l, report.cells);
    verdict_line("GSC1 symmetry", &report.symmetry);
    verdict_line("GSC2 connectedness", &report.connectedness);
    verdict_line(
        &format!("GSC3 non-diagonality ({})", report.nondiagonality_method),
        &report.nondiagonality,
    );
    verdict_line("GSC4 borders", &report.borders);
    println!(
        "BB99 slab condition: {} (slab counts {:?})",
        if report.bb99.holds { "holds" } else { "fails" },
        report.bb99.slab_counts
    );
    println!("overall: {}", if report.pass { "pass" } else { "fail" });
}

fn cmd_validate(spec_args: &SpecArgs, method: NdMethod, out: &OutArgs) -> Result<i32> {
    let spec = spec_args.load()?;
    let dir = out.start(
        "validate",
        Some(&spec),
        json!({ "spec": spec_args, "method": method.to_string(), "out": out }),
    )?;
    let report = validate_spec_with(&spec, method);
    dir.write_json("validation.json", &report)?;
    print_validation(&report);
    Ok(if report.pass { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_generate(
    counterexample: Option<&str>,
    builtin: Option<&str>,
    output: Option<&PathBuf>,
    out: &OutArgs,
) -> Result<i32> {
    let spec = match (counterexample, builtin) {
        (Some(pair), _) => {
            let (d, l) = crate::spec::parse_pair(pair)?;
            gen_counterexample(d, l)?
        }
        (None, Some(name)) => CarpetSpec::builtin(name)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "give --counterexample D,L or --builtin NAME".into(),
            ))
        }
    };
    let dir = out.start(
        "generate",
        Some(&spec),
        json!({ "counterexample": counterexample, "builtin": builtin, "output": output, "out": out }),
    )?;
    let path = output.cloned().unwrap_or_else(|| dir.path("spec.json"));
    let mut file = fs::File::create(&path)?;
    writeln!(file, "{}", spec.to_canonical_json())?;
    println!("wrote {} ({} cells, hash {})", path.display(), spec.len(), spec.hash());
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DwOutput<'a> {
    report: &'a ScalingReport,
    witness: &'a WitnessVerdict,
}

fn cmd_dw(spec_args: &SpecArgs, levels: u32, solver: &SolverArgs, out: &OutArgs) -> Result<i32> {
    if levels < 2 {
        return Err(Error::InvalidArgument(format!(
            "--levels must be at least 2 to form a ratio, got {levels}"
        )));
    }
    let spec = spec_args.load()?;
    let dir = out.start(
        "dw",
        Some(&spec),
        json!({ "spec": spec_args, "levels": levels, "solver": solver, "out": out }),
    )?;
    let report = resistance_sequence(&spec, levels, solver.tol, solver.budget)?;
    let witness = dw_witness(&report);
    if out.json() {
        dir.write_json("scaling.json", &DwOutput {
            report: &report,
            witness: &witness,
        })?;
    }
    if out.csv() {
        output::write_scaling_csv(&report, dir.create_file("scaling.csv")?)?;
    }
    println!("#S/l^2 = {}", report.critical_ratio());
    for (k, rec) in report.levels.iter().enumerate() {
        print!("level {}: {} cells, E = {:.15}", rec.level, rec.cells, rec.energy);
        if let (Some(r), Some(dw), Some(m)) =
            (report.ratios.get(k), report.dw_estimates.get(k), report.margins.get(k))
        {
            print!(", ratio {r:.12}, d_w {dw:.6}, margin {m:.6e}");
        }
        println!();
    }
    if let Some(f) = &report.failure {
        eprintln!("error: stopped at level {}: {}", f.level, f.reason);
        return Ok(match f.kind {
            FailureKind::Budget => 3,
            FailureKind::Numerical => 4,
        });
    }
    if !report.ratios_monotone {
        println!("note: ratios are not monotone in n");
    }
    match witness.min_margin {
        Some(m) if witness.pass => println!("d_w > 2 witness: pass, minimal margin {m:.6e}"),
        _ => println!("d_w > 2 witness: fail: {}", witness.failures.join("; ")),
    }
    Ok(if witness.pass { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    spec_hash: String,
    level: u32,
    axis: usize,
    cells: usize,
    solution: &'a crate::dirichlet::HarmonicSolution,
    g1_deviation: Option<f64>,
    symmetrized_energy: Option<f64>,
}

fn cmd_solve(spec_args: &SpecArgs, level: u32, axis: usize, solver: &SolverArgs, out: &OutArgs) -> Result<i32> {
    let spec = spec_args.load()?;
    if axis == 0 || axis > spec.d() {
        return Err(Error::InvalidArgument(format!(
            "--axis must be in 1..={}, got {axis}",
            spec.d()
        )));
    }
    let dir = out.start(
        "solve",
        Some(&spec),
        json!({ "spec": spec_args, "level": level, "axis": axis, "solver": solver, "out": out }),
    )?;
    let graph = build_cell_graph(&spec, level, solver.budget)?;
    let h = solve_faces(&graph, axis - 1, solver.tol)?;
    let (values, g1_deviation, symmetrized_energy) = if axis == 1 {
        let dev = first_axis_deviation(&graph, &h.values)?;
        let sym = symmetrize(&graph, &h.values, &first_axis_reflections(spec.d()))?;
        let e = crate::dirichlet::EnergyForm::new(&graph).energy(&sym);
        (sym, Some(dev), Some(e))
    } else {
        (h.values.clone(), None, None)
    };
    if out.json() {
        dir.write_json("solution.json", &SolveOutput {
            spec_hash: spec.hash(),
            level,
            axis,
            cells: graph.len(),
            solution: &h,
            g1_deviation,
            symmetrized_energy,
        })?;
    }
    if out.csv() {
        output::write_values_csv(&graph, &values, dir.create_file("solution.csv")?)?;
    }
    println!(
        "level {level}, axis {axis}: {} cells, energy {:.15}, resistance {:.15}, {} iterations, residual {:.3e}",
        graph.len(),
        h.energy,
        1.0 / h.energy,
        h.iterations,
        h.residual
    );
    Ok(EXIT_OK)
}

fn cmd_walk(
    spec_args: &SpecArgs,
    level: u32,
    trials: u64,
    seed: u64,
    budget: u64,
    out: &OutArgs,
) -> Result<i32> {
    let spec = spec_args.load()?;
    let dir = out.start(
        "walk",
        Some(&spec),
        json!({ "spec": spec_args, "level": level, "trials": trials, "seed": seed, "budget": budget, "out": out }),
    )?;
    let stats = random_walk_crossing(&spec, level, trials, seed, budget)?;
    if out.json() {
        dir.write_json("walk.json", &stats)?;
    }
    if out.csv() {
        output::write_walk_csv(&stats, dir.create_file("walk.csv")?)?;
    }
    println!(
        "level {level}: mean crossing time {:.6} ± {:.6} over {trials} trials (seed {seed})",
        stats.mean, stats.std_error
    );
    Ok(EXIT_OK)
}

fn cmd_profile(spec_args: &SpecArgs, level: u32, coarsen: u32, solver: &SolverArgs, out: &OutArgs) -> Result<i32> {
    let spec = spec_args.load()?;
    let dir = out.start(
        "profile",
        Some(&spec),
        json!({ "spec": spec_args, "level": level, "coarsen": coarsen, "solver": solver, "out": out }),
    )?;
    let graph = build_cell_graph(&spec, level, solver.budget)?;
    let h = solve_faces(&graph, 0, solver.tol)?;
    let h0 = symmetrize(&graph, &h.values, &first_axis_reflections(spec.d()))?;
    let profile = energy_profile(&graph, &h0, coarsen)?;
    if out.json() {
        dir.write_json("profile.json", &profile)?;
    }
    if out.csv() {
        output::write_profile_csv(&profile, dir.create_file("profile.csv")?)?;
        output::write_concentration_csv(&profile, dir.create_file("concentration.csv")?)?;
    }
    for p in &profile.curve {
        println!(
            "q = {}: {} cells, mass {:.6} (fractional {:.6})",
            p.q, p.cells, p.mass, p.fractional_mass
        );
    }
    Ok(EXIT_OK)
}

fn cmd_graph(spec_args: &SpecArgs, level: u32, budget: u64, out: &OutArgs) -> Result<i32> {
    let spec = spec_args.load()?;
    let dir = out.start(
        "graph",
        Some(&spec),
        json!({ "spec": spec_args, "level": level, "budget": budget, "out": out }),
    )?;
    let graph = build_cell_graph(&spec, level, budget)?;
    let header = graph.header();
    if out.json() {
        dir.write_json("graph.json", &header)?;
    }
    if out.csv() {
        graph.write_edges_csv(dir.create_file("edges.csv")?)?;
    }
    println!("level {level}: {} cells, {} face edges", header.cells, header.face_edges);
    Ok(EXIT_OK)
}

fn cmd_census(dim: usize, side: u32, out: &OutArgs) -> Result<i32> {
    let dir = out.start("census", None, json!({ "dim": dim, "side": side, "out": out }))?;
    let entries = nondiagonality_census(dim, side)?;
    if out.json() {
        dir.write_json("census.json", &entries)?;
    }
    if out.csv() {
        let mut f = dir.create_file("census.csv")?;
        writeln!(f, "spec_hash,cells,nd_m1,nd_2,ndf")?;
        for e in &entries {
            writeln!(f, "{},{},{},{},{}", e.spec_hash, e.cells, e.nd_m1, e.nd_2, e.ndf)?;
        }
    }
    let disagree = entries.iter().filter(|e| e.nd_2 != e.ndf).count();
    let weaker = entries.iter().filter(|e| e.nd_m1 && !e.nd_2).count();
    println!(
        "d = {dim}, l = {side}: {} specs, ND_2/NDF disagreements {disagree}, ND_m1 pass with ND_2 fail {weaker}",
        entries.len()
    );
    Ok(if disagree == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}
