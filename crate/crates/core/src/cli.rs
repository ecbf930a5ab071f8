//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 usage or parse error, 2 infeasible or uncovered,
//! 3 failed internal assertion.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::decomposition::{build_instance, Decomposition, DecompositionError, Orientation};
use crate::geometry::{half, Scene};
use crate::hitting::HittingError;
use crate::io::{self, IoError};
use crate::reduction::{self, ReductionError, ReductionPlan};
use crate::svg::{self, Overlay, RenderSpec};
use crate::visibility::{verify_coverage, Transmitter};

/// Seed variable for randomized generators; the commands here are deterministic.
pub const SEED_VAR: &str = "KTRANS_SEED";

#[derive(Parser, Debug)]
#[command(name = "ktrans", version, about = "Sliding k-transmitter guarding of orthogonal polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OrientationArg {
    H,
    V,
    Both,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::H => Orientation::Horizontal,
            OrientationArg::V => Orientation::Vertical,
            OrientationArg::Both => Orientation::Both,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Algo {
    Greedy,
    Exact,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Slices, slice segments, guard segments and crosses of a scene.
    Decompose {
        scene: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum, default_value = "both")]
        orientation: OrientationArg,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Minimum (exact) or greedy set of guard segments.
    Solve {
        scene: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, value_enum, default_value = "both")]
        orientation: OrientationArg,
        #[arg(long, default_value_t = 64)]
        cap: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Sample-based coverage check of a transmitter set.
    Verify {
        scene: PathBuf,
        guards: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        density: usize,
    },
    /// Hardness instance from a graph with bar visibility representation.
    GenHardness {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        disconnected: bool,
        #[arg(short)]
        o: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Structural checks on a generated hardness instance.
    Lemmas {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        disconnected: bool,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// SVG of a scene with optional overlays.
    Render {
        scene: PathBuf,
        #[arg(short)]
        k: Option<usize>,
        #[arg(long)]
        guards: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        scale: i64,
        #[arg(short)]
        o: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}: {1}")]
    File(PathBuf, std::io::Error),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Hitting(#[from] HittingError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Svg(#[from] svg::SvgError),
    #[error(transparent)]
    Visibility(#[from] crate::visibility::VisibilityError),
    #[error("{0}")]
    Uncovered(String),
}

impl CliError {
    fn code(&self) -> i32 {
        use DecompositionError::{CrossOutsidePixel, NonRectangularFace};
        let internal = |d: &DecompositionError| matches!(d, NonRectangularFace { .. } | CrossOutsidePixel { .. });
        match self {
            CliError::Hitting(HittingError::Infeasible(_)) | CliError::Uncovered(_) => 2,
            CliError::Decomposition(d) | CliError::Reduction(ReductionError::Decomposition(d)) if internal(d) => 3,
            CliError::Reduction(ReductionError::LemmaViolated { .. }) => 3,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::File(path.into(), e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::File(path.into(), e))
}

fn load_scene(path: &Path) -> Result<Scene, CliError> {
    Ok(io::scene_from_json(&read(path)?)?)
}

fn hardness(graph: &Path, k: usize, disconnected: bool) -> Result<(Scene, ReductionPlan, usize), CliError> {
    let (g, bars) = io::graph_from_json(&read(graph)?)?;
    let vc = reduction::min_vertex_cover(&g)?.size;
    let (mut scene, mut plan) = reduction::build_disconnected(&g, &bars, k)?;
    if !disconnected {
        (scene, plan) = reduction::connect(&plan)?;
    }
    Ok((scene, plan, vc))
}

fn execute(cmd: Command, out: &mut String) -> Result<(), CliError> {
    match cmd {
        Command::Decompose { scene, k, orientation, svg, json } => {
            let s = load_scene(&scene)?;
            let mut d = Decomposition::build(&s, k)?;
            let filter = Orientation::from(orientation);
            d.guards.retain(|g| filter.admits(g.axis()));
            if let Some(p) = svg {
                write(&p, &svg::render_svg(&s, &Overlay::decomposition(&d), &RenderSpec::default())?)?;
            }
            let text = io::decomposition_to_json(&d);
            match json {
                Some(p) => write(&p, &text)?,
                None => out.push_str(&text),
            }
            let _ = writeln!(
                out,
                "slices {} + {}, guards {}, crosses {}",
                d.h_slices.len(),
                d.v_slices.len(),
                d.guards.len(),
                d.crosses.len()
            );
        }
        Command::Solve { scene, k, algo, orientation, cap, o } => {
            let s = load_scene(&scene)?;
            let inst = build_instance(&s, k, orientation.into())?;
            let sol = match algo {
                Algo::Greedy => inst.solve_greedy()?,
                Algo::Exact => inst.solve_exact(cap)?,
            };
            let ts: Vec<_> = sol.selected.iter().map(|&i| Transmitter::unchecked(inst.guards[i].segment)).collect();
            if let Some(p) = o {
                write(&p, &io::transmitters_to_json(&ts, Some(&sol)))?;
            }
            let _ = writeln!(out, "size {}", sol.size);
        }
        Command::Verify { scene, guards, k, density } => {
            let s = load_scene(&scene)?;
            let ts = io::transmitters_from_json(&read(&guards)?)?
                .into_iter()
                .map(|t| Transmitter::new(&s, t.segment))
                .collect::<Result<Vec<_>, _>>()?;
            let report = verify_coverage(&s, &ts, k, density)?;
            if !report.covered {
                let mut msg = format!("uncovered: {} of {} sample points unseen", report.unseen.len(), report.total);
                for p in &report.unseen {
                    let _ = write!(msg, "\n  ({}, {})", half(p.x), half(p.y));
                }
                return Err(CliError::Uncovered(msg));
            }
            let _ = writeln!(out, "covered: {} sample points", report.total);
        }
        Command::GenHardness { graph, k, disconnected, o, plan: plan_path } => {
            let (scene, plan, vc) = hardness(&graph, k, disconnected)?;
            write(&o, &io::scene_to_json(&scene))?;
            if let Some(p) = plan_path {
                write(&p, &io::to_json(&plan))?;
            }
            let a = &plan.accounting;
            let _ = writeln!(
                out,
                "vertices {}, gadgets {}, connectors {}, N_s {}, expected optimum {}",
                scene.vertex_count(),
                plan.gadgets.len(),
                a.n_c,
                a.n_s,
                reduction::expected_guard_count(&plan, vc)
            );
        }
        Command::Lemmas { graph, k, disconnected, limit } => {
            let (scene, plan, _) = hardness(&graph, k, disconnected)?;
            let report = reduction::check_structural_lemmas(&scene, &plan, limit)?;
            out.push_str(&io::to_json(&report));
        }
        Command::Render { scene, k, guards, plan, scale, o } => {
            let s = load_scene(&scene)?;
            let mut overlay = match k {
                Some(k) => Overlay::decomposition(&Decomposition::build(&s, k)?),
                None => Overlay::default(),
            };
            if let Some(p) = plan {
                let plan: ReductionPlan = serde_json::from_str(&read(&p)?).map_err(IoError::from)?;
                overlay.gadgets = Overlay::gadgets(&plan).gadgets;
            }
            if let Some(p) = guards {
                overlay = overlay.with_guards(io::transmitters_from_json(&read(&p)?)?.into_iter().map(|t| t.segment));
            }
            let spec = RenderSpec { scale, ..RenderSpec::default() };
            write(&o, &svg::render_svg(&s, &overlay, &spec)?)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    if let Ok(v) = std::env::var(SEED_VAR) {
        if v.parse::<u64>().is_err() {
            eprintln!("ktrans: {SEED_VAR} must be an unsigned integer, got {v:?}");
            return 1;
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut out = String::new();
    let result = execute(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ktrans: {e}");
            e.code()
        }
    }
}
