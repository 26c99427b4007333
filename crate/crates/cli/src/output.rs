//! result.json, trace.csv, front.csv and compare.csv writers.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use conebb::{ConeKind, IterationTrace, SearchBox, SolveResult64};
use serde::Serialize;

use crate::config::RunConfig;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ConeEcho {
    Polyhedral { epsilon: f64 },
    IceCream { w: Vec<f64>, theta: f64 },
}

#[derive(Serialize)]
struct ParamsEcho {
    problem: String,
    preset: String,
    cone: ConeEcho,
    tol_gap: f64,
    tol_width: f64,
    seed: u64,
    population: usize,
    generations: usize,
    normalize: bool,
    max_iterations: usize,
}

#[derive(Serialize)]
struct BoxEcho {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl From<&SearchBox<f64>> for BoxEcho {
    fn from(b: &SearchBox<f64>) -> Self {
        Self {
            lo: b.lo().to_vec(),
            hi: b.hi().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct LowerEcho {
    values: Vec<f64>,
    region: BoxEcho,
}

#[derive(Serialize)]
struct ReferenceEcho {
    l_star: Vec<f64>,
    u_nad: Vec<f64>,
}

#[derive(Serialize)]
struct ResultJson {
    params: ParamsEcho,
    status: String,
    message: Option<String>,
    iterations: usize,
    gap: Option<f64>,
    raw_gap: Option<f64>,
    omega: Option<f64>,
    upper_bounds: Vec<Vec<f64>>,
    solutions: Vec<Vec<f64>>,
    lower_bounds: Vec<LowerEcho>,
    boxes: Vec<BoxEcho>,
    reference_points: Option<ReferenceEcho>,
    warnings: Vec<String>,
}

fn params_echo(cfg: &RunConfig) -> ParamsEcho {
    let p = &cfg.params;
    let cone = match p.cone.kind() {
        ConeKind::PolyhedralEpsilon { epsilon } => ConeEcho::Polyhedral { epsilon: *epsilon },
        ConeKind::IceCream { w, theta } => ConeEcho::IceCream {
            w: w.clone(),
            theta: *theta,
        },
    };
    ParamsEcho {
        problem: cfg.problem.name().to_string(),
        preset: cfg.preset.clone(),
        cone,
        tol_gap: p.tol_gap,
        tol_width: p.tol_width,
        seed: p.sampler.seed,
        population: p.sampler.population,
        generations: p.sampler.generations,
        normalize: p.normalize,
        max_iterations: p.max_iterations,
    }
}

/// Outcome of a run, successful or not, in the shape the writers need.
pub enum Outcome<'a> {
    Solved(&'a SolveResult64),
    Failed {
        status: &'static str,
        message: String,
        trace: &'a [IterationTrace<f64>],
    },
}

impl Outcome<'_> {
    fn trace(&self) -> &[IterationTrace<f64>] {
        match self {
            Outcome::Solved(r) => &r.trace,
            Outcome::Failed { trace, .. } => trace,
        }
    }
}

pub fn write_run(dir: &Path, cfg: &RunConfig, outcome: &Outcome<'_>) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_trace(&dir.join("trace.csv"), outcome.trace())?;
    write_front(&dir.join("front.csv"), cfg, outcome)?;
    write_result(&dir.join("result.json"), cfg, outcome)
}

fn write_trace(path: &Path, trace: &[IterationTrace<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record([
        "k",
        "boxes_before",
        "boxes_after_feasibility",
        "boxes_retained",
        "omega_k",
        "gap",
        "elapsed_ms",
    ])?;
    for t in trace {
        w.write_record([
            t.k.to_string(),
            t.boxes_before.to_string(),
            t.boxes_after_feasibility.to_string(),
            t.boxes_retained.to_string(),
            fmt_f64(t.omega_k),
            fmt_f64(t.gap),
            fmt_f64(t.elapsed.as_secs_f64() * 1e3),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_front(path: &Path, cfg: &RunConfig, outcome: &Outcome<'_>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    let header: Vec<String> = (1..=cfg.problem.num_objectives())
        .map(|i| format!("f{i}"))
        .chain((1..=cfg.problem.num_vars()).map(|i| format!("x{i}")))
        .collect();
    w.write_record(&header)?;
    if let Outcome::Solved(res) = outcome {
        for e in res.upper_bounds.entries() {
            let row: Vec<String> = e
                .payload
                .objectives
                .iter()
                .chain(&e.payload.x)
                .map(|&v| fmt_f64(v))
                .collect();
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_result(path: &Path, cfg: &RunConfig, outcome: &Outcome<'_>) -> Result<()> {
    let doc = match outcome {
        Outcome::Solved(r) => ResultJson {
            params: params_echo(cfg),
            status: match r.status {
                conebb::Termination::Converged => "converged",
                conebb::Termination::IterationLimit => "max_iterations",
            }
            .to_string(),
            message: None,
            iterations: r.trace.len(),
            gap: Some(r.gap),
            raw_gap: r.trace.last().map(|t| t.raw_gap),
            omega: Some(r.omega),
            upper_bounds: r.front(),
            solutions: r.solutions(),
            lower_bounds: r
                .lower_bounds
                .entries()
                .iter()
                .map(|e| LowerEcho {
                    values: e.payload.values.clone(),
                    region: (&e.payload.region).into(),
                })
                .collect(),
            boxes: r.boxes.iter().map(BoxEcho::from).collect(),
            reference_points: r.reference_points.as_ref().map(|rp| ReferenceEcho {
                l_star: rp.l_star.clone(),
                u_nad: rp.u_nad.clone(),
            }),
            warnings: r.warnings.clone(),
        },
        Outcome::Failed { status, message, trace } => ResultJson {
            params: params_echo(cfg),
            status: status.to_string(),
            message: Some(message.clone()),
            iterations: trace.len(),
            gap: None,
            raw_gap: None,
            omega: trace.last().map(|t| t.omega_k),
            upper_bounds: Vec::new(),
            solutions: Vec::new(),
            lower_bounds: Vec::new(),
            boxes: Vec::new(),
            reference_points: None,
            warnings: Vec::new(),
        },
    };
    let text = serde_json::to_string_pretty(&doc)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// Per-iteration boxes_retained of two runs side by side; a run that stopped
/// earlier leaves its cells empty.
pub fn write_compare(path: &Path, a: &[IterationTrace<f64>], b: &[IterationTrace<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["k", "boxes_retained_a", "boxes_retained_b"])?;
    let cell = |t: &[IterationTrace<f64>], i: usize| t.get(i).map(|r| r.boxes_retained.to_string()).unwrap_or_default();
    for i in 0..a.len().max(b.len()) {
        w.write_record([(i + 1).to_string(), cell(a, i), cell(b, i)])?;
    }
    w.flush()?;
    Ok(())
}
