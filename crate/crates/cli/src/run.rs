use std::fs;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};

use fsifeti::bem::FluidProperties;
use fsifeti::benchmarks::{
    build_cavity, build_duct, build_scatter, duct_pressure_error, end_rotation, transfer_function_sweep, BenchmarkModel,
    CavityParams, CouplingChoice, DuctParams, ScatterParams, Solution, SolverChoice,
};
use fsifeti::coupling::FrameStrategy;
use fsifeti::error::FsiError;
use fsifeti::fem::BeamProperties;
use fsifeti::io;
use fsifeti::linalg::ComplexMatrix;
use fsifeti::mesh::{build_line_mesh, Point2D};
use fsifeti::solver::SolverOptions;

use crate::config::{Benchmark, Frame, RunConfig};

/// Build identifier baked in at compile time (`git describe` of the source tree).
pub const BUILD_ID: &str = env!("FSIFETI_BUILD_ID");

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] crate::config::ConfigError),
    #[error("setup failed: {0}")]
    Setup(#[from] FsiError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot create thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

/// What a successful run produced; `converged` decides the exit status.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub converged: bool,
    pub report: Value,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.converged {
            0
        } else {
            2
        }
    }
}

/// Runs one benchmark and writes its artifacts into `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    cfg.validate().map_err(|message| crate::config::ConfigError { line: None, message })?;
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| run_inner(cfg)),
        None => run_inner(cfg),
    }
}

fn run_inner(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    fs::create_dir_all(&cfg.out)?;
    let start = Instant::now();
    let (converged, mut report) = match cfg.benchmark {
        Benchmark::Sweep => run_sweep(cfg)?,
        _ => run_single(cfg)?,
    };
    let obj = report.as_object_mut().expect("report is an object");
    obj.insert("benchmark".into(), json!(cfg.benchmark.name()));
    obj.insert("build".into(), json!(BUILD_ID));
    obj.insert("config".into(), config_echo(cfg));
    obj.insert("converged".into(), json!(converged));
    obj.insert("wall_time_s".into(), json!(start.elapsed().as_secs_f64()));
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    fs::write(cfg.out.join("report.json"), text)?;
    Ok(RunOutcome { converged, report })
}

fn coupling(cfg: &RunConfig) -> CouplingChoice {
    CouplingChoice {
        method: cfg.coupling,
        frame: match cfg.frame {
            Frame::Coarse => FrameStrategy::Coarse,
            Frame::Fine => FrameStrategy::Fine,
        },
        ..CouplingChoice::default()
    }
}

fn cavity_params(cfg: &RunConfig, freq: f64) -> CavityParams {
    CavityParams {
        coupling: coupling(cfg),
        ..CavityParams::new(cfg.resolved_lh(), cfg.resolved_lh_struct(), freq)
    }
}

fn duct_params(cfg: &RunConfig) -> DuctParams {
    let mut p = DuctParams::new(cfg.ns, cfg.resolved_lh());
    p.k = match cfg.freq {
        Some(f) => 2.0 * std::f64::consts::PI * f / p.fluid.c,
        None => cfg.k,
    };
    p
}

fn scatter_params(cfg: &RunConfig) -> ScatterParams {
    ScatterParams {
        lh_struct: cfg.lh_struct,
        coupling: coupling(cfg),
        ..ScatterParams::new(cfg.resolved_lh(), cfg.resolved_freq(), cfg.alpha)
    }
}

fn solver_options(cfg: &RunConfig, model: &BenchmarkModel) -> Result<SolverOptions, FsiError> {
    Ok(SolverOptions {
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        scaling: model.scaling(cfg.nu)?,
        ..SolverOptions::default()
    })
}

/// Cell-centred points of an `nx` x `ny` grid over the rectangle, so that no
/// point falls on a mesh node or side.
fn cell_centres(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Vec<Point2D> {
    let (hx, hy) = ((x1 - x0) / nx as f64, (y1 - y0) / ny as f64);
    io::grid(x0 + 0.5 * hx, x1 - 0.5 * hx, y0 + 0.5 * hy, y1 - 0.5 * hy, nx, ny)
}

fn run_single(cfg: &RunConfig) -> Result<(bool, Value), RunError> {
    let out = &cfg.out;
    let (model, results_extra, points) = match cfg.benchmark {
        Benchmark::Cavity => {
            let p = cavity_params(cfg, cfg.resolved_freq());
            let pts = cell_centres(0.0, p.length, 0.0, p.height, 40, 16);
            (build_cavity(&p)?, physical_cavity(&p), pts)
        }
        Benchmark::Duct => {
            let p = duct_params(cfg);
            let pts = cell_centres(0.0, p.length, 0.0, 1.0, 96, 4);
            (build_duct(&p)?, physical_duct(&p), pts)
        }
        Benchmark::Scatter => {
            let p = scatter_params(cfg);
            let h = 1.5 * p.side;
            let pts = cell_centres(-h, h, -h, h, 60, 60);
            (build_scatter(&p)?, physical_scatter(&p), pts)
        }
        Benchmark::Sweep => unreachable!("sweeps are handled separately"),
    };
    if cfg.dump_mesh {
        dump_meshes(&model, out)?;
    }
    if cfg.dump_matrices {
        dump_matrices(&model, out)?;
    }
    let opts = solver_options(cfg, &model)?;
    let t_solve = Instant::now();
    let sol = model.solve(cfg.solver, &opts)?;
    let solve_time = t_solve.elapsed().as_secs_f64();
    if !sol.converged {
        log::warn!(
            "{} did not converge in {} iterations (last residual {:e})",
            model.name,
            sol.iterations,
            sol.residual_history.last().copied().unwrap_or(f64::NAN)
        );
    }

    fs::write(out.join("residuals.csv"), io::residuals_csv(&sol.residual_history))?;
    fs::write(out.join("interface.csv"), io::interface_csv(&model.interface_samples(&sol.u, &sol.u_frame)))?;
    let field = model.field(&points, &sol.u)?;
    fs::write(out.join("field.csv"), io::field_csv(&points, &field))?;

    let mut results = json!({});
    match cfg.benchmark {
        Benchmark::Cavity => {
            let r = end_rotation(&model, &sol)?;
            results["end_rotation"] = complex(r);
        }
        Benchmark::Duct => {
            results["pressure_relative_l2_error"] = json!(duct_pressure_error(&model, &sol, &duct_params(cfg))?);
        }
        _ => {}
    }
    if let Some(w) = model.beam_deflection(&sol.u) {
        results["max_abs_beam_deflection"] = json!(w.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }

    let report = json!({
        "physical": results_extra,
        "model": model_summary(&model),
        "solver": solver_summary(cfg.solver, &sol),
        "results": results,
        "solve_time_s": solve_time,
    });
    Ok((sol.converged, report))
}

fn run_sweep(cfg: &RunConfig) -> Result<(bool, Value), RunError> {
    let freqs = cfg.sweep_frequencies();
    let base = cavity_params(cfg, freqs[0]);
    // Fail early on invalid geometry instead of once per frequency.
    build_cavity(&base)?;
    let opts = SolverOptions {
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        ..SolverOptions::default()
    };
    let points = transfer_function_sweep(&base, &freqs, cfg.solver, &opts, cfg.nu);
    let mut csv = String::from("freq,re_rotation,im_rotation,abs_rotation,iterations,status\n");
    let mut failed = 0;
    let mut unconverged = 0;
    for p in &points {
        match &p.rotation {
            Ok(r) => csv.push_str(&format!("{:e},{:e},{:e},{:e},{},ok\n", p.freq, r.re, r.im, r.norm(), p.iterations)),
            Err(e) => {
                failed += 1;
                if matches!(e, FsiError::Breakdown { .. }) {
                    unconverged += 1;
                }
                let msg = e.to_string().replace([',', '\n'], ";");
                csv.push_str(&format!("{:e},,,,{},{msg}\n", p.freq, p.iterations));
            }
        }
    }
    fs::write(cfg.out.join("sweep.csv"), csv)?;
    let report = json!({
        "physical": physical_cavity(&base),
        "sweep": {
            "points": points.len(),
            "failed": failed,
            "unconverged": unconverged,
            "iterations": points.iter().map(|p| p.iterations).collect::<Vec<_>>(),
        },
    });
    Ok((unconverged == 0, report))
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im, "abs": z.norm() })
}

fn beam_json(b: &BeamProperties) -> Value {
    json!({ "E": b.e, "I": b.i, "A": b.a, "m_s": b.m_s })
}

fn fluid_json(f: &FluidProperties) -> Value {
    json!({ "rho": f.rho, "c": f.c })
}

fn physical_cavity(p: &CavityParams) -> Value {
    json!({
        "length": p.length,
        "height": p.height,
        "freq_hz": p.freq,
        "moment": complex(p.moment),
        "beam": beam_json(&p.beam),
        "fluid": fluid_json(&p.fluid),
    })
}

fn physical_duct(p: &DuctParams) -> Value {
    json!({
        "length": p.length,
        "length_over_pi": p.length / std::f64::consts::PI,
        "height": 1.0,
        "k": p.k,
        "p0": complex(p.p0),
        "fluid": fluid_json(&p.fluid),
    })
}

fn physical_scatter(p: &ScatterParams) -> Value {
    json!({
        "side": p.side,
        "freq_hz": p.freq,
        "alpha": p.alpha,
        "p0": complex(p.p0),
        "beam": beam_json(&p.beam),
        "fluid": fluid_json(&p.fluid),
    })
}

fn model_summary(m: &BenchmarkModel) -> Value {
    json!({
        "name": m.name,
        "omega": m.omega,
        "coupling": m.system.method.to_string(),
        "fluid_elements": m.fluids.iter().map(|f| f.bem.mesh.element_count()).collect::<Vec<_>>(),
        "beam_elements": m.beam.as_ref().map(|(_, b)| b.element_count()),
        "subdomain_dofs": m.system.subdomains.iter().map(|s| s.dofs()).collect::<Vec<_>>(),
        "multipliers": m.system.n_multipliers,
        "frame_dofs": m.system.frame_dofs(),
    })
}

fn solver_summary(choice: SolverChoice, s: &Solution) -> Value {
    json!({
        "method": match choice {
            SolverChoice::Bicgstab => "bicgstab",
            SolverChoice::Direct => "direct",
        },
        "iterations": s.iterations,
        "converged": s.converged,
        "restarts": s.restarts,
        "final_residual": s.residual_history.last(),
        "gap_residual": s.gap_residual,
    })
}

fn config_echo(cfg: &RunConfig) -> Value {
    let mut v = json!({
        "benchmark": cfg.benchmark.name(),
        "coupling": cfg.coupling.to_string(),
        "frame": match cfg.frame {
            Frame::Coarse => "coarse",
            Frame::Fine => "fine",
        },
        "solver": match cfg.solver {
            SolverChoice::Bicgstab => "bicgstab",
            SolverChoice::Direct => "direct",
        },
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
        "nu": cfg.nu,
        "out": cfg.out.display().to_string(),
        "dump_mesh": cfg.dump_mesh,
        "dump_matrices": cfg.dump_matrices,
        "threads": cfg.threads,
    });
    match cfg.benchmark {
        Benchmark::Cavity | Benchmark::Scatter => {
            v["freq"] = json!(cfg.resolved_freq());
            v["lh"] = json!(cfg.resolved_lh());
            v["lh_struct"] = json!(cfg.resolved_lh_struct());
            if cfg.benchmark == Benchmark::Scatter {
                v["alpha"] = json!(cfg.alpha);
            }
        }
        Benchmark::Duct => {
            v["lh"] = json!(cfg.resolved_lh());
            v["ns"] = json!(cfg.ns);
            v["freq"] = json!(cfg.freq);
            v["k"] = json!(duct_params(cfg).k);
        }
        Benchmark::Sweep => {
            v["lh"] = json!(cfg.resolved_lh());
            v["lh_struct"] = json!(cfg.resolved_lh_struct());
            v["sweep_min"] = json!(cfg.sweep_min);
            v["sweep_max"] = json!(cfg.sweep_max);
            v["sweep_points"] = json!(cfg.sweep_points);
        }
    }
    v
}

fn dump_meshes(model: &BenchmarkModel, out: &Path) -> Result<(), RunError> {
    for (i, f) in model.fluids.iter().enumerate() {
        fs::write(out.join(format!("mesh_fluid{i}.txt")), f.bem.mesh.dump())?;
    }
    if let Some((_, b)) = &model.beam {
        let line = build_line_mesh(b.start, b.end, b.element_count())?;
        fs::write(out.join("mesh_beam.txt"), line.dump())?;
    }
    Ok(())
}

fn dump_matrices(model: &BenchmarkModel, out: &Path) -> Result<(), RunError> {
    for (i, s) in model.system.subdomains.iter().enumerate() {
        fs::write(out.join(format!("sub{i}_stiffness.mtx")), io::matrix_market(&s.stiffness))?;
        let load = ComplexMatrix::from_fn(s.load.len(), 1, |r, _| s.load[r]);
        fs::write(out.join(format!("sub{i}_load.mtx")), io::matrix_market(&load))?;
        fs::write(
            out.join(format!("sub{i}_coupling.mtx")),
            io::matrix_market(&s.coupling.to_dense().to_complex()),
        )?;
    }
    if let Some(l) = &model.system.frame {
        fs::write(out.join("frame.mtx"), io::matrix_market(&l.to_dense().to_complex()))?;
    }
    Ok(())
}
