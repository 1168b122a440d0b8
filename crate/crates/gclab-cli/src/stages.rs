//! Pipeline stages behind the subcommands. Every run validates its inputs
//! before touching the filesystem, then records each stage in the manifest
//! as it completes; a failing stage leaves the finished artifacts in place
//! and closes the manifest with the failure.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use gclab::fluid::{DiamondRegion, Orientation, State};
use gclab::metric::Metric;
use gclab::reconstruct::{
    base_frame, first_form_error, integrate_frame, integrate_position, mesh_to_obj,
    unscale_second_form,
};
use gclab::solver::{
    energy_diagnostics, march, mollify_initial_data, perturbed_initial_data, EnergyReport,
    RiemannRow, SolverConfig, SweepEntry, Trajectory,
};
use gclab::verify::{
    bump_lattice, compactness_report, constraint_residual, weak_form_residual, weak_star_average,
    StripField,
};

use crate::artifacts::{Table, Workspace};
use crate::config::{
    data_file_samples, DataSection, OrientationKind, PolicyKind, ReconstructSection, RunConfig,
    VerifySection,
};
use crate::{CliError, Prepared};

/// Everything a marching command needs after validation, with the run
/// directory open and the configuration already described in the manifest.
struct Pipeline {
    metric: Metric,
    solver: SolverConfig,
    initial: RiemannRow,
    ws: Workspace,
}

fn open(p: &Prepared, command: &str) -> Result<Pipeline, CliError> {
    let metric = p.config.metric.build()?;
    let solver = p.config.solver.build()?;
    probe_curvature(&metric, &p.config)?;
    let initial = build_initial(&p.config, &solver.region)?;
    let mut ws = Workspace::create(&p.out, command)?;
    ws.write_artifact("config.normalized.toml", &p.config.normalized_toml()?)?;
    describe(&mut ws, &p.config, &metric);
    Ok(Pipeline {
        metric,
        solver,
        initial,
        ws,
    })
}

/// Evaluates the metric across the strip footprint so a curvature-sign or
/// domain problem surfaces as a validation error before any compute.
fn probe_curvature(metric: &Metric, config: &RunConfig) -> Result<(), CliError> {
    let s = &config.solver;
    let (x_lo, x_hi) = match s.orientation {
        OrientationKind::XTimeLike => (s.t_start.min(s.t_end), s.t_start.max(s.t_end)),
        OrientationKind::YTimeLike => (-0.5 * s.period, 0.5 * s.period - s.period / s.n_s as f64),
    };
    for i in 0..9 {
        let x = x_lo + (x_hi - x_lo) * i as f64 / 8.0;
        metric.eval(x, 0.0)?;
    }
    Ok(())
}

fn build_initial(config: &RunConfig, region: &DiamondRegion) -> Result<RiemannRow, CliError> {
    let s = &config.solver;
    let row = match &config.data {
        DataSection::Constant { q, theta } => {
            RiemannRow::constant(State::new(*q, *theta), s.n_s)?
        }
        DataSection::Perturbation { modes, amplitude } => {
            perturbed_initial_data(region, *amplitude, *modes, s.n_s, s.period, config.seed)?
        }
        DataSection::File {
            path,
            mollify_width,
        } => {
            let samples = data_file_samples(Path::new(path), s.n_s)?;
            mollify_initial_data(&samples, s.period, *mollify_width, region)?
        }
    };
    Ok(row)
}

fn describe(ws: &mut Workspace, config: &RunConfig, metric: &Metric) {
    ws.blank();
    ws.kv("seed", config.seed);
    ws.kv("metric.family", metric.family_name());
    for (name, value) in metric.params() {
        ws.kv(&format!("metric.{name}"), value);
    }
    let s = &config.solver;
    let orientation = match s.orientation {
        OrientationKind::XTimeLike => "x-time-like",
        OrientationKind::YTimeLike => "y-time-like",
    };
    ws.kv("solver.orientation", orientation);
    ws.kv("solver.t_start", s.t_start);
    ws.kv("solver.t_end", s.t_end);
    ws.kv("solver.period", s.period);
    ws.kv("solver.n_s", s.n_s);
    ws.kv("solver.n_t", s.n_t);
    ws.kv("solver.eps", s.eps);
    ws.kv("solver.alpha", s.alpha);
    ws.kv("solver.beta", s.beta);
    ws.kv("solver.theta_center", s.theta_center);
    ws.kv("solver.safety", s.safety);
    ws.kv("solver.breach_tol", s.breach_tol);
    let policy = match s.policy {
        PolicyKind::Enforce => "enforce",
        PolicyKind::Monitor => "monitor",
    };
    ws.kv("solver.policy", policy);
    ws.kv("data.kind", config.data.kind());
    match &config.data {
        DataSection::Constant { q, theta } => {
            ws.kv("data.q", q);
            ws.kv("data.theta", theta);
        }
        DataSection::Perturbation { modes, amplitude } => {
            ws.kv("data.modes", modes);
            ws.kv("data.amplitude", amplitude);
        }
        DataSection::File {
            path,
            mollify_width,
        } => {
            ws.kv("data.path", path);
            ws.kv("data.mollify_width", mollify_width);
        }
    }
    ws.blank();
}

fn record_march(ws: &mut Workspace, prefix: &str, traj: &Trajectory) {
    let d = &traj.diagnostics;
    ws.kv(&format!("{prefix}.steps"), d.steps);
    ws.kv(&format!("{prefix}.halved_steps"), d.halved_steps);
    ws.kv(&format!("{prefix}.breach_points"), d.breach_points);
    match &d.first_breach {
        None => ws.kv(&format!("{prefix}.first_breach"), "none"),
        Some(b) => ws.kv(
            &format!("{prefix}.first_breach"),
            format!("t={} cell={} excess={}", b.t, b.cell, b.excess),
        ),
    }
    match d.terminated_early {
        None => ws.kv(&format!("{prefix}.terminated_early"), "none"),
        Some(t) => ws.kv(&format!("{prefix}.terminated_early"), t),
    }
    ws.kv(&format!("{prefix}.min_q"), d.min_q);
    ws.kv(&format!("{prefix}.max_q"), d.max_q);
}

fn record_energy(ws: &mut Workspace, prefix: &str, e: &EnergyReport) {
    ws.kv(&format!("{prefix}.eps"), e.eps);
    ws.kv(&format!("{prefix}.dissipation_q"), e.dissipation_q);
    ws.kv(&format!("{prefix}.dissipation_theta"), e.dissipation_theta);
    ws.kv(&format!("{prefix}.total"), e.total);
    ws.kv(&format!("{prefix}.source_abs_integral"), e.source_abs_integral);
    ws.kv(&format!("{prefix}.flux_start"), e.flux_start);
    ws.kv(&format!("{prefix}.flux_end"), e.flux_end);
    ws.kv(&format!("{prefix}.bound"), e.bound);
}

const SNAPSHOT_HEADER: &str = "t,s,q,theta,Wp,Wm,Lt,Mt,Nt,L,M,N";

/// Row indices of a trajectory ordered by ascending time.
fn ascending_rows(traj: &Trajectory) -> Vec<usize> {
    let n = traj.rows.len();
    if n < 2 || traj.times[n - 1] >= traj.times[0] {
        (0..n).collect()
    } else {
        (0..n).rev().collect()
    }
}

/// Writes one snapshot table per listed row, numbering files from
/// `*next_index`.
fn write_snapshots(
    ws: &mut Workspace,
    metric: &Metric,
    traj: &Trajectory,
    rows: &[usize],
    next_index: &mut usize,
) -> Result<(), CliError> {
    for &row in rows {
        let pairs = traj.second_form_row(metric, row)?;
        let mut table = Table::new(SNAPSHOT_HEADER);
        let t = traj.times[row];
        for (i, (state, form)) in pairs.iter().enumerate() {
            table.row(&[
                t,
                traj.s[i],
                state.q,
                state.theta,
                traj.rows[row].wp[i],
                traj.rows[row].wm[i],
                form.lt,
                form.mt,
                form.nt,
                form.l,
                form.m,
                form.n,
            ]);
        }
        ws.write_artifact(
            &format!("snapshots/snap_{:04}.csv", *next_index),
            &table.into_string(),
        )?;
        *next_index += 1;
    }
    Ok(())
}

fn run_verify(
    ws: &mut Workspace,
    field: &StripField,
    metric: &Metric,
    section: &VerifySection,
) -> Result<(), CliError> {
    let (raw_max, raw_l2) = constraint_residual(field);
    let window = field.period / section.window_fraction;
    let averaged = weak_star_average(field, window, 0.0)?;
    let (windowed_max, _) = constraint_residual(&averaged);
    let family = bump_lattice(
        field.t[0],
        field.t[field.n_rows() - 1],
        field.period,
        section.lattice_n,
        &section.width_scales,
    )?;
    let report = weak_form_residual(field, metric, &family)?;
    let mut table = Table::new("center_t,center_s,width_t,width_s,res1,res2,scale1,scale2");
    for e in &report.entries {
        table.row(&[
            e.center.0, e.center.1, e.widths.0, e.widths.1, e.res1, e.res2, e.scale1, e.scale2,
        ]);
    }
    ws.write_artifact("verify/weak_form.csv", &table.into_string())?;
    ws.kv("verify.constraint_max", raw_max);
    ws.kv("verify.constraint_l2", raw_l2);
    ws.kv("verify.constraint_windowed_max", windowed_max);
    ws.kv("verify.window_s", window);
    ws.kv("verify.bumps", report.entries.len());
    ws.kv("verify.max_res1", report.max_res1);
    ws.kv("verify.max_res2", report.max_res2);
    ws.kv("verify.l2_res1", report.l2_res1);
    ws.kv("verify.l2_res2", report.l2_res2);
    ws.kv("verify.max_relative", report.max_relative());
    Ok(())
}

fn run_reconstruct(
    ws: &mut Workspace,
    field: &StripField,
    metric: &Metric,
    section: &ReconstructSection,
) -> Result<(), CliError> {
    let grid = unscale_second_form(field, metric)?;
    let base = base_frame(metric, grid.xs[0], grid.ys[0])?;
    let mut patch = integrate_frame(metric, &grid, field.orientation, &base)?;
    integrate_position(&mut patch, section.base);
    let obj = mesh_to_obj(&patch)?;
    ws.write_artifact("mesh.obj", &obj)?;
    let quality = first_form_error(&patch, metric)?;
    let defects: HashMap<(usize, usize), f64> = patch
        .defect_samples
        .iter()
        .map(|&(ix, iy, d)| ((ix, iy), d))
        .collect();
    let mut table = Table::new("ix,iy,x,y,first_form_error,defect");
    for ix in 0..patch.xs.len() {
        for iy in 0..patch.ys.len() {
            table.row(&[
                ix as f64,
                iy as f64,
                patch.xs[ix],
                patch.ys[iy],
                quality.per_node[ix][iy],
                defects.get(&(ix, iy)).copied().unwrap_or(f64::NAN),
            ]);
        }
    }
    ws.write_artifact("mesh_quality.csv", &table.into_string())?;
    ws.kv("reconstruct.vertices", patch.xs.len() * patch.ys.len());
    ws.kv("reconstruct.first_form_max", quality.max);
    ws.kv("reconstruct.first_form_l2", quality.l2);
    ws.kv("reconstruct.max_defect", patch.max_defect);
    ws.kv("reconstruct.normal_drift", patch.normal_drift);
    ws.kv("reconstruct.tangency_error", patch.tangency_error());
    Ok(())
}

pub fn run(p: &Prepared) -> Result<(), CliError> {
    let mut pipe = open(p, "run")?;
    let mut stage = "march";
    let result = (|| -> Result<(), CliError> {
        let traj = march(&pipe.metric, &pipe.solver, &pipe.initial)?;
        record_march(&mut pipe.ws, "march", &traj);
        stage = "energy";
        let energy = energy_diagnostics(&traj, &pipe.metric, pipe.solver.eps)?;
        record_energy(&mut pipe.ws, "energy", &energy);
        stage = "snapshots";
        let mut index = 0;
        write_snapshots(
            &mut pipe.ws,
            &pipe.metric,
            &traj,
            &ascending_rows(&traj),
            &mut index,
        )?;
        pipe.ws.kv("snapshots.count", index);
        let field = StripField::from_trajectory(&traj, &pipe.metric)?;
        if p.config.verify.enabled {
            stage = "verify";
            run_verify(&mut pipe.ws, &field, &pipe.metric, &p.config.verify)?;
        }
        if p.config.reconstruct.enabled {
            stage = "reconstruct";
            run_reconstruct(&mut pipe.ws, &field, &pipe.metric, &p.config.reconstruct)?;
        }
        Ok(())
    })();
    match result {
        Ok(()) => pipe.ws.finish(),
        Err(err) => Err(pipe.ws.fail(stage, err)),
    }
}

pub fn whole_plane(p: &Prepared) -> Result<(), CliError> {
    let mut pipe = open(p, "whole-plane")?;
    let mut stage = "march";
    let result = (|| -> Result<(), CliError> {
        let glued = gclab::solver::whole_plane(&pipe.metric, &pipe.solver, &pipe.initial)?;
        record_march(&mut pipe.ws, "march.forward", &glued.forward);
        record_march(&mut pipe.ws, "march.backward", &glued.backward);
        let shared = glued.forward.rows[0] == glued.backward.rows[0];
        pipe.ws.kv("whole-plane.data_line_shared", shared);
        stage = "energy";
        let eps = pipe.solver.eps;
        record_energy(
            &mut pipe.ws,
            "energy.forward",
            &energy_diagnostics(&glued.forward, &pipe.metric, eps)?,
        );
        record_energy(
            &mut pipe.ws,
            "energy.backward",
            &energy_diagnostics(&glued.backward, &pipe.metric, eps)?,
        );
        stage = "snapshots";
        let mut index = 0;
        let backward_rows = ascending_rows(&glued.backward);
        write_snapshots(
            &mut pipe.ws,
            &pipe.metric,
            &glued.backward,
            &backward_rows,
            &mut index,
        )?;
        let forward_rows = &ascending_rows(&glued.forward)[1..];
        write_snapshots(
            &mut pipe.ws,
            &pipe.metric,
            &glued.forward,
            forward_rows,
            &mut index,
        )?;
        pipe.ws.kv("snapshots.count", index);
        stage = "combine";
        let field = combine_fields(
            StripField::from_trajectory(&glued.backward, &pipe.metric)?,
            StripField::from_trajectory(&glued.forward, &pipe.metric)?,
        )?;
        if p.config.verify.enabled {
            stage = "verify";
            run_verify(&mut pipe.ws, &field, &pipe.metric, &p.config.verify)?;
        }
        if p.config.reconstruct.enabled {
            stage = "reconstruct";
            run_reconstruct(&mut pipe.ws, &field, &pipe.metric, &p.config.reconstruct)?;
        }
        Ok(())
    })();
    match result {
        Ok(()) => pipe.ws.finish(),
        Err(err) => Err(pipe.ws.fail(stage, err)),
    }
}

/// Concatenates the backward and forward half-strips along the shared data
/// line, keeping the shared row once.
fn combine_fields(back: StripField, fwd: StripField) -> Result<StripField, CliError> {
    let gap = (back.t[back.n_rows() - 1] - fwd.t[0]).abs();
    if gap > 1e-12 {
        return Err(CliError::Config(format!(
            "half-strips do not meet on a shared data line, gap {gap}"
        )));
    }
    let mut t = back.t;
    let mut lt = back.lt;
    let mut mt = back.mt;
    let mut nt = back.nt;
    t.extend_from_slice(&fwd.t[1..]);
    lt.extend_from_slice(&fwd.lt[1..]);
    mt.extend_from_slice(&fwd.mt[1..]);
    nt.extend_from_slice(&fwd.nt[1..]);
    Ok(StripField {
        orientation: fwd.orientation,
        t,
        s: fwd.s,
        period: fwd.period,
        lt,
        mt,
        nt,
    })
}

pub fn sweep(p: &Prepared) -> Result<(), CliError> {
    let eps_list = p
        .config
        .sweep
        .as_ref()
        .map(|s| s.eps.clone())
        .ok_or_else(|| {
            CliError::Config("sweep needs a [sweep] section with an eps list, or --eps".into())
        })?;
    if eps_list.is_empty() {
        return Err(CliError::Config("the sweep eps list is empty".into()));
    }
    for pair in eps_list.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(CliError::Config(format!(
                "the sweep eps list must decrease strictly, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let mut pipe = open(p, "sweep")?;
    pipe.ws.kv(
        "sweep.eps_list",
        eps_list
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let mut stage = "march";
    let result = (|| -> Result<(), CliError> {
        let metric = &pipe.metric;
        let base = &pipe.solver;
        let initial = &pipe.initial;
        // Members are independent given the shared data line, so they march
        // in parallel; results are collected back in list order.
        let results: Vec<Result<(Trajectory, EnergyReport), gclab::Error>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = eps_list
                    .iter()
                    .map(|&eps| {
                        scope.spawn(move || {
                            let config = SolverConfig {
                                eps,
                                ..base.clone()
                            };
                            let traj = march(metric, &config, initial)?;
                            let energy = energy_diagnostics(&traj, metric, eps)?;
                            Ok((traj, energy))
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("sweep member panicked"))
                    .collect()
            });
        let mut entries: Vec<SweepEntry> = Vec::new();
        let mut failure: Option<(f64, gclab::Error)> = None;
        for (eps, result) in eps_list.iter().copied().zip(results) {
            match result {
                Ok((trajectory, energy)) => entries.push(SweepEntry {
                    eps,
                    trajectory,
                    energy,
                }),
                Err(err) => {
                    failure = Some((eps, err));
                    break;
                }
            }
        }
        let mut energy_table = Table::new(
            "eps,dissipation_q,dissipation_theta,total,source_abs_integral,flux_start,flux_end,bound",
        );
        for entry in &entries {
            let e = &entry.energy;
            energy_table.row(&[
                e.eps,
                e.dissipation_q,
                e.dissipation_theta,
                e.total,
                e.source_abs_integral,
                e.flux_start,
                e.flux_end,
                e.bound,
            ]);
            record_march(
                &mut pipe.ws,
                &format!("march.eps_{}", entry.eps),
                &entry.trajectory,
            );
        }
        pipe.ws.write_artifact("energy.csv", &energy_table.into_string())?;
        if entries.len() >= 2 {
            stage = "compactness";
            let window = base.period / p.config.verify.window_fraction;
            let report = compactness_report(&entries, metric, window)?;
            let mut table = Table::new("eps,sup_L,sup_M,sup_N,energy_total,energy_bound");
            for e in &report.entries {
                table.row(&[
                    e.eps,
                    e.sup_l,
                    e.sup_m,
                    e.sup_n,
                    e.energy_total,
                    e.energy_bound,
                ]);
            }
            pipe.ws
                .write_artifact("verify/compactness.csv", &table.into_string())?;
            pipe.ws.kv("compactness.sup_variation", report.sup_variation);
            pipe.ws.kv("compactness.energy_ratio", report.energy_ratio);
            pipe.ws.kv("compactness.energy_slope", report.energy_slope);
            for (i, d) in report.cauchy_distances.iter().enumerate() {
                pipe.ws.kv(&format!("compactness.cauchy_{i}"), d);
            }
        }
        if let Some(finest) = entries.last() {
            stage = "snapshots";
            pipe.ws.kv("snapshots.eps", finest.eps);
            let mut index = 0;
            write_snapshots(
                &mut pipe.ws,
                metric,
                &finest.trajectory,
                &ascending_rows(&finest.trajectory),
                &mut index,
            )?;
            pipe.ws.kv("snapshots.count", index);
            let field = StripField::from_trajectory(&finest.trajectory, metric)?;
            if p.config.verify.enabled {
                stage = "verify";
                run_verify(&mut pipe.ws, &field, metric, &p.config.verify)?;
            }
            if p.config.reconstruct.enabled {
                stage = "reconstruct";
                run_reconstruct(&mut pipe.ws, &field, metric, &p.config.reconstruct)?;
            }
        }
        match failure {
            None => Ok(()),
            Some((eps, err)) => {
                stage = "march";
                Err(CliError::Config(format!(
                    "sweep member eps = {eps} failed: {err}"
                )))
            }
        }
    })();
    match result {
        Ok(()) => pipe.ws.finish(),
        Err(err) => Err(pipe.ws.fail(stage, err)),
    }
}

/// Reloads the normalized configuration and snapshot tables of a prior run.
fn reload(dir: &Path) -> Result<(RunConfig, Metric, StripField), CliError> {
    let config = RunConfig::load(&dir.join("config.normalized.toml"))?;
    let metric = config.metric.build()?;
    let field = read_snapshots(&dir.join("snapshots"), &config)?;
    Ok((config, metric, field))
}

pub fn verify_from(dir: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let (config, metric, field) = reload(dir)?;
    let out_dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join("verify-rerun"));
    let mut ws = Workspace::create(&out_dir, "verify")?;
    ws.kv("source", dir.display());
    ws.write_artifact("config.normalized.toml", &config.normalized_toml()?)?;
    ws.blank();
    let result = run_verify(&mut ws, &field, &metric, &config.verify);
    match result {
        Ok(()) => ws.finish(),
        Err(err) => Err(ws.fail("verify", err)),
    }
}

pub fn reconstruct_from(dir: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let (config, metric, field) = reload(dir)?;
    let out_dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join("reconstruct-rerun"));
    let mut ws = Workspace::create(&out_dir, "reconstruct")?;
    ws.kv("source", dir.display());
    ws.write_artifact("config.normalized.toml", &config.normalized_toml()?)?;
    ws.blank();
    let result = run_reconstruct(&mut ws, &field, &metric, &config.reconstruct);
    match result {
        Ok(()) => ws.finish(),
        Err(err) => Err(ws.fail("reconstruct", err)),
    }
}

/// Rebuilds a strip field from the snapshot tables of a run directory.
fn read_snapshots(dir: &Path, config: &RunConfig) -> Result<StripField, CliError> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("snap_") && n.ends_with(".csv"))
        })
        .collect();
    names.sort();
    if names.len() < 2 {
        return Err(CliError::Parse {
            path: dir.to_path_buf(),
            message: format!("need at least 2 snapshot tables, found {}", names.len()),
        });
    }
    let mut t = Vec::new();
    let mut s: Vec<f64> = Vec::new();
    let mut lt = Vec::new();
    let mut mt = Vec::new();
    let mut nt = Vec::new();
    for path in &names {
        let text = crate::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header != SNAPSHOT_HEADER {
            return Err(CliError::Parse {
                path: path.clone(),
                message: format!("expected header {SNAPSHOT_HEADER}, got {header:?}"),
            });
        }
        let mut row_t = f64::NAN;
        let mut row_s = Vec::new();
        let (mut row_lt, mut row_mt, mut row_nt) = (Vec::new(), Vec::new(), Vec::new());
        for (idx, line) in lines.enumerate() {
            let fields: Result<Vec<f64>, CliError> = line
                .split(',')
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| CliError::Parse {
                        path: path.clone(),
                        message: format!("row {}: {tok:?} is not a number", idx + 2),
                    })
                })
                .collect();
            let fields = fields?;
            if fields.len() != 12 {
                return Err(CliError::Parse {
                    path: path.clone(),
                    message: format!("row {}: expected 12 columns, got {}", idx + 2, fields.len()),
                });
            }
            row_t = fields[0];
            row_s.push(fields[1]);
            row_lt.push(fields[6]);
            row_mt.push(fields[7]);
            row_nt.push(fields[8]);
        }
        if s.is_empty() {
            s = row_s;
        } else if s.len() != row_s.len() {
            return Err(CliError::Parse {
                path: path.clone(),
                message: "snapshot tables disagree on the cell count".into(),
            });
        }
        t.push(row_t);
        lt.push(row_lt);
        mt.push(row_mt);
        nt.push(row_nt);
    }
    Ok(StripField {
        orientation: Orientation::from(config.solver.orientation),
        t,
        s,
        period: config.solver.period,
        lt,
        mt,
        nt,
    })
}

pub fn metric_catalog() -> String {
    let mut out = String::new();
    out.push_str("catenoid\n");
    out.push_str("  E(x) = cosh(c x)^(2/(beta^2 - 1)), kappa(x) = -kappa0 E(x)^(-beta^2)\n");
    out.push_str("  params: c (nonzero), beta (> 1), kappa0 (= c^2/(beta^2 - 1))\n");
    out.push_str("  satisfies ode-1 identically for the declared beta\n\n");
    out.push_str("helicoid-isothermal\n");
    out.push_str("  E(x) = lambda^2/2 + (lambda^4 e^(2x) + e^(-2x))/4, kappa = -lambda^2/E^2\n");
    out.push_str("  params: lambda (> 0)\n");
    out.push_str("  satisfies ode-1 for beta = sqrt(2)\n\n");
    out.push_str("torus-isothermal\n");
    out.push_str("  inner torus band in isothermal coordinates, kappa < 0 strip only\n");
    out.push_str("  params: a (> b), b (> 0)\n");
    out.push_str("  note: fails ode-1; verification-only\n\n");
    out.push_str("custom\n");
    out.push_str("  tabulated E(x) from a csv file with header x,E; cubic interpolation\n");
    out.push_str("  params: file (path); kappa must stay strictly negative on the table\n");
    out
}
