//! Desk-scale acceptance gate. Every test covers one numbered criterion,
//! prints a single "criterion N PASS/FAIL: ..." line, and panics with the
//! offending numbers when a target is missed. Criteria 2 through 5 share one
//! viscosity sweep, built once per process.

mod common;

use common::{brute_force_rhs, fd_christoffel, manufactured_values, rel_err};
use gclab::fluid::{
    fluid_to_second_form, riemann_invariants, second_form_to_fluid,
    source_combinations_isothermal, source_terms, DiamondRegion, Orientation, State,
};
use gclab::metric::{check_beta_condition, christoffel, Metric};
use gclab::reconstruct::{
    base_frame, first_form_error, integrate_frame, integrate_position, mesh_to_obj,
    unscale_second_form, SurfacePatch,
};
use gclab::solver::{
    epsilon_sweep, march, metric_slice, perturbed_initial_data, viscous_rhs, whole_plane,
    RegionPolicy, RiemannRow, SolverConfig, SweepEntry, SweepOutcome, Trajectory,
};
use gclab::verify::{
    bump_lattice, constraint_residual, weak_form_residual, weak_star_average, StripField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::sync::OnceLock;

const EPS_SWEEP: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
const PERIOD: f64 = 2.0 * PI;
const SEED: u64 = 7;

fn verdict(criterion: u32, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {criterion} {status}: {detail}");
    assert!(ok, "criterion {criterion} {status}: {detail}");
}

fn region() -> DiamondRegion {
    DiamondRegion::new(1.3, SQRT_2).unwrap()
}

fn helicoid_config(t_end: f64, eps: f64) -> SolverConfig {
    SolverConfig {
        orientation: Orientation::XTimeLike,
        t_start: 0.0,
        t_end,
        period: PERIOD,
        n_s: 256,
        n_t: 64,
        eps,
        region: region(),
        safety: 0.4,
        breach_tol: 1e-6,
        policy: RegionPolicy::Monitor,
    }
}

fn perturbed_row(n_s: usize) -> RiemannRow {
    let r = region();
    perturbed_initial_data(&r, 0.25 * r.wp_extent(), 3, n_s, PERIOD, SEED).unwrap()
}

/// The perturbed-helicoid viscosity sweep shared by criteria 2 through 5.
fn shared_sweep() -> &'static SweepOutcome {
    static SWEEP: OnceLock<SweepOutcome> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let metric = Metric::helicoid(1.0).unwrap();
        epsilon_sweep(
            &metric,
            &helicoid_config(2.0, EPS_SWEEP[0]),
            &EPS_SWEEP,
            &perturbed_row(256),
        )
        .unwrap()
    })
}

fn require_full_sweep(criterion: u32, outcome: &SweepOutcome) {
    if let Some((eps, err)) = &outcome.failure {
        verdict(criterion, false, &format!("sweep member eps = {eps} failed: {err}"));
    }
}

/// Largest pointwise constraint residual after a period/16 top-hat average.
fn windowed_constraint(traj: &Trajectory, metric: &Metric) -> f64 {
    let field = StripField::from_trajectory(traj, metric).unwrap();
    let averaged = weak_star_average(&field, field.period / 16.0, 0.0).unwrap();
    constraint_residual(&averaged).0
}

struct ResidualDecay {
    family_max: Vec<f64>,
    finest_relative: f64,
}

/// Family-maximum weak residual per sweep member over the 25-bump lattice,
/// plus the finest member's residual relative to the largest single-term
/// integral.
fn residual_decay(entries: &[SweepEntry], metric: &Metric) -> ResidualDecay {
    let mut family_max = Vec::new();
    let mut finest_relative = f64::NAN;
    for entry in entries {
        let field = StripField::from_trajectory(&entry.trajectory, metric).unwrap();
        let family = bump_lattice(
            field.t[0],
            field.t[field.n_rows() - 1],
            field.period,
            5,
            &[1.0],
        )
        .unwrap();
        let report = weak_form_residual(&field, metric, &family).unwrap();
        family_max.push(report.max_res1.max(report.max_res2));
        finest_relative = report.max_relative();
    }
    ResidualDecay {
        family_max,
        finest_relative,
    }
}

fn decay_ok(d: &ResidualDecay) -> bool {
    d.family_max.windows(2).all(|p| p[1] <= 1.1 * p[0]) && d.finest_relative < 1e-3
}

#[test]
fn criterion_01_exact_solution_preservation() {
    let metric = Metric::catenoid(1.0, SQRT_2, 1.0).unwrap();
    let initial = RiemannRow::constant(State::new(SQRT_2, 0.0), 64).unwrap();
    let mut worst = 0.0f64;
    for eps in [0.1, 0.0125] {
        let config = SolverConfig {
            t_start: -2.0,
            t_end: 2.0,
            n_s: 64,
            n_t: 32,
            eps,
            policy: RegionPolicy::Enforce,
            ..helicoid_config(2.0, eps)
        };
        let traj = march(&metric, &config, &initial).unwrap();
        for row in &traj.rows {
            for st in row.states().unwrap() {
                worst = worst
                    .max((st.q - SQRT_2).abs())
                    .max(st.theta.abs());
            }
        }
    }
    verdict(
        1,
        worst < 1e-8,
        &format!("max (q, theta) drift {worst:.3e} over length-4 marches at eps 0.1 and 0.0125"),
    );
}

#[test]
fn criterion_02_invariant_region() {
    let outcome = shared_sweep();
    require_full_sweep(2, outcome);
    let member = outcome
        .entries
        .iter()
        .find(|e| e.eps == 0.05)
        .expect("sweep carries eps = 0.05");
    let d = &member.trajectory.diagnostics;
    let detail = match &d.first_breach {
        None => format!(
            "no breach over length 2 (eps 0.05, 256 cells, q range [{:.4}, {:.4}])",
            d.min_q, d.max_q
        ),
        Some(b) => format!(
            "{} breach points, first at t = {:.4}, cell {}, (W+, W-) = ({:.6}, {:.6}), excess {:.2e}",
            d.breach_points, b.t, b.cell, b.wp, b.wm, b.excess
        ),
    };
    verdict(2, d.breach_points == 0, &detail);
}

#[test]
fn criterion_03_energy_uniformity() {
    let outcome = shared_sweep();
    require_full_sweep(3, outcome);
    let energies: Vec<(f64, f64, f64)> = outcome
        .entries
        .iter()
        .map(|e| (e.eps, e.energy.total, e.energy.bound))
        .collect();
    let totals: Vec<f64> = energies.iter().map(|e| e.1).collect();
    let min = totals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = totals.iter().cloned().fold(0.0f64, f64::max);
    let ratio = max / min;
    let within_bound = energies.iter().all(|(_, total, bound)| total <= bound);
    let detail = format!(
        "energies {:?}, ratio {ratio:.3}, bound respected: {within_bound}",
        energies
            .iter()
            .map(|(eps, total, _)| format!("eps {eps}: {total:.3e}"))
            .collect::<Vec<_>>()
    );
    verdict(3, ratio < 3.0 && within_bound, &detail);
}

#[test]
fn criterion_04_constraint_weak_continuity() {
    let outcome = shared_sweep();
    require_full_sweep(4, outcome);
    let metric = Metric::helicoid(1.0).unwrap();
    let finest = outcome.entries.last().unwrap();
    let max = windowed_constraint(&finest.trajectory, &metric);
    verdict(
        4,
        max < 5e-3,
        &format!("window-averaged constraint residual {max:.3e} at eps {}", finest.eps),
    );
}

#[test]
fn criterion_05_weak_form_residual_decay() {
    let outcome = shared_sweep();
    require_full_sweep(5, outcome);
    let metric = Metric::helicoid(1.0).unwrap();
    let decay = residual_decay(&outcome.entries, &metric);
    let detail = format!(
        "family maxima {:?}, finest relative residual {:.3e}",
        decay
            .family_max
            .iter()
            .map(|v| format!("{v:.3e}"))
            .collect::<Vec<_>>(),
        decay.finest_relative
    );
    verdict(5, decay_ok(&decay), &detail);
}

#[test]
fn criterion_06_oracle_equivalence() {
    // Oracle 1: quotient-formula Christoffel symbols against the
    // finite-difference first-kind route on the manufactured metric.
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let mut worst_christoffel = 0.0f64;
    for _ in 0..100 {
        let x = rng.gen_range(-1.2..1.2);
        let y = rng.gen_range(-1.2..1.2);
        let ch = christoffel(&manufactured_values(x, y)).unwrap();
        let got = [ch.g1_11, ch.g1_12, ch.g1_22, ch.g2_11, ch.g2_12, ch.g2_22];
        let oracle = fd_christoffel(x, y);
        for k in 0..6 {
            worst_christoffel = worst_christoffel.max(rel_err(got[k], oracle[k]));
        }
    }

    // Oracle 2: Brioschi-route curvature against the closed family forms.
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut worst_brioschi = 0.0f64;
    let helicoid = Metric::helicoid(1.0).unwrap();
    let catenoid = Metric::catenoid(1.0, SQRT_2, 1.0).unwrap();
    let torus = Metric::torus(2.0, 1.0).unwrap();
    let band = (
        torus.torus_phi(0.56 * PI).unwrap(),
        torus.torus_phi(1.44 * PI).unwrap(),
    );
    for i in 0..100 {
        let (got, want) = match i % 3 {
            0 => {
                let x: f64 = rng.gen_range(-1.5..1.5);
                let e = 0.5 + 0.25 * ((2.0 * x).exp() + (-2.0 * x).exp());
                (helicoid.gauss_curvature_brioschi(x, 0.4).unwrap(), -1.0 / (e * e))
            }
            1 => {
                let x: f64 = rng.gen_range(-1.5..1.5);
                (
                    catenoid.gauss_curvature_brioschi(x, -0.1).unwrap(),
                    -x.cosh().powi(-4),
                )
            }
            _ => {
                let x = rng.gen_range(band.0..band.1);
                let yy = torus.torus_phi_inverse(x).unwrap();
                (
                    torus.gauss_curvature_brioschi(x, 0.0).unwrap(),
                    yy.cos() / (1.0 * (2.0 + 1.0 * yy.cos())),
                )
            }
        };
        worst_brioschi = worst_brioschi.max(rel_err(got, want));
    }

    // Oracle 3: source combinations composed from the Christoffel route
    // against the closed one-variable form.
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut worst_source = 0.0f64;
    let metrics = [&helicoid, &catenoid, &torus];
    for i in 0..100 {
        let m = metrics[i % 3];
        let x = if std::ptr::eq(m, &torus) {
            rng.gen_range(band.0 + 0.05..band.1 - 0.05)
        } else {
            rng.gen_range(-1.4..1.4)
        };
        let q = rng.gen_range(1.05..1.41);
        let theta = rng.gen_range(-0.6..0.6);
        let v = m.eval(x, 0.2).unwrap();
        let ch = christoffel(&v).unwrap();
        let srcs = source_terms(State::new(q, theta), &ch).unwrap();
        let (plus, minus) =
            source_combinations_isothermal(q, theta, 0.5 * v.e_x / v.e, v.gamma_x / v.gamma)
                .unwrap();
        let scale = plus.abs().max(minus.abs()).max(1e-3);
        worst_source = worst_source
            .max((srcs.comb_plus - plus).abs() / scale)
            .max((srcs.comb_minus - minus).abs() / scale);
    }

    // Oracle 4: discrete marching right-hand side against the from-scratch
    // assembly, one random single-mode field per sample.
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let mut worst_rhs = 0.0f64;
    let periodic = helicoid.periodicize(PERIOD, SQRT_2).unwrap();
    let n = 64;
    let ds = PERIOD / n as f64;
    let s_grid: Vec<f64> = (0..n).map(|i| -PI + i as f64 * ds).collect();
    for i in 0..100 {
        let (metric, orientation, theta_c) = if i % 2 == 0 {
            (&helicoid, Orientation::XTimeLike, 0.0)
        } else {
            (&periodic, Orientation::YTimeLike, FRAC_PI_2)
        };
        let t = rng.gen_range(-0.4..0.4);
        let eps = rng.gen_range(0.02..0.15);
        let sigma = if rng.gen_range(0.0..1.0) < 0.5 { 1.0 } else { -1.0 };
        let mode = rng.gen_range(1..4) as f64;
        let amp_p = rng.gen_range(0.003..0.012);
        let amp_m = rng.gen_range(0.003..0.012);
        let (phase_p, phase_m) = (rng.gen_range(0.0..PERIOD), rng.gen_range(0.0..PERIOD));
        let reg = DiamondRegion::centered(1.3, SQRT_2, theta_c, orientation).unwrap();
        let (cp, cm) = reg.center_w();
        let wp: Vec<f64> = s_grid
            .iter()
            .map(|&s| cp + amp_p * (mode * s + phase_p).sin())
            .collect();
        let wm: Vec<f64> = s_grid
            .iter()
            .map(|&s| cm + amp_m * (mode * s + phase_m).cos())
            .collect();
        let slice = metric_slice(metric, orientation, t, &s_grid).unwrap();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for j in 0..n {
            let x = match orientation {
                Orientation::XTimeLike => t,
                Orientation::YTimeLike => s_grid[j],
            };
            let v = metric.eval(x, 0.0).unwrap();
            a[j] = 0.5 * v.e_x / v.e;
            b[j] = v.gamma_x / v.gamma;
        }
        let (got_p, got_m) = viscous_rhs(&wp, &wm, &slice, eps, ds, orientation, sigma).unwrap();
        let (want_p, want_m) = brute_force_rhs(&wp, &wm, &a, &b, eps, ds, orientation, sigma);
        let scale = want_p
            .iter()
            .chain(&want_m)
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        for j in 0..n {
            worst_rhs = worst_rhs
                .max((got_p[j] - want_p[j]).abs() / scale)
                .max((got_m[j] - want_m[j]).abs() / scale);
        }
    }

    let ok = worst_christoffel < 1e-6
        && worst_brioschi < 1e-6
        && worst_source < 1e-10
        && worst_rhs < 1e-8;
    verdict(
        6,
        ok,
        &format!(
            "worst over 100 samples each: christoffel {worst_christoffel:.2e} (tol 1e-6), \
             brioschi {worst_brioschi:.2e} (tol 1e-6), sources {worst_source:.2e} (tol 1e-10), \
             marching rhs {worst_rhs:.2e} (tol 1e-8)"
        ),
    );
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn criterion_07_metric_family_checks() {
    let xs = linspace(-1.5, 1.5, 61);

    let helicoid = Metric::helicoid(1.0).unwrap();
    let h = check_beta_condition(&helicoid, SQRT_2, &xs, 1e-8).unwrap();

    let torus = Metric::torus(2.0, 1.0).unwrap();
    let band = linspace(
        torus.torus_phi(0.56 * PI).unwrap(),
        torus.torus_phi(1.44 * PI).unwrap(),
        41,
    );
    let t = check_beta_condition(&torus, SQRT_2, &band, 1e-8).unwrap();
    let variation = t.ratio_relative_variation();

    let mut worst_catenoid = 0.0f64;
    for beta in [SQRT_2, 1.3] {
        let kappa0 = 1.0 / (beta * beta - 1.0);
        let c = check_beta_condition(
            &Metric::catenoid(1.0, beta, kappa0).unwrap(),
            beta,
            &xs,
            1e-12,
        )
        .unwrap();
        worst_catenoid = worst_catenoid.max(c.max_residual_ode1);
    }

    let ok = h.max_residual_ode1 < 1e-8 && variation > 0.10 && worst_catenoid < 1e-12;
    verdict(
        7,
        ok,
        &format!(
            "helicoid residual {:.2e} (tol 1e-8), torus ratio variation {:.3} (needs > 0.10), \
             catenoid residual {worst_catenoid:.2e} (tol 1e-12)",
            h.max_residual_ode1, variation
        ),
    );
}

fn constant_state_patch(n_t: usize, n_s: usize) -> SurfacePatch {
    let metric = Metric::helicoid(1.0).unwrap();
    let config = SolverConfig {
        t_start: -0.8,
        t_end: 0.8,
        n_s,
        n_t,
        policy: RegionPolicy::Enforce,
        ..helicoid_config(0.8, 0.05)
    };
    let initial = RiemannRow::constant(State::new(SQRT_2, 0.0), n_s).unwrap();
    let traj = march(&metric, &config, &initial).unwrap();
    let field = StripField::from_trajectory(&traj, &metric).unwrap();
    let grid = unscale_second_form(&field, &metric).unwrap();
    let base = base_frame(&metric, grid.xs[0], grid.ys[0]).unwrap();
    let mut patch = integrate_frame(&metric, &grid, Orientation::XTimeLike, &base).unwrap();
    integrate_position(&mut patch, [0.0, 0.0, 0.0]);
    patch
}

#[test]
fn criterion_08_reconstruction() {
    let metric = Metric::helicoid(1.0).unwrap();
    let mut defects = Vec::new();
    let mut first_form_max = f64::NAN;
    for (n_t, n_s) in [(64, 256), (128, 512), (256, 1024)] {
        let patch = constant_state_patch(n_t, n_s);
        defects.push(patch.max_defect);
        if n_s == 1024 {
            first_form_max = first_form_error(&patch, &metric).unwrap().max;
        }
    }
    let defect_ok = defects.windows(2).all(|p| p[1] <= 0.6 * p[0]);

    let obj_a = mesh_to_obj(&constant_state_patch(64, 256)).unwrap();
    let obj_b = mesh_to_obj(&constant_state_patch(64, 256)).unwrap();
    let deterministic = obj_a == obj_b && !obj_a.is_empty();

    let ok = first_form_max < 1e-3 && defect_ok && deterministic;
    verdict(
        8,
        ok,
        &format!(
            "first form {first_form_max:.3e} at 256x1024 (tol 1e-3), defects {:?}, \
             mesh determinism {deterministic}",
            defects.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_09_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut worst_invariants = 0.0f64;
    let mut worst_forms = 0.0f64;
    for _ in 0..1000 {
        let q = rng.gen_range(1.02..3.2);
        let theta = rng.gen_range(-1.4..1.4);

        let (wp, wm) = riemann_invariants(q, theta).unwrap();
        let st = gclab::fluid::invariants_to_state(wp, wm).unwrap();
        worst_invariants = worst_invariants
            .max((st.q - q).abs())
            .max((st.theta - theta).abs());

        let form = fluid_to_second_form(State::new(q, theta), 1.0, 1.0).unwrap();
        let back = second_form_to_fluid(form.lt, form.mt, form.nt, theta).unwrap();
        worst_forms = worst_forms
            .max((back.q - q).abs())
            .max((back.theta - theta).abs());
    }
    let ok = worst_invariants < 1e-12 && worst_forms < 1e-8;
    verdict(
        9,
        ok,
        &format!(
            "1000 states: invariant round trip {worst_invariants:.2e} (tol 1e-12), \
             second-form round trip {worst_forms:.2e} (tol 1e-8)"
        ),
    );
}

#[test]
fn criterion_10_whole_plane_gluing() {
    let metric = Metric::helicoid(1.0).unwrap();
    let initial = perturbed_row(256);

    let glued = whole_plane(&metric, &helicoid_config(2.0, EPS_SWEEP[3]), &initial).unwrap();
    let shared_line = glued.forward.rows[0].wp == glued.backward.rows[0].wp
        && glued.forward.rows[0].wm == glued.backward.rows[0].wm;

    let forward = shared_sweep();
    require_full_sweep(10, forward);
    let backward = epsilon_sweep(
        &metric,
        &helicoid_config(-2.0, EPS_SWEEP[0]),
        &EPS_SWEEP,
        &initial,
    )
    .unwrap();
    require_full_sweep(10, &backward);

    let mut half_details = Vec::new();
    let mut halves_ok = true;
    for (name, outcome) in [("forward", forward), ("backward", &backward)] {
        let finest = outcome.entries.last().unwrap();
        let constraint = windowed_constraint(&finest.trajectory, &metric);
        let decay = residual_decay(&outcome.entries, &metric);
        let ok = constraint < 5e-3 && decay_ok(&decay);
        halves_ok &= ok;
        half_details.push(format!(
            "{name}: constraint {constraint:.3e}, residual maxima {:?}, finest relative {:.3e}",
            decay.family_max.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>(),
            decay.finest_relative
        ));
    }

    let ok = shared_line && halves_ok;
    verdict(
        10,
        ok,
        &format!(
            "data line bitwise-shared: {shared_line}; {}",
            half_details.join("; ")
        ),
    );
}
