//! Weak-form machinery against manufactured fields with known imbalance,
//! window-averaging against discrete closed forms, constraint stability on
//! marched strips, and the cross-viscosity compactness tabulation.

use gclab::fluid::{fluid_to_second_form, DiamondRegion, Orientation, State};
use gclab::metric::Metric;
use gclab::solver::{
    epsilon_sweep, march, perturbed_initial_data, RegionPolicy, SolverConfig,
};
use gclab::verify::{
    bump_lattice, compactness_report, constraint_residual, weak_form_residual,
    weak_star_average, StripField, TestFunction,
};
use std::f64::consts::{PI, SQRT_2};

/// Manufactured scaled second-form components, 2π-periodic in y. They do not
/// solve the field equations; their imbalance is known in closed form.
fn man_lt(x: f64, y: f64) -> f64 {
    -1.0 + 0.25 * x.sin() * y.cos()
}

fn man_mt(x: f64, y: f64) -> f64 {
    0.2 * x.cos() * y.sin()
}

fn man_nt(x: f64, y: f64) -> f64 {
    1.0 + 0.15 * (x + y).sin()
}

/// Imbalance of the first equation: ∂ₓM̃ − ∂ᵧL̃ − RHS₁. On the unit helicoid
/// every coefficient of RHS₁ vanishes.
fn imbalance_1(x: f64, y: f64) -> f64 {
    let dm_dx = -0.2 * x.sin() * y.sin();
    let dl_dy = -0.25 * x.sin() * y.sin();
    dm_dx - dl_dy
}

/// Imbalance of the second equation: ∂ₓÑ − ∂ᵧM̃ − RHS₂, with
/// RHS₂ = tanh(x)·(L̃ + Ñ) on the unit helicoid.
fn imbalance_2(x: f64, y: f64) -> f64 {
    let dn_dx = 0.15 * (x + y).cos();
    let dm_dy = 0.2 * x.cos() * y.cos();
    dn_dx - dm_dy - x.tanh() * (man_lt(x, y) + man_nt(x, y))
}

fn manufactured_strip(n_rows: usize, n_cells: usize) -> StripField {
    let t0 = 0.2;
    let t1 = 1.4;
    let t: Vec<f64> = (0..n_rows)
        .map(|i| t0 + (t1 - t0) * i as f64 / (n_rows - 1) as f64)
        .collect();
    let ds = 2.0 * PI / n_cells as f64;
    let s: Vec<f64> = (0..n_cells).map(|j| -PI + j as f64 * ds).collect();
    let grid = |f: fn(f64, f64) -> f64| -> Vec<Vec<f64>> {
        t.iter()
            .map(|&x| s.iter().map(|&y| f(x, y)).collect())
            .collect()
    };
    let (lt, mt, nt) = (grid(man_lt), grid(man_mt), grid(man_nt));
    StripField {
        orientation: Orientation::XTimeLike,
        t,
        s,
        period: 2.0 * PI,
        lt,
        mt,
        nt,
    }
}

/// Trapezoid quadrature of imbalance·φ over the exact bump support, where
/// the integrand and its first two derivatives vanish on the box edge.
fn reference_residual(phi: &TestFunction, imbalance: fn(f64, f64) -> f64) -> f64 {
    let n = 1601;
    let (x0, x1) = (phi.center_t - phi.width_t, phi.center_t + phi.width_t);
    let (y0, y1) = (phi.center_s - phi.width_s, phi.center_s + phi.width_s);
    let hx = (x1 - x0) / (n - 1) as f64;
    let hy = (y1 - y0) / (n - 1) as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let wx = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let x = x0 + i as f64 * hx;
        for j in 0..n {
            let wy = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            let y = y0 + j as f64 * hy;
            sum += wx * wy * imbalance(x, y) * phi.eval(x, y);
        }
    }
    (sum * hx * hy).abs()
}

#[test]
fn weak_residual_matches_direct_quadrature_of_the_imbalance() {
    // Integration by parts turns the flux-form residual into the integral of
    // the pointwise imbalance against the bump; a fine direct quadrature of
    // that integral is the reference, and the strip-grid residual has to
    // approach it at better than first order under refinement.
    let metric = Metric::helicoid(1.0).unwrap();
    let phi = TestFunction {
        center_t: 0.8,
        center_s: 0.3,
        width_t: 0.5,
        width_s: 1.0,
        period: 2.0 * PI,
    };
    let ref1 = reference_residual(&phi, imbalance_1);
    let ref2 = reference_residual(&phi, imbalance_2);
    assert!(ref1 > 1e-4, "degenerate manufactured residual {ref1}");
    assert!(ref2 > 1e-4, "degenerate manufactured residual {ref2}");

    let mut errs = Vec::new();
    for (n_rows, n_cells) in [(49, 256), (97, 512)] {
        let field = manufactured_strip(n_rows, n_cells);
        let report = weak_form_residual(&field, &metric, &[phi]).unwrap();
        let entry = report.entries[0];
        errs.push(((entry.res1 - ref1).abs(), (entry.res2 - ref2).abs()));
    }
    let (c1, c2) = errs[0];
    let (f1, f2) = errs[1];
    assert!(c1 < 1e-3 * ref1.max(ref2), "coarse grid already off: {c1}");
    assert!(f1 < c1 / 3.0, "equation 1 error stalled: {c1} -> {f1}");
    assert!(f2 < c2 / 3.0, "equation 2 error stalled: {c2} -> {f2}");
}

#[test]
fn lattice_family_reports_its_largest_member_and_scales() {
    let metric = Metric::helicoid(1.0).unwrap();
    let field = manufactured_strip(49, 256);
    let family = bump_lattice(0.2, 1.4, 2.0 * PI, 5, &[1.0]).unwrap();
    assert_eq!(family.len(), 25);
    let report = weak_form_residual(&field, &metric, &family).unwrap();
    assert_eq!(report.entries.len(), 25);
    let max1 = report
        .entries
        .iter()
        .fold(0.0f64, |a, e| a.max(e.res1));
    assert_eq!(report.max_res1, max1);
    assert!(report.l2_res1 <= report.max_res1);
    assert!(report.l2_res2 <= report.max_res2);
    // The manufactured field is genuinely out of balance, so the family
    // maximum must be visible relative to the term sizes.
    assert!(report.max_relative() > 1e-3);
    for e in &report.entries {
        assert!(e.scale1 > 0.0 && e.scale2 > 0.0);
    }
}

#[test]
fn window_average_matches_the_discrete_sine_closed_form() {
    let n_cells = 64;
    let ds = 2.0 * PI / n_cells as f64;
    let s: Vec<f64> = (0..n_cells).map(|j| j as f64 * ds).collect();
    let mt: Vec<Vec<f64>> = (0..5)
        .map(|_| s.iter().map(|&v| v.sin()).collect())
        .collect();
    let field = StripField {
        orientation: Orientation::XTimeLike,
        t: (0..5).map(|i| 0.1 * i as f64).collect(),
        s: s.clone(),
        period: 2.0 * PI,
        lt: vec![vec![-1.0; n_cells]; 5],
        mt,
        nt: vec![vec![1.0; n_cells]; 5],
    };
    // Five-cell top hat: the average of sin at j-2..j+2 contracts the
    // amplitude by (1 + 2cos δ + 2cos 2δ)/5 with δ the cell size.
    let out = weak_star_average(&field, 5.0 * ds, 0.0).unwrap();
    let factor = (1.0 + 2.0 * ds.cos() + 2.0 * (2.0 * ds).cos()) / 5.0;
    for (j, &sj) in s.iter().enumerate() {
        let want = factor * sj.sin();
        assert!(
            (out.mt[2][j] - want).abs() < 1e-12,
            "cell {j}: {} vs {want}",
            out.mt[2][j]
        );
        assert_eq!(out.lt[2][j], -1.0);
    }
}

#[test]
fn time_window_clamps_at_the_strip_ends() {
    let n_cells = 8;
    let n_rows = 6;
    let field = StripField {
        orientation: Orientation::XTimeLike,
        t: (0..n_rows).map(|i| 0.25 * i as f64).collect(),
        s: (0..n_cells).map(|j| 0.5 * j as f64).collect(),
        period: 4.0,
        lt: (0..n_rows)
            .map(|i| vec![i as f64; n_cells])
            .collect(),
        mt: vec![vec![0.0; n_cells]; n_rows],
        nt: vec![vec![1.0; n_cells]; n_rows],
    };
    let out = weak_star_average(&field, 0.0, 0.5).unwrap();
    // Interior rows average the symmetric triple and stay put; the end rows
    // only see two rows.
    for row in 1..n_rows - 1 {
        assert!((out.lt[row][0] - row as f64).abs() < 1e-14);
    }
    assert!((out.lt[0][0] - 0.5).abs() < 1e-14);
    assert!((out.lt[n_rows - 1][0] - (n_rows as f64 - 1.5)).abs() < 1e-14);
    assert!(weak_star_average(&field, 0.0, 10.0).is_err());
    assert!(weak_star_average(&field, 100.0, 0.0).is_err());
}

#[test]
fn constraint_residual_survives_angle_reflection() {
    // theta -> pi - theta flips the sign of M-tilde and fixes L-tilde and
    // N-tilde, so both constraint norms are unchanged.
    let n_cells = 32;
    let ds = 2.0 * PI / n_cells as f64;
    let build = |sign: f64| -> StripField {
        let mut lt = Vec::new();
        let mut mt = Vec::new();
        let mut nt = Vec::new();
        for i in 0..7 {
            let x = 0.1 * i as f64;
            let mut row_l = Vec::new();
            let mut row_m = Vec::new();
            let mut row_n = Vec::new();
            for j in 0..n_cells {
                let s = j as f64 * ds;
                let q = 1.25 + 0.06 * (s + x).sin();
                let theta = 0.3 * (2.0 * s).cos() + 0.1 * x;
                let st = State::new(q, sign * theta);
                let form = fluid_to_second_form(st, 1.0, 1.0).unwrap();
                row_l.push(form.lt);
                row_m.push(form.mt);
                row_n.push(form.nt);
            }
            lt.push(row_l);
            mt.push(row_m);
            nt.push(row_n);
        }
        StripField {
            orientation: Orientation::XTimeLike,
            t: (0..7).map(|i| 0.1 * i as f64).collect(),
            s: (0..n_cells).map(|j| j as f64 * ds).collect(),
            period: 2.0 * PI,
            lt,
            mt,
            nt,
        }
    };
    let a = build(1.0);
    let b = build(-1.0);
    for row in 0..7 {
        for j in 0..n_cells {
            assert!((a.lt[row][j] - b.lt[row][j]).abs() < 1e-15);
            assert!((a.mt[row][j] + b.mt[row][j]).abs() < 1e-15);
        }
    }
    let (max_a, l2_a) = constraint_residual(&a);
    let (max_b, l2_b) = constraint_residual(&b);
    assert!((max_a - max_b).abs() < 1e-14);
    assert!((l2_a - l2_b).abs() < 1e-14);
    // States map to forms satisfying the quadratic relation exactly.
    assert!(max_a < 1e-12, "constraint {max_a}");
}

fn perturbed_march(eps: f64, n_s: usize, t_end: f64) -> gclab::solver::Trajectory {
    let metric = Metric::helicoid(1.0).unwrap();
    let region = DiamondRegion::new(1.3, SQRT_2).unwrap();
    let config = SolverConfig {
        orientation: Orientation::XTimeLike,
        t_start: 0.0,
        t_end,
        period: 2.0 * PI,
        n_s,
        n_t: 48,
        eps,
        region: region.clone(),
        safety: 0.4,
        breach_tol: 1e-6,
        policy: RegionPolicy::Monitor,
    };
    let initial =
        perturbed_initial_data(&region, 0.25 * region.wp_extent(), 3, n_s, 2.0 * PI, 11).unwrap();
    march(&metric, &config, &initial).unwrap()
}

#[test]
fn marched_strip_keeps_the_constraint_and_shrinks_the_weak_residual() {
    let metric = Metric::helicoid(1.0).unwrap();
    let mut relatives = Vec::new();
    for eps in [0.1, 0.05] {
        let traj = perturbed_march(eps, 256, 0.5);
        let field = StripField::from_trajectory(&traj, &metric).unwrap();

        // Raw states satisfy the quadratic relation to rounding; a top-hat
        // average one sixteenth of the period wide must keep it small.
        let (raw_max, _) = constraint_residual(&field);
        assert!(raw_max < 1e-12, "raw constraint {raw_max}");
        let averaged = weak_star_average(&field, field.period / 16.0, 0.0).unwrap();
        let (avg_max, _) = constraint_residual(&averaged);
        assert!(avg_max < 5e-3, "averaged constraint {avg_max}");

        let family =
            bump_lattice(field.t[0], field.t[field.n_rows() - 1], field.period, 5, &[1.0])
                .unwrap();
        let report = weak_form_residual(&field, &metric, &family).unwrap();
        relatives.push(report.max_relative());
    }
    // The viscous term dominates the imbalance, so the family-level relative
    // residual has to come down with the viscosity.
    assert!(relatives[1] < relatives[0], "no decrease: {relatives:?}");
    assert!(relatives[1] < 0.1, "weak residual {}", relatives[1]);
}

#[test]
fn backward_trajectories_are_reversed_into_increasing_time() {
    let metric = Metric::catenoid(1.0, SQRT_2, 1.0).unwrap();
    let region = DiamondRegion::new(1.3, SQRT_2).unwrap();
    let config = SolverConfig {
        orientation: Orientation::XTimeLike,
        t_start: 0.0,
        t_end: -0.4,
        period: 2.0 * PI,
        n_s: 64,
        n_t: 8,
        eps: 0.05,
        region,
        safety: 0.4,
        breach_tol: 1e-6,
        policy: RegionPolicy::Enforce,
    };
    let initial = gclab::solver::RiemannRow::constant(State::new(SQRT_2, 0.0), 64).unwrap();
    let traj = march(&metric, &config, &initial).unwrap();
    assert!(traj.times[traj.times.len() - 1] < traj.times[0]);

    let field = StripField::from_trajectory(&traj, &metric).unwrap();
    for pair in field.t.windows(2) {
        assert!(pair[1] > pair[0], "strip times not ascending: {pair:?}");
    }
    let (sup_l, sup_m, sup_n) = field.sup_norms();
    assert!((sup_l - 1.0).abs() < 1e-8);
    assert!(sup_m < 1e-8);
    assert!((sup_n - 1.0).abs() < 1e-8);
}

#[test]
fn compactness_report_tabulates_the_sweep() {
    let metric = Metric::helicoid(1.0).unwrap();
    let region = DiamondRegion::new(1.3, SQRT_2).unwrap();
    let config = SolverConfig {
        orientation: Orientation::XTimeLike,
        t_start: 0.0,
        t_end: 0.4,
        period: 2.0 * PI,
        n_s: 128,
        n_t: 32,
        eps: 0.1,
        region: region.clone(),
        safety: 0.4,
        breach_tol: 1e-6,
        policy: RegionPolicy::Monitor,
    };
    let initial =
        perturbed_initial_data(&region, 0.25 * region.wp_extent(), 3, 128, 2.0 * PI, 11).unwrap();
    let outcome = epsilon_sweep(&metric, &config, &[0.1, 0.05], &initial).unwrap();
    assert!(outcome.failure.is_none());

    let report = compactness_report(&outcome.entries, &metric, 2.0 * PI / 16.0).unwrap();
    assert_eq!(report.entries.len(), 2);
    assert_eq!(report.entries[0].eps, 0.1);
    assert_eq!(report.entries[1].eps, 0.05);
    assert_eq!(report.cauchy_distances.len(), 1);
    for e in &report.entries {
        // The quadratic relation forces the pointwise sup above 1/sqrt(2).
        let sup = e.sup_l.max(e.sup_m).max(e.sup_n);
        assert!(sup > 0.7 && sup < 3.0, "sup {sup}");
        assert!(e.energy_total > 0.0);
        assert!(e.energy_total <= e.energy_bound);
    }
    assert!(report.sup_variation >= 0.0 && report.sup_variation < 0.5);
    assert!(report.energy_ratio >= 1.0 && report.energy_ratio.is_finite());
    assert!(report.cauchy_distances[0].is_finite());
    assert!(report.cauchy_distances[0] < 0.5);

    assert!(compactness_report(&outcome.entries[..1], &metric, 0.1).is_err());
}
