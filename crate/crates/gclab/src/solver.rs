//! Viscous parabolic marching for the Riemann-invariant form of the scaled
//! compatibility system.
//!
//! One coordinate is treated as time-like and the other as space-like with
//! period P. In Riemann variables the system reads
//!
//! ```text
//! q√(q²−1)·(a± ∂ₜ + b± ∂ₛ)W± = ±ε∂ₛ²W± ± (2εq/ρ)∂ₛW± ∂ₛ(ρq)
//!                               + ε(∂ₛW±)² ± S₁ − (q²−1)S₂,
//! ```
//!
//! where (a±, b±) are (λ±, μ±) when x is time-like and (μ±, λ±) when y is.
//! Inside a validated diamond region a₊ > 0 > a₋, so dividing through gives a
//! parabolic pair marched here with an explicit Heun step: central
//! differences for the viscous terms, upwinding for the transverse advection,
//! and a step size re-derived every step from the current fields.
//!
//! A backward march (for assembling whole-plane solutions from data on a
//! line) uses the sign flag σ = −1, which negates the sources and the
//! transverse term while keeping the viscous operator dissipative.

use crate::error::{Error, Result};
use crate::fluid::{
    bernoulli, fluid_to_second_form, invariants_to_state, riemann_invariants, source_terms,
    wave_speeds, DiamondRegion, Orientation, SecondFormPoint, State,
};
use crate::grid::{d2dx_periodic, ddx_periodic, integral_periodic, mollify_periodic, upwind_periodic};
use crate::metric::{christoffel, ChristoffelSet, Metric};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What to do when a grid point leaves the diamond region beyond tolerance
/// after the half-step retry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionPolicy {
    /// Record the breach and stop the march (the default).
    Enforce,
    /// Record the breach and keep marching while the states stay valid.
    Monitor,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub orientation: Orientation,
    /// Time-like coordinate of the data line.
    pub t_start: f64,
    /// End of the march; may be below `t_start` for a backward march.
    pub t_end: f64,
    /// Space-like period P.
    pub period: f64,
    /// Space-like grid cells (≥ 16).
    pub n_s: usize,
    /// Output intervals; the trajectory holds `n_t + 1` rows.
    pub n_t: usize,
    /// Viscosity ε > 0.
    pub eps: f64,
    pub region: DiamondRegion,
    /// Safety factor in (0, 1] on the stability bound.
    pub safety: f64,
    /// Padding on the region bounds before a point counts as breached.
    pub breach_tol: f64,
    pub policy: RegionPolicy,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0) {
            return Err(Error::InvalidParameter {
                name: "period",
                message: format!("must be positive, got {}", self.period),
            });
        }
        if self.n_s < 16 {
            return Err(Error::InvalidParameter {
                name: "n_s",
                message: format!("need at least 16 space-like cells, got {}", self.n_s),
            });
        }
        if self.n_t == 0 {
            return Err(Error::InvalidParameter {
                name: "n_t",
                message: "need at least one output interval".into(),
            });
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidParameter {
                name: "eps",
                message: format!("viscous march requires eps > 0, got {}", self.eps),
            });
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "safety",
                message: format!("must lie in (0, 1], got {}", self.safety),
            });
        }
        if self.t_end == self.t_start {
            return Err(Error::InvalidParameter {
                name: "t_end",
                message: "march interval is empty".into(),
            });
        }
        Ok(())
    }

    pub fn ds(&self) -> f64 {
        self.period / self.n_s as f64
    }

    /// Space-like grid s_i = −P/2 + i·Δs.
    pub fn s_grid(&self) -> Vec<f64> {
        (0..self.n_s)
            .map(|i| -0.5 * self.period + i as f64 * self.ds())
            .collect()
    }
}

/// One periodic row of Riemann invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannRow {
    pub wp: Vec<f64>,
    pub wm: Vec<f64>,
}

impl RiemannRow {
    pub fn constant(state: State, n_s: usize) -> Result<Self> {
        let (wp, wm) = riemann_invariants(state.q, state.theta)?;
        Ok(RiemannRow {
            wp: vec![wp; n_s],
            wm: vec![wm; n_s],
        })
    }

    pub fn len(&self) -> usize {
        self.wp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wp.is_empty()
    }

    /// Pointwise (q, θ) states.
    pub fn states(&self) -> Result<Vec<State>> {
        self.wp
            .iter()
            .zip(&self.wm)
            .map(|(&p, &m)| invariants_to_state(p, m))
            .collect()
    }
}

/// Metric data the right-hand side needs at one grid point.
#[derive(Debug, Clone, Copy)]
pub struct SliceCell {
    pub ch: ChristoffelSet,
    pub gamma: f64,
    pub det_g: f64,
}

/// Evaluates the metric along one space-like row at time-like coordinate
/// `t`. For an x-time-like march the metric depends on x = t alone and the
/// row is uniform; for a y-time-like march it varies with s = x and is
/// independent of t.
pub fn metric_slice(
    metric: &Metric,
    orientation: Orientation,
    t: f64,
    s: &[f64],
) -> Result<Vec<SliceCell>> {
    match orientation {
        Orientation::XTimeLike => {
            let v = metric.eval(t, 0.0)?;
            let cell = SliceCell {
                ch: christoffel(&v)?,
                gamma: v.gamma,
                det_g: v.det(),
            };
            Ok(vec![cell; s.len()])
        }
        Orientation::YTimeLike => s
            .iter()
            .map(|&x| {
                let v = metric.eval(x, t)?;
                Ok(SliceCell {
                    ch: christoffel(&v)?,
                    gamma: v.gamma,
                    det_g: v.det(),
                })
            })
            .collect(),
    }
}

/// A recorded breach of the diamond region.
#[derive(Debug, Clone, Copy)]
pub struct BreachEvent {
    /// Physical time-like coordinate at which the breach was accepted.
    pub t: f64,
    pub cell: usize,
    pub wp: f64,
    pub wm: f64,
    /// Distance past the violated bound.
    pub excess: f64,
}

#[derive(Debug, Clone, Default)]
pub struct MarchDiagnostics {
    pub steps: usize,
    pub halved_steps: usize,
    /// Number of (step, cell) pairs found outside the padded region.
    pub breach_points: usize,
    pub first_breach: Option<BreachEvent>,
    /// Physical time-like coordinate where the march stopped short, if it did.
    pub terminated_early: Option<f64>,
    pub min_q: f64,
    pub max_q: f64,
}

/// Snapshots of one march at uniformly spaced time-like coordinates.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub orientation: Orientation,
    /// Physical time-like coordinate per row; decreasing for backward runs.
    pub times: Vec<f64>,
    /// Space-like grid shared by every row.
    pub s: Vec<f64>,
    /// Space-like period P as configured.
    pub period: f64,
    pub rows: Vec<RiemannRow>,
    pub diagnostics: MarchDiagnostics,
}

impl Trajectory {
    /// True when every requested row was produced with no region breach.
    pub fn clean(&self) -> bool {
        self.diagnostics.breach_points == 0 && self.diagnostics.terminated_early.is_none()
    }

    /// (x, y) coordinates of cell `i` in row `row`.
    pub fn point(&self, row: usize, i: usize) -> (f64, f64) {
        match self.orientation {
            Orientation::XTimeLike => (self.times[row], self.s[i]),
            Orientation::YTimeLike => (self.s[i], self.times[row]),
        }
    }

    /// Flow states and second-form values along one row.
    pub fn second_form_row(
        &self,
        metric: &Metric,
        row: usize,
    ) -> Result<Vec<(State, SecondFormPoint)>> {
        let states = self.rows[row].states()?;
        states
            .iter()
            .enumerate()
            .map(|(i, &st)| {
                let (x, y) = self.point(row, i);
                let v = metric.eval(x, y)?;
                Ok((st, fluid_to_second_form(st, v.gamma, v.det())?))
            })
            .collect()
    }
}

/// Assembles ∂ₜW± for one row. `sigma` is +1 for a forward march and −1 for
/// a backward march; the viscous terms keep their signs either way.
pub fn viscous_rhs(
    wp: &[f64],
    wm: &[f64],
    slice: &[SliceCell],
    eps: f64,
    ds: f64,
    orientation: Orientation,
    sigma: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = wp.len();
    debug_assert_eq!(wm.len(), n);
    debug_assert_eq!(slice.len(), n);
    let mut states = Vec::with_capacity(n);
    let mut rho_q = Vec::with_capacity(n);
    for i in 0..n {
        let st = invariants_to_state(wp[i], wm[i])?;
        let (rho, _) = bernoulli(st.q)?;
        rho_q.push(rho * st.q);
        states.push(st);
    }
    let dwp_c = ddx_periodic(wp, ds);
    let dwm_c = ddx_periodic(wm, ds);
    let d2wp = d2dx_periodic(wp, ds);
    let d2wm = d2dx_periodic(wm, ds);
    let drq = ddx_periodic(&rho_q, ds);

    // Effective transport speeds c± = σ·b±/a± select the upwind side.
    let mut a_p = vec![0.0; n];
    let mut a_m = vec![0.0; n];
    let mut b_p = vec![0.0; n];
    let mut b_m = vec![0.0; n];
    let mut big_d = vec![0.0; n];
    let mut c_p = vec![0.0; n];
    let mut c_m = vec![0.0; n];
    for (i, st) in states.iter().enumerate() {
        let ws = wave_speeds(st.q, st.theta)?;
        let (ap, am, bp, bm) = match orientation {
            Orientation::XTimeLike => (ws.lambda_p, ws.lambda_m, ws.mu_p, ws.mu_m),
            Orientation::YTimeLike => (ws.mu_p, ws.mu_m, ws.lambda_p, ws.lambda_m),
        };
        if !(ap > 0.0 && am < 0.0) {
            return Err(Error::ParabolicityLoss {
                cell: i,
                fwd: ap,
                bwd: am,
            });
        }
        a_p[i] = ap;
        a_m[i] = am;
        b_p[i] = bp;
        b_m[i] = bm;
        big_d[i] = st.q * (st.q * st.q - 1.0).sqrt();
        c_p[i] = sigma * bp / ap;
        c_m[i] = sigma * bm / am;
    }
    let dwp_u = upwind_periodic(wp, &c_p, ds);
    let dwm_u = upwind_periodic(wm, &c_m, ds);

    let mut out_p = vec![0.0; n];
    let mut out_m = vec![0.0; n];
    for i in 0..n {
        let st = states[i];
        let (rho, _) = bernoulli(st.q)?;
        let srcs = source_terms(st, &slice[i].ch)?;
        let grad_coef = 2.0 * eps * st.q / rho;
        let vp = eps * d2wp[i] + grad_coef * dwp_c[i] * drq[i] + eps * dwp_c[i] * dwp_c[i];
        let vm = eps * d2wm[i] + grad_coef * dwm_c[i] * drq[i] - eps * dwm_c[i] * dwm_c[i];
        let d = big_d[i];
        let num_p = vp + sigma * (srcs.w_plus_source() - d * b_p[i] * dwp_u[i]);
        let num_m = -vm + sigma * (srcs.w_minus_source() - d * b_m[i] * dwm_u[i]);
        out_p[i] = num_p / (d * a_p[i]);
        out_m[i] = num_m / (d * a_m[i]);
    }
    Ok((out_p, out_m))
}

/// Largest stable step for the current row: the parabolic bound
/// Δs²·q√(q²−1)·|a±|/(2ε) and the transport bound Δs·|a±/b±|, minimized over
/// the row and both invariants, before the safety factor.
fn stable_dt(
    wp: &[f64],
    wm: &[f64],
    eps: f64,
    ds: f64,
    orientation: Orientation,
) -> Result<f64> {
    let mut bound = f64::INFINITY;
    for (&p, &m) in wp.iter().zip(wm) {
        let st = invariants_to_state(p, m)?;
        let ws = wave_speeds(st.q, st.theta)?;
        let (ap, am, bp, bm) = match orientation {
            Orientation::XTimeLike => (ws.lambda_p, ws.lambda_m, ws.mu_p, ws.mu_m),
            Orientation::YTimeLike => (ws.mu_p, ws.mu_m, ws.lambda_p, ws.lambda_m),
        };
        let d = st.q * (st.q * st.q - 1.0).sqrt();
        for (a, b) in [(ap, bp), (am, bm)] {
            let parabolic = ds * ds * d * a.abs() / (2.0 * eps);
            bound = bound.min(parabolic);
            let c = (b / a).abs();
            if c > 0.0 {
                bound = bound.min(ds / c);
            }
        }
    }
    Ok(bound)
}

/// Marches `initial` from `t_start` to `t_end`, recording `n_t + 1` rows at
/// uniform time-like spacing. Breach handling follows `config.policy` after
/// one retry at half step; an enforced stop returns the rows recorded so far
/// with `terminated_early` set rather than an error, so callers can inspect
/// the partial run.
pub fn march(metric: &Metric, config: &SolverConfig, initial: &RiemannRow) -> Result<Trajectory> {
    config.validate()?;
    if initial.len() != config.n_s {
        return Err(Error::InvalidParameter {
            name: "initial",
            message: format!(
                "initial row has {} cells, config expects {}",
                initial.len(),
                config.n_s
            ),
        });
    }
    for i in 0..initial.len() {
        if let Some(b) = config
            .region
            .breach(initial.wp[i], initial.wm[i], config.breach_tol)
        {
            return Err(Error::RegionBreach {
                t: config.t_start,
                cell: i,
                what: format!("initial data: {}", b.side()),
                value: b.excess(),
                bound: config.breach_tol,
            });
        }
    }
    if config.orientation == Orientation::YTimeLike {
        let defect = metric.periodicity_defect(config.period)?;
        if defect > 1e-6 {
            return Err(Error::StructuralForm {
                reason: format!(
                    "y-time-like march needs an x-periodic metric; \
                     periodicity defect {defect} over period {}",
                    config.period
                ),
            });
        }
    }

    let sigma = if config.t_end > config.t_start { 1.0 } else { -1.0 };
    let span = (config.t_end - config.t_start).abs();
    let ds = config.ds();
    let s = config.s_grid();
    let phys = |tau: f64| config.t_start + sigma * tau;

    // For a y-time-like march the slice never changes; compute it once.
    let frozen_slice = match config.orientation {
        Orientation::YTimeLike => Some(metric_slice(metric, config.orientation, config.t_start, &s)?),
        Orientation::XTimeLike => None,
    };
    let slice_at = |tau: f64| -> Result<Vec<SliceCell>> {
        match &frozen_slice {
            Some(cells) => Ok(cells.clone()),
            None => metric_slice(metric, config.orientation, phys(tau), &s),
        }
    };

    let mut diag = MarchDiagnostics {
        min_q: f64::INFINITY,
        max_q: f64::NEG_INFINITY,
        ..MarchDiagnostics::default()
    };
    let mut wp = initial.wp.clone();
    let mut wm = initial.wm.clone();
    let mut tau = 0.0f64;
    let mut times = vec![config.t_start];
    let mut rows = vec![initial.clone()];

    let track_q = |wp: &[f64], wm: &[f64], diag: &mut MarchDiagnostics| {
        for (&p, &m) in wp.iter().zip(wm) {
            if let Ok(st) = invariants_to_state(p, m) {
                diag.min_q = diag.min_q.min(st.q);
                diag.max_q = diag.max_q.max(st.q);
            }
        }
    };
    track_q(&wp, &wm, &mut diag);

    'outer: for j in 1..=config.n_t {
        let target = span * j as f64 / config.n_t as f64;
        while target - tau > 1e-12 * span {
            let slice_now = slice_at(tau)?;
            let (k1p, k1m) = viscous_rhs(&wp, &wm, &slice_now, config.eps, ds, config.orientation, sigma)?;
            let mut dt = (config.safety * stable_dt(&wp, &wm, config.eps, ds, config.orientation)?)
                .min(target - tau);
            if !(dt > f64::EPSILON * span) {
                return Err(Error::StepUnderflow { t: phys(tau), dt });
            }

            let heun = |dt: f64| -> Result<(Vec<f64>, Vec<f64>)> {
                let pred_p: Vec<f64> = wp.iter().zip(&k1p).map(|(w, k)| w + dt * k).collect();
                let pred_m: Vec<f64> = wm.iter().zip(&k1m).map(|(w, k)| w + dt * k).collect();
                let slice_next = slice_at(tau + dt)?;
                let (k2p, k2m) = viscous_rhs(
                    &pred_p, &pred_m, &slice_next, config.eps, ds, config.orientation, sigma,
                )?;
                let new_p: Vec<f64> = (0..wp.len())
                    .map(|i| wp[i] + 0.5 * dt * (k1p[i] + k2p[i]))
                    .collect();
                let new_m: Vec<f64> = (0..wm.len())
                    .map(|i| wm[i] + 0.5 * dt * (k1m[i] + k2m[i]))
                    .collect();
                for (&p, &m) in new_p.iter().zip(&new_m) {
                    if !p.is_finite() || !m.is_finite() {
                        return Err(Error::NonFinite {
                            context: "Riemann invariants after Heun step".into(),
                            t: phys(tau + dt),
                        });
                    }
                }
                Ok((new_p, new_m))
            };
            let breach_count = |wp: &[f64], wm: &[f64], t_new: f64| -> (usize, Option<BreachEvent>) {
                let mut count = 0;
                let mut first = None;
                for i in 0..wp.len() {
                    if let Some(b) = config.region.breach(wp[i], wm[i], config.breach_tol) {
                        count += 1;
                        if first.is_none() {
                            first = Some(BreachEvent {
                                t: t_new,
                                cell: i,
                                wp: wp[i],
                                wm: wm[i],
                                excess: b.excess(),
                            });
                        }
                    }
                }
                (count, first)
            };

            let mut attempt = heun(dt);
            let mut breached = match &attempt {
                Ok((p, m)) => breach_count(p, m, phys(tau + dt)),
                Err(_) => (usize::MAX, None),
            };
            if breached.0 > 0 {
                dt *= 0.5;
                diag.halved_steps += 1;
                attempt = heun(dt);
                breached = match &attempt {
                    Ok((p, m)) => breach_count(p, m, phys(tau + dt)),
                    Err(_) => (usize::MAX, None),
                };
            }
            match attempt {
                Err(e) => {
                    // Even the halved step left the admissible chart.
                    if config.policy == RegionPolicy::Enforce {
                        diag.terminated_early = Some(phys(tau));
                        if diag.first_breach.is_none() {
                            diag.first_breach = Some(BreachEvent {
                                t: phys(tau),
                                cell: 0,
                                wp: f64::NAN,
                                wm: f64::NAN,
                                excess: f64::INFINITY,
                            });
                        }
                        break 'outer;
                    }
                    return Err(e);
                }
                Ok((new_p, new_m)) => {
                    if breached.0 > 0 {
                        diag.breach_points += breached.0;
                        if diag.first_breach.is_none() {
                            diag.first_breach = breached.1;
                        }
                        if config.policy == RegionPolicy::Enforce {
                            diag.terminated_early = Some(phys(tau + dt));
                            break 'outer;
                        }
                    }
                    wp = new_p;
                    wm = new_m;
                    tau += dt;
                    diag.steps += 1;
                    track_q(&wp, &wm, &mut diag);
                }
            }
        }
        tau = target;
        times.push(phys(target));
        rows.push(RiemannRow {
            wp: wp.clone(),
            wm: wm.clone(),
        });
    }

    Ok(Trajectory {
        orientation: config.orientation,
        times,
        s,
        period: config.period,
        rows,
        diagnostics: diag,
    })
}

/// Discrete analog of the viscous energy identity over a completed march:
/// the dissipation ε∫∫(ρ³(∂ₛq)²/q² + ρ(∂ₛθ)²) and the bound assembled from
/// the source integral ∫∫|S₂| and the time-like momentum flux ∫ρu ds
/// (ρv for a y-time-like march) at the two end rows.
#[derive(Debug, Clone, Copy)]
pub struct EnergyReport {
    pub eps: f64,
    pub dissipation_q: f64,
    pub dissipation_theta: f64,
    pub total: f64,
    pub source_abs_integral: f64,
    pub flux_start: f64,
    pub flux_end: f64,
    pub bound: f64,
}

pub fn energy_diagnostics(traj: &Trajectory, metric: &Metric, eps: f64) -> Result<EnergyReport> {
    if traj.rows.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "trajectory",
            message: "energy diagnostics need at least two rows".into(),
        });
    }
    let n = traj.s.len();
    let ds = (traj.s[1] - traj.s[0]).abs();
    let dt = (traj.times[1] - traj.times[0]).abs();
    let mut dissipation_q = 0.0;
    let mut dissipation_theta = 0.0;
    let mut source_abs = 0.0;
    let flux = |row: usize| -> Result<f64> {
        let states = traj.rows[row].states()?;
        let vals: Result<Vec<f64>> = states
            .iter()
            .map(|st| {
                let (rho, _) = bernoulli(st.q)?;
                let (u, v) = st.velocity();
                Ok(rho
                    * match traj.orientation {
                        Orientation::XTimeLike => u,
                        Orientation::YTimeLike => v,
                    })
            })
            .collect();
        Ok(integral_periodic(&vals?, ds))
    };
    let flux_start = flux(0)?;
    let flux_end = flux(traj.rows.len() - 1)?;

    for (row, riemann) in traj.rows.iter().enumerate() {
        let weight = if row == 0 || row == traj.rows.len() - 1 {
            0.5
        } else {
            1.0
        };
        let states = riemann.states()?;
        let q: Vec<f64> = states.iter().map(|s| s.q).collect();
        let theta: Vec<f64> = states.iter().map(|s| s.theta).collect();
        let dq = ddx_periodic(&q, ds);
        let dtheta = ddx_periodic(&theta, ds);
        let mut row_q = 0.0;
        let mut row_theta = 0.0;
        let mut row_src = 0.0;
        for i in 0..n {
            let (rho, _) = bernoulli(q[i])?;
            row_q += rho.powi(3) * dq[i] * dq[i] / (q[i] * q[i]);
            row_theta += rho * dtheta[i] * dtheta[i];
            let (x, y) = traj.point(row, i);
            let v = metric.eval(x, y)?;
            let srcs = source_terms(states[i], &christoffel(&v)?)?;
            row_src += srcs.s2.abs();
        }
        dissipation_q += weight * dt * row_q * ds;
        dissipation_theta += weight * dt * row_theta * ds;
        source_abs += weight * dt * row_src * ds;
    }
    dissipation_q *= eps;
    dissipation_theta *= eps;
    Ok(EnergyReport {
        eps,
        dissipation_q,
        dissipation_theta,
        total: dissipation_q + dissipation_theta,
        source_abs_integral: source_abs,
        flux_start,
        flux_end,
        bound: source_abs + flux_start.abs() + flux_end.abs(),
    })
}

/// Smooths pointwise (q, θ) samples into an admissible periodic initial row:
/// map to W±, mollify each invariant with a compactly supported bump of the
/// given width, and verify the result stayed inside the region (mollification
/// averages values that already satisfy the W± bounds).
pub fn mollify_initial_data(
    samples: &[State],
    period: f64,
    width: f64,
    region: &DiamondRegion,
) -> Result<RiemannRow> {
    let mut wp = Vec::with_capacity(samples.len());
    let mut wm = Vec::with_capacity(samples.len());
    for st in samples {
        let (p, m) = riemann_invariants(st.q, st.theta)?;
        if let Some(b) = region.breach(p, m, 0.0) {
            return Err(Error::RegionBreach {
                t: 0.0,
                cell: wp.len(),
                what: format!("raw initial sample: {}", b.side()),
                value: b.excess(),
                bound: 0.0,
            });
        }
        wp.push(p);
        wm.push(m);
    }
    let ds = period / samples.len() as f64;
    let row = RiemannRow {
        wp: mollify_periodic(&wp, ds, width),
        wm: mollify_periodic(&wm, ds, width),
    };
    for i in 0..row.len() {
        if let Some(b) = region.breach(row.wp[i], row.wm[i], 1e-12) {
            return Err(Error::RegionBreach {
                t: 0.0,
                cell: i,
                what: format!("mollified initial data: {}", b.side()),
                value: b.excess(),
                bound: 1e-12,
            });
        }
    }
    Ok(row)
}

/// Random smooth periodic initial data: the region center plus a Fourier
/// perturbation of each invariant using the first `modes` wavenumbers, scaled
/// so the largest pointwise deviation equals `amplitude` exactly.
/// Reproducible from the seed.
pub fn perturbed_initial_data(
    region: &DiamondRegion,
    amplitude: f64,
    modes: usize,
    n_s: usize,
    period: f64,
    seed: u64,
) -> Result<RiemannRow> {
    if !(amplitude >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "amplitude",
            message: format!("must be non-negative, got {amplitude}"),
        });
    }
    if modes == 0 || 2 * modes >= n_s {
        return Err(Error::InvalidParameter {
            name: "modes",
            message: format!("need 1 <= modes < n_s/2, got {modes} modes on {n_s} cells"),
        });
    }
    if amplitude > 0.5 * region.wp_extent() {
        return Err(Error::InvalidParameter {
            name: "amplitude",
            message: format!(
                "amplitude {amplitude} exceeds the half-extent {} of the region",
                0.5 * region.wp_extent()
            ),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (wp_c, wm_c) = region.center_w();
    let mut component = |center: f64| -> Vec<f64> {
        let coeffs: Vec<(f64, f64)> = (0..modes)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut dev: Vec<f64> = (0..n_s)
            .map(|i| {
                let s = i as f64 / n_s as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, (a, b))| {
                        let arg = 2.0 * std::f64::consts::PI * (k + 1) as f64 * s;
                        a * arg.cos() + b * arg.sin()
                    })
                    .sum()
            })
            .collect();
        let peak = dev.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        if peak > 0.0 && amplitude > 0.0 {
            for d in &mut dev {
                *d *= amplitude / peak;
            }
        } else {
            dev.iter_mut().for_each(|d| *d = 0.0);
        }
        dev.iter().map(|d| center + d).collect()
    };
    let wp = component(wp_c);
    let wm = component(wm_c);
    let row = RiemannRow { wp, wm };
    for i in 0..row.len() {
        if region.breach(row.wp[i], row.wm[i], 0.0).is_some() {
            return Err(Error::InvalidParameter {
                name: "amplitude",
                message: format!("perturbed datum escapes the region at cell {i}"),
            });
        }
    }
    let _ = period;
    Ok(row)
}

/// One member of a viscosity sweep.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub eps: f64,
    pub trajectory: Trajectory,
    pub energy: EnergyReport,
}

/// Result of a sweep; a failed member stops the sweep but keeps what
/// finished.
#[derive(Debug)]
pub struct SweepOutcome {
    pub entries: Vec<SweepEntry>,
    pub failure: Option<(f64, Error)>,
}

/// Marches the same initial data once per viscosity in `eps_list` (strictly
/// decreasing) on a shared grid.
pub fn epsilon_sweep(
    metric: &Metric,
    base: &SolverConfig,
    eps_list: &[f64],
    initial: &RiemannRow,
) -> Result<SweepOutcome> {
    if eps_list.is_empty() {
        return Err(Error::InvalidParameter {
            name: "eps_list",
            message: "sweep needs at least one viscosity".into(),
        });
    }
    for pair in eps_list.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::InvalidParameter {
                name: "eps_list",
                message: format!("must be strictly decreasing, got {pair:?}"),
            });
        }
    }
    let mut entries = Vec::new();
    for &eps in eps_list {
        let config = SolverConfig {
            eps,
            ..base.clone()
        };
        let run = march(metric, &config, initial)
            .and_then(|traj| energy_diagnostics(&traj, metric, eps).map(|e| (traj, e)));
        match run {
            Ok((trajectory, energy)) => entries.push(SweepEntry {
                eps,
                trajectory,
                energy,
            }),
            Err(e) => {
                return Ok(SweepOutcome {
                    entries,
                    failure: Some((eps, e)),
                })
            }
        }
    }
    Ok(SweepOutcome {
        entries,
        failure: None,
    })
}

/// A solution on both sides of the data line: a forward march over
/// [t_start, t_end] and a backward march of the same length that shares row
/// zero exactly.
#[derive(Debug, Clone)]
pub struct WholePlane {
    pub forward: Trajectory,
    pub backward: Trajectory,
}

pub fn whole_plane(
    metric: &Metric,
    config: &SolverConfig,
    initial: &RiemannRow,
) -> Result<WholePlane> {
    let forward = march(metric, config, initial)?;
    let mirrored = SolverConfig {
        t_end: 2.0 * config.t_start - config.t_end,
        ..config.clone()
    };
    let backward = march(metric, &mirrored, initial)?;
    Ok(WholePlane { forward, backward })
}
