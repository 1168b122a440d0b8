//! Numerical surrogates for the properties a compensated-compactness
//! argument needs from the viscous approximations: uniform sup-norm bounds,
//! energy bounds, smallness of the weak-form residuals against a family of
//! test functions, and stability of the quadratic constraint L̃Ñ − M̃² = −1
//! under local averaging.
//!
//! The weak residuals integrate by parts onto the test function, so for the
//! scaled system
//!
//! ```text
//! ∂ₓM̃ − ∂ᵧL̃ = Γ̃⁽²⁾₂₂L̃ − 2Γ̃⁽²⁾₁₂M̃ + Γ̃⁽²⁾₁₁Ñ =: RHS₁,
//! ∂ₓÑ − ∂ᵧM̃ = −Γ̃⁽¹⁾₂₂L̃ + 2Γ̃⁽¹⁾₁₂M̃ − Γ̃⁽¹⁾₁₁Ñ =: RHS₂,
//! ```
//!
//! the reported quantities are |∬ (−M̃ ∂ₓφ + L̃ ∂ᵧφ − RHS₁ φ)| and
//! |∬ (−Ñ ∂ₓφ + M̃ ∂ᵧφ − RHS₂ φ)| per test function φ.

use crate::error::{Error, Result};
use crate::fluid::Orientation;
use crate::metric::{christoffel, Metric};
use crate::solver::{SweepEntry, Trajectory};

/// C² quintic bump ψ(u) = 1 − 10|u|³ + 15u⁴ − 6|u|⁵ on [−1, 1], zero
/// outside; ψ, ψ′, ψ″ all vanish at |u| = 1.
pub fn quintic_bump(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        0.0
    } else {
        1.0 - 10.0 * a.powi(3) + 15.0 * a.powi(4) - 6.0 * a.powi(5)
    }
}

/// ψ′(u) = −30·sign(u)·u²(1−|u|)².
pub fn quintic_bump_deriv(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        0.0
    } else {
        let w = 1.0 - a;
        -30.0 * u.signum() * u * u * w * w
    }
}

/// A tensor-product bump φ(t, s) = ψ((t−c_t)/w_t)·ψ((s−c_s)/w_s), periodic
/// in s with the strip period.
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub center_t: f64,
    pub center_s: f64,
    pub width_t: f64,
    pub width_s: f64,
    pub period: f64,
}

impl TestFunction {
    fn s_offset(&self, s: f64) -> f64 {
        let d = (s - self.center_s).rem_euclid(self.period);
        if d > 0.5 * self.period {
            d - self.period
        } else {
            d
        }
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        quintic_bump((t - self.center_t) / self.width_t)
            * quintic_bump(self.s_offset(s) / self.width_s)
    }

    /// (∂ₜφ, ∂ₛφ).
    pub fn grad(&self, t: f64, s: f64) -> (f64, f64) {
        let ut = (t - self.center_t) / self.width_t;
        let us = self.s_offset(s) / self.width_s;
        (
            quintic_bump_deriv(ut) / self.width_t * quintic_bump(us),
            quintic_bump(ut) * quintic_bump_deriv(us) / self.width_s,
        )
    }
}

/// An n×n lattice of bump centers over the strip interior, one copy per
/// width scale. Scales are fractions of the largest width that keeps the
/// support strictly inside the strip in t; must lie in (0, 1].
pub fn bump_lattice(
    t0: f64,
    t1: f64,
    period: f64,
    n: usize,
    width_scales: &[f64],
) -> Result<Vec<TestFunction>> {
    if !(t1 > t0) || !(period > 0.0) || n == 0 {
        return Err(Error::InvalidParameter {
            name: "bump_lattice",
            message: format!("bad strip: t = [{t0}, {t1}], period = {period}, n = {n}"),
        });
    }
    let span = t1 - t0;
    let mut family = Vec::with_capacity(n * n * width_scales.len());
    for &scale in width_scales {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "width_scales",
                message: format!("scale {scale} outside (0, 1]"),
            });
        }
        let width_t = scale * span / (n + 1) as f64;
        let width_s = scale * period / (n + 1) as f64;
        for i in 0..n {
            let center_t = t0 + span * (i + 1) as f64 / (n + 1) as f64;
            for j in 0..n {
                let center_s = -0.5 * period + period * (j as f64 + 0.5) / n as f64;
                family.push(TestFunction {
                    center_t,
                    center_s,
                    width_t,
                    width_s,
                    period,
                });
            }
        }
    }
    Ok(family)
}

/// Scaled second-form values on a strip, rows ordered by increasing
/// time-like coordinate. `orientation` maps (t, s) onto the metric's (x, y).
#[derive(Debug, Clone)]
pub struct StripField {
    pub orientation: Orientation,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub period: f64,
    pub lt: Vec<Vec<f64>>,
    pub mt: Vec<Vec<f64>>,
    pub nt: Vec<Vec<f64>>,
}

impl StripField {
    /// Builds the strip from a completed march; a backward trajectory
    /// (decreasing times) is reversed so t increases.
    pub fn from_trajectory(traj: &Trajectory, metric: &Metric) -> Result<Self> {
        let n_rows = traj.rows.len();
        if n_rows < 2 {
            return Err(Error::InvalidParameter {
                name: "trajectory",
                message: "strip needs at least two rows".into(),
            });
        }
        let reversed = traj.times[n_rows - 1] < traj.times[0];
        let order: Vec<usize> = if reversed {
            (0..n_rows).rev().collect()
        } else {
            (0..n_rows).collect()
        };
        let mut t = Vec::with_capacity(n_rows);
        let mut lt = Vec::with_capacity(n_rows);
        let mut mt = Vec::with_capacity(n_rows);
        let mut nt = Vec::with_capacity(n_rows);
        for &row in &order {
            t.push(traj.times[row]);
            let forms = traj.second_form_row(metric, row)?;
            lt.push(forms.iter().map(|(_, f)| f.lt).collect());
            mt.push(forms.iter().map(|(_, f)| f.mt).collect());
            nt.push(forms.iter().map(|(_, f)| f.nt).collect());
        }
        Ok(StripField {
            orientation: traj.orientation,
            t,
            s: traj.s.clone(),
            period: traj.period,
            lt,
            mt,
            nt,
        })
    }

    /// (x, y) of node (row, cell).
    pub fn point(&self, row: usize, cell: usize) -> (f64, f64) {
        match self.orientation {
            Orientation::XTimeLike => (self.t[row], self.s[cell]),
            Orientation::YTimeLike => (self.s[cell], self.t[row]),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.t.len()
    }

    pub fn n_cells(&self) -> usize {
        self.s.len()
    }

    /// Largest |L̃|, |M̃|, |Ñ| over the strip.
    pub fn sup_norms(&self) -> (f64, f64, f64) {
        let sup = |g: &[Vec<f64>]| {
            g.iter()
                .flatten()
                .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        };
        (sup(&self.lt), sup(&self.mt), sup(&self.nt))
    }
}

/// Residuals of one test function against both equations, with the largest
/// single-term integral magnitudes for relative comparison.
#[derive(Debug, Clone, Copy)]
pub struct BumpResidual {
    pub center: (f64, f64),
    pub widths: (f64, f64),
    pub res1: f64,
    pub res2: f64,
    pub scale1: f64,
    pub scale2: f64,
}

#[derive(Debug, Clone)]
pub struct WeakFormReport {
    pub entries: Vec<BumpResidual>,
    pub max_res1: f64,
    pub max_res2: f64,
    pub l2_res1: f64,
    pub l2_res2: f64,
}

impl WeakFormReport {
    /// Largest residual over the family relative to the largest single-term
    /// integral over the family. A family-wide denominator keeps the ratio
    /// meaningful for bumps sitting on nearly constant fields, where every
    /// individual term integrates to almost zero.
    pub fn max_relative(&self) -> f64 {
        let max_res = self
            .entries
            .iter()
            .fold(0.0f64, |a, e| a.max(e.res1).max(e.res2));
        let max_scale = self
            .entries
            .iter()
            .fold(0.0f64, |a, e| a.max(e.scale1).max(e.scale2));
        max_res / max_scale.max(1e-300)
    }
}

/// Integrates both weak-form residuals over the strip for every test
/// function: tensor trapezoid in t, periodic rectangle rule in s.
pub fn weak_form_residual(
    field: &StripField,
    metric: &Metric,
    family: &[TestFunction],
) -> Result<WeakFormReport> {
    let n_rows = field.n_rows();
    let n_cells = field.n_cells();
    if n_rows < 2 || n_cells < 2 {
        return Err(Error::InvalidParameter {
            name: "field",
            message: "weak residuals need at least a 2x2 strip".into(),
        });
    }
    let dt = (field.t[1] - field.t[0]).abs();
    let ds = field.period / n_cells as f64;

    // Sources on the full grid once; every bump reuses them.
    let mut rhs1 = vec![vec![0.0; n_cells]; n_rows];
    let mut rhs2 = vec![vec![0.0; n_cells]; n_rows];
    for row in 0..n_rows {
        for cell in 0..n_cells {
            let (x, y) = field.point(row, cell);
            let v = metric.eval(x, y)?;
            let ch = christoffel(&v)?;
            let (l, m, n) = (
                field.lt[row][cell],
                field.mt[row][cell],
                field.nt[row][cell],
            );
            rhs1[row][cell] = ch.t2_22 * l - 2.0 * ch.t2_12 * m + ch.t2_11 * n;
            rhs2[row][cell] = -ch.t1_22 * l + 2.0 * ch.t1_12 * m - ch.t1_11 * n;
        }
    }

    let mut entries = Vec::with_capacity(family.len());
    for phi in family {
        let mut flux_m1 = 0.0;
        let mut flux_l1 = 0.0;
        let mut src1 = 0.0;
        let mut flux_n2 = 0.0;
        let mut flux_m2 = 0.0;
        let mut src2 = 0.0;
        for row in 0..n_rows {
            let wt = if row == 0 || row == n_rows - 1 { 0.5 } else { 1.0 };
            let t = field.t[row];
            if (t - phi.center_t).abs() > phi.width_t {
                continue;
            }
            for cell in 0..n_cells {
                let s = field.s[cell];
                if phi.s_offset(s).abs() > phi.width_s {
                    continue;
                }
                let w = wt * dt * ds;
                let p = phi.eval(t, s);
                let (dpt, dps) = phi.grad(t, s);
                let (dpx, dpy) = match field.orientation {
                    Orientation::XTimeLike => (dpt, dps),
                    Orientation::YTimeLike => (dps, dpt),
                };
                let (l, m, n) = (
                    field.lt[row][cell],
                    field.mt[row][cell],
                    field.nt[row][cell],
                );
                flux_m1 += w * m * dpx;
                flux_l1 += w * l * dpy;
                src1 += w * rhs1[row][cell] * p;
                flux_n2 += w * n * dpx;
                flux_m2 += w * m * dpy;
                src2 += w * rhs2[row][cell] * p;
            }
        }
        entries.push(BumpResidual {
            center: (phi.center_t, phi.center_s),
            widths: (phi.width_t, phi.width_s),
            res1: (-flux_m1 + flux_l1 - src1).abs(),
            res2: (-flux_n2 + flux_m2 - src2).abs(),
            scale1: flux_m1.abs().max(flux_l1.abs()).max(src1.abs()),
            scale2: flux_n2.abs().max(flux_m2.abs()).max(src2.abs()),
        });
    }
    let max_res1 = entries.iter().fold(0.0f64, |a, e| a.max(e.res1));
    let max_res2 = entries.iter().fold(0.0f64, |a, e| a.max(e.res2));
    let l2 = |pick: fn(&BumpResidual) -> f64| {
        (entries.iter().map(|e| pick(e).powi(2)).sum::<f64>() / entries.len().max(1) as f64).sqrt()
    };
    Ok(WeakFormReport {
        max_res1,
        max_res2,
        l2_res1: l2(|e| e.res1),
        l2_res2: l2(|e| e.res2),
        entries,
    })
}

/// Pointwise |L̃Ñ − M̃² + 1| over the strip: (max, discrete L² norm).
pub fn constraint_residual(field: &StripField) -> (f64, f64) {
    let dt = if field.n_rows() > 1 {
        (field.t[1] - field.t[0]).abs()
    } else {
        1.0
    };
    let ds = field.period / field.n_cells() as f64;
    let mut max = 0.0f64;
    let mut sq = 0.0;
    for row in 0..field.n_rows() {
        let wt = if row == 0 || row == field.n_rows() - 1 {
            0.5
        } else {
            1.0
        };
        for cell in 0..field.n_cells() {
            let r = field.lt[row][cell] * field.nt[row][cell]
                - field.mt[row][cell] * field.mt[row][cell]
                + 1.0;
            max = max.max(r.abs());
            sq += wt * dt * ds * r * r;
        }
    }
    (max, sq.sqrt())
}

/// Top-hat moving average of every component: periodic in s, clamped at the
/// strip ends in t. Window lengths below one cell leave that direction
/// untouched; windows beyond the strip are rejected.
pub fn weak_star_average(field: &StripField, window_s: f64, window_t: f64) -> Result<StripField> {
    let ds = field.period / field.n_cells() as f64;
    let span = field.t[field.n_rows() - 1] - field.t[0];
    let dt = if field.n_rows() > 1 {
        span / (field.n_rows() - 1) as f64
    } else {
        1.0
    };
    if window_s > field.period || window_t > span.abs() + dt {
        return Err(Error::InvalidParameter {
            name: "window",
            message: format!(
                "window ({window_s}, {window_t}) exceeds the strip ({}, {span})",
                field.period
            ),
        });
    }
    let half_s = (0.5 * window_s / ds).floor() as usize;
    let half_t = (0.5 * window_t / dt).floor() as usize;
    let n_rows = field.n_rows();
    let n_cells = field.n_cells();
    let average = |g: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; n_cells]; n_rows];
        for row in 0..n_rows {
            let r_lo = row.saturating_sub(half_t);
            let r_hi = (row + half_t).min(n_rows - 1);
            for cell in 0..n_cells {
                let mut sum = 0.0;
                let mut count = 0usize;
                for r in r_lo..=r_hi {
                    for k in 0..=2 * half_s {
                        let c = (cell + n_cells + k - half_s) % n_cells;
                        sum += g[r][c];
                        count += 1;
                    }
                }
                out[row][cell] = sum / count as f64;
            }
        }
        out
    };
    Ok(StripField {
        orientation: field.orientation,
        t: field.t.clone(),
        s: field.s.clone(),
        period: field.period,
        lt: average(&field.lt),
        mt: average(&field.mt),
        nt: average(&field.nt),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CompactnessEntry {
    pub eps: f64,
    pub sup_l: f64,
    pub sup_m: f64,
    pub sup_n: f64,
    pub energy_total: f64,
    pub energy_bound: f64,
}

/// Cross-ε tabulation of the quantities the convergence framework bounds.
#[derive(Debug, Clone)]
pub struct CompactnessReport {
    pub entries: Vec<CompactnessEntry>,
    /// (max − min)/min of the per-ε sup-norm max(|L̃|, |M̃|, |Ñ|).
    pub sup_variation: f64,
    /// max/min of the per-ε dissipation energies (1 when all vanish).
    pub energy_ratio: f64,
    /// Least-squares slope of energy against ε.
    pub energy_slope: f64,
    /// Sup distance between window-averaged successive-ε fields.
    pub cauchy_distances: Vec<f64>,
}

pub fn compactness_report(
    sweep: &[SweepEntry],
    metric: &Metric,
    window_s: f64,
) -> Result<CompactnessReport> {
    if sweep.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "sweep",
            message: format!("compactness report needs >= 2 members, got {}", sweep.len()),
        });
    }
    let mut entries = Vec::with_capacity(sweep.len());
    let mut strips = Vec::with_capacity(sweep.len());
    for member in sweep {
        let strip = StripField::from_trajectory(&member.trajectory, metric)?;
        let (sup_l, sup_m, sup_n) = strip.sup_norms();
        entries.push(CompactnessEntry {
            eps: member.eps,
            sup_l,
            sup_m,
            sup_n,
            energy_total: member.energy.total,
            energy_bound: member.energy.bound,
        });
        strips.push(strip);
    }
    let sup_all: Vec<f64> = entries
        .iter()
        .map(|e| e.sup_l.max(e.sup_m).max(e.sup_n))
        .collect();
    let sup_min = sup_all.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup_max = sup_all.iter().cloned().fold(0.0f64, f64::max);
    let energies: Vec<f64> = entries.iter().map(|e| e.energy_total).collect();
    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let e_max = energies.iter().cloned().fold(0.0f64, f64::max);
    let energy_ratio = if e_min > 0.0 {
        e_max / e_min
    } else if e_max == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let n = sweep.len() as f64;
    let mean_eps = sweep.iter().map(|m| m.eps).sum::<f64>() / n;
    let mean_e = energies.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (m, &e) in sweep.iter().zip(&energies) {
        cov += (m.eps - mean_eps) * (e - mean_e);
        var += (m.eps - mean_eps).powi(2);
    }
    let mut cauchy = Vec::with_capacity(strips.len() - 1);
    for pair in strips.windows(2) {
        let a = weak_star_average(&pair[0], window_s, 0.0)?;
        let b = weak_star_average(&pair[1], window_s, 0.0)?;
        let rows = a.n_rows().min(b.n_rows());
        let mut dist = 0.0f64;
        for row in 0..rows {
            for cell in 0..a.n_cells() {
                dist = dist
                    .max((a.lt[row][cell] - b.lt[row][cell]).abs())
                    .max((a.mt[row][cell] - b.mt[row][cell]).abs())
                    .max((a.nt[row][cell] - b.nt[row][cell]).abs());
            }
        }
        cauchy.push(dist);
    }
    Ok(CompactnessReport {
        entries,
        sup_variation: if sup_min > 0.0 {
            (sup_max - sup_min) / sup_min
        } else {
            0.0
        },
        energy_ratio,
        energy_slope: if var > 0.0 { cov / var } else { 0.0 },
        cauchy_distances: cauchy,
    })
}
