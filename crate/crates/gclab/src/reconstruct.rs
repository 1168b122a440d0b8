//! Surface reconstruction: from a metric and a second-fundamental-form field
//! to an immersed patch in R³.
//!
//! The frame (r_x, r_y, n) satisfies the linear system
//!
//! ```text
//! ∂ₓ r_x = Γ¹₁₁ r_x + Γ²₁₁ r_y + h₁₁ n        ∂ᵧ r_x = Γ¹₁₂ r_x + Γ²₁₂ r_y + h₁₂ n
//! ∂ₓ r_y = Γ¹₁₂ r_x + Γ²₁₂ r_y + h₁₂ n        ∂ᵧ r_y = Γ¹₂₂ r_x + Γ²₂₂ r_y + h₂₂ n
//! ∂ₓ n   = [(−h₁₁G + h₁₂F) r_x + (h₁₁F − h₁₂E) r_y]/|g|
//! ∂ᵧ n   = [(−h₁₂G + h₂₂F) r_x + (h₁₂F − h₂₂E) r_y]/|g|
//! ```
//!
//! integrated by classical RK4 along a fixed path order: first along the
//! spine axis from the base corner, then along every transverse line. The
//! commutator of the two orders is not symmetrized away; it is measured on a
//! subsampled lattice and reported as the path-consistency defect, which for
//! an exact solution of the compatibility equations vanishes with the grid.
//! Only the normal is renormalized after each step; tangent drift is left
//! visible to the first-form error.

use crate::error::{Error, Result};
use crate::fluid::Orientation;
use crate::metric::{christoffel, ChristoffelSet, Metric, MetricValues};
use crate::verify::StripField;

type V3 = [f64; 3];

fn axpy(k: f64, a: V3, b: V3) -> V3 {
    [k * a[0] + b[0], k * a[1] + b[1], k * a[2] + b[2]]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// Moving frame at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub r_x: V3,
    pub r_y: V3,
    pub n: V3,
}

impl Frame {
    fn combine(&self, k: f64, d: &Frame) -> Frame {
        Frame {
            r_x: axpy(k, d.r_x, self.r_x),
            r_y: axpy(k, d.r_y, self.r_y),
            n: axpy(k, d.n, self.n),
        }
    }

    fn max_component_distance(&self, other: &Frame) -> f64 {
        let d = |a: V3, b: V3| {
            (a[0] - b[0])
                .abs()
                .max((a[1] - b[1]).abs())
                .max((a[2] - b[2]).abs())
        };
        d(self.r_x, other.r_x)
            .max(d(self.r_y, other.r_y))
            .max(d(self.n, other.n))
    }
}

/// Raw second-form coefficients h_ij on a rectangular (x, y) grid,
/// `h[ix][iy]` layout.
#[derive(Debug, Clone)]
pub struct SecondFormGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub h11: Vec<Vec<f64>>,
    pub h12: Vec<Vec<f64>>,
    pub h22: Vec<Vec<f64>>,
}

impl SecondFormGrid {
    pub fn zero(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let z = vec![vec![0.0; ys.len()]; xs.len()];
        SecondFormGrid {
            xs,
            ys,
            h11: z.clone(),
            h12: z.clone(),
            h22: z,
        }
    }
}

/// Converts a scaled strip field to raw coefficients h_ij = √|g|·γ·(L̃, M̃, Ñ).
pub fn unscale_second_form(field: &StripField, metric: &Metric) -> Result<SecondFormGrid> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = match field.orientation {
        Orientation::XTimeLike => (field.t.clone(), field.s.clone()),
        Orientation::YTimeLike => (field.s.clone(), field.t.clone()),
    };
    let mut grid = SecondFormGrid::zero(xs, ys);
    for row in 0..field.n_rows() {
        for cell in 0..field.n_cells() {
            let (x, y) = field.point(row, cell);
            let v = metric.eval(x, y)?;
            let scale = v.det().sqrt() * v.gamma;
            let (ix, iy) = match field.orientation {
                Orientation::XTimeLike => (row, cell),
                Orientation::YTimeLike => (cell, row),
            };
            grid.h11[ix][iy] = scale * field.lt[row][cell];
            grid.h12[ix][iy] = scale * field.mt[row][cell];
            grid.h22[ix][iy] = scale * field.nt[row][cell];
        }
    }
    Ok(grid)
}

/// The reconstructed patch: frames everywhere, positions after
/// [`integrate_position`], and the integration-order commutator measured on
/// a subsampled lattice.
#[derive(Debug, Clone)]
pub struct SurfacePatch {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Axis the first integration pass runs along.
    pub spine: Orientation,
    pub frames: Vec<Vec<Frame>>,
    pub positions: Option<Vec<Vec<V3>>>,
    /// Largest | |n| − 1 | observed before per-step renormalization.
    pub normal_drift: f64,
    /// (ix, iy, frame difference) on the subsampled lattice.
    pub defect_samples: Vec<(usize, usize, f64)>,
    pub max_defect: f64,
}

impl SurfacePatch {
    /// Largest |n·r_x| or |n·r_y| over the patch.
    pub fn tangency_error(&self) -> f64 {
        self.frames
            .iter()
            .flatten()
            .map(|f| dot(f.n, f.r_x).abs().max(dot(f.n, f.r_y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Default base frame at (x, y): r_x = (√E, 0, 0),
/// r_y = (F/√E, √(G − F²/E), 0), n = (0, 0, 1).
pub fn base_frame(metric: &Metric, x: f64, y: f64) -> Result<Frame> {
    let v = metric.eval_any_curvature(x, y)?;
    if v.det() <= 0.0 {
        return Err(Error::DegenerateMetric {
            x,
            y,
            det: v.det(),
        });
    }
    let se = v.e.sqrt();
    Ok(Frame {
        r_x: [se, 0.0, 0.0],
        r_y: [v.f / se, (v.g - v.f * v.f / v.e).sqrt(), 0.0],
        n: [0.0, 0.0, 1.0],
    })
}

/// Cubic (Catmull-Rom) estimate of the midpoint between nodes i and i+1 of
/// a grid line, clamped at the ends.
fn midpoint(line: impl Fn(usize) -> f64, i: usize, len: usize) -> f64 {
    let im = i.saturating_sub(1);
    let ip2 = (i + 2).min(len - 1);
    (-line(im) + 9.0 * line(i) + 9.0 * line(i + 1) - line(ip2)) / 16.0
}

struct Coefficients {
    v: MetricValues,
    ch: ChristoffelSet,
}

fn coefficients(metric: &Metric, x: f64, y: f64) -> Result<Coefficients> {
    let v = metric.eval_any_curvature(x, y)?;
    let ch = christoffel(&v)?;
    Ok(Coefficients { v, ch })
}

fn frame_rhs_x(c: &Coefficients, h11: f64, h12: f64, f: &Frame) -> Frame {
    let det = c.v.det();
    let mut d = Frame {
        r_x: [0.0; 3],
        r_y: [0.0; 3],
        n: [0.0; 3],
    };
    for k in 0..3 {
        d.r_x[k] = c.ch.g1_11 * f.r_x[k] + c.ch.g2_11 * f.r_y[k] + h11 * f.n[k];
        d.r_y[k] = c.ch.g1_12 * f.r_x[k] + c.ch.g2_12 * f.r_y[k] + h12 * f.n[k];
        d.n[k] = ((-h11 * c.v.g + h12 * c.v.f) * f.r_x[k]
            + (h11 * c.v.f - h12 * c.v.e) * f.r_y[k])
            / det;
    }
    d
}

fn frame_rhs_y(c: &Coefficients, h12: f64, h22: f64, f: &Frame) -> Frame {
    let det = c.v.det();
    let mut d = Frame {
        r_x: [0.0; 3],
        r_y: [0.0; 3],
        n: [0.0; 3],
    };
    for k in 0..3 {
        d.r_x[k] = c.ch.g1_12 * f.r_x[k] + c.ch.g2_12 * f.r_y[k] + h12 * f.n[k];
        d.r_y[k] = c.ch.g1_22 * f.r_x[k] + c.ch.g2_22 * f.r_y[k] + h22 * f.n[k];
        d.n[k] = ((-h12 * c.v.g + h22 * c.v.f) * f.r_x[k]
            + (h12 * c.v.f - h22 * c.v.e) * f.r_y[k])
            / det;
    }
    d
}

enum StepDir {
    AlongX { iy: usize },
    AlongY { ix: usize },
}

/// One RK4 step of the frame between grid nodes `i` and `i + 1` of the given
/// line, with metric coefficients at the true midpoint and h values
/// interpolated there. Returns the new frame and the pre-renormalization
/// drift of |n|.
fn rk4_step(
    metric: &Metric,
    grid: &SecondFormGrid,
    dir: &StepDir,
    i: usize,
    f0: &Frame,
) -> Result<(Frame, f64)> {
    let (x0, x1, y0, y1, ha, hb, len) = match dir {
        StepDir::AlongX { iy } => {
            let y = grid.ys[*iy];
            let line_a = |k: usize| grid.h11[k][*iy];
            let line_b = |k: usize| grid.h12[k][*iy];
            let len = grid.xs.len();
            (
                grid.xs[i],
                grid.xs[i + 1],
                y,
                y,
                (line_a(i), midpoint(line_a, i, len), line_a(i + 1)),
                (line_b(i), midpoint(line_b, i, len), line_b(i + 1)),
                len,
            )
        }
        StepDir::AlongY { ix } => {
            let x = grid.xs[*ix];
            let line_a = |k: usize| grid.h12[*ix][k];
            let line_b = |k: usize| grid.h22[*ix][k];
            let len = grid.ys.len();
            (
                x,
                x,
                grid.ys[i],
                grid.ys[i + 1],
                (line_a(i), midpoint(line_a, i, len), line_a(i + 1)),
                (line_b(i), midpoint(line_b, i, len), line_b(i + 1)),
                len,
            )
        }
    };
    let _ = len;
    let (mid_x, mid_y) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let c0 = coefficients(metric, x0, y0)?;
    let cm = coefficients(metric, mid_x, mid_y)?;
    let c1 = coefficients(metric, x1, y1)?;
    let (rhs, h): (fn(&Coefficients, f64, f64, &Frame) -> Frame, f64) = match dir {
        StepDir::AlongX { .. } => (frame_rhs_x, x1 - x0),
        StepDir::AlongY { .. } => (frame_rhs_y, y1 - y0),
    };
    let k1 = rhs(&c0, ha.0, hb.0, f0);
    let k2 = rhs(&cm, ha.1, hb.1, &f0.combine(0.5 * h, &k1));
    let k3 = rhs(&cm, ha.1, hb.1, &f0.combine(0.5 * h, &k2));
    let k4 = rhs(&c1, ha.2, hb.2, &f0.combine(h, &k3));
    let mut out = f0.clone();
    for (w, k) in [(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)] {
        out = out.combine(w * h / 6.0, k);
    }
    let n_len = norm(out.n);
    let drift = (n_len - 1.0).abs();
    if n_len < 1e-10 {
        return Err(Error::NonFinite {
            context: "normal collapsed during frame integration".into(),
            t: x1,
        });
    }
    for k in 0..3 {
        out.n[k] /= n_len;
    }
    Ok((out, drift))
}

fn integrate_pass(
    metric: &Metric,
    grid: &SecondFormGrid,
    spine: Orientation,
    base: &Frame,
) -> Result<(Vec<Vec<Frame>>, f64)> {
    let (n_x, n_y) = (grid.xs.len(), grid.ys.len());
    let mut frames = vec![vec![*base; n_y]; n_x];
    let mut drift = 0.0f64;
    match spine {
        Orientation::XTimeLike => {
            for ix in 0..n_x - 1 {
                let (f, d) = rk4_step(metric, grid, &StepDir::AlongX { iy: 0 }, ix, &frames[ix][0])?;
                frames[ix + 1][0] = f;
                drift = drift.max(d);
            }
            for ix in 0..n_x {
                for iy in 0..n_y - 1 {
                    let (f, d) =
                        rk4_step(metric, grid, &StepDir::AlongY { ix }, iy, &frames[ix][iy])?;
                    frames[ix][iy + 1] = f;
                    drift = drift.max(d);
                }
            }
        }
        Orientation::YTimeLike => {
            for iy in 0..n_y - 1 {
                let (f, d) = rk4_step(metric, grid, &StepDir::AlongY { ix: 0 }, iy, &frames[0][iy])?;
                frames[0][iy + 1] = f;
                drift = drift.max(d);
            }
            for iy in 0..n_y {
                for ix in 0..n_x - 1 {
                    let (f, d) =
                        rk4_step(metric, grid, &StepDir::AlongX { iy }, ix, &frames[ix][iy])?;
                    frames[ix + 1][iy] = f;
                    drift = drift.max(d);
                }
            }
        }
    }
    for (ix, row) in frames.iter().enumerate() {
        for (iy, f) in row.iter().enumerate() {
            let area = norm(cross(f.r_x, f.r_y));
            if area < 1e-10 {
                return Err(Error::FrameDegeneration {
                    i: ix,
                    j: iy,
                    norm: area,
                });
            }
        }
    }
    Ok((frames, drift))
}

/// Propagates `base` over the whole grid along the spine-first path order,
/// then repeats the integration in the opposite order and records the frame
/// difference on a subsampled lattice as the path-consistency defect.
pub fn integrate_frame(
    metric: &Metric,
    grid: &SecondFormGrid,
    spine: Orientation,
    base: &Frame,
) -> Result<SurfacePatch> {
    if grid.xs.len() < 2 || grid.ys.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "grid",
            message: "frame integration needs at least a 2x2 grid".into(),
        });
    }
    let v0 = metric.eval_any_curvature(grid.xs[0], grid.ys[0])?;
    let check = [
        (dot(base.r_x, base.r_x), v0.e, "r_x . r_x vs E"),
        (dot(base.r_x, base.r_y), v0.f, "r_x . r_y vs F"),
        (dot(base.r_y, base.r_y), v0.g, "r_y . r_y vs G"),
    ];
    let scale = v0.e.max(v0.g);
    for (got, want, what) in check {
        if (got - want).abs() > 1e-6 * scale {
            return Err(Error::InvalidParameter {
                name: "base",
                message: format!("base frame violates the first form: {what}: {got} vs {want}"),
            });
        }
    }
    if (norm(base.n) - 1.0).abs() > 1e-8
        || dot(base.n, base.r_x).abs() > 1e-6
        || dot(base.n, base.r_y).abs() > 1e-6
    {
        return Err(Error::InvalidParameter {
            name: "base",
            message: "base normal is not unit or not orthogonal to the tangents".into(),
        });
    }

    let (frames, drift_1) = integrate_pass(metric, grid, spine, base)?;
    let opposite = match spine {
        Orientation::XTimeLike => Orientation::YTimeLike,
        Orientation::YTimeLike => Orientation::XTimeLike,
    };
    let (alt, drift_2) = integrate_pass(metric, grid, opposite, base)?;
    let stride_x = (grid.xs.len() / 8).max(1);
    let stride_y = (grid.ys.len() / 8).max(1);
    let mut defect_samples = Vec::new();
    let mut max_defect = 0.0f64;
    let mut ix = 0;
    while ix < grid.xs.len() {
        let mut iy = 0;
        while iy < grid.ys.len() {
            let d = frames[ix][iy].max_component_distance(&alt[ix][iy]);
            max_defect = max_defect.max(d);
            defect_samples.push((ix, iy, d));
            iy += stride_y;
        }
        ix += stride_x;
    }
    Ok(SurfacePatch {
        xs: grid.xs.clone(),
        ys: grid.ys.clone(),
        spine,
        frames,
        positions: None,
        normal_drift: drift_1.max(drift_2),
        defect_samples,
        max_defect,
    })
}

/// Quadrature of the tangent fields into positions along the same path
/// order used for the frames: trapezoid along the spine, then along each
/// transverse line.
pub fn integrate_position(patch: &mut SurfacePatch, base: V3) {
    let (n_x, n_y) = (patch.xs.len(), patch.ys.len());
    let mut r = vec![vec![[0.0; 3]; n_y]; n_x];
    r[0][0] = base;
    let step_x = |r_prev: V3, fa: &Frame, fb: &Frame, h: f64| {
        axpy(0.5 * h, fa.r_x, axpy(0.5 * h, fb.r_x, r_prev))
    };
    let step_y = |r_prev: V3, fa: &Frame, fb: &Frame, h: f64| {
        axpy(0.5 * h, fa.r_y, axpy(0.5 * h, fb.r_y, r_prev))
    };
    match patch.spine {
        Orientation::XTimeLike => {
            for ix in 0..n_x - 1 {
                let h = patch.xs[ix + 1] - patch.xs[ix];
                r[ix + 1][0] = step_x(r[ix][0], &patch.frames[ix][0], &patch.frames[ix + 1][0], h);
            }
            for ix in 0..n_x {
                for iy in 0..n_y - 1 {
                    let h = patch.ys[iy + 1] - patch.ys[iy];
                    r[ix][iy + 1] =
                        step_y(r[ix][iy], &patch.frames[ix][iy], &patch.frames[ix][iy + 1], h);
                }
            }
        }
        Orientation::YTimeLike => {
            for iy in 0..n_y - 1 {
                let h = patch.ys[iy + 1] - patch.ys[iy];
                r[0][iy + 1] = step_y(r[0][iy], &patch.frames[0][iy], &patch.frames[0][iy + 1], h);
            }
            for iy in 0..n_y {
                for ix in 0..n_x - 1 {
                    let h = patch.xs[ix + 1] - patch.xs[ix];
                    r[ix + 1][iy] =
                        step_x(r[ix][iy], &patch.frames[ix][iy], &patch.frames[ix + 1][iy], h);
                }
            }
        }
    }
    patch.positions = Some(r);
}

/// Per-node and aggregate mismatch between centered differences of the
/// positions and the metric:
/// (|Δr_x·Δr_x − E| + 2|Δr_x·Δr_y − F| + |Δr_y·Δr_y − G|)/max(E, G),
/// over interior nodes.
#[derive(Debug, Clone)]
pub struct FirstFormReport {
    pub max: f64,
    pub l2: f64,
    /// NaN on the boundary ring where no centered difference exists.
    pub per_node: Vec<Vec<f64>>,
}

pub fn first_form_error(patch: &SurfacePatch, metric: &Metric) -> Result<FirstFormReport> {
    let r = patch.positions.as_ref().ok_or(Error::InvalidParameter {
        name: "patch",
        message: "positions not integrated yet".into(),
    })?;
    let (n_x, n_y) = (patch.xs.len(), patch.ys.len());
    let mut per_node = vec![vec![f64::NAN; n_y]; n_x];
    let mut max = 0.0f64;
    let mut sq = 0.0;
    let mut count = 0usize;
    for ix in 1..n_x - 1 {
        let dx = patch.xs[ix + 1] - patch.xs[ix - 1];
        for iy in 1..n_y - 1 {
            let dy = patch.ys[iy + 1] - patch.ys[iy - 1];
            let rx = [
                (r[ix + 1][iy][0] - r[ix - 1][iy][0]) / dx,
                (r[ix + 1][iy][1] - r[ix - 1][iy][1]) / dx,
                (r[ix + 1][iy][2] - r[ix - 1][iy][2]) / dx,
            ];
            let ry = [
                (r[ix][iy + 1][0] - r[ix][iy - 1][0]) / dy,
                (r[ix][iy + 1][1] - r[ix][iy - 1][1]) / dy,
                (r[ix][iy + 1][2] - r[ix][iy - 1][2]) / dy,
            ];
            let v = metric.eval_any_curvature(patch.xs[ix], patch.ys[iy])?;
            let err = ((dot(rx, rx) - v.e).abs()
                + 2.0 * (dot(rx, ry) - v.f).abs()
                + (dot(ry, ry) - v.g).abs())
                / v.e.max(v.g);
            per_node[ix][iy] = err;
            max = max.max(err);
            sq += err * err;
            count += 1;
        }
    }
    Ok(FirstFormReport {
        max,
        l2: (sq / count.max(1) as f64).sqrt(),
        per_node,
    })
}

/// Discrete Gauss curvature at interior vertices by angle defect over the
/// same triangulation the mesh export uses: 2π minus the sum of the six
/// incident triangle angles, divided by a third of the incident area.
/// Boundary entries are NaN.
pub fn angle_defect_curvature(patch: &SurfacePatch) -> Result<Vec<Vec<f64>>> {
    let r = patch.positions.as_ref().ok_or(Error::InvalidParameter {
        name: "patch",
        message: "positions not integrated yet".into(),
    })?;
    let (n_x, n_y) = (patch.xs.len(), patch.ys.len());
    let mut out = vec![vec![f64::NAN; n_y]; n_x];
    let angle = |at: V3, p: V3, q: V3| -> f64 {
        let u = [p[0] - at[0], p[1] - at[1], p[2] - at[2]];
        let v = [q[0] - at[0], q[1] - at[1], q[2] - at[2]];
        (dot(u, v) / (norm(u) * norm(v))).clamp(-1.0, 1.0).acos()
    };
    let area = |a: V3, b: V3, c: V3| -> f64 {
        0.5 * norm(cross(
            [b[0] - a[0], b[1] - a[1], b[2] - a[2]],
            [c[0] - a[0], c[1] - a[1], c[2] - a[2]],
        ))
    };
    for ix in 1..n_x - 1 {
        for iy in 1..n_y - 1 {
            let v = r[ix][iy];
            // Triangles around v with the quad (p,q) split into
            // (a,b,c) = ((p,q), (p+1,q), (p+1,q+1)) and (a,c,d).
            let tris: [(V3, V3); 6] = [
                // quad (ix-1, iy-1): v is c in both triangles
                (r[ix - 1][iy - 1], r[ix][iy - 1]),
                (r[ix - 1][iy - 1], r[ix - 1][iy]),
                // quad (ix, iy-1): v is d in (a, c, d)
                (r[ix][iy - 1], r[ix + 1][iy]),
                // quad (ix, iy): v is a in both triangles
                (r[ix + 1][iy], r[ix + 1][iy + 1]),
                (r[ix + 1][iy + 1], r[ix][iy + 1]),
                // quad (ix-1, iy): v is b in (a, b, c)
                (r[ix - 1][iy], r[ix][iy + 1]),
            ];
            let mut defect = 2.0 * std::f64::consts::PI;
            let mut a_sum = 0.0;
            for (p, q) in tris {
                defect -= angle(v, p, q);
                a_sum += area(v, p, q);
            }
            out[ix][iy] = defect / (a_sum / 3.0);
        }
    }
    Ok(out)
}

/// Renders the patch as Wavefront OBJ text: vertices and per-vertex normals
/// in row-major (x outer, y inner) order, quads split into two triangles.
/// Fails without emitting anything if any position or normal is not finite.
pub fn mesh_to_obj(patch: &SurfacePatch) -> Result<String> {
    let r = patch.positions.as_ref().ok_or(Error::InvalidParameter {
        name: "patch",
        message: "positions not integrated yet".into(),
    })?;
    let (n_x, n_y) = (patch.xs.len(), patch.ys.len());
    for ix in 0..n_x {
        for iy in 0..n_y {
            let p = r[ix][iy];
            let n = patch.frames[ix][iy].n;
            if !p.iter().chain(n.iter()).all(|v| v.is_finite()) {
                return Err(Error::NonFinite {
                    context: format!("mesh vertex ({ix}, {iy})"),
                    t: patch.xs[ix],
                });
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!("# surface patch {n_x}x{n_y}\n"));
    for row in r {
        for p in row {
            out.push_str(&format!("v {} {} {}\n", p[0], p[1], p[2]));
        }
    }
    for row in &patch.frames {
        for f in row {
            out.push_str(&format!("vn {} {} {}\n", f.n[0], f.n[1], f.n[2]));
        }
    }
    let vid = |ix: usize, iy: usize| ix * n_y + iy + 1;
    for ix in 0..n_x - 1 {
        for iy in 0..n_y - 1 {
            let (a, b, c, d) = (
                vid(ix, iy),
                vid(ix + 1, iy),
                vid(ix + 1, iy + 1),
                vid(ix, iy + 1),
            );
            out.push_str(&format!("f {a}//{a} {b}//{b} {c}//{c}\n"));
            out.push_str(&format!("f {a}//{a} {c}//{c} {d}//{d}\n"));
        }
    }
    Ok(out)
}

/// Writes [`mesh_to_obj`] output to a file.
pub fn export_mesh(patch: &SurfacePatch, path: &std::path::Path) -> Result<()> {
    let text = mesh_to_obj(patch)?;
    std::fs::write(path, text)?;
    Ok(())
}
