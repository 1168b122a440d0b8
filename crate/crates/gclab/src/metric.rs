//! Metric families with strictly negative Gauss curvature, their Christoffel
//! symbols, the Brioschi curvature determinant, and the γ-rescaled connection.
//!
//! A metric here is the first fundamental form I = E dx² + 2F dxdy + G dy².
//! Every catalog family is isothermal and one-variable (E = G = E(x), F = 0);
//! the Christoffel and Brioschi routines accept general (E, F, G) values.
//! The rescaling factor is γ = √(−κ), which turns the Monge-Ampère
//! constraint LN − M² = κ into L̃Ñ − M̃² = −1 for (L̃, M̃, Ñ) = (L, M, N)/γ.

use crate::error::{Error, Result};
use crate::grid::{mollify_periodic, CubicSpline};

/// Relative tolerance for agreement between a family's closed-form κ and the
/// Brioschi determinant when analytic derivatives are available.
pub const KAPPA_CONSISTENCY_REL_TOL: f64 = 1e-6;

/// Looser variant of [`KAPPA_CONSISTENCY_REL_TOL`] for tabulated metrics whose
/// derivatives come from finite differences.
pub const KAPPA_CONSISTENCY_REL_TOL_FD: f64 = 1e-4;

/// All metric coefficients and derivatives at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct MetricValues {
    pub x: f64,
    pub y: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub e_x: f64,
    pub e_y: f64,
    pub f_x: f64,
    pub f_y: f64,
    pub g_x: f64,
    pub g_y: f64,
    pub e_xx: f64,
    pub e_xy: f64,
    pub e_yy: f64,
    pub f_xx: f64,
    pub f_xy: f64,
    pub f_yy: f64,
    pub g_xx: f64,
    pub g_xy: f64,
    pub g_yy: f64,
    /// Declared Gauss curvature of the family (negative on the admissible domain).
    pub kappa: f64,
    pub kappa_x: f64,
    pub kappa_y: f64,
    /// γ = √(−κ); NaN where κ ≥ 0 (such points never pass [`Metric::eval`]).
    pub gamma: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
}

impl MetricValues {
    /// Determinant EG − F² of the first fundamental form.
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

/// The six Christoffel symbols of the metric together with their γ-rescaled
/// "tilde" variants. Symmetry Γ^(k)_12 = Γ^(k)_21 is built in by storing the
/// mixed symbol once.
#[derive(Debug, Clone, Copy)]
pub struct ChristoffelSet {
    pub g1_11: f64,
    pub g1_12: f64,
    pub g1_22: f64,
    pub g2_11: f64,
    pub g2_12: f64,
    pub g2_22: f64,
    pub t1_11: f64,
    pub t1_12: f64,
    pub t1_22: f64,
    pub t2_11: f64,
    pub t2_12: f64,
    pub t2_22: f64,
}

impl ChristoffelSet {
    /// The set with every symbol zero (constant metric, constant γ).
    pub fn zero() -> Self {
        ChristoffelSet {
            g1_11: 0.0,
            g1_12: 0.0,
            g1_22: 0.0,
            g2_11: 0.0,
            g2_12: 0.0,
            g2_22: 0.0,
            t1_11: 0.0,
            t1_12: 0.0,
            t1_22: 0.0,
            t2_11: 0.0,
            t2_12: 0.0,
            t2_22: 0.0,
        }
    }
}

/// Classical Christoffel symbols from metric coefficients and first
/// derivatives, plus the tilde variants that absorb γ-derivative corrections.
pub fn christoffel(v: &MetricValues) -> Result<ChristoffelSet> {
    let det = v.det();
    if det <= 0.0 {
        return Err(Error::DegenerateMetric {
            x: v.x,
            y: v.y,
            det,
        });
    }
    let d2 = 2.0 * det;
    let g1_11 = (v.g * v.e_x - 2.0 * v.f * v.f_x + v.f * v.e_y) / d2;
    let g1_12 = (v.g * v.e_y - v.f * v.g_x) / d2;
    let g1_22 = (2.0 * v.g * v.f_y - v.g * v.g_x - v.f * v.g_y) / d2;
    let g2_11 = (2.0 * v.e * v.f_x - v.e * v.e_y - v.f * v.e_x) / d2;
    let g2_12 = (v.e * v.g_x - v.f * v.e_y) / d2;
    let g2_22 = (v.e * v.g_y - 2.0 * v.f * v.f_y + v.f * v.g_x) / d2;
    let (rx, ry) = (v.gamma_x / v.gamma, v.gamma_y / v.gamma);
    Ok(ChristoffelSet {
        g1_11,
        g1_12,
        g1_22,
        g2_11,
        g2_12,
        g2_22,
        t1_11: g1_11 + rx,
        t1_12: g1_12 + 0.5 * ry,
        t1_22: g1_22,
        t2_11: g2_11,
        t2_12: g2_12 + 0.5 * rx,
        t2_22: g2_22 + ry,
    })
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Gauss curvature from the Brioschi two-determinant formula, using only the
/// metric coefficients and their first and second derivatives.
pub fn brioschi_curvature(v: &MetricValues) -> Result<f64> {
    let det = v.det();
    if det <= 0.0 {
        return Err(Error::DegenerateMetric {
            x: v.x,
            y: v.y,
            det,
        });
    }
    let m1 = [
        [
            -0.5 * v.e_yy + v.f_xy - 0.5 * v.g_xx,
            0.5 * v.e_x,
            v.f_x - 0.5 * v.e_y,
        ],
        [v.f_y - 0.5 * v.g_x, v.e, v.f],
        [0.5 * v.g_y, v.f, v.g],
    ];
    let m2 = [
        [0.0, 0.5 * v.e_y, 0.5 * v.g_x],
        [0.5 * v.e_y, v.e, v.f],
        [0.5 * v.g_x, v.f, v.g],
    ];
    Ok((det3(m1) - det3(m2)) / (det * det))
}

#[derive(Debug, Clone)]
enum Family {
    Catenoid {
        c: f64,
        beta: f64,
        kappa0: f64,
    },
    Helicoid {
        lambda: f64,
    },
    Torus {
        a: f64,
        b: f64,
        /// φ(π) = πb/√(a²−b²); φ advances by twice this per revolution of Y.
        half_period: f64,
    },
    Custom {
        spline: CubicSpline,
        /// Finite-difference step, 10⁻⁴ of the table span.
        h: f64,
        x_lo: f64,
        x_hi: f64,
    },
    Periodic {
        e0: f64,
        kappa0: f64,
        /// Exponent ratio β²/(β²−1) in the curvature transport relation.
        m: f64,
        period: f64,
        a: CubicSpline,
        big_a: CubicSpline,
    },
}

/// An immutable metric: a family tag plus parameters, with evaluators for all
/// coefficients, curvature, and γ. Safe to share across threads.
#[derive(Debug, Clone)]
pub struct Metric {
    family: Family,
}

fn values_isothermal(
    x: f64,
    y: f64,
    e: f64,
    e_x: f64,
    e_xx: f64,
    kappa: f64,
    kappa_x: f64,
) -> MetricValues {
    let (gamma, gamma_x) = if kappa < 0.0 {
        let g = (-kappa).sqrt();
        (g, -kappa_x / (2.0 * g))
    } else {
        (f64::NAN, f64::NAN)
    };
    MetricValues {
        x,
        y,
        e,
        f: 0.0,
        g: e,
        e_x,
        e_y: 0.0,
        f_x: 0.0,
        f_y: 0.0,
        g_x: e_x,
        g_y: 0.0,
        e_xx,
        e_xy: 0.0,
        e_yy: 0.0,
        f_xx: 0.0,
        f_xy: 0.0,
        f_yy: 0.0,
        g_xx: e_xx,
        g_xy: 0.0,
        g_yy: 0.0,
        kappa,
        kappa_x,
        kappa_y: 0.0,
        gamma,
        gamma_x,
        gamma_y: 0.0,
    }
}

impl Metric {
    /// Catenoid-type metric E(x) = cosh(cx)^{2/(β²−1)} with curvature
    /// κ(x) = −κ₀ E(x)^{−β²}. Consistency with the Brioschi determinant pins
    /// κ₀ = c²/(β²−1); a `kappa0` outside the default tolerance of that value
    /// is rejected.
    pub fn catenoid(c: f64, beta: f64, kappa0: f64) -> Result<Self> {
        Self::catenoid_with_tolerance(c, beta, kappa0, KAPPA_CONSISTENCY_REL_TOL)
    }

    pub fn catenoid_with_tolerance(c: f64, beta: f64, kappa0: f64, tol: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c",
                message: format!("must be finite and nonzero, got {c}"),
            });
        }
        if !(beta > 1.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("must exceed 1, got {beta}"),
            });
        }
        if !(kappa0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa0",
                message: format!("must be positive, got {kappa0}"),
            });
        }
        let forced = c * c / (beta * beta - 1.0);
        if (kappa0 - forced).abs() > tol * forced.abs() {
            return Err(Error::CurvatureMismatch {
                x: 0.0,
                declared: -kappa0,
                computed: -forced,
                tol,
            });
        }
        let metric = Metric {
            family: Family::Catenoid { c, beta, kappa0 },
        };
        metric.validate_consistency(&sample_range(-2.0, 2.0, 41), tol)?;
        Ok(metric)
    }

    /// Helicoid in isothermal coordinates:
    /// E(x) = ½λ² + ¼(λ⁴e^{2x} + e^{−2x}), κ = −λ²/E².
    pub fn helicoid(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                message: format!("must be positive, got {lambda}"),
            });
        }
        let metric = Metric {
            family: Family::Helicoid { lambda },
        };
        metric.validate_consistency(&sample_range(-2.0, 2.0, 41), KAPPA_CONSISTENCY_REL_TOL)?;
        Ok(metric)
    }

    /// Torus band in isothermal coordinates: E = (a + b cos Y)² with
    /// Y = φ⁻¹(x) and κ = cos Y / (b (a + b cos Y)). Only the band with
    /// cos Y < 0 has negative curvature; evaluation elsewhere reports a
    /// curvature-sign error.
    pub fn torus(a: f64, b: f64) -> Result<Self> {
        if !(a > b && b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a,b",
                message: format!("need a > b > 0, got a = {a}, b = {b}"),
            });
        }
        let half_period = std::f64::consts::PI * b / (a * a - b * b).sqrt();
        let metric = Metric {
            family: Family::Torus { a, b, half_period },
        };
        let band: Vec<f64> = sample_range(0.55 * std::f64::consts::PI, 1.45 * std::f64::consts::PI, 41)
            .iter()
            .map(|&yy| metric.torus_phi(yy).unwrap())
            .collect();
        metric.validate_consistency(&band, KAPPA_CONSISTENCY_REL_TOL)?;
        Ok(metric)
    }

    /// Tabulated one-variable metric: strictly increasing sample points `xs`
    /// with values `es` of E(x). A cubic spline interpolates; derivatives use
    /// 4th-order centered differences with step 10⁻⁴ of the table span.
    pub fn custom_from_table(xs: Vec<f64>, es: Vec<f64>) -> Result<Self> {
        if xs.len() < 8 {
            return Err(Error::InvalidParameter {
                name: "xs",
                message: format!("need at least 8 samples, got {}", xs.len()),
            });
        }
        for (i, &e) in es.iter().enumerate() {
            if !(e > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "es",
                    message: format!("E must be positive everywhere, got {e} at row {i}"),
                });
            }
        }
        let x_lo = xs[0];
        let x_hi = *xs.last().unwrap();
        let h = 1e-4 * (x_hi - x_lo);
        let spline = CubicSpline::new(xs, es).ok_or_else(|| Error::InvalidParameter {
            name: "xs",
            message: "sample points must be strictly increasing".into(),
        })?;
        let metric = Metric {
            family: Family::Custom {
                spline,
                h,
                // Shrink the domain so finite-difference stencils stay inside
                // the table.
                x_lo: x_lo + 4.0 * h,
                x_hi: x_hi - 4.0 * h,
            },
        };
        let (lo, hi) = metric.domain();
        let interior = sample_range(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 21);
        metric.validate_consistency(&interior, KAPPA_CONSISTENCY_REL_TOL_FD)?;
        Ok(metric)
    }

    /// Reads a two-column comma-separated table with header `x,E`.
    pub fn custom_from_csv(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("").trim();
        if header != "x,E" {
            return Err(Error::Parse {
                what: path.display().to_string(),
                message: format!("expected header `x,E`, got `{header}`"),
            });
        }
        let mut xs = Vec::new();
        let mut es = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let parse = |field: Option<&str>| -> Result<f64> {
                field
                    .map(str::trim)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse {
                        what: path.display().to_string(),
                        message: format!("bad number on data line {}", lineno + 1),
                    })
            };
            xs.push(parse(cols.next())?);
            es.push(parse(cols.next())?);
        }
        Self::custom_from_table(xs, es)
    }

    /// Periodicizes a one-variable metric: a(x) = E′/E is truncated to
    /// [−P/4, P/4], odd-extended about ±P/4 to a zero-mean period-P function,
    /// mollified with a bump of width P/20, and re-integrated so that
    /// E^P(0) = E(0) and κ^P′/κ^P = −β²/(β²−1)·a^P with κ^P(0) = κ(0).
    ///
    /// The declared κ^P is transported by that relation rather than recomputed
    /// from E^P, so away from the untouched core interval the Brioschi
    /// determinant of E^P and the declared κ^P part company; the march
    /// consumes the declared pair.
    pub fn periodicize(&self, period: f64, beta: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidParameter {
                name: "period",
                message: format!("must be positive, got {period}"),
            });
        }
        if !(beta > 1.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("must exceed 1, got {beta}"),
            });
        }
        self.require_isothermal()?;
        let (lo, hi) = self.domain();
        if lo > -0.25 * period || hi < 0.25 * period {
            return Err(Error::StructuralForm {
                reason: format!(
                    "metric domain [{lo}, {hi}] does not cover the core interval [-P/4, P/4]"
                ),
            });
        }
        let n = 4096usize;
        let dx = period / n as f64;
        // Samples of a(x) = E'/E on [-P/2, P/2), odd-extended about +-P/4.
        let mut a = vec![0.0; n];
        for (j, slot) in a.iter_mut().enumerate() {
            let x = -0.5 * period + j as f64 * dx;
            let core = if x > 0.25 * period {
                0.5 * period - x
            } else if x < -0.25 * period {
                -0.5 * period - x
            } else {
                x
            };
            let sign = if x.abs() > 0.25 * period { -1.0 } else { 1.0 };
            let v = self.eval(core, 0.0)?;
            *slot = sign * v.e_x / v.e;
        }
        let a = mollify_periodic(&a, dx, period / 20.0);
        let mean = a.iter().sum::<f64>() * dx / period;
        if mean.abs() > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "period",
                message: format!("periodicized a(x) failed the zero-mean check: mean = {mean}"),
            });
        }
        // Cumulative integral A(x) with A(0) = 0, by trapezoid from the left
        // edge shifted so the node at x = 0 is exact.
        let mut big = vec![0.0; n + 1];
        for j in 0..n {
            let next = a[(j + 1) % n];
            big[j + 1] = big[j] + 0.5 * dx * (a[j] + next);
        }
        let at_zero = big[n / 2];
        let mut xs = Vec::with_capacity(n + 1);
        let mut a_knots = Vec::with_capacity(n + 1);
        let mut big_knots = Vec::with_capacity(n + 1);
        for j in 0..=n {
            xs.push(-0.5 * period + j as f64 * dx);
            a_knots.push(a[j % n]);
            big_knots.push(big[j] - at_zero);
        }
        let v0 = self.eval(0.0, 0.0)?;
        let spline_a = CubicSpline::new(xs.clone(), a_knots).unwrap();
        let spline_big = CubicSpline::new(xs, big_knots).unwrap();
        Ok(Metric {
            family: Family::Periodic {
                e0: v0.e,
                kappa0: v0.kappa,
                m: beta * beta / (beta * beta - 1.0),
                period,
                a: spline_a,
                big_a: spline_big,
            },
        })
    }

    /// Family tag for manifests and catalog listings.
    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Catenoid { .. } => "catenoid",
            Family::Helicoid { .. } => "helicoid-isothermal",
            Family::Torus { .. } => "torus-isothermal",
            Family::Custom { .. } => "custom",
            Family::Periodic { .. } => "periodicized",
        }
    }

    /// Named parameters for manifests.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.family {
            Family::Catenoid { c, beta, kappa0 } => {
                vec![("c", *c), ("beta", *beta), ("kappa0", *kappa0)]
            }
            Family::Helicoid { lambda } => vec![("lambda", *lambda)],
            Family::Torus { a, b, .. } => vec![("a", *a), ("b", *b)],
            Family::Custom { x_lo, x_hi, .. } => vec![("x_lo", *x_lo), ("x_hi", *x_hi)],
            Family::Periodic { m, period, .. } => vec![("m", *m), ("period", *period)],
        }
    }

    /// Admissible x-range. Unbounded directions are ±∞.
    pub fn domain(&self) -> (f64, f64) {
        match &self.family {
            Family::Custom { x_lo, x_hi, .. } => (*x_lo, *x_hi),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// True for every catalog family: E = G depends on x alone and F = 0.
    pub fn is_isothermal_one_variable(&self) -> bool {
        true
    }

    fn require_isothermal(&self) -> Result<()> {
        if self.is_isothermal_one_variable() {
            Ok(())
        } else {
            Err(Error::StructuralForm {
                reason: "requires E = G = E(x), F = 0".into(),
            })
        }
    }

    /// Max |E(x+P) − E(x)| over a sample of the fundamental domain; zero (to
    /// rounding) for periodicized metrics.
    pub fn periodicity_defect(&self, period: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &x in &sample_range(-0.5 * period, 0.5 * period, 64) {
            let v0 = self.eval_raw(x, 0.0)?;
            let v1 = self.eval_raw(x + period, 0.0)?;
            worst = worst.max((v1.e - v0.e).abs());
        }
        Ok(worst)
    }

    /// All coefficients at (x, y), with strict κ < 0 enforcement.
    pub fn eval(&self, x: f64, y: f64) -> Result<MetricValues> {
        let v = self.eval_raw(x, y)?;
        if !(v.kappa < 0.0) {
            return Err(Error::NonNegativeCurvature {
                x,
                y,
                kappa: v.kappa,
            });
        }
        Ok(v)
    }

    /// Coefficients at (x, y) without the curvature-sign gate, for frame
    /// integration and first-form checks where κ never enters.
    pub fn eval_any_curvature(&self, x: f64, y: f64) -> Result<MetricValues> {
        self.eval_raw(x, y)
    }

    /// Coefficients without the curvature-sign gate (used by the Brioschi
    /// evaluator, which is defined for either sign).
    fn eval_raw(&self, x: f64, y: f64) -> Result<MetricValues> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::DomainViolation {
                x,
                y,
                reason: format!("x outside [{lo}, {hi}]"),
            });
        }
        match &self.family {
            Family::Catenoid { c, beta, kappa0 } => {
                let eta = 2.0 / (beta * beta - 1.0);
                let t = (c * x).tanh();
                let e = (c * x).cosh().powf(eta);
                let e_x = eta * c * t * e;
                let sech2 = 1.0 - t * t;
                let e_xx = eta * c * c * (sech2 + eta * t * t) * e;
                let kappa = -kappa0 * e.powf(-beta * beta);
                let kappa_x = -beta * beta * (e_x / e) * kappa;
                Ok(values_isothermal(x, y, e, e_x, e_xx, kappa, kappa_x))
            }
            Family::Helicoid { lambda } => {
                let l2 = lambda * lambda;
                let l4 = l2 * l2;
                let e = 0.5 * l2 + 0.25 * (l4 * (2.0 * x).exp() + (-2.0 * x).exp());
                let e_x = 0.5 * (l4 * (2.0 * x).exp() - (-2.0 * x).exp());
                let e_xx = 4.0 * e - 2.0 * l2;
                let kappa = -l2 / (e * e);
                let kappa_x = 2.0 * l2 * e_x / (e * e * e);
                Ok(values_isothermal(x, y, e, e_x, e_xx, kappa, kappa_x))
            }
            Family::Torus { a, b, .. } => {
                let yy = self.torus_phi_inverse(x)?;
                let (sy, cy) = yy.sin_cos();
                let w = a + b * cy;
                let e = w * w;
                let e_x = -2.0 * sy * w * w;
                let e_xx = (-2.0 * cy * w * w + 4.0 * b * w * sy * sy) * (w / b);
                let kappa = cy / (b * w);
                let kappa_x = -a * sy / (b * b * w);
                Ok(values_isothermal(x, y, e, e_x, e_xx, kappa, kappa_x))
            }
            Family::Custom { spline, h, .. } => {
                let table = |z: f64| -> (f64, f64, f64) {
                    let s = |u: f64| spline.eval(u);
                    let e = s(z);
                    let e_x = (-s(z + 2.0 * h) + 8.0 * s(z + h) - 8.0 * s(z - h)
                        + s(z - 2.0 * h))
                        / (12.0 * h);
                    let e_xx = (-s(z + 2.0 * h) + 16.0 * s(z + h) - 30.0 * e
                        + 16.0 * s(z - h)
                        - s(z - 2.0 * h))
                        / (12.0 * h * h);
                    (e, e_x, e_xx)
                };
                let kap = |z: f64| -> f64 {
                    let (e, e_x, e_xx) = table(z);
                    -(e_xx * e - e_x * e_x) / (2.0 * e * e * e)
                };
                let (e, e_x, e_xx) = table(x);
                let kappa = kap(x);
                let kappa_x = (-kap(x + 2.0 * h) + 8.0 * kap(x + h) - 8.0 * kap(x - h)
                    + kap(x - 2.0 * h))
                    / (12.0 * h);
                Ok(values_isothermal(x, y, e, e_x, e_xx, kappa, kappa_x))
            }
            Family::Periodic {
                e0,
                kappa0,
                m,
                period,
                a,
                big_a,
            } => {
                let w = (x + 0.5 * period).rem_euclid(*period) - 0.5 * period;
                let aw = a.eval(w);
                let aw_x = a.deriv(w);
                let big = big_a.eval(w);
                let e = e0 * big.exp();
                let e_x = aw * e;
                let e_xx = (aw_x + aw * aw) * e;
                let kappa = kappa0 * (-m * big).exp();
                let kappa_x = -m * aw * kappa;
                Ok(values_isothermal(x, y, e, e_x, e_xx, kappa, kappa_x))
            }
        }
    }

    /// Brioschi curvature at (x, y), computed from the coefficient
    /// derivatives rather than the declared κ.
    pub fn gauss_curvature_brioschi(&self, x: f64, y: f64) -> Result<f64> {
        let v = self.eval_raw(x, y)?;
        brioschi_curvature(&v)
    }

    /// φ(Y) = ∫₀^Y b/(a + b cos t) dt for the torus family, continued across
    /// branch cuts so it is monotone on all of Y.
    pub fn torus_phi(&self, yy: f64) -> Result<f64> {
        let Family::Torus { a, b, half_period } = &self.family else {
            return Err(Error::StructuralForm {
                reason: "torus_phi requires the torus family".into(),
            });
        };
        let two_pi = 2.0 * std::f64::consts::PI;
        let k = ((yy + std::f64::consts::PI) / two_pi).floor();
        let y0 = yy - two_pi * k;
        let s = (a * a - b * b).sqrt();
        let r = ((a - b) / (a + b)).sqrt();
        let base = if (y0 - std::f64::consts::PI).abs() < 1e-15 {
            *half_period
        } else {
            (2.0 * b / s) * (r * (0.5 * y0).tan()).atan()
        };
        Ok(base + 2.0 * half_period * k)
    }

    /// Y = φ⁻¹(x) by bisection to 10⁻¹² followed by one Newton polish.
    pub fn torus_phi_inverse(&self, x: f64) -> Result<f64> {
        let Family::Torus { a, b, half_period } = &self.family else {
            return Err(Error::StructuralForm {
                reason: "torus_phi_inverse requires the torus family".into(),
            });
        };
        let k = ((x + half_period) / (2.0 * half_period)).floor();
        let x0 = x - 2.0 * half_period * k;
        let mut lo = -std::f64::consts::PI;
        let mut hi = std::f64::consts::PI;
        // Work in the base branch; the 2πk shift is restored at the end.
        let g = |y: f64| {
            let s = (a * a - b * b).sqrt();
            let r = ((a - b) / (a + b)).sqrt();
            (2.0 * b / s) * (r * (0.5 * y).tan()).atan() - x0
        };
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 {
                break;
            }
        }
        let mut y = 0.5 * (lo + hi);
        // One Newton step with φ'(Y) = b/(a + b cos Y).
        let phi_prime = b / (a + b * y.cos());
        y -= g(y) / phi_prime;
        Ok(y + 2.0 * std::f64::consts::PI * k)
    }

    fn validate_consistency(&self, xs: &[f64], tol: f64) -> Result<()> {
        for &x in xs {
            let v = self.eval_raw(x, 0.0)?;
            let computed = brioschi_curvature(&v)?;
            let scale = v.kappa.abs().max(1e-300);
            if ((computed - v.kappa) / scale).abs() > tol {
                return Err(Error::CurvatureMismatch {
                    x,
                    declared: v.kappa,
                    computed,
                    tol,
                });
            }
        }
        Ok(())
    }
}

/// Report from the structural checks relating κ′/κ and E′/E.
#[derive(Debug, Clone)]
pub struct BetaConditionReport {
    pub beta: f64,
    /// Max |(1/β²)·κ′/κ + E′/E| over the sample grid.
    pub max_residual_ode1: f64,
    /// Max |((β²−1)/β²)·κ′/κ + E′/E| over the sample grid.
    pub max_residual_ode2: f64,
    pub satisfied_ode1: bool,
    pub satisfied_ode2: bool,
    /// (x, (κ′/κ)/(E′/E)) at sample points where E′/E is well away from zero.
    pub ratio: Vec<(f64, f64)>,
}

impl BetaConditionReport {
    /// (max − min)/max |ratio| over the profile; large values mean the ratio
    /// is far from constant and no β can satisfy the structural relation.
    pub fn ratio_relative_variation(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(_, r) in &self.ratio {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !hi.is_finite() || hi.abs().max(lo.abs()) == 0.0 {
            return 0.0;
        }
        (hi - lo).abs() / hi.abs().max(lo.abs())
    }
}

/// Evaluates the two structural residuals tying κ′/κ to E′/E over `xs`.
pub fn check_beta_condition(
    metric: &Metric,
    beta: f64,
    xs: &[f64],
    tol: f64,
) -> Result<BetaConditionReport> {
    metric.require_isothermal()?;
    let b2 = beta * beta;
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    let mut ratio = Vec::new();
    for &x in xs {
        let v = metric.eval(x, 0.0)?;
        let klog = v.kappa_x / v.kappa;
        let elog = v.e_x / v.e;
        r1 = r1.max((klog / b2 + elog).abs());
        r2 = r2.max((klog * (b2 - 1.0) / b2 + elog).abs());
        if elog.abs() > 1e-8 {
            ratio.push((x, klog / elog));
        }
    }
    Ok(BetaConditionReport {
        beta,
        max_residual_ode1: r1,
        max_residual_ode2: r2,
        satisfied_ode1: r1 < tol,
        satisfied_ode2: r2 < tol,
        ratio,
    })
}

fn sample_range(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
