//! Small finite-difference and quadrature helpers shared by the solver,
//! verification, and reconstruction modules.
//!
//! All routines operate on plain slices. Periodic variants treat the slice
//! as one full period of a uniformly sampled function (the right endpoint
//! is *not* duplicated).

/// Second-order central first derivative on a periodic grid.
pub fn ddx_periodic(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        out[i] = (f[ip] - f[im]) / (2.0 * dx);
    }
    out
}

/// Second-order central second derivative on a periodic grid.
pub fn d2dx_periodic(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        out[i] = (f[ip] - 2.0 * f[i] + f[im]) / (dx * dx);
    }
    out
}

/// First-order upwind derivative for an advection term `du/dt = -c du/dx`:
/// backward difference where `c > 0`, forward difference where `c < 0`.
pub fn upwind_periodic(f: &[f64], c: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        out[i] = if c[i] > 0.0 {
            (f[i] - f[im]) / dx
        } else {
            (f[ip] - f[i]) / dx
        };
    }
    out
}

/// Integral of one period of a uniformly sampled periodic function.
pub fn integral_periodic(f: &[f64], dx: f64) -> f64 {
    f.iter().sum::<f64>() * dx
}

/// Trapezoid rule on a non-periodic uniformly sampled function.
pub fn trapezoid(f: &[f64], dx: f64) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let interior: f64 = f[1..f.len() - 1].iter().sum();
    (interior + 0.5 * (f[0] + f[f.len() - 1])) * dx
}

/// Smooth compactly supported bump, `exp(-1/(1-r^2))` for |r| < 1, else 0.
pub fn bump(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (-1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Mollify one period of samples by discrete convolution with a symmetric
/// bump kernel of full support `width`. The kernel weights are normalized
/// to sum to one, so constants and the discrete mean are preserved exactly.
pub fn mollify_periodic(f: &[f64], dx: f64, width: f64) -> Vec<f64> {
    let n = f.len();
    let half = 0.5 * width;
    let m = (half / dx).floor() as i64;
    if m < 1 {
        return f.to_vec();
    }
    let mut weights = Vec::with_capacity((2 * m + 1) as usize);
    for j in -m..=m {
        weights.push(bump(j as f64 * dx / half));
    }
    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for (k, w) in weights.iter().enumerate() {
            let j = k as i64 - m;
            let idx = (i as i64 + j).rem_euclid(n as i64) as usize;
            acc += w * f[idx];
        }
        out[i] = acc / total;
    }
    out
}

/// Natural cubic spline through `(xs, ys)` with strictly increasing knots.
/// Evaluation clamps to the knot range; second derivatives at the two ends
/// are zero (natural boundary conditions).
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Option<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return None;
        }
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return None;
            }
        }
        // Tridiagonal system for the natural spline second derivatives.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        }
        // Thomas algorithm.
        let mut m = vec![0.0; n];
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Some(CubicSpline { xs, ys, m })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            j if j >= n => n - 2,
            j => j - 1,
        }
    }

    /// Spline value at `x` (clamped to the knot range).
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.x_min(), self.x_max());
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// First derivative of the spline at `x`.
    pub fn deriv(&self, x: f64) -> f64 {
        let x = x.clamp(self.x_min(), self.x_max());
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }
}
