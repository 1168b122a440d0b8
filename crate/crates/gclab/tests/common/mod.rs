//! Oracles shared between test targets: a two-variable manufactured metric
//! with hand-derived partials, a finite-difference Christoffel route, and a
//! from-scratch rebuild of the discrete marching right-hand side.
#![allow(dead_code)]

use gclab::fluid::Orientation;
use gclab::metric::MetricValues;

/// Coefficients of a smooth two-variable test metric with F != 0. The
/// amplitudes keep EG - F^2 > 1 everywhere.
pub fn coeff_e(x: f64, y: f64) -> f64 {
    2.0 + 0.5 * x.sin() * y.cos()
}

pub fn coeff_f(x: f64, y: f64) -> f64 {
    0.3 * (x + y).sin()
}

pub fn coeff_g(x: f64, y: f64) -> f64 {
    2.0 + 0.4 * x.cos() * (2.0 * y).sin()
}

/// Hand-derived partials of the test metric. The curvature slots are pinned
/// to gamma = 1 so the tilde symbols coincide with the plain ones and both
/// sets can be compared against the same oracle.
pub fn manufactured_values(x: f64, y: f64) -> MetricValues {
    MetricValues {
        x,
        y,
        e: coeff_e(x, y),
        f: coeff_f(x, y),
        g: coeff_g(x, y),
        e_x: 0.5 * x.cos() * y.cos(),
        e_y: -0.5 * x.sin() * y.sin(),
        f_x: 0.3 * (x + y).cos(),
        f_y: 0.3 * (x + y).cos(),
        g_x: -0.4 * x.sin() * (2.0 * y).sin(),
        g_y: 0.8 * x.cos() * (2.0 * y).cos(),
        e_xx: -0.5 * x.sin() * y.cos(),
        e_xy: -0.5 * x.cos() * y.sin(),
        e_yy: -0.5 * x.sin() * y.cos(),
        f_xx: -0.3 * (x + y).sin(),
        f_xy: -0.3 * (x + y).sin(),
        f_yy: -0.3 * (x + y).sin(),
        g_xx: -0.4 * x.cos() * (2.0 * y).sin(),
        g_xy: -0.8 * x.sin() * (2.0 * y).cos(),
        g_yy: -1.6 * x.cos() * (2.0 * y).sin(),
        kappa: -1.0,
        kappa_x: 0.0,
        kappa_y: 0.0,
        gamma: 1.0,
        gamma_x: 0.0,
        gamma_y: 0.0,
    }
}

/// Independent Christoffel route: centered finite differences of the
/// coefficient functions fed through the first-kind symbols and the inverse
/// metric, never touching the library's quotient formulas.
pub fn fd_christoffel(x: f64, y: f64) -> [f64; 6] {
    let h = 1e-5;
    let dx = |f: fn(f64, f64) -> f64| (f(x + h, y) - f(x - h, y)) / (2.0 * h);
    let dy = |f: fn(f64, f64) -> f64| (f(x, y + h) - f(x, y - h)) / (2.0 * h);
    let (e, f, g) = (coeff_e(x, y), coeff_f(x, y), coeff_g(x, y));
    let (e_x, e_y) = (dx(coeff_e), dy(coeff_e));
    let (f_x, f_y) = (dx(coeff_f), dy(coeff_f));
    let (g_x, g_y) = (dx(coeff_g), dy(coeff_g));

    // First-kind symbols Gamma_{ij,k}, then raise the last index.
    let s11_1 = 0.5 * e_x;
    let s11_2 = f_x - 0.5 * e_y;
    let s12_1 = 0.5 * e_y;
    let s12_2 = 0.5 * g_x;
    let s22_1 = f_y - 0.5 * g_x;
    let s22_2 = 0.5 * g_y;
    let det = e * g - f * f;
    let (i11, i12, i22) = (g / det, -f / det, e / det);
    [
        i11 * s11_1 + i12 * s11_2,
        i11 * s12_1 + i12 * s12_2,
        i11 * s22_1 + i12 * s22_2,
        i12 * s11_1 + i22 * s11_2,
        i12 * s12_1 + i22 * s12_2,
        i12 * s22_1 + i22 * s22_2,
    ]
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Re-derives the discrete right-hand side from scratch: own stencils, own
/// wave speeds, and the closed polar form of the sources, sharing no code
/// with the solver path.
pub fn brute_force_rhs(
    wp: &[f64],
    wm: &[f64],
    half_log_e_x: &[f64],
    log_gamma_x: &[f64],
    eps: f64,
    ds: f64,
    orientation: Orientation,
    sigma: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = wp.len();
    let central = |f: &[f64], i: usize| (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * ds);
    let second = |f: &[f64], i: usize| {
        (f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n]) / (ds * ds)
    };
    let one_sided = |f: &[f64], i: usize, c: f64| {
        if c > 0.0 {
            (f[i] - f[(i + n - 1) % n]) / ds
        } else {
            (f[(i + 1) % n] - f[i]) / ds
        }
    };

    let mut q = vec![0.0; n];
    let mut theta = vec![0.0; n];
    let mut rho_q = vec![0.0; n];
    for i in 0..n {
        let half_gap = 0.5 * (wp[i] - wm[i]);
        q[i] = 1.0 / half_gap.cos();
        theta[i] = 0.5 * (wp[i] + wm[i]);
        rho_q[i] = q[i] / (q[i] * q[i] - 1.0).sqrt();
    }

    let mut out_p = vec![0.0; n];
    let mut out_m = vec![0.0; n];
    for i in 0..n {
        let q2 = q[i] * q[i];
        let root = (q2 - 1.0).sqrt();
        let (s, c) = theta[i].sin_cos();
        let lam_p = s + c / root;
        let lam_m = s - c / root;
        let mu_p = -c + s / root;
        let mu_m = -c - s / root;
        let (a_p, a_m, b_p, b_m) = match orientation {
            Orientation::XTimeLike => (lam_p, lam_m, mu_p, mu_m),
            Orientation::YTimeLike => (mu_p, mu_m, lam_p, lam_m),
        };
        let big_d = q[i] * root;

        let k1 = q[i] * half_log_e_x[i] + log_gamma_x[i] * (q2 - 1.0) / q[i];
        let k2 = q[i] * half_log_e_x[i] + log_gamma_x[i] / q[i];
        let f_plus = -s * k1 + c * root * k2;
        let f_minus = s * k1 + c * root * k2;

        let rho = 1.0 / root;
        let grad = 2.0 * eps * q[i] / rho;
        let dp = central(wp, i);
        let dm = central(wm, i);
        let drq = central(&rho_q, i);
        let visc_p = eps * second(wp, i) + grad * dp * drq + eps * dp * dp;
        let visc_m = -(eps * second(wm, i) + grad * dm * drq) + eps * dm * dm;
        let up = one_sided(wp, i, sigma * b_p / a_p);
        let um = one_sided(wm, i, sigma * b_m / a_m);
        out_p[i] = (visc_p + sigma * (f_plus - big_d * b_p * up)) / (big_d * a_p);
        out_m[i] = (visc_m + sigma * (f_minus - big_d * b_m * um)) / (big_d * a_m);
    }
    (out_p, out_m)
}
