//! Fluid-dynamic change of variables for the scaled second fundamental form.
//!
//! The scaled form (L̃, M̃, Ñ) is parameterized by a Chaplygin-type gas state:
//!
//! ```text
//! L̃ = ρv² + p,   M̃ = −ρuv,   Ñ = ρu² + p,   p = −1/ρ,
//! ```
//!
//! with the Bernoulli closure ρ = 1/√(q²−1) for q² = u² + v² > 1
//! ("supersonic" since the sound speed obeys c² = q² − 1). In polar variables
//! (u, v) = (q cos θ, q sin θ), the system carries Riemann invariants
//! W± = θ ± arccos(1/q) along characteristic speeds λ± (x-direction) and μ±
//! (y-direction); the diamond-shaped set bounded by four W± level lines is the
//! candidate invariant region for the viscous marching scheme.

use crate::error::{Error, Result};
use crate::metric::ChristoffelSet;

/// Default guard band above the sonic speed q = 1 below which the change of
/// variables is singular (ρ, λ±, μ± all blow up).
pub const SONIC_GUARD: f64 = 1e-6;

/// A pointwise flow state: speed q > 1 and flow angle θ (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub q: f64,
    pub theta: f64,
}

impl State {
    pub fn new(q: f64, theta: f64) -> Self {
        State { q, theta }
    }

    /// Velocity components (u, v) = (q cos θ, q sin θ).
    pub fn velocity(&self) -> (f64, f64) {
        (self.q * self.theta.cos(), self.q * self.theta.sin())
    }
}

/// Density and pressure from the Bernoulli relation:
/// ρ = 1/√(q²−1), p = −1/ρ.
pub fn bernoulli(q: f64) -> Result<(f64, f64)> {
    if !(q > 1.0 + SONIC_GUARD) {
        return Err(Error::SonicDegeneracy {
            q,
            guard: SONIC_GUARD,
        });
    }
    let root = (q * q - 1.0).sqrt();
    Ok((1.0 / root, -root))
}

/// Riemann invariants W± = θ ± arccos(1/q).
pub fn riemann_invariants(q: f64, theta: f64) -> Result<(f64, f64)> {
    if !(q >= 1.0) {
        return Err(Error::SonicDegeneracy { q, guard: 0.0 });
    }
    let phi = (1.0 / q).acos();
    Ok((theta + phi, theta - phi))
}

/// Inverse of [`riemann_invariants`]: q = 1/cos((W₊−W₋)/2), θ = (W₊+W₋)/2.
pub fn invariants_to_state(wp: f64, wm: f64) -> Result<State> {
    let gap = 0.5 * (wp - wm);
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&gap) {
        return Err(Error::InvariantGap { gap });
    }
    Ok(State {
        q: 1.0 / gap.cos(),
        theta: 0.5 * (wp + wm),
    })
}

/// Characteristic speeds of the first-order system in both coordinate
/// directions.
#[derive(Debug, Clone, Copy)]
pub struct WaveSpeeds {
    /// Eigenvalues of the x-direction coefficient matrix: sin θ ± cos θ/√(q²−1).
    pub lambda_p: f64,
    pub lambda_m: f64,
    /// Eigenvalues of the y-direction coefficient matrix: −cos θ ± sin θ/√(q²−1).
    pub mu_p: f64,
    pub mu_m: f64,
}

pub fn wave_speeds(q: f64, theta: f64) -> Result<WaveSpeeds> {
    if !(q > 1.0 + SONIC_GUARD) {
        return Err(Error::SonicDegeneracy {
            q,
            guard: SONIC_GUARD,
        });
    }
    let root = (q * q - 1.0).sqrt();
    let (s, c) = theta.sin_cos();
    Ok(WaveSpeeds {
        lambda_p: s + c / root,
        lambda_m: s - c / root,
        mu_p: -c + s / root,
        mu_m: -c - s / root,
    })
}

/// Scaled and unscaled second fundamental form at a point, together with the
/// raw h-coefficients.
#[derive(Debug, Clone, Copy)]
pub struct SecondFormPoint {
    /// Scaled entries with L̃Ñ − M̃² = −1.
    pub lt: f64,
    pub mt: f64,
    pub nt: f64,
    /// Unscaled entries (L, M, N) = γ·(L̃, M̃, Ñ) with LN − M² = κ.
    pub l: f64,
    pub m: f64,
    pub n: f64,
    /// h_ij = √(EG−F²)·(L, M, N).
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    /// |L̃Ñ − M̃² + 1| at this point.
    pub constraint_residual: f64,
}

/// Maps a flow state to the second fundamental form. `gamma` is √(−κ) and
/// `det_g` is EG − F² at the same point.
pub fn fluid_to_second_form(state: State, gamma: f64, det_g: f64) -> Result<SecondFormPoint> {
    let (rho, p) = bernoulli(state.q)?;
    let (u, v) = state.velocity();
    let lt = rho * v * v + p;
    let mt = -rho * u * v;
    let nt = rho * u * u + p;
    let root_det = det_g.sqrt();
    let (l, m, n) = (gamma * lt, gamma * mt, gamma * nt);
    Ok(SecondFormPoint {
        lt,
        mt,
        nt,
        l,
        m,
        n,
        h11: root_det * l,
        h12: root_det * m,
        h22: root_det * n,
        constraint_residual: (lt * nt - mt * mt + 1.0).abs(),
    })
}

/// Recovers (q, θ) from scaled second-form entries. The pressure solves
/// p² − (L̃+Ñ)p + (L̃Ñ − M̃²) = 0 (negative root); speeds come from
/// u² = p(p−Ñ), v² = p(p−L̃); the angle branch is fixed by requiring
/// sign(uv) = −sign(M̃) and taking the candidate nearest `reference_theta`.
pub fn second_form_to_fluid(lt: f64, mt: f64, nt: f64, reference_theta: f64) -> Result<State> {
    let constraint = lt * nt - mt * mt;
    let half_sum = 0.5 * (lt + nt);
    let disc = half_sum * half_sum - constraint;
    if disc < 0.0 {
        return Err(Error::InadmissibleSecondForm {
            lt,
            mt,
            nt,
            reason: format!("negative discriminant {disc} in the pressure quadratic"),
        });
    }
    let p = half_sum - disc.sqrt();
    if !(p < 0.0) {
        return Err(Error::InadmissibleSecondForm {
            lt,
            mt,
            nt,
            reason: format!("no negative pressure root (constraint = {constraint})"),
        });
    }
    let u2 = p * (p - nt);
    let v2 = p * (p - lt);
    if u2 < -1e-12 || v2 < -1e-12 {
        return Err(Error::InadmissibleSecondForm {
            lt,
            mt,
            nt,
            reason: format!("negative squared velocity (u² = {u2}, v² = {v2})"),
        });
    }
    let u = u2.max(0.0).sqrt();
    let v = v2.max(0.0).sqrt();
    // Candidate angles: (±u, ±v) with the product sign tied to M̃ = −ρuv.
    let uv_sign = if mt == 0.0 {
        0.0
    } else if mt < 0.0 {
        1.0
    } else {
        -1.0
    };
    let mut best: Option<(f64, State)> = None;
    for (su, sv) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        if uv_sign != 0.0 && u > 0.0 && v > 0.0 && su * sv != uv_sign {
            continue;
        }
        let (uu, vv) = (su * u, sv * v);
        let theta = vv.atan2(uu);
        let q = (uu * uu + vv * vv).sqrt();
        let dist = angle_distance(theta, reference_theta);
        if best.map_or(true, |(d, _)| dist < d) {
            best = Some((dist, State { q, theta }));
        }
    }
    let (_, state) = best.unwrap();
    if !(state.q > 1.0 + SONIC_GUARD) {
        return Err(Error::SonicDegeneracy {
            q: state.q,
            guard: SONIC_GUARD,
        });
    }
    Ok(state)
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// Momentum sources R₁, R₂ and rotationality-continuity sources S₁, S₂ at a
/// point, plus the combinations entering the Riemann-invariant equations.
#[derive(Debug, Clone, Copy)]
pub struct SourceTerms {
    pub r1: f64,
    pub r2: f64,
    pub s1: f64,
    pub s2: f64,
    /// S₁ + (q²−1)·S₂.
    pub comb_plus: f64,
    /// S₁ − (q²−1)·S₂.
    pub comb_minus: f64,
}

impl SourceTerms {
    /// Source in the W₊ marching equation.
    pub fn w_plus_source(&self) -> f64 {
        self.comb_minus
    }

    /// Source in the W₋ marching equation.
    pub fn w_minus_source(&self) -> f64 {
        -self.comb_plus
    }
}

/// Sources by direct composition:
///
/// ```text
/// R₁ = −L̃·Γ̃⁽²⁾₂₂ − 2ρuv·Γ̃⁽²⁾₁₂ − Ñ·Γ̃⁽²⁾₁₁,
/// R₂ = −L̃·Γ̃⁽¹⁾₂₂ − 2ρuv·Γ̃⁽¹⁾₁₂ − Ñ·Γ̃⁽¹⁾₁₁,
/// S₁ = −(vR₂ − uR₁)/(ρq²),
/// S₂ =  (vR₁ + uR₂)/q².
/// ```
pub fn source_terms(state: State, ch: &ChristoffelSet) -> Result<SourceTerms> {
    let (rho, p) = bernoulli(state.q)?;
    let (u, v) = state.velocity();
    let q2 = state.q * state.q;
    let lt = rho * v * v + p;
    let nt = rho * u * u + p;
    let r1 = -lt * ch.t2_22 - 2.0 * rho * u * v * ch.t2_12 - nt * ch.t2_11;
    let r2 = -lt * ch.t1_22 - 2.0 * rho * u * v * ch.t1_12 - nt * ch.t1_11;
    let s1 = -(v * r2 - u * r1) / (rho * q2);
    let s2 = (v * r1 + u * r2) / q2;
    Ok(SourceTerms {
        r1,
        r2,
        s1,
        s2,
        comb_plus: s1 + (q2 - 1.0) * s2,
        comb_minus: s1 - (q2 - 1.0) * s2,
    })
}

/// Closed polar form of the source combinations for one-variable isothermal
/// metrics, in terms of a = E′/(2E) and b = γ′/γ:
///
/// ```text
/// S₁ ± (q²−1)S₂ = −sin θ·[qa + b(q²−1)/q] ∓ cos θ·√(q²−1)·[qa + b/q].
/// ```
///
/// Written independently of [`source_terms`] so the two routes can check each
/// other.
pub fn source_combinations_isothermal(
    q: f64,
    theta: f64,
    half_log_e_x: f64,
    log_gamma_x: f64,
) -> Result<(f64, f64)> {
    if !(q > 1.0 + SONIC_GUARD) {
        return Err(Error::SonicDegeneracy {
            q,
            guard: SONIC_GUARD,
        });
    }
    let q2 = q * q;
    let root = (q2 - 1.0).sqrt();
    let (s, c) = theta.sin_cos();
    let k1 = q * half_log_e_x + log_gamma_x * (q2 - 1.0) / q;
    let k2 = q * half_log_e_x + log_gamma_x / q;
    let plus = -s * k1 - c * root * k2;
    let minus = -s * k1 + c * root * k2;
    Ok((plus, minus))
}

/// The two symmetric branches θ±(q) on which the Riemann-form sources vanish
/// for a metric tied to β:
///
/// ```text
/// tan θ±(q) = ±√(q²−1)·(β²−q²) / (β²−(β²−1)q²).
/// ```
///
/// For β ≠ √2 the denominator root q² = β²/(β²−1) is a vertical asymptote
/// and the branches pass through ±π/2 there. For β = √2 numerator and
/// denominator share the factor 2 − q², the singularity is removable, and
/// the positive branch reduces to θ₊ = arctan √(q²−1).
pub fn theta_zero_curves(q: f64, beta: f64) -> Result<(f64, f64)> {
    if !(q > 1.0) {
        return Err(Error::SonicDegeneracy { q, guard: 0.0 });
    }
    let b2 = beta * beta;
    let q2 = q * q;
    let root = (q2 - 1.0).sqrt();
    let denom = b2 - (b2 - 1.0) * q2;
    let mut t = root * (b2 - q2) / denom;
    if t.is_nan() {
        t = root / (b2 - 1.0);
    }
    let theta_plus = t.atan();
    Ok((theta_plus, -theta_plus))
}

/// Which side of the diamond a point left, and by how much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Breach {
    WpBelow(f64),
    WpAbove(f64),
    WmBelow(f64),
    WmAbove(f64),
}

impl Breach {
    /// Distance past the violated bound.
    pub fn excess(&self) -> f64 {
        match self {
            Breach::WpBelow(e) | Breach::WpAbove(e) | Breach::WmBelow(e) | Breach::WmAbove(e) => {
                *e
            }
        }
    }

    pub fn side(&self) -> &'static str {
        match self {
            Breach::WpBelow(_) => "W+ below its lower bound",
            Breach::WpAbove(_) => "W+ above its upper bound",
            Breach::WmBelow(_) => "W- below its lower bound",
            Breach::WmAbove(_) => "W- above its upper bound",
        }
    }
}

/// The four-sided invariant-region candidate in the (W₊, W₋) plane:
/// W₊ ∈ [θc + arccos(1/α), θc + arccos(1/β)],
/// W₋ ∈ [θc − arccos(1/β), θc − arccos(1/α)],
/// where θc is the angle the region is centered on (0 for x-direction
/// marching, π/2 for y-direction marching).
#[derive(Debug, Clone, Copy)]
pub struct DiamondRegion {
    pub alpha: f64,
    pub beta: f64,
    pub theta_center: f64,
    pub wp_min: f64,
    pub wp_max: f64,
    pub wm_min: f64,
    pub wm_max: f64,
}

/// Which coordinate direction the march treats as time-like; the
/// corresponding characteristic speeds must keep opposite signs over the
/// whole region for the marching system to stay parabolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    XTimeLike,
    YTimeLike,
}

impl DiamondRegion {
    /// Region centered on θ = 0 for x-direction marching; validates
    /// λ₊ > 0 and λ₋ < 0 on a 256×256 lattice of region points.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::centered(alpha, beta, 0.0, Orientation::XTimeLike)
    }

    /// Region centered on an arbitrary angle, validated for the given
    /// marching orientation.
    pub fn centered(
        alpha: f64,
        beta: f64,
        theta_center: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        if !(1.0 < alpha && alpha < beta) {
            return Err(Error::InvalidParameter {
                name: "alpha,beta",
                message: format!("need 1 < alpha < beta, got alpha = {alpha}, beta = {beta}"),
            });
        }
        let inner = (1.0 / alpha).acos();
        let outer = (1.0 / beta).acos();
        let region = DiamondRegion {
            alpha,
            beta,
            theta_center,
            wp_min: theta_center + inner,
            wp_max: theta_center + outer,
            wm_min: theta_center - outer,
            wm_max: theta_center - inner,
        };
        // The qualitative requirement "alpha sufficiently close to beta" made
        // operational: sample the region densely and require the time-like
        // speed pair to keep opposite signs everywhere.
        let n = 256;
        for i in 0..n {
            for j in 0..n {
                let wp = region.wp_min
                    + (region.wp_max - region.wp_min) * i as f64 / (n - 1) as f64;
                let wm = region.wm_min
                    + (region.wm_max - region.wm_min) * j as f64 / (n - 1) as f64;
                let state = invariants_to_state(wp, wm).map_err(|_| Error::InvalidParameter {
                    name: "alpha,beta",
                    message: "region contains sonic states".into(),
                })?;
                let ws = wave_speeds(state.q, state.theta)?;
                let (fwd, bwd) = match orientation {
                    Orientation::XTimeLike => (ws.lambda_p, ws.lambda_m),
                    Orientation::YTimeLike => (ws.mu_p, ws.mu_m),
                };
                if !(fwd > 0.0 && bwd < 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "alpha,beta",
                        message: format!(
                            "time-like speeds lose their signs inside the region at \
                             (q, theta) = ({}, {}): fwd = {fwd}, bwd = {bwd}; \
                             bring alpha closer to beta",
                            state.q, state.theta
                        ),
                    });
                }
            }
        }
        Ok(region)
    }

    /// Center of the diamond in the (W₊, W₋) plane.
    pub fn center_w(&self) -> (f64, f64) {
        (
            0.5 * (self.wp_min + self.wp_max),
            0.5 * (self.wm_min + self.wm_max),
        )
    }

    /// W₊ side length; the W₋ extent is identical.
    pub fn wp_extent(&self) -> f64 {
        self.wp_max - self.wp_min
    }

    pub fn contains_state(&self, q: f64, theta: f64) -> bool {
        match riemann_invariants(q, theta) {
            Ok((wp, wm)) => self.contains_w(wp, wm),
            Err(_) => false,
        }
    }

    pub fn contains_w(&self, wp: f64, wm: f64) -> bool {
        self.breach(wp, wm, 0.0).is_none()
    }

    /// Reports the first bound exceeded by more than `tol`, if any.
    pub fn breach(&self, wp: f64, wm: f64, tol: f64) -> Option<Breach> {
        if wp < self.wp_min - tol {
            Some(Breach::WpBelow(self.wp_min - wp))
        } else if wp > self.wp_max + tol {
            Some(Breach::WpAbove(wp - self.wp_max))
        } else if wm < self.wm_min - tol {
            Some(Breach::WmBelow(self.wm_min - wm))
        } else if wm > self.wm_max + tol {
            Some(Breach::WmAbove(wm - self.wm_max))
        } else {
            None
        }
    }
}
