//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building metrics, converting states,
/// marching, verifying, or reconstructing.
#[derive(Debug, Error)]
pub enum Error {
    /// A sample point lies outside the metric's declared domain.
    #[error("point ({x}, {y}) outside the metric domain: {reason}")]
    DomainViolation { x: f64, y: f64, reason: String },

    /// The Gauss curvature is not strictly negative where it must be.
    #[error("Gauss curvature not strictly negative at ({x}, {y}): kappa = {kappa}")]
    NonNegativeCurvature { x: f64, y: f64, kappa: f64 },

    /// EG - F^2 is not positive, so the metric is not positive definite.
    #[error("degenerate metric at ({x}, {y}): EG - F^2 = {det}")]
    DegenerateMetric { x: f64, y: f64, det: f64 },

    /// The declared closed-form curvature disagrees with the Brioschi value.
    #[error("declared kappa {declared} disagrees with Brioschi value {computed} at x = {x} (relative tolerance {tol})")]
    CurvatureMismatch {
        x: f64,
        declared: f64,
        computed: f64,
        tol: f64,
    },

    /// An operation that requires E = G = E(x), F = 0 was handed something else.
    #[error("metric is not of the isothermal one-variable form required here: {reason}")]
    StructuralForm { reason: String },

    /// Speed dropped to the sonic guard band q <= 1 + delta where the fluid map blows up.
    #[error("sonic degeneracy: q = {q} is within {guard} of the sonic speed 1")]
    SonicDegeneracy { q: f64, guard: f64 },

    /// A constructor or configuration argument is out of its admissible range.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// The scaled second form does not admit a fluid state (no p < 0 root, etc.).
    #[error("second form ({lt}, {mt}, {nt}) admits no fluid state: {reason}")]
    InadmissibleSecondForm {
        lt: f64,
        mt: f64,
        nt: f64,
        reason: String,
    },

    /// A Riemann-invariant pair has a gap outside [0, pi), so q is undefined.
    #[error("invariant gap (Wp - Wm)/2 = {gap} outside [0, pi/2); no finite speed")]
    InvariantGap { gap: f64 },

    /// A state left the configured diamond region beyond tolerance.
    #[error("invariant region breached at t = {t}, cell {cell}: {what} by {value} (tolerance {bound})")]
    RegionBreach {
        t: f64,
        cell: usize,
        what: String,
        value: f64,
        bound: f64,
    },

    /// The time-like characteristic speeds no longer straddle zero, so the
    /// marching system is not parabolic there.
    #[error("parabolic structure lost at cell {cell}: time-like speeds ({fwd}, {bwd}) must straddle zero")]
    ParabolicityLoss { cell: usize, fwd: f64, bwd: f64 },

    /// The marching step size collapsed below the resolvable scale.
    #[error("step size underflow at t = {t}: dt = {dt}")]
    StepUnderflow { t: f64, dt: f64 },

    /// Non-finite numbers appeared during a march or an integration.
    #[error("non-finite value in {context} at t = {t}")]
    NonFinite { context: String, t: f64 },

    /// The tangent frame collapsed during surface reconstruction.
    #[error("frame degeneration at grid point ({i}, {j}): |r_x x r_y| = {norm}")]
    FrameDegeneration { i: usize, j: usize, norm: f64 },

    /// Input tables or files failed to parse.
    #[error("parse error in {what}: {message}")]
    Parse { what: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
