//! Run-configuration schema. A single TOML file declares the metric, the
//! marching parameters, the initial data, and the verification and
//! reconstruction options; the parsed form is re-serialized into every run
//! directory so later stages can replay it from the artifacts alone.

use std::path::Path;

use gclab::fluid::{DiamondRegion, Orientation};
use gclab::metric::Metric;
use gclab::solver::{RegionPolicy, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::{read_to_string, CliError};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Drives every randomized choice.
    #[serde(default)]
    pub seed: u64,
    /// Output directory; the --out flag takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub metric: MetricSection,
    pub solver: SolverSection,
    pub data: DataSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub reconstruct: ReconstructSection,
}

impl RunConfig {
    /// Parses a configuration file; file paths inside it are resolved
    /// relative to the file and stored absolute, so the normalized copy
    /// works from any working directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read_to_string(path)?;
        let mut config: RunConfig = toml::from_str(&text).map_err(|err| CliError::Parse {
            path: path.to_path_buf(),
            message: err.message().to_owned(),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if let Some(file) = &config.metric.file {
            config.metric.file = Some(absolutize(base, file));
        }
        if let DataSection::File { path: data_path, .. } = &mut config.data {
            *data_path = absolutize(base, data_path);
        }
        Ok(config)
    }

    /// The defaults-materialized form embedded in each run directory.
    pub fn normalized_toml(&self) -> Result<String, CliError> {
        toml::to_string_pretty(self)
            .map_err(|err| CliError::Config(format!("could not serialize the config: {err}")))
    }
}

fn absolutize(base: &Path, file: &str) -> String {
    let path = Path::new(file);
    if path.is_absolute() {
        file.to_owned()
    } else {
        base.join(path).to_string_lossy().into_owned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricFamily {
    Catenoid,
    Helicoid,
    Torus,
    Custom,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    pub family: MetricFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Tabulated (x, E) samples for the custom family, header `x,E`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    /// Replace E by a periodized blend with this x-period before marching;
    /// needs `beta` for the invariant-width bookkeeping.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic_x: Option<f64>,
}

impl MetricSection {
    pub fn build(&self) -> Result<Metric, CliError> {
        let need = |value: Option<f64>, name: &str| {
            value.ok_or_else(|| {
                CliError::Config(format!("metric.{name} is required for this metric family"))
            })
        };
        let metric = match self.family {
            MetricFamily::Catenoid => Metric::catenoid(
                need(self.c, "c")?,
                need(self.beta, "beta")?,
                need(self.kappa0, "kappa0")?,
            )?,
            MetricFamily::Helicoid => Metric::helicoid(need(self.lambda, "lambda")?)?,
            MetricFamily::Torus => Metric::torus(need(self.a, "a")?, need(self.b, "b")?)?,
            MetricFamily::Custom => {
                let file = self.file.as_deref().ok_or_else(|| {
                    CliError::Config("metric.file is required for the custom family".into())
                })?;
                Metric::custom_from_csv(Path::new(file))?
            }
        };
        match self.periodic_x {
            None => Ok(metric),
            Some(period) => Ok(metric.periodicize(period, need(self.beta, "beta")?)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrientationKind {
    XTimeLike,
    YTimeLike,
}

impl From<OrientationKind> for Orientation {
    fn from(kind: OrientationKind) -> Self {
        match kind {
            OrientationKind::XTimeLike => Orientation::XTimeLike,
            OrientationKind::YTimeLike => Orientation::YTimeLike,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    #[default]
    Enforce,
    Monitor,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub orientation: OrientationKind,
    pub t_start: f64,
    pub t_end: f64,
    pub period: f64,
    pub n_s: usize,
    pub n_t: usize,
    pub eps: f64,
    /// Invariant-region corners: admissible speeds lie in (alpha, beta).
    pub alpha: f64,
    pub beta: f64,
    /// Flow angle the region is centered on; 0 suits x-time-like marches.
    #[serde(default)]
    pub theta_center: f64,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_breach_tol")]
    pub breach_tol: f64,
    #[serde(default)]
    pub policy: PolicyKind,
}

fn default_safety() -> f64 {
    0.4
}

fn default_breach_tol() -> f64 {
    1e-6
}

impl SolverSection {
    pub fn region(&self) -> Result<DiamondRegion, CliError> {
        Ok(DiamondRegion::centered(
            self.alpha,
            self.beta,
            self.theta_center,
            self.orientation.into(),
        )?)
    }

    pub fn build(&self) -> Result<SolverConfig, CliError> {
        Ok(SolverConfig {
            orientation: self.orientation.into(),
            t_start: self.t_start,
            t_end: self.t_end,
            period: self.period,
            n_s: self.n_s,
            n_t: self.n_t,
            eps: self.eps,
            region: self.region()?,
            safety: self.safety,
            breach_tol: self.breach_tol,
            policy: match self.policy {
                PolicyKind::Enforce => RegionPolicy::Enforce,
                PolicyKind::Monitor => RegionPolicy::Monitor,
            },
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSection {
    /// The same flow state in every cell.
    Constant { q: f64, theta: f64 },
    /// Region center plus a seeded random Fourier perturbation of the
    /// invariants; amplitude is the exact peak deviation in invariant units.
    Perturbation { modes: usize, amplitude: f64 },
    /// Pointwise (q, theta) samples from a csv file with header `s,q,theta`,
    /// one row per cell; `mollify_width` smooths them periodically.
    File {
        path: String,
        #[serde(default)]
        mollify_width: f64,
    },
}

impl DataSection {
    pub fn kind(&self) -> &'static str {
        match self {
            DataSection::Constant { .. } => "constant",
            DataSection::Perturbation { .. } => "perturbation",
            DataSection::File { .. } => "file",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Strictly decreasing viscosity list.
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub enabled: bool,
    /// Bumps per axis in the test-function lattice.
    pub lattice_n: usize,
    /// Width multipliers; each adds another lattice_n^2 test functions.
    pub width_scales: Vec<f64>,
    /// Weak-star window as a fraction of the period: window = period / this.
    pub window_fraction: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            enabled: true,
            lattice_n: 4,
            width_scales: vec![1.0],
            window_fraction: 16.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructSection {
    pub enabled: bool,
    /// World position given to the strip corner where frame integration
    /// starts.
    pub base: [f64; 3],
}

impl Default for ReconstructSection {
    fn default() -> Self {
        ReconstructSection {
            enabled: true,
            base: [0.0; 3],
        }
    }
}

pub fn data_file_samples(path: &Path, n_s: usize) -> Result<Vec<gclab::fluid::State>, CliError> {
    let text = read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().trim();
    if header != "s,q,theta" {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            message: format!("expected header s,q,theta, got {header:?}"),
        });
    }
    let mut samples = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                message: format!("row {}: expected 3 columns, got {}", idx + 2, fields.len()),
            });
        }
        let parse = |tok: &str| {
            tok.trim().parse::<f64>().map_err(|_| CliError::Parse {
                path: path.to_path_buf(),
                message: format!("row {}: {tok:?} is not a number", idx + 2),
            })
        };
        let _s = parse(fields[0])?;
        samples.push(gclab::fluid::State::new(parse(fields[1])?, parse(fields[2])?));
    }
    if samples.len() != n_s {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            message: format!("expected {n_s} sample rows to match solver.n_s, got {}", samples.len()),
        });
    }
    Ok(samples)
}
