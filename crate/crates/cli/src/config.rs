//! Run configuration: a JSON file with one section per subcommand, with
//! command-line flags layered on top.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub flow2d: Flow2dConfig,
    pub mc3d: Mc3dConfig,
    pub markov: MarkovConfig,
    pub pentagon: PentagonConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            message: format!("cannot read config {}: {e}", path.display()),
        })?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let key = offending_key(&e);
            CliError::Usage {
                message: format!("invalid config {}: {}", path.display(), e.inner()),
                key,
            }
        })
    }
}

/// Path of the bad entry; for an unknown field the field name is appended.
fn offending_key(e: &serde_path_to_error::Error<serde_json::Error>) -> Option<String> {
    let path = e.path().to_string();
    let msg = e.inner().to_string();
    let unknown = msg
        .strip_prefix("unknown field `")
        .and_then(|rest| rest.split('`').next())
        .map(str::to_string);
    match (path.as_str(), unknown) {
        (".", Some(f)) => Some(f),
        (".", None) => None,
        (p, Some(f)) if !p.ends_with(&f) => Some(format!("{p}.{f}")),
        (p, _) => Some(p.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum LawName {
    Grayson,
    Bloore,
    Eikonal,
    Power,
    Reversed,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flow2dConfig {
    pub law: LawName,
    /// Bloore radius `R` in `v = 1 + κR`.
    pub radius: f64,
    pub exponent: f64,
    pub a: f64,
    pub b: f64,
    pub n: f64,
    pub eps: f64,
    pub psi: f64,
    pub m: usize,
    pub t_end: f64,
    pub dt: Option<f64>,
    pub max_dt: f64,
    pub sample_every: usize,
    pub tol: f64,
}

impl Default for Flow2dConfig {
    fn default() -> Self {
        Self {
            law: LawName::Grayson,
            radius: 1.0,
            exponent: 1.0,
            a: 1.5,
            b: 1.0,
            n: 4.0,
            eps: 0.01,
            psi: 0.7,
            m: 1024,
            t_end: 0.2,
            dt: None,
            max_dt: 1e-3,
            sample_every: 100,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SamplerName {
    Symmetric,
    Skewed,
    Decorrelated,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Mc3dConfig {
    pub v_kappa: f64,
    pub v_lambda: f64,
    pub sampler: SamplerName,
    /// Correlation of the auxiliary factor for the decorrelated sampler.
    pub rho: f64,
    pub n: u64,
}

impl Default for Mc3dConfig {
    fn default() -> Self {
        Self {
            v_kappa: 1.0,
            v_lambda: 1.0,
            sampler: SamplerName::Symmetric,
            rho: 0.0,
            n: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Fixed,
    Centroid,
}

impl ModelName {
    pub fn model(self) -> curvflow::ReferenceModel {
        match self {
            ModelName::Fixed => curvflow::ReferenceModel::FixedUltimate,
            ModelName::Centroid => curvflow::ReferenceModel::Centroid,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarkovConfig {
    pub model: ModelName,
    /// Trajectory-type probabilities; computed from the pentagon regions when absent.
    pub q: Option<[f64; 3]>,
    pub p_det_glob: Option<f64>,
    pub p_det_ult: Option<f64>,
    pub d_min: f64,
    pub d_max: f64,
    pub d_step: f64,
    /// Grid used when `q` is computed.
    pub resolution: usize,
    pub chains: usize,
    pub epochs: usize,
    pub n0: u64,
    pub floor: u64,
    /// Noise amplitude of the simulated chains.
    pub d: f64,
}

impl Default for MarkovConfig {
    fn default() -> Self {
        Self {
            model: ModelName::Centroid,
            q: None,
            p_det_glob: None,
            p_det_ult: None,
            d_min: 1.0,
            d_max: 3.0,
            d_step: 0.01,
            resolution: 512,
            chains: 100,
            epochs: 50,
            n0: 8,
            floor: 4,
            d: 1.8,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct PentagonConfig {
    pub model: ModelName,
    pub resolution: usize,
    /// Also run the simulated classifier on every cell.
    pub compare: bool,
    pub curve_samples: usize,
}

impl Default for PentagonConfig {
    fn default() -> Self {
        Self {
            model: ModelName::Centroid,
            resolution: 512,
            compare: false,
            curve_samples: 256,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flow2dArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub law: Option<LawName>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub exponent: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub psi: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub max_dt: Option<f64>,
    #[arg(long)]
    pub sample_every: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Mc3dArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub v_kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v_lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub sampler: Option<SamplerName>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MarkovArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    #[arg(long)]
    pub q0: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    #[arg(long)]
    pub p_det_glob: Option<f64>,
    #[arg(long)]
    pub p_det_ult: Option<f64>,
    #[arg(long)]
    pub d_min: Option<f64>,
    #[arg(long)]
    pub d_max: Option<f64>,
    #[arg(long)]
    pub d_step: Option<f64>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub n0: Option<u64>,
    #[arg(long)]
    pub floor: Option<u64>,
    #[arg(long)]
    pub d: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PentagonArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub compare: bool,
    #[arg(long)]
    pub curve_samples: Option<usize>,
}

macro_rules! overlay {
    ($cfg:expr, $args:expr; $($field:ident),* $(,)?) => {
        $(if let Some(v) = $args.$field {
            $cfg.$field = v;
        })*
    };
}

impl Flow2dArgs {
    pub fn apply(&self, cfg: &mut Flow2dConfig) {
        overlay!(cfg, self; law, radius, exponent, a, b, n, eps, psi, m, t_end, max_dt, sample_every, tol);
        if self.dt.is_some() {
            cfg.dt = self.dt;
        }
    }
}

impl Mc3dArgs {
    pub fn apply(&self, cfg: &mut Mc3dConfig) {
        overlay!(cfg, self; v_kappa, v_lambda, sampler, rho, n);
    }
}

impl MarkovArgs {
    pub fn apply(&self, cfg: &mut MarkovConfig) -> Result<(), CliError> {
        overlay!(cfg, self; model, d_min, d_max, d_step, resolution, chains, epochs, n0, floor, d);
        match (self.q0, self.q1, self.q2) {
            (None, None, None) => {}
            (Some(a), Some(b), Some(c)) => cfg.q = Some([a, b, c]),
            _ => {
                return Err(CliError::Usage {
                    message: "--q0, --q1 and --q2 must be given together".into(),
                    key: Some("markov.q".into()),
                })
            }
        }
        if self.p_det_glob.is_some() {
            cfg.p_det_glob = self.p_det_glob;
        }
        if self.p_det_ult.is_some() {
            cfg.p_det_ult = self.p_det_ult;
        }
        Ok(())
    }
}

impl PentagonArgs {
    pub fn apply(&self, cfg: &mut PentagonConfig) {
        overlay!(cfg, self; model, resolution, curve_samples);
        if self.compare {
            cfg.compare = true;
        }
    }
}
