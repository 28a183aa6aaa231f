//! Batch front-end: one subcommand per engine, reproducible seeds, CSV and
//! JSON artifacts in an output directory.

pub mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use curvflow::{
    compare_classifiers, curve_samples, delta_report, evolve, mc_expected_omega, p_of_d, region_areas,
    scenario_superellipse, simulate_chains, ChainSpec, Error, EventKind, FlowControls, Sampler, SpeedLaw,
    SpeedLaw3D, TrajectoryTypeDistribution,
};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::RunConfig;
use config::{
    CommonArgs, Flow2dArgs, Flow2dConfig, LawName, MarkovArgs, MarkovConfig, Mc3dArgs, Mc3dConfig, PentagonArgs,
    PentagonConfig, SamplerName,
};

#[derive(Debug, Parser)]
#[command(name = "curvflow", version, about = "Critical points under curvature-driven flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a star-shaped curve and record changes of its critical-point count.
    Flow2d(Flow2dArgs),
    /// Monte Carlo estimate of the expected bifurcation sign for a surface germ.
    Mc3d(Mc3dArgs),
    /// Noise-amplitude fit δ(d) and simulated count chains.
    Markov(MarkovArgs),
    /// Trajectory-type areas of the pentagon shape space.
    Pentagon(PentagonArgs),
    /// Merge the JSON artifacts already in the output directory.
    Report(CommonArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage { message: String, key: Option<String> },
    Engine(Error),
    Io { message: String },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(message) => CliError::Usage { message, key: None },
            other => CliError::Engine(other),
        }
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage { .. } => "usage",
            CliError::Io { .. } => "io",
            CliError::Engine(e) => match e {
                Error::Domain(_) => "domain",
                Error::Usage(_) => "usage",
                Error::CurveCollapsed { .. } => "curve_collapsed",
                Error::BlowUp { .. } => "blow_up",
                Error::EventLocalization(_) => "event_localization",
                Error::DegenerateGerm(_) => "degenerate_germ",
                Error::InvalidSampler(_) => "invalid_sampler",
                Error::PolygonVanished { .. } => "polygon_vanished",
                Error::InvalidPolygon(_) => "invalid_polygon",
                Error::Reconstruction(_) => "reconstruction",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage { message, .. } | CliError::Io { message } => message.clone(),
            CliError::Engine(e) => e.to_string(),
        }
    }

    /// `{kind, message, key}` for stderr.
    pub fn to_json(&self) -> String {
        let key = match self {
            CliError::Usage { key, .. } => key.clone(),
            _ => None,
        };
        json!({ "kind": self.kind(), "message": self.message(), "key": key }).to_string()
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

fn usage(key: &str, message: impl Into<String>) -> CliError {
    CliError::Usage {
        message: message.into(),
        key: Some(key.into()),
    }
}

/// Result of one subcommand: the summary line and the files written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub summary: String,
    pub artifacts: Vec<PathBuf>,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_from_args<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage {
        message: e.to_string(),
        key: None,
    })?;
    run(cli)
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Flow2d(args) => {
            let (mut cfg, out, seed) = base(&args.common)?;
            args.apply(&mut cfg.flow2d);
            run_flow2d(&cfg.flow2d, seed, &out)
        }
        Command::Mc3d(args) => {
            let (mut cfg, out, seed) = base(&args.common)?;
            args.apply(&mut cfg.mc3d);
            let seed = seed.ok_or_else(|| usage("seed", "mc3d draws random germs and needs --seed"))?;
            run_mc3d(&cfg.mc3d, seed, &out)
        }
        Command::Markov(args) => {
            let (mut cfg, out, seed) = base(&args.common)?;
            args.apply(&mut cfg.markov)?;
            let seed = seed.ok_or_else(|| usage("seed", "markov simulates chains and needs --seed"))?;
            run_markov(&cfg.markov, seed, &out)
        }
        Command::Pentagon(args) => {
            let (mut cfg, out, _) = base(&args.common)?;
            args.apply(&mut cfg.pentagon);
            run_pentagon(&cfg.pentagon, &out)
        }
        Command::Report(common) => {
            let (_, out, _) = base(&common)?;
            run_report(&out)
        }
    }
}

const DEFAULT_OUT: &str = "curvflow-out";

fn base(common: &CommonArgs) -> Result<(RunConfig, PathBuf, Option<u64>), CliError> {
    let cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out = common
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let seed = common.seed.or(cfg.seed);
    Ok((cfg, out, seed))
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io {
        message: format!("cannot create {}: {e}", dir.display()),
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io {
        message: format!("cannot write {}: {e}", path.display()),
    })?;
    written.push(path);
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

fn law_2d(cfg: &Flow2dConfig) -> Result<SpeedLaw, CliError> {
    Ok(match cfg.law {
        LawName::Grayson => SpeedLaw::Grayson,
        LawName::Bloore => SpeedLaw::planar_bloore(cfg.radius)?,
        LawName::Eikonal => SpeedLaw::Eikonal,
        LawName::Power => SpeedLaw::power(cfg.exponent)?,
        LawName::Reversed => SpeedLaw::Reversed,
    })
}

pub fn run_flow2d(cfg: &Flow2dConfig, seed: Option<u64>, out: &Path) -> Result<Outcome, CliError> {
    let started = Instant::now();
    if !(cfg.m >= 16 && cfg.m.is_power_of_two()) {
        return Err(usage("flow2d.m", format!("grid size must be a power of two ≥ 16, got {}", cfg.m)));
    }
    let law = law_2d(cfg)?;
    let curve = scenario_superellipse(cfg.a, cfg.b, cfg.n, cfg.eps, cfg.psi, cfg.m)?;
    let controls = FlowControls {
        dt: cfg.dt,
        max_dt: cfg.max_dt,
        sample_every: cfg.sample_every,
        tol: cfg.tol,
    };
    let rec = evolve(&curve, &law, cfg.t_end, &controls)?;
    let counts: Vec<usize> = rec.samples.iter().filter_map(|s| s.n).collect();
    let monotone = counts.windows(2).all(|w| w[1] <= w[0]);
    let annihilations = rec.events.iter().filter(|e| e.kind == EventKind::Annihilation).count();
    let doc = json!({
        "config": cfg,
        "seed": seed,
        "law": rec.law,
        "t_final": rec.t_final,
        "steps": rec.steps,
        "horizon_clamped": rec.horizon_clamped,
        "initial_count": rec.initial_count(),
        "final_count": rec.final_count(),
        "count_non_increasing": monotone,
        "annihilations": annihilations,
        "events": rec.events,
    });
    let mut written = Vec::new();
    write(out, "flow2d_samples.csv", &rec.samples_csv(), &mut written)?;
    write(out, "flow2d_events.csv", &rec.events_csv(), &mut written)?;
    write(out, "flow2d.json", &to_json(&doc), &mut written)?;
    let fmt = |n: Option<usize>| n.map_or("degenerate".to_string(), |n| n.to_string());
    Ok(Outcome {
        summary: format!(
            "flow2d {}: N {} -> {}, {} events ({} annihilations), t = {} in {} steps, {:.2?}",
            rec.law,
            fmt(rec.initial_count()),
            fmt(rec.final_count()),
            rec.events.len(),
            annihilations,
            rec.t_final,
            rec.steps,
            started.elapsed()
        ),
        artifacts: written,
    })
}

pub fn run_mc3d(cfg: &Mc3dConfig, seed: u64, out: &Path) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let law = SpeedLaw3D::from_partials("partials", cfg.v_kappa, cfg.v_lambda)?;
    let sampler = match cfg.sampler {
        SamplerName::Symmetric => Sampler::Symmetric,
        SamplerName::Skewed => Sampler::Skewed,
        SamplerName::Decorrelated => Sampler::Decorrelated { rho: cfg.rho },
    };
    let est = mc_expected_omega(&law, &sampler, cfg.n, seed)?;
    let sign_matches = est.excludes_zero() && (est.mean > 0.0) == (cfg.v_kappa > 0.0);
    let doc = json!({
        "config": cfg,
        "seed": seed,
        "estimate": est,
        "ci99_excludes_zero": est.excludes_zero(),
        "sign_matches_v_kappa": sign_matches,
    });
    let mut written = Vec::new();
    write(out, "mc3d.json", &to_json(&doc), &mut written)?;
    Ok(Outcome {
        summary: format!(
            "mc3d {} v=({}, {}): E = {:.4} ± {:.4}, P(+1) = {:.4}, n = {}, {:.2?}",
            est.sampler,
            cfg.v_kappa,
            cfg.v_lambda,
            est.mean,
            est.ci99,
            est.p_plus,
            est.n,
            started.elapsed()
        ),
        artifacts: written,
    })
}

pub fn run_markov(cfg: &MarkovConfig, seed: u64, out: &Path) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let q = match cfg.q {
        Some([a, b, c]) => TrajectoryTypeDistribution::new(a, b, c).map_err(|e| usage("markov.q", e.to_string()))?,
        None => {
            let map = region_areas(cfg.model.model(), cfg.resolution)?;
            TrajectoryTypeDistribution::normalized(map.q[0], map.q[1], map.q[2])?
        }
    };
    let (glob, ult) = q.deterministic_bounds();
    let p_det_glob = cfg.p_det_glob.unwrap_or(glob);
    let p_det_ult = cfg.p_det_ult.unwrap_or(ult);
    let label = cfg.model.model().label();
    let report = delta_report(label, &q, p_det_glob, p_det_ult, (cfg.d_min, cfg.d_max), cfg.d_step)?;
    let p = p_of_d(cfg.d)?;
    let spec = ChainSpec::with_floor(cfg.n0, p, cfg.epochs, cfg.floor)?;
    let chains = simulate_chains(&spec, cfg.chains, seed);
    let mean_final = if chains.is_empty() {
        f64::NAN
    } else {
        chains.iter().map(|c| *c.last().expect("n0 present") as f64).sum::<f64>() / chains.len() as f64
    };
    let mut table = String::from("d,delta\n");
    for (d, v) in &report.table {
        table.push_str(&format!("{},{}\n", curvflow::io::csv_float(*d), curvflow::io::csv_float(*v)));
    }
    let doc = json!({
        "config": cfg,
        "seed": seed,
        "delta": report,
        "chains": {
            "count": cfg.chains,
            "p_down": p,
            "mean_final_count": mean_final,
        },
    });
    let mut written = Vec::new();
    write(out, "markov.json", &to_json(&doc), &mut written)?;
    write(out, "markov_delta.csv", &table, &mut written)?;
    write(out, "markov_chains.csv", &curvflow::chains_csv(&chains), &mut written)?;
    let flag = if report.discrepancy {
        format!(" (differs from reported d = {})", report.reported_d_star)
    } else {
        String::new()
    };
    Ok(Outcome {
        summary: format!(
            "markov {label}: q = ({:.4}, {:.4}, {:.4}), d* = {:.4}, δ(d*) = {:.3e}, δ(1) = {:.3e}{flag}, {:.2?}",
            q.q0,
            q.q1,
            q.q2,
            report.d_star,
            report.delta_star,
            report.delta_at_1,
            started.elapsed()
        ),
        artifacts: written,
    })
}

pub fn run_pentagon(cfg: &PentagonConfig, out: &Path) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let model = cfg.model.model();
    if cfg.curve_samples == 0 {
        return Err(usage("pentagon.curve_samples", "need at least one curve sample"));
    }
    let map = region_areas(model, cfg.resolution).map_err(|e| match e {
        Error::Usage(m) => usage("pentagon.resolution", m),
        other => other.into(),
    })?;
    let comparison = cfg.compare.then(|| compare_classifiers(&map));
    let doc = json!({
        "config": cfg,
        "model": model,
        "resolution": map.resolution,
        "q": map.q,
        "p_det_glob": map.q[0] + map.q[1],
        "curves": curve_samples(model, cfg.curve_samples)?,
        "comparison": comparison,
    });
    let label = model.label();
    let mut written = Vec::new();
    write(out, &format!("pentagon_{label}.csv"), &map.to_csv(), &mut written)?;
    write(out, &format!("pentagon_{label}.json"), &to_json(&doc), &mut written)?;
    let agree = comparison
        .as_ref()
        .map(|c| format!(", classifier agreement {:.4}", c.fraction))
        .unwrap_or_default();
    Ok(Outcome {
        summary: format!(
            "pentagon {label} at {}²: q = ({:.4}, {:.4}, {:.4}){agree}, {:.2?}",
            map.resolution,
            map.q[0],
            map.q[1],
            map.q[2],
            started.elapsed()
        ),
        artifacts: written,
    })
}

/// Artifacts merged by `report`, keyed by their entry in the summary.
const REPORT_INPUTS: [(&str, &str); 5] = [
    ("flow2d", "flow2d.json"),
    ("mc3d", "mc3d.json"),
    ("markov", "markov.json"),
    ("pentagon_fixed", "pentagon_fixed.json"),
    ("pentagon_centroid", "pentagon_centroid.json"),
];

pub fn run_report(out: &Path) -> Result<Outcome, CliError> {
    let mut merged = serde_json::Map::new();
    for (key, file) in REPORT_INPUTS {
        let path = out.join(file);
        if !path.exists() {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| CliError::Io {
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Io {
            message: format!("{} is not valid JSON: {e}", path.display()),
        })?;
        merged.insert(key.to_string(), value);
    }
    if merged.is_empty() {
        return Err(CliError::Usage {
            message: format!("no artifacts to merge in {}", out.display()),
            key: Some("out".into()),
        });
    }
    let names: Vec<String> = merged.keys().cloned().collect();
    let mut written = Vec::new();
    write(out, "report.json", &to_json(&Value::Object(merged)), &mut written)?;
    Ok(Outcome {
        summary: format!("report: merged {}", names.join(", ")),
        artifacts: written,
    })
}
