//! Command-line interface: `simulate`, `fit-spin`, `logo-spin`, and
//! `evaluate` subcommands over the library pipelines.
//!
//! Exit codes: 0 success, 1 input error (bad flags, config, or files),
//! 2 estimation error (reported as machine-readable JSON on stdout),
//! 3 acceptance failure of the `evaluate` report.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{self, make_settings, ExperimentConfig};
use crate::io;
use crate::linalg::Vec3;
use crate::logo_spin::{estimate_spin_logo, LogoConfig, LogoInput};
use crate::magnus_fit::{estimate_spin, FitConfig};
use crate::physics::{
    find_bounce, simulate_logo, simulate_observations, BallState, PhysicalConstants, SpinVector,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ESTIMATION: i32 = 2;
pub const EXIT_ACCEPTANCE: i32 = 3;

/// All tunables of the tool, filled from defaults, then an optional
/// config file, then command-line flags (later sources win).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mass: f64,
    pub radius: f64,
    pub gravity: f64,
    pub drag_coefficient: f64,
    pub lift_coefficient: f64,
    pub air_density: f64,
    pub noise_sigma: f64,
    pub rate: f64,
    pub seed: u64,
    pub jobs: usize,
    pub out_dir: PathBuf,
    pub max_window: usize,
    pub outlier_threshold: f64,
    pub outlier_head_len: usize,
    pub min_observations: usize,
    pub logo_radius: f64,
    pub limb_polar_threshold_deg: f64,
    pub plane_lambda: f64,
    pub min_delta_deg: f64,
    pub miss_prob: f64,
    pub n_per_setting: usize,
    pub truncation_fraction: f64,
    pub accept_min_accuracy: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = PhysicalConstants::standard();
        let fit = FitConfig::noisy();
        let logo = LogoConfig::default();
        RunConfig {
            mass: c.mass,
            radius: c.radius,
            gravity: c.gravity,
            drag_coefficient: c.drag_coefficient,
            lift_coefficient: c.lift_coefficient,
            air_density: c.air_density,
            noise_sigma: 0.002,
            rate: 380.0,
            seed: 1,
            jobs: 1,
            out_dir: PathBuf::from("spinfit-out"),
            max_window: fit.max_window,
            outlier_threshold: fit.outlier_threshold,
            outlier_head_len: fit.outlier_head_len,
            min_observations: fit.min_observations,
            logo_radius: logo.logo_radius,
            limb_polar_threshold_deg: logo.limb_polar_threshold_deg,
            plane_lambda: logo.plane_lambda,
            min_delta_deg: logo.min_delta_deg,
            miss_prob: 0.0,
            n_per_setting: 50,
            truncation_fraction: 0.6,
            accept_min_accuracy: 0.85,
        }
    }
}

impl RunConfig {
    pub fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(
            self.mass,
            self.radius,
            self.gravity,
            self.drag_coefficient,
            self.lift_coefficient,
            self.air_density,
        )
    }

    pub fn fit_config(&self) -> FitConfig {
        FitConfig {
            max_window: self.max_window,
            outlier_threshold: self.outlier_threshold,
            outlier_head_len: self.outlier_head_len,
            min_observations: self.min_observations,
            ..FitConfig::default()
        }
    }

    pub fn logo_config(&self) -> LogoConfig {
        LogoConfig {
            logo_radius: self.logo_radius,
            ball_radius: self.radius,
            limb_polar_threshold_deg: self.limb_polar_threshold_deg,
            plane_lambda: self.plane_lambda,
            min_delta_deg: self.min_delta_deg,
        }
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let bad = |what: &str| Error::Config { line, message: format!("cannot parse {what} from `{value}`") };
        match key {
            "mass" => self.mass = value.parse().map_err(|_| bad("mass"))?,
            "radius" => self.radius = value.parse().map_err(|_| bad("radius"))?,
            "gravity" => self.gravity = value.parse().map_err(|_| bad("gravity"))?,
            "drag_coefficient" => self.drag_coefficient = value.parse().map_err(|_| bad("drag_coefficient"))?,
            "lift_coefficient" => self.lift_coefficient = value.parse().map_err(|_| bad("lift_coefficient"))?,
            "air_density" => self.air_density = value.parse().map_err(|_| bad("air_density"))?,
            "noise" | "noise_sigma" => self.noise_sigma = value.parse().map_err(|_| bad("noise"))?,
            "rate" => self.rate = value.parse().map_err(|_| bad("rate"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "jobs" => self.jobs = value.parse().map_err(|_| bad("jobs"))?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            "max_window" => self.max_window = value.parse().map_err(|_| bad("max_window"))?,
            "outlier_threshold" => {
                self.outlier_threshold = value.parse().map_err(|_| bad("outlier_threshold"))?
            }
            "outlier_head_len" => {
                self.outlier_head_len = value.parse().map_err(|_| bad("outlier_head_len"))?
            }
            "min_observations" => {
                self.min_observations = value.parse().map_err(|_| bad("min_observations"))?
            }
            "logo_radius" => self.logo_radius = value.parse().map_err(|_| bad("logo_radius"))?,
            "limb_polar_threshold_deg" => {
                self.limb_polar_threshold_deg =
                    value.parse().map_err(|_| bad("limb_polar_threshold_deg"))?
            }
            "plane_lambda" => self.plane_lambda = value.parse().map_err(|_| bad("plane_lambda"))?,
            "min_delta_deg" => self.min_delta_deg = value.parse().map_err(|_| bad("min_delta_deg"))?,
            "miss_prob" => self.miss_prob = value.parse().map_err(|_| bad("miss_prob"))?,
            "n_per_setting" => self.n_per_setting = value.parse().map_err(|_| bad("n_per_setting"))?,
            "truncation_fraction" => {
                self.truncation_fraction = value.parse().map_err(|_| bad("truncation_fraction"))?
            }
            "accept_min_accuracy" => {
                self.accept_min_accuracy = value.parse().map_err(|_| bad("accept_min_accuracy"))?
            }
            _ => {
                return Err(Error::Config { line, message: format!("unknown key `{key}`") });
            }
        }
        Ok(())
    }

    /// Parses a `key = value` config file ('#' starts a comment).
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            self.set(key.trim(), value.trim(), line)?;
        }
        Ok(())
    }

    /// Checks every module precondition that can be checked statically.
    pub fn validate(&self) -> Result<()> {
        self.constants()?;
        if !(50.0..=500.0).contains(&self.rate) {
            return Err(Error::invalid("rate", format!("camera rate must be in [50, 500] Hz, got {}", self.rate)));
        }
        if !(self.noise_sigma >= 0.0) {
            return Err(Error::invalid("noise", "noise sigma must be >= 0"));
        }
        if !(0.0..1.0).contains(&self.miss_prob) {
            return Err(Error::invalid("miss_prob", "miss probability must be in [0, 1)"));
        }
        if self.jobs == 0 {
            return Err(Error::invalid("jobs", "jobs must be >= 1"));
        }
        if !(0.05..=0.95).contains(&self.truncation_fraction) {
            return Err(Error::invalid("truncation_fraction", "must be in [0.05, 0.95]"));
        }
        if !(0.0..=1.0).contains(&self.accept_min_accuracy) {
            return Err(Error::invalid("accept_min_accuracy", "must be in [0, 1]"));
        }
        if !(self.logo_radius > 0.0 && self.logo_radius < self.radius) {
            return Err(Error::invalid("logo_radius", "need 0 < logo radius < ball radius"));
        }
        if self.max_window < 5 || self.min_observations < 5 {
            return Err(Error::invalid("max_window", "fit windows need at least 5 observations"));
        }
        Ok(())
    }
}

fn parse_vec3(s: &str) -> Result<Vec3> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid("vector", format!("expected `x,y,z`, got `{s}`")));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| Error::invalid("vector", format!("cannot parse `{part}`")))?;
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

#[derive(Debug, Clone, Default)]
struct SimulateArgs {
    setting: Option<String>,
    omega: Option<Vec3>,
    state: Option<(Vec3, Vec3)>,
}

#[derive(Debug)]
enum Command {
    Simulate(SimulateArgs),
    FitSpin(PathBuf),
    LogoSpin(PathBuf),
    Evaluate,
}

fn usage() -> &'static str {
    "spinfit - table-tennis spin estimation toolkit

Usage:
  spinfit simulate [--setting TYPE:LEVEL | --omega X,Y,Z] [--state px,py,pz,vx,vy,vz]
                   [--seed N] [--rate HZ] [--noise M] [--miss-prob P] [--out DIR] [--config FILE]
  spinfit fit-spin TRAJECTORY.csv [--config FILE] [flags]
  spinfit logo-spin LOGO_OR_CONTOUR.csv [--config FILE] [flags]
  spinfit evaluate [--seed N] [--noise M] [--jobs N] [--out DIR] [--config FILE]

Exit codes: 0 ok, 1 input error, 2 estimation error, 3 acceptance failure.
"
}

struct Parsed {
    command: Command,
    config: RunConfig,
}

fn parse_args(args: &[String]) -> Result<Parsed> {
    if args.is_empty() {
        return Err(Error::invalid("args", usage()));
    }
    let mut config = RunConfig::default();
    let mut sim = SimulateArgs::default();
    let mut positional: Vec<String> = Vec::new();

    // First pass: find --config so flags override the file regardless of
    // their relative order.
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            let path = args
                .get(i + 1)
                .ok_or_else(|| Error::invalid("--config", "missing value"))?;
            config.load_file(Path::new(path))?;
            i += 2;
        } else {
            i += 1;
        }
    }

    let mut i = 1;
    while i < args.len() {
        let arg = &args[i];
        let take = |name: &str| -> Result<String> {
            args.get(i + 1)
                .cloned()
                .ok_or_else(|| Error::invalid("flag", format!("missing value for {name}")))
        };
        match arg.as_str() {
            "--config" => {
                i += 2;
                continue;
            }
            "--help" | "-h" => return Err(Error::invalid("args", usage())),
            "--seed" => config.set("seed", &take("--seed")?, 0)?,
            "--rate" => config.set("rate", &take("--rate")?, 0)?,
            "--noise" => config.set("noise", &take("--noise")?, 0)?,
            "--jobs" => config.set("jobs", &take("--jobs")?, 0)?,
            "--out" => config.set("out", &take("--out")?, 0)?,
            "--miss-prob" => config.set("miss_prob", &take("--miss-prob")?, 0)?,
            "--n-per-setting" => config.set("n_per_setting", &take("--n-per-setting")?, 0)?,
            "--max-window" => config.set("max_window", &take("--max-window")?, 0)?,
            "--setting" => sim.setting = Some(take("--setting")?),
            "--omega" => sim.omega = Some(parse_vec3(&take("--omega")?)?),
            "--state" => {
                let raw = take("--state")?;
                let parts: Vec<&str> = raw.split(',').collect();
                if parts.len() != 6 {
                    return Err(Error::invalid("--state", "expected px,py,pz,vx,vy,vz"));
                }
                let pos = parse_vec3(&parts[..3].join(","))?;
                let vel = parse_vec3(&parts[3..].join(","))?;
                sim.state = Some((pos, vel));
            }
            flag if flag.starts_with("--") => {
                // Generic `--key value` falls through to the config table.
                let value = take(flag)?;
                config.set(flag.trim_start_matches("--"), &value, 0).map_err(|_| {
                    Error::invalid("flag", format!("unknown flag {flag}"))
                })?;
            }
            _ => positional.push(arg.clone()),
        }
        i += if arg.starts_with("--") { 2 } else { 1 };
    }

    config.validate()?;

    let command = match args[0].as_str() {
        "simulate" => Command::Simulate(sim),
        "fit-spin" => {
            let file = positional
                .first()
                .ok_or_else(|| Error::invalid("fit-spin", "missing trajectory CSV path"))?;
            Command::FitSpin(PathBuf::from(file))
        }
        "logo-spin" => {
            let file = positional
                .first()
                .ok_or_else(|| Error::invalid("logo-spin", "missing logo/contour CSV path"))?;
            Command::LogoSpin(PathBuf::from(file))
        }
        "evaluate" => Command::Evaluate,
        other => return Err(Error::invalid("command", format!("unknown command `{other}`\n\n{}", usage()))),
    };
    Ok(Parsed { command, config })
}

fn cmd_simulate(cfg: &RunConfig, sim: &SimulateArgs) -> Result<()> {
    let constants = cfg.constants()?;
    let (omega, launch) = match (&sim.setting, sim.omega) {
        (Some(name), None) => {
            let settings = make_settings();
            let setting = settings
                .iter()
                .find(|s| s.name() == *name)
                .ok_or_else(|| {
                    let known: Vec<String> = settings.iter().map(|s| s.name()).collect();
                    Error::invalid("--setting", format!("unknown setting `{name}`; known: {}", known.join(", ")))
                })?;
            (setting.omega, setting.launch)
        }
        (None, Some(omega)) => {
            let spin = SpinVector::new(omega)?;
            let default_launch =
                BallState::new(0.0, Vec3::new(-2.0, 0.0, 0.3), Vec3::new(5.0, 0.0, 2.0));
            (spin, default_launch)
        }
        (None, None) => {
            return Err(Error::invalid("simulate", "need --setting or --omega"));
        }
        (Some(_), Some(_)) => {
            return Err(Error::invalid("simulate", "--setting and --omega are mutually exclusive"));
        }
    };
    let launch = match sim.state {
        Some((pos, vel)) => BallState::new(0.0, pos, vel),
        None => launch,
    };

    let truth = find_bounce(&launch, &omega, &constants, 1e-3, 3.0)?;
    let flight_time = truth.time - launch.t;
    let trajectory = simulate_observations(
        &launch,
        &omega,
        &constants,
        cfg.rate,
        launch.t + flight_time,
        cfg.noise_sigma,
        cfg.seed,
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0106));
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let logo = simulate_logo(
        crate::physics::logo_orientation_for_spin(&omega, phase),
        &omega,
        cfg.rate,
        flight_time,
        cfg.miss_prob,
        cfg.seed.wrapping_add(1),
    )?;

    std::fs::create_dir_all(&cfg.out_dir)?;
    let traj_path = cfg.out_dir.join("trajectory.csv");
    let logo_path = cfg.out_dir.join("logo.csv");
    let truth_path = cfg.out_dir.join("truth.json");
    std::fs::write(&traj_path, io::trajectory_to_csv(&trajectory))?;
    std::fs::write(&logo_path, io::logo_to_csv(&logo))?;
    std::fs::write(&truth_path, io::ground_truth_to_json(omega.omega, &launch, &truth))?;
    println!("{}", traj_path.display());
    println!("{}", logo_path.display());
    println!("{}", truth_path.display());
    Ok(())
}

fn cmd_fit_spin(cfg: &RunConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let trajectory = io::trajectory_from_csv(&text)?;
    let constants = cfg.constants()?;
    let estimate = estimate_spin(&trajectory, &constants, &cfg.fit_config())?;
    println!("{}", io::spin_estimate_to_json(&estimate));
    Ok(())
}

fn cmd_logo_spin(cfg: &RunConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or("").trim();
    let input = if header == "t,visible,lx,ly,lz" {
        LogoInput::Observations(io::logo_from_csv(&text)?)
    } else if header.starts_with("t,radius_px") {
        LogoInput::Contours(io::contours_from_csv(&text)?)
    } else {
        return Err(Error::Csv {
            line: 1,
            message: format!("unrecognized header `{header}`; expected a logo or contour CSV"),
        });
    };
    let estimate = estimate_spin_logo(&input, &cfg.logo_config())?;
    println!("{}", io::spin_estimate_to_json(&estimate));
    Ok(())
}

fn cmd_evaluate(cfg: &RunConfig) -> Result<bool> {
    let constants = cfg.constants()?;
    let experiment = ExperimentConfig {
        constants,
        n_per_setting: cfg.n_per_setting,
        noise_sigma: cfg.noise_sigma,
        rate: cfg.rate,
        truncation_fraction: cfg.truncation_fraction,
        seed: cfg.seed,
        jobs: cfg.jobs,
        fit: cfg.fit_config(),
    };
    let settings = make_settings();
    let report = eval::run_experiments(&settings, &experiment)?;

    std::fs::create_dir_all(&cfg.out_dir)?;
    std::fs::write(cfg.out_dir.join("bounce_table.csv"), io::bounce_to_csv(&report.bounce))?;
    std::fs::write(cfg.out_dir.join("bounce_table.txt"), eval::format_bounce_text(&report.bounce))?;
    std::fs::write(cfg.out_dir.join("cluster_table.csv"), io::cluster_to_csv(&report.cluster))?;
    std::fs::write(cfg.out_dir.join("cluster_table.txt"), eval::format_cluster_text(&report.cluster))?;
    std::fs::write(cfg.out_dir.join("report.json"), io::report_to_json(&report))?;

    print!("{}", eval::format_bounce_text(&report.bounce));
    println!();
    print!("{}", eval::format_cluster_text(&report.cluster));

    let spin_beats_baseline = report
        .bounce
        .rows
        .iter()
        .all(|r| r.n > 0 && r.fitted_mean_mm < r.nospin_mean_mm);
    let accuracy_ok = report.cluster.total_accuracy >= cfg.accept_min_accuracy;
    println!();
    println!(
        "fitted-spin beats no-spin in all settings: {}",
        if spin_beats_baseline { "yes" } else { "NO" }
    );
    println!(
        "clustering total accuracy {:.1}% (threshold {:.1}%)",
        100.0 * report.cluster.total_accuracy,
        100.0 * cfg.accept_min_accuracy
    );
    Ok(spin_beats_baseline && accuracy_ok)
}

/// Runs the CLI and returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let parsed = match parse_args(args) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INPUT;
        }
    };
    let outcome = match &parsed.command {
        Command::Simulate(sim) => cmd_simulate(&parsed.config, sim).map(|()| true),
        Command::FitSpin(path) => cmd_fit_spin(&parsed.config, path).map(|()| true),
        Command::LogoSpin(path) => cmd_logo_spin(&parsed.config, path).map(|()| true),
        Command::Evaluate => cmd_evaluate(&parsed.config),
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_ACCEPTANCE,
        Err(e) if e.is_estimation_error() => {
            println!("{}", io::error_to_json(&e));
            EXIT_ESTIMATION
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_INPUT
        }
    }
}
