//! Synthetic bounce-prediction and spin-classification benchmarks, plus
//! the robot bat-pitch rule.
//!
//! Nine launch settings (backspin / sidespin / topspin at three power
//! levels) are simulated with observation noise; each trajectory is run
//! through the trajectory spin estimator, the bounce point is predicted
//! once with the fitted spin and once with the no-spin baseline, and the
//! horizontal miss against the simulated truth is tabulated per setting.
//! The same estimates feed a nearest-cluster-center classification
//! scored per setting, the way a ball-machine recognition session would
//! be.
//!
//! The spin magnitudes and launch states of the catalog are synthetic
//! (real throwing-machine settings are not public); results are meant to
//! be compared by ordering and ratio, not absolute millimeters.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::magnus_fit::{estimate_spin, filter_outliers, predict_bounce, FitConfig, SpinEstimate};
use crate::physics::{
    find_bounce, simulate_observations, BallState, BounceEvent, PhysicalConstants, SpinVector,
};

/// Table length (m); x spans [-1.37, 1.37].
pub const TABLE_LENGTH: f64 = 2.74;
/// Table width (m); y spans [-0.7625, 0.7625].
pub const TABLE_WIDTH: f64 = 1.525;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinType {
    Backspin,
    Sidespin,
    Topspin,
}

impl SpinType {
    pub fn label(&self) -> &'static str {
        match self {
            SpinType::Backspin => "backspin",
            SpinType::Sidespin => "sidespin",
            SpinType::Topspin => "topspin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLevel {
    Low,
    Medium,
    High,
}

impl SpinLevel {
    pub fn label(&self) -> &'static str {
        match self {
            SpinLevel::Low => "low",
            SpinLevel::Medium => "medium",
            SpinLevel::High => "high",
        }
    }
}

/// One throwing-machine setting: nominal spin and launch state.
#[derive(Debug, Clone)]
pub struct SpinSetting {
    pub spin_type: SpinType,
    pub level: SpinLevel,
    pub omega: SpinVector,
    pub launch: BallState,
}

impl SpinSetting {
    /// Canonical name, e.g. `topspin:high`; also the CLI selector.
    pub fn name(&self) -> String {
        format!("{}:{}", self.spin_type.label(), self.level.label())
    }
}

/// The deterministic nine-setting catalog.
///
/// Spin magnitudes are 60 / 180 / 360 rad/s for low / medium / high with
/// launch speeds coupled to the level (faster machine wheels add both
/// speed and spin). The frame convention ties topspin to +y spin and
/// backspin to -y for a ball flying toward +x; sidespin is about +z.
/// Launch states are tuned so that every simulated flight bounces on the
/// table with a generous pre-bounce flight time for the estimator.
pub fn make_settings() -> Vec<SpinSetting> {
    let levels: [(SpinLevel, f64, f64); 3] = [
        (SpinLevel::Low, 60.0, 4.5),
        (SpinLevel::Medium, 180.0, 5.5),
        (SpinLevel::High, 360.0, 7.0),
    ];
    let mut settings = Vec::with_capacity(9);
    for spin_type in [SpinType::Backspin, SpinType::Sidespin, SpinType::Topspin] {
        for &(level, spin_mag, speed) in &levels {
            let omega = match spin_type {
                SpinType::Backspin => Vec3::new(0.0, -spin_mag, 0.0),
                SpinType::Topspin => Vec3::new(0.0, spin_mag, 0.0),
                SpinType::Sidespin => Vec3::new(0.0, 0.0, spin_mag),
            };
            // Vertical launch component per type: backspin floats (Magnus
            // lift), so it needs a flat or downward launch at high power;
            // topspin dives and needs loft. Sidespin curves in y, so it
            // starts offset with inward velocity.
            let (vz, y0, vy): (f64, f64, f64) = match (spin_type, level) {
                (SpinType::Backspin, SpinLevel::Low) => (2.5, 0.0, 0.0),
                (SpinType::Backspin, SpinLevel::Medium) => (1.2, 0.0, 0.0),
                (SpinType::Backspin, SpinLevel::High) => (-0.45, 0.0, 0.0),
                (SpinType::Sidespin, SpinLevel::Low) => (2.8, -0.1, -0.2),
                (SpinType::Sidespin, SpinLevel::Medium) => (2.1, -0.3, -0.6),
                (SpinType::Sidespin, SpinLevel::High) => (1.6, -0.5, -1.4),
                (SpinType::Topspin, SpinLevel::Low) => (3.0, 0.0, 0.0),
                (SpinType::Topspin, SpinLevel::Medium) => (3.1, 0.0, 0.0),
                (SpinType::Topspin, SpinLevel::High) => (3.9, 0.0, 0.0),
            };
            let vx = (speed * speed - vz * vz - vy * vy).sqrt();
            let launch = BallState::new(0.0, Vec3::new(-2.0, y0, 0.3), Vec3::new(vx, vy, vz));
            settings.push(SpinSetting {
                spin_type,
                level,
                omega: SpinVector::new(omega).expect("catalog spins are in bounds"),
                launch,
            });
        }
    }
    settings
}

/// Linear bat-pitch rule: the racket pitch (degrees) as a function of
/// the y component of the incoming spin in deg/s.
///
/// Anchored at +360 deg/s -> 28 deg (heavy topspin: closed bat) and
/// -360 deg/s -> -40 deg (heavy backspin: open bat), interpolating
/// linearly in between and clamping beyond the anchors.
pub fn bat_pitch(beta_spin_deg_per_s: f64) -> f64 {
    let x = beta_spin_deg_per_s.clamp(-360.0, 360.0);
    -6.0 + 34.0 * x / 360.0
}

/// Accuracy of one setting's classification.
#[derive(Debug, Clone)]
pub struct SettingAccuracy {
    pub name: String,
    pub accuracy: f64,
    pub n: usize,
}

/// Result of the nearest-center spin-type classification.
#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub per_setting: Vec<SettingAccuracy>,
    pub total_accuracy: f64,
    /// Median spin per setting, the cluster centers (rad/s).
    pub centers: Vec<(String, Vec3)>,
    /// Set when two settings produced identical centers and the
    /// assignment had to fall back to the name tie-break.
    pub degenerate: bool,
}

fn component_median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Classifies every estimate to the nearest cluster center, where each
/// setting's center is the component-wise median of its own estimates.
///
/// `estimates[i]` are the fitted spins of `settings[i]`. Accuracy per
/// setting is the fraction of its estimates assigned back to it. Exact
/// distance ties go to the lexicographically first setting name.
pub fn cluster_classify(
    settings: &[SpinSetting],
    estimates: &[Vec<SpinEstimate>],
) -> Result<ClusterReport> {
    if settings.len() != estimates.len() {
        return Err(Error::invalid(
            "estimates",
            format!("{} settings but {} estimate groups", settings.len(), estimates.len()),
        ));
    }
    for group in estimates {
        if group.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: group.len() });
        }
    }

    let names: Vec<String> = settings.iter().map(|s| s.name()).collect();
    let centers: Vec<Vec3> = estimates
        .iter()
        .map(|group| {
            let mut xs: Vec<f64> = group.iter().map(|e| e.omega.omega.x).collect();
            let mut ys: Vec<f64> = group.iter().map(|e| e.omega.omega.y).collect();
            let mut zs: Vec<f64> = group.iter().map(|e| e.omega.omega.z).collect();
            Vec3::new(component_median(&mut xs), component_median(&mut ys), component_median(&mut zs))
        })
        .collect();

    let mut degenerate = false;
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            if (centers[i] - centers[j]).norm() == 0.0 {
                degenerate = true;
            }
        }
    }

    let assign = |omega: Vec3| -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (idx, c) in centers.iter().enumerate() {
            let d = (omega - *c).norm();
            let better = d < best_d || (d == best_d && names[idx] < names[best]);
            if better {
                best = idx;
                best_d = d;
            }
        }
        best
    };

    let mut per_setting = Vec::with_capacity(settings.len());
    let mut correct_total = 0usize;
    let mut n_total = 0usize;
    for (idx, group) in estimates.iter().enumerate() {
        let correct = group.iter().filter(|e| assign(e.omega.omega) == idx).count();
        correct_total += correct;
        n_total += group.len();
        per_setting.push(SettingAccuracy {
            name: names[idx].clone(),
            accuracy: correct as f64 / group.len() as f64,
            n: group.len(),
        });
    }

    Ok(ClusterReport {
        per_setting,
        total_accuracy: correct_total as f64 / n_total as f64,
        centers: names.into_iter().zip(centers).collect(),
        degenerate,
    })
}

/// One row of the bounce-prediction table.
#[derive(Debug, Clone)]
pub struct BounceRow {
    pub setting: String,
    pub fitted_mean_mm: f64,
    pub fitted_std_mm: f64,
    pub nospin_mean_mm: f64,
    pub nospin_std_mm: f64,
    pub n: usize,
    pub excluded: usize,
}

/// The bounce-prediction comparison across all settings.
#[derive(Debug, Clone)]
pub struct BounceBenchmark {
    pub rows: Vec<BounceRow>,
}

/// Everything recorded about one benchmark trajectory; serialized into
/// the JSON report for external plotting.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub setting: String,
    pub index: usize,
    pub seed: u64,
    pub omega_true: Vec3,
    pub omega_estimate: Option<Vec3>,
    pub bounce_true: BounceEvent,
    pub fitted_error_mm: Option<f64>,
    pub nospin_error_mm: Option<f64>,
    /// Error tag when this trajectory was excluded from the statistics.
    pub exclusion: Option<String>,
}

/// Experiment harness parameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub constants: PhysicalConstants,
    pub n_per_setting: usize,
    pub noise_sigma: f64,
    pub rate: f64,
    /// Fraction of the pre-bounce flight fed to the estimator.
    pub truncation_fraction: f64,
    pub seed: u64,
    /// Worker threads for the per-trajectory fan-out.
    pub jobs: usize,
    pub fit: FitConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            constants: PhysicalConstants::standard(),
            n_per_setting: 50,
            noise_sigma: 0.002,
            rate: 380.0,
            truncation_fraction: 0.6,
            seed: 1,
            jobs: 1,
            fit: FitConfig::noisy(),
        }
    }
}

/// Combined output of [`run_experiments`].
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub records: Vec<TrajectoryRecord>,
    pub bounce: BounceBenchmark,
    pub cluster: ClusterReport,
}

fn trajectory_seed(base: u64, setting_idx: usize, k: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((setting_idx as u64) << 32)
        .wrapping_add(k as u64)
}

fn run_one(setting: &SpinSetting, cfg: &ExperimentConfig, index: usize, seed: u64) -> TrajectoryRecord {
    let c = &cfg.constants;
    let mut record = TrajectoryRecord {
        setting: setting.name(),
        index,
        seed,
        omega_true: setting.omega.omega,
        omega_estimate: None,
        bounce_true: BounceEvent { position: Vec3::ZERO, time: f64::NAN },
        fitted_error_mm: None,
        nospin_error_mm: None,
        exclusion: None,
    };

    let truth = match find_bounce(&setting.launch, &setting.omega, c, 1e-3, 3.0) {
        Ok(b) => b,
        Err(e) => {
            record.exclusion = Some(e.tag().to_string());
            return record;
        }
    };
    record.bounce_true = truth;

    let t_end = setting.launch.t + cfg.truncation_fraction * (truth.time - setting.launch.t);
    let run = || -> Result<(Vec3, f64, f64)> {
        let traj = simulate_observations(
            &setting.launch,
            &setting.omega,
            c,
            cfg.rate,
            t_end,
            cfg.noise_sigma,
            seed,
        )?;
        let filtered = filter_outliers(&traj, cfg.fit.outlier_threshold, cfg.fit.outlier_head_len)?;
        let estimate = estimate_spin(&filtered, c, &cfg.fit)?;
        let fitted = predict_bounce(&filtered, Some(&estimate.omega), c, &cfg.fit)?;
        let nospin = predict_bounce(&filtered, None, c, &cfg.fit)?;
        let horizontal = |b: &BounceEvent| {
            let d = b.position - truth.position;
            (d.x * d.x + d.y * d.y).sqrt() * 1000.0
        };
        Ok((estimate.omega.omega, horizontal(&fitted), horizontal(&nospin)))
    };
    match run() {
        Ok((omega, fitted_mm, nospin_mm)) => {
            record.omega_estimate = Some(omega);
            record.fitted_error_mm = Some(fitted_mm);
            record.nospin_error_mm = Some(nospin_mm);
        }
        Err(e) => record.exclusion = Some(e.tag().to_string()),
    }
    record
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs the full benchmark: `n_per_setting` noisy trajectories per
/// setting, spin estimation, paired bounce predictions, and clustering.
///
/// Deterministic for a fixed config seed: every trajectory derives its
/// own seed from (base seed, setting, index), independent of the worker
/// fan-out order.
pub fn run_experiments(settings: &[SpinSetting], cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if settings.is_empty() {
        return Err(Error::invalid("settings", "no settings"));
    }
    if cfg.n_per_setting < 2 {
        return Err(Error::InsufficientData { needed: 2, got: cfg.n_per_setting });
    }
    if !(0.05..=0.95).contains(&cfg.truncation_fraction) {
        return Err(Error::invalid(
            "truncation_fraction",
            format!("must be in [0.05, 0.95], got {}", cfg.truncation_fraction),
        ));
    }

    let tasks: Vec<(usize, usize)> = (0..settings.len())
        .flat_map(|s| (0..cfg.n_per_setting).map(move |k| (s, k)))
        .collect();

    let jobs = cfg.jobs.max(1).min(tasks.len());
    let mut records: Vec<Option<TrajectoryRecord>> = vec![None; tasks.len()];
    if jobs == 1 {
        for (i, &(s, k)) in tasks.iter().enumerate() {
            records[i] = Some(run_one(&settings[s], cfg, k, trajectory_seed(cfg.seed, s, k)));
        }
    } else {
        let chunks: Vec<Vec<(usize, usize, usize)>> = (0..jobs)
            .map(|w| {
                tasks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i % jobs == w)
                    .map(|(i, &(s, k))| (i, s, k))
                    .collect()
            })
            .collect();
        let results: Vec<Vec<(usize, TrajectoryRecord)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        chunk
                            .into_iter()
                            .map(|(i, s, k)| {
                                (i, run_one(&settings[s], cfg, k, trajectory_seed(cfg.seed, s, k)))
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for worker in results {
            for (i, record) in worker {
                records[i] = Some(record);
            }
        }
    }
    let records: Vec<TrajectoryRecord> = records.into_iter().map(|r| r.expect("all tasks ran")).collect();

    // Bounce table.
    let mut rows = Vec::with_capacity(settings.len());
    for (s, setting) in settings.iter().enumerate() {
        let of_setting: Vec<&TrajectoryRecord> =
            records.iter().skip(s * cfg.n_per_setting).take(cfg.n_per_setting).collect();
        let fitted: Vec<f64> = of_setting.iter().filter_map(|r| r.fitted_error_mm).collect();
        let nospin: Vec<f64> = of_setting.iter().filter_map(|r| r.nospin_error_mm).collect();
        let excluded = of_setting.iter().filter(|r| r.exclusion.is_some()).count();
        let (fm, fs) = mean_std(&fitted);
        let (nm, ns) = mean_std(&nospin);
        rows.push(BounceRow {
            setting: setting.name(),
            fitted_mean_mm: fm,
            fitted_std_mm: fs,
            nospin_mean_mm: nm,
            nospin_std_mm: ns,
            n: fitted.len(),
            excluded,
        });
    }
    let bounce = BounceBenchmark { rows };

    // Clustering over the successful estimates.
    let estimate_groups: Vec<Vec<SpinEstimate>> = (0..settings.len())
        .map(|s| {
            records
                .iter()
                .skip(s * cfg.n_per_setting)
                .take(cfg.n_per_setting)
                .filter_map(|r| {
                    r.omega_estimate.map(|omega| SpinEstimate {
                        omega: SpinVector { omega },
                        rms_residual: 0.0,
                        condition_number: 1.0,
                        n_points: 0,
                        method: crate::magnus_fit::SpinMethod::Trajectory,
                        low_confidence: false,
                    })
                })
                .collect()
        })
        .collect();
    let cluster = if estimate_groups.iter().all(|g| g.len() >= 2) {
        cluster_classify(settings, &estimate_groups)?
    } else {
        // Too few surviving estimates to form every cluster center (an
        // extreme-noise stress run): report zero accuracy rather than
        // aborting, so the caller still sees the degraded table.
        ClusterReport {
            per_setting: settings
                .iter()
                .zip(&estimate_groups)
                .map(|(s, g)| SettingAccuracy { name: s.name(), accuracy: 0.0, n: g.len() })
                .collect(),
            total_accuracy: 0.0,
            centers: Vec::new(),
            degenerate: true,
        }
    };

    Ok(ExperimentReport { records, bounce, cluster })
}

/// Bounce table only; see [`run_experiments`].
pub fn bounce_benchmark(settings: &[SpinSetting], cfg: &ExperimentConfig) -> Result<BounceBenchmark> {
    run_experiments(settings, cfg).map(|r| r.bounce)
}

/// Renders the bounce table as aligned text.
pub fn format_bounce_text(b: &BounceBenchmark) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>12} {:>8} {:>14} {:>8} {:>5} {:>5}",
        "setting", "fitted[mm]", "std", "no-spin[mm]", "std", "n", "excl"
    );
    for r in &b.rows {
        let _ = writeln!(
            out,
            "{:<16} {:>12.2} {:>8.2} {:>14.2} {:>8.2} {:>5} {:>5}",
            r.setting, r.fitted_mean_mm, r.fitted_std_mm, r.nospin_mean_mm, r.nospin_std_mm, r.n, r.excluded
        );
    }
    out
}

/// Renders the clustering report as aligned text.
pub fn format_cluster_text(c: &ClusterReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<16} {:>9} {:>5}", "setting", "accuracy", "n");
    for s in &c.per_setting {
        let _ = writeln!(out, "{:<16} {:>8.1}% {:>5}", s.name, 100.0 * s.accuracy, s.n);
    }
    let _ = writeln!(out, "{:<16} {:>8.1}%", "total", 100.0 * c.total_accuracy);
    if c.degenerate {
        let _ = writeln!(out, "warning: identical cluster centers, tie-break applied");
    }
    out
}
