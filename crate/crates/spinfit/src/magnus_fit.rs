//! Spin estimation from the ball trajectory.
//!
//! A cubic polynomial is fitted per axis to a window of observations;
//! its first and second derivatives approximate velocity and
//! acceleration. Substituting them into the flight equation and moving
//! everything except the Magnus term to the right-hand side yields, at
//! every sample time `t`,
//!
//! ```text
//! k_M (omega x P'(t)) = P''(t) + k_D |P'(t)| P'(t) + (0, 0, g)
//! ```
//!
//! Stacking these rows over all sample times gives an overdetermined
//! linear system `M omega = a` solved by least squares (Householder QR).
//! Because each right-hand drag row is parallel to the velocity while
//! the Magnus columns are perpendicular to it, the solution does not
//! depend on the drag factor `k_D` at all; only `k_M` scales it.
//!
//! The module also filters spurious detections from the start of a
//! track and predicts the bounce point from a trajectory prefix, with or
//! without a spin value.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::{condition_number_3col, lstsq, Vec3};
use crate::physics::{
    find_bounce, BallObservation, BallState, BounceEvent, PhysicalConstants, SpinVector, Trajectory,
    MAX_SPIN,
};

/// Minimum window length for a cubic fit: four coefficients plus one
/// residual degree of freedom.
pub const MIN_FIT_POINTS: usize = 5;
/// Condition-number ceiling above which the Magnus system is rejected.
pub const MAX_CONDITION_NUMBER: f64 = 1e8;
/// Minimum angular spread of the velocity directions in the window.
pub const MIN_VELOCITY_SPREAD: f64 = 0.1 * std::f64::consts::PI / 180.0;

/// Per-axis cubic fit of a trajectory window in centered time
/// `tau = t - t_origin`.
#[derive(Debug, Clone)]
pub struct PolyFit3 {
    /// `coeffs[axis][k]` multiplies `tau^k`; axes are x, y, z.
    coeffs: [[f64; 4]; 3],
    t_origin: f64,
    t_start: f64,
    t_end: f64,
    rms_residual: f64,
}

impl PolyFit3 {
    /// Fitted position at time `t` (seconds, same clock as the input).
    pub fn position(&self, t: f64) -> Vec3 {
        let tau = t - self.t_origin;
        let mut out = [0.0; 3];
        for (axis, c) in self.coeffs.iter().enumerate() {
            out[axis] = ((c[3] * tau + c[2]) * tau + c[1]) * tau + c[0];
        }
        Vec3::new(out[0], out[1], out[2])
    }

    /// First derivative of the fit at `t` (m/s).
    pub fn velocity(&self, t: f64) -> Vec3 {
        let tau = t - self.t_origin;
        let mut out = [0.0; 3];
        for (axis, c) in self.coeffs.iter().enumerate() {
            out[axis] = (3.0 * c[3] * tau + 2.0 * c[2]) * tau + c[1];
        }
        Vec3::new(out[0], out[1], out[2])
    }

    /// Second derivative of the fit at `t` (m/s^2).
    pub fn acceleration(&self, t: f64) -> Vec3 {
        let tau = t - self.t_origin;
        let mut out = [0.0; 3];
        for (axis, c) in self.coeffs.iter().enumerate() {
            out[axis] = 6.0 * c[3] * tau + 2.0 * c[2];
        }
        Vec3::new(out[0], out[1], out[2])
    }

    /// Per-axis coefficients of `tau^0 .. tau^3` (axes x, y, z).
    pub fn coefficients(&self) -> &[[f64; 4]; 3] {
        &self.coeffs
    }

    /// The time subtracted before evaluating the polynomial (midpoint of
    /// the fit window, for conditioning).
    pub fn time_origin(&self) -> f64 {
        self.t_origin
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    /// Root-mean-square 3D distance between observations and fit (m).
    pub fn rms_residual(&self) -> f64 {
        self.rms_residual
    }
}

/// Which pipeline produced a spin estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinMethod {
    /// Magnus-force fit on the ball trajectory.
    Trajectory,
    /// Logo tracking via background-difference style contour input.
    LogoBackground,
    /// Logo positions ingested from an external pose regressor.
    LogoCnnExternal,
}

impl SpinMethod {
    /// Stable string tag used in JSON output.
    pub fn tag(&self) -> &'static str {
        match self {
            SpinMethod::Trajectory => "trajectory",
            SpinMethod::LogoBackground => "logo_bg",
            SpinMethod::LogoCnnExternal => "logo_cnn-external",
        }
    }
}

/// A fitted spin vector with solver diagnostics.
#[derive(Debug, Clone)]
pub struct SpinEstimate {
    pub omega: SpinVector,
    /// RMS of the stacked equation residuals. For the trajectory method
    /// this is in m/s^2 (residual of `M omega = a`); for logo methods it
    /// is the angle-regression RMS in degrees.
    pub rms_residual: f64,
    /// Spectral condition number of the solved system (>= 1). Logo
    /// estimates report 1.0.
    pub condition_number: f64,
    /// Number of samples that entered the solve.
    pub n_points: usize,
    pub method: SpinMethod,
    /// Set when the pipeline saw no usable signal (e.g. a logo that never
    /// moves) and returned a zero-spin default rather than a real fit.
    pub low_confidence: bool,
}

/// Tuning knobs for the trajectory estimator.
#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    /// The cubic is fitted over the most recent `max_window` observations.
    ///
    /// Short windows track the true flight closely and are best for clean
    /// data (the default, 30, keeps the worst-case model error below 1%
    /// up to 900 rad/s). Under camera noise the acceleration estimate
    /// needs far more support: at sigma = 2 mm a 30-frame window is
    /// useless while 150 frames at 380 Hz bring the spin error down to
    /// ~15 rad/s, so noisy pipelines should raise this (see
    /// [`FitConfig::noisy`]).
    pub max_window: usize,
    /// Outlier rejection residual threshold (m).
    ///
    /// The candidate residual is an extrapolation of a five-point cubic,
    /// which amplifies observation noise about fivefold, so the threshold
    /// must stay well above that: 0.1 m rejects nothing statistically at
    /// millimeter noise yet catches the decimeter-scale spurious blobs
    /// (hands, racket) it exists for.
    pub outlier_threshold: f64,
    /// How many observations at the start of the track are scanned for
    /// outliers.
    pub outlier_head_len: usize,
    /// Minimum observations (after filtering) for a spin estimate.
    pub min_observations: usize,
    /// Integrator step used by bounce prediction (s).
    pub prediction_dt: f64,
    /// Bounce search horizon past the last observation (s).
    pub prediction_horizon: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_window: 30,
            outlier_threshold: 0.1,
            outlier_head_len: 20,
            min_observations: 10,
            prediction_dt: 1e-3,
            prediction_horizon: 3.0,
        }
    }
}

impl FitConfig {
    /// Configuration tuned for millimeter-level camera noise: a long fit
    /// window so the second derivative averages the noise down.
    pub fn noisy() -> FitConfig {
        FitConfig { max_window: 150, ..FitConfig::default() }
    }
}

fn fit_cubic(points: &[BallObservation]) -> Result<PolyFit3> {
    let n = points.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: n });
    }
    let t_start = points[0].t;
    let t_end = points[n - 1].t;
    let t_origin = 0.5 * (t_start + t_end);

    let mut design = Vec::with_capacity(n * 4);
    let mut rhs = Vec::with_capacity(n * 3);
    for p in points {
        let tau = p.t - t_origin;
        design.extend_from_slice(&[1.0, tau, tau * tau, tau * tau * tau]);
        rhs.extend_from_slice(&[p.position.x, p.position.y, p.position.z]);
    }
    let sol = lstsq(n, 4, &design, &rhs, 3)?;

    let mut coeffs = [[0.0; 4]; 3];
    for k in 0..4 {
        for axis in 0..3 {
            coeffs[axis][k] = sol[k * 3 + axis];
        }
    }
    let mut fit = PolyFit3 { coeffs, t_origin, t_start, t_end, rms_residual: 0.0 };
    let ssr: f64 = points.iter().map(|p| (p.position - fit.position(p.t)).norm_squared()).sum();
    fit.rms_residual = (ssr / n as f64).sqrt();
    Ok(fit)
}

/// Ordinary least-squares cubic over `window` (an index range into the
/// trajectory), solved per axis in centered time.
pub fn fit_polynomial(traj: &Trajectory, window: Range<usize>) -> Result<PolyFit3> {
    let obs = traj.observations();
    if window.start >= window.end || window.end > obs.len() {
        return Err(Error::invalid("window", format!("bad window {window:?} for {} observations", obs.len())));
    }
    fit_cubic(&obs[window])
}

/// Solves the stacked Magnus system `M omega = a` at the given sample
/// times and packages the solution with residual and conditioning
/// diagnostics.
pub fn solve_spin(fit: &PolyFit3, sample_times: &[f64], c: &PhysicalConstants) -> Result<SpinEstimate> {
    let n = sample_times.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }

    let velocities: Vec<Vec3> = sample_times.iter().map(|&t| fit.velocity(t)).collect();
    let mut max_spread = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_spread = max_spread.max(velocities[i].angle_to(velocities[j]));
        }
    }
    if max_spread <= MIN_VELOCITY_SPREAD {
        return Err(Error::DegenerateGeometry { condition_number: f64::INFINITY });
    }

    let mut m = Vec::with_capacity(3 * n * 3);
    let mut a = Vec::with_capacity(3 * n);
    for (&t, v) in sample_times.iter().zip(&velocities) {
        // omega x v = -[v]x omega, so each block is -k_M [v]x.
        let k = c.k_magnus;
        m.extend_from_slice(&[0.0, k * v.z, -k * v.y]);
        m.extend_from_slice(&[-k * v.z, 0.0, k * v.x]);
        m.extend_from_slice(&[k * v.y, -k * v.x, 0.0]);

        let rhs = fit.acceleration(t) + *v * (c.k_drag * v.norm()) + Vec3::new(0.0, 0.0, c.gravity);
        a.extend_from_slice(&[rhs.x, rhs.y, rhs.z]);
    }

    let condition_number = condition_number_3col(3 * n, &m);
    if !(condition_number <= MAX_CONDITION_NUMBER) {
        return Err(Error::DegenerateGeometry { condition_number });
    }

    let sol = lstsq(3 * n, 3, &m, &a, 1)?;
    let omega_vec = Vec3::new(sol[0], sol[1], sol[2]);
    if !omega_vec.is_finite() || omega_vec.norm() > MAX_SPIN {
        return Err(Error::ImplausibleEstimate { magnitude: omega_vec.norm() });
    }
    let omega = SpinVector::new(omega_vec).expect("bounds checked above");

    let mut ssr = 0.0;
    for (row, &ai) in a.iter().enumerate() {
        let pred = m[row * 3] * sol[0] + m[row * 3 + 1] * sol[1] + m[row * 3 + 2] * sol[2];
        ssr += (pred - ai) * (pred - ai);
    }
    let rms_residual = (ssr / (3.0 * n as f64)).sqrt();

    Ok(SpinEstimate {
        omega,
        rms_residual,
        condition_number,
        n_points: n,
        method: SpinMethod::Trajectory,
        low_confidence: false,
    })
}

/// Removes spurious detections from the start of a track.
///
/// The first `head_len` observations are scanned back to front: a cubic
/// fitted to a sliding window of five already-accepted points is
/// extrapolated to the next-earlier candidate, and the candidate is
/// dropped when its residual exceeds `threshold`. Later observations are
/// never touched; a consistent shift of the whole track is absorbed by
/// the fit and removes nothing.
pub fn filter_outliers(traj: &Trajectory, threshold: f64, head_len: usize) -> Result<Trajectory> {
    if !(threshold > 0.0) {
        return Err(Error::invalid("threshold", format!("outlier threshold must be > 0, got {threshold}")));
    }
    let n = traj.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: n });
    }
    let obs = traj.observations();
    // Fall back to scanning whatever the track can afford when it is
    // shorter than head_len + 5.
    let scan_end = head_len.min(n - MIN_FIT_POINTS);
    if scan_end == 0 {
        return Ok(traj.clone());
    }

    // Seed window: the five observations right after the scan region.
    let mut window: Vec<usize> = (scan_end..scan_end + MIN_FIT_POINTS).collect();
    let mut removed = vec![false; n];
    for candidate in (0..scan_end).rev() {
        let points: Vec<BallObservation> = window.iter().map(|&i| obs[i]).collect();
        let fit = fit_cubic(&points)?;
        let residual = (obs[candidate].position - fit.position(obs[candidate].t)).norm();
        if residual > threshold {
            removed[candidate] = true;
        } else {
            window.pop();
            window.insert(0, candidate);
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
    if keep.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: keep.len() });
    }
    traj.subset(&keep)
}

/// Full trajectory pipeline: outlier filtering, cubic fit over the most
/// recent window, then the Magnus least-squares solve at the observation
/// times inside that window.
pub fn estimate_spin(traj: &Trajectory, c: &PhysicalConstants, cfg: &FitConfig) -> Result<SpinEstimate> {
    let filtered = filter_outliers(traj, cfg.outlier_threshold, cfg.outlier_head_len)?;
    let n = filtered.len();
    if n < cfg.min_observations {
        return Err(Error::InsufficientData { needed: cfg.min_observations, got: n });
    }
    let start = n - cfg.max_window.min(n);
    let fit = fit_polynomial(&filtered, start..n)?;
    let times: Vec<f64> = filtered.observations()[start..n].iter().map(|o| o.t).collect();
    solve_spin(&fit, &times, c)
}

/// Predicts the bounce point from a trajectory prefix.
///
/// The prefix is smoothed by the cubic fit; its endpoint position and
/// velocity seed a forward integration with the supplied spin (`None`
/// integrates with zero spin, the no-spin baseline).
pub fn predict_bounce(
    prefix: &Trajectory,
    spin: Option<&SpinVector>,
    c: &PhysicalConstants,
    cfg: &FitConfig,
) -> Result<BounceEvent> {
    let n = prefix.len();
    let start = n - cfg.max_window.min(n);
    let fit = fit_polynomial(prefix, start..n)?;
    let t_n = prefix.observations()[n - 1].t;
    let state = BallState::new(t_n, fit.position(t_n), fit.velocity(t_n));
    let spin_eff = spin.copied().unwrap_or(SpinVector::ZERO);
    find_bounce(&state, &spin_eff, c, cfg.prediction_dt, cfg.prediction_horizon)
}
