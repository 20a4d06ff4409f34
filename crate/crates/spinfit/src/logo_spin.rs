//! Spin estimation from the movement of the ball's brand logo.
//!
//! The pipeline works on per-frame logo observations in a camera-aligned
//! ball frame (z toward the camera):
//!
//! 1. [`project_contour`] lifts logo contour pixels onto the unit sphere.
//! 2. [`contour_centroid`] averages and normalizes them into a logo
//!    direction.
//! 3. When a logo sits at the edge of the visible hemisphere its contour
//!    is only a circular segment, which biases the centroid toward the
//!    camera. [`segment_correct`] estimates the segment half-angle from
//!    the contour spread and pushes the centroid back out using the
//!    closed-form circular-segment centroid distance.
//! 4. [`fit_plane`] fits the rotation plane through the logo directions,
//!    minimizing distance to the plane and to the circle in which the
//!    plane cuts the unit sphere.
//! 5. [`angular_velocity`] projects the directions into the plane,
//!    accumulates signed angle steps (taking the long way around,
//!    `360 - angle`, across gaps of two or more hidden frames, since the
//!    logo then passed through the far hemisphere), and regresses the
//!    accumulated angle on time. The regression slope is the angular
//!    speed; the plane normal gives the axis.

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen3, Mat3, Vec3};
use crate::magnus_fit::{SpinEstimate, SpinMethod};
use crate::physics::{SpinVector, MAX_SPIN};
use crate::rotmath::Quat;

/// A logo contour pixel relative to the ball center in the image crop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPixel {
    pub u: f64,
    pub v: f64,
}

/// A timestamped logo direction on the unit sphere of the camera-aligned
/// ball frame. Non-visible frames carry a zero direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogoObservation {
    pub t: f64,
    pub direction: Vec3,
    pub visible: bool,
}

/// The plane containing the circle traced by a rotating logo direction.
///
/// Points p of the circle satisfy `normal . p = offset` on the unit
/// sphere; the circle radius is `sqrt(1 - offset^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPlane {
    pub normal: Vec3,
    pub offset: f64,
}

impl RotationPlane {
    pub fn new(normal: Vec3, offset: f64) -> Result<RotationPlane> {
        let n = normal.normalized();
        if n == Vec3::ZERO {
            return Err(Error::invalid("plane_normal", "normal must be non-zero"));
        }
        if !(offset.is_finite() && offset.abs() <= 1.0) {
            return Err(Error::invalid("plane_offset", format!("offset must be in [-1, 1], got {offset}")));
        }
        Ok(RotationPlane { normal: n, offset })
    }

    pub fn circle_radius(&self) -> f64 {
        (1.0 - self.offset * self.offset).max(0.0).sqrt()
    }
}

/// One sample of the accumulated-rotation track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSample {
    pub t: f64,
    pub accumulated_deg: f64,
}

/// Accumulated in-plane logo angle over time plus its regression line.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTrack {
    pub samples: Vec<AngleSample>,
    /// Slope of the ordinary least-squares line through the samples.
    pub slope_deg_per_s: f64,
    /// RMS of the regression residuals (degrees).
    pub rms_deg: f64,
    /// Set when a visibility gap was too long to span unambiguously
    /// (more than about a full revolution at the preceding rate).
    pub aliased: bool,
}

/// One camera frame worth of contour input.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourFrame {
    pub t: f64,
    pub radius_px: f64,
    pub pixels: Vec<ContourPixel>,
}

/// Input variants for [`estimate_spin_logo`]: sphere directions (e.g.
/// simulated or from an external pose regressor) or raw pixel contours.
#[derive(Debug, Clone)]
pub enum LogoInput {
    Observations(Vec<LogoObservation>),
    Contours(Vec<ContourFrame>),
}

/// Geometry and tuning parameters of the logo pipeline.
#[derive(Debug, Clone, Copy)]
pub struct LogoConfig {
    /// Physical logo radius (m).
    pub logo_radius: f64,
    /// Physical ball radius (m).
    pub ball_radius: f64,
    /// A contour with points beyond this polar angle (degrees from the
    /// camera axis) counts as partially visible.
    pub limb_polar_threshold_deg: f64,
    /// Weight of the circle-distance term in the plane fit.
    pub plane_lambda: f64,
    /// Per-frame angle floor below which the track counts as not rotating.
    pub min_delta_deg: f64,
}

impl Default for LogoConfig {
    fn default() -> Self {
        LogoConfig {
            logo_radius: 0.0065,
            ball_radius: 0.02,
            limb_polar_threshold_deg: 80.0,
            plane_lambda: 1.0,
            min_delta_deg: 0.05,
        }
    }
}

/// Stable evaluation of `x - sin(x)`, switching to the Taylor series for
/// small `x` where direct subtraction cancels catastrophically.
fn x_minus_sin_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        // x^3/6 - x^5/120 + x^7/5040 - x^9/362880 + x^11/39916800
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for k in [20.0, 42.0, 72.0, 110.0] {
            term *= -x2 / k;
            sum += term;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// Area of a circular segment of half-angle `alpha` in a circle of radius
/// `radius`: `r^2/2 (2 alpha - sin(2 alpha))`. `alpha = pi` is the full
/// disk.
pub fn segment_area(radius: f64, alpha: f64) -> f64 {
    0.5 * radius * radius * x_minus_sin_x(2.0 * alpha)
}

/// Distance from the circle center to the centroid of a circular segment
/// of half-angle `alpha`: `4 r sin^3(alpha) / (3 (2 alpha - sin 2 alpha))`.
///
/// Limits: `alpha = pi` (full disk) gives 0, `alpha -> 0` (sliver at the
/// rim) tends to `radius`.
pub fn segment_centroid_distance(radius: f64, alpha: f64) -> f64 {
    if alpha == std::f64::consts::PI {
        // Full disk: exactly the center. sin(pi) only rounds to ~1e-16,
        // so the closed form would return a harmless but nonzero value.
        return 0.0;
    }
    let s = alpha.sin();
    let denom = 3.0 * x_minus_sin_x(2.0 * alpha);
    if denom == 0.0 {
        // alpha -> 0 limit.
        return radius;
    }
    4.0 * radius * s * s * s / denom
}

/// Inverts [`segment_area`] for `alpha` by bisection; the area is
/// strictly increasing on (0, pi]. Returns `None` when `area` is outside
/// `(0, pi r^2]`.
pub fn invert_segment_area(area: f64, radius: f64) -> Option<f64> {
    let full = std::f64::consts::PI * radius * radius;
    if !(area > 0.0) || area > full * (1.0 + 1e-12) {
        return None;
    }
    if area >= full {
        return Some(std::f64::consts::PI);
    }
    let mut lo = 0.0f64;
    let mut hi = std::f64::consts::PI;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if segment_area(radius, mid) < area {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Lifts contour pixels onto the camera-facing unit hemisphere:
/// `x = u / radius_px`, `y = v / radius_px`, `z = sqrt(1 - x^2 - y^2)`.
///
/// Pixels up to one pixel outside the ball disc are clamped onto the rim;
/// anything further out is rejected.
pub fn project_contour(pixels: &[ContourPixel], radius_px: f64) -> Result<Vec<Vec3>> {
    if !(radius_px > 0.0) {
        return Err(Error::invalid("radius_px", format!("ball pixel radius must be > 0, got {radius_px}")));
    }
    if pixels.is_empty() {
        return Err(Error::EmptyContour);
    }
    let tol = 1.0 + 1.0 / radius_px;
    let mut out = Vec::with_capacity(pixels.len());
    for p in pixels {
        let x = p.u / radius_px;
        let y = p.v / radius_px;
        let rho = (x * x + y * y).sqrt();
        if rho > tol {
            return Err(Error::invalid(
                "contour",
                format!("pixel ({}, {}) lies {:.2} px outside the ball disc", p.u, p.v, (rho - 1.0) * radius_px),
            ));
        }
        if rho > 1.0 {
            out.push(Vec3::new(x / rho, y / rho, 0.0));
        } else {
            out.push(Vec3::new(x, y, (1.0 - x * x - y * y).max(0.0).sqrt()));
        }
    }
    Ok(out)
}

/// Normalized arithmetic mean of the 3D contour points.
pub fn contour_centroid(points: &[Vec3]) -> Result<Vec3> {
    if points.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: points.len() });
    }
    let mut mean = Vec3::ZERO;
    for p in points {
        mean += *p;
    }
    mean = mean / points.len() as f64;
    if mean.norm() <= 1e-6 {
        return Err(Error::DegenerateCentroid);
    }
    Ok(mean.normalized())
}

/// Whether a projected contour is a full logo circle or cut off by the
/// edge of the visible hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentClass {
    Full,
    Partial,
}

/// A contour counts as partial when any point lies closer to the sphere
/// limb than the polar-angle threshold (degrees; default 80).
pub fn classify_segment(points: &[Vec3], limb_polar_threshold_deg: f64) -> SegmentClass {
    let threshold = limb_polar_threshold_deg.to_radians();
    let partial = points.iter().any(|p| p.z.clamp(-1.0, 1.0).acos() > threshold);
    if partial {
        SegmentClass::Partial
    } else {
        SegmentClass::Full
    }
}

/// Result of the circular-segment centroid correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentCorrection {
    pub direction: Vec3,
    /// True when a correction was actually applied.
    pub applied: bool,
    /// True when a partial contour produced an out-of-range area estimate
    /// and the uncorrected centroid was returned as a fallback.
    pub fallback: bool,
}

/// Corrects the centroid of a partially visible logo.
///
/// The visible contour of a cut-off logo forms (approximately) a circular
/// segment; its point centroid sits closer to the camera than the true
/// logo center. The segment area is estimated as `pi` times the squared
/// mean arc distance from the contour points to the centroid (exact for
/// full circles), inverted numerically for the segment half-angle, and
/// the closed-form centroid distance then says how far to rotate the
/// centroid toward the limb.
pub fn segment_correct(
    points: &[Vec3],
    centroid: Vec3,
    logo_radius: f64,
    ball_radius: f64,
    full_visibility: bool,
) -> Result<SegmentCorrection> {
    if !(logo_radius > 0.0 && ball_radius > 0.0 && logo_radius < ball_radius) {
        return Err(Error::invalid(
            "logo_radius",
            format!("need 0 < logo radius < ball radius, got {logo_radius} and {ball_radius}"),
        ));
    }
    if full_visibility {
        return Ok(SegmentCorrection { direction: centroid, applied: false, fallback: false });
    }
    if points.is_empty() {
        return Err(Error::EmptyContour);
    }

    // Mean arc distance from the contour to the centroid, in meters on
    // the ball surface.
    let mean_dist = ball_radius
        * points.iter().map(|p| p.angle_to(centroid)).sum::<f64>()
        / points.len() as f64;
    let area = std::f64::consts::PI * mean_dist * mean_dist;

    let alpha = match invert_segment_area(area, logo_radius) {
        Some(a) => a,
        None => {
            return Ok(SegmentCorrection { direction: centroid, applied: false, fallback: true });
        }
    };
    let d = segment_centroid_distance(logo_radius, alpha);
    let beta = d / ball_radius;

    // Tangent direction from the centroid toward the limb-most part of
    // the contour; the true logo center is further out than the biased
    // centroid, so the correction pushes toward the limb.
    let max_polar = points.iter().map(|p| p.z.clamp(-1.0, 1.0).acos()).fold(0.0, f64::max);
    let band = 2.0f64.to_radians();
    let mut limb_mean = Vec3::ZERO;
    for p in points {
        if p.z.clamp(-1.0, 1.0).acos() >= max_polar - band {
            limb_mean += *p;
        }
    }
    let mut toward_limb = limb_mean - centroid * limb_mean.dot(centroid);
    if toward_limb.norm() < 1e-9 {
        // Degenerate contour shape: fall back to the direction of
        // increasing polar angle.
        toward_limb = centroid * centroid.z - Vec3::Z;
    }
    let w = toward_limb.normalized();
    if w == Vec3::ZERO {
        return Ok(SegmentCorrection { direction: centroid, applied: false, fallback: true });
    }

    let direction = centroid * beta.cos() + w * beta.sin();
    Ok(SegmentCorrection { direction, applied: true, fallback: false })
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

fn plane_objective(points: &[Vec3], normal: Vec3, offset: f64, lambda: f64) -> f64 {
    let circle_radius = (1.0 - offset * offset).max(0.0).sqrt();
    let mut e = 0.0;
    for p in points {
        let plane_dist = normal.dot(*p) - offset;
        let radial = (*p - normal * offset).norm() - circle_radius;
        e += plane_dist * plane_dist + lambda * radial * radial;
    }
    e
}

/// Fits the rotation plane through the visible logo directions.
///
/// Initialized by the total-least-squares plane (centroid plus smallest
/// covariance eigenvector), then refined by bounded coordinate descent on
/// a combined objective: squared distance to the plane plus `lambda`
/// times squared distance to the circle cut from the unit sphere.
pub fn fit_plane_weighted(observations: &[LogoObservation], lambda: f64) -> Result<RotationPlane> {
    let points: Vec<Vec3> = observations.iter().filter(|o| o.visible).map(|o| o.direction).collect();
    if points.len() < 3 {
        return Err(Error::InsufficientVisibility { visible: points.len(), needed: 3 });
    }

    let mut mean = Vec3::ZERO;
    for p in &points {
        mean += *p;
    }
    mean = mean / points.len() as f64;

    // Everything inside half a degree of one direction: the plane (and
    // with it the spin axis) is unconstrained.
    let spread_limit = 0.5f64.to_radians();
    let mean_dir = mean.normalized();
    if mean_dir != Vec3::ZERO && points.iter().all(|p| p.angle_to(mean_dir) < spread_limit) {
        return Err(Error::SpinAxisIndeterminate);
    }

    let mut cov = Mat3([[0.0; 3]; 3]);
    for p in &points {
        let d = *p - mean;
        cov = cov.add_mat(&Mat3::outer(d, d));
    }
    let (_, eigvecs) = sym_eigen3(&cov);
    let mut normal = eigvecs.row(0);
    let mut offset = normal.dot(mean);

    let eval = |n: Vec3, d: f64| plane_objective(&points, n, d, lambda);
    let mut best = eval(normal, offset);
    for _ in 0..60 {
        let before = best;
        let (e1, e2) = normal.orthonormal_basis();
        for tangent in [e1, e2] {
            let n0 = normal;
            let f = |u: f64| eval((n0 + tangent * u).normalized(), offset);
            let u = golden_min(&f, -0.7, 0.7, 1e-12);
            let candidate = (n0 + tangent * u).normalized();
            let val = eval(candidate, offset);
            if val < best {
                best = val;
                normal = candidate;
            }
        }
        let n0 = normal;
        let g = |d: f64| eval(n0, d);
        let lo = (offset - 0.5).max(-0.999_999);
        let hi = (offset + 0.5).min(0.999_999);
        let d = golden_min(&g, lo, hi, 1e-12);
        let val = eval(n0, d);
        if val < best {
            best = val;
            offset = d;
        }
        if before - best < 1e-14 * (1.0 + best) {
            break;
        }
    }

    // Canonical orientation: positive offset; for great circles make the
    // leading normal component positive.
    if offset < -1e-12 {
        normal = -normal;
        offset = -offset;
    } else if offset.abs() <= 1e-12 {
        let lead = if normal.x.abs() > 1e-12 {
            normal.x
        } else if normal.y.abs() > 1e-12 {
            normal.y
        } else {
            normal.z
        };
        if lead < 0.0 {
            normal = -normal;
        }
    }
    RotationPlane::new(normal, offset.clamp(-1.0, 1.0))
}

/// [`fit_plane_weighted`] with the default circle-term weight of 1.
pub fn fit_plane(observations: &[LogoObservation]) -> Result<RotationPlane> {
    fit_plane_weighted(observations, 1.0)
}

fn wrap_deg(a: f64) -> f64 {
    let r = a.rem_euclid(360.0);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

/// Projects the logo directions into the rotation plane, accumulates
/// signed angle steps, and regresses the accumulated angle on time.
///
/// Step rules:
/// - adjacent or single-gap steps take the angle representative closest
///   (per frame) to the previous per-frame step, which unwraps fast
///   rotations;
/// - across gaps of two or more missing frames the logo crossed the
///   hidden hemisphere, so the step takes the long way around:
///   `360 - angle` degrees, opposite in sign to the short arc.
///
/// Returns the track together with a [`SpinEstimate`] whose vector is
/// the regression slope times the plane normal. If no per-frame step
/// exceeds `min_delta_deg`, a zero-spin estimate flagged low-confidence
/// is returned instead of an error.
pub fn angular_velocity(
    observations: &[LogoObservation],
    plane: &RotationPlane,
    min_delta_deg: f64,
) -> Result<(AngleTrack, SpinEstimate)> {
    let visible: Vec<(usize, &LogoObservation)> =
        observations.iter().enumerate().filter(|(_, o)| o.visible).collect();
    if visible.len() < 2 {
        return Err(Error::InsufficientVisibility { visible: visible.len(), needed: 2 });
    }

    let (e1, e2) = plane.normal.orthonormal_basis();
    let angles: Vec<f64> = visible
        .iter()
        .map(|(_, o)| e2.dot(o.direction).atan2(e1.dot(o.direction)).to_degrees())
        .collect();

    let mut samples = Vec::with_capacity(visible.len());
    samples.push(AngleSample { t: visible[0].1.t, accumulated_deg: 0.0 });
    let mut accumulated = 0.0;
    let mut prev_per_frame: Option<f64> = None;
    let mut max_short_delta = 0.0f64;
    let mut aliased = false;

    for k in 1..visible.len() {
        let frame_gap = (visible[k].0 - visible[k - 1].0) as f64;
        let missing = visible[k].0 - visible[k - 1].0 - 1;
        let short = wrap_deg(angles[k] - angles[k - 1]);
        max_short_delta = max_short_delta.max(short.abs());

        let step = if missing >= 2 {
            // Half-revolution rule: the logo passed behind the ball, so
            // the traversal is the long angle in the opposite sense of
            // the short arc.
            if let Some(rate) = prev_per_frame {
                if (rate * frame_gap).abs() > 360.0 {
                    aliased = true;
                }
            }
            if short == 0.0 {
                360.0 * prev_per_frame.map_or(1.0, f64::signum)
            } else {
                -short.signum() * (360.0 - short.abs())
            }
        } else {
            match prev_per_frame {
                Some(rate) => {
                    let mut best = short;
                    let mut best_err = (short / frame_gap - rate).abs();
                    for k_wrap in [-2.0f64, -1.0, 1.0, 2.0] {
                        let cand = short + 360.0 * k_wrap;
                        let err = (cand / frame_gap - rate).abs();
                        if err < best_err {
                            best_err = err;
                            best = cand;
                        }
                    }
                    best
                }
                None => short,
            }
        };
        accumulated += step;
        prev_per_frame = Some(step / frame_gap);
        samples.push(AngleSample { t: visible[k].1.t, accumulated_deg: accumulated });
    }

    // Ordinary least-squares line through (t, accumulated angle).
    let n = samples.len() as f64;
    let t_mean = samples.iter().map(|s| s.t).sum::<f64>() / n;
    let a_mean = samples.iter().map(|s| s.accumulated_deg).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for s in &samples {
        sxx += (s.t - t_mean) * (s.t - t_mean);
        sxy += (s.t - t_mean) * (s.accumulated_deg - a_mean);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rms = (samples
        .iter()
        .map(|s| {
            let fitted = a_mean + slope * (s.t - t_mean);
            (s.accumulated_deg - fitted) * (s.accumulated_deg - fitted)
        })
        .sum::<f64>()
        / n)
        .sqrt();

    let track = AngleTrack { samples, slope_deg_per_s: slope, rms_deg: rms, aliased };

    if max_short_delta < min_delta_deg {
        let estimate = SpinEstimate {
            omega: SpinVector::ZERO,
            rms_residual: rms,
            condition_number: 1.0,
            n_points: visible.len(),
            method: SpinMethod::LogoBackground,
            low_confidence: true,
        };
        return Ok((track, estimate));
    }

    let omega_vec = plane.normal * slope.to_radians();
    if !omega_vec.is_finite() || omega_vec.norm() > MAX_SPIN {
        return Err(Error::ImplausibleEstimate { magnitude: omega_vec.norm() });
    }
    let estimate = SpinEstimate {
        omega: SpinVector::new(omega_vec).expect("bounds checked above"),
        rms_residual: rms,
        condition_number: 1.0,
        n_points: visible.len(),
        method: SpinMethod::LogoBackground,
        low_confidence: aliased,
    };
    Ok((track, estimate))
}

/// Converts contour frames into logo observations using the projection,
/// centroid, and segment-correction steps. Frames with an empty contour
/// or a degenerate centroid come out as non-visible.
pub fn contours_to_observations(frames: &[ContourFrame], cfg: &LogoConfig) -> Result<Vec<LogoObservation>> {
    let mut out = Vec::with_capacity(frames.len());
    for frame in frames {
        if frame.pixels.len() < 3 {
            out.push(LogoObservation { t: frame.t, direction: Vec3::ZERO, visible: false });
            continue;
        }
        let points = project_contour(&frame.pixels, frame.radius_px)?;
        let centroid = match contour_centroid(&points) {
            Ok(c) => c,
            Err(Error::DegenerateCentroid) => {
                out.push(LogoObservation { t: frame.t, direction: Vec3::ZERO, visible: false });
                continue;
            }
            Err(e) => return Err(e),
        };
        let class = classify_segment(&points, cfg.limb_polar_threshold_deg);
        let corrected = segment_correct(
            &points,
            centroid,
            cfg.logo_radius,
            cfg.ball_radius,
            class == SegmentClass::Full,
        )?;
        out.push(LogoObservation { t: frame.t, direction: corrected.direction, visible: true });
    }
    Ok(out)
}

/// Full result of the logo pipeline, for callers that want the
/// intermediate geometry along with the spin.
#[derive(Debug, Clone)]
pub struct LogoAnalysis {
    pub plane: RotationPlane,
    pub track: AngleTrack,
    pub estimate: SpinEstimate,
}

/// Runs the complete logo pipeline and returns plane, angle track, and
/// spin estimate.
pub fn analyze_logo(input: &LogoInput, cfg: &LogoConfig) -> Result<LogoAnalysis> {
    let storage;
    let observations: &[LogoObservation] = match input {
        LogoInput::Observations(obs) => obs,
        LogoInput::Contours(frames) => {
            storage = contours_to_observations(frames, cfg)?;
            &storage
        }
    };
    let visible = observations.iter().filter(|o| o.visible).count();
    if visible < 3 {
        return Err(Error::InsufficientVisibility { visible, needed: 3 });
    }
    let plane = fit_plane_weighted(observations, cfg.plane_lambda)?;
    let (track, estimate) = angular_velocity(observations, &plane, cfg.min_delta_deg)?;
    Ok(LogoAnalysis { plane, track, estimate })
}

/// Estimates the ball spin from logo observations or contours.
pub fn estimate_spin_logo(input: &LogoInput, cfg: &LogoConfig) -> Result<SpinEstimate> {
    analyze_logo(input, cfg).map(|a| a.estimate)
}

/// Converts a timestamped ball orientation (e.g. from an external pose
/// regressor) into a logo observation by rotating the base logo
/// direction.
pub fn pose_to_observation(t: f64, orientation: &Quat, visible: bool) -> LogoObservation {
    LogoObservation {
        t,
        direction: if visible {
            orientation.rotate(crate::rotmath::BASE_LOGO_DIRECTION)
        } else {
            Vec3::ZERO
        },
        visible,
    }
}

/// Runs the logo pipeline on externally regressed poses.
///
/// Each pose is reduced to its logo direction first, which discards the
/// (unreliable) twist about the logo axis; the rest of the pipeline is
/// identical to [`estimate_spin_logo`]. The estimate carries the
/// external-regressor method tag.
pub fn estimate_spin_from_poses(
    poses: &[(f64, Quat, bool)],
    cfg: &LogoConfig,
) -> Result<SpinEstimate> {
    let observations: Vec<LogoObservation> =
        poses.iter().map(|(t, q, visible)| pose_to_observation(*t, q, *visible)).collect();
    let mut estimate = estimate_spin_logo(&LogoInput::Observations(observations), cfg)?;
    estimate.method = SpinMethod::LogoCnnExternal;
    Ok(estimate)
}
