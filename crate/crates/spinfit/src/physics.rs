//! Ball-flight force model, numerical integration, bounce detection, and
//! the synthetic observation generators used throughout the test suite.
//!
//! The acceleration of a ball with velocity `v` and constant angular
//! velocity `omega` is
//!
//! ```text
//! dv/dt = -k_D |v| v  +  k_M (omega x v)  -  (0, 0, g)
//! ```
//!
//! with the lumped drag factor `k_D = C_D rho_a A / (2 m)` (stored
//! positive; the leading minus sign lives in the formula) and Magnus
//! factor `k_M = C_M rho_a A r / (2 m)`.
//!
//! Coordinate frame: origin at the center of the table surface, x along
//! the table length (toward the far side / robot), y across the table,
//! z up. A bounce happens when the ball center descends to z equal to
//! the ball radius.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::logo_spin::LogoObservation;
use crate::rotmath::{Quat, BASE_LOGO_DIRECTION};

/// Default integrator step (s).
pub const DEFAULT_DT: f64 = 1e-3;
/// Largest permitted integrator step (s).
pub const MAX_DT: f64 = 0.01;
/// Sanity bound on ball speed (m/s).
pub const MAX_SPEED: f64 = 60.0;
/// Sanity bound on spin magnitude (rad/s), roughly 220 rev/s.
pub const MAX_SPIN: f64 = 1400.0;
/// A logo counts as visible when the z component of its direction
/// (toward the camera) exceeds this, i.e. within about 80 degrees of
/// the camera axis.
pub const LOGO_VISIBILITY_THRESHOLD: f64 = 0.17;

/// Mass, geometry, and aerodynamic coefficients of the ball plus the
/// factors derived from them.
///
/// Use [`PhysicalConstants::standard`] for a regulation 40 mm, 2.7 g
/// ball with drag coefficient 0.4 and lift (Magnus) coefficient 0.6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Ball mass (kg).
    pub mass: f64,
    /// Ball radius (m).
    pub radius: f64,
    /// Gravitational acceleration (m/s^2), positive down.
    pub gravity: f64,
    /// Drag coefficient C_D (dimensionless).
    pub drag_coefficient: f64,
    /// Lift / Magnus coefficient C_M (dimensionless).
    pub lift_coefficient: f64,
    /// Air density (kg/m^3).
    pub air_density: f64,
    /// Cross-section area r^2 pi (m^2). Derived.
    pub cross_section: f64,
    /// Lumped drag factor (1/m), stored positive. Derived.
    pub k_drag: f64,
    /// Lumped Magnus factor (dimensionless). Derived.
    pub k_magnus: f64,
}

impl PhysicalConstants {
    pub fn new(
        mass: f64,
        radius: f64,
        gravity: f64,
        drag_coefficient: f64,
        lift_coefficient: f64,
        air_density: f64,
    ) -> Result<PhysicalConstants> {
        for (name, v) in [
            ("mass", mass),
            ("radius", radius),
            ("gravity", gravity),
            ("air_density", air_density),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid("physical_constants", format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("drag_coefficient", drag_coefficient), ("lift_coefficient", lift_coefficient)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid("physical_constants", format!("{name} must be >= 0, got {v}")));
            }
        }
        let cross_section = radius * radius * std::f64::consts::PI;
        let k_drag = 0.5 * drag_coefficient * air_density * cross_section / mass;
        let k_magnus = 0.5 * lift_coefficient * air_density * cross_section * radius / mass;
        Ok(PhysicalConstants {
            mass,
            radius,
            gravity,
            drag_coefficient,
            lift_coefficient,
            air_density,
            cross_section,
            k_drag,
            k_magnus,
        })
    }

    /// Regulation ball and the usual coefficient choices:
    /// m = 2.7 g, r = 20 mm, g = 9.81, C_D = 0.4, C_M = 0.6,
    /// rho_a = 1.29 kg/m^3.
    pub fn standard() -> PhysicalConstants {
        PhysicalConstants::new(0.0027, 0.02, 9.81, 0.4, 0.6, 1.29).unwrap()
    }

    /// Same ball with a different drag coefficient.
    pub fn with_drag_coefficient(&self, c_d: f64) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.mass, self.radius, self.gravity, c_d, self.lift_coefficient, self.air_density)
    }

    /// Same ball with a different lift coefficient.
    pub fn with_lift_coefficient(&self, c_m: f64) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.mass, self.radius, self.gravity, self.drag_coefficient, c_m, self.air_density)
    }
}

/// Ball kinematic state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallState {
    /// Time (s).
    pub t: f64,
    /// Ball center position (m), table frame.
    pub position: Vec3,
    /// Velocity (m/s).
    pub velocity: Vec3,
}

impl BallState {
    pub fn new(t: f64, position: Vec3, velocity: Vec3) -> BallState {
        BallState { t, position, velocity }
    }

    fn validate(&self) -> Result<()> {
        if !self.t.is_finite() || !self.position.is_finite() || !self.velocity.is_finite() {
            return Err(Error::invalid("ball_state", "non-finite state"));
        }
        let speed = self.velocity.norm();
        if speed >= MAX_SPEED {
            return Err(Error::invalid(
                "ball_state",
                format!("speed {speed:.1} m/s exceeds the {MAX_SPEED} m/s sanity bound"),
            ));
        }
        Ok(())
    }
}

/// Constant angular velocity of the ball (rad/s); the direction is the
/// rotation axis by the right-hand rule.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinVector {
    pub omega: Vec3,
}

impl SpinVector {
    pub const ZERO: SpinVector = SpinVector { omega: Vec3::ZERO };

    pub fn new(omega: Vec3) -> Result<SpinVector> {
        if !omega.is_finite() {
            return Err(Error::invalid("spin", "non-finite spin vector"));
        }
        let mag = omega.norm();
        if mag > MAX_SPIN {
            return Err(Error::invalid(
                "spin",
                format!("|omega| = {mag:.0} rad/s exceeds the {MAX_SPIN} rad/s sanity bound"),
            ));
        }
        Ok(SpinVector { omega })
    }

    pub fn magnitude(&self) -> f64 {
        self.omega.norm()
    }

    /// Unit rotation axis, or `Vec3::ZERO` for (near-)zero spin.
    pub fn axis(&self) -> Vec3 {
        self.omega.normalized()
    }
}

/// One timestamped position observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallObservation {
    pub t: f64,
    pub position: Vec3,
}

/// An ordered sequence of position observations with strictly increasing
/// timestamps; the input format of the trajectory-based spin estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    observations: Vec<BallObservation>,
}

impl Trajectory {
    pub fn new(observations: Vec<BallObservation>) -> Result<Trajectory> {
        if observations.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: observations.len() });
        }
        for pair in observations.windows(2) {
            if !(pair[1].t > pair[0].t) {
                return Err(Error::invalid(
                    "trajectory",
                    format!("timestamps must strictly increase ({} then {})", pair[0].t, pair[1].t),
                ));
            }
        }
        if observations.iter().any(|o| !o.t.is_finite() || !o.position.is_finite()) {
            return Err(Error::invalid("trajectory", "non-finite observation"));
        }
        Ok(Trajectory { observations })
    }

    pub fn observations(&self) -> &[BallObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// New trajectory keeping only the observations at `keep` indices
    /// (must be sorted ascending).
    pub fn subset(&self, keep: &[usize]) -> Result<Trajectory> {
        Trajectory::new(keep.iter().map(|&i| self.observations[i]).collect())
    }
}

/// A densely sampled integration result: full kinematic states, unlike
/// the positions-only [`Trajectory`].
#[derive(Debug, Clone)]
pub struct Flight {
    states: Vec<BallState>,
}

impl Flight {
    pub fn states(&self) -> &[BallState] {
        &self.states
    }

    pub fn last(&self) -> &BallState {
        self.states.last().expect("flight has at least the initial state")
    }

    /// Positions-only view of the flight.
    pub fn trajectory(&self) -> Trajectory {
        Trajectory::new(
            self.states.iter().map(|s| BallObservation { t: s.t, position: s.position }).collect(),
        )
        .expect("integration produces strictly increasing timestamps")
    }
}

/// Where and when the ball center first descends to one ball radius
/// above the table surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BounceEvent {
    pub position: Vec3,
    pub time: f64,
}

/// Right-hand side of the flight ODE: drag, Magnus, and gravity.
pub fn acceleration(state: &BallState, spin: &SpinVector, c: &PhysicalConstants) -> Vec3 {
    let v = state.velocity;
    let drag = v * (-c.k_drag * v.norm());
    let magnus = spin.omega.cross(v) * c.k_magnus;
    drag + magnus + Vec3::new(0.0, 0.0, -c.gravity)
}

fn rk4_step(state: &BallState, spin: &SpinVector, c: &PhysicalConstants, h: f64) -> BallState {
    let accel = |pos: Vec3, vel: Vec3| -> Vec3 {
        acceleration(&BallState::new(state.t, pos, vel), spin, c)
    };
    let (x0, v0) = (state.position, state.velocity);

    let k1x = v0;
    let k1v = accel(x0, v0);
    let k2x = v0 + k1v * (h / 2.0);
    let k2v = accel(x0 + k1x * (h / 2.0), v0 + k1v * (h / 2.0));
    let k3x = v0 + k2v * (h / 2.0);
    let k3v = accel(x0 + k2x * (h / 2.0), v0 + k2v * (h / 2.0));
    let k4x = v0 + k3v * h;
    let k4v = accel(x0 + k3x * h, v0 + k3v * h);

    BallState {
        t: state.t + h,
        position: x0 + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6.0),
        velocity: v0 + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0),
    }
}

/// Integrates the flight ODE with fixed-step 4th-order Runge-Kutta from
/// `initial.t` to `t_end`, recording a state every `dt` (plus a final
/// partial step landing exactly on `t_end`).
///
/// Deterministic: identical inputs give identical output bytes.
pub fn integrate(
    initial: &BallState,
    spin: &SpinVector,
    c: &PhysicalConstants,
    dt: f64,
    t_end: f64,
) -> Result<Flight> {
    initial.validate()?;
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::invalid("dt", format!("dt must be in (0, {MAX_DT}] s, got {dt}")));
    }
    if !(t_end > initial.t) {
        return Err(Error::invalid("t_end", format!("t_end = {t_end} must exceed initial t = {}", initial.t)));
    }

    let span = t_end - initial.t;
    let n_full = (span / dt + 1e-9).floor() as usize;
    let mut states = Vec::with_capacity(n_full + 2);
    states.push(*initial);
    let mut current = *initial;
    for k in 1..=n_full {
        current = rk4_step(&current, spin, c, dt);
        // Re-derive t from the step index to avoid accumulating rounding.
        current.t = initial.t + dt * k as f64;
        current.validate()?;
        states.push(current);
    }
    let remainder = t_end - current.t;
    if remainder > 1e-12 {
        current = rk4_step(&current, spin, c, remainder);
        current.t = t_end;
        current.validate()?;
        states.push(current);
    }
    Ok(Flight { states })
}

/// Finds the first descending crossing of the bounce plane `z = radius`
/// in an integrated flight and refines it to 1e-6 s by bisecting the
/// bracketing step with single Runge-Kutta sub-steps.
pub fn bounce_point(flight: &Flight, spin: &SpinVector, c: &PhysicalConstants) -> Result<BounceEvent> {
    let plane = c.radius;
    let states = flight.states();
    let mut bracket = None;
    for pair in states.windows(2) {
        if pair[0].position.z > plane && pair[1].position.z <= plane {
            bracket = Some((pair[0], pair[1]));
            break;
        }
    }
    let (s0, s1) = bracket.ok_or(Error::NoBounce)?;

    let mut lo = 0.0;
    let mut hi = s1.t - s0.t;
    let state_at = |h: f64| -> BallState {
        if h == 0.0 {
            s0
        } else {
            rk4_step(&s0, spin, c, h)
        }
    };
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if state_at(mid).position.z > plane {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = 0.5 * (lo + hi);
    let hit = state_at(h);
    Ok(BounceEvent { position: hit.position, time: s0.t + h })
}

/// Integrates from `initial` until the first bounce (or `horizon`
/// seconds, whichever comes first) and reports the bounce event.
pub fn find_bounce(
    initial: &BallState,
    spin: &SpinVector,
    c: &PhysicalConstants,
    dt: f64,
    horizon: f64,
) -> Result<BounceEvent> {
    let flight = integrate(initial, spin, c, dt, initial.t + horizon)?;
    bounce_point(&flight, spin, c)
}

/// Samples the true flight at a camera rate and adds i.i.d. Gaussian
/// position noise per axis. Reproducible for a fixed `seed`.
///
/// The flight is integrated with the frame interval as the Runge-Kutta
/// step (subdivided when a slow camera would exceed the step ceiling),
/// so a zero-noise call returns states of [`integrate`] exactly.
pub fn simulate_observations(
    initial: &BallState,
    spin: &SpinVector,
    c: &PhysicalConstants,
    rate: f64,
    t_end: f64,
    noise_sigma: f64,
    seed: u64,
) -> Result<Trajectory> {
    if !(50.0..=500.0).contains(&rate) {
        return Err(Error::invalid("rate", format!("camera rate must be in [50, 500] Hz, got {rate}")));
    }
    if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
        return Err(Error::invalid("noise_sigma", format!("noise sigma must be >= 0, got {noise_sigma}")));
    }
    let frame_dt = 1.0 / rate;
    let substeps = (frame_dt / MAX_DT).ceil().max(1.0);
    let flight = integrate(initial, spin, c, frame_dt / substeps, t_end)?;
    // Keep only states on the frame grid; the integrator may append a
    // final partial step landing on t_end that belongs to no frame.
    let n_frames = ((t_end - initial.t) * rate + 1e-9).floor() as usize + 1;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let observations = flight
        .states()
        .iter()
        .step_by(substeps as usize)
        .take(n_frames)
        .map(|s| {
            let noise = Vec3::new(
                normal.sample(&mut rng) * noise_sigma,
                normal.sample(&mut rng) * noise_sigma,
                normal.sample(&mut rng) * noise_sigma,
            );
            BallObservation { t: s.t, position: s.position + noise }
        })
        .collect();
    Trajectory::new(observations)
}

/// Generates the logo track of a spinning ball: at every frame the ball
/// orientation is `exp(omega t)` composed with `initial_orientation`, and
/// the logo direction is that orientation applied to
/// [`BASE_LOGO_DIRECTION`].
///
/// A frame is visible when the logo direction points toward the camera
/// (z component above `visibility_threshold`) and a seeded Bernoulli draw
/// with success probability `1 - miss_prob` passes. Non-visible frames
/// are still emitted, carrying a zero direction.
#[allow(clippy::too_many_arguments)]
pub fn simulate_logo_with_threshold(
    initial_orientation: Quat,
    spin: &SpinVector,
    rate: f64,
    t_end: f64,
    miss_prob: f64,
    seed: u64,
    visibility_threshold: f64,
) -> Result<Vec<LogoObservation>> {
    if !(50.0..=500.0).contains(&rate) {
        return Err(Error::invalid("rate", format!("camera rate must be in [50, 500] Hz, got {rate}")));
    }
    if !(0.0..1.0).contains(&miss_prob) {
        return Err(Error::invalid("miss_prob", format!("miss probability must be in [0, 1), got {miss_prob}")));
    }
    if !(t_end > 0.0) {
        return Err(Error::invalid("t_end", format!("t_end must be > 0, got {t_end}")));
    }
    let mag = spin.magnitude();
    if mag > MAX_SPIN {
        return Err(Error::invalid("spin", "spin exceeds sanity bound"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_frames = (t_end * rate + 1e-9).floor() as usize + 1;
    let axis = spin.axis();
    let mut observations = Vec::with_capacity(n_frames);
    for k in 0..n_frames {
        let t = k as f64 / rate;
        let orientation = if mag > 0.0 {
            Quat::from_axis_angle(axis, mag * t) * initial_orientation
        } else {
            initial_orientation
        };
        let direction = orientation.rotate(BASE_LOGO_DIRECTION);
        let dropped = rng.gen::<f64>() < miss_prob;
        let visible = direction.z > visibility_threshold && !dropped;
        observations.push(LogoObservation {
            t,
            direction: if visible { direction } else { Vec3::ZERO },
            visible,
        });
    }
    Ok(observations)
}

/// A start orientation that gives the simulated logo a well-visible
/// circle around the given spin axis.
///
/// The logo is placed on the circle around the axis passing through the
/// camera direction, so part of every revolution is visible. For
/// near-vertical axes that circle would collapse onto the pole (the logo
/// would sit still), so its angular radius is floored at 60 degrees,
/// putting the logo on an always-visible latitude circle instead.
/// `phase` picks the start point on the circle.
pub fn logo_orientation_for_spin(spin: &SpinVector, phase: f64) -> Quat {
    let axis = if spin.magnitude() > 0.0 { spin.axis() } else { Vec3::Z };
    let polar = axis.angle_to(Vec3::Z);
    let rho = polar.clamp(60f64.to_radians(), 120f64.to_radians());
    let (e1, e2) = axis.orthonormal_basis();
    let start = axis * rho.cos() + (e1 * phase.cos() + e2 * phase.sin()) * rho.sin();
    let align_axis = BASE_LOGO_DIRECTION.cross(start);
    let angle = BASE_LOGO_DIRECTION.angle_to(start);
    if align_axis.norm() < 1e-9 {
        Quat::from_axis_angle(Vec3::X, angle)
    } else {
        Quat::from_axis_angle(align_axis, angle)
    }
}

/// [`simulate_logo_with_threshold`] with the default visibility
/// threshold of [`LOGO_VISIBILITY_THRESHOLD`].
pub fn simulate_logo(
    initial_orientation: Quat,
    spin: &SpinVector,
    rate: f64,
    t_end: f64,
    miss_prob: f64,
    seed: u64,
) -> Result<Vec<LogoObservation>> {
    simulate_logo_with_threshold(
        initial_orientation,
        spin,
        rate,
        t_end,
        miss_prob,
        seed,
        LOGO_VISIBILITY_THRESHOLD,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn derived_constants_match_hand_arithmetic() {
        let c = PhysicalConstants::standard();
        // Independently recomputed with a calculator.
        let area = 0.02f64 * 0.02 * std::f64::consts::PI;
        assert!((c.cross_section - area).abs() / area < 1e-12);
        let k_d = 0.5 * 0.4 * 1.29 * area / 0.0027;
        let k_m = 0.5 * 0.6 * 1.29 * area * 0.02 / 0.0027;
        assert!((c.k_drag - k_d).abs() / k_d < 1e-12);
        assert!((c.k_magnus - k_m).abs() / k_m < 1e-12);
        assert!(close(c.k_drag, 0.12008, 1e-5), "k_drag = {}", c.k_drag);
        assert!(close(c.k_magnus, 3.6024e-3, 1e-7), "k_magnus = {}", c.k_magnus);
    }

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(PhysicalConstants::new(0.0, 0.02, 9.81, 0.4, 0.6, 1.29).is_err());
        assert!(PhysicalConstants::new(0.0027, -0.02, 9.81, 0.4, 0.6, 1.29).is_err());
    }

    #[test]
    fn acceleration_at_rest_is_gravity_only() {
        let c = PhysicalConstants::standard();
        let state = BallState::new(0.0, Vec3::ZERO, Vec3::ZERO);
        let spin = SpinVector::new(Vec3::new(100.0, -40.0, 7.0)).unwrap();
        let a = acceleration(&state, &spin, &c);
        assert!((a - Vec3::new(0.0, 0.0, -9.81)).norm() < 1e-15);
    }

    #[test]
    fn topspin_magnus_points_down() {
        let c = PhysicalConstants::standard();
        let state = BallState::new(0.0, Vec3::ZERO, Vec3::new(5.0, 0.0, 0.0));
        let spin = SpinVector::new(Vec3::new(0.0, 100.0, 0.0)).unwrap();
        let a = acceleration(&state, &spin, &c);
        let magnus_z = a.z + c.gravity; // drag has no z component here
        assert!(magnus_z < 0.0, "topspin should push the ball down, got {magnus_z}");
    }

    #[test]
    fn drag_antiparallel_magnus_perpendicular() {
        let c = PhysicalConstants::standard();
        let v = Vec3::new(3.0, -2.0, 1.5);
        let omega = Vec3::new(50.0, 120.0, -30.0);
        let state = BallState::new(0.0, Vec3::ZERO, v);
        let spin = SpinVector::new(omega).unwrap();

        let drag = v * (-c.k_drag * v.norm());
        assert!((drag.dot(v) + c.k_drag * v.norm().powi(3)).abs() < 1e-9);

        let magnus = omega.cross(v) * c.k_magnus;
        assert!(magnus.dot(v).abs() < 1e-9 * magnus.norm() * v.norm());
        assert!(magnus.dot(omega).abs() < 1e-9 * magnus.norm() * omega.norm());

        // The full acceleration decomposes into exactly these pieces plus gravity.
        let a = acceleration(&state, &spin, &c);
        assert!((a - (drag + magnus + Vec3::new(0.0, 0.0, -c.gravity))).norm() < 1e-12);
    }

    #[test]
    fn integrate_matches_free_fall() {
        let c = PhysicalConstants::new(0.0027, 0.02, 9.81, 0.0, 0.0, 1.29).unwrap();
        let initial = BallState::new(0.0, Vec3::new(0.0, 0.0, 5.0), Vec3::ZERO);
        let flight = integrate(&initial, &SpinVector::ZERO, &c, 1e-3, 1.0).unwrap();
        let end = flight.last();
        assert!(close(end.position.z, 5.0 - 0.5 * 9.81, 1e-6), "z = {}", end.position.z);
        assert!(close(end.velocity.z, -9.81, 1e-9));
    }

    #[test]
    fn integrate_matches_parabola() {
        let c = PhysicalConstants::new(0.0027, 0.02, 9.81, 0.0, 0.0, 1.29).unwrap();
        let v0 = Vec3::new(3.0, 0.0, 2.0);
        let initial = BallState::new(0.5, Vec3::new(-1.0, 0.2, 0.3), v0);
        let flight = integrate(&initial, &SpinVector::ZERO, &c, 1e-3, 1.5).unwrap();
        for s in flight.states() {
            let tau = s.t - 0.5;
            let expect = Vec3::new(-1.0 + 3.0 * tau, 0.2, 0.3 + 2.0 * tau - 0.5 * 9.81 * tau * tau);
            assert!((s.position - expect).norm() < 1e-6, "at t = {}", s.t);
        }
    }

    #[test]
    fn integrate_self_convergence_under_dt_halving() {
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::new(0.0, 0.0, 0.4), Vec3::new(5.0, 0.5, 1.5));
        let spin = SpinVector::new(Vec3::new(0.0, 200.0, 0.0)).unwrap();
        let coarse = integrate(&initial, &spin, &c, 1e-3, 0.5).unwrap();
        let fine = integrate(&initial, &spin, &c, 5e-4, 0.5).unwrap();
        let d = (coarse.last().position - fine.last().position).norm();
        assert!(d < 1e-7, "dt halving moved the endpoint by {d} m");
    }

    #[test]
    fn integrate_rejects_bad_dt() {
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::ZERO, Vec3::ZERO);
        assert!(integrate(&initial, &SpinVector::ZERO, &c, 0.0, 1.0).is_err());
        assert!(integrate(&initial, &SpinVector::ZERO, &c, 0.011, 1.0).is_err());
        assert!(integrate(&initial, &SpinVector::ZERO, &c, 1e-3, 0.0).is_err());
    }

    #[test]
    fn energy_decreases_with_drag_only() {
        let c = PhysicalConstants::new(0.0027, 0.02, 9.81, 0.4, 0.0, 1.29).unwrap();
        let initial = BallState::new(0.0, Vec3::new(0.0, 0.0, 1.0), Vec3::new(6.0, 1.0, 2.0));
        let flight = integrate(&initial, &SpinVector::ZERO, &c, 1e-3, 0.8).unwrap();
        let energy = |s: &BallState| 0.5 * s.velocity.norm_squared() + c.gravity * s.position.z;
        let mut prev = energy(&flight.states()[0]);
        for s in &flight.states()[1..] {
            let e = energy(s);
            assert!(e <= prev + 1e-12, "energy rose at t = {}", s.t);
            prev = e;
        }
    }

    #[test]
    fn bounce_point_matches_free_fall() {
        let c = PhysicalConstants::new(0.0027, 0.02, 9.81, 0.0, 0.0, 1.29).unwrap();
        let initial = BallState::new(0.0, Vec3::new(0.0, 0.0, c.radius + 4.905), Vec3::ZERO);
        let flight = integrate(&initial, &SpinVector::ZERO, &c, 1e-3, 1.5).unwrap();
        let bounce = bounce_point(&flight, &SpinVector::ZERO, &c).unwrap();
        assert!(close(bounce.time, 1.0, 1e-4), "bounce at t = {}", bounce.time);
        // Time is refined to 1e-6 s; at ~10 m/s impact speed that bounds
        // the plane miss to ~1e-5 m.
        assert!(close(bounce.position.z, c.radius, 2e-5));
    }

    #[test]
    fn no_bounce_when_rising() {
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::new(0.0, 0.0, 0.5), Vec3::new(0.0, 0.0, 5.0));
        let flight = integrate(&initial, &SpinVector::ZERO, &c, 1e-3, 0.3).unwrap();
        assert!(matches!(bounce_point(&flight, &SpinVector::ZERO, &c), Err(Error::NoBounce)));
    }

    #[test]
    fn topspin_bounces_shorter_than_no_spin() {
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::new(-1.0, 0.0, 0.3), Vec3::new(4.0, 0.0, 1.0));
        let topspin = SpinVector::new(Vec3::new(0.0, 250.0, 0.0)).unwrap();
        let b_spin = find_bounce(&initial, &topspin, &c, 1e-3, 3.0).unwrap();
        let b_none = find_bounce(&initial, &SpinVector::ZERO, &c, 1e-3, 3.0).unwrap();
        assert!(
            b_spin.position.x < b_none.position.x,
            "topspin {} vs no spin {}",
            b_spin.position.x,
            b_none.position.x
        );
    }

    #[test]
    fn observations_without_noise_lie_on_flight() {
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::new(-1.0, 0.0, 0.3), Vec3::new(4.0, 0.0, 1.5));
        let spin = SpinVector::new(Vec3::new(0.0, 100.0, 0.0)).unwrap();
        let traj = simulate_observations(&initial, &spin, &c, 380.0, 0.4, 0.0, 3).unwrap();
        let flight = integrate(&initial, &spin, &c, 1.0 / 380.0, 0.4).unwrap();
        assert_eq!(traj.len(), flight.states().len());
        for (o, s) in traj.observations().iter().zip(flight.states()) {
            assert_eq!(o.position, s.position);
        }
    }

    #[test]
    fn slow_camera_rates_subdivide_the_integration_step() {
        // 50 Hz frames are 20 ms apart, beyond the 10 ms step ceiling;
        // the simulator must subdivide internally and still sample on
        // the frame grid.
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::new(-1.0, 0.0, 0.3), Vec3::new(4.0, 0.0, 1.5));
        let spin = SpinVector::new(Vec3::new(0.0, 100.0, 0.0)).unwrap();
        let traj = simulate_observations(&initial, &spin, &c, 50.0, 0.4, 0.0, 3).unwrap();
        assert_eq!(traj.len(), 21);
        let fine = integrate(&initial, &spin, &c, 1e-3, 0.4).unwrap();
        for (k, o) in traj.observations().iter().enumerate() {
            assert!((o.t - k as f64 / 50.0).abs() < 1e-12);
            let reference = fine
                .states()
                .iter()
                .min_by(|a, b| (a.t - o.t).abs().partial_cmp(&(b.t - o.t).abs()).unwrap())
                .unwrap();
            assert!((o.position - reference.position).norm() < 1e-7, "frame {k}");
        }
    }

    #[test]
    fn observations_are_deterministic_per_seed() {
        let c = PhysicalConstants::standard();
        let initial = BallState::new(0.0, Vec3::new(-1.0, 0.0, 0.3), Vec3::new(4.0, 0.0, 1.5));
        let spin = SpinVector::new(Vec3::new(30.0, 100.0, -20.0)).unwrap();
        let a = simulate_observations(&initial, &spin, &c, 380.0, 0.4, 0.002, 99).unwrap();
        let b = simulate_observations(&initial, &spin, &c, 380.0, 0.4, 0.002, 99).unwrap();
        assert_eq!(a, b);
        let c2 = simulate_observations(&initial, &spin, &c, 380.0, 0.4, 0.002, 100).unwrap();
        assert_ne!(a, c2);
    }

    #[test]
    fn observation_noise_has_requested_sigma() {
        let c = PhysicalConstants::new(0.0027, 0.02, 9.81, 0.0, 0.0, 1.29).unwrap();
        let sigma = 0.002;
        let mut per_axis: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        // Pool several short flights to collect 10k+ samples per axis while
        // keeping speeds inside the sanity bound.
        for seed in 0..10u64 {
            let initial = BallState::new(0.0, Vec3::new(0.0, 0.0, 30.0), Vec3::ZERO);
            let noisy = simulate_observations(&initial, &SpinVector::ZERO, &c, 500.0, 2.0, sigma, seed).unwrap();
            let clean = integrate(&initial, &SpinVector::ZERO, &c, 1.0 / 500.0, 2.0).unwrap();
            for (o, s) in noisy.observations().iter().zip(clean.states()) {
                let d = o.position - s.position;
                per_axis[0].push(d.x);
                per_axis[1].push(d.y);
                per_axis[2].push(d.z);
            }
        }
        for axis in &per_axis {
            assert!(axis.len() >= 10_000);
            let mean = axis.iter().sum::<f64>() / axis.len() as f64;
            let var = axis.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (axis.len() - 1) as f64;
            let s = var.sqrt();
            assert!((s - sigma).abs() / sigma < 0.05, "sample sigma {s}");
        }
    }

    #[test]
    fn logo_static_when_spin_zero() {
        let q0 = Quat::from_axis_angle(Vec3::new(1.0, 1.0, 0.2), 0.7);
        let track = simulate_logo(q0, &SpinVector::ZERO, 380.0, 0.05, 0.0, 1).unwrap();
        let first = track[0].direction;
        for obs in &track {
            assert_eq!(obs.direction, first);
        }
    }

    #[test]
    fn logo_fixed_when_spinning_about_logo_axis() {
        // Logo at (0,0,1) and spin about z: the logo direction is a fixed
        // point of the rotation.
        let spin = SpinVector::new(Vec3::new(0.0, 0.0, 300.0)).unwrap();
        let track = simulate_logo(Quat::IDENTITY, &spin, 380.0, 0.05, 0.0, 1).unwrap();
        for obs in &track {
            assert!(obs.visible);
            assert!((obs.direction - BASE_LOGO_DIRECTION).norm() < 1e-12);
        }
    }

    #[test]
    fn logo_traces_circle_at_known_rate() {
        // 10 rev/s about x at 380 Hz: adjacent frames are 360/38 degrees apart.
        let spin = SpinVector::new(Vec3::new(2.0 * std::f64::consts::PI * 10.0, 0.0, 0.0)).unwrap();
        let track =
            simulate_logo_with_threshold(Quat::IDENTITY, &spin, 380.0, 0.1, 0.0, 1, -2.0).unwrap();
        let expect = (360.0f64 / 38.0).to_radians();
        for pair in track.windows(2) {
            let angle = pair[0].direction.angle_to(pair[1].direction);
            assert!((angle - expect).abs() < 1e-9, "step angle {angle}");
        }
    }

    #[test]
    fn logo_visibility_threshold_and_miss_prob() {
        let spin = SpinVector::new(Vec3::new(2.0 * std::f64::consts::PI * 10.0, 0.0, 0.0)).unwrap();
        let track = simulate_logo(Quat::IDENTITY, &spin, 380.0, 0.2, 0.0, 1).unwrap();
        let visible = track.iter().filter(|o| o.visible).count();
        assert!(visible > 10 && visible < track.len(), "some frames hidden by geometry");
        for obs in &track {
            if obs.visible {
                assert!(obs.direction.z > LOGO_VISIBILITY_THRESHOLD);
                assert!((obs.direction.norm() - 1.0).abs() < 1e-12);
            } else {
                assert_eq!(obs.direction, Vec3::ZERO);
            }
        }

        // With miss_prob close to 1 almost everything is dropped.
        let sparse = simulate_logo(Quat::IDENTITY, &spin, 380.0, 0.2, 0.95, 1).unwrap();
        let sparse_visible = sparse.iter().filter(|o| o.visible).count();
        assert!(sparse_visible < visible / 4);
    }
}
