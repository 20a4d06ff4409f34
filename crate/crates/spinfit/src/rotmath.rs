//! Rotation representations, conversions, and distance metrics on SO(3).
//!
//! Three interchangeable representations are provided: unit quaternions
//! ([`Quat`]), axis-angle pairs ([`AxisAngle`]), and orthonormal matrices
//! ([`RotMatrix`]). Conversions between any two of them preserve the
//! rotation to well below 1e-9 geodesic distance.
//!
//! Beyond plain conversions the module implements the metrics used to
//! compare ball orientations:
//!
//! - the geodesic distance on SO(3), from matrices or quaternions,
//! - the vector angle between the rotated base logo directions, which
//!   ignores twist of the logo about its own axis,
//! - conditional losses that gate the orientation term by the logo's
//!   ground-truth visibility.
//!
//! All functions are pure; values are immutable and `Copy` where cheap.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};

/// The reference logo direction: where the logo sits for the identity
/// orientation, pointing at the camera.
pub const BASE_LOGO_DIRECTION: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

/// A unit quaternion `w + xi + yj + zk` representing a rotation.
///
/// Constructors normalize, so a `Quat` is always unit length to 1e-9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Builds a unit quaternion from raw components, normalizing them.
    ///
    /// Panics if the components are not finite or all (near) zero; that is
    /// a programming error, not a recoverable condition.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Quat {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        assert!(n.is_finite() && n > 1e-12, "quaternion must be non-zero and finite");
        Quat { w: w / n, x: x / n, y: y / n, z: z / n }
    }

    /// Rotation of `angle` radians about `axis` (right-hand rule).
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Quat {
        let a = axis.normalized();
        assert!(a != Vec3::ZERO, "rotation axis must be non-zero");
        let (s, c) = (angle / 2.0).sin_cos();
        Quat { w: c, x: a.x * s, y: a.y * s, z: a.z * s }
    }

    /// Exponential map of a rotation vector (axis times angle, rad).
    /// The zero vector maps to the identity.
    pub fn from_rotation_vector(v: Vec3) -> Quat {
        let angle = v.norm();
        if angle < 1e-12 {
            Quat::IDENTITY
        } else {
            Quat::from_axis_angle(v / angle, angle)
        }
    }

    pub fn conjugate(self) -> Quat {
        Quat { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn dot(self, o: Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    fn negated(self) -> Quat {
        Quat { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Rotates a vector.
    pub fn rotate(self, v: Vec3) -> Vec3 {
        // q v q* expanded: v + 2 u x (u x v + w v), u = (x, y, z)
        let u = Vec3::new(self.x, self.y, self.z);
        let t = u.cross(v) * 2.0;
        v + t * self.w + u.cross(t)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn to_axis_angle(self) -> AxisAngle {
        // Ensure w >= 0 so the recovered angle lands in [0, pi].
        let q = if self.w < 0.0 { self.negated() } else { self };
        let sin_half = Vec3::new(q.x, q.y, q.z).norm();
        let angle = 2.0 * sin_half.atan2(q.w);
        if sin_half < 1e-12 {
            AxisAngle::new(Vec3::X, 0.0)
        } else {
            AxisAngle::new(Vec3::new(q.x, q.y, q.z) / sin_half, angle)
        }
    }

    pub fn to_matrix(self) -> RotMatrix {
        let Quat { w, x, y, z } = self;
        RotMatrix(Mat3([
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]))
    }

    /// Shepperd's method: branch on the largest of trace and diagonal
    /// entries for numerical stability near pi rotations.
    pub fn from_matrix(rm: &RotMatrix) -> Quat {
        let m = &rm.0 .0;
        let trace = m[0][0] + m[1][1] + m[2][2];
        let (w, x, y, z);
        if trace > m[0][0] && trace > m[1][1] && trace > m[2][2] {
            let s = (1.0 + trace).sqrt() * 2.0;
            w = s / 4.0;
            x = (m[2][1] - m[1][2]) / s;
            y = (m[0][2] - m[2][0]) / s;
            z = (m[1][0] - m[0][1]) / s;
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
            w = (m[2][1] - m[1][2]) / s;
            x = s / 4.0;
            y = (m[0][1] + m[1][0]) / s;
            z = (m[0][2] + m[2][0]) / s;
        } else if m[1][1] > m[2][2] {
            let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
            w = (m[0][2] - m[2][0]) / s;
            x = (m[0][1] + m[1][0]) / s;
            y = s / 4.0;
            z = (m[1][2] + m[2][1]) / s;
        } else {
            let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
            w = (m[1][0] - m[0][1]) / s;
            x = (m[0][2] + m[2][0]) / s;
            y = (m[1][2] + m[2][1]) / s;
            z = s / 4.0;
        }
        Quat::new(w, x, y, z)
    }
}

/// Hamilton product; `a * b` applies `b` first, then `a`.
impl std::ops::Mul for Quat {
    type Output = Quat;

    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// Rotation as a unit axis and an angle canonicalized to [0, pi].
///
/// At the degenerate angles 0 and pi (where the axis sign carries no or
/// ambiguous information) the axis is flipped so its first non-zero
/// component is positive, making equality checks deterministic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    pub axis: Vec3,
    pub angle: f64,
}

impl AxisAngle {
    pub fn new(axis: Vec3, angle: f64) -> AxisAngle {
        let mut axis = axis.normalized();
        assert!(axis != Vec3::ZERO, "axis must be non-zero");
        assert!(angle.is_finite());
        // Wrap into (-pi, pi], then fold the sign into the axis.
        let mut angle = angle.rem_euclid(std::f64::consts::TAU);
        if angle > std::f64::consts::PI {
            angle = std::f64::consts::TAU - angle;
            axis = -axis;
        }
        const DEGENERATE_EPS: f64 = 1e-12;
        if angle < DEGENERATE_EPS || (std::f64::consts::PI - angle) < DEGENERATE_EPS {
            let lead = if axis.x.abs() > 1e-12 {
                axis.x
            } else if axis.y.abs() > 1e-12 {
                axis.y
            } else {
                axis.z
            };
            if lead < 0.0 {
                axis = -axis;
            }
        }
        AxisAngle { axis, angle }
    }

    pub fn to_quat(self) -> Quat {
        Quat::from_axis_angle(self.axis, self.angle)
    }

    pub fn to_matrix(self) -> RotMatrix {
        self.to_quat().to_matrix()
    }

    /// The rotation vector `axis * angle` in radians.
    pub fn rotation_vector(self) -> Vec3 {
        self.axis * self.angle
    }
}

/// A 3x3 rotation matrix (orthonormal, determinant +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotMatrix(pub Mat3);

impl RotMatrix {
    pub const IDENTITY: RotMatrix = RotMatrix(Mat3::IDENTITY);

    /// Validates orthonormality (`R^T R = I` and `det = +1`, both to 1e-9).
    pub fn try_new(m: Mat3) -> Result<RotMatrix> {
        let rtr = m.transpose().mul_mat(&m);
        let mut max_dev: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                max_dev = max_dev.max((rtr.0[i][j] - expect).abs());
            }
        }
        if max_dev > 1e-9 {
            return Err(Error::invalid("rotation_matrix", format!("R^T R deviates from I by {max_dev:.3e}")));
        }
        let det = m.det();
        if (det - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("rotation_matrix", format!("det = {det}, expected +1")));
        }
        Ok(RotMatrix(m))
    }

    pub fn rotate(&self, v: Vec3) -> Vec3 {
        self.0.mul_vec(v)
    }

    pub fn to_quat(&self) -> Quat {
        Quat::from_matrix(self)
    }

    pub fn to_axis_angle(&self) -> AxisAngle {
        self.to_quat().to_axis_angle()
    }
}

/// Geodesic distance between two rotation matrices in radians:
/// `arccos((tr(R1^T R2) - 1) / 2)`, in [0, pi]. The arccos argument is
/// clamped against floating-point excursions outside [-1, 1].
pub fn geodesic_matrix(r1: &RotMatrix, r2: &RotMatrix) -> f64 {
    let rel = r1.0.transpose().mul_mat(&r2.0);
    (((rel.trace() - 1.0) / 2.0).clamp(-1.0, 1.0)).acos()
}

/// Geodesic distance between two unit quaternions in radians:
/// `2 arccos(|<q1, q2>|)`, in [0, pi]. The absolute inner product makes
/// the metric invariant under the q / -q double cover.
///
/// Evaluated through the 4D chord length of the sign-aligned pair,
/// `4 arcsin(|q1 - sgn(<q1,q2>) q2| / 2)`, which is algebraically the
/// same but keeps full precision near zero distance, where the arccos
/// form cannot resolve below ~1e-8.
pub fn geodesic_quat(q1: &Quat, q2: &Quat) -> f64 {
    let sign = if q1.dot(*q2) < 0.0 { -1.0 } else { 1.0 };
    let dw = q1.w - sign * q2.w;
    let dx = q1.x - sign * q2.x;
    let dy = q1.y - sign * q2.y;
    let dz = q1.z - sign * q2.z;
    let half_chord = 0.5 * (dw * dw + dx * dx + dy * dy + dz * dz).sqrt();
    4.0 * half_chord.clamp(0.0, 1.0).asin()
}

/// Angle in radians between the two logo directions obtained by rotating
/// [`BASE_LOGO_DIRECTION`] with `q1` and `q2`.
///
/// Twist of either rotation about its own resulting logo direction does
/// not change the value, so this measures logo *position* error only.
pub fn vector_angle(q1: &Quat, q2: &Quat) -> f64 {
    let a = q1.rotate(BASE_LOGO_DIRECTION);
    let b = q2.rotate(BASE_LOGO_DIRECTION);
    a.angle_to(b)
}

/// Which norm a conditional loss applies to the pose error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossNorm {
    /// Squared classification and orientation terms.
    Squared,
    /// Absolute-value classification and orientation terms.
    Absolute,
    /// Absolute classification term plus the geodesic distance of the
    /// rotations; quaternion outputs only.
    Geodesic,
}

/// A pose regressor output (or target): a rotation encoded as `n` reals
/// plus a visibility score in [-1, 1].
///
/// `n = 4` is a (not necessarily normalized) quaternion, `n = 3` an
/// axis-angle rotation vector. Visibility uses the label convention of
/// the dataset side: +1 fully visible, -1 not visible. It is clamped at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseOutput {
    pub rotation: Vec<f64>,
    pub visibility: f64,
}

impl PoseOutput {
    pub fn new(rotation: Vec<f64>, visibility: f64) -> PoseOutput {
        assert!(
            rotation.len() == 3 || rotation.len() == 4,
            "rotation part must have 3 (axis-angle) or 4 (quaternion) entries"
        );
        PoseOutput { rotation, visibility: visibility.clamp(-1.0, 1.0) }
    }

    pub fn from_quat(q: Quat, visibility: f64) -> PoseOutput {
        PoseOutput::new(vec![q.w, q.x, q.y, q.z], visibility)
    }

    pub fn from_axis_angle(aa: AxisAngle, visibility: f64) -> PoseOutput {
        let v = aa.rotation_vector();
        PoseOutput::new(vec![v.x, v.y, v.z], visibility)
    }

    /// Visibility mapped from the [-1, 1] label range to [0, 1], the range
    /// the loss formulas are written in.
    fn visibility01(&self) -> f64 {
        (self.visibility + 1.0) / 2.0
    }

    fn as_rotation(&self) -> Result<Quat> {
        match self.rotation.len() {
            4 => Ok(Quat::new(self.rotation[0], self.rotation[1], self.rotation[2], self.rotation[3])),
            3 => Ok(Quat::from_rotation_vector(Vec3::new(
                self.rotation[0],
                self.rotation[1],
                self.rotation[2],
            ))),
            n => Err(Error::invalid("rotation", format!("unsupported rotation length {n}"))),
        }
    }
}

/// Visibility-gated loss between a predicted pose `o` and a target `t`.
///
/// The classification term always contributes; the orientation term is
/// multiplied by the target visibility `t_v` (0 or 1 after mapping from
/// the [-1, 1] label range), so poses of non-visible logos never
/// contribute orientation error. For [`LossNorm::Squared`] and
/// [`LossNorm::Absolute`] the orientation term takes the minimum over the
/// sign ambiguity of the rotation encoding; [`LossNorm::Geodesic`] is
/// sign-invariant by construction and defined for quaternion outputs.
pub fn conditional_loss(o: &PoseOutput, t: &PoseOutput, norm: LossNorm) -> Result<f64> {
    if o.rotation.len() != t.rotation.len() {
        return Err(Error::invalid(
            "pose_output",
            format!("rotation length mismatch: {} vs {}", o.rotation.len(), t.rotation.len()),
        ));
    }
    let ov = o.visibility01();
    let tv = t.visibility01();
    if tv != 0.0 && tv != 1.0 {
        return Err(Error::invalid(
            "target_visibility",
            format!("target visibility label must be -1 or +1, got {}", t.visibility),
        ));
    }

    match norm {
        LossNorm::Squared => {
            let classification = (ov - tv) * (ov - tv);
            let mut diff_sq = 0.0;
            let mut sum_sq = 0.0;
            for (a, b) in o.rotation.iter().zip(&t.rotation) {
                diff_sq += (a - b) * (a - b);
                sum_sq += (a + b) * (a + b);
            }
            Ok(classification + tv * diff_sq.min(sum_sq))
        }
        LossNorm::Absolute => {
            let classification = (ov - tv).abs();
            let mut diff_abs = 0.0;
            let mut sum_abs = 0.0;
            for (a, b) in o.rotation.iter().zip(&t.rotation) {
                diff_abs += (a - b).abs();
                sum_abs += (a + b).abs();
            }
            Ok(classification + tv * diff_abs.min(sum_abs))
        }
        LossNorm::Geodesic => {
            if o.rotation.len() != 4 {
                return Err(Error::invalid(
                    "pose_output",
                    "geodesic loss is defined for quaternion outputs (length 4)",
                ));
            }
            let classification = (ov - tv).abs();
            // Gate before converting: a non-visible target may carry an
            // all-zero rotation part that cannot be normalized.
            if tv == 0.0 {
                return Ok(classification);
            }
            let qo = o.as_rotation()?;
            let qt = t.as_rotation()?;
            Ok(classification + tv * geodesic_quat(&qo, &qt))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    pub(crate) fn random_quat(rng: &mut ChaCha8Rng) -> Quat {
        // Uniform on SO(3) via normalized 4D Gaussians.
        use rand_distr::StandardNormal;
        loop {
            let w: f64 = rng.sample(StandardNormal);
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            if (w * w + x * x + y * y + z * z).sqrt() > 1e-6 {
                return Quat::new(w, x, y, z);
            }
        }
    }

    #[test]
    fn identity_quat_to_identity_matrix() {
        let m = Quat::IDENTITY.to_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((m.0 .0[i][j] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn axis_angle_z90_to_quat() {
        let q = AxisAngle::new(Vec3::Z, FRAC_PI_2).to_quat();
        assert!((q.w - (PI / 4.0).cos()).abs() < 1e-15);
        assert!(q.x.abs() < 1e-15 && q.y.abs() < 1e-15);
        assert!((q.z - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn conversion_round_trip_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let q = random_quat(&mut rng);
            let back = q.to_matrix().to_quat();
            assert!(geodesic_quat(&q, &back) < 1e-9);
            let back2 = q.to_axis_angle().to_quat();
            assert!(geodesic_quat(&q, &back2) < 1e-9);
        }
    }

    #[test]
    fn axis_angle_canonical_range() {
        let aa = AxisAngle::new(Vec3::Y, -2.5);
        assert!(aa.angle >= 0.0 && aa.angle <= PI);
        assert!((aa.angle - 2.5).abs() < 1e-12);
        assert!((aa.axis + Vec3::Y).norm() < 1e-12, "axis flips for negative angles");

        let identity = Quat::IDENTITY.to_axis_angle();
        assert_eq!(identity.angle, 0.0);
        assert!(identity.axis.x > 0.0);
    }

    #[test]
    fn geodesic_matrix_basics() {
        assert_eq!(geodesic_matrix(&RotMatrix::IDENTITY, &RotMatrix::IDENTITY), 0.0);
        let rz = AxisAngle::new(Vec3::Z, FRAC_PI_2).to_matrix();
        assert!((geodesic_matrix(&rz, &RotMatrix::IDENTITY) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn geodesic_quat_double_cover() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q = random_quat(&mut rng);
            assert_eq!(geodesic_quat(&q, &q), 0.0);
            assert_eq!(geodesic_quat(&q, &q.negated()), 0.0);
        }
        let q = Quat::new((PI / 4.0).cos(), 0.0, 0.0, (PI / 4.0).sin());
        assert!((geodesic_quat(&Quat::IDENTITY, &q) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn geodesic_representations_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let q1 = random_quat(&mut rng);
            let q2 = random_quat(&mut rng);
            let dm = geodesic_matrix(&q1.to_matrix(), &q2.to_matrix());
            let dq = geodesic_quat(&q1, &q2);
            assert!((dm - dq).abs() < 1e-9, "dm = {dm}, dq = {dq}");
        }
    }

    #[test]
    fn geodesic_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let a = random_quat(&mut rng);
            let b = random_quat(&mut rng);
            let c = random_quat(&mut rng);
            let ab = geodesic_quat(&a, &b);
            let bc = geodesic_quat(&b, &c);
            let ac = geodesic_quat(&a, &c);
            assert!(ac <= ab + bc + 1e-9);
        }
    }

    #[test]
    fn vector_angle_basics() {
        let q = Quat::from_axis_angle(Vec3::X, FRAC_PI_2);
        assert_eq!(vector_angle(&q, &q), 0.0);
        // Rotating (0,0,1) by 90 deg about x gives (0,-1,0): a right angle
        // away from the identity's logo direction.
        assert!((vector_angle(&q, &Quat::IDENTITY) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn vector_angle_ignores_twist_about_logo_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let q = random_quat(&mut rng);
            let logo_dir = q.rotate(BASE_LOGO_DIRECTION);
            let twist = Quat::from_axis_angle(logo_dir, 37f64.to_radians());
            let q_twisted = twist * q;
            assert!(vector_angle(&q, &q_twisted) < 1e-9);
        }
    }

    #[test]
    fn vector_angle_never_exceeds_geodesic() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..1000 {
            let q1 = random_quat(&mut rng);
            let q2 = random_quat(&mut rng);
            assert!(vector_angle(&q1, &q2) <= geodesic_quat(&q1, &q2) + 1e-9);
        }
    }

    #[test]
    fn conditional_loss_zero_on_exact_match() {
        let q = Quat::from_axis_angle(Vec3::new(1.0, 2.0, -0.5), 1.1);
        let o = PoseOutput::from_quat(q, 1.0);
        let t = PoseOutput::from_quat(q, 1.0);
        for norm in [LossNorm::Squared, LossNorm::Absolute, LossNorm::Geodesic] {
            assert_eq!(conditional_loss(&o, &t, norm).unwrap(), 0.0);
        }
    }

    #[test]
    fn conditional_loss_sign_ambiguity_is_free() {
        let q = Quat::from_axis_angle(Vec3::new(0.3, -1.0, 0.2), 2.0);
        let t = PoseOutput::from_quat(q, 1.0);
        let o = PoseOutput::new(t.rotation.iter().map(|v| -v).collect(), 1.0);
        for norm in [LossNorm::Squared, LossNorm::Absolute, LossNorm::Geodesic] {
            assert!(conditional_loss(&o, &t, norm).unwrap() < 1e-12);
        }
    }

    #[test]
    fn conditional_loss_gates_on_target_visibility() {
        let q1 = Quat::from_axis_angle(Vec3::X, 0.4);
        let q2 = Quat::from_axis_angle(Vec3::Y, 2.4);
        // Target not visible (label -1): only the classification term remains.
        let t = PoseOutput::from_quat(q2, -1.0);
        let o = PoseOutput::from_quat(q1, 1.0);
        assert!((conditional_loss(&o, &t, LossNorm::Absolute).unwrap() - 1.0).abs() < 1e-12);
        assert!((conditional_loss(&o, &t, LossNorm::Squared).unwrap() - 1.0).abs() < 1e-12);

        // And it is independent of the rotation entries of o.
        let o2 = PoseOutput::from_quat(q2, 1.0);
        assert_eq!(
            conditional_loss(&o, &t, LossNorm::Absolute).unwrap(),
            conditional_loss(&o2, &t, LossNorm::Absolute).unwrap(),
        );
    }

    #[test]
    fn conditional_loss_rejects_length_mismatch() {
        let o = PoseOutput::new(vec![1.0, 0.0, 0.0, 0.0], 1.0);
        let t = PoseOutput::new(vec![0.0, 0.0, 0.0], 1.0);
        assert!(conditional_loss(&o, &t, LossNorm::Squared).is_err());
    }
}
