//! SE(3) poses parameterized as translation plus a Rodriguez (axis-angle)
//! rotation vector, the 6-vector the tracker optimizes over.

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{DevoError, Result};

/// Angle below which rotation formulas switch to their Taylor series.
const SMALL_ANGLE: f64 = 1e-8;

/// Rigid transform as translation + Rodriguez rotation vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseSE3 {
    /// Translation in meters.
    pub translation: Vector3<f64>,
    /// Axis-angle rotation vector in radians.
    pub rotation: Vector3<f64>,
}

impl PoseSE3 {
    pub fn identity() -> Self {
        PoseSE3 {
            translation: Vector3::zeros(),
            rotation: Vector3::zeros(),
        }
    }

    pub fn new(translation: Vector3<f64>, rotation: Vector3<f64>) -> Self {
        PoseSE3 { translation, rotation }
    }

    /// Rotation angle `|q|` in radians.
    pub fn angle(&self) -> f64 {
        self.rotation.norm()
    }

    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        rodriguez_to_matrix(&self.rotation)
    }

    /// Recover the parameter form from a rotation matrix and translation.
    pub fn from_parts(rotation: &Matrix3<f64>, translation: Vector3<f64>) -> Self {
        PoseSE3 {
            translation,
            rotation: matrix_to_rodriguez(rotation),
        }
    }

    pub fn to_rigid(&self) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation_matrix(),
            translation: self.translation,
        }
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        self.to_rigid().to_homogeneous()
    }

    /// Parse a 4x4 homogeneous matrix, validating its SE(3) structure.
    pub fn from_homogeneous(m: &Matrix4<f64>, tol: f64) -> Result<Self> {
        let bottom = m.row(3);
        if (bottom[0]).abs() > tol
            || (bottom[1]).abs() > tol
            || (bottom[2]).abs() > tol
            || (bottom[3] - 1.0).abs() > tol
        {
            return Err(DevoError::InvalidInput(
                "homogeneous matrix bottom row must be [0 0 0 1]".into(),
            ));
        }
        let r = m.fixed_view::<3, 3>(0, 0).into_owned();
        let ortho = (r.transpose() * r - Matrix3::identity()).norm();
        if ortho > tol {
            return Err(DevoError::InvalidInput(format!(
                "rotation block is not orthonormal (|R'R - I| = {ortho:.3e})"
            )));
        }
        if r.determinant() < 0.0 {
            return Err(DevoError::InvalidInput(
                "rotation block has negative determinant".into(),
            ));
        }
        let t = m.fixed_view::<3, 1>(0, 3).into_owned();
        Ok(PoseSE3::from_parts(&r, t))
    }

    /// `self * other` as rigid transforms.
    pub fn compose(&self, other: &PoseSE3) -> PoseSE3 {
        self.to_rigid().compose(&other.to_rigid()).to_pose()
    }

    pub fn inverse(&self) -> PoseSE3 {
        self.to_rigid().inverse().to_pose()
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.to_rigid().transform_point(p)
    }

    /// Full 6-vector `[t, q]`.
    pub fn params(&self) -> [f64; 6] {
        [
            self.translation.x,
            self.translation.y,
            self.translation.z,
            self.rotation.x,
            self.rotation.y,
            self.rotation.z,
        ]
    }

    pub fn from_params(p: &[f64; 6]) -> Self {
        PoseSE3 {
            translation: Vector3::new(p[0], p[1], p[2]),
            rotation: Vector3::new(p[3], p[4], p[5]),
        }
    }

    /// Hamilton-convention unit quaternion `(qx, qy, qz, qw)`.
    pub fn to_quaternion(&self) -> [f64; 4] {
        let theta = self.angle();
        let (s, w) = if theta < SMALL_ANGLE {
            // sin(t/2)/t -> 1/2 - t^2/48
            (0.5 - theta * theta / 48.0, 1.0 - theta * theta / 8.0)
        } else {
            ((0.5 * theta).sin() / theta, (0.5 * theta).cos())
        };
        [
            self.rotation.x * s,
            self.rotation.y * s,
            self.rotation.z * s,
            w,
        ]
    }

    pub fn from_quaternion(qx: f64, qy: f64, qz: f64, qw: f64, translation: Vector3<f64>) -> Self {
        let norm = (qx * qx + qy * qy + qz * qz + qw * qw).sqrt();
        let (x, y, z, w) = (qx / norm, qy / norm, qz / norm, qw / norm);
        let vec_norm = (x * x + y * y + z * z).sqrt();
        let angle = 2.0 * vec_norm.atan2(w);
        let rotation = if vec_norm < 1e-14 {
            Vector3::zeros()
        } else {
            // wrap to the +/- pi ball
            let angle = if angle > std::f64::consts::PI {
                angle - 2.0 * std::f64::consts::PI
            } else {
                angle
            };
            Vector3::new(x, y, z) * (angle / vec_norm)
        };
        PoseSE3 { translation, rotation }
    }

    /// Screw-linear interpolation between two poses, `s` in `[0, 1]`.
    pub fn interpolate(a: &PoseSE3, b: &PoseSE3, s: f64) -> PoseSE3 {
        let rel = a.inverse().compose(b);
        let step = PoseSE3 {
            translation: rel.translation * s,
            rotation: rel.rotation * s,
        };
        a.compose(&step)
    }
}

/// Matrix form of a rigid transform, the computational workhorse behind
/// [`PoseSE3`]. Conversions between the two are exact up to angle wrapping.
#[derive(Debug, Clone, Copy)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn to_pose(&self) -> PoseSE3 {
        PoseSE3::from_parts(&self.rotation, self.translation)
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

/// Skew-symmetric cross-product matrix `[v]x`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Rodriguez rotation formula with a Taylor fallback near the identity.
pub fn rodriguez_to_matrix(q: &Vector3<f64>) -> Matrix3<f64> {
    let theta2 = q.norm_squared();
    let theta = theta2.sqrt();
    let (a, b) = if theta < SMALL_ANGLE {
        // sin(t)/t and (1-cos(t))/t^2 to second order
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    let k = skew(q);
    Matrix3::identity() + k * a + k * k * b
}

/// Inverse of the Rodriguez formula; the returned angle lies in `[0, pi]`.
pub fn matrix_to_rodriguez(r: &Matrix3<f64>) -> Vector3<f64> {
    let cos_theta = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    // vee of the antisymmetric part: sin(theta) * axis
    let w = Vector3::new(
        (r[(2, 1)] - r[(1, 2)]) * 0.5,
        (r[(0, 2)] - r[(2, 0)]) * 0.5,
        (r[(1, 0)] - r[(0, 1)]) * 0.5,
    );
    let sin_theta = w.norm();
    if theta < SMALL_ANGLE {
        // q ~ w * (1 + theta^2/6)
        return w * (1.0 + theta * theta / 6.0);
    }
    if std::f64::consts::PI - theta > 1e-6 {
        return w * (theta / sin_theta);
    }
    // Near pi the antisymmetric part vanishes; use the diagonal instead:
    // R_ii = cos(theta) + (1 - cos(theta)) k_i^2.
    let one_minus = 1.0 - cos_theta;
    let mut axis = Vector3::new(
        ((r[(0, 0)] - cos_theta) / one_minus).max(0.0).sqrt(),
        ((r[(1, 1)] - cos_theta) / one_minus).max(0.0).sqrt(),
        ((r[(2, 2)] - cos_theta) / one_minus).max(0.0).sqrt(),
    );
    // relative signs from the symmetric part: (R_ij + R_ji)/2 = (1-cos) k_i k_j
    let m = axis.iamax();
    for i in 0..3 {
        if i != m {
            let s = (r[(i, m)] + r[(m, i)]) * 0.5;
            if s < 0.0 {
                axis[i] = -axis[i];
            }
        }
    }
    axis.normalize_mut();
    // below pi the antisymmetric part still fixes the overall sign
    if sin_theta > 1e-12 && w.dot(&axis) < 0.0 {
        axis = -axis;
    }
    axis * theta
}

/// SE(3) exponential of a constant twist `(v, w)` integrated over unit time.
///
/// Used by the synthetic trajectory models; `t * twist` gives the pose at
/// time `t` along a screw motion.
pub fn exp_twist(linear: &Vector3<f64>, angular: &Vector3<f64>) -> RigidTransform {
    let theta2 = angular.norm_squared();
    let theta = theta2.sqrt();
    let k = skew(angular);
    let (b, c) = if theta < SMALL_ANGLE {
        // (1-cos t)/t^2 and (t - sin t)/t^3 to second order
        (0.5 - theta2 / 24.0, 1.0 / 6.0 - theta2 / 120.0)
    } else {
        ((1.0 - theta.cos()) / theta2, (theta - theta.sin()) / (theta2 * theta))
    };
    let v_mat = Matrix3::identity() + k * b + k * k * c;
    RigidTransform {
        rotation: rodriguez_to_matrix(angular),
        translation: v_mat * linear,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_pose(rng: &mut StdRng, t_scale: f64, r_scale: f64) -> PoseSE3 {
        let v = |s: f64, rng: &mut StdRng| {
            Vector3::new(
                rng.gen_range(-s..s),
                rng.gen_range(-s..s),
                rng.gen_range(-s..s),
            )
        };
        PoseSE3::new(v(t_scale, rng), v(r_scale, rng))
    }

    #[test]
    fn rotation_matrices_are_orthonormal() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_pose(&mut rng, 1.0, 1.5);
            let r = p.rotation_matrix();
            let err = (r.transpose() * r - Matrix3::identity()).norm();
            assert!(err < 1e-12, "orthonormality error {err}");
            assert!((r.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rodriguez_round_trip() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..500 {
            let q = Vector3::new(
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
            );
            let back = matrix_to_rodriguez(&rodriguez_to_matrix(&q));
            assert!((back - q).norm() < 1e-9, "q={q:?} back={back:?}");
        }
        // small-angle branch
        let q = Vector3::new(1e-10, -2e-10, 5e-11);
        let back = matrix_to_rodriguez(&rodriguez_to_matrix(&q));
        assert!((back - q).norm() < 1e-15);
        // identity
        assert_eq!(matrix_to_rodriguez(&Matrix3::identity()), Vector3::zeros());
    }

    #[test]
    fn rodriguez_round_trip_near_pi() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let axis = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .normalize();
            let q = axis * (std::f64::consts::PI - 1e-9);
            let back = matrix_to_rodriguez(&rodriguez_to_matrix(&q));
            // axis-angle equivalence: either q or its pi-wrapped twin
            let d = (back - q).norm().min((back + q).norm());
            assert!(d < 1e-6, "q={q:?} back={back:?}");
            let r1 = rodriguez_to_matrix(&q);
            let r2 = rodriguez_to_matrix(&back);
            assert!((r1 - r2).norm() < 1e-9);
        }
    }

    #[test]
    fn group_laws() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let a = random_pose(&mut rng, 2.0, 1.0);
            let b = random_pose(&mut rng, 2.0, 1.0);
            let lhs = a.compose(&b).inverse().to_homogeneous();
            let rhs = b.inverse().compose(&a.inverse()).to_homogeneous();
            assert!((lhs - rhs).norm() < 1e-12);
            let id = a.compose(&a.inverse()).to_homogeneous();
            assert!((id - Matrix4::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn quaternion_round_trip() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..200 {
            let p = random_pose(&mut rng, 1.0, 2.5);
            let [qx, qy, qz, qw] = p.to_quaternion();
            let back = PoseSE3::from_quaternion(qx, qy, qz, qw, p.translation);
            assert!(
                (back.rotation_matrix() - p.rotation_matrix()).norm() < 1e-9,
                "rotation mismatch"
            );
        }
    }

    #[test]
    fn twist_exponential_matches_series_composition() {
        let v = Vector3::new(0.1, -0.05, 0.2);
        let w = Vector3::new(0.02, 0.3, -0.1);
        // integrate the screw with many small steps
        let n = 20_000;
        let mut acc = RigidTransform::identity();
        let step = exp_twist(&(v / n as f64), &(w / n as f64));
        for _ in 0..n {
            acc = acc.compose(&step);
        }
        let direct = exp_twist(&v, &w);
        assert!((acc.to_homogeneous() - direct.to_homogeneous()).norm() < 1e-6);
    }

    #[test]
    fn interpolation_endpoints_and_midpoint() {
        let a = PoseSE3::new(Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 0.0, 0.0));
        let b = PoseSE3::new(Vector3::new(3.0, 0.0, 0.0), Vector3::new(0.0, 0.4, 0.0));
        let s0 = PoseSE3::interpolate(&a, &b, 0.0);
        let s1 = PoseSE3::interpolate(&a, &b, 1.0);
        assert!((s0.to_homogeneous() - a.to_homogeneous()).norm() < 1e-12);
        assert!((s1.to_homogeneous() - b.to_homogeneous()).norm() < 1e-12);
        let mid = PoseSE3::interpolate(&a, &b, 0.5);
        assert!((mid.translation.x - 2.0).abs() < 1e-12);
        assert!((mid.angle() - 0.2).abs() < 1e-12);
    }
}
