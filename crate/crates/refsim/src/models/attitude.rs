//! Euler-parameter (unit quaternion) attitude representation and desired
//! attitude profiles.

use super::{rotation_exp, skew};
use nalgebra::{Matrix3, Matrix4x3, Vector3};
use serde::{Deserialize, Serialize};

/// Euler parameters: vector part `v` and scalar part `o`, with
/// `|v|^2 + o^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParam {
    pub v: Vector3<f64>,
    pub o: f64,
}

impl EulerParam {
    pub fn new(v: Vector3<f64>, o: f64) -> Self {
        Self { v, o }
    }

    /// No rotation.
    pub fn identity() -> Self {
        Self {
            v: Vector3::zeros(),
            o: 1.0,
        }
    }

    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        let half = 0.5 * angle;
        Self {
            v: axis.normalize() * half.sin(),
            o: half.cos(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.v.norm_squared() + self.o * self.o).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            v: self.v / n,
            o: self.o / n,
        }
    }

    /// Body-to-inertial rotation matrix.
    ///
    /// Consistent with the kinematics `v_dot = (o I + skew(v)) w / 2`,
    /// `o_dot = -v . w / 2` for body angular velocity `w`, in the sense that
    /// `d/dt R = R skew(w)` along their trajectories.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        let q = self.normalized();
        let s = skew(&q.v);
        Matrix3::identity() + s * (2.0 * q.o) + s * s * 2.0
    }

    /// Kinematics under a body-frame angular velocity.
    pub fn kinematics_body(&self, w: &Vector3<f64>) -> (Vector3<f64>, f64) {
        (
            0.5 * (Matrix3::identity() * self.o + skew(&self.v)) * w,
            -0.5 * self.v.dot(w),
        )
    }

    /// Kinematics under an inertial-frame rate `w_inertial` (used by the
    /// controller's internally simulated attitude, which is driven by `R z`).
    pub fn kinematics_inertial(&self, w_inertial: &Vector3<f64>) -> (Vector3<f64>, f64) {
        (
            0.5 * (Matrix3::identity() * self.o - skew(&self.v)) * w_inertial,
            -0.5 * self.v.dot(w_inertial),
        )
    }

    /// Rotation by this attitude: `rotation_matrix() * x` without forming
    /// the matrix.
    pub fn rotate(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.rotation_matrix() * x
    }
}

/// Euler-parameter error between `q` and `q_z`: the parameters of the
/// relative rotation `R(q_z)^T R(q)`. Unit norm is preserved exactly up to
/// rounding.
pub fn euler_error(q: &EulerParam, q_z: &EulerParam) -> EulerParam {
    EulerParam {
        v: q_z.o * q.v - q.o * q_z.v + skew(&q.v) * q_z.v,
        o: q.o * q_z.o + q.v.dot(&q_z.v),
    }
}

/// The 4 x 3 matrix `D` relating the error-parameter rate to the rate
/// mismatch: `d/dt dq = D(dq) (w - z)`.
pub fn d_matrix(dq: &EulerParam) -> Matrix4x3<f64> {
    let top = Matrix3::identity() * dq.o + skew(&dq.v);
    let mut d = Matrix4x3::zeros();
    d.fixed_view_mut::<3, 3>(0, 0).copy_from(&top);
    d.fixed_view_mut::<1, 3>(3, 0)
        .copy_from(&(-dq.v.transpose()));
    d * 0.5
}

/// Analytic desired-attitude profile: one or two sinusoidally driven
/// rotations about fixed axes,
/// `R_d(t) = exp(skew(e1) phi1(t)) * exp(skew(e2) phi2(t))`
/// with `phi(t) = amplitude * sin(2 pi t / period + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttitudeProfile {
    pub axes: Vec<AxisMotion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisMotion {
    pub axis: [f64; 3],
    pub amplitude: f64,
    pub period: f64,
    #[serde(default)]
    pub phase: f64,
}

impl AxisMotion {
    fn angle(&self, t: f64) -> (f64, f64, f64) {
        let w = 2.0 * std::f64::consts::PI / self.period;
        let arg = w * t + self.phase;
        (
            self.amplitude * arg.sin(),
            self.amplitude * w * arg.cos(),
            -self.amplitude * w * w * arg.sin(),
        )
    }

    fn unit_axis(&self) -> Vector3<f64> {
        Vector3::from(self.axis).normalize()
    }
}

impl AttitudeProfile {
    pub fn constant() -> Self {
        Self { axes: vec![] }
    }

    pub fn single_axis(axis: [f64; 3], amplitude: f64, period: f64) -> Self {
        Self {
            axes: vec![AxisMotion {
                axis,
                amplitude,
                period,
                phase: 0.0,
            }],
        }
    }

    /// Desired rotation, inertial-frame desired angular velocity
    /// (`skew(w_d_inertial) = d/dt R_d * R_d^T`), and its time derivative.
    pub fn sample(&self, t: f64) -> (Matrix3<f64>, Vector3<f64>, Vector3<f64>) {
        match self.axes.len() {
            0 => (Matrix3::identity(), Vector3::zeros(), Vector3::zeros()),
            1 => {
                let a = &self.axes[0];
                let e = a.unit_axis();
                let (phi, phid, phidd) = a.angle(t);
                (rotation_exp(&(e * phi)), e * phid, e * phidd)
            }
            2 => {
                let (a, b) = (&self.axes[0], &self.axes[1]);
                let (e1, e2) = (a.unit_axis(), b.unit_axis());
                let (p1, p1d, p1dd) = a.angle(t);
                let (p2, p2d, p2dd) = b.angle(t);
                let ra = rotation_exp(&(e1 * p1));
                let rd = ra * rotation_exp(&(e2 * p2));
                let w = e1 * p1d + ra * e2 * p2d;
                let wd = e1 * p1dd + ra * e2 * p2dd + p1d * skew(&e1) * ra * e2 * p2d;
                (rd, w, wd)
            }
            n => panic!("attitude profiles support at most two axes, got {n}"),
        }
    }
}
