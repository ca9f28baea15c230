//! Spacecraft attitude dynamics with reaction-wheel actuation.
//!
//! The wheels are abstracted into a constant inertial-frame total angular
//! momentum `h_inertial`; the body-frame momentum `h = R^T h_inertial` is
//! recomputed from the attitude, never integrated on its own.

use super::attitude::EulerParam;
use super::skew;
use nalgebra::{Matrix3, Vector3};

#[derive(Debug, Clone)]
pub struct SpacecraftState {
    pub attitude: EulerParam,
    /// Body-frame angular velocity.
    pub omega: Vector3<f64>,
}

#[derive(Debug, Clone)]
pub struct SpacecraftDerivative {
    pub attitude_v_dot: Vector3<f64>,
    pub attitude_o_dot: f64,
    pub omega_dot: Vector3<f64>,
}

/// `M omega_dot = skew(h) omega + tau` with `h = R^T h_inertial`, plus the
/// Euler-parameter kinematics.
pub fn spacecraft_derivative(
    state: &SpacecraftState,
    inertia: &Matrix3<f64>,
    h_inertial: &Vector3<f64>,
    tau: &Vector3<f64>,
) -> SpacecraftDerivative {
    let r = state.attitude.rotation_matrix();
    let h = r.transpose() * h_inertial;
    let omega_dot = inertia
        .cholesky()
        .expect("spacecraft inertia must be positive definite")
        .solve(&(skew(&h) * state.omega + tau));
    let (vd, od) = state.attitude.kinematics_body(&state.omega);
    SpacecraftDerivative {
        attitude_v_dot: vd,
        attitude_o_dot: od,
        omega_dot,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn inertia() -> Matrix3<f64> {
        Matrix3::new(1.2, 0.05, 0.01, 0.05, 1.0, 0.02, 0.01, 0.02, 0.8)
    }

    #[test]
    fn omega_parallel_to_momentum_is_stationary() {
        let h_i = Vector3::new(0.0, 0.0, 0.5);
        let state = SpacecraftState {
            attitude: EulerParam::identity(),
            omega: Vector3::new(0.0, 0.0, 2.0),
        };
        let d = spacecraft_derivative(&state, &inertia(), &h_i, &Vector3::zeros());
        assert_abs_diff_eq!(d.omega_dot, Vector3::zeros(), epsilon = 1e-14);
    }

    #[test]
    fn zero_momentum_zero_torque_keeps_omega() {
        let state = SpacecraftState {
            attitude: EulerParam::from_axis_angle(&Vector3::new(1.0, 1.0, 0.0), 0.3),
            omega: Vector3::new(0.1, -0.2, 0.3),
        };
        let d = spacecraft_derivative(&state, &inertia(), &Vector3::zeros(), &Vector3::zeros());
        assert_abs_diff_eq!(d.omega_dot, Vector3::zeros(), epsilon = 1e-14);
    }

    #[test]
    fn quaternion_norm_conserved_over_free_motion() {
        // Integrate 10 s of torque-free motion without renormalizing and
        // check the Euler-parameter norm drift stays within 1e-8.
        let inertia = inertia();
        let h_i = Vector3::new(0.05, -0.02, 0.1);
        let mut state = SpacecraftState {
            attitude: EulerParam::from_axis_angle(&Vector3::new(0.0, 1.0, 0.2), 0.5),
            omega: Vector3::new(0.2, 0.1, -0.3),
        };
        let h = 5e-4;
        let steps = (10.0 / h) as usize;
        for _ in 0..steps {
            let f = |s: &SpacecraftState| {
                spacecraft_derivative(s, &inertia, &h_i, &Vector3::zeros())
            };
            let advance = |s: &SpacecraftState, d: &SpacecraftDerivative, dt: f64| SpacecraftState {
                attitude: EulerParam::new(
                    s.attitude.v + d.attitude_v_dot * dt,
                    s.attitude.o + d.attitude_o_dot * dt,
                ),
                omega: s.omega + d.omega_dot * dt,
            };
            let k1 = f(&state);
            let k2 = f(&advance(&state, &k1, h / 2.0));
            let k3 = f(&advance(&state, &k2, h / 2.0));
            let k4 = f(&advance(&state, &k3, h));
            state.attitude.v += (k1.attitude_v_dot
                + k2.attitude_v_dot * 2.0
                + k3.attitude_v_dot * 2.0
                + k4.attitude_v_dot)
                * (h / 6.0);
            state.attitude.o += (k1.attitude_o_dot
                + k2.attitude_o_dot * 2.0
                + k3.attitude_o_dot * 2.0
                + k4.attitude_o_dot)
                * (h / 6.0);
            state.omega += (k1.omega_dot + k2.omega_dot * 2.0 + k3.omega_dot * 2.0 + k4.omega_dot)
                * (h / 6.0);
        }
        assert!((state.attitude.norm() - 1.0).abs() <= 1e-8);
    }
}
