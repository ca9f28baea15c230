//! Thrust-propelled vehicle: translation driven by a single body-fixed
//! thrust along -e3, rotation fully actuated through body rates.
//!
//! Sign convention: gravity is `+g e3` on the right side of the force
//! balance (the vertical axis points down), so `sigma = m g` with `R = I`
//! hovers and `sigma = 0` free-falls with acceleration `+g e3`.

use super::attitude::EulerParam;
use nalgebra::Vector3;

/// Translational and attitude state of one vehicle. The attitude is stored
/// as Euler parameters and renormalized after every integration step; the
/// rotation matrix is derived on demand.
#[derive(Debug, Clone)]
pub struct TpvState {
    pub x: Vector3<f64>,
    pub v: Vector3<f64>,
    pub attitude: EulerParam,
    /// Thrust magnitude; a controller-integrated state.
    pub sigma: f64,
}

/// Derivative of a [`TpvState`] under thrust `sigma` and body rates `omega`.
#[derive(Debug, Clone)]
pub struct TpvDerivative {
    pub x_dot: Vector3<f64>,
    pub v_dot: Vector3<f64>,
    pub attitude_v_dot: Vector3<f64>,
    pub attitude_o_dot: f64,
}

/// `m v_dot = -sigma R e3 + m g e3`, `d/dt R = R skew(omega)`.
pub fn tpv_derivative(
    state: &TpvState,
    mass: f64,
    gravity: f64,
    omega: &Vector3<f64>,
) -> TpvDerivative {
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    let r = state.attitude.rotation_matrix();
    let (vd, od) = state.attitude.kinematics_body(omega);
    TpvDerivative {
        x_dot: state.v,
        v_dot: (-state.sigma / mass) * (r * e3) + gravity * e3,
        attitude_v_dot: vd,
        attitude_o_dot: od,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::rotation_exp;
    use approx::assert_abs_diff_eq;

    fn hover_state(sigma: f64) -> TpvState {
        TpvState {
            x: Vector3::zeros(),
            v: Vector3::zeros(),
            attitude: EulerParam::identity(),
            sigma,
        }
    }

    #[test]
    fn hover_force_balance() {
        let (m, g) = (1.4, 9.81);
        let d = tpv_derivative(&hover_state(m * g), m, g, &Vector3::zeros());
        assert_abs_diff_eq!(d.v_dot, Vector3::zeros(), epsilon = 1e-14);
    }

    #[test]
    fn free_fall() {
        let g = 9.81;
        let d = tpv_derivative(&hover_state(0.0), 1.0, g, &Vector3::zeros());
        assert_abs_diff_eq!(d.v_dot, Vector3::new(0.0, 0.0, g), epsilon = 1e-14);
    }

    #[test]
    fn attitude_integration_matches_matrix_exponential() {
        // Constant body rate: R(dt) = R(0) exp(skew(w) dt). Integrate the
        // quaternion kinematics with small RK4 steps and compare.
        let w = Vector3::new(0.3, -0.5, 0.8);
        let dt = 1.0;
        let n = 1000;
        let h = dt / n as f64;
        let mut q = EulerParam::from_axis_angle(&Vector3::new(0.0, 1.0, 0.0), 0.4);
        let r0 = q.rotation_matrix();
        for _ in 0..n {
            let f = |q: &EulerParam| q.kinematics_body(&w);
            let k1 = f(&q);
            let k2 = f(&EulerParam::new(q.v + k1.0 * (h / 2.0), q.o + k1.1 * (h / 2.0)));
            let k3 = f(&EulerParam::new(q.v + k2.0 * (h / 2.0), q.o + k2.1 * (h / 2.0)));
            let k4 = f(&EulerParam::new(q.v + k3.0 * h, q.o + k3.1 * h));
            q.v += (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (h / 6.0);
            q.o += (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (h / 6.0);
            q = q.normalized();
        }
        let expect = r0 * rotation_exp(&(w * dt));
        assert_abs_diff_eq!(q.rotation_matrix(), expect, epsilon = 1e-9);
    }
}
