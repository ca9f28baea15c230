//! Planar two-link revolute arm: dynamics in minimal-parameter form plus
//! task-space kinematics with a kinematic regressor.
//!
//! Joint angles are measured from the horizontal x-axis; gravity acts along
//! -y, so a horizontally mounted arm is modeled with `gravity = 0`.

use super::LagrangianModel;
use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

/// Two-link planar revolute arm.
///
/// Dynamic parameters (the minimal set the dynamics are linear in):
/// `p1 = m1 lc1^2 + m2 l1^2 + I1`, `p2 = m2 lc2^2 + I2`, `p3 = m2 l1 lc2`,
/// `p4 = m1 lc1 + m2 l1`, `p5 = m2 lc2`.
/// Kinematic parameters: the link lengths `(l1, l2)`.
#[derive(Debug, Clone)]
pub struct TwoLinkArm {
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
    pub lc1: f64,
    pub lc2: f64,
    pub i1: f64,
    pub i2: f64,
    pub gravity: f64,
}

impl TwoLinkArm {
    /// Uniform-rod links with the crate's standard masses (1.0, 0.8 kg) and
    /// lengths (0.5, 0.4 m); centers of mass at midspan.
    pub fn standard(gravity: f64) -> Self {
        let (m1, m2, l1, l2) = (1.0, 0.8, 0.5, 0.4);
        Self {
            m1,
            m2,
            l1,
            l2,
            lc1: l1 / 2.0,
            lc2: l2 / 2.0,
            i1: m1 * l1 * l1 / 12.0,
            i2: m2 * l2 * l2 / 12.0,
            gravity,
        }
    }

    fn p(&self) -> [f64; 5] {
        [
            self.m1 * self.lc1 * self.lc1 + self.m2 * self.l1 * self.l1 + self.i1,
            self.m2 * self.lc2 * self.lc2 + self.i2,
            self.m2 * self.l1 * self.lc2,
            self.m1 * self.lc1 + self.m2 * self.l1,
            self.m2 * self.lc2,
        ]
    }

    /// True kinematic parameter vector `(l1, l2)`.
    pub fn kinematic_params(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.l1, self.l2])
    }

    /// End-effector position.
    pub fn forward_kinematics(&self, q: &DVector<f64>) -> Vector2<f64> {
        Self::fk_with(q, self.l1, self.l2)
    }

    fn fk_with(q: &DVector<f64>, l1: f64, l2: f64) -> Vector2<f64> {
        let (q1, q12) = (q[0], q[0] + q[1]);
        Vector2::new(l1 * q1.cos() + l2 * q12.cos(), l1 * q1.sin() + l2 * q12.sin())
    }

    /// Task-space Jacobian with the true link lengths.
    pub fn jacobian(&self, q: &DVector<f64>) -> Matrix2<f64> {
        Self::jacobian_with(q, self.l1, self.l2)
    }

    /// Jacobian assembled from an arbitrary kinematic parameter estimate.
    pub fn jacobian_from_params(q: &DVector<f64>, theta: &DVector<f64>) -> Matrix2<f64> {
        Self::jacobian_with(q, theta[0], theta[1])
    }

    fn jacobian_with(q: &DVector<f64>, l1: f64, l2: f64) -> Matrix2<f64> {
        let (s1, c1) = q[0].sin_cos();
        let (s12, c12) = (q[0] + q[1]).sin_cos();
        Matrix2::new(
            -l1 * s1 - l2 * s12,
            -l2 * s12,
            l1 * c1 + l2 * c12,
            l2 * c12,
        )
    }

    /// Time derivative of the Jacobian built from an estimate `theta`,
    /// accounting for both joint motion and the estimate's own drift.
    pub fn jacobian_dot_from_params(
        q: &DVector<f64>,
        q_dot: &DVector<f64>,
        theta: &DVector<f64>,
        theta_dot: &DVector<f64>,
    ) -> Matrix2<f64> {
        let (s1, c1) = q[0].sin_cos();
        let (s12, c12) = (q[0] + q[1]).sin_cos();
        let (d1, d12) = (q_dot[0], q_dot[0] + q_dot[1]);
        let (l1, l2) = (theta[0], theta[1]);
        let (l1d, l2d) = (theta_dot[0], theta_dot[1]);
        Matrix2::new(
            -l1d * s1 - l1 * c1 * d1 - l2d * s12 - l2 * c12 * d12,
            -l2d * s12 - l2 * c12 * d12,
            l1d * c1 - l1 * s1 * d1 + l2d * c12 - l2 * s12 * d12,
            l2d * c12 - l2 * s12 * d12,
        )
    }

    /// Kinematic regressor: `jacobian_from_params(q, theta) * xi = Z(q, xi) * theta`.
    pub fn kinematic_regressor(q: &DVector<f64>, xi: &DVector<f64>) -> Matrix2<f64> {
        let (s1, c1) = q[0].sin_cos();
        let (s12, c12) = (q[0] + q[1]).sin_cos();
        let (x1, x12) = (xi[0], xi[0] + xi[1]);
        Matrix2::new(-s1 * x1, -s12 * x12, c1 * x1, c12 * x12)
    }
}

impl LagrangianModel for TwoLinkArm {
    fn dof(&self) -> usize {
        2
    }

    fn param_dim(&self) -> usize {
        5
    }

    fn true_params(&self) -> DVector<f64> {
        DVector::from_vec(self.p().to_vec())
    }

    fn mass_matrix(&self, q: &DVector<f64>) -> DMatrix<f64> {
        let [p1, p2, p3, _, _] = self.p();
        let c2 = q[1].cos();
        DMatrix::from_row_slice(
            2,
            2,
            &[
                p1 + p2 + 2.0 * p3 * c2,
                p2 + p3 * c2,
                p2 + p3 * c2,
                p2,
            ],
        )
    }

    fn coriolis(&self, q: &DVector<f64>, q_dot: &DVector<f64>) -> DMatrix<f64> {
        let [_, _, p3, _, _] = self.p();
        let s2 = q[1].sin();
        let (d1, d2) = (q_dot[0], q_dot[1]);
        DMatrix::from_row_slice(
            2,
            2,
            &[
                -p3 * s2 * d2,
                -p3 * s2 * (d1 + d2),
                p3 * s2 * d1,
                0.0,
            ],
        )
    }

    fn gravity(&self, q: &DVector<f64>) -> DVector<f64> {
        let [_, _, _, p4, p5] = self.p();
        let g = self.gravity;
        let c1 = q[0].cos();
        let c12 = (q[0] + q[1]).cos();
        DVector::from_vec(vec![p4 * g * c1 + p5 * g * c12, p5 * g * c12])
    }

    fn regressor(
        &self,
        q: &DVector<f64>,
        q_dot: &DVector<f64>,
        zeta: &DVector<f64>,
        zeta_dot: &DVector<f64>,
    ) -> DMatrix<f64> {
        let (s2, c2) = q[1].sin_cos();
        let c1 = q[0].cos();
        let c12 = (q[0] + q[1]).cos();
        let g = self.gravity;
        let (d1, d2) = (q_dot[0], q_dot[1]);
        let (z1, z2) = (zeta[0], zeta[1]);
        let (zd1, zd2) = (zeta_dot[0], zeta_dot[1]);
        DMatrix::from_row_slice(
            2,
            5,
            &[
                zd1,
                zd1 + zd2,
                c2 * (2.0 * zd1 + zd2) - s2 * (d2 * z1 + (d1 + d2) * z2),
                g * c1,
                g * c12,
                0.0,
                zd1 + zd2,
                c2 * zd1 + s2 * d1 * z1,
                0.0,
                g * c12,
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dvector;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rand_vec(rng: &mut StdRng, n: usize, lim: f64) -> DVector<f64> {
        DVector::from_fn(n, |_, _| rng.gen_range(-lim..lim))
    }

    #[test]
    fn regressor_identity_holds() {
        let arm = TwoLinkArm::standard(9.81);
        let p = arm.true_params();
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..1000 {
            let q = rand_vec(&mut rng, 2, 3.0);
            let qd = rand_vec(&mut rng, 2, 2.0);
            let z = rand_vec(&mut rng, 2, 2.0);
            let zd = rand_vec(&mut rng, 2, 2.0);
            let lhs = arm.regressor(&q, &qd, &z, &zd) * &p;
            let rhs = arm.mass_matrix(&q) * &zd + arm.coriolis(&q, &qd) * &z + arm.gravity(&q);
            let rel = (&lhs - &rhs).norm() / rhs.norm().max(1.0);
            assert!(rel <= 1e-9, "relative error {rel}");
        }
    }

    #[test]
    fn inertia_positive_definite_over_configurations() {
        let arm = TwoLinkArm::standard(9.81);
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..1000 {
            let q = rand_vec(&mut rng, 2, std::f64::consts::PI);
            let m = arm.mass_matrix(&q);
            let eig = m.symmetric_eigenvalues();
            assert!(eig.min() > 0.0, "eig {eig:?} at q {q:?}");
        }
    }

    #[test]
    fn coriolis_satisfies_skew_symmetry() {
        // |x^T (dM/dt - 2C) x| with dM/dt from a central finite difference
        // of M along q_dot.
        let arm = TwoLinkArm::standard(9.81);
        let mut rng = StdRng::seed_from_u64(11);
        let eps = 1e-6;
        for _ in 0..300 {
            let q = rand_vec(&mut rng, 2, 3.0);
            let qd = rand_vec(&mut rng, 2, 2.0);
            let x = rand_vec(&mut rng, 2, 1.0);
            let mp = arm.mass_matrix(&(&q + &qd * eps));
            let mm = arm.mass_matrix(&(&q - &qd * eps));
            let mdot = (mp - mm) / (2.0 * eps);
            let val = (x.transpose() * (mdot - 2.0 * arm.coriolis(&q, &qd)) * &x)[(0, 0)];
            assert!(val.abs() <= 1e-5, "skew residual {val}");
        }
    }

    #[test]
    fn forward_kinematics_stretched() {
        let arm = TwoLinkArm::standard(0.0);
        let x = arm.forward_kinematics(&dvector![0.0, 0.0]);
        assert_abs_diff_eq!(x.x, arm.l1 + arm.l2, epsilon = 1e-15);
        assert_abs_diff_eq!(x.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kinematic_regressor_identity() {
        let arm = TwoLinkArm::standard(0.0);
        let theta = arm.kinematic_params();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..500 {
            let q = rand_vec(&mut rng, 2, 3.0);
            let xi = rand_vec(&mut rng, 2, 2.0);
            let lhs = arm.jacobian(&q) * Vector2::new(xi[0], xi[1]);
            let rhs = TwoLinkArm::kinematic_regressor(&q, &xi) * Vector2::new(theta[0], theta[1]);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_difference_of_fk() {
        let arm = TwoLinkArm::standard(0.0);
        let q = dvector![0.4, 0.9];
        let qd = dvector![0.7, -0.3];
        let h = 1e-6;
        let xp = arm.forward_kinematics(&(&q + &qd * h));
        let xm = arm.forward_kinematics(&(&q - &qd * h));
        let fd = (xp - xm) / (2.0 * h);
        let an = arm.jacobian(&q) * Vector2::new(qd[0], qd[1]);
        assert_abs_diff_eq!(fd, an, epsilon = 1e-8);
    }

    #[test]
    fn jacobian_dot_matches_finite_difference() {
        let q0 = dvector![0.3, 0.8];
        let qd = dvector![0.5, -0.2];
        let th0 = dvector![0.5, 0.4];
        let thd = dvector![0.01, -0.02];
        let h = 1e-6;
        let jp = TwoLinkArm::jacobian_from_params(&(&q0 + &qd * h), &(&th0 + &thd * h));
        let jm = TwoLinkArm::jacobian_from_params(&(&q0 - &qd * h), &(&th0 - &thd * h));
        let fd = (jp - jm) / (2.0 * h);
        let an = TwoLinkArm::jacobian_dot_from_params(&q0, &qd, &th0, &thd);
        assert_abs_diff_eq!(fd, an, epsilon = 1e-8);
    }
}
