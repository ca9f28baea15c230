//! Plant models and their structural properties.
//!
//! Every Lagrangian plant exposes the inertia/Coriolis/gravity triplet and a
//! regressor `Y` that is linear in the constant dynamic parameter vector:
//! `Y(q, q_dot, zeta, zeta_dot) * params = M(q) zeta_dot + C(q, q_dot) zeta + g(q)`.
//! Coriolis matrices are always assembled from Christoffel symbols so that
//! `d/dt M - 2C` is skew-symmetric (a testable property, not an assumption).

mod arm;
mod attitude;
mod pointmass;
mod spacecraft;
mod tpv;

pub use arm::TwoLinkArm;
pub use attitude::{d_matrix, euler_error, AttitudeProfile, EulerParam};
pub use pointmass::PointMass;
pub use spacecraft::{spacecraft_derivative, SpacecraftDerivative, SpacecraftState};
pub use tpv::{tpv_derivative, TpvDerivative, TpvState};

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

/// A mechanical plant `M(q) q_ddot + C(q, q_dot) q_dot + g(q) = tau` with a
/// linear parameterization.
pub trait LagrangianModel: Send + Sync {
    /// Degrees of freedom.
    fn dof(&self) -> usize;
    /// Dimension of the dynamic parameter vector.
    fn param_dim(&self) -> usize;
    /// The plant's true dynamic parameters.
    fn true_params(&self) -> DVector<f64>;
    fn mass_matrix(&self, q: &DVector<f64>) -> DMatrix<f64>;
    /// Christoffel-form Coriolis/centrifugal matrix.
    fn coriolis(&self, q: &DVector<f64>, q_dot: &DVector<f64>) -> DMatrix<f64>;
    fn gravity(&self, q: &DVector<f64>) -> DVector<f64>;
    /// Regressor with `Y * params = M zeta_dot + C zeta + g`.
    fn regressor(
        &self,
        q: &DVector<f64>,
        q_dot: &DVector<f64>,
        zeta: &DVector<f64>,
        zeta_dot: &DVector<f64>,
    ) -> DMatrix<f64>;
}

/// Forward dynamics: `q_ddot = M(q)^-1 (tau - C(q, q_dot) q_dot - g(q))`.
///
/// Panics if the inertia matrix fails to factor; that indicates a broken
/// model, not a runtime condition.
pub fn lagrangian_accel(
    model: &dyn LagrangianModel,
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    tau: &DVector<f64>,
) -> DVector<f64> {
    let m = model.mass_matrix(q);
    let rhs = tau - model.coriolis(q, q_dot) * q_dot - model.gravity(q);
    m.cholesky()
        .expect("inertia matrix must be positive definite")
        .solve(&rhs)
}

/// Skew-symmetric matrix with `skew(b) * c = b x c`.
pub fn skew(b: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -b.z, b.y, b.z, 0.0, -b.x, -b.y, b.x, 0.0)
}

/// Inverse of [`skew`] for (near-)skew-symmetric input: averages the two
/// off-diagonal triangles.
pub fn unskew(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Rodrigues rotation `exp(skew(axis_angle))`.
pub fn rotation_exp(axis_angle: &Vector3<f64>) -> Matrix3<f64> {
    let angle = axis_angle.norm();
    if angle < 1e-12 {
        return Matrix3::identity() + skew(axis_angle);
    }
    let k = skew(&(axis_angle / angle));
    Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::{dvector, Vector3};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn skew_examples() {
        let s = skew(&Vector3::new(1.0, 0.0, 0.0));
        assert_eq!(
            s,
            Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0)
        );
        let s = skew(&Vector3::new(1.0, 2.0, 3.0));
        assert_eq!(
            s,
            Matrix3::new(0.0, -3.0, 2.0, 3.0, 0.0, -1.0, -2.0, 1.0, 0.0)
        );
    }

    #[test]
    fn skew_is_cross_product() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let b = Vector3::from_fn(|_, _| rng.gen_range(-2.0..2.0));
            let c = Vector3::from_fn(|_, _| rng.gen_range(-2.0..2.0));
            assert_abs_diff_eq!(skew(&b) * c, b.cross(&c), epsilon = 1e-14);
            assert_abs_diff_eq!(skew(&b) * b, Vector3::zeros(), epsilon = 1e-14);
            assert_abs_diff_eq!(skew(&b).transpose(), -skew(&b), epsilon = 0.0);
            assert_abs_diff_eq!(unskew(&skew(&b)), b, epsilon = 1e-15);
        }
    }

    #[test]
    fn accel_equilibrium_and_pointmass() {
        let arm = TwoLinkArm::standard(0.0);
        let qdd = lagrangian_accel(&arm, &dvector![0.3, -0.2], &dvector![0.0, 0.0], &dvector![0.0, 0.0]);
        assert_abs_diff_eq!(qdd, dvector![0.0, 0.0], epsilon = 1e-14);

        let pm = PointMass::new(2.5, 3);
        let u = dvector![1.0, -2.0, 0.5];
        let qdd = lagrangian_accel(&pm, &dvector![0.0, 0.0, 0.0], &dvector![0.1, 0.2, 0.3], &u);
        assert_abs_diff_eq!(qdd, &u / 2.5, epsilon = 1e-15);
    }

    #[test]
    fn accel_matches_dense_solve_oracle() {
        let arm = TwoLinkArm::standard(9.81);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let q = dvector![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let qd = dvector![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let tau = dvector![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let qdd = lagrangian_accel(&arm, &q, &qd, &tau);
            // Independent dense LU solve of the same linear system.
            let m = arm.mass_matrix(&q);
            let rhs = &tau - arm.coriolis(&q, &qd) * &qd - arm.gravity(&q);
            let oracle = m.lu().solve(&rhs).unwrap();
            assert_abs_diff_eq!(qdd, oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn rotation_exp_is_orthonormal() {
        let w = Vector3::new(0.3, -1.1, 0.7);
        let r = rotation_exp(&w);
        assert_abs_diff_eq!(r.transpose() * r, Matrix3::identity(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-14);
    }
}
