//! Point mass `m x_ddot = u` as a degenerate Lagrangian plant.

use super::LagrangianModel;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct PointMass {
    pub mass: f64,
    pub dim: usize,
}

impl PointMass {
    pub fn new(mass: f64, dim: usize) -> Self {
        assert!(mass > 0.0, "mass must be positive");
        Self { mass, dim }
    }
}

impl LagrangianModel for PointMass {
    fn dof(&self) -> usize {
        self.dim
    }

    fn param_dim(&self) -> usize {
        1
    }

    fn true_params(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.mass])
    }

    fn mass_matrix(&self, _q: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim) * self.mass
    }

    fn coriolis(&self, _q: &DVector<f64>, _q_dot: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::zeros(self.dim, self.dim)
    }

    fn gravity(&self, _q: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(self.dim)
    }

    fn regressor(
        &self,
        _q: &DVector<f64>,
        _q_dot: &DVector<f64>,
        _zeta: &DVector<f64>,
        zeta_dot: &DVector<f64>,
    ) -> DMatrix<f64> {
        DMatrix::from_column_slice(self.dim, 1, zeta_dot.as_slice())
    }
}
