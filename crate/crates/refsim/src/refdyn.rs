//! Reference-dynamics generators.
//!
//! Every controller in this crate tracks a reference velocity `z` produced by
//! integrating a declared dynamic system whose order equals or exceeds the
//! plant order. Each generator function below computes the highest derivative
//! of `z` from the current stack `(z, z', ..., z^(l-1))`, the agent's own
//! measurements, and (possibly delayed) neighbor data. Nothing here ever
//! differentiates a measured or delayed signal; discontinuous topology
//! switches and delay jumps therefore enter the loop only through bounded
//! jumps of the computed top derivative, while `z` and all lower derivatives
//! stay continuous.

use crate::error::ConfigError;
use nalgebra::{DVector, Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

/// Monic polynomial `prod_r (theta + kappa_r)` with real positive roots,
/// stored as the roots (ascending) and the expanded coefficients
/// `alpha_0..alpha_(l-1)` (the leading coefficient 1 is implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct HurwitzSpec {
    roots: Vec<f64>,
    coeffs: Vec<f64>,
}

/// Expand `prod_r (theta + kappa_r)` into ascending coefficients.
pub fn hurwitz_from_roots(roots: &[f64]) -> Result<HurwitzSpec, ConfigError> {
    if roots.is_empty() {
        return Err(ConfigError::invalid("at least one root is required"));
    }
    if let Some(bad) = roots.iter().find(|&&r| !(r > 0.0)) {
        return Err(ConfigError::invalid(format!(
            "all roots must be strictly positive, got {bad}"
        )));
    }
    let mut roots = roots.to_vec();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Multiply out one linear factor at a time.
    let mut coeffs = vec![1.0];
    for &kappa in &roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k] += c * kappa;
            next[k + 1] += c;
        }
        coeffs = next;
    }
    coeffs.pop(); // drop the leading 1
    Ok(HurwitzSpec { roots, coeffs })
}

impl HurwitzSpec {
    /// Polynomial order (number of roots).
    pub fn order(&self) -> usize {
        self.roots.len()
    }

    /// Ascending roots.
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// `alpha_r` for `r = 0..l-1`; `alpha_l = 1` by convention.
    pub fn coeff(&self, r: usize) -> f64 {
        if r == self.coeffs.len() {
            1.0
        } else {
            self.coeffs[r]
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Smallest root `kappa_0`.
    pub fn min_root(&self) -> f64 {
        self.roots[0]
    }
}

/// Stacked reference state `(z, z', ..., z^(order-1))`, each entry of the
/// plant's dof dimension.
#[derive(Debug, Clone)]
pub struct RefDynState {
    pub stack: Vec<DVector<f64>>,
}

impl RefDynState {
    pub fn zeros(order: usize, dof: usize) -> Self {
        Self {
            stack: vec![DVector::zeros(dof); order],
        }
    }

    pub fn order(&self) -> usize {
        self.stack.len()
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.stack[0]
    }

    pub fn deriv(&self, r: usize) -> &DVector<f64> {
        &self.stack[r]
    }
}

/// Which consensus reference dynamics to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsensusVariant {
    /// First-order: `z' = -a0 q' - sum_j w [q' + a0 q - q'_j(t-T) - a0 q_j(t-T)]`.
    /// Piecewise-continuous torque under switching.
    FirstOrder,
    /// Second-order consuming the own acceleration; fixed topology only.
    SecondOrderAccel,
    /// Second-order with the acceleration replaced by `z'`; switching-safe.
    SecondOrder,
    /// Arbitrary order, consuming delayed neighbor velocity and position.
    HighOrderVel,
    /// Arbitrary order, consuming delayed neighbor position only.
    HighOrderPos,
}

impl ConsensusVariant {
    /// Generator order (stack length) for a given root count.
    pub fn order(&self, n_roots: usize) -> usize {
        match self {
            ConsensusVariant::FirstOrder => 1,
            ConsensusVariant::SecondOrderAccel | ConsensusVariant::SecondOrder => 2,
            ConsensusVariant::HighOrderVel | ConsensusVariant::HighOrderPos => n_roots,
        }
    }

    /// Whether the variant reads the agent's own acceleration.
    pub fn consumes_acceleration(&self) -> bool {
        matches!(self, ConsensusVariant::SecondOrderAccel)
    }

    /// Whether the variant tolerates a switching topology.
    pub fn switching_safe(&self) -> bool {
        !self.consumes_acceleration()
    }

    fn uses_delayed_velocity(&self) -> bool {
        matches!(
            self,
            ConsensusVariant::FirstOrder
                | ConsensusVariant::SecondOrderAccel
                | ConsensusVariant::SecondOrder
                | ConsensusVariant::HighOrderVel
        )
    }
}

/// Delayed sample of one in-neighbor.
#[derive(Debug, Clone)]
pub struct NeighborSample {
    pub weight: f64,
    pub q: DVector<f64>,
    pub q_dot: DVector<f64>,
}

/// Highest derivative of `z` for the selected consensus variant.
///
/// All variants share one coefficient layout derived from the Hurwitz
/// polynomial `theta^l + a_(l-1) theta^(l-1) + ... + a_0` with `a_l = 1`:
///
/// ```text
/// z^(l) = - sum_{r=1..l-1} a_r z^(r)  -  a_0 q'
///         - sum_j w_ij [ sum_{r=1..l-1} a_(r+1) z^(r) + a_1 q' + a_0 q
///                        - (a_0/kappa_0) q'_j(t-T)  - a_0 q_j(t-T) ]
/// ```
///
/// The position-only variant drops the delayed-velocity term; the
/// acceleration-consuming second-order variant substitutes the measured
/// `q''` for `z'` in both occurrences.
pub fn consensus_ref_deriv(
    variant: ConsensusVariant,
    spec: &HurwitzSpec,
    state: &RefDynState,
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    q_ddot: Option<&DVector<f64>>,
    neighbors: &[NeighborSample],
) -> DVector<f64> {
    let ell = variant.order(spec.order());
    debug_assert_eq!(state.order(), ell, "stack length must equal the order");
    let dof = q.len();
    let vel_coeff = if variant.uses_delayed_velocity() {
        spec.coeff(0) / spec.min_root()
    } else {
        0.0
    };
    // z^(r) terms, with the acceleration substitution where applicable.
    let zr = |r: usize| -> &DVector<f64> {
        if variant.consumes_acceleration() && r == 1 {
            q_ddot.expect("acceleration-consuming variant needs q_ddot")
        } else {
            state.deriv(r)
        }
    };

    let mut top = DVector::zeros(dof);
    for r in 1..ell {
        top.axpy(-spec.coeff(r), zr(r), 1.0);
    }
    top.axpy(-spec.coeff(0), q_dot, 1.0);

    for nb in neighbors {
        let mut bracket = DVector::zeros(dof);
        for r in 1..ell {
            bracket.axpy(spec.coeff(r + 1), zr(r), 1.0);
        }
        bracket.axpy(spec.coeff(1), q_dot, 1.0);
        bracket.axpy(spec.coeff(0), q, 1.0);
        if vel_coeff != 0.0 {
            bracket.axpy(-vel_coeff, &nb.q_dot, 1.0);
        }
        bracket.axpy(-spec.coeff(0), &nb.q, 1.0);
        top.axpy(-nb.weight, &bracket, 1.0);
    }
    top
}

/// Second-order acceleration-consuming dynamics plus the interaction
/// weighting term `lambda * (q' - z)` that trades consensus speed against
/// the loop's input-output gain.
pub fn consensus_ref_deriv_manip(
    spec: &HurwitzSpec,
    state: &RefDynState,
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    q_ddot: &DVector<f64>,
    neighbors: &[NeighborSample],
    lambda: f64,
) -> DVector<f64> {
    let base = consensus_ref_deriv(
        ConsensusVariant::SecondOrderAccel,
        spec,
        state,
        q,
        q_dot,
        Some(q_ddot),
        neighbors,
    );
    if lambda == 0.0 {
        base
    } else {
        base + lambda * (q_dot - state.z())
    }
}

/// Delayed position sample of one thrust-vehicle neighbor.
#[derive(Debug, Clone)]
pub struct TpvNeighborSample {
    pub weight: f64,
    pub x: Vector3<f64>,
}

/// Fourth-order (with respect to position) reference dynamics for the
/// thrust-vehicle translation; `roots` are the three positive constants
/// whose elementary symmetric sums form the coefficients:
///
/// ```text
/// z''' = -e1 z'' - e2 z' - e3 x'
///        - sum_j w_ij [ z'' + e1 z' + e2 x' + e3 x - e3 x_j(t-T) ]
/// ```
pub fn tpv_ref_deriv(
    stack: &[Vector3<f64>; 3],
    x: &Vector3<f64>,
    x_dot: &Vector3<f64>,
    neighbors: &[TpvNeighborSample],
    roots: (f64, f64, f64),
) -> Vector3<f64> {
    let (a, b, c) = roots;
    let e1 = a + b + c;
    let e2 = a * b + a * c + b * c;
    let e3 = a * b * c;
    let (z_dot, z_ddot) = (stack[1], stack[2]);
    let mut top = -e1 * z_ddot - e2 * z_dot - e3 * x_dot;
    for nb in neighbors {
        top -= nb.weight * (z_ddot + e1 * z_dot + e2 * x_dot + e3 * x - e3 * nb.x);
    }
    top
}

/// Output of the task-space generator: the derivative of `z` plus the
/// auxiliary reference pair used by the convergence monitor.
#[derive(Debug, Clone)]
pub struct TaskspaceRef {
    pub z_dot: Vector2<f64>,
    pub z_r: Vector2<f64>,
    pub z_r_dot: Vector2<f64>,
}

/// Nonlinear second-order task-space reference dynamics:
/// `z' = z_r' - alpha (z - z_r) - J_hat^T K* dx` with
/// `z_r = J_hat^-1 x_d'` and `z_r' = J_hat^-1 (x_d'' - J_hat' z_r)`.
///
/// Fails when the estimated Jacobian's condition number exceeds `cond_cap`.
#[allow(clippy::too_many_arguments)]
pub fn taskspace_ref_deriv(
    z: &Vector2<f64>,
    j_hat: &Matrix2<f64>,
    j_hat_dot: &Matrix2<f64>,
    dx: &Vector2<f64>,
    xd_dot: &Vector2<f64>,
    xd_ddot: &Vector2<f64>,
    alpha: f64,
    k_star: &Matrix2<f64>,
    cond_cap: f64,
) -> Result<TaskspaceRef, f64> {
    let svd = j_hat.svd(false, false);
    let (smax, smin) = (svd.singular_values[0], svd.singular_values[1]);
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > cond_cap {
        return Err(cond);
    }
    let inv = j_hat.try_inverse().expect("condition number already checked");
    let z_r = inv * xd_dot;
    let z_r_dot = inv * (xd_ddot - j_hat_dot * z_r);
    let z_dot = z_r_dot - alpha * (z - z_r) - j_hat.transpose() * k_star * dx;
    Ok(TaskspaceRef { z_dot, z_r, z_r_dot })
}

/// Nonlinear second-order attitude reference dynamics:
/// `z' = R^T w_d_I' - skew(z) R^T w_d_I - alpha2 (z - w_d) - alpha1 dq_v`
/// with `w_d = R^T w_d_I`.
pub fn spacecraft_ref_deriv(
    z: &Vector3<f64>,
    r: &Matrix3<f64>,
    w_d_inertial: &Vector3<f64>,
    w_d_inertial_dot: &Vector3<f64>,
    dq_v: &Vector3<f64>,
    alpha1: f64,
    alpha2: f64,
) -> Vector3<f64> {
    let w_d = r.transpose() * w_d_inertial;
    r.transpose() * w_d_inertial_dot - crate::models::skew(z) * (r.transpose() * w_d_inertial)
        - alpha2 * (z - w_d)
        - alpha1 * dq_v
}

/// Componentwise signum with `sgn(0) = 0`.
pub fn sgn(v: &DVector<f64>) -> DVector<f64> {
    v.map(|x| {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Distributed-tracking reference dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrackingVariant {
    /// Second-order with a signum action; piecewise-constant torque
    /// components (chattering).
    Signum,
    /// Third-order with the signum under one more integrator; differentiable
    /// torque but consumes neighbor accelerations.
    SmoothAccel,
    /// Third-order without acceleration measurement; neighbors share their
    /// reference derivative `z'` instead.
    Smooth,
}

/// Undelayed neighbor (or leader) signals for distributed tracking. For the
/// leader the "reference derivative" slot carries its true acceleration.
#[derive(Debug, Clone)]
pub struct TrackingNeighbor {
    pub weight: f64,
    pub q: DVector<f64>,
    pub q_dot: DVector<f64>,
    pub q_ddot: Option<DVector<f64>>,
    pub z_dot: Option<DVector<f64>>,
}

impl TrackingNeighbor {
    fn xi(&self, alpha: f64) -> DVector<f64> {
        &self.q_dot + alpha * &self.q
    }

    fn xi_star(&self, alpha: f64, beta: f64) -> DVector<f64> {
        self.q_ddot.as_ref().expect("neighbor acceleration required") + beta * &self.q_dot
            + alpha * &self.q
    }

    /// `xi** = z' + beta q' + alpha q`, falling back to the acceleration
    /// when the neighbor is the leader.
    fn xi_star_star(&self, alpha: f64, beta: f64) -> DVector<f64> {
        let top = self
            .z_dot
            .as_ref()
            .or(self.q_ddot.as_ref())
            .expect("neighbor z' (or leader acceleration) required");
        top + beta * &self.q_dot + alpha * &self.q
    }
}

/// `z' = -alpha q' - u - gamma sgn(u)` with
/// `u = sum_j w_ij (xi_i - xi_j)`, `xi = q' + alpha q`.
pub fn tracking_ref_deriv_signum(
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    neighbors: &[TrackingNeighbor],
    alpha: f64,
    gamma: f64,
) -> DVector<f64> {
    let xi_own = q_dot + alpha * q;
    let mut u = DVector::zeros(q.len());
    for nb in neighbors {
        u += nb.weight * (&xi_own - nb.xi(alpha));
    }
    -alpha * q_dot - &u - gamma * sgn(&u)
}

/// `z'' = -beta q'' - alpha q' - u - gamma sgn(u)` with
/// `u = sum_j w_ij (xi*_i - xi*_j)`, `xi* = q'' + beta q' + alpha q`.
pub fn tracking_ref_deriv_smooth_accel(
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    q_ddot: &DVector<f64>,
    neighbors: &[TrackingNeighbor],
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> DVector<f64> {
    let xi_own = q_ddot + beta * q_dot + alpha * q;
    let mut u = DVector::zeros(q.len());
    for nb in neighbors {
        u += nb.weight * (&xi_own - nb.xi_star(alpha, beta));
    }
    -beta * q_ddot - alpha * q_dot - &u - gamma * sgn(&u)
}

/// Acceleration-free third-order tracking dynamics. `z'` is an algebraic
/// function of the measured state and two internal integral states:
///
/// ```text
/// z' = -beta q' - alpha q - sum_j w_ij (q' - q'_j) - i1 - gamma i2 + c
/// i1' = sum_j w_ij (beta q' + alpha q - beta q'_j - alpha q_j)
/// i2' = sgn[ sum_j w_ij (xi**_i - xi**_j) ]
/// ```
///
/// The constant `c` absorbs the initial condition of `z'`; see
/// [`tracking_smooth_constant`].
pub fn tracking_zdot_smooth(
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    neighbors: &[TrackingNeighbor],
    i1: &DVector<f64>,
    i2: &DVector<f64>,
    c: &DVector<f64>,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> DVector<f64> {
    let mut zd = -beta * q_dot - alpha * q - i1 - gamma * i2 + c;
    for nb in neighbors {
        zd -= nb.weight * (q_dot - &nb.q_dot);
    }
    zd
}

/// Integrands of the two internal states of the acceleration-free variant.
/// `z_dot_own` must be the value just computed by [`tracking_zdot_smooth`];
/// neighbor entries carry their own `z'` (communicated).
pub fn tracking_integrands_smooth(
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    z_dot_own: &DVector<f64>,
    neighbors: &[TrackingNeighbor],
    alpha: f64,
    beta: f64,
) -> (DVector<f64>, DVector<f64>) {
    let mut i1_dot = DVector::zeros(q.len());
    let xi_own = z_dot_own + beta * q_dot + alpha * q;
    let mut dis = DVector::zeros(q.len());
    for nb in neighbors {
        i1_dot += nb.weight * (beta * q_dot + alpha * q - beta * &nb.q_dot - alpha * &nb.q);
        dis += nb.weight * (&xi_own - nb.xi_star_star(alpha, beta));
    }
    (i1_dot, sgn(&dis))
}

/// Integration constant such that `z'(0) = z_dot_target` with both integral
/// states starting at zero.
pub fn tracking_smooth_constant(
    q0: &DVector<f64>,
    q_dot0: &DVector<f64>,
    neighbors: &[TrackingNeighbor],
    alpha: f64,
    beta: f64,
    z_dot_target: &DVector<f64>,
) -> DVector<f64> {
    let mut c = z_dot_target + beta * q_dot0 + alpha * q0;
    for nb in neighbors {
        c += nb.weight * (q_dot0 - &nb.q_dot);
    }
    c
}

/// Third-order tracking dynamics for the point mass:
/// `z'' = x_d''' - a2 (z' - x_d'') - a1 (z - x_d') - a0 (x - x_d)`.
#[allow(clippy::too_many_arguments)]
pub fn pointmass_ref_deriv(
    z: &DVector<f64>,
    z_dot: &DVector<f64>,
    x: &DVector<f64>,
    x_d: &DVector<f64>,
    xd_dot: &DVector<f64>,
    xd_ddot: &DVector<f64>,
    xd_dddot: &DVector<f64>,
    a: (f64, f64, f64),
) -> DVector<f64> {
    let (a0, a1, a2) = a;
    xd_dddot - a2 * (z_dot - xd_ddot) - a1 * (z - xd_dot) - a0 * (x - x_d)
}
