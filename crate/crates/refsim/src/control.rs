//! Control and adaptation laws.
//!
//! Controllers are pure per-step functions; whatever internal state they
//! need (filters, accumulators, internally simulated kinematics) is owned by
//! the per-agent simulation loop and threaded through explicitly. The
//! output-feedback controllers are written so that the forbidden measurement
//! simply has no parameter to arrive through; [`control_inputs`] records the
//! signal whitelist per controller for the wiring checks.

use crate::models::{d_matrix, skew, EulerParam, LagrangianModel, TwoLinkArm};
use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix4, Vector2, Vector3, Vector4};

/// Measured signals a control path may consume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    JointPosition,
    JointVelocity,
    TaskPosition,
    TaskVelocity,
    Position,
    Velocity,
    Acceleration,
    Attitude,
    AngularVelocity,
    Thrust,
    DelayedNeighborPosition,
    DelayedNeighborVelocity,
    NeighborState,
}

/// Controller families, for wiring-manifest checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerKind {
    SlotineLi,
    BacksteppingBaseline,
    PointMassOutputFeedback,
    TpvContinuous,
    TpvDifferentiable,
    TpvAdaptive,
    TaskSpaceAdaptive,
    SpacecraftOutputFeedback,
}

/// Signals each controller's computation path reads. The forbidden
/// measurements of the output-feedback designs (plant velocity, task-space
/// velocity, angular velocity) do not appear in their lists, matching the
/// function signatures below.
pub fn control_inputs(kind: ControllerKind) -> &'static [Signal] {
    use Signal::*;
    match kind {
        ControllerKind::SlotineLi => &[
            JointPosition,
            JointVelocity,
            DelayedNeighborPosition,
            DelayedNeighborVelocity,
        ],
        ControllerKind::BacksteppingBaseline => &[
            JointPosition,
            JointVelocity,
            DelayedNeighborPosition,
            DelayedNeighborVelocity,
        ],
        ControllerKind::PointMassOutputFeedback => &[Position],
        ControllerKind::TpvContinuous => &[
            Position,
            Velocity,
            Attitude,
            Thrust,
            DelayedNeighborPosition,
        ],
        ControllerKind::TpvDifferentiable | ControllerKind::TpvAdaptive => &[
            Position,
            Velocity,
            Attitude,
            Thrust,
            DelayedNeighborPosition,
        ],
        ControllerKind::TaskSpaceAdaptive => &[JointPosition, JointVelocity, TaskPosition],
        ControllerKind::SpacecraftOutputFeedback => &[Attitude],
    }
}

/// Adaptive-controller state: the dynamic parameter estimate and its gain,
/// plus the optional kinematic and mass estimates used by the task-space and
/// thrust-vehicle designs.
#[derive(Debug, Clone)]
pub struct AdaptiveState {
    pub vartheta_hat: DVector<f64>,
    pub gamma: DMatrix<f64>,
    pub theta_hat: Option<DVector<f64>>,
    pub lambda: Option<DMatrix<f64>>,
    pub m_hat: Option<f64>,
    pub gamma_star: Option<f64>,
}

impl AdaptiveState {
    pub fn new(vartheta_hat: DVector<f64>, gamma: DMatrix<f64>) -> Self {
        Self {
            vartheta_hat,
            gamma,
            theta_hat: None,
            lambda: None,
            m_hat: None,
            gamma_star: None,
        }
    }
}

/// Passive-filter state for the output-feedback controllers: the filter
/// output `y` and the auxiliary realization state `eta`.
#[derive(Debug, Clone)]
pub struct FilterState {
    pub y: DVector<f64>,
    pub eta: DVector<f64>,
}

/// Internal state of the thrust-vehicle controllers: the integrated thrust,
/// the mass estimate seed, and the running integral of the acceleration-free
/// adaptation.
#[derive(Debug, Clone)]
pub struct TpvControllerState {
    pub sigma: f64,
    pub m_hat0: f64,
    pub accumulator: f64,
    /// `phi(0) . x'(0)`, the boundary term of the integral-by-parts form.
    pub boundary0: f64,
}

/// Adaptive torque around a reference velocity `z` and its derivative:
/// `tau = -K s + Y(q, q', z, z') vartheta_hat` with `s = q' - z`, and the
/// gradient adaptation `d/dt vartheta_hat = -Gamma Y^T s`.
pub fn slotine_li_torque(
    model: &dyn LagrangianModel,
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    z: &DVector<f64>,
    z_dot: &DVector<f64>,
    vartheta_hat: &DVector<f64>,
    k: &DMatrix<f64>,
    gamma: &DMatrix<f64>,
) -> (DVector<f64>, DVector<f64>) {
    let s = q_dot - z;
    let y = model.regressor(q, q_dot, z, z_dot);
    let tau = -(k * &s) + &y * vartheta_hat;
    let vartheta_dot = -(gamma * (y.transpose() * &s));
    (tau, vartheta_dot)
}

/// Delayed neighbor data for the backstepping baseline, including the
/// analytic delay rate the baseline needs for differentiating the delayed
/// position.
#[derive(Debug, Clone)]
pub struct BaselineNeighbor {
    pub weight: f64,
    pub q: DVector<f64>,
    pub q_dot: DVector<f64>,
    pub delay_rate: f64,
}

/// Output of the backstepping baseline, including the raw reference
/// acceleration magnitude before clamping (the quantity that blows up at
/// topology switches).
#[derive(Debug, Clone)]
pub struct BaselineOutput {
    pub tau: DVector<f64>,
    pub vartheta_dot: DVector<f64>,
    pub q_r_dot: DVector<f64>,
    pub raw_q_r_ddot_max: f64,
    pub clamped: bool,
}

fn baseline_q_r_dot(q: &DVector<f64>, neighbors: &[BaselineNeighbor]) -> DVector<f64> {
    let mut qr = DVector::zeros(q.len());
    for nb in neighbors {
        qr -= nb.weight * (q - &nb.q);
    }
    qr
}

/// Classical design that differentiates its desired virtual control:
/// `q_r' = -sum_j w_ij (q - q_j(t-T))`,
/// `q_r'' = -sum_j w_ij (q' - (1 - T') q_j'(t-T))`, and the adaptive torque
/// around `(q_r', q_r'')`.
///
/// At a topology switch the true `q_r''` contains an impulse; the grid
/// realizes it as `(q_r'|new - q_r'|old) / h`, supplied through
/// `switch_jump` as the old-graph neighbor set and the step size. The
/// resulting reference acceleration is clamped at `clamp` per component and
/// the pre-clamp magnitude reported.
#[allow(clippy::too_many_arguments)]
pub fn backstepping_baseline_torque(
    model: &dyn LagrangianModel,
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    neighbors: &[BaselineNeighbor],
    switch_jump: Option<(&[BaselineNeighbor], f64)>,
    vartheta_hat: &DVector<f64>,
    k: &DMatrix<f64>,
    gamma: &DMatrix<f64>,
    clamp: f64,
) -> BaselineOutput {
    let q_r_dot = baseline_q_r_dot(q, neighbors);
    let mut q_r_ddot = DVector::zeros(q.len());
    for nb in neighbors {
        q_r_ddot -= nb.weight * (q_dot - &(&nb.q_dot * (1.0 - nb.delay_rate)));
    }
    if let Some((old, h)) = switch_jump {
        let jump = &q_r_dot - baseline_q_r_dot(q, old);
        q_r_ddot += jump / h;
    }
    let raw = q_r_ddot.amax();
    let clamped = raw > clamp;
    if clamped {
        q_r_ddot = q_r_ddot.map(|x| x.clamp(-clamp, clamp));
    }
    let s = q_dot - &q_r_dot;
    let y = model.regressor(q, q_dot, &q_r_dot, &q_r_ddot);
    let tau = -(k * &s) + &y * vartheta_hat;
    let vartheta_dot = -(gamma * (y.transpose() * &s));
    BaselineOutput {
        tau,
        vartheta_dot,
        q_r_dot,
        raw_q_r_ddot_max: raw,
        clamped,
    }
}

/// Output of the velocity-free point-mass controller.
#[derive(Debug, Clone)]
pub struct PointMassControl {
    pub u: DVector<f64>,
    pub y: DVector<f64>,
    /// `eta' = y`.
    pub eta_dot: DVector<f64>,
    /// Derivative of the position companion `chi = x - int z`.
    pub zint_dot: DVector<f64>,
    /// Derivative of the adaptation accumulator.
    pub accumulator_dot: f64,
}

/// Velocity-free filter realization: with `chi = x - int z dt` and
/// `eta' = y`, the output `y = lambda_f (chi - eta)` satisfies
/// `y' + lambda_f y = lambda_f (x' - z)` without reading `x'`.
pub fn pointmass_filter_output(
    x: &DVector<f64>,
    z_int: &DVector<f64>,
    eta: &DVector<f64>,
    lambda_f: f64,
) -> DVector<f64> {
    lambda_f * (x - z_int - eta)
}

/// Mass estimate from the integral-by-parts form of `m_hat' = -g* z' s`:
/// `m_hat = m_hat(0) + g* (b0 - z'.x + |z|^2/2 + accumulator)` with
/// `accumulator' = x . z''` and `b0 = z'(0).x(0) - |z(0)|^2/2`.
pub fn pointmass_mhat(
    m_hat0: f64,
    gamma_star: f64,
    boundary0: f64,
    x: &DVector<f64>,
    z: &DVector<f64>,
    z_dot: &DVector<f64>,
    accumulator: f64,
) -> f64 {
    m_hat0 + gamma_star * (boundary0 - z_dot.dot(x) + 0.5 * z.norm_squared() + accumulator)
}

/// Velocity-free tracking control `u = m_hat z' - k y` for the point mass.
/// The filter and the mass estimate are realized from positions only.
#[allow(clippy::too_many_arguments)]
pub fn pointmass_control(
    x: &DVector<f64>,
    z: &DVector<f64>,
    z_dot: &DVector<f64>,
    z_ddot: &DVector<f64>,
    z_int: &DVector<f64>,
    eta: &DVector<f64>,
    lambda_f: f64,
    k: f64,
    m_hat: f64,
) -> PointMassControl {
    let y = pointmass_filter_output(x, z_int, eta, lambda_f);
    PointMassControl {
        u: m_hat * z_dot - k * &y,
        eta_dot: y.clone(),
        zint_dot: z.clone(),
        accumulator_dot: x.dot(z_ddot),
        y,
    }
}

/// Invert the thrust-vehicle linearization: given the commanded
/// `u = -R [sigma w2, -sigma w1, sigma' + c sigma]^T`, recover
/// `(sigma', w1, w2)`. Fails when the thrust is below `sigma_min`.
pub fn tpv_fbl_extract(
    u: &Vector3<f64>,
    r: &Matrix3<f64>,
    sigma: f64,
    c: f64,
    sigma_min: f64,
) -> Result<(f64, f64, f64), f64> {
    if sigma < sigma_min {
        return Err(sigma);
    }
    let v = -(r.transpose() * u);
    let w2 = v.x / sigma;
    let w1 = -v.y / sigma;
    let sigma_dot = v.z - c * sigma;
    Ok((sigma_dot, w1, w2))
}

/// Reassemble the command from the extracted rates (the inverse map of
/// [`tpv_fbl_extract`]); used to verify the round-trip identity.
pub fn tpv_fbl_assemble(
    r: &Matrix3<f64>,
    sigma: f64,
    sigma_dot: f64,
    w1: f64,
    w2: f64,
    c: f64,
) -> Vector3<f64> {
    -(r * Vector3::new(sigma * w2, -sigma * w1, sigma_dot + c * sigma))
}

/// Exact-model consensus command for the thrust vehicle (piecewise
/// continuous under switching):
/// `u = m psi - c m g e3` with `c = alpha + beta + sum_j w_ij(t)` and
/// `psi = -alpha beta x' - sum_j w_ij [(alpha+beta) x' + alpha beta x - alpha beta x_j(t-T)]`.
pub fn tpv_continuous_command(
    x: &Vector3<f64>,
    x_dot: &Vector3<f64>,
    neighbors: &[crate::refdyn::TpvNeighborSample],
    mass: f64,
    gravity: f64,
    alpha: f64,
    beta: f64,
) -> (Vector3<f64>, f64) {
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    let ab = alpha * beta;
    let mut psi = -ab * x_dot;
    let mut wsum = 0.0;
    for nb in neighbors {
        psi -= nb.weight * ((alpha + beta) * x_dot + ab * x - ab * nb.x);
        wsum += nb.weight;
    }
    let c = alpha + beta + wsum;
    (mass * psi - c * mass * gravity * e3, c)
}

/// Differentiable exact-mass command:
/// `u* = m (z'' + a* z') - k s* - a* m g e3` with `s* = x' - z`.
pub fn tpv_differentiable_command(
    z_dot: &Vector3<f64>,
    z_ddot: &Vector3<f64>,
    s_star: &Vector3<f64>,
    mass: f64,
    k: f64,
    alpha_star: f64,
    gravity: f64,
) -> Vector3<f64> {
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    mass * (z_ddot + alpha_star * z_dot) - k * s_star - alpha_star * mass * gravity * e3
}

/// Differentiable adaptive command `u* = m_hat (z'' + a* z') - a* m_hat g e3`.
pub fn tpv_adaptive_command(
    z_dot: &Vector3<f64>,
    z_ddot: &Vector3<f64>,
    m_hat: f64,
    alpha_star: f64,
    gravity: f64,
) -> Vector3<f64> {
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    m_hat * (z_ddot + alpha_star * z_dot) - alpha_star * m_hat * gravity * e3
}

/// The regressor-like direction of the thrust-vehicle adaptation:
/// `phi = z'' + a* z' - a* g e3`.
pub fn tpv_phi(z_dot: &Vector3<f64>, z_ddot: &Vector3<f64>, alpha_star: f64, gravity: f64) -> Vector3<f64> {
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    z_ddot + alpha_star * z_dot - alpha_star * gravity * e3
}

/// Acceleration-free mass estimate from the integral-by-parts form of
/// `m_hat' = -g* phi . (x'' - z')`:
/// `m_hat = m_hat(0) - g* (phi . x' - b0) + g* accumulator` with
/// `accumulator' = phi . z' + (z''' + a* z'') . x'` and `b0 = phi(0) . x'(0)`.
pub fn tpv_mhat(state: &TpvControllerState, gamma_star: f64, phi: &Vector3<f64>, x_dot: &Vector3<f64>) -> f64 {
    state.m_hat0 - gamma_star * (phi.dot(x_dot) - state.boundary0) + gamma_star * state.accumulator
}

/// Integrand of the thrust-vehicle adaptation accumulator.
pub fn tpv_mhat_accumulator_dot(
    phi: &Vector3<f64>,
    z_ddot: &Vector3<f64>,
    z_dddot: &Vector3<f64>,
    x_dot: &Vector3<f64>,
    z_dot: &Vector3<f64>,
    alpha_star: f64,
) -> f64 {
    let phi_dot = z_dddot + alpha_star * z_ddot;
    phi.dot(z_dot) + phi_dot.dot(x_dot)
}

/// Output of the task-space adaptive controller.
#[derive(Debug, Clone)]
pub struct TaskspaceControl {
    pub tau: Vector2<f64>,
    pub vartheta_dot: DVector<f64>,
    pub theta_dot: Vector2<f64>,
}

/// Task-space adaptive control without task-space velocity measurement:
/// `tau = -K s - kappa J_hat^T K* dx + Y(q, q', z, z') vartheta_hat`,
/// `vartheta_hat' = -Gamma Y^T s`, `theta_hat' = Lambda Z(q, q')^T K* dx`.
#[allow(clippy::too_many_arguments)]
pub fn taskspace_control(
    model: &TwoLinkArm,
    q: &DVector<f64>,
    q_dot: &DVector<f64>,
    z: &Vector2<f64>,
    z_dot: &Vector2<f64>,
    dx: &Vector2<f64>,
    vartheta_hat: &DVector<f64>,
    theta_hat: &DVector<f64>,
    k: &Matrix2<f64>,
    k_star: &Matrix2<f64>,
    kappa: f64,
    gamma: &DMatrix<f64>,
    lambda: &Matrix2<f64>,
) -> TaskspaceControl {
    let s = Vector2::new(q_dot[0] - z.x, q_dot[1] - z.y);
    let zv = DVector::from_column_slice(z.as_slice());
    let zdv = DVector::from_column_slice(z_dot.as_slice());
    let y = model.regressor(q, q_dot, &zv, &zdv);
    let j_hat = TwoLinkArm::jacobian_from_params(q, theta_hat);
    let y_vth = &y * vartheta_hat;
    let tau = -(k * s) - kappa * (j_hat.transpose() * k_star * dx)
        + Vector2::new(y_vth[0], y_vth[1]);
    let s_dv = DVector::from_column_slice(s.as_slice());
    let vartheta_dot = -(gamma * (y.transpose() * s_dv));
    let z_kin = TwoLinkArm::kinematic_regressor(q, q_dot);
    let theta_dot = lambda * (z_kin.transpose() * k_star * dx);
    TaskspaceControl {
        tau,
        vartheta_dot,
        theta_dot,
    }
}

/// Output of the velocity-free spacecraft attitude controller.
#[derive(Debug, Clone)]
pub struct SpacecraftControl {
    pub tau: Vector3<f64>,
    /// `y' = K dq - Lambda_f y`, computed at position level.
    pub y_dot: Vector4<f64>,
}

/// Angular-velocity-free attitude control
/// `tau = M z' - skew(h) z - D(dq)^T K y'` with the passive filter
/// `y' + Lambda_f y = K dq` driven by the Euler-parameter error `dq`
/// between the measured attitude and the internally simulated one.
pub fn spacecraft_control(
    inertia: &Matrix3<f64>,
    h_body: &Vector3<f64>,
    z: &Vector3<f64>,
    z_dot: &Vector3<f64>,
    dq: &EulerParam,
    y: &Vector4<f64>,
    k: &Matrix4<f64>,
    lambda_f: &Matrix4<f64>,
) -> SpacecraftControl {
    let dq4 = Vector4::new(dq.v.x, dq.v.y, dq.v.z, dq.o);
    let y_dot = k * dq4 - lambda_f * y;
    let tau = inertia * z_dot - skew(h_body) * z - d_matrix(dq).transpose() * (k * y_dot);
    SpacecraftControl { tau, y_dot }
}
