#pragma once

#include "robustcbf/barrier.hpp"

namespace rcbf {

// ---------------------------------------------------------------------------
// Slipping unicycle (tracked-vehicle surrogate)
// ---------------------------------------------------------------------------

struct UnicycleParams {
    double safe_distance = 1.0;  // tau [m], wall offset in the barrier
    double heading_weight = 0.1; // xi_theta, heading contribution to h
    double k_v = 1.0;            // linear-velocity gain
    double k_omega = 1.2;        // angular-velocity gain
    double goal_x = 1.0;         // [m]
    double goal_y = 1.5;         // [m]
    double v_max = 0.5;          // [m/s]
    double omega_max = 0.5;      // [rad/s]
    double cbf_gain = 1.0;       // alpha in alpha(h) = alpha * h
};

/// One slip channel amp * ramp(t) * (bias + (1 - bias) sin(freq t)).
/// The smooth half-cosine ramp keeps the rate bound analytic.
struct SlipChannel {
    double amp = 0.0;
    double bias = 1.0;
    double freq = 0.0;

    double value(double t, double ramp_time) const;
    double rate(double t, double ramp_time) const;
};

/// Time-varying slip angle, yaw-rate offset, and longitudinal slip speed,
/// with analytic time derivatives for the bound accounting.
struct SlipProfile {
    double ramp_time = 0.0;
    SlipChannel slip_angle;   // beta [rad]
    SlipChannel yaw_rate;     // d_theta [rad/s]
    SlipChannel longitudinal; // d_xB [m/s]

    double beta(double t) const { return slip_angle.value(t, ramp_time); }
    double beta_dot(double t) const { return slip_angle.rate(t, ramp_time); }
    double d_theta(double t) const { return yaw_rate.value(t, ramp_time); }
    double d_theta_dot(double t) const { return yaw_rate.rate(t, ramp_time); }
    double d_xb(double t) const { return longitudinal.value(t, ramp_time); }
    double d_xb_dot(double t) const { return longitudinal.rate(t, ramp_time); }

    bool is_zero() const;
};

/// Nominal kinematics xdot = g(x) u with x = [x_I, y_I, theta], u = [v, omega].
Vector unicycle_nominal(const Vector& x, const Vector& u);

/// Slip-perturbed kinematics: nominal plus the compound uncertainty.
Vector unicycle_actual(const Vector& x, const Vector& u, const SlipProfile& slip, double t);

/// The compound uncertainty itself (gamma = theta + beta):
///   [ v (cos gamma - cos theta) - d_xB cos theta,
///     v (sin gamma - sin theta) - d_xB sin theta,
///     d_theta ].
Vector unicycle_slip_uncertainty(const Vector& x, const Vector& u, const SlipProfile& slip,
                                 double t);

/// Analytic d/dt of the compound uncertainty along a trajectory with held
/// input, given the actual heading rate theta_dot = omega + d_theta.
Vector unicycle_slip_uncertainty_rate(const Vector& x, const Vector& u, const SlipProfile& slip,
                                      double t);

NominalModel unicycle_model(const UnicycleParams& params);

/// Goal-seeking desired controller. At the goal (distance <= 1e-9) the limit
/// convention [0, -k_omega sin theta] applies.
Vector unicycle_goal_controller(const UnicycleParams& params, const Vector& x);

/// Wall-distance barrier h = y_I + xi_theta sin(theta) + tau.
BarrierSpec unicycle_edge_cbf(const UnicycleParams& params);

// ---------------------------------------------------------------------------
// Uncertain elastic actuator (flexible joint)
// ---------------------------------------------------------------------------

struct ActuatorParams {
    double load_mass = 0.5;      // M [kg]
    double gravity = 9.81;       // g_bar [m/s^2]
    double load_inertia = 0.5;   // I_L [kg m^2]
    double motor_inertia = 0.1;  // J_m [kg m^2]
    double stiffness = 0.25;     // k [N m / rad]
    double eccentricity = 0.04;  // L [m]
    double u_max = 0.2 * 9.81;   // [N m]
    double c_q = -2.0;           // barrier mixing coefficient
    double lambda_v = 10.0;      // CLF decay rate
    double x4_desired = 0.0;     // tracking target for x_4
};

/// Four-state dynamics; `actual` adds the unmodeled drift and input scaling
/// (constants +0.1, -0.2 and factors 1/3, 1/4).
Vector actuator_dynamics(const ActuatorParams& params, const Vector& x, double u, bool actual);

NominalModel actuator_model(const ActuatorParams& params);

/// Min-norm CLF controller for V = (x4 - x4_desired)^2; returns the motor torque.
double actuator_clf_controller(const ActuatorParams& params, const Vector& x);

/// Relative-degree-2 chain for h = x2 - c_q x3; the disturbance-row Jacobian
/// vanishes identically, so the robust program stays a QP.
HocbfChain actuator_hocbf_chain(const ActuatorParams& params, LinearClassK alpha1,
                                LinearClassK alpha2);

// ---------------------------------------------------------------------------
// Synthetic plant exercising the second-order-cone branch
// ---------------------------------------------------------------------------

struct SyntheticParams {
    double u_max = 2.0;
    double k_desired = 0.8;          // constant desired input pushing at the barrier
    double disturbance_amp = 0.2;    // peak of d(t)
    double disturbance_freq = 0.7;   // [rad/s]
    double disturbance_ramp = 2.0;   // [s]
    double alpha1 = 1.0;
    double alpha2 = 1.0;
};

struct SyntheticPlant {
    NominalModel model;
    HocbfChain chain;
    SyntheticParams params;

    double disturbance(double t) const;
    double disturbance_rate(double t) const;
};

/// Two-state plant f = [sin x2, 0], g = [0, 1]^T, h = 1 - x1, disturbed in the
/// first state. Its disturbance-row Jacobian times g is nonzero away from
/// x2 = 0, which forces the cone-constrained program.
SyntheticPlant synthetic_socp_plant(const SyntheticParams& params = {});

} // namespace rcbf
