#include "robustcbf/plants.hpp"

#include <cmath>

namespace rcbf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ramp(double t, double ramp_time) {
    if (ramp_time <= 0.0 || t >= ramp_time) return 1.0;
    if (t <= 0.0) return 0.0;
    return 0.5 * (1.0 - std::cos(kPi * t / ramp_time));
}

double ramp_rate(double t, double ramp_time) {
    if (ramp_time <= 0.0 || t >= ramp_time || t <= 0.0) return 0.0;
    return 0.5 * kPi / ramp_time * std::sin(kPi * t / ramp_time);
}

} // namespace

double SlipChannel::value(double t, double ramp_time) const {
    return amp * ramp(t, ramp_time) * (bias + (1.0 - bias) * std::sin(freq * t));
}

double SlipChannel::rate(double t, double ramp_time) const {
    return amp * (ramp_rate(t, ramp_time) * (bias + (1.0 - bias) * std::sin(freq * t)) +
                  ramp(t, ramp_time) * (1.0 - bias) * freq * std::cos(freq * t));
}

bool SlipProfile::is_zero() const {
    return slip_angle.amp == 0.0 && yaw_rate.amp == 0.0 && longitudinal.amp == 0.0;
}

Vector unicycle_nominal(const Vector& x, const Vector& u) {
    if (x.size() != 3 || u.size() != 2) throw DimensionError("unicycle: expected x in R^3, u in R^2");
    const double theta = x[2];
    return {u[0] * std::cos(theta), u[0] * std::sin(theta), u[1]};
}

Vector unicycle_slip_uncertainty(const Vector& x, const Vector& u, const SlipProfile& slip,
                                 double t) {
    const double theta = x[2];
    const double v = u[0];
    const double gamma = theta + slip.beta(t);
    const double dxb = slip.d_xb(t);
    return {v * (std::cos(gamma) - std::cos(theta)) - dxb * std::cos(theta),
            v * (std::sin(gamma) - std::sin(theta)) - dxb * std::sin(theta),
            slip.d_theta(t)};
}

Vector unicycle_slip_uncertainty_rate(const Vector& x, const Vector& u, const SlipProfile& slip,
                                      double t) {
    const double theta = x[2];
    const double v = u[0];
    const double theta_dot = u[1] + slip.d_theta(t);
    const double gamma = theta + slip.beta(t);
    const double gamma_dot = theta_dot + slip.beta_dot(t);
    const double dxb = slip.d_xb(t);
    const double dxb_dot = slip.d_xb_dot(t);
    return {v * (-std::sin(gamma) * gamma_dot + std::sin(theta) * theta_dot) -
                dxb_dot * std::cos(theta) + dxb * std::sin(theta) * theta_dot,
            v * (std::cos(gamma) * gamma_dot - std::cos(theta) * theta_dot) -
                dxb_dot * std::sin(theta) - dxb * std::cos(theta) * theta_dot,
            slip.d_theta_dot(t)};
}

Vector unicycle_actual(const Vector& x, const Vector& u, const SlipProfile& slip, double t) {
    return add(unicycle_nominal(x, u), unicycle_slip_uncertainty(x, u, slip, t));
}

NominalModel unicycle_model(const UnicycleParams& params) {
    NominalModel model;
    model.state_dim = 3;
    model.input_dim = 2;
    model.drift = [](const Vector& x) {
        if (x.size() != 3) throw DimensionError("unicycle drift: expected x in R^3");
        return Vector{0.0, 0.0, 0.0};
    };
    model.input_map = [](const Vector& x) {
        const double theta = x[2];
        Matrix g(3, 2);
        g(0, 0) = std::cos(theta);
        g(1, 0) = std::sin(theta);
        g(2, 1) = 1.0;
        return g;
    };
    model.input_set = InputPolytope::box({-params.v_max, -params.omega_max},
                                         {params.v_max, params.omega_max});
    return model;
}

Vector unicycle_goal_controller(const UnicycleParams& params, const Vector& x) {
    const double ex = params.goal_x - x[0];
    const double ey = params.goal_y - x[1];
    const double dist = std::hypot(ex, ey);
    if (dist <= 1e-9) return {0.0, -params.k_omega * std::sin(x[2])};
    return {params.k_v * dist, params.k_omega * ey / dist - params.k_omega * std::sin(x[2])};
}

BarrierSpec unicycle_edge_cbf(const UnicycleParams& params) {
    const double tau = params.safe_distance;
    const double xi = params.heading_weight;
    BarrierSpec spec;
    spec.value = [tau, xi](const Vector& x) { return x[1] + xi * std::sin(x[2]) + tau; };
    spec.gradient = [xi](const Vector& x) { return Vector{0.0, 1.0, xi * std::cos(x[2])}; };
    spec.alpha = LinearClassK{params.cbf_gain};
    return spec;
}

// ---------------------------------------------------------------------------

Vector actuator_dynamics(const ActuatorParams& p, const Vector& x, double u, bool actual) {
    if (x.size() != 4) throw DimensionError("actuator: expected x in R^4");
    const double torque_arm = p.load_mass * p.gravity * p.eccentricity; // M g_bar L
    const double spring = p.stiffness * (x[0] - x[2]);
    Vector dx(4, 0.0);
    dx[0] = x[1];
    dx[1] = (torque_arm * std::sin(x[0]) - spring) / p.load_inertia;
    dx[2] = x[3];
    dx[3] = spring / p.motor_inertia + u / p.motor_inertia;
    if (actual) {
        dx[1] += -(torque_arm * std::sin(x[0]) - spring) / (3.0 * p.load_inertia) + 0.1;
        dx[3] += spring / (4.0 * p.motor_inertia) - 0.2 + u / (4.0 * p.motor_inertia);
    }
    return dx;
}

NominalModel actuator_model(const ActuatorParams& p) {
    NominalModel model;
    model.state_dim = 4;
    model.input_dim = 1;
    model.drift = [p](const Vector& x) { return actuator_dynamics(p, x, 0.0, false); };
    model.input_map = [p](const Vector& x) {
        if (x.size() != 4) throw DimensionError("actuator input map: expected x in R^4");
        Matrix g(4, 1);
        g(3, 0) = 1.0 / p.motor_inertia;
        return g;
    };
    model.input_set = InputPolytope::box({-p.u_max}, {p.u_max});
    return model;
}

double actuator_clf_controller(const ActuatorParams& p, const Vector& x) {
    const double dev = x[3] - p.x4_desired;
    const double v = dev * dev;
    const double lf_v = 2.0 * dev * p.stiffness * (x[0] - x[2]) / p.motor_inertia;
    const double varsigma = lf_v + p.lambda_v * v;
    if (varsigma <= 0.0) return 0.0;
    const double lg_v = 2.0 * dev / p.motor_inertia;
    return -varsigma / lg_v;
}

HocbfChain actuator_hocbf_chain(const ActuatorParams& p, LinearClassK alpha1,
                                LinearClassK alpha2) {
    const double cq = p.c_q;
    const double torque_arm = p.load_mass * p.gravity * p.eccentricity;
    const double il = p.load_inertia;
    const double k = p.stiffness;
    const double a1 = alpha1.gain;

    HocbfChain chain;
    chain.relative_degree = 2;
    chain.alpha_low = alpha1;
    chain.alpha_high = alpha2;
    chain.base.value = [cq](const Vector& x) { return x[1] - cq * x[2]; };
    chain.base.gradient = [cq](const Vector&) { return Vector{0.0, 1.0, -cq, 0.0}; };
    chain.base.alpha = alpha1;
    chain.psi = [=](const Vector& x) {
        return (torque_arm * std::sin(x[0]) - k * (x[0] - x[2])) / il - cq * x[3] +
               a1 * (x[1] - cq * x[2]);
    };
    chain.grad_psi = [=](const Vector& x) {
        return Vector{(torque_arm * std::cos(x[0]) - k) / il, a1, k / il - a1 * cq, -cq};
    };
    chain.disturbance_row = [cq](const Vector&) { return Vector{0.0, 1.0, -cq, 0.0}; };
    chain.disturbance_row_jacobian = [](const Vector&) { return Matrix(4, 4); };
    chain.jacobian_input_product_zero = true;
    return chain;
}

// ---------------------------------------------------------------------------

double SyntheticPlant::disturbance(double t) const {
    return params.disturbance_amp * ramp(t, params.disturbance_ramp) *
           std::sin(params.disturbance_freq * t);
}

double SyntheticPlant::disturbance_rate(double t) const {
    return params.disturbance_amp *
           (ramp_rate(t, params.disturbance_ramp) * std::sin(params.disturbance_freq * t) +
            ramp(t, params.disturbance_ramp) * params.disturbance_freq *
                std::cos(params.disturbance_freq * t));
}

SyntheticPlant synthetic_socp_plant(const SyntheticParams& params) {
    SyntheticPlant plant;
    plant.params = params;

    plant.model.state_dim = 2;
    plant.model.input_dim = 1;
    plant.model.drift = [](const Vector& x) {
        if (x.size() != 2) throw DimensionError("synthetic drift: expected x in R^2");
        return Vector{std::sin(x[1]), 0.0};
    };
    plant.model.input_map = [](const Vector& x) {
        if (x.size() != 2) throw DimensionError("synthetic input map: expected x in R^2");
        Matrix g(2, 1);
        g(1, 0) = 1.0;
        return g;
    };
    plant.model.input_set = InputPolytope::box({-params.u_max}, {params.u_max});

    const double a1 = params.alpha1;
    plant.chain.relative_degree = 2;
    plant.chain.alpha_low = LinearClassK{params.alpha1};
    plant.chain.alpha_high = LinearClassK{params.alpha2};
    plant.chain.base.value = [](const Vector& x) { return 1.0 - x[0]; };
    plant.chain.base.gradient = [](const Vector&) { return Vector{-1.0, 0.0}; };
    plant.chain.base.alpha = LinearClassK{params.alpha1};
    plant.chain.psi = [a1](const Vector& x) { return -std::sin(x[1]) + a1 * (1.0 - x[0]); };
    plant.chain.grad_psi = [a1](const Vector& x) { return Vector{-a1, -std::cos(x[1])}; };
    plant.chain.disturbance_row = [](const Vector& x) { return Vector{0.0, -std::cos(x[1])}; };
    plant.chain.disturbance_row_jacobian = [](const Vector& x) {
        Matrix j(2, 2);
        j(1, 1) = std::sin(x[1]);
        return j;
    };
    plant.chain.jacobian_input_product_zero = false;
    return plant;
}

} // namespace rcbf
