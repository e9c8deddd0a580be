#pragma once

#include "robustcbf/matrix.hpp"

namespace rcbf {

/// Design data of the uncertainty estimator: the positive definite gain
/// matrix, the bounds assumed on the uncertainty and its rate, and the
/// Lyapunov weight used to certify the decay envelope.
struct EstimatorConfig {
    SpdCertificate gain;            // Lambda, units 1/s
    double uncertainty_bound = 0.0; // delta_b, bound on ||Delta||
    double rate_bound = 0.0;        // delta_L, bound on ||d Delta / dt||
    SpdCertificate lyapunov_weight; // H

    std::size_t dim() const { return gain.dim(); }
};

/// Auxiliary observer state. The estimate at state x is gain * x - xi.
struct EstimatorState {
    Vector xi;
    double t_start = 0.0;
};

/// Constants of the closed-form error and output bounds.
struct ErrorEnvelope {
    double overshoot = 1.0;         // D
    double rate = 0.0;              // tau_e, 1/s
    double p_norm = 0.0;            // ||P||
    double uncertainty_bound = 0.0; // delta_b
    double rate_bound = 0.0;        // delta_L
};

/// Initializes xi = Lambda * x0 so the estimate at t0 is exactly zero.
EstimatorState init_estimator(const EstimatorConfig& cfg, const Vector& x0, double t0);

/// Current uncertainty estimate: gain * x - xi.
Vector estimate(const EstimatorState& state, const Matrix& gain, const Vector& x);

/// Observer dynamics: xi_dot = Lambda (f_hat + g_hat u + estimate).
Vector estimator_derivative(const Matrix& gain, const Vector& drift, const Matrix& input_map,
                            const Vector& u, const Vector& current_estimate);

/// Builds the envelope constants from the Lyapunov solution for (gain, weight).
ErrorEnvelope make_error_envelope(const EstimatorConfig& cfg);

/// Error bound e_bar(t) = D (delta_b - 2 delta_L ||P||) exp(-tau_e t) + 2 D ||P|| delta_L.
/// Valid as written even when the transient coefficient is negative.
double error_bound(const ErrorEnvelope& env, double elapsed);

/// Output bound 2 D delta_b ||Lambda|| ||P|| (1 - exp(-tau_e t)).
double output_bound(const ErrorEnvelope& env, double gain_norm, double elapsed);

/// ISS constants of the error dynamics.
struct IssGains {
    double decay = 0.0; // mu_e = lambda_min(Lambda) / 4
    double gain = 0.0;  // gamma(delta_L) = delta_L^2 / (2 lambda_min(Lambda))
};

IssGains iss_gains(const SpdCertificate& gain, double rate_bound);

/// True when the error dynamics is exponentially ISS: ||e0|| > 2 delta_L ||P||.
bool eiss_certificate(double e0_norm, double rate_bound, double p_norm);

} // namespace rcbf
