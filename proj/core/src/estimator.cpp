#include "robustcbf/estimator.hpp"

#include <cmath>

namespace rcbf {

EstimatorState init_estimator(const EstimatorConfig& cfg, const Vector& x0, double t0) {
    if (x0.size() != cfg.dim())
        throw DimensionError("init_estimator: state dimension does not match gain");
    EstimatorState state;
    state.xi = cfg.gain.matrix * x0;
    state.t_start = t0;
    return state;
}

Vector estimate(const EstimatorState& state, const Matrix& gain, const Vector& x) {
    return sub(gain * x, state.xi);
}

Vector estimator_derivative(const Matrix& gain, const Vector& drift, const Matrix& input_map,
                            const Vector& u, const Vector& current_estimate) {
    return gain * add(add(drift, input_map * u), current_estimate);
}

ErrorEnvelope make_error_envelope(const EstimatorConfig& cfg) {
    if (cfg.uncertainty_bound < 0.0 || cfg.rate_bound < 0.0)
        throw ConfigError("estimator: uncertainty bounds must be non-negative");
    const DecayEnvelope decay = decay_envelope(cfg.gain, cfg.lyapunov_weight);
    ErrorEnvelope env;
    env.overshoot = decay.overshoot;
    env.rate = decay.rate;
    env.p_norm = decay.p_norm;
    env.uncertainty_bound = cfg.uncertainty_bound;
    env.rate_bound = cfg.rate_bound;
    return env;
}

double error_bound(const ErrorEnvelope& env, double elapsed) {
    if (elapsed < 0.0) throw Error("error_bound: negative elapsed time");
    const double steady = 2.0 * env.overshoot * env.p_norm * env.rate_bound;
    const double transient = env.overshoot * (env.uncertainty_bound - 2.0 * env.rate_bound * env.p_norm);
    return transient * std::exp(-env.rate * elapsed) + steady;
}

double output_bound(const ErrorEnvelope& env, double gain_norm, double elapsed) {
    if (elapsed < 0.0) return 0.0;
    return 2.0 * env.overshoot * env.uncertainty_bound * gain_norm * env.p_norm *
           (1.0 - std::exp(-env.rate * elapsed));
}

IssGains iss_gains(const SpdCertificate& gain, double rate_bound) {
    IssGains out;
    out.decay = gain.min_eigenvalue / 4.0;
    out.gain = rate_bound * rate_bound / (2.0 * gain.min_eigenvalue);
    return out;
}

bool eiss_certificate(double e0_norm, double rate_bound, double p_norm) {
    return e0_norm > 2.0 * rate_bound * p_norm;
}

} // namespace rcbf
