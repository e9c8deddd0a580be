#pragma once

#include <functional>
#include <optional>

#include "robustcbf/matrix.hpp"

namespace rcbf {

/// Admissible input set { u : a u <= b }. The box factory also records the
/// component bounds so simulators can clamp applied inputs.
struct InputPolytope {
    Matrix a;
    Vector b;
    std::optional<Vector> box_lower;
    std::optional<Vector> box_upper;

    static InputPolytope box(const Vector& lower, const Vector& upper);

    bool contains(const Vector& u, double tol = 1e-9) const;
    Vector clamp(const Vector& u) const; // identity unless box bounds are known
};

/// Designer's model: drift f_hat, input map g_hat (full column rank wherever
/// evaluated), dimensions, and the admissible input set.
struct NominalModel {
    std::size_t state_dim = 0;
    std::size_t input_dim = 0;
    std::function<Vector(const Vector&)> drift;
    std::function<Matrix(const Vector&)> input_map;
    InputPolytope input_set;

    /// Left pseudo-inverse of the input map at x. Recomputed per call;
    /// the input map is state dependent for the unicycle.
    Matrix pseudo_inverse(const Vector& x) const;
};

/// Split of a compound uncertainty relative to range(g_hat).
struct Decomposition {
    Vector matched;         // g g_dagger Delta
    Vector unmatched;       // (I - g g_dagger) Delta
    Vector input_direction; // theta = g_dagger Delta
};

Decomposition decompose(const NominalModel& model, const Vector& x, const Vector& delta);

/// Composite control law u = u_bar - g_dagger(x) * delta_hat. Input-set
/// membership is enforced by the filter programs, not here.
Vector composite_control(const NominalModel& model, const Vector& x, const Vector& u_bar,
                         const Vector& delta_hat);

/// Ground-truth residual (f - f_hat)(x) + (g - g_hat)(x) u used by the
/// simulator to score the estimator.
Vector residual_uncertainty(const std::function<Vector(const Vector&)>& actual_drift,
                            const std::function<Matrix(const Vector&)>& actual_input,
                            const NominalModel& nominal, const Vector& x, const Vector& u);

} // namespace rcbf
