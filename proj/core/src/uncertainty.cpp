#include "robustcbf/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace rcbf {

InputPolytope InputPolytope::box(const Vector& lower, const Vector& upper) {
    if (lower.size() != upper.size())
        throw DimensionError("InputPolytope::box: bound lengths differ");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] <= upper[i])) throw ConfigError("InputPolytope::box: empty box");
    const std::size_t m = lower.size();
    InputPolytope p;
    p.a = Matrix(2 * m, m);
    p.b = Vector(2 * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        p.a(i, i) = 1.0; // u_i <= upper_i
        p.b[i] = upper[i];
        p.a(m + i, i) = -1.0; // -u_i <= -lower_i
        p.b[m + i] = -lower[i];
    }
    p.box_lower = lower;
    p.box_upper = upper;
    return p;
}

bool InputPolytope::contains(const Vector& u, double tol) const {
    if (a.empty()) return true;
    const Vector au = a * u;
    for (std::size_t i = 0; i < au.size(); ++i)
        if (au[i] > b[i] + tol) return false;
    return true;
}

Vector InputPolytope::clamp(const Vector& u) const {
    if (!box_lower || !box_upper) return u;
    Vector out = u;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::min((*box_upper)[i], std::max((*box_lower)[i], out[i]));
    return out;
}

Matrix NominalModel::pseudo_inverse(const Vector& x) const {
    return left_pseudo_inverse(input_map(x));
}

Decomposition decompose(const NominalModel& model, const Vector& x, const Vector& delta) {
    if (delta.size() != model.state_dim)
        throw DimensionError("decompose: uncertainty dimension mismatch");
    const Matrix g = model.input_map(x);
    const Matrix pinv = left_pseudo_inverse(g);
    Decomposition d;
    d.input_direction = pinv * delta;
    d.matched = g * d.input_direction;
    d.unmatched = sub(delta, d.matched);
    return d;
}

Vector composite_control(const NominalModel& model, const Vector& x, const Vector& u_bar,
                         const Vector& delta_hat) {
    if (u_bar.size() != model.input_dim || delta_hat.size() != model.state_dim)
        throw DimensionError("composite_control: dimension mismatch");
    return sub(u_bar, model.pseudo_inverse(x) * delta_hat);
}

Vector residual_uncertainty(const std::function<Vector(const Vector&)>& actual_drift,
                            const std::function<Matrix(const Vector&)>& actual_input,
                            const NominalModel& nominal, const Vector& x, const Vector& u) {
    const Vector df = sub(actual_drift(x), nominal.drift(x));
    const Matrix dg = actual_input(x) - nominal.input_map(x);
    return add(df, dg * u);
}

} // namespace rcbf
