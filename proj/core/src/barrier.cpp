#include "robustcbf/barrier.hpp"

#include <cmath>

namespace rcbf {

namespace {

// Row vector grad^T g as a length-m vector.
Vector lie_input(const Matrix& g, const Vector& grad) {
    return g.transpose() * grad;
}

} // namespace

bool ConeTerm::degenerate(double tol) const {
    return scale * arg_matrix.max_abs() <= tol;
}

AffineConstraintRow cbf_constraint_nominal(const BarrierSpec& spec, const NominalModel& model,
                                           const Vector& x) {
    const Vector grad = spec.gradient(x);
    AffineConstraintRow row;
    row.coeff = lie_input(model.input_map(x), grad);
    row.offset = dot(grad, model.drift(x)) + spec.alpha.gain * spec.value(x);
    return row;
}

AffineConstraintRow ue_cbf_constraint(const BarrierSpec& spec, const NominalModel& model,
                                      const Vector& x, const Vector& delta_hat,
                                      double error_bound_now) {
    if (error_bound_now < 0.0) throw Error("ue_cbf_constraint: negative error bound");
    const Vector grad = spec.gradient(x);
    const Vector shift = model.pseudo_inverse(x) * delta_hat;
    AffineConstraintRow row;
    row.coeff = lie_input(model.input_map(x), grad);
    row.offset = dot(grad, model.drift(x)) - dot(row.coeff, shift) + dot(grad, delta_hat) -
                 norm2(grad) * error_bound_now + spec.alpha.gain * spec.value(x);
    return row;
}

AffineConstraintRow ue_iss_cbf_constraint(const BarrierSpec& spec, const NominalModel& model,
                                          const Vector& x, const Vector& delta_hat,
                                          double sigma_v, double alpha_h, double mu_e,
                                          double gamma_val) {
    const double gate = 2.0 * sigma_v * mu_e - 0.5 * sigma_v * alpha_h;
    if (!(gate > 0.0))
        throw GateViolation("ue_iss_cbf_constraint: 2 sigma_v mu_e - sigma_v alpha_h / 2 <= 0 "
                            "(requires lambda_min(Lambda) > alpha_h)");
    const Vector grad = spec.gradient(x);
    const Vector shift = model.pseudo_inverse(x) * delta_hat;
    const double grad_sq = dot(grad, grad);
    AffineConstraintRow row;
    row.coeff = lie_input(model.input_map(x), grad);
    row.offset = dot(grad, model.drift(x)) - dot(row.coeff, shift) + dot(grad, delta_hat) +
                 alpha_h * spec.value(x) - grad_sq / (4.0 * gate) - sigma_v * gamma_val;
    return row;
}

HocbfEval hocbf_chain_eval(const HocbfChain& chain, const NominalModel&, const Vector& x) {
    HocbfEval out;
    out.phi0 = chain.base.value(x);
    out.psi = chain.psi(x);
    return out;
}

AffineConstraintRow hocbf_constraint_nominal(const HocbfChain& chain, const NominalModel& model,
                                             const Vector& x) {
    const Vector gp = chain.grad_psi(x);
    AffineConstraintRow row;
    row.coeff = lie_input(model.input_map(x), gp);
    row.offset = dot(gp, model.drift(x)) + chain.alpha_high.gain * chain.psi(x);
    return row;
}

double omega(const HocbfChain& chain, const Vector& x, const Vector& delta_hat,
             double error_bound_now) {
    if (error_bound_now < 0.0) throw Error("omega: negative error bound");
    const double jac_norm = spectral_norm(chain.disturbance_row_jacobian(x));
    return norm2(chain.grad_psi(x)) * error_bound_now +
           jac_norm * norm2(delta_hat) * error_bound_now +
           jac_norm * error_bound_now * error_bound_now;
}

UeHocbfTerms ue_hocbf_terms(const HocbfChain& chain, const NominalModel& model, const Vector& x,
                            const Vector& delta_hat, double error_bound_now, double rate_bound,
                            LinearClassK alpha_high) {
    if (error_bound_now < 0.0 || rate_bound < 0.0)
        throw Error("ue_hocbf_terms: negative bound");
    const Vector f = model.drift(x);
    const Matrix g = model.input_map(x);
    const Vector shift = model.pseudo_inverse(x) * delta_hat; // g_dagger d_hat
    const Vector gp = chain.grad_psi(x);
    const Vector drow = chain.disturbance_row(x);
    const Matrix jac = chain.disturbance_row_jacobian(x);

    const Vector lie_g_psi = lie_input(g, gp);
    // u-free part of the closed-loop drift under the composite law.
    const Vector drift_free = add(sub(f, g * shift), delta_hat);
    const Vector jac_dhat = jac * delta_hat;

    UeHocbfTerms out;
    out.row.coeff = add(lie_g_psi, g.transpose() * jac_dhat);
    const double drow_norm = norm2(drow);
    out.row.offset = dot(gp, f) - dot(lie_g_psi, shift) + dot(gp, delta_hat) +
                     dot(drift_free, jac_dhat) - drow_norm * rate_bound -
                     omega(chain, x, delta_hat, error_bound_now) +
                     alpha_high.gain * (chain.psi(x) + dot(drow, delta_hat) -
                                        drow_norm * error_bound_now);
    out.cone.scale = error_bound_now;
    out.cone.arg_matrix = jac.transpose() * g;
    out.cone.arg_offset = jac.transpose() * drift_free;
    return out;
}

} // namespace rcbf
