#pragma once

#include <functional>

#include "robustcbf/uncertainty.hpp"

namespace rcbf {

/// Linear extended class-K function alpha(h) = gain * h, gain > 0.
/// Both bundled plants use this simple choice.
struct LinearClassK {
    double gain = 1.0;
};

/// A relative-degree-one barrier: scalar function, analytic gradient,
/// and the class-K gain used in its constraint.
struct BarrierSpec {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    LinearClassK alpha;
};

/// Affine constraint on the filter decision variable: coeff . u + offset >= 0.
struct AffineConstraintRow {
    Vector coeff;
    double offset = 0.0;

    double eval(const Vector& u) const { return dot(coeff, u) + offset; }
};

/// Second-order cone term scale * || arg_matrix u + arg_offset ||, the
/// left-hand side of the error-dependent constraint. scale carries the
/// error bound evaluated at build time.
struct ConeTerm {
    double scale = 0.0;
    Matrix arg_matrix;
    Vector arg_offset;

    double eval(const Vector& u) const { return scale * norm2(add(arg_matrix * u, arg_offset)); }
    /// True when the term cannot depend on u and is identically zero.
    bool degenerate(double tol = 1e-14) const;
};

/// Relative-degree-2 barrier chain. `psi` is the drift-only part of phi_1,
/// `disturbance_row` the row vector multiplying the uncertainty in phi_1,
/// and `disturbance_row_jacobian` its Jacobian (the matrix contracted with
/// the uncertainty in the second derivative). All maps are analytic,
/// verified against finite differences in the tests.
struct HocbfChain {
    BarrierSpec base;
    int relative_degree = 2;
    LinearClassK alpha_low;  // alpha_1
    LinearClassK alpha_high; // alpha_r
    std::function<double(const Vector&)> psi;
    std::function<Vector(const Vector&)> grad_psi;
    std::function<Vector(const Vector&)> disturbance_row;
    std::function<Matrix(const Vector&)> disturbance_row_jacobian;
    bool jacobian_input_product_zero = false; // whether J(x) g(x) == 0 everywhere
};

/// Nominal condition L_f h + L_g h u >= -alpha h as a row on u.
AffineConstraintRow cbf_constraint_nominal(const BarrierSpec& spec, const NominalModel& model,
                                           const Vector& x);

/// Estimate-and-error-bound robust condition:
///   L_f h + L_g h (u - g_dag d_hat) + grad_h . d_hat - ||grad_h|| e_bar >= -alpha h.
AffineConstraintRow ue_cbf_constraint(const BarrierSpec& spec, const NominalModel& model,
                                      const Vector& x, const Vector& delta_hat,
                                      double error_bound_now);

/// ISS-composed robust condition with gate E = 2 sigma_v mu_e - sigma_v alpha_h / 2 > 0:
///   ... >= -alpha_h h + ||grad_h||^2 / (4 E) + sigma_v gamma_val.
/// Throws GateViolation when the gate fails; this is a configuration error.
AffineConstraintRow ue_iss_cbf_constraint(const BarrierSpec& spec, const NominalModel& model,
                                          const Vector& x, const Vector& delta_hat,
                                          double sigma_v, double alpha_h, double mu_e,
                                          double gamma_val);

struct HocbfEval {
    double phi0 = 0.0;
    double psi = 0.0;
};

HocbfEval hocbf_chain_eval(const HocbfChain& chain, const NominalModel& model, const Vector& x);

/// Nominal second-order condition L_f psi + L_g psi u >= -alpha_r psi.
AffineConstraintRow hocbf_constraint_nominal(const HocbfChain& chain, const NominalModel& model,
                                             const Vector& x);

/// Scalar penalty Omega = ||grad_psi|| e_bar + ||J|| ||d_hat|| e_bar + ||J|| e_bar^2.
double omega(const HocbfChain& chain, const Vector& x, const Vector& delta_hat,
             double error_bound_now);

/// Affine part and cone term of the robust second-order condition:
///   cone.eval(u) <= row.eval(u).
struct UeHocbfTerms {
    AffineConstraintRow row;
    ConeTerm cone;
};

UeHocbfTerms ue_hocbf_terms(const HocbfChain& chain, const NominalModel& model, const Vector& x,
                            const Vector& delta_hat, double error_bound_now, double rate_bound,
                            LinearClassK alpha_high);

} // namespace rcbf
