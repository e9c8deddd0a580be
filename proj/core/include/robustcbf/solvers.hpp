#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "robustcbf/barrier.hpp"

namespace rcbf {

/// All solver tolerances in one place.
struct SolverOptions {
    double feasibility_tol = 1e-7;  // accepted constraint violation at an Optimal point
    double kkt_tol = 1e-6;          // accepted stationarity/complementarity residual
    int pivot_factor = 10;          // active-set pivot cap = pivot_factor * (m + rows)
    double barrier_gap_tol = 1e-8;  // interior-point duality-gap target
    double barrier_mu_factor = 0.2; // gap reduction per outer iteration
    int barrier_max_iters = 200;    // total Newton iterations
    double slack_weight = 1e6;      // quadratic weight of the opt-in relaxation slack
};

enum class SolveStatus { Optimal, Infeasible, MaxIterations };

const char* to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::MaxIterations;
    Vector u;                   // solution, or least-infeasible point when Infeasible
    double objective = 0.0;     // || u - center ||^2
    double kkt_residual = 0.0;
    std::optional<std::size_t> violated_row; // certificate: strictly violated row index
    double max_violation = 0.0;              // at the returned point
    double slack = 0.0;                      // relaxation used (relaxed solves only)
};

/// Projection of `center` onto the polyhedron { u : row.eval(u) >= 0 }.
struct QpSpec {
    Vector center;
    std::vector<AffineConstraintRow> rows;
};

/// One second-order cone row cone.eval(u) <= cone_bound.eval(u) on top of a QpSpec.
struct SocpSpec {
    QpSpec qp;
    ConeTerm cone;
    AffineConstraintRow cone_bound;
};

/// Primal active-set solver, lexicographic (Bland) tie-breaking. Infeasible
/// problems are reported with a certificate row at the least-infeasible point.
SolveResult solve_filter_qp(const QpSpec& spec, const SolverOptions& opts = {});

/// Same program with the first `relaxable_rows` rows softened by a shared
/// slack s >= 0 weighted by opts.slack_weight. Used by the simulator's
/// opt-in degradation mode; the slack value is reported in the result.
SolveResult solve_filter_qp_relaxed(const QpSpec& spec, std::size_t relaxable_rows,
                                    const SolverOptions& opts = {});

/// Log-barrier interior-point solve of the epigraph form
///   min rho  s.t.  ||[2(u - center); rho - 1]|| <= rho + 1,
///                  cone.eval(u) <= cone_bound.eval(u),  affine rows >= 0.
/// Degenerate cones reduce exactly to solve_filter_qp on the affine part.
SolveResult solve_filter_socp(const SocpSpec& spec, const SolverOptions& opts = {});

} // namespace rcbf
