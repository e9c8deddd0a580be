#include "robustcbf/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcbf {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

namespace {

struct Rows {
    std::vector<Vector> a;
    Vector b;

    std::size_t count() const { return a.size(); }
    double value(std::size_t i, const Vector& u) const { return dot(a[i], u) + b[i]; }
};

Rows collect_rows(const std::vector<AffineConstraintRow>& rows, std::size_t m) {
    Rows out;
    out.a.reserve(rows.size());
    out.b.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.coeff.size() != m) throw DimensionError("solver: row width does not match center");
        out.a.push_back(r.coeff);
        out.b.push_back(r.offset);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Primal active-set projection: min 1/2 ||u - c||^2  s.t.  a_i u + b_i >= 0.
// The start point must satisfy every row up to a small tolerance; small
// violations are repaired by zero-length blocking steps.
// ---------------------------------------------------------------------------

struct ActiveSetOutcome {
    bool optimal = false;
    Vector u;
    std::vector<double> multipliers; // per row, 0 when inactive
};

Vector solve_eqp(const Rows& rows, const std::vector<std::size_t>& w, const Vector& c,
                 Vector* nu_out) {
    if (w.empty()) {
        if (nu_out) nu_out->clear();
        return c;
    }
    const std::size_t k = w.size();
    Matrix gram(k, k);
    Vector rhs(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(rows.a[w[i]], rows.a[w[j]]);
        rhs[i] = dot(rows.a[w[i]], c) + rows.b[w[i]];
    }
    const Vector nu = solve_linear(gram, rhs);
    if (nu_out) *nu_out = nu;
    Vector u = c;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < u.size(); ++j) u[j] -= nu[i] * rows.a[w[i]][j];
    return u;
}

bool row_dependent(const Rows& rows, const std::vector<std::size_t>& w, std::size_t cand) {
    if (w.empty()) return norm2(rows.a[cand]) <= 1e-14;
    const std::size_t k = w.size();
    Matrix gram(k, k);
    Vector rhs(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(rows.a[w[i]], rows.a[w[j]]);
        rhs[i] = dot(rows.a[w[i]], rows.a[cand]);
    }
    Vector y;
    try {
        y = solve_linear(gram, rhs);
    } catch (const NumericError&) {
        return true;
    }
    Vector res = rows.a[cand];
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < res.size(); ++j) res[j] -= y[i] * rows.a[w[i]][j];
    return norm2(res) <= 1e-10 * std::max(1.0, norm2(rows.a[cand]));
}

ActiveSetOutcome active_set_project(const Rows& rows, const Vector& c, Vector u,
                                    int max_pivots) {
    const double mult_tol = 1e-10 * (1.0 + norm2(c));
    const double step_tol = 1e-12 * (1.0 + norm2(c));
    std::vector<std::size_t> w;
    for (std::size_t i = 0; i < rows.count(); ++i)
        if (std::abs(rows.value(i, u)) <= 1e-9 && !row_dependent(rows, w, i)) w.push_back(i);

    ActiveSetOutcome out;
    for (int pivot = 0; pivot < max_pivots; ++pivot) {
        Vector nu;
        const Vector target = solve_eqp(rows, w, c, &nu);
        Vector d = sub(target, u);
        if (norm2(d) <= step_tol) {
            // At the working-set minimizer. Multipliers are lambda = -nu.
            std::size_t drop = rows.count();
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (-nu[i] < -mult_tol && w[i] < drop) drop = w[i];
            }
            if (drop == rows.count()) {
                out.optimal = true;
                out.u = u;
                out.multipliers.assign(rows.count(), 0.0);
                for (std::size_t i = 0; i < w.size(); ++i)
                    out.multipliers[w[i]] = -nu[i];
                return out;
            }
            w.erase(std::find(w.begin(), w.end(), drop));
            continue;
        }
        // Longest feasible step toward the target; ties on the lowest row index.
        double alpha = 1.0;
        std::size_t blocking = rows.count();
        for (std::size_t i = 0; i < rows.count(); ++i) {
            if (std::find(w.begin(), w.end(), i) != w.end()) continue;
            const double slope = dot(rows.a[i], d);
            if (slope >= -1e-13 * std::max(1.0, norm2(rows.a[i]) * norm2(d))) continue;
            const double dist = std::max(0.0, rows.value(i, u));
            const double step = dist / (-slope);
            if (step < alpha - 1e-15) {
                alpha = step;
                blocking = i;
            } else if (std::abs(step - alpha) <= 1e-15 && i < blocking) {
                blocking = i;
            }
        }
        for (std::size_t j = 0; j < u.size(); ++j) u[j] += alpha * d[j];
        if (blocking < rows.count() && alpha < 1.0) {
            if (!row_dependent(rows, w, blocking)) {
                w.push_back(blocking);
                std::sort(w.begin(), w.end());
            }
        }
    }
    out.optimal = false;
    out.u = u;
    return out;
}

double qp_kkt_residual(const Rows& rows, const Vector& c, const Vector& u,
                       const std::vector<double>& multipliers) {
    Vector stat = sub(u, c);
    for (std::size_t i = 0; i < rows.count(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) stat[j] -= multipliers[i] * rows.a[i][j];
    double res = norm2(stat);
    for (std::size_t i = 0; i < rows.count(); ++i) {
        res = std::max(res, std::abs(multipliers[i] * rows.value(i, u)));
        res = std::max(res, std::max(0.0, -rows.value(i, u)));
        res = std::max(res, std::max(0.0, -multipliers[i]));
    }
    return res;
}

struct Violation {
    double worst = 0.0;
    std::size_t row = 0;
};

Violation worst_violation(const Rows& rows, const Vector& u) {
    Violation v;
    for (std::size_t i = 0; i < rows.count(); ++i) {
        const double viol = -rows.value(i, u);
        if (viol > v.worst) {
            v.worst = viol;
            v.row = i;
        }
    }
    return v;
}

// Weighted phase: min 1/2 ||u - c||^2 + 1/2 weight s^2
//   s.t. a_i u + s + b_i >= 0 (i < relax_count), remaining rows hard, s >= 0.
// Solved by variable scaling onto the identity-Hessian core.
struct RelaxedOutcome {
    Vector u;
    double slack = 0.0;
    bool optimal = false;
    std::vector<double> multipliers;
};

RelaxedOutcome solve_relaxed(const Rows& rows, std::size_t relax_count, const Vector& c,
                             double weight, int max_pivots) {
    const std::size_t m = c.size();
    const double root = std::sqrt(weight);
    Rows ext;
    ext.a.reserve(rows.count() + 1);
    ext.b = rows.b;
    for (std::size_t i = 0; i < rows.count(); ++i) {
        Vector row = rows.a[i];
        row.push_back(i < relax_count ? 1.0 / root : 0.0);
        ext.a.push_back(std::move(row));
    }
    Vector s_row(m + 1, 0.0);
    s_row[m] = 1.0 / root;
    ext.a.push_back(std::move(s_row));
    ext.b.push_back(0.0);

    Vector center(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) center[j] = c[j];

    Vector start = center;
    double needed = 0.0;
    for (std::size_t i = 0; i < relax_count; ++i)
        needed = std::max(needed, -rows.value(i, c));
    start[m] = (needed + 1.0) * root;

    const ActiveSetOutcome res = active_set_project(ext, center, start, max_pivots);
    RelaxedOutcome out;
    out.optimal = res.optimal;
    out.u.assign(res.u.begin(), res.u.begin() + static_cast<long>(m));
    out.slack = res.u[m] / root;
    if (res.optimal) {
        out.multipliers.assign(rows.count(), 0.0);
        for (std::size_t i = 0; i < rows.count(); ++i) out.multipliers[i] = res.multipliers[i];
    }
    return out;
}

} // namespace

SolveResult solve_filter_qp(const QpSpec& spec, const SolverOptions& opts) {
    const std::size_t m = spec.center.size();
    if (m == 0) throw DimensionError("solve_filter_qp: empty decision vector");
    const Rows rows = collect_rows(spec.rows, m);
    const int max_pivots = opts.pivot_factor * static_cast<int>(m + rows.count());

    SolveResult result;
    Vector start = spec.center;
    const Violation at_center = worst_violation(rows, spec.center);
    if (at_center.worst > 0.0) {
        // Phase 1: shared-slack relaxation to find a feasible start or a
        // least-infeasible certificate point.
        const RelaxedOutcome ph1 =
            solve_relaxed(rows, rows.count(), spec.center, 1e8, 4 * max_pivots + 40);
        const Violation v = worst_violation(rows, ph1.u);
        double row_scale = 1.0;
        for (double bi : rows.b) row_scale = std::max(row_scale, std::abs(bi));
        if (!ph1.optimal || ph1.slack > 1e-6 * row_scale) {
            result.status = SolveStatus::Infeasible;
            result.u = ph1.u;
            result.objective = dot(sub(ph1.u, spec.center), sub(ph1.u, spec.center));
            result.max_violation = v.worst;
            if (v.worst > 0.0) result.violated_row = v.row;
            return result;
        }
        start = ph1.u;
    }

    const ActiveSetOutcome out = active_set_project(rows, spec.center, start, max_pivots);
    const Violation v = worst_violation(rows, out.u);
    result.u = out.u;
    result.objective = dot(sub(out.u, spec.center), sub(out.u, spec.center));
    result.max_violation = v.worst;
    if (!out.optimal || v.worst > opts.feasibility_tol) {
        result.status = SolveStatus::MaxIterations;
        return result;
    }
    result.status = SolveStatus::Optimal;
    result.kkt_residual = qp_kkt_residual(rows, spec.center, out.u, out.multipliers);
    return result;
}

SolveResult solve_filter_qp_relaxed(const QpSpec& spec, std::size_t relaxable_rows,
                                    const SolverOptions& opts) {
    const std::size_t m = spec.center.size();
    if (m == 0) throw DimensionError("solve_filter_qp_relaxed: empty decision vector");
    relaxable_rows = std::min(relaxable_rows, spec.rows.size());
    const Rows rows = collect_rows(spec.rows, m);
    const int max_pivots =
        opts.pivot_factor * static_cast<int>(m + 1 + rows.count()) + 40;
    const RelaxedOutcome out =
        solve_relaxed(rows, relaxable_rows, spec.center, opts.slack_weight, max_pivots);

    SolveResult result;
    result.u = out.u;
    result.slack = out.slack;
    result.objective = dot(sub(out.u, spec.center), sub(out.u, spec.center));
    const Violation v = worst_violation(rows, out.u);
    result.max_violation = v.worst;
    result.status = out.optimal ? SolveStatus::Optimal : SolveStatus::MaxIterations;
    if (out.optimal) result.kkt_residual = 0.0;
    return result;
}

// ---------------------------------------------------------------------------
// SOCP: log-barrier path following on the epigraph form, then a KKT polish.
// ---------------------------------------------------------------------------

namespace {

struct BarrierProblem {
    // Decision z = (u, rho). Objective t * rho.
    Vector center; // k_d
    Rows rows;
    Vector cone_a; // a~, the cone bound row
    double cone_b = 0.0;
    double scale = 0.0;
    Matrix cone_m;
    Vector cone_v;

    std::size_t m() const { return center.size(); }
};

struct BarrierEval {
    bool in_domain = false;
    double value = 0.0;
    Vector grad;
    Matrix hess;
};

BarrierEval eval_barrier(const BarrierProblem& p, const Vector& z, double t, bool with_derivs) {
    const std::size_t m = p.m();
    const std::size_t dim = m + 1;
    BarrierEval out;
    out.grad = Vector(dim, 0.0);
    out.hess = Matrix(dim, dim);
    Vector u(z.begin(), z.begin() + static_cast<long>(m));
    const double rho = z[m];

    double f = t * rho;
    if (with_derivs) out.grad[m] += t;

    for (std::size_t i = 0; i < p.rows.count(); ++i) {
        const double d = p.rows.value(i, u);
        if (!(d > 0.0)) return out;
        f -= std::log(d);
        if (!with_derivs) continue;
        for (std::size_t j = 0; j < m; ++j) out.grad[j] -= p.rows.a[i][j] / d;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                out.hess(j, k) += p.rows.a[i][j] * p.rows.a[i][k] / (d * d);
    }

    // Robust cone: (a~ u + b~)^2 - scale^2 ||M u + v||^2 > 0 with a~ u + b~ > 0.
    const double pval = dot(p.cone_a, u) + p.cone_b;
    const Vector w = add(p.cone_m * u, p.cone_v);
    const double wsq = dot(w, w);
    const double d1 = pval * pval - p.scale * p.scale * wsq;
    if (!(pval > 0.0) || !(d1 > 0.0)) return out;
    f -= std::log(d1);
    if (with_derivs) {
        const Vector mtw = p.cone_m.transpose() * w;
        Vector gd1(m, 0.0);
        for (std::size_t j = 0; j < m; ++j)
            gd1[j] = 2.0 * pval * p.cone_a[j] - 2.0 * p.scale * p.scale * mtw[j];
        for (std::size_t j = 0; j < m; ++j) out.grad[j] -= gd1[j] / d1;
        const Matrix mtm = p.cone_m.transpose() * p.cone_m;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                const double hd1 =
                    2.0 * p.cone_a[j] * p.cone_a[k] - 2.0 * p.scale * p.scale * mtm(j, k);
                out.hess(j, k) += gd1[j] * gd1[k] / (d1 * d1) - hd1 / d1;
            }
    }

    // Epigraph cone of the objective, standard form of the rotated constraint:
    // (rho + 1)^2 - ||[2(u - k_d); rho - 1]||^2 = 4 (rho - ||u - k_d||^2) > 0.
    const Vector dev = sub(u, p.center);
    const double d2 = (rho + 1.0) * (rho + 1.0) - 4.0 * dot(dev, dev) -
                      (rho - 1.0) * (rho - 1.0);
    if (!(d2 > 0.0)) return out;
    f -= std::log(d2);
    if (with_derivs) {
        Vector gd2(dim, 0.0);
        for (std::size_t j = 0; j < m; ++j) gd2[j] = -8.0 * dev[j];
        gd2[m] = 4.0;
        for (std::size_t j = 0; j < dim; ++j) out.grad[j] -= gd2[j] / d2;
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k) out.hess(j, k) += gd2[j] * gd2[k] / (d2 * d2);
        for (std::size_t j = 0; j < m; ++j) out.hess(j, j) += 8.0 / d2;
    }

    out.in_domain = true;
    out.value = f;
    return out;
}

// Damped Newton descent on the barrier objective for fixed t.
// Returns the number of Newton iterations spent.
int newton_center(const BarrierProblem& p, Vector& z, double t, int budget) {
    int used = 0;
    while (used < budget) {
        const BarrierEval e = eval_barrier(p, z, t, true);
        if (!e.in_domain) throw NumericError("socp barrier: iterate left the domain");
        Vector step;
        try {
            Matrix h = e.hess;
            for (std::size_t j = 0; j < h.rows(); ++j) h(j, j) += 1e-12;
            step = solve_linear(h, scaled(e.grad, -1.0));
        } catch (const NumericError&) {
            break;
        }
        const double decrement = -dot(e.grad, step);
        ++used;
        if (decrement * 0.5 <= 1e-16) break;
        double alpha = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
            Vector cand = z;
            for (std::size_t j = 0; j < cand.size(); ++j) cand[j] += alpha * step[j];
            const BarrierEval ce = eval_barrier(p, cand, t, false);
            if (ce.in_domain && ce.value <= e.value - 0.25 * alpha * decrement) {
                z = cand;
                break;
            }
            alpha *= 0.5;
            if (ls == 59) return used; // stalled line search
        }
    }
    return used;
}

struct PolishResult {
    bool ok = false;
    Vector u;
    double kkt = 0.0;
};

// Newton solve of the original-problem KKT equations restricted to the
// constraints active at the barrier point, dropping constraints whose
// multipliers come out negative. Refines the interior-point solution to
// machine precision when strict complementarity holds.
struct PolishAttempt {
    bool converged = false;
    bool lambda_ok = false;
    std::size_t worst_lambda_index = 0; // position in the active list
    Vector u;
    double kkt = 0.0;
};

PolishAttempt polish_attempt(const BarrierProblem& p, Vector u,
                             const std::vector<std::size_t>& act, bool cone_active) {
    const std::size_t m = p.m();
    const std::size_t k = act.size() + (cone_active ? 1 : 0);
    PolishAttempt out;
    Vector lambda(k, 0.0);
    for (int iter = 0; iter < 30; ++iter) {
        const Vector w = add(p.cone_m * u, p.cone_v);
        const double wn = norm2(w);
        if (cone_active && wn < 1e-12) return out; // nondifferentiable cone tip
        Vector cone_grad(m, 0.0);
        if (cone_active) {
            const Vector mtw = p.cone_m.transpose() * w;
            for (std::size_t j = 0; j < m; ++j)
                cone_grad[j] = p.cone_a[j] - p.scale * mtw[j] / wn;
        }
        // F = [ 2(u - c) - sum lambda_i a_i - lambda_c cone_grad ; active residuals ]
        Vector fval(m + k, 0.0);
        for (std::size_t j = 0; j < m; ++j) fval[j] = 2.0 * (u[j] - p.center[j]);
        for (std::size_t i = 0; i < act.size(); ++i)
            for (std::size_t j = 0; j < m; ++j) fval[j] -= lambda[i] * p.rows.a[act[i]][j];
        if (cone_active)
            for (std::size_t j = 0; j < m; ++j) fval[j] -= lambda[k - 1] * cone_grad[j];
        for (std::size_t i = 0; i < act.size(); ++i)
            fval[m + i] = p.rows.value(act[i], u);
        if (cone_active)
            fval[m + k - 1] = dot(p.cone_a, u) + p.cone_b - p.scale * wn;

        double fnorm = 0.0;
        for (double v : fval) fnorm = std::max(fnorm, std::abs(v));
        if (fnorm <= 1e-11) {
            out.converged = true;
            out.u = u;
            out.kkt = fnorm;
            out.lambda_ok = true;
            double worst = -1e-8;
            for (std::size_t i = 0; i < k; ++i) {
                if (lambda[i] < worst) {
                    worst = lambda[i];
                    out.lambda_ok = false;
                    out.worst_lambda_index = i;
                }
            }
            return out;
        }

        Matrix jac(m + k, m + k);
        for (std::size_t j = 0; j < m; ++j) jac(j, j) = 2.0;
        if (cone_active) {
            // d/du of -lambda_c * cone_grad
            const double lc = lambda[k - 1];
            const Matrix mtm = p.cone_m.transpose() * p.cone_m;
            const Vector mtw = p.cone_m.transpose() * w;
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t l = 0; l < m; ++l)
                    jac(j, l) += lc * p.scale *
                                 (mtm(j, l) / wn - mtw[j] * mtw[l] / (wn * wn * wn));
        }
        for (std::size_t i = 0; i < act.size(); ++i)
            for (std::size_t j = 0; j < m; ++j) {
                jac(j, m + i) = -p.rows.a[act[i]][j];
                jac(m + i, j) = p.rows.a[act[i]][j];
            }
        if (cone_active)
            for (std::size_t j = 0; j < m; ++j) {
                jac(j, m + k - 1) = -cone_grad[j];
                jac(m + k - 1, j) = cone_grad[j];
            }

        Vector step;
        try {
            step = solve_linear(jac, scaled(fval, -1.0));
        } catch (const NumericError&) {
            return out;
        }
        for (std::size_t j = 0; j < m; ++j) u[j] += step[j];
        for (std::size_t i = 0; i < k; ++i) lambda[i] += step[m + i];
    }
    return out;
}

PolishResult polish_socp(const BarrierProblem& p, const Vector& u_in) {
    const std::size_t m = p.m();
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < p.rows.count(); ++i)
        if (p.rows.value(i, u_in) <= 1e-4 * (1.0 + std::abs(p.rows.b[i]))) act.push_back(i);
    const Vector w0 = add(p.cone_m * u_in, p.cone_v);
    const double margin = dot(p.cone_a, u_in) + p.cone_b - p.scale * norm2(w0);
    bool cone_active = margin <= 1e-4 * (1.0 + std::abs(p.cone_b)) && norm2(w0) > 1e-9;

    PolishResult out;
    for (int pass = 0; pass <= static_cast<int>(p.rows.count()) + 1; ++pass) {
        const std::size_t k = act.size() + (cone_active ? 1 : 0);
        if (k == 0) {
            out.ok = true;
            out.u = p.center; // unconstrained projection
            out.kkt = 0.0;
            return out;
        }
        if (k > m) return out;
        const PolishAttempt attempt = polish_attempt(p, u_in, act, cone_active);
        if (!attempt.converged) return out;
        if (attempt.lambda_ok) {
            out.ok = true;
            out.u = attempt.u;
            out.kkt = attempt.kkt;
            return out;
        }
        // Drop the constraint with the most negative multiplier and retry.
        if (cone_active && attempt.worst_lambda_index == k - 1)
            cone_active = false;
        else
            act.erase(act.begin() + static_cast<long>(attempt.worst_lambda_index));
    }
    return out;
}

} // namespace

SolveResult solve_filter_socp(const SocpSpec& spec, const SolverOptions& opts) {
    const std::size_t m = spec.qp.center.size();
    if (m == 0) throw DimensionError("solve_filter_socp: empty decision vector");
    if (spec.cone.scale < 0.0) throw Error("solve_filter_socp: negative cone scale");

    // A cone whose argument cannot depend on u contributes the constant
    // scale * ||v||; fold it into the bound row and solve the QP.
    if (spec.cone.degenerate()) {
        QpSpec reduced = spec.qp;
        AffineConstraintRow bound = spec.cone_bound;
        bound.offset -= spec.cone.scale * norm2(spec.cone.arg_offset);
        reduced.rows.push_back(bound);
        return solve_filter_qp(reduced, opts);
    }

    BarrierProblem prob;
    prob.center = spec.qp.center;
    prob.rows = collect_rows(spec.qp.rows, m);
    prob.cone_a = spec.cone_bound.coeff;
    prob.cone_b = spec.cone_bound.offset;
    prob.scale = spec.cone.scale;
    prob.cone_m = spec.cone.arg_matrix;
    prob.cone_v = spec.cone.arg_offset;

    auto margin_at = [&](const Vector& u) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < prob.rows.count(); ++i)
            worst = std::min(worst, prob.rows.value(i, u));
        const double cone_margin = dot(prob.cone_a, u) + prob.cone_b -
                                   prob.scale * norm2(add(prob.cone_m * u, prob.cone_v));
        return std::min(worst, cone_margin);
    };

    SolveResult result;
    int budget = opts.barrier_max_iters;

    // Phase 1: strictly feasible u for the affine rows plus the robust cone,
    // via the same barrier machinery on min s with every constraint relaxed by s.
    Vector u0 = spec.qp.center;
    if (margin_at(u0) <= 1e-7) {
        // Relaxed problem in (u, s): minimize s with every constraint slackened
        // by s. Rows become [a_i, 1], the cone bound becomes a~ u + b~ + s.
        Rows relaxed;
        for (std::size_t i = 0; i < prob.rows.count(); ++i) {
            Vector row = prob.rows.a[i];
            row.push_back(1.0);
            relaxed.a.push_back(std::move(row));
            relaxed.b.push_back(prob.rows.b[i]);
        }
        Vector cone_a_ext = prob.cone_a;
        cone_a_ext.push_back(1.0);
        Matrix cone_m_ext(prob.cone_m.rows(), m + 1);
        for (std::size_t r = 0; r < prob.cone_m.rows(); ++r)
            for (std::size_t c = 0; c < m; ++c) cone_m_ext(r, c) = prob.cone_m(r, c);

        BarrierProblem aux;
        aux.center = Vector(m + 1, 0.0);
        aux.rows = relaxed;
        aux.cone_a = cone_a_ext;
        aux.cone_b = prob.cone_b;
        aux.scale = prob.scale;
        aux.cone_m = cone_m_ext;
        aux.cone_v = prob.cone_v;

        // Minimize s directly: objective weight sits on the last coordinate, so
        // reuse the Newton loop with t applied to a shifted variable ordering.
        // Feasible start: s large enough for a unit margin everywhere.
        double s0 = 1.0;
        for (std::size_t i = 0; i < prob.rows.count(); ++i)
            s0 = std::max(s0, -prob.rows.value(i, u0) + 1.0);
        const double cone_short = dot(prob.cone_a, u0) + prob.cone_b -
                                  prob.scale * norm2(add(prob.cone_m * u0, prob.cone_v));
        s0 = std::max(s0, -cone_short + 1.0);

        Vector zs = u0;
        zs.push_back(s0);

        // Plain "min s" has no distance cone, so run a dedicated Newton loop
        // over the relaxed constraint barrier.
        auto eval_ph1 = [&](const Vector& z, double t, bool derivs) {
            BarrierEval out;
            const std::size_t dim = m + 1;
            out.grad = Vector(dim, 0.0);
            out.hess = Matrix(dim, dim);
            double f = t * z[m];
            if (derivs) out.grad[m] += t;
            for (std::size_t i = 0; i < aux.rows.count(); ++i) {
                double d = aux.rows.b[i];
                for (std::size_t j = 0; j < dim; ++j) d += aux.rows.a[i][j] * z[j];
                if (!(d > 0.0)) return out;
                f -= std::log(d);
                if (!derivs) continue;
                for (std::size_t j = 0; j < dim; ++j) out.grad[j] -= aux.rows.a[i][j] / d;
                for (std::size_t j = 0; j < dim; ++j)
                    for (std::size_t k = 0; k < dim; ++k)
                        out.hess(j, k) += aux.rows.a[i][j] * aux.rows.a[i][k] / (d * d);
            }
            double pval = aux.cone_b;
            for (std::size_t j = 0; j < dim; ++j) pval += aux.cone_a[j] * z[j];
            Vector uu(z.begin(), z.begin() + static_cast<long>(m));
            const Vector w = add(prob.cone_m * uu, prob.cone_v);
            const double d1 = pval * pval - aux.scale * aux.scale * dot(w, w);
            if (!(pval > 0.0) || !(d1 > 0.0)) return out;
            f -= std::log(d1);
            if (derivs) {
                const Vector mtw = prob.cone_m.transpose() * w;
                Vector gd1(dim, 0.0);
                for (std::size_t j = 0; j < dim; ++j) gd1[j] = 2.0 * pval * aux.cone_a[j];
                for (std::size_t j = 0; j < m; ++j) gd1[j] -= 2.0 * aux.scale * aux.scale * mtw[j];
                for (std::size_t j = 0; j < dim; ++j) out.grad[j] -= gd1[j] / d1;
                const Matrix mtm = prob.cone_m.transpose() * prob.cone_m;
                for (std::size_t j = 0; j < dim; ++j)
                    for (std::size_t k = 0; k < dim; ++k) {
                        double hd1 = 2.0 * aux.cone_a[j] * aux.cone_a[k];
                        if (j < m && k < m) hd1 -= 2.0 * aux.scale * aux.scale * mtm(j, k);
                        out.hess(j, k) += gd1[j] * gd1[k] / (d1 * d1) - hd1 / d1;
                    }
            }
            out.in_domain = true;
            out.value = f;
            return out;
        };

        double t = 1.0;
        bool found = false;
        while (budget > 0) {
            for (int it = 0; it < 40 && budget > 0; ++it) {
                const BarrierEval e = eval_ph1(zs, t, true);
                if (!e.in_domain) break;
                Matrix h = e.hess;
                for (std::size_t j = 0; j < h.rows(); ++j) h(j, j) += 1e-12;
                Vector step;
                try {
                    step = solve_linear(h, scaled(e.grad, -1.0));
                } catch (const NumericError&) {
                    break;
                }
                const double dec = -dot(e.grad, step);
                --budget;
                if (0.5 * dec <= 1e-14) break;
                double alpha = 1.0;
                for (int ls = 0; ls < 60; ++ls) {
                    Vector cand = zs;
                    for (std::size_t j = 0; j < cand.size(); ++j) cand[j] += alpha * step[j];
                    const BarrierEval ce = eval_ph1(cand, t, false);
                    if (ce.in_domain && ce.value <= e.value - 0.25 * alpha * dec) {
                        zs = cand;
                        break;
                    }
                    alpha *= 0.5;
                }
                Vector ucand(zs.begin(), zs.begin() + static_cast<long>(m));
                if (margin_at(ucand) > 1e-7) {
                    u0 = ucand;
                    found = true;
                    break;
                }
            }
            if (found) break;
            const double gap = (double(prob.rows.count()) + 2.0) / t;
            if (gap < 1e-9 || budget <= 0) break;
            t /= opts.barrier_mu_factor;
        }
        if (!found) {
            Vector ufin(zs.begin(), zs.begin() + static_cast<long>(m));
            result.status = SolveStatus::Infeasible;
            result.u = ufin;
            result.objective = dot(sub(ufin, spec.qp.center), sub(ufin, spec.qp.center));
            const Violation v = worst_violation(prob.rows, ufin);
            double worst = v.worst;
            std::size_t worst_row = v.row;
            const double cm = dot(prob.cone_a, ufin) + prob.cone_b -
                              prob.scale * norm2(add(prob.cone_m * ufin, prob.cone_v));
            if (-cm > worst) {
                worst = -cm;
                worst_row = prob.rows.count(); // cone row index past the affine rows
            }
            result.max_violation = std::max(0.0, worst);
            if (worst > 0.0) result.violated_row = worst_row;
            return result;
        }
    }

    // Phase 2: follow the central path of the epigraph problem.
    Vector z = u0;
    z.push_back(dot(sub(u0, spec.qp.center), sub(u0, spec.qp.center)) + 1.0);
    const double nu = double(prob.rows.count()) + 4.0;
    double t = 1.0;
    bool converged = false;
    while (budget > 0) {
        budget -= newton_center(prob, z, t, std::min(budget, 60));
        if (nu / t <= opts.barrier_gap_tol) {
            converged = true;
            break;
        }
        t /= opts.barrier_mu_factor;
    }

    Vector u(z.begin(), z.begin() + static_cast<long>(m));
    const PolishResult pol = polish_socp(prob, u);
    if (pol.ok && margin_at(pol.u) >= -opts.feasibility_tol) {
        const double obj_pol = dot(sub(pol.u, spec.qp.center), sub(pol.u, spec.qp.center));
        const double obj_ipm = dot(sub(u, spec.qp.center), sub(u, spec.qp.center));
        if (obj_pol <= obj_ipm + 1e-9) u = pol.u;
    }

    result.u = u;
    result.objective = dot(sub(u, spec.qp.center), sub(u, spec.qp.center));
    const double final_margin = margin_at(u);
    result.max_violation = std::max(0.0, -final_margin);
    if (!converged && !pol.ok) {
        result.status = SolveStatus::MaxIterations;
        return result;
    }
    if (final_margin < -opts.feasibility_tol) {
        result.status = SolveStatus::MaxIterations;
        return result;
    }
    result.status = SolveStatus::Optimal;
    result.kkt_residual = pol.ok ? pol.kkt : std::max(nu / t, result.max_violation);
    return result;
}

} // namespace rcbf
