#include "robustcbf/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace rcbf {

const char* to_string(PlantKind k) {
    switch (k) {
        case PlantKind::Unicycle: return "unicycle";
        case PlantKind::Actuator: return "actuator";
        case PlantKind::SyntheticSocp: return "synthetic";
    }
    return "unknown";
}

const char* to_string(FilterKind k) {
    switch (k) {
        case FilterKind::None: return "none";
        case FilterKind::CbfQp: return "cbf_qp";
        case FilterKind::HocbfQp: return "hocbf_qp";
        case FilterKind::UeCbfQp: return "ue_cbf_qp";
        case FilterKind::UeIssCbfQp: return "ue_iss_cbf_qp";
        case FilterKind::UeHocbfQp: return "ue_hocbf_qp";
        case FilterKind::UeHocbfSocp: return "ue_hocbf_socp";
    }
    return "unknown";
}

std::optional<PlantKind> plant_from_string(const std::string& name) {
    for (PlantKind k : {PlantKind::Unicycle, PlantKind::Actuator, PlantKind::SyntheticSocp})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

std::optional<FilterKind> filter_from_string(const std::string& name) {
    for (FilterKind k : {FilterKind::None, FilterKind::CbfQp, FilterKind::HocbfQp,
                         FilterKind::UeCbfQp, FilterKind::UeIssCbfQp, FilterKind::UeHocbfQp,
                         FilterKind::UeHocbfSocp})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

bool filter_uses_estimate(FilterKind k) {
    return k == FilterKind::UeCbfQp || k == FilterKind::UeIssCbfQp ||
           k == FilterKind::UeHocbfQp || k == FilterKind::UeHocbfSocp;
}

Vector integrate_rk4(const std::function<Vector(double, const Vector&)>& derivative,
                     const Vector& z0, double t0, double dt, int substeps) {
    if (!(dt > 0.0) || substeps < 1)
        throw Error("integrate_rk4: need dt > 0 and substeps >= 1");
    const double h = dt / substeps;
    Vector z = z0;
    for (int i = 0; i < substeps; ++i) {
        const double t = t0 + i * h;
        const Vector k1 = derivative(t, z);
        const Vector k2 = derivative(t + 0.5 * h, add(z, scaled(k1, 0.5 * h)));
        const Vector k3 = derivative(t + 0.5 * h, add(z, scaled(k2, 0.5 * h)));
        const Vector k4 = derivative(t + h, add(z, scaled(k3, h)));
        for (std::size_t j = 0; j < z.size(); ++j)
            z[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        for (double v : z)
            if (!std::isfinite(v))
                throw NumericError("integrate_rk4: non-finite state at t = " + std::to_string(t + h));
    }
    return z;
}

namespace {

struct Runtime {
    NominalModel model;
    std::function<Vector(const Vector&)> desired;
    std::function<Vector(double, const Vector&, const Vector&)> rhs;
    std::function<Vector(double, const Vector&, const Vector&)> ground_truth;
    std::optional<BarrierSpec> barrier;
    std::optional<HocbfChain> chain;
    EstimatorConfig est_cfg;
    ErrorEnvelope envelope;
    double gain_norm = 0.0;
    IssGains iss;
};

void validate_common(const ScenarioConfig& cfg) {
    if (!(cfg.control_rate > 0.0)) throw ConfigError("scenario: control_rate must be positive");
    if (!(cfg.duration > 0.0)) throw ConfigError("scenario: duration must be positive");
    if (cfg.substeps < 1) throw ConfigError("scenario: substeps must be >= 1");
    if (cfg.compensate_matched && !filter_uses_estimate(cfg.filter))
        throw ConfigError("scenario: compensate_matched requires an estimator-based filter");
}

Runtime make_runtime(const ScenarioConfig& cfg) {
    validate_common(cfg);
    Runtime rt;
    switch (cfg.plant) {
        case PlantKind::Unicycle: {
            if (cfg.filter == FilterKind::HocbfQp || cfg.filter == FilterKind::UeHocbfQp ||
                cfg.filter == FilterKind::UeHocbfSocp)
                throw ConfigError("scenario: the unicycle barrier has relative degree 1; "
                                  "use a CBF filter");
            rt.model = unicycle_model(cfg.unicycle);
            const UnicycleParams params = cfg.unicycle;
            rt.desired = [params](const Vector& x) {
                return unicycle_goal_controller(params, x);
            };
            const SlipProfile slip = cfg.slip;
            const bool uncertain = cfg.uncertain_plant;
            rt.rhs = [slip, uncertain](double t, const Vector& x, const Vector& u) {
                return uncertain ? unicycle_actual(x, u, slip, t) : unicycle_nominal(x, u);
            };
            rt.ground_truth = [slip, uncertain](double t, const Vector& x, const Vector& u) {
                return uncertain ? unicycle_slip_uncertainty(x, u, slip, t)
                                 : Vector(3, 0.0);
            };
            rt.barrier = unicycle_edge_cbf(params);
            break;
        }
        case PlantKind::Actuator: {
            if (cfg.filter == FilterKind::CbfQp || cfg.filter == FilterKind::UeCbfQp ||
                cfg.filter == FilterKind::UeIssCbfQp)
                throw ConfigError("scenario: the actuator barrier has relative degree 2; "
                                  "use an HOCBF filter");
            rt.model = actuator_model(cfg.actuator);
            const ActuatorParams params = cfg.actuator;
            rt.desired = [params](const Vector& x) {
                return Vector{actuator_clf_controller(params, x)};
            };
            const bool uncertain = cfg.uncertain_plant;
            rt.rhs = [params, uncertain](double, const Vector& x, const Vector& u) {
                return actuator_dynamics(params, x, u[0], uncertain);
            };
            rt.ground_truth = [params, uncertain](double, const Vector& x, const Vector& u) {
                if (!uncertain) return Vector(4, 0.0);
                return sub(actuator_dynamics(params, x, u[0], true),
                           actuator_dynamics(params, x, u[0], false));
            };
            rt.chain = actuator_hocbf_chain(params, LinearClassK{cfg.alpha1},
                                            LinearClassK{cfg.alpha2});
            break;
        }
        case PlantKind::SyntheticSocp: {
            if (cfg.filter == FilterKind::CbfQp || cfg.filter == FilterKind::UeCbfQp ||
                cfg.filter == FilterKind::UeIssCbfQp)
                throw ConfigError("scenario: the synthetic barrier has relative degree 2; "
                                  "use an HOCBF filter");
            if (cfg.filter == FilterKind::UeHocbfQp)
                throw ConfigError("scenario: the synthetic plant's cone term depends on the "
                                  "input; use ue_hocbf_socp");
            SyntheticParams params = cfg.synthetic;
            params.alpha1 = cfg.alpha1;
            params.alpha2 = cfg.alpha2;
            SyntheticPlant plant = synthetic_socp_plant(params);
            rt.model = plant.model;
            const double k_desired = params.k_desired;
            rt.desired = [k_desired](const Vector&) { return Vector{k_desired}; };
            const bool uncertain = cfg.uncertain_plant;
            rt.rhs = [plant, uncertain](double t, const Vector& x, const Vector& u) {
                Vector dx = add(plant.model.drift(x), plant.model.input_map(x) * u);
                if (uncertain) dx[0] += plant.disturbance(t);
                return dx;
            };
            rt.ground_truth = [plant, uncertain](double t, const Vector&, const Vector&) {
                Vector d(2, 0.0);
                if (uncertain) d[0] = plant.disturbance(t);
                return d;
            };
            rt.chain = plant.chain;
            break;
        }
    }

    const std::size_t n = rt.model.state_dim;
    Matrix gain = cfg.estimator_gain.empty() ? Matrix::identity(n) : cfg.estimator_gain;
    Matrix weight = cfg.estimator_weight.empty() ? Matrix::identity(n) : cfg.estimator_weight;
    if (gain.rows() != n || weight.rows() != n)
        throw ConfigError("scenario: estimator matrices must match the plant state dimension");
    rt.est_cfg.gain = certify_spd(gain);
    rt.est_cfg.lyapunov_weight = certify_spd(weight);
    rt.est_cfg.uncertainty_bound = cfg.uncertainty_bound;
    rt.est_cfg.rate_bound = cfg.rate_bound;
    rt.envelope = make_error_envelope(rt.est_cfg);
    rt.gain_norm = spectral_norm(rt.est_cfg.gain.matrix);
    rt.iss = iss_gains(rt.est_cfg.gain, cfg.rate_bound);

    if (cfg.filter == FilterKind::UeIssCbfQp) {
        const double gate = 2.0 * cfg.sigma_v * rt.iss.decay - 0.5 * cfg.sigma_v * cfg.alpha_h;
        if (!(gate > 0.0))
            throw GateViolation("scenario: lambda_min(Lambda) must exceed alpha_h for the "
                                "ISS-composed filter");
    }
    return rt;
}

struct StepProgram {
    QpSpec qp;
    std::optional<SocpSpec> socp;
    std::size_t relaxable_rows = 0;
};

std::vector<AffineConstraintRow> input_rows(const InputPolytope& set, const Vector& shift) {
    std::vector<AffineConstraintRow> rows;
    if (set.a.empty()) return rows;
    rows.reserve(set.a.rows());
    for (std::size_t i = 0; i < set.a.rows(); ++i) {
        AffineConstraintRow row;
        row.coeff = Vector(set.a.cols(), 0.0);
        for (std::size_t j = 0; j < set.a.cols(); ++j) row.coeff[j] = -set.a(i, j);
        row.offset = set.b[i] - dot(row.coeff, shift);
        rows.push_back(std::move(row));
    }
    return rows;
}

StepProgram build_program(const ScenarioConfig& cfg, const Runtime& rt, const Vector& x,
                          const Vector& delta_hat, double e_bar_now, const Vector& k_d) {
    StepProgram prog;
    prog.qp.center = k_d;
    const Vector zero_shift(rt.model.input_dim, 0.0);
    const Vector shift = filter_uses_estimate(cfg.filter)
                             ? rt.model.pseudo_inverse(x) * delta_hat
                             : zero_shift;
    switch (cfg.filter) {
        case FilterKind::None:
            return prog;
        case FilterKind::CbfQp:
            prog.qp.rows.push_back(cbf_constraint_nominal(*rt.barrier, rt.model, x));
            break;
        case FilterKind::UeCbfQp:
            prog.qp.rows.push_back(
                ue_cbf_constraint(*rt.barrier, rt.model, x, delta_hat, e_bar_now));
            break;
        case FilterKind::UeIssCbfQp:
            prog.qp.rows.push_back(ue_iss_cbf_constraint(*rt.barrier, rt.model, x, delta_hat,
                                                         cfg.sigma_v, cfg.alpha_h,
                                                         rt.iss.decay, rt.iss.gain));
            break;
        case FilterKind::HocbfQp:
            prog.qp.rows.push_back(hocbf_constraint_nominal(*rt.chain, rt.model, x));
            break;
        case FilterKind::UeHocbfQp: {
            UeHocbfTerms terms = ue_hocbf_terms(*rt.chain, rt.model, x, delta_hat, e_bar_now,
                                                cfg.rate_bound, LinearClassK{cfg.alpha2});
            // The cone argument cannot depend on u here; its constant value
            // tightens the affine row.
            terms.row.offset -= terms.cone.scale * norm2(terms.cone.arg_offset);
            prog.qp.rows.push_back(terms.row);
            break;
        }
        case FilterKind::UeHocbfSocp: {
            UeHocbfTerms terms = ue_hocbf_terms(*rt.chain, rt.model, x, delta_hat, e_bar_now,
                                                cfg.rate_bound, LinearClassK{cfg.alpha2});
            SocpSpec socp;
            socp.cone = terms.cone;
            socp.cone_bound = terms.row;
            socp.qp.center = k_d;
            for (auto& row : input_rows(rt.model.input_set, shift))
                socp.qp.rows.push_back(std::move(row));
            prog.socp = std::move(socp);
            return prog;
        }
    }
    prog.relaxable_rows = prog.qp.rows.size();
    for (auto& row : input_rows(rt.model.input_set, shift))
        prog.qp.rows.push_back(std::move(row));
    return prog;
}

double program_margin(const StepProgram& prog, const Vector& u) {
    double margin = std::numeric_limits<double>::infinity();
    if (prog.socp) {
        for (const auto& row : prog.socp->qp.rows) margin = std::min(margin, row.eval(u));
        margin = std::min(margin, prog.socp->cone_bound.eval(u) - prog.socp->cone.eval(u));
        return margin;
    }
    for (const auto& row : prog.qp.rows) margin = std::min(margin, row.eval(u));
    return margin;
}

double ground_truth_phi1(const Runtime& rt, const Vector& x, const Vector& delta) {
    return rt.chain->psi(x) + dot(rt.chain->disturbance_row(x), delta);
}

} // namespace

SimResult run_scenario(const ScenarioConfig& cfg) {
    const Runtime rt = make_runtime(cfg);
    const std::size_t n = rt.model.state_dim;
    const std::size_t m = rt.model.input_dim;
    if (cfg.initial_state.size() != n)
        throw ConfigError("scenario: initial_state length does not match the plant");

    const double dt = 1.0 / cfg.control_rate;
    const long steps = std::lround(cfg.duration * cfg.control_rate);
    const Matrix& gain = rt.est_cfg.gain.matrix;

    Vector x = cfg.initial_state;
    EstimatorState est = init_estimator(rt.est_cfg, x, 0.0);

    SimTrace trace;
    trace.state_dim = n;
    trace.input_dim = m;
    trace.records.reserve(static_cast<std::size_t>(steps) + 1);

    bool aborted = false;
    for (long k = 0; k <= steps && !aborted; ++k) {
        const double t = k * dt;
        TraceRecord rec;
        rec.t = t;
        rec.x = x;
        rec.delta_hat = estimate(est, gain, x);
        const double elapsed = t - est.t_start;
        rec.e_bar = error_bound(rt.envelope, elapsed);
        rec.delta_hat_bound = output_bound(rt.envelope, rt.gain_norm, elapsed);
        rec.u_desired = rt.desired(x);

        if (cfg.filter == FilterKind::None) {
            rec.u_bar = rec.u_desired;
        } else {
            const StepProgram prog =
                build_program(cfg, rt, x, rec.delta_hat, rec.e_bar, rec.u_desired);
            SolveResult sol = prog.socp ? solve_filter_socp(*prog.socp)
                                        : solve_filter_qp(prog.qp);
            if (sol.status == SolveStatus::MaxIterations)
                throw NumericError("run_scenario: filter solve did not converge at t = " +
                                   std::to_string(t));
            if (sol.status == SolveStatus::Infeasible) {
                if (cfg.allow_slack && !prog.socp) {
                    SolveResult relaxed =
                        solve_filter_qp_relaxed(prog.qp, prog.relaxable_rows);
                    if (relaxed.status != SolveStatus::Optimal)
                        throw NumericError("run_scenario: relaxed solve failed at t = " +
                                           std::to_string(t));
                    rec.slack = relaxed.slack;
                    rec.u_bar = relaxed.u;
                    rec.solver_status = SolveStatus::Infeasible; // logged as a relaxed step
                    rec.objective = relaxed.objective;
                } else {
                    rec.u_bar = sol.u; // least-infeasible point, for the diagnostic record
                    rec.solver_status = SolveStatus::Infeasible;
                    rec.objective = sol.objective;
                    aborted = true;
                }
            } else {
                rec.u_bar = sol.u;
                rec.solver_status = sol.status;
                rec.objective = sol.objective;
            }
        }

        Vector u = rec.u_bar;
        if (cfg.compensate_matched)
            u = sub(u, rt.model.pseudo_inverse(x) * rec.delta_hat);
        rec.u_applied = rt.model.input_set.clamp(u);
        rec.delta = rt.ground_truth(t, x, rec.u_applied);
        rec.e_norm = norm2(sub(rec.delta, rec.delta_hat));
        if (rt.barrier) rec.h = rt.barrier->value(x);
        if (rt.chain) {
            rec.h = rt.chain->base.value(x);
            rec.psi = ground_truth_phi1(rt, x, rec.delta);
        }
        if (cfg.filter == FilterKind::UeIssCbfQp)
            rec.h_v = rec.h - cfg.sigma_v * 0.5 * rec.e_norm * rec.e_norm;

        const Vector u_applied = rec.u_applied;
        trace.records.push_back(std::move(rec));
        if (aborted || k == steps) continue;

        Vector z = x;
        z.insert(z.end(), est.xi.begin(), est.xi.end());
        const auto augmented = [&](double tt, const Vector& zz) {
            const Vector xs(zz.begin(), zz.begin() + static_cast<long>(n));
            const Vector xi(zz.begin() + static_cast<long>(n), zz.end());
            const Vector dhat = sub(gain * xs, xi);
            Vector out = rt.rhs(tt, xs, u_applied);
            const Vector xid = estimator_derivative(gain, rt.model.drift(xs),
                                                    rt.model.input_map(xs), u_applied, dhat);
            out.insert(out.end(), xid.begin(), xid.end());
            return out;
        };
        z = integrate_rk4(augmented, z, t, dt, cfg.substeps);
        x.assign(z.begin(), z.begin() + static_cast<long>(n));
        est.xi.assign(z.begin() + static_cast<long>(n), z.end());
    }

    SimResult result;
    result.metrics = compute_metrics(trace, cfg);
    result.trace = std::move(trace);
    return result;
}

Metrics compute_metrics(const SimTrace& trace, const ScenarioConfig& cfg) {
    if (trace.records.empty()) throw Error("compute_metrics: empty trace");
    const Runtime rt = make_runtime(cfg);
    Metrics m;
    m.min_h = std::numeric_limits<double>::infinity();
    m.max_estimate_excess = -std::numeric_limits<double>::infinity();
    m.envelope_transient_negative =
        rt.envelope.uncertainty_bound < 2.0 * rt.envelope.rate_bound * rt.envelope.p_norm;

    double violation_sum = 0.0;
    long audited = 0;
    for (const TraceRecord& rec : trace.records) {
        m.min_h = std::min(m.min_h, rec.h);
        if (!m.first_violation_time && rec.h < -kSafetyTol) m.first_violation_time = rec.t;
        if (rec.e_norm > rec.e_bar + 1e-6) ++m.bound_violation_count;
        const double est_norm = norm2(rec.delta_hat);
        m.max_estimate_norm = std::max(m.max_estimate_norm, est_norm);
        m.max_estimate_excess = std::max(m.max_estimate_excess, est_norm - rec.delta_hat_bound);
        if (est_norm > rec.delta_hat_bound + 1e-6) ++m.output_bound_violation_count;
        if (rec.solver_status == SolveStatus::Infeasible) ++m.infeasible_steps;
        if (rec.solver_status == SolveStatus::Optimal) {
            const StepProgram prog =
                build_program(cfg, rt, rec.x, rec.delta_hat, rec.e_bar, rec.u_desired);
            const double violation = std::max(0.0, -program_margin(prog, rec.u_bar));
            violation_sum += violation;
            m.max_solve_violation = std::max(m.max_solve_violation, violation);
            ++audited;
        }
    }
    if (audited > 0) m.mean_solve_violation = violation_sum / static_cast<double>(audited);

    const TraceRecord& last = trace.records.back();
    if (!cfg.allow_slack && last.solver_status == SolveStatus::Infeasible) {
        m.aborted_infeasible = true;
        m.abort_time = last.t;
    }
    if (cfg.filter == FilterKind::UeIssCbfQp && trace.records.front().h_v)
        m.iss_initial_membership = *trace.records.front().h_v >= 0.0;
    return m;
}

double tracking_cost(const SimTrace& trace, const ScenarioConfig& cfg) {
    if (trace.records.size() < 2) return 0.0;
    const double dt = 1.0 / cfg.control_rate;
    double cost = 0.0;
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const TraceRecord& rec = trace.records[k];
        double err = 0.0;
        switch (cfg.plant) {
            case PlantKind::Actuator:
                err = rec.x[3] - cfg.actuator.x4_desired;
                err = err * err;
                break;
            case PlantKind::Unicycle: {
                const double ex = rec.x[0] - cfg.unicycle.goal_x;
                const double ey = rec.x[1] - cfg.unicycle.goal_y;
                err = ex * ex + ey * ey;
                break;
            }
            case PlantKind::SyntheticSocp:
                err = 0.0;
                break;
        }
        cost += err * dt;
    }
    return cost;
}

// ---------------------------------------------------------------------------
// CSV I/O. 17 significant digits, '.' separator, locale independent.
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void append_vector(std::string& line, const Vector& v) {
    for (double x : v) {
        line += ',';
        line += format_double(x);
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& path) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw IoError("import_csv: malformed number '" + s + "' in " + path);
    return v;
}

} // namespace

void export_csv(const SimTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_csv: cannot open " + path);
    std::string header = "t";
    auto block = [&header](const char* prefix, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i)
            header += "," + std::string(prefix) + "_" + std::to_string(i);
    };
    block("x", trace.state_dim);
    block("u_desired", trace.input_dim);
    block("u_bar", trace.input_dim);
    block("u_applied", trace.input_dim);
    block("delta", trace.state_dim);
    block("delta_hat", trace.state_dim);
    header += ",e_norm,e_bar,delta_hat_bound,h,psi,h_v,solver_status,objective";
    out << header << '\n';
    for (const TraceRecord& rec : trace.records) {
        std::string line = format_double(rec.t);
        append_vector(line, rec.x);
        append_vector(line, rec.u_desired);
        append_vector(line, rec.u_bar);
        append_vector(line, rec.u_applied);
        append_vector(line, rec.delta);
        append_vector(line, rec.delta_hat);
        line += ',' + format_double(rec.e_norm);
        line += ',' + format_double(rec.e_bar);
        line += ',' + format_double(rec.delta_hat_bound);
        line += ',' + format_double(rec.h);
        line += ',';
        if (rec.psi) line += format_double(*rec.psi);
        line += ',';
        if (rec.h_v) line += format_double(*rec.h_v);
        line += ',';
        if (rec.solver_status) line += to_string(*rec.solver_status);
        line += ',';
        if (rec.objective) line += format_double(*rec.objective);
        out << line << '\n';
    }
    if (!out) throw IoError("export_csv: write failed for " + path);
}

SimTrace import_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("import_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("import_csv: empty file " + path);
    const auto header = split_csv(line);
    SimTrace trace;
    for (const auto& col : header) {
        if (col.rfind("x_", 0) == 0) ++trace.state_dim;
        if (col.rfind("u_desired_", 0) == 0) ++trace.input_dim;
    }
    const std::size_t n = trace.state_dim;
    const std::size_t m = trace.input_dim;
    const std::size_t expected = 1 + 3 * m + 3 * n + 8;
    if (header.size() != expected) throw IoError("import_csv: unexpected header in " + path);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != expected) throw IoError("import_csv: ragged row in " + path);
        TraceRecord rec;
        std::size_t idx = 0;
        rec.t = parse_double(f[idx++], path);
        auto take = [&](std::size_t count) {
            Vector v(count, 0.0);
            for (std::size_t i = 0; i < count; ++i) v[i] = parse_double(f[idx++], path);
            return v;
        };
        rec.x = take(n);
        rec.u_desired = take(m);
        rec.u_bar = take(m);
        rec.u_applied = take(m);
        rec.delta = take(n);
        rec.delta_hat = take(n);
        rec.e_norm = parse_double(f[idx++], path);
        rec.e_bar = parse_double(f[idx++], path);
        rec.delta_hat_bound = parse_double(f[idx++], path);
        rec.h = parse_double(f[idx++], path);
        if (!f[idx].empty()) rec.psi = parse_double(f[idx], path);
        ++idx;
        if (!f[idx].empty()) rec.h_v = parse_double(f[idx], path);
        ++idx;
        if (!f[idx].empty()) {
            const std::string& status = f[idx];
            if (status == "optimal") rec.solver_status = SolveStatus::Optimal;
            else if (status == "infeasible") rec.solver_status = SolveStatus::Infeasible;
            else if (status == "max_iterations") rec.solver_status = SolveStatus::MaxIterations;
            else throw IoError("import_csv: unknown solver status '" + status + "' in " + path);
        }
        ++idx;
        if (!f[idx].empty()) rec.objective = parse_double(f[idx], path);
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

} // namespace rcbf
