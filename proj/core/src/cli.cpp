#include "robustcbf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "robustcbf/estimator.hpp"

namespace rcbf {

namespace fs = std::filesystem;

namespace {

void print_matrix(std::ostream& out, const Matrix& m, const std::string& name) {
    out << name << " =\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << "  [";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << (c ? ", " : " ") << std::setprecision(12) << m(r, c);
        }
        out << " ]\n";
    }
}

ScenarioConfig load_scenario(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
    ConfigMap map = parse_config_file(config_path);
    for (const auto& ov : overrides) apply_override(map, ov);
    return make_scenario_config(map);
}

} // namespace

int exit_code_for(const Metrics& metrics) {
    if (metrics.min_h < -kSafetyTol) return ExitCode::SafetyViolation;
    if (metrics.aborted_infeasible) return ExitCode::InfeasibleAbort;
    return ExitCode::Ok;
}

void write_metrics_text(const Metrics& metrics, double tracking, const ScenarioConfig& cfg,
                        std::ostream& out) {
    out << std::setprecision(17);
    out << "plant: " << to_string(cfg.plant) << "\n";
    out << "filter: " << to_string(cfg.filter) << "\n";
    out << "min_h: " << metrics.min_h << "\n";
    out << "first_violation_time: ";
    if (metrics.first_violation_time) out << *metrics.first_violation_time;
    else out << "none";
    out << "\n";
    out << "bound_violation_count: " << metrics.bound_violation_count << "\n";
    out << "output_bound_violation_count: " << metrics.output_bound_violation_count << "\n";
    out << "infeasible_steps: " << metrics.infeasible_steps << "\n";
    out << "max_estimate_norm: " << metrics.max_estimate_norm << "\n";
    out << "max_estimate_excess: " << metrics.max_estimate_excess << "\n";
    out << "mean_solve_violation: " << metrics.mean_solve_violation << "\n";
    out << "max_solve_violation: " << metrics.max_solve_violation << "\n";
    out << "envelope_transient_negative: "
        << (metrics.envelope_transient_negative ? "true" : "false") << "\n";
    if (metrics.iss_initial_membership)
        out << "iss_initial_membership: " << (*metrics.iss_initial_membership ? "true" : "false")
            << "\n";
    out << "aborted_infeasible: " << (metrics.aborted_infeasible ? "true" : "false") << "\n";
    if (metrics.abort_time) out << "abort_time: " << *metrics.abort_time << "\n";
    out << "tracking_cost: " << tracking << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, bool quiet, std::ostream& out,
            std::ostream& err) {
    ScenarioConfig cfg;
    try {
        cfg = load_scenario(config_path, overrides);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::ConfigError;
    }
    SimResult result;
    try {
        result = run_scenario(cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::ConfigError;
    }

    try {
        fs::create_directories(out_dir);
        const std::string trace_path = (fs::path(out_dir) / "trace.csv").string();
        export_csv(result.trace, trace_path);
        std::ofstream metrics_file(fs::path(out_dir) / "metrics.txt");
        if (!metrics_file) throw IoError("cannot open metrics.txt under " + out_dir);
        write_metrics_text(result.metrics, tracking_cost(result.trace, cfg), cfg, metrics_file);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::ConfigError;
    }

    const int code = exit_code_for(result.metrics);
    if (!quiet) {
        out << to_string(cfg.plant) << " / " << to_string(cfg.filter)
            << ": min_h = " << std::setprecision(6) << result.metrics.min_h;
        if (result.metrics.first_violation_time)
            out << ", first violation at t = " << *result.metrics.first_violation_time << " s";
        if (result.metrics.aborted_infeasible)
            out << ", aborted infeasible at t = " << *result.metrics.abort_time << " s";
        out << ", infeasible steps = " << result.metrics.infeasible_steps << "\n";
        out << "wrote " << (fs::path(out_dir) / "trace.csv").string() << "\n";
    }
    return code;
}

BoundsReport compute_bounds_report(const Matrix& gain, const Matrix& weight, double delta_b,
                                   double delta_l, std::optional<double> alpha_h) {
    const SpdCertificate gain_cert = certify_spd(gain);
    const SpdCertificate weight_cert = certify_spd(weight);
    EstimatorConfig cfg;
    cfg.gain = gain_cert;
    cfg.lyapunov_weight = weight_cert;
    cfg.uncertainty_bound = delta_b;
    cfg.rate_bound = delta_l;

    BoundsReport report;
    report.p = solve_lyapunov(gain_cert, weight_cert);
    const ErrorEnvelope env = make_error_envelope(cfg);
    report.overshoot = env.overshoot;
    report.rate = env.rate;
    report.p_norm = env.p_norm;
    const IssGains gains = iss_gains(gain_cert, delta_l);
    report.mu_e = gains.decay;
    report.gamma_val = gains.gain;
    report.bound_initial = error_bound(env, 0.0);
    report.bound_limit = 2.0 * env.overshoot * env.p_norm * env.rate_bound;
    report.gate_alpha_h = alpha_h;
    report.gate_ok = alpha_h ? gain_cert.min_eigenvalue > *alpha_h : false;
    return report;
}

int cmd_bounds(const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
    ConfigMap map;
    try {
        for (const auto& ov : overrides) apply_override(map, ov);
        auto take_list = [&map](const std::string& key) {
            if (!map.count(key)) throw ConfigError("bounds: missing key " + key);
            Vector v;
            std::istringstream in(map.at(key));
            std::string item;
            while (std::getline(in, item, ',')) v.push_back(std::stod(item));
            map.erase(key);
            return v;
        };
        auto take_number = [&map](const std::string& key,
                                  std::optional<double> fallback) -> std::optional<double> {
            if (!map.count(key)) return fallback;
            const double v = std::stod(map.at(key));
            map.erase(key);
            return v;
        };

        const Vector lambda_diag = take_list("lambda_diag");
        const Vector h_diag = take_list("h_diag");
        const double delta_b = take_number("delta_b", 0.0).value();
        const double delta_l = take_number("delta_l", 0.0).value();
        const std::optional<double> alpha_h = take_number("alpha_h", std::nullopt);
        if (!map.empty())
            throw ConfigError("bounds: unknown key " + map.begin()->first);

        const BoundsReport report =
            compute_bounds_report(Matrix::diagonal(lambda_diag), Matrix::diagonal(h_diag),
                                  delta_b, delta_l, alpha_h);
        out << std::setprecision(12);
        print_matrix(out, report.p, "P");
        out << "D = " << report.overshoot << "\n";
        out << "tau_e = " << report.rate << " 1/s\n";
        out << "p_norm = " << report.p_norm << "\n";
        out << "mu_e = " << report.mu_e << "\n";
        out << "gamma = " << report.gamma_val << "\n";
        out << "e_bar(0) = " << report.bound_initial << "\n";
        out << "e_bar(inf) = " << report.bound_limit << "\n";
        if (report.gate_alpha_h)
            out << "gate lambda_min > alpha_h: " << (report.gate_ok ? "pass" : "FAIL") << "\n";
        return ExitCode::Ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::ConfigError;
    }
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& filters,
                const std::string& out_dir, const std::vector<std::string>& overrides,
                bool quiet, std::ostream& out, std::ostream& err,
                std::vector<CompareEntry>* table_out) {
    if (filters.empty()) {
        err << "error: compare: empty filter list\n";
        return ExitCode::ConfigError;
    }
    ConfigMap base;
    try {
        base = parse_config_file(config_path);
        for (const auto& ov : overrides) apply_override(base, ov);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::ConfigError;
    }

    std::vector<CompareEntry> table;
    bool any_config_error = false;
    for (const std::string& name : filters) {
        CompareEntry entry;
        entry.filter = name;
        try {
            ConfigMap map = base;
            map["filter"] = name;
            // The matched-compensation toggle belongs to the estimator-based
            // architecture; clear it when comparing against plain filters.
            const auto kind = filter_from_string(name);
            if (kind && !filter_uses_estimate(*kind)) map["compensate_matched"] = "false";
            const ScenarioConfig cfg = make_scenario_config(map);
            const SimResult result = run_scenario(cfg);
            entry.metrics = result.metrics;
            entry.tracking = tracking_cost(result.trace, cfg);
            entry.exit_code = exit_code_for(result.metrics);
            const fs::path dir = fs::path(out_dir) / name;
            fs::create_directories(dir);
            export_csv(result.trace, (dir / "trace.csv").string());
            std::ofstream metrics_file(dir / "metrics.txt");
            write_metrics_text(result.metrics, entry.tracking, cfg, metrics_file);
        } catch (const std::exception& e) {
            entry.error = e.what();
            entry.exit_code = ExitCode::ConfigError;
            any_config_error = true;
        }
        table.push_back(std::move(entry));
    }

    if (!quiet) {
        out << std::left << std::setw(16) << "filter" << std::right << std::setw(12) << "min_h"
            << std::setw(14) << "violation_t" << std::setw(12) << "infeasible" << std::setw(14)
            << "tracking" << "  status\n";
        for (const CompareEntry& e : table) {
            out << std::left << std::setw(16) << e.filter;
            if (!e.error.empty()) {
                out << "  error: " << e.error << "\n";
                continue;
            }
            out << std::right << std::setw(12) << std::setprecision(4) << std::fixed
                << e.metrics.min_h;
            out << std::setw(14);
            if (e.metrics.first_violation_time)
                out << *e.metrics.first_violation_time;
            else
                out << "none";
            out << std::setw(12) << e.metrics.infeasible_steps;
            out << std::setw(14) << std::setprecision(5) << e.tracking;
            out << "  "
                << (e.exit_code == ExitCode::Ok            ? "safe"
                    : e.exit_code == ExitCode::SafetyViolation ? "violated"
                                                               : "infeasible")
                << "\n";
            out.unsetf(std::ios::fixed);
        }
    }
    if (table_out) *table_out = table;
    return any_config_error ? ExitCode::ConfigError : ExitCode::Ok;
}

int cmd_list(const std::string& config_dir, std::ostream& out) {
    out << "plants:\n";
    for (PlantKind k : {PlantKind::Unicycle, PlantKind::Actuator, PlantKind::SyntheticSocp})
        out << "  " << to_string(k) << "\n";
    out << "filters:\n";
    for (FilterKind k : {FilterKind::None, FilterKind::CbfQp, FilterKind::HocbfQp,
                         FilterKind::UeCbfQp, FilterKind::UeIssCbfQp, FilterKind::UeHocbfQp,
                         FilterKind::UeHocbfSocp})
        out << "  " << to_string(k) << "\n";
    out << "config keys:\n";
    for (const auto& key : scenario_config_keys()) out << "  " << key << "\n";
    if (!config_dir.empty() && fs::is_directory(config_dir)) {
        out << "bundled configs in " << config_dir << ":\n";
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(config_dir))
            if (entry.path().extension() == ".cfg") names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
        for (const auto& n : names) out << "  " << n << "\n";
    }
    return ExitCode::Ok;
}

} // namespace rcbf
