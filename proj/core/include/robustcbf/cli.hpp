#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robustcbf/config.hpp"

namespace rcbf {

/// Exit codes shared by the CLI commands.
///   0  run completed safely
///   1  configuration error (parse failure, unknown key, gate violation, non-SPD input)
///   2  safety violation detected (min h < -1e-3)
///   3  solver infeasibility abort without a safety violation
struct ExitCode {
    static constexpr int Ok = 0;
    static constexpr int ConfigError = 1;
    static constexpr int SafetyViolation = 2;
    static constexpr int InfeasibleAbort = 3;
};

/// Everything `bounds` prints, exposed for tests.
struct BoundsReport {
    Matrix p;
    double overshoot = 0.0;  // D
    double rate = 0.0;       // tau_e
    double p_norm = 0.0;
    double mu_e = 0.0;
    double gamma_val = 0.0;
    double bound_initial = 0.0; // e_bar(0)
    double bound_limit = 0.0;   // e_bar(inf)
    std::optional<double> gate_alpha_h;
    bool gate_ok = false;
};

BoundsReport compute_bounds_report(const Matrix& gain, const Matrix& weight, double delta_b,
                                   double delta_l, std::optional<double> alpha_h);

/// Per-filter row of the comparison table.
struct CompareEntry {
    std::string filter;
    int exit_code = ExitCode::ConfigError;
    std::string error; // set when the filter could not run
    Metrics metrics;
    double tracking = 0.0;
};

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, bool quiet, std::ostream& out,
            std::ostream& err);

int cmd_bounds(const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err);

int cmd_compare(const std::string& config_path, const std::vector<std::string>& filters,
                const std::string& out_dir, const std::vector<std::string>& overrides,
                bool quiet, std::ostream& out, std::ostream& err,
                std::vector<CompareEntry>* table_out = nullptr);

int cmd_list(const std::string& config_dir, std::ostream& out);

/// Exit-code policy applied to finished runs: safety violation dominates an
/// infeasibility abort.
int exit_code_for(const Metrics& metrics);

void write_metrics_text(const Metrics& metrics, double tracking, const ScenarioConfig& cfg,
                        std::ostream& out);

} // namespace rcbf
