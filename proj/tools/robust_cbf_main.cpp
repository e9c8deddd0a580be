#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robustcbf/cli.hpp"

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("ROBUST_CBF_OUT")) return env;
    return "out";
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uncertainty-estimation-based robust CBF safety filters"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = default_out_dir();
    std::string filters_csv;
    std::string config_dir = "configs";
    std::vector<std::string> overrides;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "simulate one scenario from a config file");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory (env ROBUST_CBF_OUT)");
    run->add_option("--set", overrides, "override config key=value (repeatable)");
    run->add_flag("--quiet", quiet, "suppress the summary line");

    auto* bounds = app.add_subcommand("bounds", "print the estimator certificate numbers");
    bounds->add_option("--set", overrides,
                       "lambda_diag=..., h_diag=..., delta_b=, delta_l=, alpha_h= (repeatable)");

    auto* compare = app.add_subcommand("compare", "run several filters on one scenario");
    compare->add_option("--config", config_path, "scenario config file")->required();
    compare->add_option("--filters", filters_csv, "comma-separated filter list")->required();
    compare->add_option("--out", out_dir, "output directory (env ROBUST_CBF_OUT)");
    compare->add_option("--set", overrides, "override config key=value (repeatable)");
    compare->add_flag("--quiet", quiet, "suppress the table");

    auto* list = app.add_subcommand("list", "list plants, filters, config keys, bundled configs");
    list->add_option("--configs", config_dir, "directory to scan for bundled .cfg files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (run->parsed())
        return rcbf::cmd_run(config_path, out_dir, overrides, quiet, std::cout, std::cerr);
    if (bounds->parsed()) return rcbf::cmd_bounds(overrides, std::cout, std::cerr);
    if (compare->parsed())
        return rcbf::cmd_compare(config_path, split_list(filters_csv), out_dir, overrides, quiet,
                                 std::cout, std::cerr);
    if (list->parsed()) return rcbf::cmd_list(config_dir, std::cout);
    return 1;
}
