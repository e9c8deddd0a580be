#include "robustcbf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rcbf {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (map.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
        map[key] = value;
    }
    return map;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_override(ConfigMap& map, const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + key_eq_value + "' is not of the form key=value");
    const std::string key = trim(key_eq_value.substr(0, eq));
    if (key.empty()) throw ConfigError("override with empty key");
    map[key] = trim(key_eq_value.substr(eq + 1));
}

namespace {

class Reader {
public:
    explicit Reader(const ConfigMap& map) : map_(map) {}

    bool has(const std::string& key) {
        const bool present = map_.count(key) != 0;
        if (present) seen_.insert(key);
        return present;
    }

    std::string raw(const std::string& key) {
        seen_.insert(key);
        return map_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!map_.count(key)) return fallback;
        return parse_number(raw(key), key);
    }

    int integer(const std::string& key, int fallback) {
        const double v = number(key, fallback);
        const int i = static_cast<int>(std::lround(v));
        if (std::abs(v - i) > 1e-12)
            throw ConfigError("config key " + key + " must be an integer");
        return i;
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!map_.count(key)) return fallback;
        const std::string v = raw(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError("config key " + key + " must be true or false");
    }

    Vector list(const std::string& key) {
        Vector out;
        std::istringstream in(raw(key));
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(parse_number(trim(item), key));
        if (out.empty()) throw ConfigError("config key " + key + " must be a number list");
        return out;
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : map_)
            if (!seen_.count(key)) unknown.push_back(key);
        if (!unknown.empty()) {
            std::string msg = "unknown config key(s):";
            for (const auto& k : unknown) msg += " " + k;
            throw ConfigError(msg);
        }
    }

private:
    static double parse_number(const std::string& s, const std::string& key) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ConfigError("config key " + key + ": malformed number '" + s + "'");
        return v;
    }

    const ConfigMap& map_;
    std::set<std::string> seen_;
};

Matrix matrix_from_keys(Reader& r, const std::string& diag_key, const std::string& full_key,
                        std::size_t dim) {
    if (r.has(diag_key) && r.has(full_key))
        throw ConfigError("config: give either " + diag_key + " or " + full_key + ", not both");
    if (r.has(diag_key)) {
        const Vector d = r.list(diag_key);
        if (d.size() != dim)
            throw ConfigError("config key " + diag_key + " must have " + std::to_string(dim) +
                              " entries");
        return Matrix::diagonal(d);
    }
    if (r.has(full_key)) {
        const Vector flat = r.list(full_key);
        if (flat.size() != dim * dim)
            throw ConfigError("config key " + full_key + " must have " +
                              std::to_string(dim * dim) + " entries (row-major)");
        Matrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m(i, j) = flat[i * dim + j];
        return m;
    }
    return Matrix::identity(dim);
}

SlipChannel slip_channel(Reader& r, const std::string& prefix) {
    SlipChannel ch;
    ch.amp = r.number(prefix + ".amp", 0.0);
    ch.bias = r.number(prefix + ".bias", 1.0);
    ch.freq = r.number(prefix + ".freq", 0.0);
    return ch;
}

} // namespace

ScenarioConfig make_scenario_config(const ConfigMap& map) {
    Reader r(map);
    ScenarioConfig cfg;

    if (!r.has("plant")) throw ConfigError("config: missing required key 'plant'");
    const auto plant = plant_from_string(r.raw("plant"));
    if (!plant) throw ConfigError("config: unknown plant '" + r.raw("plant") + "'");
    cfg.plant = *plant;

    if (!r.has("filter")) throw ConfigError("config: missing required key 'filter'");
    const auto filter = filter_from_string(r.raw("filter"));
    if (!filter) throw ConfigError("config: unknown filter '" + r.raw("filter") + "'");
    cfg.filter = *filter;

    cfg.uncertain_plant = r.boolean("uncertain_plant", true);
    cfg.duration = r.number("duration", cfg.duration);
    cfg.control_rate = r.number("control_rate", cfg.control_rate);
    cfg.substeps = r.integer("substeps", cfg.substeps);
    cfg.compensate_matched = r.boolean("compensate_matched", false);
    cfg.allow_slack = r.boolean("allow_slack", false);
    cfg.seed = static_cast<std::uint64_t>(r.number("seed", 0.0));

    const std::size_t n = cfg.plant == PlantKind::Actuator      ? 4
                          : cfg.plant == PlantKind::Unicycle    ? 3
                                                                : 2;
    if (r.has("initial_state")) {
        cfg.initial_state = r.list("initial_state");
    } else {
        cfg.initial_state = Vector(n, 0.0);
    }

    cfg.estimator_gain = matrix_from_keys(r, "estimator.lambda_diag", "estimator.lambda_full", n);
    cfg.estimator_weight = matrix_from_keys(r, "estimator.h_diag", "estimator.h_full", n);
    cfg.uncertainty_bound = r.number("estimator.delta_b", 0.0);
    cfg.rate_bound = r.number("estimator.delta_l", 0.0);

    cfg.unicycle.cbf_gain = r.number("barrier.alpha", cfg.unicycle.cbf_gain);
    cfg.alpha1 = r.number("barrier.alpha1", cfg.alpha1);
    cfg.alpha2 = r.number("barrier.alpha2", cfg.alpha2);
    cfg.sigma_v = r.number("iss.sigma_v", cfg.sigma_v);
    cfg.alpha_h = r.number("iss.alpha_h", cfg.alpha_h);

    cfg.unicycle.safe_distance = r.number("unicycle.safe_distance", cfg.unicycle.safe_distance);
    cfg.unicycle.heading_weight = r.number("unicycle.heading_weight", cfg.unicycle.heading_weight);
    cfg.unicycle.k_v = r.number("unicycle.k_v", cfg.unicycle.k_v);
    cfg.unicycle.k_omega = r.number("unicycle.k_omega", cfg.unicycle.k_omega);
    if (r.has("unicycle.goal")) {
        const Vector goal = r.list("unicycle.goal");
        if (goal.size() != 2) throw ConfigError("config key unicycle.goal must be x,y");
        cfg.unicycle.goal_x = goal[0];
        cfg.unicycle.goal_y = goal[1];
    }
    cfg.unicycle.v_max = r.number("unicycle.v_max", cfg.unicycle.v_max);
    cfg.unicycle.omega_max = r.number("unicycle.omega_max", cfg.unicycle.omega_max);

    cfg.slip.ramp_time = r.number("slip.ramp_time", 0.0);
    cfg.slip.slip_angle = slip_channel(r, "slip.beta");
    cfg.slip.yaw_rate = slip_channel(r, "slip.dtheta");
    cfg.slip.longitudinal = slip_channel(r, "slip.dxb");

    cfg.actuator.load_mass = r.number("actuator.load_mass", cfg.actuator.load_mass);
    cfg.actuator.gravity = r.number("actuator.gravity", cfg.actuator.gravity);
    cfg.actuator.load_inertia = r.number("actuator.load_inertia", cfg.actuator.load_inertia);
    cfg.actuator.motor_inertia = r.number("actuator.motor_inertia", cfg.actuator.motor_inertia);
    cfg.actuator.stiffness = r.number("actuator.stiffness", cfg.actuator.stiffness);
    cfg.actuator.eccentricity = r.number("actuator.eccentricity", cfg.actuator.eccentricity);
    cfg.actuator.u_max = r.number("actuator.u_max", cfg.actuator.u_max);
    cfg.actuator.c_q = r.number("actuator.c_q", cfg.actuator.c_q);
    cfg.actuator.lambda_v = r.number("actuator.lambda_v", cfg.actuator.lambda_v);
    cfg.actuator.x4_desired = r.number("actuator.x4_desired", cfg.actuator.x4_desired);

    cfg.synthetic.u_max = r.number("synthetic.u_max", cfg.synthetic.u_max);
    cfg.synthetic.k_desired = r.number("synthetic.k_desired", cfg.synthetic.k_desired);
    cfg.synthetic.disturbance_amp = r.number("synthetic.d_amp", cfg.synthetic.disturbance_amp);
    cfg.synthetic.disturbance_freq = r.number("synthetic.d_freq", cfg.synthetic.disturbance_freq);
    cfg.synthetic.disturbance_ramp = r.number("synthetic.d_ramp", cfg.synthetic.disturbance_ramp);

    r.finish();

    if (cfg.initial_state.size() != n)
        throw ConfigError("config key initial_state must have " + std::to_string(n) + " entries");
    return cfg;
}

std::vector<std::string> scenario_config_keys() {
    return {"plant",
            "filter",
            "uncertain_plant",
            "duration",
            "control_rate",
            "substeps",
            "compensate_matched",
            "allow_slack",
            "seed",
            "initial_state",
            "estimator.lambda_diag",
            "estimator.lambda_full",
            "estimator.h_diag",
            "estimator.h_full",
            "estimator.delta_b",
            "estimator.delta_l",
            "barrier.alpha",
            "barrier.alpha1",
            "barrier.alpha2",
            "iss.sigma_v",
            "iss.alpha_h",
            "unicycle.safe_distance",
            "unicycle.heading_weight",
            "unicycle.k_v",
            "unicycle.k_omega",
            "unicycle.goal",
            "unicycle.v_max",
            "unicycle.omega_max",
            "slip.ramp_time",
            "slip.beta.amp",
            "slip.beta.bias",
            "slip.beta.freq",
            "slip.dtheta.amp",
            "slip.dtheta.bias",
            "slip.dtheta.freq",
            "slip.dxb.amp",
            "slip.dxb.bias",
            "slip.dxb.freq",
            "actuator.load_mass",
            "actuator.gravity",
            "actuator.load_inertia",
            "actuator.motor_inertia",
            "actuator.stiffness",
            "actuator.eccentricity",
            "actuator.u_max",
            "actuator.c_q",
            "actuator.lambda_v",
            "actuator.x4_desired",
            "synthetic.u_max",
            "synthetic.k_desired",
            "synthetic.d_amp",
            "synthetic.d_freq",
            "synthetic.d_ramp"};
}

} // namespace rcbf
