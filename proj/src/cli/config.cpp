#include "ki/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ki::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void invalid(const std::string& key, const std::string& value, const std::string& why) {
    throw ConfigError("invalid value '" + value + "' for key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
        invalid(key, value, "expected a number");
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        invalid(key, value, "expected a non-negative integer");
    }
    return out;
}

double positive(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (!(v > 0.0)) invalid(key, value, "must be positive");
    return v;
}

std::size_t at_least(const std::string& key, const std::string& value, std::uint64_t lo) {
    const auto v = to_uint(key, value);
    if (v < lo) invalid(key, value, "must be at least " + std::to_string(lo));
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    invalid(key, value, "expected true or false");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"problem.name",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const std::string name = trim(v);
             if (name != "exp_sin" && name != "lorenz96" && name != "darcy" && name != "linear") {
                 invalid(k, v, "expected exp_sin, lorenz96, darcy or linear");
             }
             c.problem = name;
         }},
        {"problem.sigma", [](RunConfig& c, const std::string& k, const std::string& v) { c.sigma = positive(k, v); }},

        {"exp_sin.quadrature_points",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.exp_sin.quadrature_points = at_least(k, v, 2); }},

        {"lorenz96.dimension",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.lorenz96.dimension = at_least(k, v, 4); }},
        {"lorenz96.forcing",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.lorenz96.forcing = to_double(k, v); }},
        {"lorenz96.rk4_dt",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.lorenz96.dt = positive(k, v); }},
        {"lorenz96.steps",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.lorenz96.steps = at_least(k, v, 1); }},
        {"lorenz96.spinup_time",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const double t = to_double(k, v);
             if (t < 0.0) invalid(k, v, "must be non-negative");
             c.lorenz96.spinup_time = t;
         }},
        {"lorenz96.truth_seed",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.lorenz96.truth_seed = to_uint(k, v); }},

        {"darcy.grid_n",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.grid_n = at_least(k, v, 2); }},
        {"darcy.kl_dim",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.kl_dim = at_least(k, v, 1); }},
        {"darcy.kl_grid_n",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.kl_grid_n = to_uint(k, v); }},
        {"darcy.smoothness",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.smoothness = positive(k, v); }},
        {"darcy.length",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.length = positive(k, v); }},
        {"darcy.source",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.source = to_double(k, v); }},
        {"darcy.obs_stride",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.model.obs_stride = at_least(k, v, 1); }},
        {"darcy.truth_value",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.truth_value = to_double(k, v); }},
        {"darcy.sigma_fraction",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.darcy.sigma_fraction = positive(k, v); }},

        {"linear.input_dim",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.linear.input_dim = at_least(k, v, 1); }},
        {"linear.output_dim",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.linear.output_dim = at_least(k, v, 1); }},
        {"linear.matrix_seed",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.linear.matrix_seed = to_uint(k, v); }},

        {"experiment.algorithms",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.algorithms.clear();
             for (const auto& item : split_list(v)) {
                 try {
                     c.algorithms.push_back(parse_algorithm(item));
                 } catch (const std::invalid_argument& e) {
                     invalid(k, v, e.what());
                 }
             }
             if (c.algorithms.empty()) invalid(k, v, "empty list");
         }},
        {"experiment.schedules",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.schedules.clear();
             for (const auto& item : split_list(v)) {
                 try {
                     c.schedules.push_back(parse_schedule(item));
                 } catch (const std::invalid_argument& e) {
                     invalid(k, v, e.what());
                 }
             }
             if (c.schedules.empty()) invalid(k, v, "empty list");
         }},
        {"experiment.n_trials",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.n_trials = at_least(k, v, 1); }},
        {"experiment.iterations",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.iterations = at_least(k, v, 1); }},
        {"experiment.ensemble_size",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.ensemble_size = at_least(k, v, 2); }},
        {"experiment.dt",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.dt.clear();
             for (const auto& item : split_list(v)) c.dt.push_back(positive(k, item));
             if (c.dt.empty()) invalid(k, v, "empty list");
         }},
        {"experiment.uki_alpha",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const double a = to_double(k, v);
             if (!(a > 0.0 && a <= 1.0)) invalid(k, v, "must lie in (0, 1]");
             c.uki_alpha = a;
         }},
        {"experiment.base_seed",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.base_seed = to_uint(k, v); }},
        {"experiment.output",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (trim(v).empty()) invalid(k, v, "empty path");
             c.output = trim(v);
         }},
        {"experiment.threads",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = to_uint(k, v); }},
        {"experiment.header_comment",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.header_comment = to_bool(k, v); }},

        {"sweep.ensemble_size",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.sweep_ensemble_size.clear();
             for (const auto& item : split_list(v)) c.sweep_ensemble_size.push_back(at_least(k, item, 2));
             if (c.sweep_ensemble_size.empty()) invalid(k, v, "empty list");
         }},
        {"sweep.dt",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.sweep_dt.clear();
             for (const auto& item : split_list(v)) c.sweep_dt.push_back(positive(k, item));
             if (c.sweep_dt.empty()) invalid(k, v, "empty list");
         }},
        {"sweep.schedule",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.sweep_schedule.clear();
             for (const auto& item : split_list(v)) {
                 try {
                     c.sweep_schedule.push_back(parse_schedule(item));
                 } catch (const std::invalid_argument& e) {
                     invalid(k, v, e.what());
                 }
             }
             if (c.sweep_schedule.empty()) invalid(k, v, "empty list");
         }},
    };
    return table;
}

void apply(RunConfig& config, const std::string& key, const std::string& value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
    it->second(config, key, value);
}

RunConfig from_tree(const pt::ptree& tree, const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig config;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            if (body.data().empty()) continue;  // empty [section]
            throw ConfigError("unknown configuration key '" + section + "' (keys must sit inside a [section])");
        }
        for (const auto& [key, value] : body) {
            apply(config, section + "." + key, value.data());
        }
    }
    for (const auto& [key, value] : overrides) {
        apply(config, key, value);
    }
    return config;
}

pt::ptree read_ini(std::istream& in, const std::string& origin) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& text) {
    if (text == "ensemble_size") return SweepAxis::EnsembleSize;
    if (text == "dt") return SweepAxis::Dt;
    if (text == "schedule") return SweepAxis::Schedule;
    throw ConfigError("unknown sweep axis '" + text + "' (expected ensemble_size, dt or schedule)");
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::EnsembleSize: return "ensemble_size";
        case SweepAxis::Dt: return "dt";
        case SweepAxis::Schedule: return "schedule";
    }
    return "unknown";
}

RunConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
    if (path.empty()) {
        return from_tree(pt::ptree{}, overrides);
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return from_tree(read_ini(in, path), overrides);
}

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::istringstream in(text);
    return from_tree(read_ini(in, "<config>"), overrides);
}

std::vector<std::string> known_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) keys.push_back(k);
    return keys;
}

ProblemSetup build_setup(const RunConfig& config) {
    if (config.problem == "exp_sin") {
        ExpSinOptions o = config.exp_sin;
        if (config.sigma) o.sigma = *config.sigma;
        return make_exp_sin_setup(o);
    }
    if (config.problem == "lorenz96") {
        Lorenz96Options o = config.lorenz96;
        if (config.sigma) o.sigma = *config.sigma;
        return make_lorenz96_setup(o);
    }
    if (config.problem == "darcy") {
        return make_darcy_setup(config.darcy);
    }
    if (config.problem == "linear") {
        LinearOptions o = config.linear;
        if (config.sigma) o.sigma = *config.sigma;
        return make_linear_setup(o);
    }
    throw ConfigError("unknown problem '" + config.problem + "'");
}

std::vector<CellSpec> run_grid(const RunConfig& config) {
    std::vector<CellSpec> grid;
    for (const auto algorithm : config.algorithms) {
        for (const double dt : config.dt) {
            for (const auto& schedule : config.schedules) {
                grid.push_back(CellSpec{algorithm, schedule, config.ensemble_size, config.iterations, dt,
                                        config.uki_alpha});
            }
        }
    }
    return grid;
}

std::vector<CellSpec> sweep_grid(const RunConfig& config, SweepAxis axis) {
    std::vector<CellSpec> grid;
    const double dt0 = config.dt.front();
    for (const auto algorithm : config.algorithms) {
        switch (axis) {
            case SweepAxis::EnsembleSize:
                for (const auto n : config.sweep_ensemble_size) {
                    for (const auto& s : config.schedules) {
                        grid.push_back(CellSpec{algorithm, s, n, config.iterations, dt0, config.uki_alpha});
                    }
                }
                break;
            case SweepAxis::Dt:
                for (const double dt : config.sweep_dt) {
                    for (const auto& s : config.schedules) {
                        grid.push_back(
                            CellSpec{algorithm, s, config.ensemble_size, config.iterations, dt, config.uki_alpha});
                    }
                }
                break;
            case SweepAxis::Schedule:
                for (const auto& s : config.sweep_schedule) {
                    grid.push_back(
                        CellSpec{algorithm, s, config.ensemble_size, config.iterations, dt0, config.uki_alpha});
                }
                break;
        }
    }
    return grid;
}

}  // namespace ki::cli
