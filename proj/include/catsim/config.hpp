// config.hpp - run configuration for the command-line driver and its
// key-value file format.
//
//   preset = fig8a            ; optional, start from a preset
//   [system]      omega_r, xi, gamma_q, ... , coupling, detuning_ratio, harmonic
//   [integrator]  engine, method, step, truncation, t_end, sample_interval, positivity_stride
//   [sweep]       <parameter> = v1, v2, ...
//   [output]      dir, workers, observables, trajectories, wigner_*, quadrature_*

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "catsim/closed.hpp"
#include "catsim/model.hpp"
#include "catsim/tomography.hpp"

namespace catsim::cli {

/// Bad preset, key, value or flag. Maps to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Engine { analytic, closed, open };

inline std::string to_string(Engine e) {
    switch (e) {
        case Engine::analytic: return "analytic";
        case Engine::closed: return "closed";
        case Engine::open: return "open";
    }
    return "unknown";
}

inline Engine engine_from_string(const std::string& s) {
    if (s == "analytic") return Engine::analytic;
    if (s == "closed") return Engine::closed;
    if (s == "open") return Engine::open;
    throw UsageError("unknown engine '" + s + "' (valid: analytic, closed, open)");
}

/// Observables each engine can write; the order here is the file order.
inline const std::vector<std::string>& valid_observables(Engine e) {
    static const std::vector<std::string> analytic{"entanglement", "alpha", "probabilities"};
    static const std::vector<std::string> closed{"excitation", "rwa_fidelity", "probabilities",
                                                 "cat_fidelity", "wigner", "quadrature"};
    static const std::vector<std::string> open{"excitation", "negativity", "probabilities", "cat_fidelity",
                                               "invariants", "wigner", "quadrature"};
    switch (e) {
        case Engine::analytic: return analytic;
        case Engine::closed: return closed;
        case Engine::open: return open;
    }
    return closed;
}

/// Parameters that may be swept or set in [system].
inline const std::vector<std::string>& sweepable_parameters() {
    static const std::vector<std::string> names{"omega_q", "omega_r", "omega_0", "xi",     "g_0",
                                                "gamma_q", "kappa_r", "nbar_q",  "nbar_r", "detuning_ratio"};
    return names;
}

struct SweepAxis {
    std::string name;
    std::vector<std::string> labels;  // values as written, used in directory names
    std::vector<double> values;
};

struct RunConfig {
    std::string preset;
    Engine engine = Engine::closed;
    model::SystemParams system;
    // When set, omega_0 is re-solved for every sweep point so that
    // delta / g = detuning_ratio at harmonic index n0 = harmonic.
    std::optional<double> detuning_ratio = 1.0;
    int harmonic = 1;

    closed::Method method = closed::Method::drive_frame_rk4;
    double step = 0.0;    // largest allowed step; 0 selects the default
    int truncation = -1;  // -1 selects 14 (closed) or 14 + ceil(6 nbar_r) (open)
    double t_end = 13.0;
    bool t_end_at_peak = false;  // t_end = t_s of each point
    double sample_interval = 0.01;
    int positivity_stride = 10;

    std::vector<std::string> observables;
    std::vector<SweepAxis> sweep;
    std::string out_dir = "out";
    int workers = 1;
    bool trajectories = true;
    tomography::GridSpec wigner_grid;
    double quadrature_min = -6.0;
    double quadrature_max = 6.0;
    double quadrature_spacing = 0.01;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

}  // namespace detail

inline double parse_number(const std::string& text, const std::string& key) {
    const std::string s = detail::trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("'" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

inline int parse_int(const std::string& text, const std::string& key) {
    const std::string s = detail::trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("'" + key + "': expected an integer, got '" + text + "'");
    }
    return v;
}

inline bool parse_bool(const std::string& text, const std::string& key) {
    const std::string s = detail::trim(text);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw UsageError("'" + key + "': expected true or false, got '" + text + "'");
}

inline std::vector<std::string> parse_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline SweepAxis make_axis(const std::string& name, const std::string& list) {
    const auto& names = sweepable_parameters();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw UsageError("cannot sweep '" + name + "' (valid: " + detail::join(names) + ")");
    }
    SweepAxis axis{name, parse_list(list), {}};
    if (axis.labels.empty()) throw UsageError("sweep axis '" + name + "' has no values");
    for (const auto& l : axis.labels) axis.values.push_back(parse_number(l, name));
    return axis;
}

/// "name=v1,v2,..." as given on the command line.
inline SweepAxis parse_sweep_flag(const std::string& flag) {
    const auto eq = flag.find('=');
    if (eq == std::string::npos) throw UsageError("--sweep expects name=v1,v2,...; got '" + flag + "'");
    return make_axis(detail::trim(flag.substr(0, eq)), flag.substr(eq + 1));
}

/// Replace an axis of the same name or append a new one.
inline void set_axis(RunConfig& cfg, SweepAxis axis) {
    for (auto& a : cfg.sweep) {
        if (a.name == axis.name) {
            a = std::move(axis);
            return;
        }
    }
    cfg.sweep.push_back(std::move(axis));
}

/// Sets one system parameter by name.
inline void set_parameter(RunConfig& cfg, const std::string& name, double v) {
    auto& p = cfg.system;
    if (name == "omega_q") p.omega_q = v;
    else if (name == "omega_r") p.omega_r = v;
    else if (name == "omega_0") p.omega_0 = v;
    else if (name == "xi") p.xi = v;
    else if (name == "g_0") p.g_0 = v;
    else if (name == "gamma_q") p.gamma_q = v;
    else if (name == "kappa_r") p.kappa_r = v;
    else if (name == "nbar_q") p.nbar_q = v;
    else if (name == "nbar_r") p.nbar_r = v;
    else if (name == "detuning_ratio") cfg.detuning_ratio = v;
    else throw UsageError("unknown parameter '" + name + "' (valid: " + detail::join(sweepable_parameters()) + ")");
}

inline void check_observables(const RunConfig& cfg) {
    const auto& valid = valid_observables(cfg.engine);
    for (const auto& o : cfg.observables) {
        if (std::find(valid.begin(), valid.end(), o) == valid.end()) {
            throw UsageError("observable '" + o + "' is not available for the " + to_string(cfg.engine) +
                             " engine (valid: " + detail::join(valid) + ")");
        }
    }
}

using PresetLookup = RunConfig (*)(const std::string&);

namespace detail {

inline void apply_system(RunConfig& cfg, const boost::property_tree::ptree& sec) {
    bool omega_0_given = false, ratio_given = false;
    for (const auto& [key, node] : sec) {
        const std::string v = node.data();
        if (key == "coupling") {
            try {
                cfg.system.coupling = model::coupling_from_string(trim(v));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        } else if (key == "harmonic") {
            cfg.harmonic = parse_int(v, key);
        } else if (key == "detuning_ratio" && trim(v) == "none") {
            cfg.detuning_ratio.reset();
            ratio_given = true;
        } else {
            set_parameter(cfg, key, parse_number(v, key));
            omega_0_given |= key == "omega_0";
            ratio_given |= key == "detuning_ratio";
        }
    }
    // An explicit drive frequency wins unless a ratio is also given.
    if (omega_0_given && !ratio_given) cfg.detuning_ratio.reset();
}

inline void apply_integrator(RunConfig& cfg, const boost::property_tree::ptree& sec) {
    for (const auto& [key, node] : sec) {
        const std::string v = trim(node.data());
        if (key == "engine") cfg.engine = engine_from_string(v);
        else if (key == "method") {
            try {
                cfg.method = closed::method_from_string(v);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        } else if (key == "step") cfg.step = parse_number(v, key);
        else if (key == "truncation") cfg.truncation = (v == "auto") ? -1 : parse_int(v, key);
        else if (key == "t_end") {
            cfg.t_end_at_peak = (v == "ts");
            if (!cfg.t_end_at_peak) cfg.t_end = parse_number(v, key);
        } else if (key == "sample_interval") cfg.sample_interval = parse_number(v, key);
        else if (key == "positivity_stride") cfg.positivity_stride = parse_int(v, key);
        else throw UsageError("unknown key '" + key + "' in [integrator]");
    }
}

inline void apply_output(RunConfig& cfg, const boost::property_tree::ptree& sec) {
    auto range = [](const std::string& v, const std::string& key) {
        const auto xs = parse_list(v);
        if (xs.size() != 2) throw UsageError("'" + key + "': expected two numbers lo, hi");
        return std::pair{parse_number(xs[0], key), parse_number(xs[1], key)};
    };
    for (const auto& [key, node] : sec) {
        const std::string v = trim(node.data());
        if (key == "dir") cfg.out_dir = v;
        else if (key == "workers") cfg.workers = parse_int(v, key);
        else if (key == "observables") cfg.observables = parse_list(v);
        else if (key == "trajectories") cfg.trajectories = parse_bool(v, key);
        else if (key == "wigner_resolution") cfg.wigner_grid.resolution = parse_int(v, key);
        else if (key == "wigner_re_range") std::tie(cfg.wigner_grid.re_min, cfg.wigner_grid.re_max) = range(v, key);
        else if (key == "wigner_im_range") std::tie(cfg.wigner_grid.im_min, cfg.wigner_grid.im_max) = range(v, key);
        else if (key == "quadrature_range") std::tie(cfg.quadrature_min, cfg.quadrature_max) = range(v, key);
        else if (key == "quadrature_spacing") cfg.quadrature_spacing = parse_number(v, key);
        else throw UsageError("unknown key '" + key + "' in [output]");
    }
}

}  // namespace detail

/// Parses the key-value format. `lookup` resolves an optional top-level
/// `preset = NAME` used as the starting point.
inline RunConfig parse_config(std::istream& in, PresetLookup lookup = nullptr) {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::ini_parser::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    if (auto base = pt.get_optional<std::string>("preset"); base && pt.get_child("preset").empty()) {
        if (!lookup) throw UsageError("config: 'preset' is not supported here");
        cfg = lookup(detail::trim(*base));
    }
    for (const auto& [section, node] : pt) {
        const bool known = section == "system" || section == "integrator" || section == "sweep" || section == "output";
        if (node.empty() && !(known && node.data().empty())) {
            if (section != "preset") throw UsageError("config: unknown top-level key '" + section + "'");
            continue;
        }
        if (section == "system") detail::apply_system(cfg, node);
        else if (section == "integrator") detail::apply_integrator(cfg, node);
        else if (section == "sweep") {
            for (const auto& [key, v] : node) set_axis(cfg, make_axis(key, v.data()));
        } else if (section == "output") detail::apply_output(cfg, node);
        else throw UsageError("config: unknown section [" + section + "] (valid: system, integrator, sweep, output)");
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path, PresetLookup lookup = nullptr) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    return parse_config(in, lookup);
}

/// Settings the command line may override on top of a preset or file.
struct Overrides {
    std::vector<std::string> sweep;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    std::optional<double> step;
    std::optional<int> truncation;
};

inline void apply_overrides(RunConfig& cfg, const Overrides& o) {
    for (const auto& s : o.sweep) set_axis(cfg, parse_sweep_flag(s));
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.workers) cfg.workers = *o.workers;
    if (o.step) cfg.step = *o.step;
    if (o.truncation) cfg.truncation = *o.truncation;
}

}  // namespace catsim::cli
