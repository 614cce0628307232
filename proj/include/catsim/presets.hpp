// presets.hpp - named runs for the standard parameter sets.
//
// Common base: omega_r = 200, xi = 1.5271, n0 = 1 and omega_0 solved so that
// delta = g. Open-system presets keep the unlisted rates and occupations at 0.

#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "catsim/config.hpp"

namespace catsim::cli {

struct Preset {
    std::string name;
    std::string description;
    RunConfig config;
};

namespace detail {

using Values = std::vector<std::pair<const char*, double>>;

inline RunConfig base(Engine engine, std::vector<std::string> observables) {
    RunConfig c;
    c.engine = engine;
    c.system.omega_r = 200.0;
    c.system.xi = 1.5271;
    c.detuning_ratio = 1.0;
    c.harmonic = 1;
    c.observables = std::move(observables);
    return c;
}

inline RunConfig with_sweep(RunConfig c, const std::string& name, const std::string& values) {
    set_axis(c, make_axis(name, values));
    return c;
}

inline RunConfig with(RunConfig c, const Values& values) {
    for (const auto& [k, v] : values) set_parameter(c, k, v);
    return c;
}

inline RunConfig at_peak(RunConfig c) {
    c.t_end_at_peak = true;
    return c;
}

inline std::vector<Preset> build_presets() {
    std::vector<Preset> ps;
    auto add = [&](std::string name, std::string description, RunConfig c) {
        c.preset = name;
        ps.push_back({std::move(name), std::move(description), std::move(c)});
    };
    const std::string w_sweep = "30, 50, 200";

    RunConfig fig2 = base(Engine::analytic, {"entanglement"});
    fig2.t_end = 26.0;
    add("fig2", "entropy S and log-negativity N of the RWA state over g0 t in [0, 26]", fig2);

    add("fig3a", "mean excitation, full Hamiltonian vs RWA, omega_r in {30, 50, 200}",
        with_sweep(base(Engine::closed, {"excitation"}), "omega_r", w_sweep));
    add("fig3b", "fidelity f(t) against the RWA state, omega_r in {30, 50, 200}",
        with_sweep(base(Engine::closed, {"rwa_fidelity"}), "omega_r", w_sweep));
    {
        std::ostringstream ws;
        for (int w = 20; w <= 200; w += 2) ws << (w > 20 ? ", " : "") << w;
        RunConfig c = at_peak(with_sweep(base(Engine::closed, {"rwa_fidelity"}), "omega_r", ws.str()));
        c.trajectories = false;
        add("fig3c", "fidelity f(t_s) against the RWA state vs omega_r in [20, 200] (summary.csv)", c);
    }
    add("fig4", "cat fidelities f+ and f- of the conditioned oscillator states, omega_r in {30, 50, 200}",
        with_sweep(base(Engine::closed, {"cat_fidelity"}), "omega_r", w_sweep));
    add("fig5", "qubit detection probabilities p+/-, numerical and RWA, omega_r in {30, 50, 200}",
        with_sweep(base(Engine::closed, {"probabilities"}), "omega_r", w_sweep));
    add("fig6", "Wigner functions and rotated-quadrature distributions of the conditioned states at t_s",
        at_peak(base(Engine::closed, {"wigner", "quadrature"})));

    // Logarithmic negativity with dissipation.
    auto neg = [&](Values fixed, const char* axis,
                   const char* values) {
        RunConfig c = with(base(Engine::open, {"negativity"}), fixed);
        c.t_end = 26.0;
        return with_sweep(c, axis, values);
    };
    add("fig7a", "log-negativity, kappa_r = 0.001, gamma_q in {0.01, 0.05, 0.1}",
        neg({{"kappa_r", 0.001}}, "gamma_q", "0.01, 0.05, 0.1"));
    add("fig7b", "log-negativity, gamma_q = 0.01, kappa_r in {0.001, 0.005, 0.01}",
        neg({{"gamma_q", 0.01}}, "kappa_r", "0.001, 0.005, 0.01"));
    add("fig7c", "log-negativity, kappa_r = 0.001, gamma_q = 0.01, nbar_q in {1, 3, 5}",
        neg({{"kappa_r", 0.001}, {"gamma_q", 0.01}}, "nbar_q", "1, 3, 5"));
    add("fig7d", "log-negativity, kappa_r = 0.001, gamma_q = 0.01, nbar_r in {1, 3, 5}",
        neg({{"kappa_r", 0.001}, {"gamma_q", 0.01}}, "nbar_r", "1, 3, 5"));

    // Cat fidelities and detection probabilities with dissipation.
    auto fid = [&](const char* observable, Values fixed,
                   const char* axis, const char* values) {
        return with_sweep(with(base(Engine::open, {observable}), fixed), axis, values);
    };
    add("fig8a", "cat fidelities F+/-, kappa_r = 0.001, gamma_q in {0.01, 0.05, 0.1}",
        fid("cat_fidelity", {{"kappa_r", 0.001}}, "gamma_q", "0.01, 0.05, 0.1"));
    add("fig8b", "probabilities P+/-, kappa_r = 0.001, gamma_q in {0.01, 0.05, 0.1}",
        fid("probabilities", {{"kappa_r", 0.001}}, "gamma_q", "0.01, 0.05, 0.1"));
    add("fig8c", "cat fidelities F+/-, kappa_r = 0.001, gamma_q = 0.01, nbar_q in {1, 5, 8}",
        fid("cat_fidelity", {{"kappa_r", 0.001}, {"gamma_q", 0.01}}, "nbar_q", "1, 5, 8"));
    add("fig8d", "probabilities P+/-, kappa_r = 0.001, gamma_q = 0.01, nbar_q in {1, 5, 8}",
        fid("probabilities", {{"kappa_r", 0.001}, {"gamma_q", 0.01}}, "nbar_q", "1, 5, 8"));
    add("fig9a", "cat fidelities F+/-, gamma_q = 0.01, kappa_r in {0.001, 0.005, 0.01}",
        fid("cat_fidelity", {{"gamma_q", 0.01}}, "kappa_r", "0.001, 0.005, 0.01"));
    add("fig9b", "probabilities P+/-, gamma_q = 0.01, kappa_r in {0.001, 0.005, 0.01}",
        fid("probabilities", {{"gamma_q", 0.01}}, "kappa_r", "0.001, 0.005, 0.01"));
    add("fig9c", "cat fidelities F+/-, gamma_q = 0.01, kappa_r = 0.001, nbar_r in {1, 5, 8}",
        fid("cat_fidelity", {{"gamma_q", 0.01}, {"kappa_r", 0.001}}, "nbar_r", "1, 5, 8"));
    add("fig9d", "probabilities P+/-, gamma_q = 0.01, kappa_r = 0.001, nbar_r in {1, 5, 8}",
        fid("probabilities", {{"gamma_q", 0.01}, {"kappa_r", 0.001}}, "nbar_r", "1, 5, 8"));

    // Wigner function W+ of the conditioned state at t_s, one panel each.
    struct Panel {
        const char* suffix;
        Values values;
    };
    const std::vector<Panel> fig10{
        {"a", {{"kappa_r", 0.02}, {"gamma_q", 0.01}}}, {"b", {{"kappa_r", 0.02}, {"gamma_q", 0.1}}},
        {"c", {{"kappa_r", 0.02}, {"gamma_q", 0.5}}},  {"d", {{"kappa_r", 0.02}, {"gamma_q", 0.1}, {"nbar_q", 1}}},
        {"e", {{"kappa_r", 0.02}, {"gamma_q", 0.1}, {"nbar_q", 4}}},
        {"f", {{"kappa_r", 0.02}, {"gamma_q", 0.1}, {"nbar_q", 6}}},
        {"g", {{"gamma_q", 0.1}, {"kappa_r", 0.01}}}, {"h", {{"gamma_q", 0.1}, {"kappa_r", 0.05}}},
        {"i", {{"gamma_q", 0.1}, {"kappa_r", 0.1}}},
        {"j", {{"gamma_q", 0.1}, {"kappa_r", 0.02}, {"nbar_r", 1}}},
        {"k", {{"gamma_q", 0.1}, {"kappa_r", 0.02}, {"nbar_r", 3}}},
        {"l", {{"gamma_q", 0.1}, {"kappa_r", 0.02}, {"nbar_r", 5}}},
    };
    for (const auto& panel : fig10) {
        const RunConfig c = at_peak(with(base(Engine::open, {"wigner"}), panel.values));
        std::ostringstream d;
        d << "Wigner function of the + conditioned state at t_s:";
        for (const auto& [k, v] : panel.values) d << " " << k << " = " << v;
        add(std::string("fig10") + panel.suffix, d.str(), c);
    }

    // Quadrature distribution P+[X(theta_0)] at t_s.
    auto quad = [&](Values fixed, const char* axis,
                    const char* values) {
        return at_peak(with_sweep(with(base(Engine::open, {"quadrature"}), fixed), axis, values));
    };
    add("fig11a", "quadrature distribution at t_s, kappa_r = 0.001, gamma_q in {0.01, 0.1, 0.2, 0.5}",
        quad({{"kappa_r", 0.001}}, "gamma_q", "0.01, 0.1, 0.2, 0.5"));
    add("fig11b", "quadrature distribution at t_s, gamma_q = 0.1, kappa_r in {0.001, 0.01, 0.02, 0.05}",
        quad({{"gamma_q", 0.1}}, "kappa_r", "0.001, 0.01, 0.02, 0.05"));
    add("fig11c", "quadrature distribution at t_s, kappa_r = 0.001, gamma_q = 0.01, nbar_q in {1, 4, 8, 12}",
        quad({{"kappa_r", 0.001}, {"gamma_q", 0.01}}, "nbar_q", "1, 4, 8, 12"));
    add("fig11d", "quadrature distribution at t_s, gamma_q = 0.1, kappa_r = 0.01, nbar_r in {1, 2, 3, 5}",
        quad({{"gamma_q", 0.1}, {"kappa_r", 0.01}}, "nbar_r", "1, 2, 3, 5"));

    // Transmon coupled to a nanomechanical resonator, in units of
    // g0 = 2 pi x 2.3 MHz: omega_r = 2 pi x 58 MHz -> 58 / 2.3,
    // kappa_r = 2 pi x 1.934 kHz -> 1.934e-3 / 2.3, qubit lifetime
    // 100 us -> gamma_q = 1 / (100 us x 2 pi x 2.3 MHz), about 10 thermal phonons.
    {
        RunConfig c = base(Engine::open, {"cat_fidelity", "probabilities", "negativity"});
        c.system.omega_r = 58.0 / 2.3;
        c.system.kappa_r = 1.934e-3 / 2.3;
        c.system.gamma_q = 1.0 / (100e-6 * 2.0 * kPi * 2.3e6);
        c.system.nbar_r = 10.0;
        add("experiment",
            "transmon + nanomechanical resonator: omega_r = 2pi x 58 MHz, g0 = 2pi x 2.3 MHz, "
            "kappa_r = 2pi x 1.934 kHz, T1 = 100 us, nbar_r = 10",
            c);
    }

    std::stable_sort(ps.begin(), ps.end(), [](const Preset& a, const Preset& b) { return a.name < b.name; });
    return ps;
}

}  // namespace detail

/// All presets, sorted by name.
inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> ps = detail::build_presets();
    return ps;
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    return names;
}

inline RunConfig preset_config(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p.config;
    }
    throw UsageError("unknown preset '" + name + "' (valid: " + detail::join(preset_names()) + ")");
}

}  // namespace catsim::cli
