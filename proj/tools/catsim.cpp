// catsim - command-line driver.
//
//   catsim simulate --preset NAME | --config FILE [--sweep k=v1,v2,...] [--out DIR]
//                   [--workers N] [--step S] [--truncation N_D]
//   catsim list-presets
//
// Exit codes: 0 success, 2 usage error, 3 numeric-invariant violation.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catsim/presets.hpp"
#include "catsim/runner.hpp"

namespace {

using namespace catsim;

void print_presets() {
    for (const auto& p : cli::presets()) {
        const auto points = cli::plan_points(p.config);
        const auto& first = points.front();
        std::cout << p.name << "\n  " << p.description << "\n  engine=" << cli::to_string(p.config.engine)
                  << " observables=" << cli::detail::join(cli::effective_observables(p.config), ",")
                  << " t_end=" << (p.config.t_end_at_peak ? std::string("ts") : cli::format_number(p.config.t_end))
                  << "\n";
        const auto& s = first.params;
        std::cout << "  omega_r=" << s.omega_r << " omega_0=" << cli::format_number(s.omega_0) << " xi=" << s.xi
                  << " gamma_q=" << s.gamma_q << " kappa_r=" << s.kappa_r << " nbar_q=" << s.nbar_q
                  << " nbar_r=" << s.nbar_r << " n_d=" << first.n_d << "\n";
        std::cout << "  n_0=" << first.eff.n_0 << " delta=" << first.eff.delta << " g=" << first.eff.g
                  << " t_s=" << first.eff.t_peak << (first.eff.delta_negative() ? " (delta < 0)" : "") << "\n";
        for (const auto& a : p.config.sweep) {
            std::cout << "  sweep " << a.name << " = " << cli::detail::join(a.labels) << "\n";
        }
    }
}

int simulate(const std::string& preset, const std::string& config, const cli::Overrides& overrides) {
    cli::RunConfig cfg = preset.empty() ? cli::load_config(config, &cli::preset_config) : cli::preset_config(preset);
    cli::apply_overrides(cfg, overrides);
    const cli::RunReport report = cli::run(cfg);
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& pt = report.points[i];
        const auto& o = report.outcomes[i];
        std::cerr << cli::to_string(o.status) << "  " << (pt.label.empty() ? "." : pt.label) << "  n_d=" << pt.n_d;
        if (!o.message.empty()) std::cerr << "  " << o.message;
        std::cerr << "\n";
    }
    std::cerr << "wrote " << (report.out_dir / "manifest.json").string() << (report.partial() ? " (partial)" : "")
              << "\n";
    return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schroedinger-cat generation in a driven qubit-oscillator system"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "run a preset or a config file");
    std::string preset, config;
    cli::Overrides ov;
    auto* p_opt = sim->add_option("--preset", preset, "preset name (see list-presets)");
    auto* c_opt = sim->add_option("--config", config, "key-value config file")->check(CLI::ExistingFile);
    p_opt->excludes(c_opt);
    sim->add_option("--sweep", ov.sweep, "sweep axis name=v1,v2,... (repeatable)")->take_all();
    sim->add_option("--out", ov.out_dir, "output directory");
    sim->add_option("--workers", ov.workers, "parallel sweep points")->check(CLI::PositiveNumber);
    sim->add_option("--step", ov.step, "largest integration step in 1/g0")->check(CLI::PositiveNumber);
    sim->add_option("--truncation", ov.truncation, "highest Fock level n_d")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list-presets", "print the preset catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*list) {
            print_presets();
            return 0;
        }
        if (preset.empty() && config.empty()) {
            std::cerr << "simulate: one of --preset or --config is required\n";
            return 2;
        }
        return simulate(preset, config, ov);
    } catch (const cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
