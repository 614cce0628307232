// runner.hpp - executes a RunConfig: one trajectory per sweep point, CSV
// files per observable, a summary table at t_s and a JSON manifest.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "catsim/analytic.hpp"
#include "catsim/closed.hpp"
#include "catsim/config.hpp"
#include "catsim/open.hpp"
#include "catsim/tomography.hpp"

namespace catsim::cli {

inline constexpr const char* kVersion = "1.0.0";

namespace fs = std::filesystem;

/// %.17g, and "nan" for undefined values.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::vector<std::string>& header) : out_(path), width_(header.size()) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        line(header);
    }

    void row(const std::vector<double>& values) {
        if (values.size() != width_) throw std::logic_error("csv row width mismatch");
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(format_number(v));
        line(cells);
    }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t width_;
};

struct PointPlan {
    std::size_t index = 0;
    std::vector<double> coords;  // one per sweep axis
    model::SystemParams params;
    model::EffectiveParams eff;
    std::optional<analytic::RwaSolution> sol;  // absent for the Jaynes-Cummings variant
    int n_d = 14;
    double t_end = 0.0;
    std::string label;  // sub-directory; empty without a sweep
};

struct PointOutcome {
    enum class Status { ok, invariant_violation, error } status = Status::ok;
    std::string message;
    std::vector<std::string> files;
    std::vector<std::pair<std::string, double>> summary;
    nlohmann::ordered_json integrator;  // resolved step, stride, diagnostics
};

inline std::string to_string(PointOutcome::Status s) {
    switch (s) {
        case PointOutcome::Status::ok: return "ok";
        case PointOutcome::Status::invariant_violation: return "invariant_violation";
        case PointOutcome::Status::error: return "error";
    }
    return "unknown";
}

struct RunReport {
    fs::path out_dir;
    std::vector<PointPlan> points;
    std::vector<PointOutcome> outcomes;

    bool partial() const {
        return std::any_of(outcomes.begin(), outcomes.end(),
                           [](const PointOutcome& o) { return o.status != PointOutcome::Status::ok; });
    }
    /// 0 success, 3 numeric-invariant violation, 1 any other failure.
    int exit_code() const {
        int code = 0;
        for (const auto& o : outcomes) {
            if (o.status == PointOutcome::Status::invariant_violation) return 3;
            if (o.status == PointOutcome::Status::error) code = 1;
        }
        return code;
    }
};

namespace detail {

inline bool wants(const RunConfig& cfg, const char* observable) {
    return std::find(cfg.observables.begin(), cfg.observables.end(), observable) != cfg.observables.end();
}

/// Observables that compare against the analytic RWA solution.
inline bool needs_rwa(const RunConfig& cfg) {
    if (cfg.engine == Engine::analytic) return true;
    for (const char* o : {"rwa_fidelity", "cat_fidelity", "quadrature"}) {
        if (wants(cfg, o)) return true;
    }
    return cfg.engine == Engine::closed && (wants(cfg, "excitation") || wants(cfg, "probabilities"));
}

inline std::string point_label(const RunConfig& cfg, std::size_t index, const std::vector<std::size_t>& digits) {
    if (cfg.sweep.empty()) return "";
    char head[32];
    std::snprintf(head, sizeof head, "p%03zu", index);
    std::string label = head;
    for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
        label += "_" + cfg.sweep[a].name + "=" + cfg.sweep[a].labels[digits[a]];
    }
    return label;
}

}  // namespace detail

inline std::vector<std::string> effective_observables(const RunConfig& cfg) {
    if (!cfg.observables.empty()) return cfg.observables;
    switch (cfg.engine) {
        case Engine::analytic: return {"entanglement"};
        case Engine::closed: return {"excitation", "rwa_fidelity", "probabilities", "cat_fidelity"};
        case Engine::open: return {"negativity", "probabilities", "cat_fidelity"};
    }
    return {};
}

/// Expands the sweep (cartesian product, first axis slowest) and validates
/// every point. Throws UsageError on any invalid combination.
inline std::vector<PointPlan> plan_points(RunConfig cfg) {
    cfg.observables = effective_observables(cfg);
    check_observables(cfg);
    if (cfg.workers < 1) throw UsageError("workers must be >= 1");
    if (cfg.step < 0.0) throw UsageError("step must be >= 0");
    if (cfg.truncation == 0 || cfg.truncation < -1) throw UsageError("truncation must be >= 1 (or auto)");
    if (!cfg.t_end_at_peak && cfg.t_end < 0.0) throw UsageError("t_end must be >= 0");
    if (!(cfg.sample_interval > 0.0)) throw UsageError("sample_interval must be > 0");
    if (cfg.positivity_stride < 0) throw UsageError("positivity_stride must be >= 0");
    if (cfg.harmonic < 1) throw UsageError("harmonic must be >= 1");
    if (cfg.wigner_grid.resolution < 2) throw UsageError("wigner_resolution must be >= 2");
    if (!(cfg.quadrature_spacing > 0.0) || !(cfg.quadrature_max > cfg.quadrature_min)) {
        throw UsageError("quadrature grid must have spacing > 0 and max > min");
    }
    const bool jc = cfg.system.coupling == model::Coupling::jaynes_cummings;
    if (jc && detail::needs_rwa(cfg)) {
        throw UsageError("the requested observables compare with the displacement-coupling RWA solution and are "
                         "not available for the jaynes_cummings variant");
    }

    bool sweeps_omega_0 = false, sweeps_ratio = false;
    std::size_t total = 1;
    for (const auto& a : cfg.sweep) {
        sweeps_omega_0 |= a.name == "omega_0";
        sweeps_ratio |= a.name == "detuning_ratio";
        total *= a.values.size();
    }

    std::vector<PointPlan> out;
    std::vector<std::size_t> digits(cfg.sweep.size(), 0);
    for (std::size_t i = 0; i < total; ++i) {
        RunConfig pc = cfg;
        PointPlan pt;
        pt.index = i;
        for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
            const double v = cfg.sweep[a].values[digits[a]];
            set_parameter(pc, cfg.sweep[a].name, v);
            pt.coords.push_back(v);
        }
        if (sweeps_omega_0 && !sweeps_ratio) pc.detuning_ratio.reset();
        if (pc.detuning_ratio) {
            pc.system.omega_0 = model::drive_frequency_for_detuning(pc.system.omega_r, pc.system.g_0, pc.system.xi,
                                                                    pc.harmonic, *pc.detuning_ratio,
                                                                    pc.system.coupling);
        }
        pt.params = pc.system;
        try {
            pt.params.validate();
            pt.eff = model::resolve_effective(pt.params);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("invalid parameters: ") + e.what());
        }
        if (!jc) pt.sol = analytic::RwaSolution::from(pt.params);
        if (cfg.engine == Engine::closed) pt.n_d = cfg.truncation > 0 ? cfg.truncation : 14;
        if (cfg.engine == Engine::open) {
            pt.n_d = cfg.truncation > 0 ? cfg.truncation : open::default_truncation(pt.params.nbar_r);
        }
        if (cfg.t_end_at_peak && !std::isfinite(pt.eff.t_peak)) {
            throw UsageError("t_end = ts needs a nonzero detuning");
        }
        pt.t_end = cfg.t_end_at_peak ? pt.eff.t_peak : cfg.t_end;
        pt.label = detail::point_label(cfg, i, digits);
        out.push_back(std::move(pt));

        for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
            if (++digits[a] < cfg.sweep[a].values.size()) break;
            digits[a] = 0;
        }
    }
    return out;
}

namespace detail {

/// Uniform step no larger than `max_step` such that t_s lands on a stored
/// sample; returns {step, stride, index of the t_s sample or -1}.
struct SampleGrid {
    double step;
    int stride;
    long peak_sample;
    double anchor;
};

inline SampleGrid sample_grid(const RunConfig& cfg, const PointPlan& pt) {
    const double max_step = cfg.step > 0.0 ? cfg.step : closed::default_step(pt.params);
    const double ts = pt.eff.t_peak;
    const bool hit_peak = std::isfinite(ts) && ts <= pt.t_end * (1.0 + 1e-12);
    long stride = std::max(1L, std::lround(cfg.sample_interval / max_step));
    if (!hit_peak) {
        if (!cfg.trajectories) stride = std::numeric_limits<int>::max();
        return {max_step, static_cast<int>(std::min<long>(stride, std::numeric_limits<int>::max())), -1, 0.0};
    }
    long n_s = static_cast<long>(std::ceil(ts / max_step * (1.0 - 1e-12)));
    if (!cfg.trajectories) stride = n_s;
    n_s = (n_s + stride - 1) / stride * stride;
    return {ts / n_s, static_cast<int>(stride), n_s / stride, ts};
}

struct Series {
    std::string observable;
    std::unique_ptr<CsvFile> file;
};

inline double opt(const std::optional<double>& v) { return v ? *v : std::nan(""); }

inline void write_wigner(const fs::path& path, const tomography::WignerGrid& g) {
    const auto& spec = g.spec;
    CsvFile f(path, {"beta_re", "beta_im", "W"});
    for (int j = 0; j < spec.resolution; ++j) {
        for (int i = 0; i < spec.resolution; ++i) f.row({spec.re_at(i), spec.im_at(j), g.values(j, i)});
    }
}

inline void write_quadrature(const fs::path& path, const tomography::QuadratureDistribution& q) {
    CsvFile f(path, {"X", "P"});
    for (std::size_t k = 0; k < q.x.size(); ++k) f.row({q.x[k], q.p[k]});
}

/// Snapshot observables of the two conditioned oscillator states.
class Snapshot {
public:
    Snapshot(const RunConfig& cfg, const PointPlan& pt, const fs::path& dir, PointOutcome& out)
        : cfg_(cfg), pt_(pt), dir_(dir), out_(out) {}

    void operator()(const CMat* plus, const CMat* minus, double t) {
        const std::pair<const char*, const CMat*> branches[] = {{"plus", plus}, {"minus", minus}};
        if (wants(cfg_, "wigner")) {
            for (const auto& [name, rho] : branches) {
                const std::string file = std::string("wigner_") + name + ".csv";
                double w0 = std::nan(""), neg = std::nan("");
                if (rho) {
                    const auto g = tomography::wigner(*rho, cfg_.wigner_grid);
                    write_wigner(dir_ / file, g);
                    out_.files.push_back(file);
                    w0 = tomography::wigner_point(*rho, 0.0);
                    neg = tomography::wigner_negativity_volume(g);
                }
                out_.summary.emplace_back(std::string("wigner_origin_") + name, w0);
                out_.summary.emplace_back(std::string("wigner_negativity_") + name, neg);
            }
        }
        if (wants(cfg_, "quadrature")) {
            const cplx alpha = analytic::alpha_t(*pt_.sol, t);
            const double theta0 = std::arg(alpha) - kPi / 2.0;
            const auto xs = tomography::x_grid(cfg_.quadrature_min, cfg_.quadrature_max, cfg_.quadrature_spacing);
            out_.summary.emplace_back("theta_0", theta0);
            for (const auto& [name, rho] : branches) {
                const std::string file = std::string("quad_") + name + ".csv";
                double fringe = std::nan(""), norm = std::nan("");
                if (rho) {
                    const auto q = tomography::quadrature_distribution(*rho, theta0, xs);
                    write_quadrature(dir_ / file, q);
                    out_.files.push_back(file);
                    fringe = tomography::fringe_amplitude(q, 2.0 * std::sqrt(2.0) * std::abs(alpha));
                    norm = q.integral();
                }
                out_.summary.emplace_back(std::string("fringe_") + name, fringe);
                out_.summary.emplace_back(std::string("quad_norm_") + name, norm);
            }
        }
    }

private:
    const RunConfig& cfg_;
    const PointPlan& pt_;
    fs::path dir_;
    PointOutcome& out_;
};

inline CsvFile* open_series(std::vector<Series>& series, const RunConfig& cfg, const fs::path& dir,
                            PointOutcome& out, const char* observable, const std::vector<std::string>& header) {
    if (!cfg.trajectories || !wants(cfg, observable)) return nullptr;
    const std::string file = std::string(observable) + ".csv";
    series.push_back({observable, std::make_unique<CsvFile>(dir / file, header)});
    out.files.push_back(file);
    return series.back().file.get();
}

inline void run_analytic(const RunConfig& cfg, const PointPlan& pt, const fs::path& dir, PointOutcome& out) {
    const auto& sol = *pt.sol;
    std::vector<Series> series;
    CsvFile* ent = open_series(series, cfg, dir, out, "entanglement", {"gt", "S", "N"});
    CsvFile* alpha = open_series(series, cfg, dir, out, "alpha", {"gt", "alpha_re", "alpha_im", "n"});
    CsvFile* prob = open_series(series, cfg, dir, out, "probabilities", {"gt", "P_plus", "P_minus"});
    const long n = std::max(1L, std::lround(pt.t_end / cfg.sample_interval));
    if (cfg.trajectories) {
        for (long k = 0; k <= n; ++k) {
            const double t = pt.t_end * static_cast<double>(k) / static_cast<double>(n);
            if (ent) ent->row({t, analytic::entropy(sol, t), analytic::log_negativity_closed(sol, t)});
            if (alpha) {
                const cplx a = analytic::alpha_t(sol, t);
                alpha->row({t, a.real(), a.imag(), analytic::mean_excitation(sol, t)});
            }
            if (prob) {
                const auto p = analytic::cat_probabilities(sol, t);
                prob->row({t, p.plus, p.minus});
            }
        }
    }
    const double t = (std::isfinite(pt.eff.t_peak) && pt.eff.t_peak <= pt.t_end) ? pt.eff.t_peak : pt.t_end;
    const cplx a = analytic::alpha_t(sol, t);
    const auto p = analytic::cat_probabilities(sol, t);
    out.summary = {{"gt", t},
                   {"S", analytic::entropy(sol, t)},
                   {"N", analytic::log_negativity_closed(sol, t)},
                   {"alpha_re", a.real()},
                   {"alpha_im", a.imag()},
                   {"n", analytic::mean_excitation(sol, t)},
                   {"P_plus", p.plus},
                   {"P_minus", p.minus}};
    out.integrator = {{"samples", cfg.trajectories ? n + 1 : 0}};
}

inline void run_closed(const RunConfig& cfg, const PointPlan& pt, const fs::path& dir, PointOutcome& out) {
    const SampleGrid grid = sample_grid(cfg, pt);
    closed::IntegratorConfig ic;
    ic.step = grid.step;
    ic.method = cfg.method;
    ic.n_d = pt.n_d;
    ic.sample_stride = grid.stride;
    ic.anchor_time = grid.anchor;

    std::vector<Series> series;
    CsvFile* exc = open_series(series, cfg, dir, out, "excitation", {"gt", "n", "n_rwa"});
    CsvFile* fid = open_series(series, cfg, dir, out, "rwa_fidelity", {"gt", "f"});
    CsvFile* prob = open_series(series, cfg, dir, out, "probabilities", {"gt", "p_plus", "p_minus", "P_plus", "P_minus"});
    CsvFile* cat = open_series(series, cfg, dir, out, "cat_fidelity", {"gt", "f_plus", "f_minus"});

    std::optional<closed::JointPureState> at_summary;
    long sample = 0;
    const closed::Observer observe = [&](const closed::JointPureState& s) {
        const double t = s.t;
        if (exc) exc->row({t, closed::mean_excitation_numeric(s), analytic::mean_excitation(*pt.sol, t)});
        if (fid) fid->row({t, closed::fidelity_vs_rwa(s, *pt.sol)});
        if (prob) {
            const auto c = closed::condition_on_qubit(s);
            const auto p = analytic::cat_probabilities(*pt.sol, t);
            prob->row({t, c.p_plus, c.p_minus, p.plus, p.minus});
        }
        if (cat) {
            const auto f = closed::fidelity_vs_cat(s, analytic::alpha_t(*pt.sol, t));
            cat->row({t, opt(f.plus), opt(f.minus)});
        }
        if (sample == grid.peak_sample || grid.peak_sample < 0) at_summary = s;  // else the final state
        ++sample;
    };
    const closed::Diagnostics d =
        closed::integrate(pt.params, ic, pt.t_end, closed::JointPureState::initial(pt.n_d), observe);
    out.integrator = {{"method", closed::to_string(cfg.method)},
                      {"step", d.step},
                      {"steps", d.steps},
                      {"sample_stride", grid.stride},
                      {"max_norm_drift", d.max_norm_drift},
                      {"max_top_population", d.max_top_population}};

    const auto& s = *at_summary;
    const auto c = closed::condition_on_qubit(s);
    out.summary = {{"gt", s.t}, {"n", closed::mean_excitation_numeric(s)}, {"p_plus", c.p_plus}, {"p_minus", c.p_minus}};
    if (pt.sol) {
        const auto f = closed::fidelity_vs_cat(s, analytic::alpha_t(*pt.sol, s.t));
        out.summary.insert(out.summary.end(), {{"n_rwa", analytic::mean_excitation(*pt.sol, s.t)},
                                               {"f", closed::fidelity_vs_rwa(s, *pt.sol)},
                                               {"f_plus", opt(f.plus)},
                                               {"f_minus", opt(f.minus)}});
    }
    const CMat rp = c.plus ? tomography::density_from(*c.plus) : CMat();
    const CMat rm = c.minus ? tomography::density_from(*c.minus) : CMat();
    Snapshot(cfg, pt, dir, out)(c.plus ? &rp : nullptr, c.minus ? &rm : nullptr, s.t);
}

inline void run_open(const RunConfig& cfg, const PointPlan& pt, const fs::path& dir, PointOutcome& out) {
    const SampleGrid grid = sample_grid(cfg, pt);
    open::IntegratorConfig ic;
    ic.base.step = grid.step;
    ic.base.method = cfg.method;
    ic.base.n_d = pt.n_d;
    ic.base.sample_stride = grid.stride;
    ic.base.anchor_time = grid.anchor;
    ic.positivity_stride = cfg.positivity_stride;

    std::vector<Series> series;
    CsvFile* exc = open_series(series, cfg, dir, out, "excitation", {"gt", "n"});
    CsvFile* neg = open_series(series, cfg, dir, out, "negativity", {"gt", "N", "N_raw"});
    CsvFile* prob = open_series(series, cfg, dir, out, "probabilities", {"gt", "P_plus", "P_minus"});
    CsvFile* cat = open_series(series, cfg, dir, out, "cat_fidelity", {"gt", "F_plus", "F_minus"});
    CsvFile* inv = open_series(series, cfg, dir, out, "invariants",
                               {"gt", "trace", "hermiticity_residual", "purity", "top_population"});

    std::optional<open::JointDensityMatrix> at_summary;
    long sample = 0;
    const open::Observer observe = [&](const open::JointDensityMatrix& r) {
        const double t = r.t;
        if (exc) exc->row({t, r.mean_excitation()});
        if (neg) {
            const auto n = open::log_negativity_numeric(r);
            neg->row({t, n.value, n.raw});
        }
        if (prob || cat) {
            const auto c = open::condition_on_qubit_open(r);
            if (prob) prob->row({t, c.plus.probability, c.minus.probability});
            if (cat) {
                const cplx alpha = analytic::alpha_t(*pt.sol, t);
                cat->row({t, opt(open::fidelity_open(c.plus, alpha)), opt(open::fidelity_open(c.minus, alpha))});
            }
        }
        if (inv) inv->row({t, r.trace(), r.hermiticity_residual(), r.purity(), r.top_population()});
        if (sample == grid.peak_sample || grid.peak_sample < 0) at_summary = r;
        ++sample;
    };
    const open::Diagnostics d =
        open::integrate_master(pt.params, ic, pt.t_end, open::JointDensityMatrix::initial(pt.n_d), observe);
    out.integrator = {{"method", closed::to_string(cfg.method)},
                      {"step", d.step},
                      {"steps", d.steps},
                      {"sample_stride", grid.stride},
                      {"positivity_stride", cfg.positivity_stride},
                      {"max_trace_drift", d.max_trace_drift},
                      {"max_hermiticity_residual", d.max_hermiticity_residual},
                      {"min_eigenvalue", d.min_eigenvalue},
                      {"max_top_population", d.max_top_population}};

    const auto& r = *at_summary;
    const auto c = open::condition_on_qubit_open(r);
    out.summary = {{"gt", r.t},
                   {"n", r.mean_excitation()},
                   {"N", open::log_negativity_numeric(r).value},
                   {"P_plus", c.plus.probability},
                   {"P_minus", c.minus.probability},
                   {"purity", r.purity()}};
    if (pt.sol) {
        const cplx alpha = analytic::alpha_t(*pt.sol, r.t);
        out.summary.emplace_back("F_plus", opt(open::fidelity_open(c.plus, alpha)));
        out.summary.emplace_back("F_minus", opt(open::fidelity_open(c.minus, alpha)));
    }
    Snapshot(cfg, pt, dir, out)(c.plus.defined() ? &c.plus.rho_r : nullptr,
                                c.minus.defined() ? &c.minus.rho_r : nullptr, r.t);
}

}  // namespace detail

inline PointOutcome run_point(const RunConfig& cfg, const PointPlan& pt, const fs::path& out_dir) {
    PointOutcome out;
    const fs::path dir = pt.label.empty() ? out_dir : out_dir / pt.label;
    try {
        fs::create_directories(dir);
        switch (cfg.engine) {
            case Engine::analytic: detail::run_analytic(cfg, pt, dir, out); break;
            case Engine::closed: detail::run_closed(cfg, pt, dir, out); break;
            case Engine::open: detail::run_open(cfg, pt, dir, out); break;
        }
    } catch (const NumericInvariantError& e) {
        out.status = PointOutcome::Status::invariant_violation;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.status = PointOutcome::Status::error;
        out.message = e.what();
    }
    return out;
}

namespace detail {

inline nlohmann::ordered_json params_json(const model::SystemParams& p) {
    return {{"omega_q", p.omega_q}, {"omega_r", p.omega_r}, {"omega_0", p.omega_0}, {"xi", p.xi},
            {"g_0", p.g_0},         {"gamma_q", p.gamma_q}, {"kappa_r", p.kappa_r}, {"nbar_q", p.nbar_q},
            {"nbar_r", p.nbar_r},   {"coupling", model::to_string(p.coupling)}};
}

inline void write_summary(const RunConfig& cfg, const RunReport& report) {
    std::vector<std::string> header{"point"};
    for (const auto& a : cfg.sweep) header.push_back(a.name);
    header.push_back("n_d");
    std::vector<std::string> names;
    for (const auto& o : report.outcomes) {
        if (o.status == PointOutcome::Status::ok) {
            for (const auto& kv : o.summary) names.push_back(kv.first);
            break;
        }
    }
    header.insert(header.end(), names.begin(), names.end());
    CsvFile f(report.out_dir / "summary.csv", header);
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& pt = report.points[i];
        const auto& o = report.outcomes[i];
        std::vector<double> row{static_cast<double>(pt.index)};
        row.insert(row.end(), pt.coords.begin(), pt.coords.end());
        row.push_back(cfg.engine == Engine::analytic ? std::nan("") : pt.n_d);
        for (const auto& name : names) {
            double v = std::nan("");
            for (const auto& kv : o.summary) {
                if (kv.first == name) v = kv.second;
            }
            row.push_back(v);
        }
        f.row(row);
    }
}

inline void write_manifest(const RunConfig& cfg, const RunReport& report) {
    using nlohmann::ordered_json;
    ordered_json sweep = ordered_json::array();
    for (const auto& a : cfg.sweep) sweep.push_back({{"name", a.name}, {"values", a.values}});
    ordered_json points = ordered_json::array();
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& pt = report.points[i];
        const auto& o = report.outcomes[i];
        const auto valid = model::rwa_validity(pt.params, pt.eff);
        ordered_json p = {
            {"index", pt.index},
            {"dir", pt.label.empty() ? "." : pt.label},
            {"status", to_string(o.status)},
            {"message", o.message},
            {"params", params_json(pt.params)},
            {"effective",
             {{"n_0", pt.eff.n_0},
              {"delta", pt.eff.delta},
              {"g", pt.eff.g},
              {"t_s", pt.eff.t_peak},
              {"alpha_max", pt.eff.alpha_max},
              {"delta_negative", pt.eff.delta_negative()}}},
            {"rwa_validity", {{"max_ratio", valid.max_ratio()}, {"threshold", valid.threshold}, {"pass", valid.pass}}},
            {"n_d", pt.n_d},
            {"t_end", pt.t_end},
            {"integrator", o.integrator},
            {"files", o.files},
        };
        ordered_json summary = ordered_json::object();
        for (const auto& [k, v] : o.summary) summary[k] = v;
        p["summary_at"] = summary;
        points.push_back(std::move(p));
    }
    ordered_json m = {
        {"tool", "catsim"},
        {"version", kVersion},
        {"preset", cfg.preset},
        {"engine", to_string(cfg.engine)},
        {"observables", effective_observables(cfg)},
        {"detuning_ratio", cfg.detuning_ratio ? ordered_json(*cfg.detuning_ratio) : ordered_json(nullptr)},
        {"harmonic", cfg.harmonic},
        {"integrator",
         {{"method", closed::to_string(cfg.method)},
          {"max_step", cfg.step > 0.0 ? ordered_json(cfg.step) : ordered_json("default")},
          {"truncation", cfg.truncation > 0 ? ordered_json(cfg.truncation) : ordered_json("auto")},
          {"t_end", cfg.t_end_at_peak ? ordered_json("ts") : ordered_json(cfg.t_end)},
          {"sample_interval", cfg.sample_interval},
          {"positivity_stride", cfg.positivity_stride}}},
        {"sweep", sweep},
        {"workers", cfg.workers},
        {"trajectories", cfg.trajectories},
        {"partial", report.partial()},
        {"points", points},
    };
    std::ofstream out(report.out_dir / "manifest.json");
    out << m.dump(2) << '\n';
}

}  // namespace detail

/// Runs every sweep point on a pool of cfg.workers threads. Each point writes
/// into its own directory; summary.csv and manifest.json are written last.
inline RunReport run(RunConfig cfg) {
    cfg.observables = effective_observables(cfg);
    RunReport report;
    report.points = plan_points(cfg);
    report.out_dir = cfg.out_dir;
    try {
        fs::create_directories(report.out_dir);
    } catch (const fs::filesystem_error& e) {
        throw UsageError("cannot create output directory '" + cfg.out_dir + "': " + e.what());
    }
    report.outcomes.resize(report.points.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < report.points.size();) {
            report.outcomes[i] = run_point(cfg, report.points[i], report.out_dir);
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(cfg.workers, report.points.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_threads; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    detail::write_summary(cfg, report);
    detail::write_manifest(cfg, report);
    return report;
}

}  // namespace catsim::cli
