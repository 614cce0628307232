// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "catsim/presets.hpp"
#include "catsim/runner.hpp"

using namespace catsim;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::map<int, std::string> lines;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    char head[32];
    std::snprintf(head, sizeof head, "criterion %2d: %s  ", id, ok ? "PASS" : "FAIL");
    lines[id] = head + what + " | " + detail;
    std::fprintf(stderr, "%s\n", lines[id].c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

model::SystemParams generation_params(double omega_r) {
    model::SystemParams p;
    p.omega_r = omega_r;
    p.xi = 1.5271;
    p.omega_0 = model::drive_frequency_for_detuning(p.omega_r, p.g_0, p.xi, 1, 1.0, p.coupling);
    return p;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("catsim_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

double summary_value(const cli::PointOutcome& o, const std::string& name) {
    for (const auto& [k, v] : o.summary) {
        if (k == name) return v;
    }
    return std::nan("");
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

std::string list(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.6g", x);
    return s;
}

// Closed-system quantities at t_s and around 2 pi / delta.
struct ClosedRun {
    double n = 0, f = 0, p_plus = 0, p_minus = 0, f_plus = 0, f_minus = 0;
    double f_minus_window_min = 2.0;
    double t_at_min = 0.0;
    double seconds = 0.0;
};

ClosedRun closed_run(double omega_r, bool window) {
    const auto p = generation_params(omega_r);
    const auto sol = analytic::RwaSolution::from(p);
    const double ts = sol.eff.t_peak;
    const double t_back = 2.0 * kPi / sol.eff.delta;
    closed::IntegratorConfig c;
    c.n_d = 14;
    c.anchor_time = ts;
    ClosedRun r;
    const auto start = std::chrono::steady_clock::now();
    closed::integrate(p, c, window ? t_back + 0.05 : ts, closed::JointPureState::initial(c.n_d),
                      [&](const closed::JointPureState& s) {
                          if (std::abs(s.t - ts) < 1e-9) {
                              r.n = closed::mean_excitation_numeric(s);
                              r.f = closed::fidelity_vs_rwa(s, sol);
                              const auto cq = closed::condition_on_qubit(s);
                              r.p_plus = cq.p_plus;
                              r.p_minus = cq.p_minus;
                              const auto cf = closed::fidelity_vs_cat(s, analytic::alpha_t(sol, s.t));
                              r.f_plus = cf.plus.value_or(0.0);
                              r.f_minus = cf.minus.value_or(0.0);
                              if (!window) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                          }
                          if (window && std::abs(s.t - t_back) <= 0.05) {
                              const auto cf = closed::fidelity_vs_cat(s, analytic::alpha_t(sol, s.t));
                              if (cf.minus && *cf.minus < r.f_minus_window_min) {
                                  r.f_minus_window_min = *cf.minus;
                                  r.t_at_min = s.t - t_back;
                              }
                          }
                      });
    return r;
}

// Rotating-frame RWA propagator of one qubit block, integrated by RK4 on a
// large Fock space with the ladder operators applied as row shifts.
struct BlockOracle {
    double g, delta, sign;
    int levels;

    CMat rhs(double t, const CMat& u) const {
        const cplx e = std::polar(1.0, delta * t);
        CMat out = CMat::Zero(u.rows(), u.cols());
        for (int m = 0; m < levels; ++m) {
            if (m + 1 < levels) out.row(m) += std::conj(e) * std::sqrt(m + 1.0) * u.row(m + 1);
            if (m > 0) out.row(m) += e * std::sqrt(static_cast<double>(m)) * u.row(m - 1);
        }
        return cplx{0.0, -sign * g} * out;
    }

    void step(double t, double h, CMat& u) const {
        const CMat k1 = rhs(t, u);
        const CMat k2 = rhs(t + h / 2, u + (h / 2) * k1);
        const CMat k3 = rhs(t + h / 2, u + (h / 2) * k2);
        const CMat k4 = rhs(t + h, u + h * k3);
        u += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
};

void criterion_1_2_5_6() {
    const ClosedRun r200 = closed_run(200.0, true);
    const ClosedRun timed = closed_run(200.0, false);
    report(1, std::abs(r200.n - 4.0) <= 0.02 * 4.0 && timed.seconds < 30.0, "<n>(t_s) = 4 within 2%, runtime < 30 s",
           fmt("<n> = %.6f, one trajectory to t_s in %.2f s", r200.n, timed.seconds));

    const ClosedRun r30 = closed_run(30.0, false);
    const ClosedRun r50 = closed_run(50.0, false);
    report(2, r200.f > 0.99 && r30.f < r50.f && r50.f < r200.f, "f(t_s) > 0.99 at omega_r = 200, increasing 30 < 50 < 200",
           fmt("f = %.6f, %.6f, %.6f", r30.f, r50.f, r200.f));

    const auto sol = analytic::RwaSolution::from(generation_params(200.0));
    const auto pa = analytic::cat_probabilities(sol, sol.eff.t_peak);
    const double e8 = std::exp(-8.0);
    const double dp = std::max(std::abs(pa.plus - 0.5 * (1 + e8)), std::abs(pa.minus - 0.5 * (1 - e8)));
    report(5, std::abs(r200.p_plus - 0.5) <= 0.02 && std::abs(r200.p_minus - 0.5) <= 0.02 && dp <= 1e-12,
           "p+-(t_s) = 0.5 +- 0.02; analytic P+- = (1 +- e^-8)/2 within 1e-12",
           fmt("p+ = %.6f, p- = %.6f, max |P - (1 +- e^-8)/2| = %.2e", r200.p_plus, r200.p_minus, dp));

    report(6, r200.f_plus > 0.98 && r200.f_minus > 0.98 && r200.f_minus_window_min < 0.05,
           "f+-(t_s) > 0.98; f- < 0.05 within 0.05 of 2 pi / delta",
           fmt("f+ = %.6f, f- = %.6f, min f- = %.2e at t - 2pi/delta = %+.4f", r200.f_plus, r200.f_minus,
               r200.f_minus_window_min, r200.t_at_min));
}

void criterion_3() {
    const auto pt = cli::plan_points(cli::preset_config("fig6")).front();
    const cplx a = analytic::alpha_t(*pt.sol, pt.eff.t_peak);
    const bool ok = std::abs(a.real() - -1.9005) <= 5e-4 && std::abs(a.imag() - 0.6228) <= 5e-4 &&
                    std::abs(std::abs(a) - 2.0) <= 1e-6;
    report(3, ok, "alpha(t_s) = -1.9005 + 0.6228i within 5e-4, |alpha| = 2 within 1e-6",
           fmt("alpha = %.6f %+.6fi, |alpha| - 2 = %.2e", a.real(), a.imag(), std::abs(a) - 2.0));
}

void criterion_4() {
    const auto sol = analytic::RwaSolution::from(generation_params(200.0));
    const int n_d = 30, n = n_d + 1, big = 110;
    const double t_back = 2.0 * kPi / sol.eff.delta;
    const int checkpoints = 16, per = 1000;
    const double h = t_back / (checkpoints * per);
    double worst = 0.0;
    for (double sign : {1.0, -1.0}) {
        const BlockOracle oracle{sol.eff.g, sol.eff.delta, sign, big};
        CMat u = CMat::Identity(big, n);
        for (int c = 1; c <= checkpoints; ++c) {
            for (int k = 0; k < per; ++k) oracle.step(((c - 1) * per + k) * h, h, u);
            const CMat exact = analytic::rwa_propagator(sol, c * per * h, n_d);
            const CMat block = sign > 0 ? exact.topLeftCorner(n, n) : exact.bottomRightCorner(n, n);
            worst = std::max(worst, (block - u.topRows(n)).cwiseAbs().maxCoeff());
        }
    }
    report(4, worst < 1e-8, "Magnus propagator vs integrated RWA Hamiltonian, max |dU| < 1e-8 on [0, 2pi/delta], n_d = 30",
           fmt("max |dU| = %.2e over %d checkpoints", worst, checkpoints));
}

void criterion_7() {
    const auto p = generation_params(200.0);
    const auto sol = analytic::RwaSolution::from(p);
    const double ts = sol.eff.t_peak, t_back = 2.0 * kPi / sol.eff.delta;
    const double s0 = analytic::entropy(sol, t_back), n0 = analytic::log_negativity_closed(sol, t_back);
    const double s1 = analytic::entropy(sol, ts), n1 = analytic::log_negativity_closed(sol, ts);

    open::IntegratorConfig c;
    c.base.n_d = 14;
    c.base.anchor_time = ts;
    c.positivity_stride = 0;
    const auto rho = open::evolve_master(p, c, ts);
    const double numeric = open::log_negativity_numeric(rho).value;

    const bool ok = std::abs(s0) <= 1e-10 && std::abs(n0) <= 1e-10 && std::abs(s1 - 1) <= 2e-3 &&
                    std::abs(n1 - 1) <= 2e-3 && std::abs(numeric - n1) <= 0.02;
    report(7, ok, "S, N = 0 at 2pi/delta (1e-10), = 1 at t_s (2e-3); numerical N at t_s within 0.02",
           fmt("S, N at 2pi/delta = %.1e, %.1e; at t_s = %.6f, %.6f; numerical N = %.6f", s0, n0, s1, n1, numeric));
}

void criterion_8() {
    const char* names[] = {"fig7a", "fig7b", "fig7c", "fig7d", "fig8a", "fig8b",
                           "fig8c", "fig8d", "fig9a", "fig9b", "fig9c", "fig9d"};
    bool ok = true;
    double trace = 0.0, herm = 0.0, min_eig = std::numeric_limits<double>::infinity();
    std::string detail, bad;
    for (const char* name : names) {
        cli::RunConfig cfg = cli::preset_config(name);
        cfg.observables.push_back("invariants");
        cfg.positivity_stride = 1;
        cfg.out_dir = scratch(name).string();
        cfg.workers = 1;
        const auto rep = cli::run(cfg);
        std::vector<double> fp, fm;
        for (const auto& o : rep.outcomes) {
            if (o.status != cli::PointOutcome::Status::ok) {
                ok = false;
                bad += std::string(" ") + name + ": " + o.message;
                continue;
            }
            trace = std::max(trace, o.integrator["max_trace_drift"].get<double>());
            herm = std::max(herm, o.integrator["max_hermiticity_residual"].get<double>());
            min_eig = std::min(min_eig, o.integrator["min_eigenvalue"].get<double>());
            fp.push_back(summary_value(o, "F_plus"));
            fm.push_back(summary_value(o, "F_minus"));
        }
        const bool mono = strictly_decreasing(fp) && strictly_decreasing(fm);
        if (!mono) {
            ok = false;
            bad += std::string(" ") + name + " not decreasing";
        }
        detail += std::string(" ") + name + " " + cfg.sweep.front().name + ": F+ [" + list(fp) + "]";
        fs::remove_all(cfg.out_dir);
    }
    ok = ok && trace < 1e-6 && herm < 1e-9 && min_eig > -1e-6;
    report(8, ok, "open runs: |Tr - 1| < 1e-6, Hermiticity < 1e-9, min eig > -1e-6 at every sample; F+-(t_s) decreasing",
           fmt("max trace drift %.2e, max Hermiticity residual %.2e, min eigenvalue %.2e;", trace, herm, min_eig) +
               detail + bad);
}

void criterion_9() {
    const double w_vac = tomography::wigner_point(tomography::density_from(fock::coherent_vector(0.0, 20)), 0.0);
    const auto odd = fock::cat_vector({cplx{2.0, 0.0}, fock::Parity::odd}, 40);
    const double w_odd = tomography::wigner_point(tomography::density_from(odd), 0.0);
    const auto even = fock::cat_vector({cplx{-1.9005, 0.6228}, fock::Parity::even}, 40);
    const double mass = tomography::wigner(even).mass();
    bool ok = std::abs(w_vac - 2 / kPi) <= 1e-9 && std::abs(w_odd + 2 / kPi) <= 1e-5 && std::abs(mass - 1) <= 0.02;
    std::string detail = fmt("W_vac(0) - 2/pi = %.1e, W_odd(0) + 2/pi = %.1e, mass = %.5f;", w_vac - 2 / kPi,
                             w_odd + 2 / kPi, mass);

    double worst_norm = 0.0;
    for (const char* name : {"fig11a", "fig11b", "fig11c", "fig11d"}) {
        cli::RunConfig cfg = cli::preset_config(name);
        cfg.out_dir = scratch(name).string();
        const auto rep = cli::run(cfg);
        std::vector<double> fringe;
        for (const auto& o : rep.outcomes) {
            if (o.status != cli::PointOutcome::Status::ok) ok = false;
            fringe.push_back(summary_value(o, "fringe_plus"));
            for (const char* q : {"quad_norm_plus", "quad_norm_minus"}) {
                worst_norm = std::max(worst_norm, std::abs(summary_value(o, q) - 1.0));
            }
        }
        ok = ok && strictly_decreasing(fringe);
        detail += std::string(" ") + name + " fringe [" + list(fringe) + "]";
        fs::remove_all(cfg.out_dir);
    }
    ok = ok && worst_norm <= 1e-3;
    report(9, ok, "W(0) vacuum / odd cat, Wigner mass, quadrature norm, fringe attenuation along the quadrature sweeps",
           detail + fmt("; max |norm - 1| = %.1e", worst_norm));
}

// Observables at t_s on the nested grids h = t_s / N, t_s / 2N, t_s / 4N.
void criterion_10() {
    const auto p = generation_params(200.0);
    const auto sol = analytic::RwaSolution::from(p);
    const double ts = sol.eff.t_peak;
    const cplx alpha = analytic::alpha_t(sol, ts);
    const long n0 = static_cast<long>(std::ceil(ts / closed::default_step(p)));

    std::vector<std::vector<double>> closed_obs, open_obs;
    std::vector<CVec> states;
    std::vector<CMat> rhos;
    for (long m : {1L, 2L, 4L}) {
        closed::IntegratorConfig c;
        c.step = ts / static_cast<double>(n0 * m);
        c.anchor_time = ts;
        const auto s = closed::evolve(p, c, ts);
        const auto cq = closed::condition_on_qubit(s);
        const auto cf = closed::fidelity_vs_cat(s, alpha);
        closed_obs.push_back({closed::mean_excitation_numeric(s), closed::fidelity_vs_rwa(s, sol), cq.p_plus,
                              cq.p_minus, *cf.plus, *cf.minus});
        states.push_back(s.stacked().col(0));

        model::SystemParams q = p;
        q.gamma_q = 0.05;
        q.kappa_r = 0.001;
        open::IntegratorConfig oc;
        oc.base = c;
        oc.positivity_stride = 0;
        const auto r = open::evolve_master(q, oc, ts);
        const auto co = open::condition_on_qubit_open(r);
        open_obs.push_back({r.mean_excitation(), open::log_negativity_numeric(r).value, co.plus.probability,
                            co.minus.probability, *open::fidelity_open(co.plus, alpha),
                            *open::fidelity_open(co.minus, alpha)});
        rhos.push_back(r.rho);
    }
    double change = 0.0;
    for (const auto* obs : {&closed_obs, &open_obs}) {
        for (std::size_t k = 0; k < (*obs)[0].size(); ++k) {
            change = std::max(change, std::abs((*obs)[0][k] - (*obs)[1][k]));
        }
    }
    const double ratio_closed = (states[0] - states[1]).norm() / (states[1] - states[2]).norm();
    const double ratio_open = (rhos[0] - rhos[1]).norm() / (rhos[1] - rhos[2]).norm();
    const bool ok = change < 1e-6 && std::abs(ratio_closed - 16) <= 4 && std::abs(ratio_open - 16) <= 4;
    report(10, ok, "halving the step changes every observable by < 1e-6; error ratio 16 +- 4",
           fmt("N = %ld: max observable change %.2e; state error ratio closed %.2f, open %.2f", n0, change,
               ratio_closed, ratio_open));
}

std::map<std::string, std::string> csv_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.path().extension() != ".csv") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[fs::relative(e.path(), root).string()] = ss.str();
    }
    return out;
}

void criterion_11() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"fig3a", "fig8a"}) {
        cli::RunConfig cfg = cli::preset_config(name);
        std::map<std::string, std::string> trees[3];
        const int workers[3] = {1, 1, 3};
        for (int k = 0; k < 3; ++k) {
            cfg.workers = workers[k];
            cfg.out_dir = scratch(std::string(name) + "_" + std::to_string(k)).string();
            ok = ok && cli::run(cfg).exit_code() == 0;
            trees[k] = csv_tree(cfg.out_dir);
            fs::remove_all(cfg.out_dir);
        }
        const bool same = !trees[0].empty() && trees[0] == trees[1] && trees[0] == trees[2];
        ok = ok && same;
        detail += fmt("%s: %zu CSVs %s; ", name, trees[0].size(), same ? "identical" : "differ");
    }
    report(11, ok, "repeated and parallel (3 workers) vs sequential runs give byte-identical CSVs", detail);
}

}  // namespace

int main() {
    criterion_1_2_5_6();
    criterion_3();
    criterion_4();
    criterion_7();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_8();
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d criteria failed\n", failures);
    return failures;
}
