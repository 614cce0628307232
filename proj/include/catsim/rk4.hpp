// rk4.hpp - fixed-step classical Runge-Kutta for dense complex states.

#pragma once

#include <cmath>
#include <stdexcept>

#include "catsim/types.hpp"

namespace catsim {

/// Uniform time grid. When an anchor time is given (e.g. the cat generation
/// time t_s) the step is shrunk so that the anchor and its multiples fall
/// exactly on grid points.
struct TimeGrid {
    double step = 0.0;
    long steps = 0;
    double last_step = 0.0;  // equals step unless t_end is off-grid

    double time_at(long k) const {
        if (k >= steps) return (steps - 1) * step + last_step;
        return k * step;
    }
    double t_end() const { return steps == 0 ? 0.0 : time_at(steps); }

    static TimeGrid make(double t_end, double max_step, double anchor = 0.0) {
        if (!(max_step > 0.0)) throw std::invalid_argument("integration step must be > 0");
        if (t_end < 0.0) throw std::invalid_argument("t_end must be >= 0");
        TimeGrid g;
        if (t_end == 0.0) {
            g.step = max_step;
            return g;
        }
        const double base = (anchor > 0.0 && std::isfinite(anchor)) ? anchor : t_end;
        g.step = base / std::ceil(base / max_step * (1.0 - 1e-12));
        const double ratio = t_end / g.step;
        const double whole = std::round(ratio);
        if (std::abs(ratio - whole) < 1e-9 * std::max(1.0, ratio)) {
            g.steps = static_cast<long>(whole);
            g.last_step = g.step;
        } else {
            g.steps = static_cast<long>(std::floor(ratio)) + 1;
            g.last_step = t_end - (g.steps - 1) * g.step;
        }
        return g;
    }
};

/// Classical RK4 with reusable stage storage. `rhs(t, y, dydt)` must
/// overwrite dydt.
class Rk4 {
public:
    template <class Rhs>
    void step(Rhs&& rhs, double t, double h, CMat& y) {
        if (k1_.rows() != y.rows() || k1_.cols() != y.cols()) {
            k1_.resize(y.rows(), y.cols());
            k2_.resize(y.rows(), y.cols());
            k3_.resize(y.rows(), y.cols());
            k4_.resize(y.rows(), y.cols());
            tmp_.resize(y.rows(), y.cols());
        }
        rhs(t, y, k1_);
        tmp_ = y + (0.5 * h) * k1_;
        rhs(t + 0.5 * h, tmp_, k2_);
        tmp_ = y + (0.5 * h) * k2_;
        rhs(t + 0.5 * h, tmp_, k3_);
        tmp_ = y + h * k3_;
        rhs(t + h, tmp_, k4_);
        y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    CMat k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace catsim
