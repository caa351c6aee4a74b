// ode.hpp — Adaptive Dormand-Prince 5(4) integrator for Eigen states.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kasha {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 -> pick automatically
    double max_step = 0.0;      // 0 -> unbounded
};

// Explicit embedded Runge-Kutta (Dormand-Prince) with PI-free step control.
// State is any Eigen dense vector/matrix type; Rhs is f(const State&) -> State.
template <class State, class Rhs>
class Dopri5 {
public:
    Dopri5(Rhs rhs, OdeOptions opts = {}) : rhs_(std::move(rhs)), opts_(opts) {}

    // Integrates y from t to t_end. After each accepted step the observer is
    // called as obs(t_prev, y_prev, t, y); returning false halts integration
    // with y left at the current accepted point.
    template <class Obs>
    void integrate(State& y, double& t, double t_end, Obs&& obs) {
        if (t_end == t) return;
        if (t_end < t) throw std::invalid_argument("Dopri5: backwards integration");
        double h = h_;
        if (h <= 0.0) h = initial_guess(y, t_end - t);
        if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
        State y_prev = y;
        while (t < t_end) {
            h = std::min(h, t_end - t);
            double err;
            State y_new = step(y, h, err);
            if (!std::isfinite(err))
                throw std::runtime_error("Dopri5: non-finite step at t = " +
                                         std::to_string(t));
            if (err <= 1.0) {
                y_prev.swap(y);
                y = std::move(y_new);
                const double t_prev = t;
                t += h;
                h *= std::clamp(0.9 * std::pow(err + 1e-300, -0.2), 0.2, 5.0);
                if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
                h_ = h;
                if (!obs(t_prev, y_prev, t, y)) return;
            } else {
                h *= std::max(0.9 * std::pow(err, -0.2), 0.1);
                first_same_as_last_ = false;
            }
        }
    }

    void integrate(State& y, double& t, double t_end) {
        integrate(y, t, t_end,
                  [](double, const State&, double, const State&) { return true; });
    }

    void reset() {
        h_ = 0.0;
        first_same_as_last_ = false;
    }

private:
    double initial_guess(const State& y, double span) {
        const double scale = opts_.atol + opts_.rtol * y.matrix().norm();
        const double dnorm = rhs_(y).matrix().norm();
        double h = dnorm > 0.0 ? 0.01 * scale / dnorm : span * 1e-3;
        return std::min(h, span);
    }

    State step(const State& y, double h, double& err) {
        // Dormand-Prince coefficients
        if (!first_same_as_last_) k1_ = rhs_(y);
        State k2 = rhs_(y + h * (a21 * k1_));
        State k3 = rhs_(y + h * (a31 * k1_ + a32 * k2));
        State k4 = rhs_(y + h * (a41 * k1_ + a42 * k2 + a43 * k3));
        State k5 = rhs_(y + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
        State k6 = rhs_(y + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        State y5 = y + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        State k7 = rhs_(y5);
        State diff = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale =
            opts_.atol + opts_.rtol * std::max(y.matrix().norm(), y5.matrix().norm());
        err = diff.matrix().norm() / scale;
        if (err <= 1.0) {
            k1_ = std::move(k7);  // FSAL
            first_same_as_last_ = true;
        }
        return y5;
    }

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                            b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                            b6 = 11.0 / 84.0;
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0,
                            e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                            e4 = 125.0 / 192.0 - 393.0 / 640.0,
                            e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                            e6 = 11.0 / 84.0 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

    Rhs rhs_;
    OdeOptions opts_;
    State k1_;
    double h_ = 0.0;
    bool first_same_as_last_ = false;
};

template <class State, class Rhs>
Dopri5<State, Rhs> make_dopri5(Rhs rhs, OdeOptions opts = {}) {
    return Dopri5<State, Rhs>(std::move(rhs), opts);
}

}  // namespace kasha
