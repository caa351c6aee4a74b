// expfit.hpp — Exponential decay fit on the usable population window.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kasha {

struct ExponentialFit {
    double rate;
    double r_squared;
};

// Least-squares fit of log p vs t restricted to p in [0.05, 0.9].
inline ExponentialFit fit_exponential(const std::vector<double>& times,
                                      const std::vector<double>& values) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_exponential: size mismatch");
    std::vector<double> t, y;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (values[i] >= 0.05 && values[i] <= 0.9) {
            t.push_back(times[i]);
            y.push_back(std::log(values[i]));
        }
    if (t.size() < 5)
        throw std::runtime_error(
            "fit_exponential: fewer than 5 points in the fit window");
    const double n = static_cast<double>(t.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw std::runtime_error("fit_exponential: degenerate grid");
    const double slope = (n * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double pred = slope * t[i] + intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return {-slope, r2};
}

}  // namespace kasha
