// rates.hpp — Vibrationally mediated transfer rates between collective
// states, the aggregate Kasha rate and its closed-form scaling law, and the
// population rate equations.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "kasha/aggregate.hpp"
#include "kasha/band.hpp"
#include "kasha/ode.hpp"

namespace kasha {

// Lorentzian transfer rate mediated by one vibrational mode between two
// collective states, kappa = 2 s nu^2 (Gamma + gamma_a)/N /
// ((Gamma + gamma_a)^2 + 4 (shift_a - shift_b - nu)^2).
inline double pairwise_rate(const VibrationalMode& mode, double shift_a,
                            double shift_b, double gamma_a, int N) {
    if (N < 2) throw std::invalid_argument("pairwise_rate: N must be >= 2");
    const double width = mode.gamma_vib + gamma_a;
    const double detuning = shift_a - shift_b - mode.nu;
    return 2.0 * mode.s * mode.nu * mode.nu * width / N /
           (width * width + 4.0 * detuning * detuning);
}

// Total Kasha rate: double sum of pairwise rates from the symmetric state
// into every dark state over all modes.
inline double total_kasha_rate(const ExcitonBand& band,
                               const std::vector<VibrationalMode>& modes) {
    const int N = band.size();
    const double shift_s = band.symmetric_shift();
    const double gamma_s = band.symmetric_decay();
    double total = 0.0;
    for (const auto& mode : modes)
        for (int b = 0; b < N; ++b) {
            if (b == band.symmetric_index) continue;
            total += pairwise_rate(mode, shift_s, band.shifts(b), gamma_s, N);
        }
    return total;
}

// Constant-density-of-states closed approximation,
// kappa_S ~ sum_m Gamma_m/(2 Omega) * s_m nu_m^2 / (Gamma_m + gamma_S).
inline double kasha_rate_closed_form(const std::vector<VibrationalMode>& modes,
                                     double omega_nn, double gamma_s) {
    double total = 0.0;
    for (const auto& mode : modes)
        total += mode.gamma_vib / (2.0 * omega_nn) * mode.s * mode.nu * mode.nu /
                 (mode.gamma_vib + gamma_s);
    return total;
}

// Scaling law kappa_S = (4 s Omega / 3) (n_max + 1)(2 n_max + 1) / n_max for
// equidistant modes nu_m = m 4 Omega / n_max. The Gamma_m / nu_m ratio cancels
// in the derivation as long as gamma_S << Gamma_m.
inline double scaling_law(double s_mean, double omega_nn, int n_max) {
    if (n_max < 1) throw std::domain_error("scaling_law: n_max must be >= 1");
    if (s_mean < 0.0) throw std::domain_error("scaling_law: s_mean must be >= 0");
    if (omega_nn <= 0.0) throw std::domain_error("scaling_law: omega_nn must be > 0");
    return 4.0 * s_mean * omega_nn / 3.0 * (n_max + 1.0) * (2.0 * n_max + 1.0) /
           n_max;
}

// Full incoherent rate model between collective states. transfer(a, b) is the
// a -> b rate; generator(b, a) = transfer(a, b) with diagonal chosen so that
// probability leaks only radiatively (column sums equal -gamma_a).
struct RateModel {
    ExcitonBand band;
    Eigen::MatrixXd transfer;
    Eigen::VectorXd radiative;
    Eigen::MatrixXd generator;
};

inline RateModel build_rate_model(const ExcitonBand& band,
                                  const std::vector<VibrationalMode>& modes) {
    const int N = band.size();
    RateModel model;
    model.band = band;
    model.transfer = Eigen::MatrixXd::Zero(N, N);
    model.radiative = band.decays;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            double rate = 0.0;
            for (const auto& mode : modes)
                rate += pairwise_rate(mode, band.shifts(a), band.shifts(b),
                                      band.decays(a), N);
            model.transfer(a, b) = rate;
        }
    model.generator = model.transfer.transpose();
    for (int a = 0; a < N; ++a)
        model.generator(a, a) = -model.radiative(a) - model.transfer.row(a).sum();
    return model;
}

// Population trajectory of the rate model: per-time per-state populations
// plus cumulative radiative loss.
struct PopulationTrajectory {
    std::vector<double> times;
    Eigen::MatrixXd populations;  // row per time, column per state
    Eigen::VectorXd emitted;
};

// Solves p' = L p on the grid with the exact linear propagator (matrix
// exponential per grid interval, cached for repeated spacings).
inline PopulationTrajectory integrate_rate_equations(
    const RateModel& model, const Eigen::VectorXd& p0,
    const std::vector<double>& t_grid) {
    if (!model.generator.allFinite())
        throw std::invalid_argument(
            "integrate_rate_equations: non-finite generator entries");
    if (p0.minCoeff() < 0.0)
        throw std::invalid_argument("integrate_rate_equations: negative p0");
    if (p0.sum() > 1.0 + 1e-12)
        throw std::invalid_argument("integrate_rate_equations: sum p0 > 1");
    const int N = static_cast<int>(p0.size());
    PopulationTrajectory traj;
    traj.times = t_grid;
    traj.populations.resize(t_grid.size(), N);
    traj.emitted.resize(t_grid.size());
    Eigen::VectorXd p = p0;
    const double total0 = p0.sum();
    double cached_dt = -1.0;
    Eigen::MatrixXd propagator;
    double t_prev = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double dt = t_grid[i] - (i == 0 ? 0.0 : t_prev);
        if (dt < 0.0)
            throw std::invalid_argument("integrate_rate_equations: grid not sorted");
        if (dt > 0.0) {
            if (std::abs(dt - cached_dt) > 1e-15 * std::max(dt, cached_dt)) {
                propagator = (model.generator * dt).exp();
                cached_dt = dt;
            }
            p = propagator * p;
        }
        t_prev = t_grid[i];
        traj.populations.row(i) = p.transpose();
        traj.emitted(i) = total0 - p.sum();
    }
    return traj;
}

// Adaptive-step cross-check of the matrix-exponential propagator.
inline PopulationTrajectory integrate_rate_equations_adaptive(
    const RateModel& model, const Eigen::VectorXd& p0,
    const std::vector<double>& t_grid, OdeOptions opts = {}) {
    if (!model.generator.allFinite())
        throw std::invalid_argument(
            "integrate_rate_equations: non-finite generator entries");
    PopulationTrajectory traj;
    traj.times = t_grid;
    traj.populations.resize(t_grid.size(), p0.size());
    traj.emitted.resize(t_grid.size());
    Eigen::VectorXd p = p0;
    const double total0 = p0.sum();
    auto rhs = [&model](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        return model.generator * y;
    };
    auto stepper = make_dopri5<Eigen::VectorXd>(rhs, opts);
    double t = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        stepper.integrate(p, t, t_grid[i]);
        traj.populations.row(i) = p.transpose();
        traj.emitted(i) = total0 - p.sum();
    }
    return traj;
}

}  // namespace kasha
