// disorder.hpp — Static frequency disorder: sampling, collective-basis image
// and ensemble decay experiments.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "kasha/band.hpp"
#include "kasha/expfit.hpp"
#include "kasha/mcwf.hpp"

namespace kasha {

enum class DisorderDistribution { Uniform, Normal };

// Static frequency disorder of width delta-omega: uniform on [-w, w] by
// default, or normal with standard deviation w.
struct DisorderSpec {
    double width = 0.0;
    DisorderDistribution distribution = DisorderDistribution::Uniform;
    int n_realizations = 1;
    std::uint64_t seed = 0;

    DisorderSpec() = default;
    DisorderSpec(double width_, int n_realizations_, std::uint64_t seed_,
                 DisorderDistribution dist = DisorderDistribution::Uniform)
        : width(width_), distribution(dist), n_realizations(n_realizations_),
          seed(seed_) {
        if (width < 0.0) throw std::invalid_argument("DisorderSpec: width < 0");
        if (n_realizations < 1)
            throw std::invalid_argument("DisorderSpec: n_realizations < 1");
    }
};

// Per-monomer shifts delta_j for one realization; deterministic per
// (seed, realization index).
inline Eigen::VectorXd sample_disorder(const DisorderSpec& spec, int N,
                                       int realization = 0) {
    std::mt19937_64 rng(detail::splitmix64(
        spec.seed ^ (0xA24BAED4963EE407ULL * (realization + 1))));
    Eigen::VectorXd delta(N);
    for (int j = 0; j < N; ++j) {
        const double u = detail::uniform01(rng);
        if (spec.distribution == DisorderDistribution::Uniform) {
            delta(j) = spec.width * (2.0 * u - 1.0);
        } else {
            // Box-Muller
            const double v = detail::uniform01(rng);
            delta(j) = spec.width * std::sqrt(-2.0 * std::log(u)) *
                       std::cos(2.0 * std::numbers::pi * v);
        }
    }
    return delta;
}

// Discrete Fourier image delta_q = (1/sqrt(N)) sum_j e^{i q j d} delta_j on
// the band's quasi-momentum grid.
inline Eigen::VectorXcd collective_disorder(const Eigen::VectorXd& delta,
                                            double d) {
    const int N = static_cast<int>(delta.size());
    const std::complex<double> i(0.0, 1.0);
    Eigen::VectorXcd dq(N);
    const auto ks = momentum_grid(N);
    for (int c = 0; c < N; ++c) {
        const double q = 2.0 * std::numbers::pi * ks[c] / (N * d);
        std::complex<double> sum(0.0, 0.0);
        for (int j = 0; j < N; ++j) sum += std::exp(i * (q * j * d)) * delta(j);
        dq(c) = sum / std::sqrt(static_cast<double>(N));
    }
    return dq;
}

struct DisorderedDecayResult {
    double width;
    double fitted_rate;       // fit of the realization-averaged p_S(t)
    double mean_rate;         // average of the per-realization fits; unbiased
                              // by the convexity of the averaged exponentials
    double rate_std_error;    // standard error of mean_rate
    double r_squared;
};

// Decay-vs-width experiment: for each width, MCWF ensembles with
// per-realization diagonal shifts, realization-averaged symmetric-state decay.
inline std::vector<DisorderedDecayResult> disordered_decay_experiment(
    const AggregateSpec& aggregate, const std::vector<double>& widths,
    const std::vector<double>& t_grid, const DisorderSpec& base,
    const McwfOptions& mcwf_opts) {
    const auto couplings = coupling_matrices(aggregate);
    const auto band = band_exact(couplings);
    std::vector<DisorderedDecayResult> results;
    for (double width : widths) {
        DisorderSpec dspec(width, base.n_realizations, base.seed,
                           base.distribution);
        Eigen::VectorXd mean_ps = Eigen::VectorXd::Zero(t_grid.size());
        std::vector<double> rates;
        for (int r = 0; r < dspec.n_realizations; ++r) {
            HamiltonianOptions hopts;
            hopts.detuning = sample_disorder(dspec, aggregate.N, r);
            const auto h = build_effective_hamiltonian(aggregate, couplings, hopts);
            Eigen::VectorXcd psi0 =
                Eigen::VectorXcd::Zero(h.basis.dimension());
            for (int j = 0; j < aggregate.N; ++j)
                psi0(h.basis.vacuum(j)) = band.mode_vectors(j, band.symmetric_index);
            psi0.normalize();
            McwfOptions opts = mcwf_opts;
            opts.seed = detail::splitmix64(mcwf_opts.seed ^
                                           (0xD1342543DE82EF95ULL * (r + 1)));
            const auto ens = mcwf_run(h, psi0, t_grid, band, opts);
            const Eigen::VectorXd ps = ens.mean_populations.col(band.symmetric_index);
            mean_ps += ps;
            std::vector<double> ps_vec(ps.data(), ps.data() + ps.size());
            try {
                rates.push_back(fit_exponential(t_grid, ps_vec).rate);
            } catch (const std::runtime_error&) {
                // realization too noisy for a window fit; skip in the spread
            }
        }
        mean_ps /= dspec.n_realizations;
        std::vector<double> mean_vec(mean_ps.data(), mean_ps.data() + mean_ps.size());
        const auto fit = fit_exponential(t_grid, mean_vec);
        double mean_rate = fit.rate, stderr_rate = 0.0;
        if (!rates.empty()) {
            double m = 0.0;
            for (double x : rates) m += x;
            m /= rates.size();
            mean_rate = m;
            if (rates.size() > 1) {
                double var = 0.0;
                for (double x : rates) var += (x - m) * (x - m);
                var /= (rates.size() - 1);
                stderr_rate = std::sqrt(var / rates.size());
            }
        }
        results.push_back({width, fit.rate, mean_rate, stderr_rate, fit.r_squared});
    }
    return results;
}

}  // namespace kasha
