// mcwf.hpp — Monte-Carlo wave-function (quantum jump) trajectory engine with
// waiting-time jump detection and deterministic parallel reduction.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kasha/band.hpp"
#include "kasha/effective_hamiltonian.hpp"
#include "kasha/ode.hpp"
#include "kasha/projection.hpp"

namespace kasha {

struct McwfOptions {
    int n_traj = 1000;
    std::uint64_t seed = 0;
    int n_workers = 1;
    double rtol = 1e-6;
    double atol = 1e-10;
    int chunk_size = 16;
    // jump times are root-localized to this relative resolution
    double jump_time_rtol = 1e-10;
};

// Trajectory-ensemble averages of the collective-state populations with
// standard errors, radiative-loss bookkeeping and per-channel jump counts.
struct EnsembleResult {
    std::vector<double> times;
    Eigen::MatrixXd mean_populations;  // time x collective state
    Eigen::MatrixXd std_errors;
    Eigen::VectorXd emitted;           // fraction of trajectories lost radiatively
    Eigen::VectorXd emitted_std_error;
    long radiative_jumps = 0;
    std::vector<long> vibrational_jumps;  // per mode
    int n_traj = 0;

    Eigen::VectorXd survival() const {
        return Eigen::VectorXd::Ones(emitted.size()) - emitted;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// platform-independent uniform double in (0, 1)
template <class Rng>
double uniform01(Rng& rng) {
    double u;
    do {
        u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
}

struct ChunkAccumulator {
    Eigen::MatrixXd pop_sum, pop_sumsq;
    Eigen::VectorXd emitted_sum, emitted_sumsq;
    long radiative_jumps = 0;
    std::vector<long> vibrational_jumps;

    ChunkAccumulator(int n_times, int n_states, int n_modes)
        : pop_sum(Eigen::MatrixXd::Zero(n_times, n_states)),
          pop_sumsq(Eigen::MatrixXd::Zero(n_times, n_states)),
          emitted_sum(Eigen::VectorXd::Zero(n_times)),
          emitted_sumsq(Eigen::VectorXd::Zero(n_times)),
          vibrational_jumps(n_modes, 0) {}
};

}  // namespace detail

// Evolves one trajectory and adds its observable records into the chunk
// accumulator. Shared inputs are immutable; all mutable state is local.
inline void mcwf_trajectory(const EffectiveHamiltonian& h,
                            const Eigen::VectorXcd& psi0,
                            const std::vector<double>& t_grid,
                            const ExcitonBand& band, const McwfOptions& opts,
                            std::uint64_t traj_seed,
                            detail::ChunkAccumulator& acc) {
    const int dim = h.basis.dimension();
    const int n_states = band.size();
    const std::complex<double> minus_i(0.0, -1.0);
    std::mt19937_64 rng(traj_seed);

    auto rhs = [&h, minus_i](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        return minus_i * (h.matrix * y);
    };
    OdeOptions ode_opts;
    ode_opts.rtol = opts.rtol;
    ode_opts.atol = opts.atol;
    auto stepper = make_dopri5<Eigen::VectorXcd>(rhs, ode_opts);

    Eigen::VectorXcd psi = psi0;
    double t = 0.0;
    double threshold = detail::uniform01(rng);
    bool alive = true;
    double death_time = 0.0;

    Eigen::VectorXd pops(n_states);
    Eigen::VectorXcd bracket_state(dim);

    auto record = [&](std::size_t grid_idx) {
        if (alive) {
            const double nrm2 = psi.squaredNorm();
            pops = project_to_band(psi, band, h.basis) / nrm2;
        } else {
            pops.setZero();
        }
        acc.pop_sum.row(grid_idx) += pops.transpose();
        acc.pop_sumsq.row(grid_idx) += pops.cwiseAbs2().transpose();
        const double em = alive ? 0.0 : 1.0;
        acc.emitted_sum(grid_idx) += em;
        acc.emitted_sumsq(grid_idx) += em;
    };

    // localizes the threshold crossing inside [t_lo, t_hi] starting from
    // state y_lo at t_lo; leaves psi at the jump time and returns it
    auto localize_jump = [&](double t_lo, Eigen::VectorXcd y_lo, double t_hi,
                             double f_hi_norm2) -> double {
        double f_lo = y_lo.squaredNorm() - threshold;
        double f_hi = f_hi_norm2 - threshold;
        const double t_scale = std::max(std::abs(t_hi), 1e-300);
        while (t_hi - t_lo > opts.jump_time_rtol * t_scale) {
            // secant guess clamped into the middle of the bracket
            double t_mid = t_lo + (t_hi - t_lo) * (f_lo / (f_lo - f_hi));
            const double lo_cap = t_lo + 0.1 * (t_hi - t_lo);
            const double hi_cap = t_hi - 0.1 * (t_hi - t_lo);
            t_mid = std::clamp(t_mid, lo_cap, hi_cap);
            Eigen::VectorXcd y_mid = y_lo;
            double tm = t_lo;
            auto local = make_dopri5<Eigen::VectorXcd>(rhs, ode_opts);
            local.integrate(y_mid, tm, t_mid);
            const double f_mid = y_mid.squaredNorm() - threshold;
            if (f_mid > 0.0) {
                t_lo = t_mid;
                y_lo = std::move(y_mid);
                f_lo = f_mid;
            } else {
                t_hi = t_mid;
                f_hi = f_mid;
            }
        }
        psi = std::move(y_lo);
        return 0.5 * (t_lo + t_hi);
    };

    auto apply_jump = [&](double t_jump) {
        // channel weights at the (unnormalized) jump state
        std::vector<double> weights;
        weights.reserve(h.vibrational.size() + h.radiative.size());
        std::vector<Eigen::VectorXcd> vib_states;
        vib_states.reserve(h.vibrational.size());
        double total = 0.0;
        for (const auto& ch : h.vibrational) {
            Eigen::VectorXcd jumped = ch.op * psi;
            const double w = ch.rate * jumped.squaredNorm();
            weights.push_back(w);
            vib_states.push_back(std::move(jumped));
            total += w;
        }
        const int N = h.basis.n_monomers;
        const int n = h.basis.n_modes;
        for (const auto& ch : h.radiative) {
            double w = 0.0;
            std::complex<double> a(0.0, 0.0);
            for (int j = 0; j < N; ++j) a += ch.weights(j) * psi(h.basis.vacuum(j));
            w += std::norm(a);
            for (int jv = 0; jv < N; ++jv)
                for (int m = 0; m < n; ++m) {
                    a = {0.0, 0.0};
                    for (int j = 0; j < N; ++j)
                        a += ch.weights(j) * psi(h.basis.phonon(j, jv, m));
                    w += std::norm(a);
                }
            weights.push_back(ch.rate * w);
            total += ch.rate * w;
        }
        if (!(total > 0.0))
            throw std::runtime_error(
                "mcwf_run: degenerate channel probabilities at a detected jump");
        double r = detail::uniform01(rng) * total;
        std::size_t pick = 0;
        for (; pick + 1 < weights.size(); ++pick) {
            if (r < weights[pick]) break;
            r -= weights[pick];
        }
        if (pick < h.vibrational.size()) {
            psi = vib_states[pick] / vib_states[pick].norm();
            ++acc.vibrational_jumps[h.vibrational[pick].mode];
            threshold = detail::uniform01(rng);
        } else {
            ++acc.radiative_jumps;
            alive = false;
            death_time = t_jump;
        }
        stepper.reset();
    };

    for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
        const double t_target = t_grid[gi];
        if (t_target < t)
            throw std::invalid_argument("mcwf_run: t_grid must be sorted");
        while (alive && t < t_target) {
            bool jumped = false;
            double t_lo = 0.0, t_hi = 0.0, norm2_hi = 0.0;
            stepper.integrate(
                psi, t, t_target,
                [&](double tp, const Eigen::VectorXcd& yp, double tc,
                    const Eigen::VectorXcd& yc) {
                    if (yc.squaredNorm() < threshold) {
                        jumped = true;
                        t_lo = tp;
                        bracket_state = yp;
                        t_hi = tc;
                        norm2_hi = yc.squaredNorm();
                        return false;
                    }
                    return true;
                });
            if (jumped) {
                const double t_jump =
                    localize_jump(t_lo, bracket_state, t_hi, norm2_hi);
                t = t_jump;
                apply_jump(t_jump);
            }
        }
        record(gi);
    }
    (void)death_time;
}

// Ensemble run. Trajectories are independent tasks over the immutable
// Hamiltonian; chunk results are merged in index order so output is
// bit-reproducible for fixed (seed, n_traj) regardless of worker count.
inline EnsembleResult mcwf_run(const EffectiveHamiltonian& h,
                               const Eigen::VectorXcd& psi0,
                               const std::vector<double>& t_grid,
                               const ExcitonBand& band,
                               const McwfOptions& opts = {}) {
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("mcwf_run: psi0 must be normalized");
    if (opts.n_traj < 1)
        throw std::invalid_argument("mcwf_run: n_traj must be >= 1");
    const int n_times = static_cast<int>(t_grid.size());
    const int n_states = band.size();
    const int n_modes = h.basis.n_modes;
    const int n_chunks =
        (opts.n_traj + opts.chunk_size - 1) / opts.chunk_size;
    std::vector<detail::ChunkAccumulator> chunks(
        n_chunks, detail::ChunkAccumulator(n_times, n_states, n_modes));

    std::atomic<int> next_chunk{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                const int c = next_chunk.fetch_add(1);
                if (c >= n_chunks) break;
                const int begin = c * opts.chunk_size;
                const int end = std::min(opts.n_traj, begin + opts.chunk_size);
                for (int idx = begin; idx < end; ++idx) {
                    const std::uint64_t traj_seed = detail::splitmix64(
                        opts.seed ^ (0x9E3779B97F4A7C15ULL * (idx + 1)));
                    mcwf_trajectory(h, psi0, t_grid, band, opts, traj_seed,
                                    chunks[c]);
                }
            }
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    const int n_workers = std::max(1, opts.n_workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    // deterministic reduction in chunk order
    EnsembleResult res;
    res.times = t_grid;
    res.n_traj = opts.n_traj;
    res.vibrational_jumps.assign(n_modes, 0);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n_times, n_states);
    Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(n_times, n_states);
    Eigen::VectorXd esum = Eigen::VectorXd::Zero(n_times);
    Eigen::VectorXd esumsq = Eigen::VectorXd::Zero(n_times);
    for (const auto& c : chunks) {
        sum += c.pop_sum;
        sumsq += c.pop_sumsq;
        esum += c.emitted_sum;
        esumsq += c.emitted_sumsq;
        res.radiative_jumps += c.radiative_jumps;
        for (int m = 0; m < n_modes; ++m)
            res.vibrational_jumps[m] += c.vibrational_jumps[m];
    }
    const double nt = static_cast<double>(opts.n_traj);
    res.mean_populations = sum / nt;
    res.std_errors =
        ((sumsq / nt - res.mean_populations.cwiseAbs2()).cwiseMax(0.0) / nt)
            .cwiseSqrt();
    res.emitted = esum / nt;
    res.emitted_std_error =
        ((esumsq / nt - res.emitted.cwiseAbs2()).cwiseMax(0.0) / nt).cwiseSqrt();
    return res;
}

}  // namespace kasha
