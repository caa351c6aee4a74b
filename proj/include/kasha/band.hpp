// band.hpp — Collective electronic basis: quasi-momentum states, band
// energies Omega_q, collective decay rates and coefficient vectors.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kasha/green.hpp"

namespace kasha {

// Collective exciton band. Columns of mode_vectors hold the coefficient
// vector of each collective state; symmetric_index marks the q = 0 /
// top-of-band symmetric state.
struct ExcitonBand {
    std::vector<double> q_values;  // empty in exact mode
    Eigen::VectorXd shifts;        // Omega_q
    Eigen::VectorXd decays;        // gamma_q
    Eigen::MatrixXcd mode_vectors;
    int symmetric_index = 0;

    int size() const { return static_cast<int>(shifts.size()); }
    double symmetric_shift() const { return shifts(symmetric_index); }
    double symmetric_decay() const { return decays(symmetric_index); }
};

// Quasi-momentum grid q = 2*pi*k/(N*d). Even N uses the DFT grid
// k in {-N/2, ..., N/2 - 1}; odd N uses k in {-(N-1)/2, ..., (N-1)/2}.
inline std::vector<int> momentum_grid(int N) {
    std::vector<int> ks;
    ks.reserve(N);
    for (int k = -(N / 2); k < N - N / 2; ++k) ks.push_back(k);
    return ks;
}

// Analytic periodic nearest-neighbor band: shifts 2*Omega*cos(q d), the
// Dicke-limit decays (N*gamma0 for q = 0, exactly zero for dark states) and
// plane-wave mode vectors.
inline ExcitonBand band_analytic(double omega_nn, int N, double d,
                                 double gamma0 = 1.0) {
    if (N < 2) throw std::invalid_argument("band_analytic: N must be >= 2");
    ExcitonBand band;
    const auto ks = momentum_grid(N);
    band.shifts.resize(N);
    band.decays = Eigen::VectorXd::Zero(N);
    band.mode_vectors.resize(N, N);
    band.q_values.reserve(N);
    const std::complex<double> i(0.0, 1.0);
    for (int c = 0; c < N; ++c) {
        const double q = 2.0 * std::numbers::pi * ks[c] / (N * d);
        band.q_values.push_back(q);
        band.shifts(c) = 2.0 * omega_nn * std::cos(q * d);
        for (int j = 0; j < N; ++j)
            band.mode_vectors(j, c) =
                std::exp(i * (q * j * d)) / std::sqrt(static_cast<double>(N));
        if (ks[c] == 0) {
            band.symmetric_index = c;
            band.decays(c) = N * gamma0;
        }
    }
    return band;
}

// Exact band from diagonalizing the full coupling matrix (open chain,
// all neighbors). Decays are the diagonal of the gamma matrix transformed
// into the eigenbasis. States sorted by shift descending, so index 0 is the
// most superradiant top-of-band state in the H-configuration.
inline ExcitonBand band_exact(const CouplingMatrices& couplings) {
    const int N = static_cast<int>(couplings.omega.rows());
    if (!couplings.omega.isApprox(couplings.omega.transpose(), 1e-12))
        throw std::invalid_argument("band_exact: omega matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(couplings.omega);
    // eigenvalues ascending; reverse for shift-descending order
    ExcitonBand band;
    band.shifts.resize(N);
    band.decays.resize(N);
    band.mode_vectors.resize(N, N);
    for (int c = 0; c < N; ++c) {
        const int src = N - 1 - c;
        Eigen::VectorXd v = es.eigenvectors().col(src);
        // fix sign so the symmetric state has positive components
        if (v.sum() < 0.0) v = -v;
        band.shifts(c) = es.eigenvalues()(src);
        band.decays(c) = v.transpose() * couplings.gamma * v;
        band.mode_vectors.col(c) = v.cast<std::complex<double>>();
    }
    band.symmetric_index = 0;
    return band;
}

// Cosine-sum band shifts Omega_q from the first coupling row. In periodic
// mode the row must be circulant-symmetric and the shifts are the exact
// circulant eigenvalues sum_j Omega_1j cos(q (j-1) d). Otherwise the open
// row is read as half-line couplings of a translationally invariant chain,
// Omega_q = 2 sum_j Omega_1j cos(q (j-1) d).
inline std::vector<double> full_band_shifts(const CouplingMatrices& couplings,
                                            double d, bool periodic) {
    const int N = static_cast<int>(couplings.omega.rows());
    const Eigen::VectorXd row = couplings.omega.row(0);
    if (periodic) {
        const double scale = row.cwiseAbs().maxCoeff();
        for (int j = 2; j < N; ++j)
            if (std::abs(row(j - 1) - row(N + 1 - j)) > 1e-10 * scale)
                throw std::invalid_argument(
                    "full_band_shifts: non-uniform chain in periodic mode");
        for (int i = 1; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (std::abs(couplings.omega(i, j) - row((j - i + N) % N)) >
                    1e-10 * scale)
                    throw std::invalid_argument(
                        "full_band_shifts: non-uniform chain in periodic mode");
    }
    const double factor = periodic ? 1.0 : 2.0;
    std::vector<double> shifts;
    shifts.reserve(N);
    for (int k : momentum_grid(N)) {
        const double q = 2.0 * std::numbers::pi * k / (N * d);
        double sum = 0.0;
        for (int j = 1; j < N; ++j) sum += row(j) * std::cos(q * j * d);
        shifts.push_back(factor * sum);
    }
    return shifts;
}

}  // namespace kasha
