// effective_hamiltonian.hpp — Sparse non-Hermitian Hamiltonian on the
// single-excitation basis plus the jump channels of the unraveling.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "kasha/aggregate.hpp"
#include "kasha/basis.hpp"
#include "kasha/green.hpp"

namespace kasha {

using SparseCd = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

// Vibrational collapse channel O_jm = b_jm - sqrt(s_m) sigma_j^dag sigma_j
// at rate Gamma_m. Jumps stay inside the single-excitation manifold.
struct VibrationalChannel {
    int monomer;
    int mode;
    double rate;
    SparseCd op;
};

// Radiative collapse channel: eigenvector of the gamma matrix with
// eigenvalue `rate`. A radiative jump removes the excitation from the
// manifold and terminates the trajectory.
struct RadiativeChannel {
    double rate;
    Eigen::VectorXd weights;  // per-monomer amplitude coefficients
};

struct EffectiveHamiltonian {
    SingleExcitationBasis basis;
    SparseCd matrix;
    std::vector<VibrationalChannel> vibrational;
    std::vector<RadiativeChannel> radiative;
};

struct HamiltonianOptions {
    bool include_stokes_shift = true;
    // per-monomer static frequency offsets delta_j added to the electronic
    // diagonal (empty -> none)
    Eigen::VectorXd detuning;
    // hard cap on the basis dimension; exceeding it is a sizing error
    int max_dimension = 200000;
};

// Assembles H_eff = sum_j (h^(j) + sum_j' (Omega_jj' - i gamma_jj'/2)
// sigma_j^dag sigma_j' - (i/2) sum_m Gamma_m O_jm^dag O_jm) restricted to the
// single-excitation sector. The vibronic term -sqrt(s_m) nu_m connects
// |j; vac> and |j; (j, m)> only.
inline EffectiveHamiltonian build_effective_hamiltonian(
    const AggregateSpec& spec, const CouplingMatrices& couplings,
    const HamiltonianOptions& opts = {}) {
    const int N = spec.N;
    const int n = static_cast<int>(spec.modes.size());
    SingleExcitationBasis basis(N, n);
    const int dim = basis.dimension();
    if (dim > opts.max_dimension) {
        const double gib = 16.0 * static_cast<double>(dim) * dim / (1 << 30);
        throw std::length_error(
            "build_effective_hamiltonian: basis dimension " + std::to_string(dim) +
            " exceeds cap " + std::to_string(opts.max_dimension) +
            " (a dense density matrix at this size would need about " +
            std::to_string(gib) + " GiB)");
    }
    if (opts.detuning.size() != 0 && opts.detuning.size() != N)
        throw std::invalid_argument(
            "build_effective_hamiltonian: detuning must have N entries");

    EffectiveHamiltonian h;
    h.basis = basis;
    const std::complex<double> i(0.0, 1.0);
    const double stokes = opts.include_stokes_shift ? spec.stokes_shift() : 0.0;

    std::vector<Eigen::Triplet<std::complex<double>>> trip;
    trip.reserve(static_cast<std::size_t>(dim) * (N + 2));

    auto electronic_diag = [&](int j) {
        double e = spec.omega0 + stokes;
        if (opts.detuning.size() == N) e += opts.detuning(j);
        return e;
    };

    // diagonal: electronic energy, vibrational quantum, radiative self-term
    for (int j = 0; j < N; ++j) {
        trip.emplace_back(basis.vacuum(j), basis.vacuum(j),
                          electronic_diag(j) - 0.5 * i * couplings.gamma(j, j));
        for (int jp = 0; jp < N; ++jp)
            for (int m = 0; m < n; ++m) {
                const int idx = basis.phonon(j, jp, m);
                trip.emplace_back(idx, idx,
                                  electronic_diag(j) + spec.modes[m].nu -
                                      0.5 * i * couplings.gamma(j, j));
            }
    }

    // dipole-dipole hops (Omega_jj' - i gamma_jj'/2), vibrational part intact
    for (int j = 0; j < N; ++j)
        for (int jp = 0; jp < N; ++jp) {
            if (j == jp) continue;
            const std::complex<double> hop =
                couplings.omega(j, jp) - 0.5 * i * couplings.gamma(j, jp);
            trip.emplace_back(basis.vacuum(j), basis.vacuum(jp), hop);
            for (int jv = 0; jv < N; ++jv)
                for (int m = 0; m < n; ++m)
                    trip.emplace_back(basis.phonon(j, jv, m),
                                      basis.phonon(jp, jv, m), hop);
        }

    // on-site vibronic coupling
    for (int j = 0; j < N; ++j)
        for (int m = 0; m < n; ++m) {
            const double g = -std::sqrt(spec.modes[m].s) * spec.modes[m].nu;
            trip.emplace_back(basis.vacuum(j), basis.phonon(j, j, m), g);
            trip.emplace_back(basis.phonon(j, j, m), basis.vacuum(j), g);
        }

    h.matrix.resize(dim, dim);
    h.matrix.setFromTriplets(trip.begin(), trip.end());

    // vibrational collapse operators and their -i/2 Gamma O^dag O contribution
    for (int j = 0; j < N; ++j)
        for (int m = 0; m < n; ++m) {
            VibrationalChannel ch;
            ch.monomer = j;
            ch.mode = m;
            ch.rate = spec.modes[m].gamma_vib;
            std::vector<Eigen::Triplet<std::complex<double>>> ot;
            const double root_s = std::sqrt(spec.modes[m].s);
            for (int je = 0; je < N; ++je)
                ot.emplace_back(basis.vacuum(je), basis.phonon(je, j, m), 1.0);
            ot.emplace_back(basis.vacuum(j), basis.vacuum(j), -root_s);
            for (int jv = 0; jv < N; ++jv)
                for (int mm = 0; mm < n; ++mm)
                    ot.emplace_back(basis.phonon(j, jv, mm),
                                    basis.phonon(j, jv, mm), -root_s);
            ch.op.resize(dim, dim);
            ch.op.setFromTriplets(ot.begin(), ot.end());
            h.matrix += (-0.5 * i * ch.rate) *
                        SparseCd(ch.op.adjoint() * ch.op);
            h.vibrational.push_back(std::move(ch));
        }

    // radiative channels: eigenbasis of the gamma matrix, rates clamped >= 0
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(couplings.gamma);
    for (int k = 0; k < N; ++k) {
        const double rate = std::max(es.eigenvalues()(k), 0.0);
        if (rate <= 0.0) continue;
        h.radiative.push_back({rate, es.eigenvectors().col(k)});
    }
    return h;
}

}  // namespace kasha
