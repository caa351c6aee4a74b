// projection.hpp — Populations of collective states from single-excitation
// wave functions or density matrices, traced over the vibrational index.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "kasha/band.hpp"
#include "kasha/basis.hpp"

namespace kasha {

// p_q = sum_v |<mode_vector_q (x) v | psi>|^2 over vibrational parts v.
inline Eigen::VectorXd project_to_band(const Eigen::VectorXcd& psi,
                                       const ExcitonBand& band,
                                       const SingleExcitationBasis& basis) {
    const int N = basis.n_monomers;
    const int n = basis.n_modes;
    if (psi.size() != basis.dimension() || band.size() != N)
        throw std::invalid_argument("project_to_band: dimension mismatch");
    Eigen::VectorXd populations = Eigen::VectorXd::Zero(N);
    Eigen::VectorXcd amp(N);
    auto accumulate = [&](const Eigen::VectorXcd& a) {
        populations += (band.mode_vectors.adjoint() * a).cwiseAbs2();
    };
    for (int j = 0; j < N; ++j) amp(j) = psi(basis.vacuum(j));
    accumulate(amp);
    for (int jv = 0; jv < N; ++jv)
        for (int m = 0; m < n; ++m) {
            for (int j = 0; j < N; ++j) amp(j) = psi(basis.phonon(j, jv, m));
            accumulate(amp);
        }
    return populations;
}

// Density-matrix variant: p_q = sum_v <q,v| rho |q,v>.
inline Eigen::VectorXd project_to_band(const Eigen::MatrixXcd& rho,
                                       const ExcitonBand& band,
                                       const SingleExcitationBasis& basis) {
    const int N = basis.n_monomers;
    const int n = basis.n_modes;
    if (rho.rows() != basis.dimension() || rho.cols() != basis.dimension() ||
        band.size() != N)
        throw std::invalid_argument("project_to_band: dimension mismatch");
    Eigen::VectorXd populations = Eigen::VectorXd::Zero(N);
    Eigen::MatrixXcd block(N, N);
    auto accumulate = [&](const Eigen::MatrixXcd& blk) {
        for (int c = 0; c < N; ++c) {
            const Eigen::VectorXcd v = band.mode_vectors.col(c);
            populations(c) += (v.adjoint() * blk * v)(0, 0).real();
        }
    };
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            block(a, b) = rho(basis.vacuum(a), basis.vacuum(b));
    accumulate(block);
    for (int jv = 0; jv < N; ++jv)
        for (int m = 0; m < n; ++m) {
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    block(a, b) = rho(basis.phonon(a, jv, m), basis.phonon(b, jv, m));
            accumulate(block);
        }
    return populations;
}

}  // namespace kasha
