// green.hpp — Free-space electromagnetic Green's tensor and the pairwise
// coherent shifts Omega_jj' / dissipative couplings gamma_jj' it generates.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "kasha/aggregate.hpp"

namespace kasha {

// Coherent shift matrix Omega_jj' (zero diagonal) and dissipative matrix
// gamma_jj' (diagonal gamma0), both real symmetric, in internal units.
struct CouplingMatrices {
    Eigen::MatrixXd omega;
    Eigen::MatrixXd gamma;
};

// Free-space dyadic Green's tensor G(r, omega0) at displacement r for
// wavevector k0. Symmetric and even in r. The r -> 0 self-term is handled
// analytically in coupling_matrices, never here.
inline Eigen::Matrix3cd green_tensor(const Eigen::Vector3d& r, double k0) {
    const double rn = r.norm();
    if (rn <= 0.0) throw std::domain_error("green_tensor: zero-length displacement");
    if (k0 <= 0.0) throw std::domain_error("green_tensor: k0 must be > 0");
    const std::complex<double> i(0.0, 1.0);
    const double x = k0 * rn;
    const std::complex<double> pref =
        std::exp(i * x) / (4.0 * std::numbers::pi * k0 * k0 * rn * rn * rn);
    const std::complex<double> a = x * x + i * x - 1.0;
    const std::complex<double> b = -x * x - 3.0 * i * x + 3.0;
    const Eigen::Matrix3d rr = (r * r.transpose()) / (rn * rn);
    return pref * (a * Eigen::Matrix3d::Identity() + b * rr);
}

// Omega_jj'/gamma0 = -3*pi/k0 * mu . Re G(r_jj') . mu, and
// gamma_jj'/gamma0 = 6*pi/k0 * mu . Im G(r_jj') . mu with the coincidence
// limit fixed analytically to gamma_jj = gamma0.
inline CouplingMatrices coupling_matrices(const AggregateSpec& spec) {
    const int N = spec.N;
    const Eigen::Vector3d& mu = spec.dipole_orientation;
    CouplingMatrices c;
    c.omega = Eigen::MatrixXd::Zero(N, N);
    c.gamma = Eigen::MatrixXd::Zero(N, N);
    const double pref = 3.0 * std::numbers::pi / spec.k0 * spec.gamma0;
    for (int j = 0; j < N; ++j) {
        c.gamma(j, j) = spec.gamma0;
        for (int jp = j + 1; jp < N; ++jp) {
            const Eigen::Matrix3cd G =
                green_tensor(spec.positions[j] - spec.positions[jp], spec.k0);
            const std::complex<double> proj = mu.transpose() * (G * mu);
            const double om = -pref * proj.real();
            const double ga = 2.0 * pref * proj.imag();
            c.omega(j, jp) = c.omega(jp, j) = om;
            c.gamma(j, jp) = c.gamma(jp, j) = ga;
        }
    }
    return c;
}

}  // namespace kasha
