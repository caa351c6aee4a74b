// aggregate.hpp — Physical system definition: monomer chain geometry,
// optical parameters and intramolecular vibrational modes.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

namespace kasha {

// Underdamped intramolecular vibration: frequency nu, relaxation rate
// gamma_vib, Huang-Rhys factor s. All rates in internal gamma0 units.
struct VibrationalMode {
    double nu;
    double gamma_vib;
    double s;

    VibrationalMode(double nu_, double gamma_vib_, double s_)
        : nu(nu_), gamma_vib(gamma_vib_), s(s_) {
        if (nu <= 0.0) throw std::invalid_argument("VibrationalMode: nu must be > 0");
        if (gamma_vib <= 0.0)
            throw std::invalid_argument("VibrationalMode: gamma_vib must be > 0");
        if (s < 0.0) throw std::invalid_argument("VibrationalMode: s must be >= 0");
        if (gamma_vib >= nu)
            throw std::invalid_argument(
                "VibrationalMode: underdamped regime requires gamma_vib < nu");
        if (gamma_vib * 10.0 > nu * (1.0 + 1e-9))
            std::cerr << "warning: vibrational quality factor nu/gamma_vib = "
                      << nu / gamma_vib << " < 10\n";
    }
};

// Chain of identical monomers. Positions default to an equidistant chain
// along x with all dipoles along z (H-configuration, dipoles perpendicular
// to the chain).
struct AggregateSpec {
    int N;
    double d;       // lattice spacing
    double k0;      // optical wavevector 2*pi/lambda0
    double omega0;  // electronic transition frequency
    double gamma0;  // monomer radiative rate (1 in internal units)
    Eigen::Vector3d dipole_orientation;
    std::vector<Eigen::Vector3d> positions;
    std::vector<VibrationalMode> modes;

    AggregateSpec(int N_, double d_, double k0_,
                  std::vector<VibrationalMode> modes_ = {}, double omega0_ = 0.0,
                  double gamma0_ = 1.0,
                  Eigen::Vector3d dipole = Eigen::Vector3d(0, 0, 1),
                  std::vector<Eigen::Vector3d> positions_ = {})
        : N(N_),
          d(d_),
          k0(k0_),
          omega0(omega0_),
          gamma0(gamma0_),
          dipole_orientation(std::move(dipole)),
          positions(std::move(positions_)),
          modes(std::move(modes_)) {
        if (N < 2) throw std::invalid_argument("AggregateSpec: N must be >= 2");
        if (d <= 0.0) throw std::invalid_argument("AggregateSpec: d must be > 0");
        if (k0 <= 0.0) throw std::invalid_argument("AggregateSpec: k0 must be > 0");
        if (k0 * d >= 1.0)
            throw std::invalid_argument(
                "AggregateSpec: subwavelength regime requires k0*d < 1");
        if (gamma0 <= 0.0)
            throw std::invalid_argument("AggregateSpec: gamma0 must be > 0");
        if (std::abs(dipole_orientation.norm() - 1.0) > 1e-12)
            throw std::invalid_argument(
                "AggregateSpec: dipole_orientation must have unit norm");
        if (positions.empty()) {
            positions.reserve(N);
            for (int j = 0; j < N; ++j)
                positions.emplace_back(j * d, 0.0, 0.0);
        }
        if (static_cast<int>(positions.size()) != N)
            throw std::invalid_argument("AggregateSpec: positions must have N entries");
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                if ((positions[i] - positions[j]).norm() == 0.0)
                    throw std::invalid_argument(
                        "AggregateSpec: positions must be pairwise distinct");
    }

    // Stokes shift sum_m s_m nu_m of the bare electronic frequency.
    double stokes_shift() const {
        double shift = 0.0;
        for (const auto& m : modes) shift += m.s * m.nu;
        return shift;
    }
};

}  // namespace kasha
