// dense_evolution.hpp — Dense density-matrix oracle for the dissipative
// single-excitation dynamics (small systems only).

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "kasha/effective_hamiltonian.hpp"
#include "kasha/ode.hpp"
#include "kasha/projection.hpp"
#include "kasha/rates.hpp"

namespace kasha {

// Propagates rho' = -i (H_eff rho - rho H_eff^dag) + sum Gamma O rho O^dag.
// The vibrational refilling term keeps the electronic excitation inside the
// manifold; radiative recycling leaves it, so the trace decays only
// radiatively and is tracked as emitted population. Trajectory rows hold the
// collective-state populations obtained by band projection.
inline PopulationTrajectory evolve_dense(const EffectiveHamiltonian& h,
                                         const Eigen::MatrixXcd& rho0,
                                         const std::vector<double>& t_grid,
                                         const ExcitonBand& band,
                                         OdeOptions opts = {.rtol = 1e-8,
                                                            .atol = 1e-12}) {
    const int dim = h.basis.dimension();
    if (dim > 5000)
        throw std::length_error("evolve_dense: basis dimension " +
                                std::to_string(dim) + " exceeds the oracle cap 5000");
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw std::invalid_argument("evolve_dense: rho0 dimension mismatch");
    const std::complex<double> i(0.0, 1.0);
    const Eigen::MatrixXcd H = Eigen::MatrixXcd(h.matrix);
    const Eigen::MatrixXcd H_adj = H.adjoint();
    std::vector<Eigen::MatrixXcd> ops, ops_adj;
    std::vector<double> op_rates;
    for (const auto& ch : h.vibrational) {
        ops.push_back(Eigen::MatrixXcd(ch.op));
        ops_adj.push_back(ops.back().adjoint());
        op_rates.push_back(ch.rate);
    }
    auto rhs = [&](const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd d = -i * (H * rho - rho * H_adj);
        for (std::size_t k = 0; k < ops.size(); ++k)
            d += op_rates[k] * (ops[k] * rho * ops_adj[k]);
        if (!d.allFinite())
            throw std::runtime_error("evolve_dense: non-finite step");
        return d;
    };
    auto stepper = make_dopri5<Eigen::MatrixXcd>(rhs, opts);
    PopulationTrajectory traj;
    traj.times = t_grid;
    traj.populations.resize(t_grid.size(), band.size());
    traj.emitted.resize(t_grid.size());
    Eigen::MatrixXcd rho = rho0;
    const double trace0 = rho0.trace().real();
    double t = 0.0;
    for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
        try {
            stepper.integrate(rho, t, t_grid[gi]);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string(e.what()) + " near t = " +
                                     std::to_string(t));
        }
        traj.populations.row(gi) =
            project_to_band(Eigen::MatrixXcd(rho), band, h.basis).transpose();
        traj.emitted(gi) = trace0 - rho.trace().real();
    }
    return traj;
}

}  // namespace kasha
