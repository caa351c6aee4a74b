#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "kasha/green.hpp"

using namespace kasha;

TEST_CASE("green tensor is symmetric and even in r") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Eigen::Vector3d r(u(rng), u(rng), u(rng));
        if (r.norm() < 1e-3) continue;
        const double k0 = 0.5 + 0.5 * u(rng) * u(rng);
        const auto G = green_tensor(r, k0);
        const auto Gm = green_tensor(-r, k0);
        CHECK((G - G.transpose()).norm() <= 1e-14 * G.norm());
        CHECK((G - Gm).norm() <= 1e-14 * G.norm());
    }
}

TEST_CASE("transverse component at k0 r = 1 matches the closed form") {
    const auto G = green_tensor({0.0, 0.0, 1.0}, 1.0);
    // frozen high-precision value, equal to -sin(1)/(4 pi)
    CHECK(G(0, 0).real() == doctest::Approx(-0.066962133350290942).epsilon(1e-12));
    CHECK(G(0, 0).real() ==
          doctest::Approx(-std::sin(1.0) / (4.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("green tensor rejects degenerate input") {
    CHECK_THROWS_AS(green_tensor({0, 0, 0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(green_tensor({0, 0, 1}, 0.0), std::domain_error);
}

TEST_CASE("nearest-neighbor shift calibration at k0 d = 0.0126") {
    AggregateSpec spec(2, 1.0, 0.0126);
    const auto c = coupling_matrices(spec);
    CHECK(c.omega(0, 1) == doctest::Approx(374899.75489044469).epsilon(1e-12));
    CHECK(c.omega(0, 1) > 0.0);  // symmetric state at band top
    CHECK(c.gamma(0, 1) == doctest::Approx(0.99996824827087871).epsilon(1e-12));
}

TEST_CASE("coupling matrices: diagonal, symmetry, positive semidefiniteness") {
    AggregateSpec spec(10, 1.0, 0.0126);
    const auto c = coupling_matrices(spec);
    for (int j = 0; j < 10; ++j) {
        CHECK(c.gamma(j, j) == 1.0);
        CHECK(c.omega(j, j) == 0.0);
    }
    CHECK((c.omega - c.omega.transpose()).norm() == 0.0);
    CHECK((c.gamma - c.gamma.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.gamma);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("near-field shift scales as 1/r^3") {
    const double k0 = 1.0;
    const Eigen::Vector3d mu(0, 0, 1);
    auto omega_r3 = [&](double r) {
        const auto G = green_tensor({r, 0, 0}, k0);
        const std::complex<double> proj = mu.transpose() * (G * mu);
        return -3.0 * std::numbers::pi / k0 * proj.real() * r * r * r;
    };
    const double ref = omega_r3(0.05);
    for (double r = 0.005; r <= 0.05; r *= 1.5)
        CHECK(omega_r3(r) == doctest::Approx(ref).epsilon(0.005));
}

TEST_CASE("aggregate validation") {
    CHECK_THROWS_AS(AggregateSpec(1, 1.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(AggregateSpec(2, 1.0, 1.5), std::invalid_argument);  // k0 d >= 1
    CHECK_THROWS_AS(AggregateSpec(2, -1.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(AggregateSpec(2, 1.0, 0.01, {}, 0.0, 1.0, {0, 0, 2}),
                    std::invalid_argument);
    std::vector<Eigen::Vector3d> pos{{0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(AggregateSpec(2, 1.0, 0.01, {}, 0.0, 1.0, {0, 0, 1}, pos),
                    std::invalid_argument);
    CHECK_THROWS_AS(VibrationalMode(1.0, 2.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(VibrationalMode(1.0, 0.1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(VibrationalMode(-1.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("pair couplings agree with a direct tensor evaluation") {
    AggregateSpec spec(3, 0.7, 0.013);
    const auto c = coupling_matrices(spec);
    const Eigen::Vector3d mu(0, 0, 1);
    const auto G = green_tensor(spec.positions[0] - spec.positions[2], spec.k0);
    const std::complex<double> proj = mu.transpose() * (G * mu);
    const double pref = 3.0 * std::numbers::pi / spec.k0;
    CHECK(c.omega(0, 2) == doctest::Approx(-pref * proj.real()).epsilon(1e-14));
    CHECK(c.gamma(0, 2) == doctest::Approx(2.0 * pref * proj.imag()).epsilon(1e-14));
}
