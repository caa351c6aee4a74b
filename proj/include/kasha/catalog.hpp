// catalog.hpp — Dye-parameter catalog and Kasha-timescale estimator.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kasha/rates.hpp"
#include "kasha/units.hpp"

namespace kasha {

// One vibrational line of a dye spectrum, in physical units (THz angular).
struct VibrationalLine {
    double nu_thz;
    double s;
    double gamma_thz;
};

// Dye record in physical units. omega_nn is the nearest-neighbor
// dipole-dipole coupling estimate in THz (angular, 1 THz = 1e12 rad/s);
// dipole_debye is catalog metadata only, never used in dynamics.
struct DyeRecord {
    std::string name;
    double d_nm;
    double dipole_debye;
    double gamma0_mhz;
    double omega_nn_thz;
    double lambda0_nm;
    std::vector<VibrationalLine> vib_spectrum;  // sorted by nu ascending
    std::optional<double> quoted_timescale_fs;  // literature value, if any

    void validate() const {
        if (d_nm <= 0 || dipole_debye <= 0 || gamma0_mhz <= 0 ||
            omega_nn_thz <= 0 || lambda0_nm <= 0)
            throw std::invalid_argument("DyeRecord: physical fields must be positive");
        for (std::size_t i = 1; i < vib_spectrum.size(); ++i)
            if (vib_spectrum[i].nu_thz < vib_spectrum[i - 1].nu_thz)
                throw std::invalid_argument(
                    "DyeRecord: vib_spectrum must be sorted by nu ascending");
    }
};

struct RelevantModes {
    int n_max;      // modes with s >= 0.01 and nu in (0, 4*Omega]
    double s_mean;  // average Huang-Rhys factor over those modes
};

// Counts modes that can mediate the Kasha transfer: Huang-Rhys factor at
// least 0.01 and frequency inside the electronic band (0, 4*Omega].
// n_max = 0 means "no Kasha channel", not an error.
inline RelevantModes count_relevant_modes(const DyeRecord& record) {
    record.validate();
    int n_max = 0;
    double s_sum = 0.0;
    const double band_top = 4.0 * record.omega_nn_thz;
    for (const auto& line : record.vib_spectrum)
        if (line.s >= 0.01 && line.nu_thz > 0.0 && line.nu_thz <= band_top) {
            ++n_max;
            s_sum += line.s;
        }
    return {n_max, n_max > 0 ? s_sum / n_max : 0.0};
}

// Kasha timescale 1/kappa_S in femtoseconds from the scaling law.
inline double estimate_timescale(const DyeRecord& record) {
    const auto rel = count_relevant_modes(record);
    if (rel.n_max < 1)
        throw std::domain_error("estimate_timescale: no Kasha channel for " +
                                record.name);
    const double omega_si = units::rate_to_si(record.omega_nn_thz, "THz");
    const double kappa_si = scaling_law(rel.s_mean, omega_si, rel.n_max);
    return units::inverse_rate_fs(kappa_si);
}

// Bundled records encode the published aggregate parameters; the mode lists
// are reconstructed so that (n_max, s_mean) match the quoted values. Full
// literature spectra are user-suppliable, not vendored.
inline std::vector<DyeRecord> bundled_dyes() {
    auto make_spectrum = [](double omega_thz, int n_max, double s) {
        std::vector<VibrationalLine> lines;
        for (int m = 1; m <= n_max; ++m) {
            const double nu = 4.0 * omega_thz * m / n_max;
            lines.push_back({nu, s, nu / 10.0});
        }
        return lines;
    };
    std::vector<DyeRecord> dyes;
    {
        DyeRecord cv{"Cresyl Violet", 2.0, 1.8, 455.0, 23.0, 590.0,
                     make_spectrum(23.0, 12, 0.09), 13.0};
        // weak and out-of-band lines exercise the relevance filter
        cv.vib_spectrum.insert(cv.vib_spectrum.begin(), {3.0, 0.004, 0.3});
        cv.vib_spectrum.push_back({110.0, 0.15, 11.0});
        dyes.push_back(std::move(cv));
    }
    dyes.push_back({"Rhodamine 800", 2.0, 1.8, 525.0, 8.0, 680.0,
                    make_spectrum(8.0, 16, 0.067), 30.0});
    dyes.push_back({"BChl a", 1.0, 6.4, 335.0, 6.0, 780.0,
                    make_spectrum(6.0, 25, 0.07), 34.0});
    return dyes;
}

}  // namespace kasha
