// units.hpp — Unit parsing and conversion between physical and internal units.
//
// Internally everything runs in units of the monomer radiative rate gamma0
// (gamma0 = 1, time in 1/gamma0). Physical inputs carry explicit suffixes
// ("THz", "nm", "MHz") and are converted at the boundary. Frequencies quoted
// in THz are treated as angular rates, 1 THz = 1e12 rad/s.

#pragma once

#include <stdexcept>
#include <string>

namespace kasha::units {

// rate suffix -> rad/s (or 1/s for loss rates; same numeric factor)
inline double rate_to_si(double value, const std::string& suffix) {
    if (suffix == "THz") return value * 1e12;
    if (suffix == "GHz") return value * 1e9;
    if (suffix == "MHz") return value * 1e6;
    if (suffix == "kHz") return value * 1e3;
    if (suffix == "Hz") return value;
    throw std::invalid_argument("unknown rate unit '" + suffix + "'");
}

// length suffix -> meters
inline double length_to_si(double value, const std::string& suffix) {
    if (suffix == "nm") return value * 1e-9;
    if (suffix == "um") return value * 1e-6;
    if (suffix == "m") return value;
    throw std::invalid_argument("unknown length unit '" + suffix + "'");
}

// rate in rad/s -> internal units of gamma0 (gamma0_si in 1/s)
inline double rate_to_internal(double rate_si, double gamma0_si) {
    return rate_si / gamma0_si;
}

inline double rate_from_internal(double rate_internal, double gamma0_si) {
    return rate_internal * gamma0_si;
}

// inverse rate in rad/s -> femtoseconds
inline double inverse_rate_fs(double rate_si) {
    if (rate_si <= 0.0) throw std::domain_error("rate must be positive");
    return 1e15 / rate_si;
}

}  // namespace kasha::units
