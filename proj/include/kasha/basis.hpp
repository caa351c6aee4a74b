// basis.hpp — Deterministic enumeration of the single-excitation basis:
// |j; vac> states first, then |j; (j', m)> in lexicographic (j, j', m) order.

#pragma once

#include <stdexcept>

namespace kasha {

struct SingleExcitationBasis {
    int n_monomers = 0;  // N
    int n_modes = 0;     // vibrational modes per monomer

    SingleExcitationBasis() = default;
    SingleExcitationBasis(int N, int n) : n_monomers(N), n_modes(n) {
        if (N < 1 || n < 0)
            throw std::invalid_argument("SingleExcitationBasis: invalid sizes");
    }

    int dimension() const {
        return n_monomers + n_monomers * n_monomers * n_modes;
    }

    // electronic excitation on j, vibrational vacuum
    int vacuum(int j) const { return j; }

    // electronic excitation on j_el, one quantum in mode m of monomer j_vib
    int phonon(int j_el, int j_vib, int m) const {
        return n_monomers +
               (j_el * n_monomers + j_vib) * n_modes + m;
    }

    struct Entry {
        int j_el;
        int j_vib;  // -1 in the vacuum sector
        int m;      // -1 in the vacuum sector
        bool has_phonon;
    };

    Entry decode(int idx) const {
        if (idx < 0 || idx >= dimension())
            throw std::out_of_range("SingleExcitationBasis: index out of range");
        if (idx < n_monomers) return {idx, -1, -1, false};
        const int rest = idx - n_monomers;
        const int m = rest % n_modes;
        const int pair = rest / n_modes;
        return {pair / n_monomers, pair % n_monomers, m, true};
    }
};

}  // namespace kasha
