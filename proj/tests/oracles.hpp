#pragma once

// Test-only oracles, independent of the library's decomposition path.
//
// Classical character theory for a finite group given by its Cayley table:
// one-dimensional characters by exhaustive homomorphism search, plus at most
// one higher irreducible recovered from the regular character. Enough for the
// corpus groups and deliberately brute force.

#include <stdexcept>
#include <vector>

#include "qpbkit/corep.hpp"
#include "qpbkit/hopf.hpp"

namespace oracle {

using qpbkit::CayleyTable;
using qpbkit::Corep;
using qpbkit::CycScalar;
using qpbkit::Rational;

struct CharacterTable {
    int exponent = 1;
    std::vector<std::vector<CycScalar>> characters;  // characters[i][g]
    std::vector<std::size_t> degrees;
};

inline CharacterTable brute_force_characters(const CayleyTable& t) {
    const std::size_t n = t.size();
    const int m = qpbkit::group_exponent(t);
    CharacterTable table;
    table.exponent = m;
    // all homomorphisms G -> mu_m by exhaustive search over exponent tuples
    std::vector<int> expo(n, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= static_cast<std::size_t>(m);
        if (total > 2000000) throw std::runtime_error("oracle: group too large");
    }
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rem = code;
        for (std::size_t i = 0; i < n; ++i) {
            expo[i] = static_cast<int>(rem % static_cast<std::size_t>(m));
            rem /= static_cast<std::size_t>(m);
        }
        bool hom = true;
        for (std::size_t a = 0; a < n && hom; ++a)
            for (std::size_t b = 0; b < n && hom; ++b)
                if ((expo[a] + expo[b]) % m != expo[t[a][b]] % m) hom = false;
        if (!hom) continue;
        std::vector<CycScalar> chi(n);
        for (std::size_t g = 0; g < n; ++g) chi[g] = CycScalar::cyc(1, 1, expo[g], m);
        table.characters.push_back(std::move(chi));
        table.degrees.push_back(1);
    }
    // missing part from the regular character (handles exactly one higher irrep)
    std::size_t found_sq = table.degrees.size();
    if (found_sq < n) {
        long long d2 = static_cast<long long>(n - found_sq);
        long long d = 0;
        while (d * d < d2) ++d;
        if (d * d != d2)
            throw std::runtime_error("oracle: more than one nonabelian irreducible");
        std::vector<CycScalar> chi(n);
        for (std::size_t g = 0; g < n; ++g) {
            CycScalar reg = g == qpbkit::group_identity(t)
                                ? CycScalar(static_cast<long long>(n))
                                : CycScalar(0);
            CycScalar acc = reg;
            for (const auto& known : table.characters) acc -= known[g];
            chi[g] = acc * CycScalar(Rational(1, d));
        }
        table.characters.push_back(std::move(chi));
        table.degrees.push_back(static_cast<std::size_t>(d));
    }
    return table;
}

// Character of a corepresentation of the function algebra C(G): the trace of
// the corep matrix read off at each group element.
inline std::vector<CycScalar> corep_character(const Corep& c, std::size_t group_order) {
    std::vector<CycScalar> chi(group_order, CycScalar(0));
    for (std::size_t g = 0; g < group_order; ++g)
        for (std::size_t i = 0; i < c.dim; ++i) chi[g] += c.u(i, i)[g];
    return chi;
}

// <chi, psi> = (1/|G|) sum_g chi(g) conj(psi(g)), exact.
inline CycScalar character_inner(const std::vector<CycScalar>& chi,
                                 const std::vector<CycScalar>& psi) {
    CycScalar acc(0);
    for (std::size_t g = 0; g < chi.size(); ++g) acc += chi[g] * psi[g].conj();
    return acc * CycScalar(Rational(1, static_cast<long long>(chi.size())));
}

}  // namespace oracle
