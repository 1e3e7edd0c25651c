#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qpbkit/matrix.hpp"

namespace qpbkit {

// Numeric evaluation and exact reconstruction of cyclotomic roots.
//
// Floating point is used only for discovery: every returned value is verified
// by exact arithmetic before it is accepted.

namespace numeric {

using CD = std::complex<double>;

inline std::vector<int> coprime_residues(int n) {
    std::vector<int> r;
    for (int a = 1; a <= n; ++a)
        if (std::gcd(a, n) == 1) r.push_back(a % n == 0 ? n : a);
    if (n == 1) r = {1};
    return r;
}

// zeta_N -> zeta_N^a embedding.
inline CD embed(const CycScalar& x, int a) {
    const int n = x.conductor();
    CD z = std::polar(1.0, 2.0 * 3.14159265358979323846 * a / n);
    CD acc(0.0, 0.0), p(1.0, 0.0);
    for (const auto& c : x.coeffs()) {
        acc += c.to_double() * p;
        p *= z;
    }
    return acc;
}

// Durand-Kerner on a monic polynomial (ascending coefficients, leading 1 not
// included in `coeffs`; degree = coeffs.size()).
inline std::vector<CD> roots_monic(const std::vector<CD>& coeffs) {
    const std::size_t m = coeffs.size();
    if (m == 0) return {};
    auto eval = [&](CD x) {
        CD v(1.0, 0.0);
        for (std::size_t j = m; j-- > 0;) v = v * x + coeffs[j];
        return v;
    };
    std::vector<CD> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = std::polar(0.4 + 0.9 * i, 0.9 * i + 0.5);
    for (int it = 0; it < 400; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            CD denom(1.0, 0.0);
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) denom *= r[i] - r[j];
            CD delta = eval(r[i]) / denom;
            r[i] -= delta;
            moved += std::abs(delta);
        }
        if (moved < 1e-13) break;
    }
    return r;
}

}  // namespace numeric

// Monic minimal polynomial of a square matrix, ascending coefficients with the
// leading 1 omitted (so coeffs.size() = degree).
inline std::vector<CycScalar> min_poly(const Matrix& m) {
    const std::size_t n = m.rows();
    std::vector<Vec> krylov;
    Matrix power = Matrix::identity(n);
    for (std::size_t deg = 0; deg <= n; ++deg) {
        Vec flat(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = power.at(i, j);
        if (!krylov.empty()) {
            auto sol = solve_affine(Matrix::from_columns(krylov), flat);
            if (sol) {
                std::vector<CycScalar> coeffs(krylov.size());
                for (std::size_t j = 0; j < krylov.size(); ++j) coeffs[j] = -sol->particular[j];
                return coeffs;
            }
        }
        krylov.push_back(std::move(flat));
        power = power * m;
    }
    throw std::logic_error("min_poly: no dependence found");
}

// All roots in Q(zeta_conductor) of a monic polynomial over the field, exactly
// verified. Discovery runs through every complex embedding: the candidate
// coordinate vector is solved numerically from a tuple of numeric roots (one
// per embedding), rounded, and checked by exact evaluation.
inline std::vector<CycScalar> exact_roots_in_field(std::vector<CycScalar> coeffs, int conductor) {
    const std::size_t deg = coeffs.size();
    if (deg == 0) return {};
    for (auto& c : coeffs) c = c.promoted(conductor);
    // clear denominators: x = y / t turns the polynomial monic-integral in y
    BigInt t(1);
    for (const auto& c : coeffs)
        for (const auto& q : c.coeffs()) {
            BigInt g = BigInt::gcd(t, q.den());
            t = t * (q.den() / g);
        }
    Rational tr(t);
    std::vector<CycScalar> scaled(coeffs.size());
    {
        Rational power(1);
        for (std::size_t j = deg; j-- > 0;) {
            power *= tr;
            scaled[j] = CycScalar(power) * coeffs[j];
        }
    }
    const auto residues = numeric::coprime_residues(conductor);
    const std::size_t phi = residues.size();
    // numeric roots per embedding
    std::vector<std::vector<numeric::CD>> roots(phi);
    for (std::size_t s = 0; s < phi; ++s) {
        std::vector<numeric::CD> emb(deg);
        for (std::size_t j = 0; j < deg; ++j) emb[j] = numeric::embed(scaled[j], residues[s]);
        roots[s] = numeric::roots_monic(emb);
    }
    // embedding matrix V[s][k] = sigma_s(zeta^k), inverted numerically
    std::vector<std::vector<numeric::CD>> vinv(phi, std::vector<numeric::CD>(2 * phi));
    {
        for (std::size_t s = 0; s < phi; ++s) {
            numeric::CD z =
                std::polar(1.0, 2.0 * 3.14159265358979323846 * residues[s] / conductor);
            numeric::CD p(1.0, 0.0);
            for (std::size_t k = 0; k < phi; ++k) {
                vinv[s][k] = p;
                p *= z;
            }
            for (std::size_t k = 0; k < phi; ++k) vinv[s][phi + k] = s == k ? 1.0 : 0.0;
        }
        for (std::size_t c = 0; c < phi; ++c) {
            std::size_t piv = c;
            for (std::size_t r2 = c + 1; r2 < phi; ++r2)
                if (std::abs(vinv[r2][c]) > std::abs(vinv[piv][c])) piv = r2;
            std::swap(vinv[c], vinv[piv]);
            numeric::CD d = vinv[c][c];
            for (auto& x : vinv[c]) x /= d;
            for (std::size_t r2 = 0; r2 < phi; ++r2) {
                if (r2 == c) continue;
                numeric::CD f = vinv[r2][c];
                for (std::size_t k = 0; k < 2 * phi; ++k) vinv[r2][k] -= f * vinv[c][k];
            }
        }
    }
    // enumerate tuples of numeric roots, one from each embedding
    std::vector<CycScalar> found;
    std::size_t tuple_count = 1;
    for (std::size_t s = 0; s < phi; ++s) tuple_count *= deg;
    if (tuple_count > 200000)
        throw std::runtime_error("exact_roots_in_field: search space too large");
    std::vector<std::size_t> idx(phi, 0);
    for (std::size_t step = 0; step < tuple_count; ++step) {
        std::size_t rem = step;
        for (std::size_t s = 0; s < phi; ++s) {
            idx[s] = rem % deg;
            rem /= deg;
        }
        bool plausible = true;
        std::vector<long long> coords(phi);
        for (std::size_t k = 0; k < phi && plausible; ++k) {
            numeric::CD acc(0.0, 0.0);
            for (std::size_t s = 0; s < phi; ++s) acc += vinv[k][phi + s] * roots[s][idx[s]];
            double re = acc.real();
            long long r = static_cast<long long>(std::llround(re));
            if (std::abs(re - static_cast<double>(r)) > 0.25 || std::abs(acc.imag()) > 0.25 ||
                std::abs(re) > 1e12)
                plausible = false;
            coords[k] = r;
        }
        if (!plausible) continue;
        CycScalar cand = CycScalar::zero(conductor);
        for (std::size_t k = 0; k < phi; ++k)
            cand += CycScalar::cyc(coords[k], 1, static_cast<long long>(k), conductor);
        // exact Horner evaluation of y^deg + sum scaled[j] y^j
        CycScalar val = CycScalar::one(conductor);
        for (std::size_t j = deg; j-- > 0;) val = val * cand + scaled[j];
        if (!val.is_zero()) continue;
        CycScalar root = cand * CycScalar(tr.inverse());
        bool dup = false;
        for (const auto& f : found)
            if (f == root) dup = true;
        if (!dup) found.push_back(root);
    }
    return found;
}

// Exact square root in the field, when one exists; deterministic sign choice.
inline std::optional<CycScalar> exact_sqrt(const CycScalar& x) {
    if (x.is_zero()) return CycScalar::zero(x.conductor());
    if (x.is_rational() && x.rational_value().sign() > 0) {
        // fast path for perfect rational squares
        const Rational& q = x.rational_value();
        auto isqrt = [](const BigInt& b) -> std::optional<BigInt> {
            if (b.is_negative()) return std::nullopt;
            BigInt lo(0), hi = b + BigInt(1);
            while (lo + BigInt(1) < hi) {
                BigInt mid = (lo + hi) / BigInt(2);
                if (mid * mid <= b)
                    lo = mid;
                else
                    hi = mid;
            }
            if (lo * lo == b) return lo;
            return std::nullopt;
        };
        auto sn = isqrt(q.num()), sd = isqrt(q.den());
        if (sn && sd) return CycScalar(Rational(*sn, *sd)).promoted(x.conductor());
    }
    std::vector<CycScalar> poly{-x, CycScalar::zero(x.conductor())};
    auto roots = exact_roots_in_field(std::move(poly), x.conductor());
    if (roots.empty()) return std::nullopt;
    // canonical choice: positive real part under the canonical embedding,
    // ties broken toward positive imaginary part
    CycScalar best = roots[0];
    auto key = [](const CycScalar& r) {
        auto z = r.to_complex();
        return std::make_pair(-z.real(), -z.imag());
    };
    for (const auto& r : roots)
        if (key(r) < key(best)) best = r;
    return best;
}

}  // namespace qpbkit
