#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/rational.hpp"

namespace qpbkit {

namespace detail {

// Dense polynomials over Q, little-endian coefficients, no trailing zeros.
using QPoly = std::vector<Rational>;

inline void poly_trim(QPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

// Exact division, throws if the remainder is nonzero.
inline QPoly poly_divexact(QPoly a, const QPoly& b) {
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        poly_trim(a);
    }
    if (!a.empty()) throw std::logic_error("poly_divexact: nonzero remainder");
    poly_trim(q);
    return q;
}

inline QPoly poly_mod(QPoly a, const QPoly& m) {
    while (a.size() >= m.size()) {
        Rational c = a.back() / m.back();
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] -= c * m[i];
        poly_trim(a);
    }
    return a;
}

inline int euler_phi(int n) {
    int result = n, m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

struct CycCache {
    std::mutex mutex;
    std::map<int, QPoly> polys;
    std::map<int, std::vector<QPoly>> powers;

    static CycCache& instance() {
        static CycCache c;
        return c;
    }

    const QPoly& poly_unlocked(int n) {
        auto it = polys.find(n);
        if (it != polys.end()) return it->second;
        QPoly xn_minus_1(n + 1);
        xn_minus_1[0] = Rational(-1);
        xn_minus_1[n] = Rational(1);
        QPoly denom{Rational(1)};
        for (int d = 1; d < n; ++d)
            if (n % d == 0) denom = poly_mul(denom, poly_unlocked(d));
        return polys.emplace(n, poly_divexact(xn_minus_1, denom)).first->second;
    }
};

// N-th cyclotomic polynomial by the recursive quotient formula.
inline const QPoly& cyclotomic_poly(int n) {
    auto& c = CycCache::instance();
    std::lock_guard<std::mutex> lock(c.mutex);
    return c.poly_unlocked(n);
}

// x^j mod Phi_N for every exponent any operation at conductor N needs
// (multiplication needs 2 phi(N) - 2, conjugation needs N). Built once per
// conductor and immutable afterwards, so the returned reference is stable.
inline const std::vector<QPoly>& power_table(int n, std::size_t /*bound*/ = 0) {
    auto& c = CycCache::instance();
    std::lock_guard<std::mutex> lock(c.mutex);
    auto it = c.powers.find(n);
    if (it != c.powers.end()) return it->second;
    const QPoly& phi = c.poly_unlocked(n);
    const std::size_t deg = phi.size() - 1;
    const std::size_t top = std::max<std::size_t>(static_cast<std::size_t>(n),
                                                  deg == 0 ? 1 : 2 * deg - 1);
    std::vector<QPoly> tab;
    tab.push_back(QPoly{Rational(1)});
    while (tab.size() <= top) {
        QPoly next = tab.back();
        next.insert(next.begin(), Rational(0));
        tab.push_back(poly_mod(std::move(next), phi));
    }
    return c.powers.emplace(n, std::move(tab)).first->second;
}

}  // namespace detail

// Element of the cyclotomic field Q(zeta_N), stored in the power basis
// 1, z, ..., z^{phi(N)-1} modulo the N-th cyclotomic polynomial.
// Mixed-conductor arithmetic promotes both operands to the lcm.
class CycScalar {
public:
    CycScalar() : conductor_(1), coeffs_(1) {}

    /*implicit*/ CycScalar(const Rational& r) : conductor_(1), coeffs_{r} {}
    /*implicit*/ CycScalar(long long n) : conductor_(1), coeffs_{Rational(n)} {}
    /*implicit*/ CycScalar(int n) : conductor_(1), coeffs_{Rational(n)} {}

    // (num/den) * zeta_N^power
    static CycScalar cyc(long long num, long long den, long long power, int conductor) {
        return cyc(Rational(num, den), power, conductor);
    }

    static CycScalar cyc(const Rational& coeff, long long power, int conductor) {
        if (conductor < 1) throw std::invalid_argument("CycScalar: conductor must be >= 1");
        long long p = power % conductor;
        if (p < 0) p += conductor;
        CycScalar r = zero(conductor);
        const auto& tab = detail::power_table(conductor, static_cast<std::size_t>(p));
        const detail::QPoly& zp = tab[static_cast<std::size_t>(p)];
        for (std::size_t i = 0; i < zp.size(); ++i) r.coeffs_[i] = coeff * zp[i];
        return r;
    }

    static CycScalar zero(int conductor) {
        CycScalar r;
        r.conductor_ = conductor;
        r.coeffs_.assign(static_cast<std::size_t>(detail::euler_phi(conductor)), Rational());
        return r;
    }

    static CycScalar one(int conductor) {
        CycScalar r = zero(conductor);
        r.coeffs_[0] = Rational(1);
        return r;
    }

    static CycScalar zeta(int conductor) { return cyc(1, 1, 1, conductor); }

    int conductor() const { return conductor_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    bool is_one() const {
        if (!coeffs_[0].is_one()) return false;
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return false;
        return true;
    }

    // Only valid when is_rational().
    const Rational& rational_value() const {
        if (!is_rational()) throw std::logic_error("CycScalar: not rational");
        return coeffs_[0];
    }

    // Embed into Q(zeta_M) for conductor_ | M.
    CycScalar promoted(int m) const {
        if (m == conductor_) return *this;
        if (m % conductor_ != 0) throw std::logic_error("CycScalar: invalid promotion");
        CycScalar r = zero(m);
        const int stride = m / conductor_;
        const auto& tab = detail::power_table(
            m, static_cast<std::size_t>(stride) * (coeffs_.empty() ? 0 : coeffs_.size() - 1));
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            const detail::QPoly& zp = tab[k * static_cast<std::size_t>(stride)];
            for (std::size_t i = 0; i < zp.size(); ++i) r.coeffs_[i] += coeffs_[k] * zp[i];
        }
        return r;
    }

    friend CycScalar operator-(const CycScalar& a) {
        CycScalar r = a;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend CycScalar operator+(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = aligned(a, b);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
        return x;
    }

    friend CycScalar operator-(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = aligned(a, b);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
        return x;
    }

    friend CycScalar operator*(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = aligned(a, b);
        const std::size_t d = x.coeffs_.size();
        CycScalar r = zero(x.conductor_);
        if (d == 1) {
            r.coeffs_[0] = x.coeffs_[0] * y.coeffs_[0];
            return r;
        }
        std::vector<Rational> prod(2 * d - 1);
        for (std::size_t i = 0; i < d; ++i) {
            if (x.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (y.coeffs_[j].is_zero()) continue;
                prod[i + j] += x.coeffs_[i] * y.coeffs_[j];
            }
        }
        const auto& tab = detail::power_table(x.conductor_, 2 * d - 2);
        for (std::size_t k = 0; k < prod.size(); ++k) {
            if (prod[k].is_zero()) continue;
            if (k < d) {
                r.coeffs_[k] += prod[k];
            } else {
                const detail::QPoly& zp = tab[k];
                for (std::size_t i = 0; i < zp.size(); ++i) r.coeffs_[i] += prod[k] * zp[i];
            }
        }
        return r;
    }

    CycScalar inverse() const {
        if (is_zero()) throw std::domain_error("CycScalar: inverse of zero");
        if (is_rational()) return CycScalar(coeffs_[0].inverse()).promoted(conductor_);
        // extended Euclid in Q[x] against the cyclotomic polynomial
        detail::QPoly r0 = detail::cyclotomic_poly(conductor_);
        detail::QPoly r1(coeffs_.begin(), coeffs_.end());
        detail::poly_trim(r1);
        detail::QPoly s0{}, s1{Rational(1)};
        while (r1.size() != 1) {
            if (r1.empty()) throw std::logic_error("CycScalar: not invertible");
            detail::QPoly q = poly_quot(r0, r1);
            detail::QPoly r2 = poly_sub(r0, detail::poly_mul(q, r1));
            detail::QPoly s2 = poly_sub(s0, detail::poly_mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r1 is a nonzero constant: inverse = s1 / r1
        Rational c = r1[0].inverse();
        CycScalar inv = zero(conductor_);
        for (std::size_t i = 0; i < s1.size() && i < inv.coeffs_.size(); ++i)
            inv.coeffs_[i] = s1[i] * c;
        return inv;
    }

    friend CycScalar operator/(const CycScalar& a, const CycScalar& b) { return a * b.inverse(); }

    CycScalar& operator+=(const CycScalar& o) { return *this = *this + o; }
    CycScalar& operator-=(const CycScalar& o) { return *this = *this - o; }
    CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }
    CycScalar& operator/=(const CycScalar& o) { return *this = *this / o; }

    friend bool operator==(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = aligned(a, b);
        return x.coeffs_ == y.coeffs_;
    }
    friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }

    // Complex conjugation: the ring automorphism zeta -> zeta^{N-1}.
    CycScalar conj() const {
        if (conductor_ <= 2) return *this;
        CycScalar r = zero(conductor_);
        const auto& tab = detail::power_table(conductor_, static_cast<std::size_t>(conductor_));
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            std::size_t e = k == 0 ? 0 : static_cast<std::size_t>(conductor_) - k;
            const detail::QPoly& zp = tab[e];
            for (std::size_t i = 0; i < zp.size(); ++i) r.coeffs_[i] += coeffs_[k] * zp[i];
        }
        return r;
    }

    std::complex<double> to_complex() const {
        std::complex<double> z = std::polar(1.0, 2.0 * 3.14159265358979323846 / conductor_);
        std::complex<double> acc(0.0, 0.0), p(1.0, 0.0);
        for (const auto& c : coeffs_) {
            acc += c.to_double() * p;
            p *= z;
        }
        return acc;
    }

    // Canonical rendering: lowest terms, ascending powers of z, zero terms skipped.
    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const Rational& c = coeffs_[k];
            if (c.is_zero()) continue;
            if (!s.empty()) {
                s += c.sign() < 0 ? " - " : " + ";
            } else if (c.sign() < 0) {
                s += "-";
            }
            Rational a = c.abs();
            if (k == 0) {
                s += a.to_string();
            } else {
                if (!a.is_one()) s += a.to_string() + "*";
                s += "z";
                if (k > 1) s += "^" + std::to_string(k);
            }
        }
        return s.empty() ? "0" : s;
    }

    static std::pair<CycScalar, CycScalar> aligned(const CycScalar& a, const CycScalar& b) {
        if (a.conductor_ == b.conductor_) return {a, b};
        int l = std::lcm(a.conductor_, b.conductor_);
        return {a.promoted(l), b.promoted(l)};
    }

private:
    int conductor_;
    std::vector<Rational> coeffs_;

    static detail::QPoly poly_quot(detail::QPoly a, const detail::QPoly& b) {
        detail::QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
        while (a.size() >= b.size() && !a.empty() && !b.empty()) {
            Rational c = a.back() / b.back();
            std::size_t shift = a.size() - b.size();
            q[shift] += c;
            for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
            detail::poly_trim(a);
        }
        detail::poly_trim(q);
        return q;
    }

    static detail::QPoly poly_sub(const detail::QPoly& a, const detail::QPoly& b) {
        detail::QPoly r = a;
        if (b.size() > r.size()) r.resize(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
        detail::poly_trim(r);
        return r;
    }
};

inline CycScalar conj(const CycScalar& x) { return x.conj(); }

// --- sign decisions for real cyclotomic numbers -----------------------------
//
// Exact for rationals; otherwise verified interval refinement of the canonical
// embedding zeta_N = exp(2*pi*i/N). Intervals are fixed-point dyadics
// (value = v / 2^prec) with outward rounding, which keeps the arithmetic fast.

namespace detail {

inline BigInt shift_left(const BigInt& v, int bits) { return v * BigInt::two_pow(bits); }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    if (!r.is_zero() && (a.is_negative() != b.is_negative())) q = q - BigInt(1);
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    if (!r.is_zero() && (a.is_negative() == b.is_negative())) q = q + BigInt(1);
    return q;
}

// Closed interval [lo, hi] * 2^-prec.
struct DyInterval {
    BigInt lo, hi;

    static DyInterval from_rational(const Rational& r, int prec) {
        BigInt scaled = shift_left(r.num(), prec);
        return {floor_div(scaled, r.den()), ceil_div(scaled, r.den())};
    }

    static DyInterval point_int(long long v, int prec) {
        BigInt s = shift_left(BigInt(v), prec);
        return {s, s};
    }

    DyInterval add(const DyInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    DyInterval sub(const DyInterval& o) const { return {lo - o.hi, hi - o.lo}; }

    DyInterval mul(const DyInterval& o, int prec) const {
        BigInt denom = shift_left(BigInt(1), prec);
        BigInt a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        BigInt mn = a, mx = a;
        for (const BigInt* v : {&b, &c, &d}) {
            if (*v < mn) mn = *v;
            if (mx < *v) mx = *v;
        }
        return {floor_div(mn, denom), ceil_div(mx, denom)};
    }

    DyInterval scaled(const Rational& r) const {
        BigInt a = lo * r.num(), b = hi * r.num();
        if (r.num().is_negative()) std::swap(a, b);
        return {floor_div(a, r.den()), ceil_div(b, r.den())};
    }

    DyInterval div_int(long long d) const {
        BigInt bd(d);
        return {floor_div(lo, bd), ceil_div(hi, bd)};
    }

    DyInterval widen(const BigInt& eps) const { return {lo - eps, hi + eps}; }

    int sign() const {
        if (lo.sign() > 0) return 1;
        if (hi.sign() < 0) return -1;
        return 0;  // undecided
    }
};

// arctan(1/x) bracketed by alternating partial sums, outward-rounded.
inline DyInterval arctan_inv(long long x, int terms, int prec) {
    BigInt one = shift_left(BigInt(1), prec);
    BigInt xpow(x);
    const BigInt x2 = BigInt(x) * BigInt(x);
    BigInt low(0), high(0);
    BigInt sum_lo(0), sum_hi(0);
    for (int j = 0; j < terms; ++j) {
        BigInt denom = BigInt(2 * j + 1) * xpow;
        BigInt t_lo = floor_div(one, denom), t_hi = ceil_div(one, denom);
        if (j % 2 == 0) {
            sum_lo = sum_lo + t_lo;
            sum_hi = sum_hi + t_hi;
            high = sum_hi;
        } else {
            sum_lo = sum_lo - t_hi;
            sum_hi = sum_hi - t_lo;
            low = sum_lo;
        }
        xpow = xpow * x2;
    }
    return {low, high};
}

inline DyInterval pi_dyadic(int terms, int prec) {
    DyInterval a = arctan_inv(5, terms, prec);
    DyInterval b = arctan_inv(239, terms, prec);
    return a.scaled(Rational(16)).sub(b.scaled(Rational(4)));
}

// cos over an interval within [-7, 7], Taylor with an explicit remainder term.
inline DyInterval cos_dyadic(const DyInterval& t, int terms, int prec) {
    DyInterval t2 = t.mul(t, prec);
    DyInterval acc = DyInterval::point_int(1, prec);
    DyInterval term = DyInterval::point_int(1, prec);
    for (int j = 1; j < terms; ++j) {
        term = term.mul(t2, prec);
        term = term.div_int(static_cast<long long>(2 * j - 1) * (2 * j));
        acc = (j % 2 == 1) ? acc.sub(term) : acc.add(term);
    }
    // |R| <= 7^(2*terms) / (2*terms)!  (rounded up into a dyadic epsilon)
    BigInt num(1);
    BigInt denom(1);
    for (int j = 1; j <= 2 * terms; ++j) {
        num = num * BigInt(7);
        denom = denom * BigInt(j);
    }
    BigInt eps = ceil_div(shift_left(num, prec), denom) + BigInt(1);
    return acc.widen(eps);
}

// cos(2*pi*k/N) for k = 0..N-1 at the given refinement level, cached.
inline const std::vector<DyInterval>& cos_table(int n, int level) {
    struct Cache {
        std::mutex mutex;
        std::map<std::pair<int, int>, std::vector<DyInterval>> table;
    };
    static Cache cache;
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto key = std::make_pair(n, level);
    auto it = cache.table.find(key);
    if (it != cache.table.end()) return it->second;
    const int prec = 64 << level;
    const int terms = 16 << level;
    DyInterval pi = pi_dyadic(terms, prec);
    std::vector<DyInterval> row;
    row.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        DyInterval theta = pi.scaled(Rational(2 * k, n));
        row.push_back(cos_dyadic(theta, terms, prec));
    }
    return cache.table.emplace(key, std::move(row)).first->second;
}

}  // namespace detail

// Sign of a real cyclotomic number (throws if the element is not real).
inline int sign_of_real(const CycScalar& x) {
    if (x.conj() != x) throw std::invalid_argument("sign_of_real: element is not real");
    if (x.is_zero()) return 0;
    if (x.is_rational()) return x.rational_value().sign();
    const int n = x.conductor();
    for (int level = 0; level < 5; ++level) {
        const auto& cosines = detail::cos_table(n, level);
        detail::DyInterval acc{BigInt(0), BigInt(0)};
        for (std::size_t k = 0; k < x.coeffs().size(); ++k) {
            const Rational& c = x.coeffs()[k];
            if (c.is_zero()) continue;
            acc = acc.add(cosines[k].scaled(c));
        }
        int s = acc.sign();
        if (s != 0) return s;
    }
    throw std::runtime_error("sign_of_real: interval refinement failed to decide");
}

}  // namespace qpbkit
