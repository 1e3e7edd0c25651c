#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpbkit {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
// Only what exact rational linear algebra needs: ring ops, divmod, gcd,
// comparisons, decimal I/O.
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) {
        if (v < 0) {
            neg_ = true;
            // careful with LLONG_MIN
            unsigned long long m = static_cast<unsigned long long>(-(v + 1)) + 1ull;
            push_u64(m);
        } else {
            push_u64(static_cast<unsigned long long>(v));
        }
        trim();
    }

    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_string(const std::string& s) {
        BigInt r;
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = s[i] == '-';
            ++i;
        }
        if (i >= s.size()) throw std::invalid_argument("BigInt: empty literal");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r.mul_small(10);
            r.add_small(static_cast<std::uint32_t>(s[i] - '0'));
        }
        r.neg_ = neg;
        r.trim();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    bool is_one() const { return !neg_ && limbs_.size() == 1 && limbs_[0] == 1; }

    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    friend BigInt operator-(const BigInt& a) {
        BigInt r = a;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
            r.trim();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        BigInt r;
        if (c == 0) return r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.neg_ = b.neg_;
        }
        r.trim();
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.is_zero() || b.is_zero()) return r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.limbs_.size();
            while (carry) {
                std::uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.neg_ = a.neg_ != b.neg_;
        r.trim();
        return r;
    }

    // Truncated division (C semantics: quotient rounds toward zero).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        q = BigInt();
        r = BigInt();
        if (cmp_mag(a.limbs_, b.limbs_) < 0) {
            r = a;
            return;
        }
        if (b.limbs_.size() == 1) {
            std::uint32_t rem = 0;
            q.limbs_ = divmod_small_mag(a.limbs_, b.limbs_[0], rem);
            if (rem) r.limbs_.push_back(rem);
        } else {
            divmod_mag(a.limbs_, b.limbs_, q.limbs_, r.limbs_);
        }
        q.neg_ = a.neg_ != b.neg_;
        r.neg_ = a.neg_;
        q.trim();
        r.trim();
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }

    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }

    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.neg_ ? c > 0 : c < 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    static BigInt two_pow(int bits) {
        BigInt r;
        r.limbs_.assign(static_cast<std::size_t>(bits / 32) + 1, 0);
        r.limbs_.back() = 1u << (bits % 32);
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
            a.neg_ = false;
            b.neg_ = false;
        }
        return a;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> mag = limbs_;
        std::string digits;
        while (!mag.empty()) {
            std::uint32_t rem = 0;
            mag = divmod_small_mag(mag, 1000000000u, rem);
            while (!mag.empty() && mag.back() == 0) mag.pop_back();
            if (mag.empty()) {
                std::string head = std::to_string(rem);
                std::reverse(head.begin(), head.end());
                digits += head;
            } else {
                for (int k = 0; k < 9; ++k) {
                    digits += static_cast<char>('0' + rem % 10);
                    rem /= 10;
                }
            }
        }
        if (neg_) digits += '-';
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    // Fits-in-double check is not needed; numeric embedding uses this.
    double to_double() const {
        double v = 0.0;
        for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
        return neg_ ? -v : v;
    }

    std::size_t limb_count() const { return limbs_.size(); }

private:
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zeros
    bool neg_ = false;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }

    void push_u64(unsigned long long m) {
        if (m) limbs_.push_back(static_cast<std::uint32_t>(m));
        if (m >> 32) limbs_.push_back(static_cast<std::uint32_t>(m >> 32));
    }

    void mul_small(std::uint32_t m) {
        std::uint64_t carry = 0;
        for (auto& l : limbs_) {
            std::uint64_t cur = static_cast<std::uint64_t>(l) * m + carry;
            l = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    void add_small(std::uint32_t a) {
        std::uint64_t carry = a;
        for (std::size_t i = 0; carry && i < limbs_.size(); ++i) {
            std::uint64_t cur = limbs_[i] + carry;
            limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        return r;
    }

    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r = a;
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = 0;
            if (cur < 0) {
                cur += (1ll << 32);
                borrow = 1;
            }
            r[i] = static_cast<std::uint32_t>(cur);
        }
        return r;
    }

    static std::vector<std::uint32_t> divmod_small_mag(const std::vector<std::uint32_t>& a,
                                                       std::uint32_t d, std::uint32_t& rem) {
        std::vector<std::uint32_t> q(a.size(), 0);
        std::uint64_t cur = 0;
        for (std::size_t i = a.size(); i-- > 0;) {
            cur = (cur << 32) | a[i];
            q[i] = static_cast<std::uint32_t>(cur / d);
            cur %= d;
        }
        rem = static_cast<std::uint32_t>(cur);
        while (!q.empty() && q.back() == 0) q.pop_back();
        return q;
    }

    // Knuth algorithm D on normalized magnitudes; |a| >= |b|, b has >= 2 limbs.
    static void divmod_mag(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b,
                           std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
        int shift = 0;
        for (std::uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
        a = shl_bits(a, shift);
        b = shl_bits(b, shift);
        const std::size_t n = b.size(), m = a.size() - n;
        a.push_back(0);
        q.assign(m + 1, 0);
        const std::uint64_t btop = b[n - 1], bsec = b[n - 2];
        for (std::size_t j = m + 1; j-- > 0;) {
            std::uint64_t num = (static_cast<std::uint64_t>(a[j + n]) << 32) | a[j + n - 1];
            std::uint64_t qhat = num / btop, rhat = num % btop;
            if (qhat > 0xffffffffull) {
                qhat = 0xffffffffull;
                rhat = num - qhat * btop;
            }
            while (rhat <= 0xffffffffull &&
                   qhat * bsec > ((rhat << 32) | a[j + n - 2])) {
                --qhat;
                rhat += btop;
            }
            // multiply-subtract
            std::int64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t p = qhat * b[i] + carry;
                carry = p >> 32;
                std::int64_t cur = static_cast<std::int64_t>(a[i + j]) -
                                   static_cast<std::int64_t>(p & 0xffffffffull) - borrow;
                borrow = 0;
                if (cur < 0) {
                    cur += (1ll << 32);
                    borrow = 1;
                }
                a[i + j] = static_cast<std::uint32_t>(cur);
            }
            std::int64_t cur = static_cast<std::int64_t>(a[j + n]) -
                               static_cast<std::int64_t>(carry) - borrow;
            if (cur < 0) {
                // qhat was one too large
                cur += (1ll << 32);
                --qhat;
                std::uint64_t c2 = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::uint64_t s = static_cast<std::uint64_t>(a[i + j]) + b[i] + c2;
                    a[i + j] = static_cast<std::uint32_t>(s);
                    c2 = s >> 32;
                }
                cur += static_cast<std::int64_t>(c2);
            }
            a[j + n] = static_cast<std::uint32_t>(cur);
            q[j] = static_cast<std::uint32_t>(qhat);
        }
        a.resize(n);
        r = shr_bits(a, shift);
        while (!q.empty() && q.back() == 0) q.pop_back();
        while (!r.empty() && r.back() == 0) r.pop_back();
    }

    static std::vector<std::uint32_t> shl_bits(const std::vector<std::uint32_t>& a, int s) {
        if (s == 0) return a;
        std::vector<std::uint32_t> r(a.size() + 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] |= a[i] << s;
            r[i + 1] |= static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i]) >> (32 - s));
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static std::vector<std::uint32_t> shr_bits(const std::vector<std::uint32_t>& a, int s) {
        if (s == 0) return a;
        std::vector<std::uint32_t> r(a.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] |= a[i] >> s;
            if (i + 1 < a.size())
                r[i] |= static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i + 1]) << (32 - s));
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

}  // namespace qpbkit
