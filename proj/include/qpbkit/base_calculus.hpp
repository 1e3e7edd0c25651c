#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/algebra.hpp"

namespace qpbkit {

// Finite graded differential *-algebra over the base: components, products,
// differentials and stars by dense tensors, capped at degree 3.
class BaseCalculus {
public:
    StarAlgebra m;  // degree 0
    int cap = 2;
    std::vector<std::size_t> dims;          // dims[k], k = 0..cap
    std::map<std::pair<int, int>, Matrix> prod;  // (k,l): dims[k+l] x dims[k]*dims[l]
    std::vector<Matrix> diff;               // d_k : dims[k] -> dims[k+1], k < cap
    std::vector<Matrix> star;               // antilinear per degree

    std::size_t dim(int k) const {
        if (k < 0 || k > cap) return 0;
        return dims[static_cast<std::size_t>(k)];
    }

    Vec multiply(int k, const Vec& a, int l, const Vec& b) const {
        if (k + l > cap) throw std::invalid_argument("BaseCalculus: product above cap");
        if (dim(k) == 0 || dim(l) == 0 || dim(k + l) == 0)
            return Vec(dim(k + l), CycScalar(0));
        return prod.at({k, l}) * kron_vec(a, b);
    }

    Vec d(int k, const Vec& a) const {
        if (k + 1 > cap || dim(k + 1) == 0) return Vec(dim(k + 1), CycScalar(0));
        return diff[static_cast<std::size_t>(k)] * a;
    }

    Vec star_action(int k, const Vec& a) const {
        Vec c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i].conj();
        return star[static_cast<std::size_t>(k)] * c;
    }

    Vec unit() const { return m.unit; }
};

// Universal graded differential calculus on the algebra of functions on n
// points: Omega^k has the path basis (i_0,...,i_k) with consecutive vertices
// distinct, the product is path concatenation and d is the simplicial
// coboundary.
class PointsCalculus {
public:
    static BaseCalculus build(std::size_t n, int cap) {
        if (cap > 3) throw std::invalid_argument("universal_base_calculus: cap above 3");
        BaseCalculus b;
        b.m = points_algebra(n);
        b.cap = cap;
        std::vector<std::vector<std::vector<std::size_t>>> paths(cap + 1);
        // degree-k paths
        for (int k = 0; k <= cap; ++k) {
            std::vector<std::vector<std::size_t>> cur;
            if (k == 0) {
                for (std::size_t i = 0; i < n; ++i) cur.push_back({i});
            } else {
                for (const auto& p : paths[k - 1])
                    for (std::size_t j = 0; j < n; ++j) {
                        if (p.back() == j) continue;
                        auto q = p;
                        q.push_back(j);
                        cur.push_back(std::move(q));
                    }
            }
            paths[k] = std::move(cur);
            b.dims.push_back(paths[k].size());
        }
        auto index_of = [&](int k, const std::vector<std::size_t>& p) -> std::size_t {
            const auto& list = paths[k];
            for (std::size_t i = 0; i < list.size(); ++i)
                if (list[i] == p) return i;
            throw std::logic_error("points calculus: path lookup failed");
        };
        // products: concatenation when the endpoint matches the start
        for (int k = 0; k <= cap; ++k)
            for (int l = 0; k + l <= cap; ++l) {
                Matrix pm(b.dims[k + l], b.dims[k] * b.dims[l]);
                for (std::size_t a = 0; a < b.dims[k]; ++a)
                    for (std::size_t c = 0; c < b.dims[l]; ++c) {
                        const auto& pa = paths[k][a];
                        const auto& pc = paths[l][c];
                        if (pa.back() != pc.front()) continue;
                        auto joined = pa;
                        joined.insert(joined.end(), pc.begin() + 1, pc.end());
                        bool valid = true;
                        for (std::size_t i = 0; i + 1 < joined.size(); ++i)
                            if (joined[i] == joined[i + 1]) valid = false;
                        if (!valid) continue;  // cannot happen: both paths are valid
                        pm.at(index_of(k + l, joined), a * b.dims[l] + c) = CycScalar(1);
                    }
                b.prod[{k, l}] = std::move(pm);
            }
        // d: simplicial coboundary, d e_q = sum over one-vertex insertions
        for (int k = 0; k < cap; ++k) {
            Matrix dm(b.dims[k + 1], b.dims[k]);
            for (std::size_t target = 0; target < b.dims[k + 1]; ++target) {
                const auto& p = paths[k + 1][target];
                for (std::size_t j = 0; j < p.size(); ++j) {
                    auto q = p;
                    q.erase(q.begin() + static_cast<long>(j));
                    bool valid = true;
                    for (std::size_t i = 0; i + 1 < q.size(); ++i)
                        if (q[i] == q[i + 1]) valid = false;
                    if (!valid) continue;
                    CycScalar sign = (j % 2 == 0) ? CycScalar(1) : CycScalar(-1);
                    dm.at(target, index_of(k, q)) += sign;
                }
            }
            b.diff.push_back(std::move(dm));
        }
        // star: reverse the path, conjugate, sign (-1)^{k(k+1)/2}
        for (int k = 0; k <= cap; ++k) {
            Matrix sm(b.dims[k], b.dims[k]);
            int half = (k * (k + 1) / 2) % 2;
            for (std::size_t a = 0; a < b.dims[k]; ++a) {
                auto rev = paths[k][a];
                std::reverse(rev.begin(), rev.end());
                sm.at(index_of(k, rev), a) = half ? CycScalar(-1) : CycScalar(1);
            }
            b.star.push_back(std::move(sm));
        }
        return b;
    }
};

inline BaseCalculus universal_base_calculus(std::size_t n_points, int cap) {
    return PointsCalculus::build(n_points, cap);
}

inline CheckReport check_base_calculus(const BaseCalculus& b) {
    CheckReport rep;
    auto basis = [&](int k, std::size_t i) {
        Vec e(b.dim(k), CycScalar(0));
        e[i] = CycScalar(1);
        return e;
    };
    {
        bool ok = true;
        std::string w;
        for (int ka = 0; ka <= b.cap && ok; ++ka)
            for (int kb = 0; ka + kb <= b.cap && ok; ++kb)
                for (int kc = 0; ka + kb + kc <= b.cap && ok; ++kc)
                    for (std::size_t i = 0; i < b.dim(ka) && ok; ++i)
                        for (std::size_t j = 0; j < b.dim(kb) && ok; ++j)
                            for (std::size_t l = 0; l < b.dim(kc) && ok; ++l) {
                                Vec lhs = b.multiply(
                                    ka + kb, b.multiply(ka, basis(ka, i), kb, basis(kb, j)), kc,
                                    basis(kc, l));
                                Vec rhs = b.multiply(
                                    ka, basis(ka, i), kb + kc,
                                    b.multiply(kb, basis(kb, j), kc, basis(kc, l)));
                                if (lhs != rhs) {
                                    ok = false;
                                    w = "degrees (" + std::to_string(ka) + "," +
                                        std::to_string(kb) + "," + std::to_string(kc) + ")";
                                }
                            }
        rep.add("base.graded_associativity", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int ka = 0; ka < b.cap && ok; ++ka)
            for (int kb = 0; ka + kb < b.cap && ok; ++kb)
                for (std::size_t i = 0; i < b.dim(ka) && ok; ++i)
                    for (std::size_t j = 0; j < b.dim(kb) && ok; ++j) {
                        Vec lhs = b.d(ka + kb, b.multiply(ka, basis(ka, i), kb, basis(kb, j)));
                        Vec rhs = b.multiply(ka + 1, b.d(ka, basis(ka, i)), kb, basis(kb, j));
                        Vec second = b.multiply(ka, basis(ka, i), kb + 1, b.d(kb, basis(kb, j)));
                        if (ka % 2 == 1) second = vec_scale(CycScalar(-1), second);
                        rhs = vec_add(rhs, second);
                        if (lhs != rhs) {
                            ok = false;
                            w = "degrees (" + std::to_string(ka) + "," + std::to_string(kb) + ")";
                        }
                    }
        rep.add("base.leibniz", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int k = 0; k + 2 <= b.cap && ok; ++k)
            for (std::size_t i = 0; i < b.dim(k) && ok; ++i)
                if (!vec_is_zero(b.d(k + 1, b.d(k, basis(k, i))))) {
                    ok = false;
                    w = "degree " + std::to_string(k) + " index " + std::to_string(i);
                }
        rep.add("base.d_squared_zero", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int k = 0; k < b.cap && ok; ++k)
            for (std::size_t i = 0; i < b.dim(k) && ok; ++i)
                if (b.d(k, b.star_action(k, basis(k, i))) !=
                    b.star_action(k + 1, b.d(k, basis(k, i)))) {
                    ok = false;
                    w = "degree " + std::to_string(k) + " index " + std::to_string(i);
                }
        rep.add("base.d_star_commute", ok, w);
        bool inv = true;
        for (int k = 0; k <= b.cap && inv; ++k)
            for (std::size_t i = 0; i < b.dim(k) && inv; ++i)
                if (b.star_action(k, b.star_action(k, basis(k, i))) != basis(k, i)) inv = false;
        rep.add("base.star_involutive", inv);
    }
    {
        // the unit is a two-sided identity in every degree
        bool ok = true;
        for (int k = 0; k <= b.cap && ok; ++k)
            for (std::size_t i = 0; i < b.dim(k) && ok; ++i) {
                Vec e = basis(k, i);
                if (b.multiply(0, b.unit(), k, e) != e || b.multiply(k, e, 0, b.unit()) != e)
                    ok = false;
            }
        rep.add("base.unital", ok);
    }
    return rep;
}

}  // namespace qpbkit
