#pragma once

#include <string>
#include <vector>

#include "qpbkit/horizontal.hpp"

namespace qpbkit {

// First-order covariant derivative on the horizontal model, stored by its
// action on degree zero; higher degrees extend by the left Leibniz rule.
struct CovariantDerivative {
    Matrix d0;  // Hor^0 -> Hor^1
};

struct DerivativeSpace {
    bool feasible = false;
    std::string error;
    CovariantDerivative particular;
    std::vector<Matrix> displacements;  // kernel directions of the constraint system
};

namespace detail {

// Linear system whose unknowns are scalar field elements but whose equations
// may involve their conjugates; solved exactly after expanding every unknown
// into rational coordinates over a common cyclotomic conductor.
class ConjugateLinearSystem {
public:
    explicit ConjugateLinearSystem(std::size_t unknowns) : n_(unknowns) {}

    void begin_row() {
        rows_.emplace_back();
        rhs_.emplace_back(CycScalar(0));
    }
    void add(std::size_t unknown, CycScalar coeff, bool conjugated = false) {
        if (coeff.is_zero()) return;
        rows_.back().push_back({unknown, std::move(coeff), conjugated});
    }
    void set_rhs(CycScalar v) { rhs_.back() = std::move(v); }

    struct Solution {
        bool feasible = false;
        std::vector<CycScalar> particular;
        std::vector<std::vector<CycScalar>> kernel;
    };

    Solution solve(int preferred_conductor) const {
        int n_cond = std::max(1, preferred_conductor);
        for (const auto& row : rows_)
            for (const auto& t : row) n_cond = std::lcm(n_cond, t.coeff.conductor());
        for (const auto& r : rhs_) n_cond = std::lcm(n_cond, r.conductor());
        const std::size_t phi = static_cast<std::size_t>(detail::euler_phi(n_cond));
        // cache zeta powers and their conjugates
        std::vector<CycScalar> zeta(phi), zeta_conj(phi);
        for (std::size_t c = 0; c < phi; ++c) {
            zeta[c] = CycScalar::cyc(1, 1, static_cast<long long>(c), n_cond);
            zeta_conj[c] = zeta[c].conj();
        }
        Matrix sys(rows_.size() * phi, n_ * phi);
        Vec rhs(rows_.size() * phi, CycScalar(0));
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (const auto& t : rows_[r]) {
                CycScalar k0 = t.coeff.promoted(n_cond);
                for (std::size_t c = 0; c < phi; ++c) {
                    CycScalar k = k0 * (t.conjugated ? zeta_conj[c] : zeta[c]);
                    for (std::size_t w = 0; w < phi; ++w)
                        sys.at(r * phi + w, t.unknown * phi + c) += CycScalar(k.coeffs()[w]);
                }
            }
            CycScalar rv = rhs_[r].promoted(n_cond);
            for (std::size_t w = 0; w < phi; ++w) rhs[r * phi + w] = CycScalar(rv.coeffs()[w]);
        }
        Solution out;
        auto sol = solve_affine(sys, rhs);
        if (!sol) return out;
        out.feasible = true;
        auto assemble = [&](const Vec& flat) {
            std::vector<CycScalar> vals(n_, CycScalar::zero(n_cond));
            for (std::size_t e = 0; e < n_; ++e)
                for (std::size_t c = 0; c < phi; ++c)
                    vals[e] += flat[e * phi + c] * zeta[c];
            return vals;
        };
        out.particular = assemble(sol->particular);
        for (const auto& k : sol->kernel_basis) out.kernel.push_back(assemble(k));
        return out;
    }

private:
    struct Term {
        std::size_t unknown;
        CycScalar coeff;
        bool conjugated;
    };
    std::size_t n_;
    std::vector<std::vector<Term>> rows_;
    std::vector<CycScalar> rhs_;
};

}  // namespace detail

// Left-Leibniz extension of D to degree k: D(mu (x) T (x) v) =
// d mu (x) T (x) v + (-1)^k mu . D(T (x) v).
inline Matrix extend_derivative(const HorizontalModel& hm, const CovariantDerivative& d, int k) {
    if (k == 0) return d.d0;
    const std::size_t hk = hm.dim(k), hk1 = hm.dim(k + 1);
    Matrix out(hk1, hk);
    for (std::size_t bi = 0; bi < hm.blocks.size(); ++bi) {
        if (hm.blocks[bi].empty) continue;
        const HorBlock& bl = hm.blocks[bi];
        const std::size_t off = hm.block_offset(bi, k);
        for (std::size_t iq = 0; iq < hm.lq_dim(bi, k); ++iq)
            for (std::size_t iv = 0; iv < bl.n(); ++iv) {
                Vec e(hm.lq_dim(bi, k), CycScalar(0));
                e[iq] = CycScalar(1);
                Vec amb = bl.lq[static_cast<std::size_t>(k)].lift * e;
                Vec acc(hk1, CycScalar(0));
                for (std::size_t a = 0; a < hm.base.dim(k); ++a)
                    for (std::size_t t = 0; t < bl.g(); ++t) {
                        const CycScalar& c = amb[a * bl.g() + t];
                        if (c.is_zero()) continue;
                        Vec mu(hm.base.dim(k), CycScalar(0));
                        mu[a] = CycScalar(1);
                        // d mu (x) T (x) v
                        Vec dmu = hm.base.d(k, mu);
                        Vec term1(hk1, CycScalar(0));
                        {
                            const std::size_t offg = hm.block_offset(bi, k + 1);
                            Vec ambient(hm.base.dim(k + 1) * bl.g(), CycScalar(0));
                            for (std::size_t a2 = 0; a2 < hm.base.dim(k + 1); ++a2)
                                if (!dmu[a2].is_zero()) ambient[a2 * bl.g() + t] = dmu[a2];
                            Vec q = bl.lq[static_cast<std::size_t>(k + 1)].proj * ambient;
                            for (std::size_t i2 = 0; i2 < q.size(); ++i2)
                                term1[offg + i2 * bl.n() + iv] = q[i2];
                        }
                        // (-1)^k mu . D(T (x) v)
                        Vec t0(hm.dim(0), CycScalar(0));
                        t0[hm.block_offset(bi, 0) + t * bl.n() + iv] = CycScalar(1);
                        Vec dt = d.d0 * t0;
                        Vec term2 = hm.multiply(k, hm.embed_base(k, mu), 1, dt);
                        if (k % 2 == 1) term2 = vec_scale(CycScalar(-1), term2);
                        acc = vec_add(acc, vec_scale(c, vec_add(term1, term2)));
                    }
                for (std::size_t r = 0; r < hk1; ++r)
                    out.at(r, off + iq * bl.n() + iv) = acc[r];
            }
    }
    return out;
}

// The affine space of first-order maps satisfying the covariant-derivative
// conditions: corep morphism, Leibniz on degree zero, star compatibility, and
// restriction to d on the base.
inline DerivativeSpace derivative_space(const HorizontalModel& hm) {
    const std::size_t h0 = hm.dim(0), h1 = hm.dim(1);
    const HopfAlgebra& h = *hm.bundle.hopf;
    auto unk = [&](std::size_t p, std::size_t i) { return p * h0 + i; };
    auto basis0 = [&](std::size_t i) {
        Vec e(h0, CycScalar(0));
        e[i] = CycScalar(1);
        return e;
    };
    // products with one degree-1 slot, precomputed
    std::vector<std::vector<Vec>> m00(h0, std::vector<Vec>(h0));
    std::vector<std::vector<Vec>> m10(h1, std::vector<Vec>(h0));
    std::vector<std::vector<Vec>> m01(h0, std::vector<Vec>(h1));
    for (std::size_t i = 0; i < h0; ++i)
        for (std::size_t j = 0; j < h0; ++j) m00[i][j] = hm.multiply(0, basis0(i), 0, basis0(j));
    for (std::size_t p = 0; p < h1; ++p)
        for (std::size_t j = 0; j < h0; ++j) {
            Vec ep(h1, CycScalar(0));
            ep[p] = CycScalar(1);
            m10[p][j] = hm.multiply(1, ep, 0, basis0(j));
        }
    for (std::size_t i = 0; i < h0; ++i)
        for (std::size_t p = 0; p < h1; ++p) {
            Vec ep(h1, CycScalar(0));
            ep[p] = CycScalar(1);
            m01[i][p] = hm.multiply(0, basis0(i), 1, ep);
        }
    detail::ConjugateLinearSystem full(h1 * h0);
    // (a)
    for (std::size_t pt = 0; pt < hm.points.size(); ++pt) {
        Vec pcoords(hm.points.size(), CycScalar(0));
        pcoords[pt] = CycScalar(1);
        Vec x = hm.gm_to_hor0(hm.base_to_gm(pcoords));
        Vec want = hm.embed_base(1, hm.base.d(0, pcoords));
        for (std::size_t q = 0; q < h1; ++q) {
            full.begin_row();
            for (std::size_t i = 0; i < h0; ++i) full.add(unk(q, i), x[i]);
            full.set_rhs(want[q]);
        }
    }
    // (b) sum_l u1(p,l) D_{l,j} = sum_i D_{p,i} u0(i,j) componentwise
    {
        Corep u0 = hm.coaction(0), u1 = hm.coaction(1);
        for (std::size_t p = 0; p < h1; ++p)
            for (std::size_t j = 0; j < h0; ++j)
                for (std::size_t t = 0; t < h.dim; ++t) {
                    full.begin_row();
                    for (std::size_t l = 0; l < h1; ++l) full.add(unk(l, j), u1.u(p, l)[t]);
                    for (std::size_t i = 0; i < h0; ++i) full.add(unk(p, i), -u0.u(i, j)[t]);
                    full.set_rhs(CycScalar(0));
                }
    }
    // (c) D(x y) = D(x) y + x D(y) on basis pairs
    for (std::size_t i = 0; i < h0; ++i)
        for (std::size_t j = 0; j < h0; ++j)
            for (std::size_t q = 0; q < h1; ++q) {
                full.begin_row();
                for (std::size_t z = 0; z < h0; ++z) full.add(unk(q, z), m00[i][j][z]);
                for (std::size_t p = 0; p < h1; ++p) {
                    full.add(unk(p, i), -m10[p][j][q]);
                    full.add(unk(p, j), -m01[i][p][q]);
                }
                full.set_rhs(CycScalar(0));
            }
    // (c') graded Leibniz on higher-degree pairs, through the forced
    // left-Leibniz extension, which is affine in the unknown map
    if (hm.cap >= 2) {
        std::vector<Matrix> ext_zero;   // extension of the zero map per degree
        std::vector<std::vector<Matrix>> ext_unit;  // per degree, per unknown
        for (int k2 = 1; k2 + 1 <= hm.cap; ++k2) {
            CovariantDerivative zero{Matrix(h1, h0)};
            Matrix b0 = extend_derivative(hm, zero, k2);
            std::vector<Matrix> units;
            for (std::size_t p = 0; p < h1; ++p)
                for (std::size_t i = 0; i < h0; ++i) {
                    Matrix e(h1, h0);
                    e.at(p, i) = CycScalar(1);
                    units.push_back(extend_derivative(hm, CovariantDerivative{e}, k2) - b0);
                }
            ext_zero.push_back(std::move(b0));
            ext_unit.push_back(std::move(units));
        }
        auto ext_row_terms = [&](int k2, const Vec& v, std::size_t out_coord,
                                 const CycScalar& scale, detail::ConjugateLinearSystem& s,
                                 CycScalar& constant) {
            // contributes scale * (Ext_k2(D) v)[out_coord]
            const Matrix& b0 = ext_zero[static_cast<std::size_t>(k2 - 1)];
            Vec base_part = b0 * v;
            constant += scale * base_part[out_coord];
            for (std::size_t p = 0; p < h1; ++p)
                for (std::size_t i = 0; i < h0; ++i) {
                    const Matrix& ku =
                        ext_unit[static_cast<std::size_t>(k2 - 1)][p * h0 + i];
                    Vec kv = ku * v;
                    if (!kv[out_coord].is_zero())
                        s.add(unk(p, i), scale * kv[out_coord]);
                }
        };
        for (int k2 = 0; k2 <= hm.cap - 1; ++k2)
            for (int l2 = 0; k2 + l2 + 1 <= hm.cap; ++l2) {
                if (k2 == 0 && l2 == 0) continue;  // already imposed
                for (std::size_t i = 0; i < hm.dim(k2); ++i)
                    for (std::size_t j = 0; j < hm.dim(l2); ++j) {
                        Vec ei(hm.dim(k2), CycScalar(0));
                        ei[i] = CycScalar(1);
                        Vec ej(hm.dim(l2), CycScalar(0));
                        ej[j] = CycScalar(1);
                        Vec prod = hm.multiply(k2, ei, l2, ej);
                        for (std::size_t q = 0; q < hm.dim(k2 + l2 + 1); ++q) {
                            full.begin_row();
                            CycScalar constant(0);
                            // D(x y)
                            if (k2 + l2 == 0) {
                                for (std::size_t z = 0; z < h0; ++z)
                                    full.add(unk(q, z), prod[z]);
                            } else {
                                ext_row_terms(k2 + l2, prod, q, CycScalar(1), full,
                                              constant);
                            }
                            // - D(x) y
                            {
                                // D(x): degree k2 -> k2+1
                                if (k2 == 0) {
                                    // rows: sum_p D_{p,i} (e_p . e_j)
                                    for (std::size_t p = 0; p < h1; ++p) {
                                        Vec ep(h1, CycScalar(0));
                                        ep[p] = CycScalar(1);
                                        Vec t = hm.multiply(1, ep, l2, ej);
                                        if (!t[q].is_zero()) full.add(unk(p, i), -t[q]);
                                    }
                                } else {
                                    // (Ext_{k2}(D) e_i) . e_j
                                    const Matrix& b0 =
                                        ext_zero[static_cast<std::size_t>(k2 - 1)];
                                    Vec base_part = hm.multiply(k2 + 1, b0 * ei, l2, ej);
                                    constant -= base_part[q];
                                    for (std::size_t p = 0; p < h1; ++p)
                                        for (std::size_t i2 = 0; i2 < h0; ++i2) {
                                            const Matrix& ku = ext_unit[static_cast<
                                                std::size_t>(k2 - 1)][p * h0 + i2];
                                            Vec t = hm.multiply(k2 + 1, ku * ei, l2, ej);
                                            if (!t[q].is_zero())
                                                full.add(unk(p, i2), -t[q]);
                                        }
                                }
                            }
                            // - (-1)^{k2} x D(y)
                            {
                                CycScalar sign =
                                    k2 % 2 == 0 ? CycScalar(-1) : CycScalar(1);
                                if (l2 == 0) {
                                    for (std::size_t p = 0; p < h1; ++p) {
                                        Vec ep(h1, CycScalar(0));
                                        ep[p] = CycScalar(1);
                                        Vec t = hm.multiply(k2, ei, 1, ep);
                                        if (!t[q].is_zero())
                                            full.add(unk(p, j), sign * t[q]);
                                    }
                                } else {
                                    const Matrix& b0 =
                                        ext_zero[static_cast<std::size_t>(l2 - 1)];
                                    Vec base_part = hm.multiply(k2, ei, l2 + 1, b0 * ej);
                                    constant += sign * base_part[q];
                                    for (std::size_t p = 0; p < h1; ++p)
                                        for (std::size_t i2 = 0; i2 < h0; ++i2) {
                                            const Matrix& ku = ext_unit[static_cast<
                                                std::size_t>(l2 - 1)][p * h0 + i2];
                                            Vec t =
                                                hm.multiply(k2, ei, l2 + 1, ku * ej);
                                            if (!t[q].is_zero())
                                                full.add(unk(p, i2), sign * t[q]);
                                        }
                                }
                            }
                            full.set_rhs(-constant);
                        }
                    }
            }
    }
    // (d) D(x^*) = (D x)^*: D S0 = S1 conj(D)
    {
        Matrix s0(h0, h0), s1(h1, h1);
        for (std::size_t i = 0; i < h0; ++i) {
            Vec col = hm.star(0, basis0(i));
            for (std::size_t z = 0; z < h0; ++z) s0.at(z, i) = col[z];
        }
        for (std::size_t p = 0; p < h1; ++p) {
            Vec ep(h1, CycScalar(0));
            ep[p] = CycScalar(1);
            Vec col = hm.star(1, ep);
            for (std::size_t z = 0; z < h1; ++z) s1.at(z, p) = col[z];
        }
        for (std::size_t i = 0; i < h0; ++i)
            for (std::size_t q = 0; q < h1; ++q) {
                full.begin_row();
                for (std::size_t z = 0; z < h0; ++z) full.add(unk(q, z), s0.at(z, i));
                for (std::size_t p = 0; p < h1; ++p)
                    full.add(unk(p, i), -s1.at(q, p), /*conjugated=*/true);
                full.set_rhs(CycScalar(0));
            }
    }
    auto sol = full.solve(h.preferred_conductor);
    DerivativeSpace out;
    if (!sol.feasible) {
        out.error = "no covariant derivative exists for this horizontal model";
        return out;
    }
    out.feasible = true;
    auto to_matrix = [&](const std::vector<CycScalar>& flat) {
        Matrix m(h1, h0);
        for (std::size_t p = 0; p < h1; ++p)
            for (std::size_t i = 0; i < h0; ++i) m.at(p, i) = flat[p * h0 + i];
        return m;
    };
    out.particular.d0 = to_matrix(sol.particular);
    for (const auto& k : sol.kernel) {
        Matrix m = to_matrix(k);
        if (!m.is_zero()) out.displacements.push_back(std::move(m));
    }
    return out;
}

// Exact verification of the covariant-derivative conditions, including the
// graded Leibniz rule across degrees through the extension.
inline CheckReport check_derivative(const HorizontalModel& hm, const CovariantDerivative& d) {
    CheckReport rep;
    const std::size_t h0 = hm.dim(0);
    {
        bool ok = true;
        for (std::size_t pt = 0; pt < hm.points.size() && ok; ++pt) {
            Vec pcoords(hm.points.size(), CycScalar(0));
            pcoords[pt] = CycScalar(1);
            Vec x = hm.gm_to_hor0(hm.base_to_gm(pcoords));
            if (d.d0 * x != hm.embed_base(1, hm.base.d(0, pcoords))) ok = false;
        }
        rep.add("derivative.base_restriction", ok);
    }
    {
        rep.add("derivative.corep_morphism",
                is_intertwiner(hm.coaction(0), hm.coaction(1), LinearMap{d.d0, 0}));
    }
    {
        bool ok = true;
        std::string w;
        std::vector<Matrix> ext;
        for (int k = 0; k + 1 <= hm.cap; ++k) ext.push_back(extend_derivative(hm, d, k));
        for (int k = 0; k + 1 <= hm.cap && ok; ++k)
            for (int l = 0; k + l + 1 <= hm.cap && ok; ++l)
                for (std::size_t i = 0; i < hm.dim(k) && ok; ++i)
                    for (std::size_t j = 0; j < hm.dim(l) && ok; ++j) {
                        Vec ei(hm.dim(k), CycScalar(0)), ej(hm.dim(l), CycScalar(0));
                        ei[i] = CycScalar(1);
                        ej[j] = CycScalar(1);
                        Vec lhs = ext[static_cast<std::size_t>(k + l)] *
                                  hm.multiply(k, ei, l, ej);
                        Vec rhs = hm.multiply(k + 1, ext[static_cast<std::size_t>(k)] * ei, l,
                                              ej);
                        Vec second = hm.multiply(k, ei, l + 1,
                                                 ext[static_cast<std::size_t>(l)] * ej);
                        if (k % 2 == 1) second = vec_scale(CycScalar(-1), second);
                        rhs = vec_add(rhs, second);
                        if (lhs != rhs) {
                            ok = false;
                            w = "degrees (" + std::to_string(k) + "," + std::to_string(l) +
                                ") pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
                        }
                    }
        rep.add("derivative.graded_leibniz", ok, w);
    }
    {
        bool ok = true;
        for (std::size_t i = 0; i < h0 && ok; ++i) {
            Vec e(h0, CycScalar(0));
            e[i] = CycScalar(1);
            if (d.d0 * hm.star(0, e) != hm.star(1, d.d0 * e)) ok = false;
        }
        rep.add("derivative.star_compatible", ok);
    }
    return rep;
}

}  // namespace qpbkit
