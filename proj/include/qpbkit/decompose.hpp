#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qpbkit/corep.hpp"
#include "qpbkit/numeric.hpp"

namespace qpbkit {

// Haar-averaged invariant inner product on the carrier space of a corep:
// G_ij = sum_k h(u_ki^* u_kj). Positive definite whenever h is faithful.
inline Matrix invariant_gram(const Corep& c, const HaarFunctional& ha) {
    const HopfAlgebra& h = *c.hopf;
    Matrix g(c.dim, c.dim);
    for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = 0; j < c.dim; ++j) {
            CycScalar acc(0);
            for (std::size_t k = 0; k < c.dim; ++k)
                acc += ha(h.multiply(h.star(c.u(k, i)), c.u(k, j)));
            g.at(i, j) = acc;
        }
    return g;
}

// Smallest subcomodule containing v: the span of the first-leg components of
// the coaction of v, expanded in the Hopf basis.
inline std::vector<Vec> cyclic_subcomodule(const Corep& c, const Vec& v) {
    const std::size_t hd = c.hopf->dim;
    Vec cv = c.coact(v);
    std::vector<Vec> comps;
    for (std::size_t t = 0; t < hd; ++t) {
        Vec w(c.dim);
        for (std::size_t i = 0; i < c.dim; ++i) w[i] = cv[i * hd + t];
        if (!vec_is_zero(w)) comps.push_back(std::move(w));
    }
    if (comps.empty()) return {};
    Rref re = rref(Matrix::from_columns(comps).transposed());
    std::vector<Vec> basis;
    for (std::size_t r = 0; r < re.rank; ++r) basis.push_back(re.reduced.row(r));
    return basis;
}

// Corep matrix of the coaction restricted to an invariant subspace, in the
// given basis. Throws when the span is not invariant.
inline Corep restrict_corep(const Corep& c, const std::vector<Vec>& basis) {
    const std::size_t m = basis.size(), hd = c.hopf->dim;
    Matrix b = Matrix::from_columns(basis);
    Corep r(c.hopf, m);
    for (std::size_t j = 0; j < m; ++j) {
        Vec cv = c.coact(basis[j]);
        for (std::size_t t = 0; t < hd; ++t) {
            Vec rhs(c.dim);
            for (std::size_t i = 0; i < c.dim; ++i) rhs[i] = cv[i * hd + t];
            auto sol = solve_affine(b, rhs);
            if (!sol) throw std::runtime_error("restrict_corep: subspace is not invariant");
            for (std::size_t i = 0; i < m; ++i) r.u(i, j)[t] = sol->particular[i];
        }
    }
    return r;
}

namespace detail {

// Deterministic candidate vectors for cyclic-subcomodule minimization.
inline std::vector<Vec> split_candidates(std::size_t dim, int conductor) {
    std::vector<Vec> cands;
    for (std::size_t i = 0; i < dim; ++i) {
        Vec v(dim, CycScalar(0));
        v[i] = CycScalar(1);
        cands.push_back(v);
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (i == j) continue;
            for (int s : {1, -1})
                for (int p = 0; p < conductor; ++p) {
                    Vec v(dim, CycScalar(0));
                    v[i] = CycScalar(1);
                    v[j] = CycScalar::cyc(s, 1, p, conductor);
                    cands.push_back(std::move(v));
                }
        }
    return cands;
}

// Eigenvalue split: exact kernels of (f - lambda) for field eigenvalues.
inline std::optional<std::vector<Vec>> eigen_split(const Matrix& f, int conductor) {
    const std::size_t n = f.rows();
    auto mp = min_poly(f);
    if (mp.size() <= 1) return std::nullopt;  // scalar
    for (const auto& lambda : exact_roots_in_field(mp, conductor)) {
        Matrix shifted = f;
        for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) -= lambda;
        auto ker = kernel(shifted);
        if (!ker.empty() && ker.size() < n) return ker;
    }
    return std::nullopt;
}

// One proper invariant subspace of an (already known reducible) corep, in its
// own coordinates.
inline std::vector<Vec> find_proper_invariant(const Corep& c, int conductor,
                                              const std::vector<GradedMorphism>& endos) {
    // Phase 1: smallest cyclic subcomodule over a deterministic candidate grid.
    std::vector<Vec> best;
    for (const auto& v : split_candidates(c.dim, conductor)) {
        auto sub = cyclic_subcomodule(c, v);
        if (sub.empty() || sub.size() >= c.dim) continue;
        if (best.empty() || sub.size() < best.size()) best = sub;
        if (best.size() == 1) return best;
    }
    if (!best.empty()) return best;

    // Phase 2: exact eigensplitting of the commutant, center first.
    std::vector<Matrix> pool;
    {
        // center of End: z with z f_i = f_i z for all basis elements
        const std::size_t m = endos.size();
        std::vector<Vec> rows;
        for (const auto& f : endos) {
            for (std::size_t i = 0; i < c.dim; ++i)
                for (std::size_t j = 0; j < c.dim; ++j) {
                    Vec row(m);
                    for (std::size_t k = 0; k < m; ++k) {
                        Matrix comm = endos[k].map.matrix * f.map.matrix -
                                      f.map.matrix * endos[k].map.matrix;
                        row[k] = comm.at(i, j);
                    }
                    rows.push_back(std::move(row));
                }
        }
        Matrix sys(rows.size(), m);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t k = 0; k < m; ++k) sys.at(r, k) = rows[r][k];
        for (const auto& z : kernel(sys)) {
            Matrix zm(c.dim, c.dim);
            for (std::size_t k = 0; k < m; ++k) zm = zm + (z[k] * endos[k].map.matrix);
            pool.push_back(zm);
        }
    }
    for (const auto& f : endos) pool.push_back(f.map.matrix);
    for (std::size_t i = 0; i < endos.size(); ++i)
        for (std::size_t j = 0; j < endos.size(); ++j)
            pool.push_back(endos[i].map.matrix * endos[j].map.matrix);
    for (const auto& f : pool) {
        auto split = eigen_split(f, conductor);
        if (split) return *split;
    }

    // Phase 3: rank-drop along pencils of candidate component matrices.
    auto component_matrix = [&](const Vec& v) {
        const std::size_t hd = c.hopf->dim;
        Vec cv = c.coact(v);
        Matrix k(c.dim, hd);
        for (std::size_t i = 0; i < c.dim; ++i)
            for (std::size_t t = 0; t < hd; ++t) k.at(i, t) = cv[i * hd + t];
        return k;
    };
    auto basis_vec = [&](std::size_t i) {
        Vec v(c.dim, CycScalar(0));
        v[i] = CycScalar(1);
        return v;
    };
    for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = i + 1; j < c.dim; ++j) {
            Matrix k1 = component_matrix(basis_vec(i));
            Matrix k2 = component_matrix(basis_vec(j));
            // choose a square column minor that is generically nonsingular
            Rref re = rref(k1);
            if (re.rank < c.dim) continue;  // handled by phase 1
            std::vector<std::size_t> colsel = re.pivot_cols;
            auto minor_det = [&](const Rational& t) {
                Matrix sq(c.dim, c.dim);
                for (std::size_t r2 = 0; r2 < c.dim; ++r2)
                    for (std::size_t c2 = 0; c2 < c.dim; ++c2)
                        sq.at(r2, c2) =
                            k1.at(r2, colsel[c2]) + CycScalar(t) * k2.at(r2, colsel[c2]);
                return det(sq);
            };
            // p(t) = det(K1 + t K2 restricted), interpolated exactly
            const std::size_t degree = c.dim;
            std::vector<CycScalar> values;
            for (std::size_t s = 0; s <= degree; ++s)
                values.push_back(minor_det(Rational(static_cast<long long>(s))));
            // Lagrange interpolation on nodes 0..degree
            std::vector<CycScalar> poly(degree + 1, CycScalar(0));
            for (std::size_t s = 0; s <= degree; ++s) {
                std::vector<CycScalar> numer{CycScalar(1)};
                CycScalar denom(1);
                for (std::size_t q = 0; q <= degree; ++q) {
                    if (q == s) continue;
                    std::vector<CycScalar> next(numer.size() + 1, CycScalar(0));
                    for (std::size_t d = 0; d < numer.size(); ++d) {
                        next[d] += numer[d] * CycScalar(-static_cast<long long>(q));
                        next[d + 1] += numer[d];
                    }
                    numer = std::move(next);
                    denom *= CycScalar(static_cast<long long>(s)) -
                             CycScalar(static_cast<long long>(q));
                }
                CycScalar w = values[s] / denom;
                for (std::size_t d = 0; d < numer.size(); ++d) poly[d] += w * numer[d];
            }
            // normalize to monic if possible, drop exact zero leading terms
            while (poly.size() > 1 && poly.back().is_zero()) poly.pop_back();
            if (poly.size() <= 1) continue;
            CycScalar lead = poly.back();
            poly.pop_back();
            for (auto& cc : poly) cc = cc / lead;
            for (const auto& t0 : exact_roots_in_field(poly, conductor)) {
                Vec v = basis_vec(i);
                v[j] += t0;
                auto sub = cyclic_subcomodule(c, v);
                if (!sub.empty() && sub.size() < c.dim) return sub;
            }
        }
    throw std::runtime_error(
        "find_proper_invariant: could not split a reducible corepresentation; "
        "the session conductor may be too small for this Hopf algebra");
}

}  // namespace detail

// All invariant irreducible subspaces of c (ambient coordinates), obtained by
// recursive splitting with Haar-orthogonal complements.
inline std::vector<std::vector<Vec>> split_into_irreducibles(const Corep& c,
                                                             const HaarFunctional& ha,
                                                             int conductor) {
    Matrix gram = invariant_gram(c, ha);
    std::vector<std::vector<Vec>> done;
    std::vector<std::vector<Vec>> work;
    {
        std::vector<Vec> full;
        for (std::size_t i = 0; i < c.dim; ++i) {
            Vec v(c.dim, CycScalar(0));
            v[i] = CycScalar(1);
            full.push_back(std::move(v));
        }
        work.push_back(std::move(full));
    }
    while (!work.empty()) {
        std::vector<Vec> w = std::move(work.back());
        work.pop_back();
        if (w.empty()) continue;
        Corep cw = restrict_corep(c, w);
        auto endos = mor_space(cw, cw, 0);
        if (endos.size() == 1) {
            done.push_back(std::move(w));
            continue;
        }
        std::vector<Vec> sub_local = detail::find_proper_invariant(cw, conductor, endos);
        // lift to ambient coordinates
        Matrix bw = Matrix::from_columns(w);
        std::vector<Vec> sub_ambient;
        for (const auto& s : sub_local) sub_ambient.push_back(bw * s);
        // Haar-orthogonal complement of sub inside w, in ambient coordinates:
        // x in span(w) with (u^dagger G) x = 0 for all u in sub
        Matrix constraints(sub_ambient.size(), w.size());
        for (std::size_t r = 0; r < sub_ambient.size(); ++r) {
            Vec gu = gram.conj_transposed() * sub_ambient[r];
            // row: conj(gu)^T B_w
            for (std::size_t j = 0; j < w.size(); ++j) {
                CycScalar acc(0);
                for (std::size_t i = 0; i < c.dim; ++i) acc += gu[i].conj() * bw.at(i, j);
                constraints.at(r, j) = acc;
            }
        }
        std::vector<Vec> comp_ambient;
        for (const auto& k : kernel(constraints)) comp_ambient.push_back(bw * k);
        if (sub_ambient.size() + comp_ambient.size() != w.size())
            throw std::runtime_error("split_into_irreducibles: complement dimension mismatch");
        work.push_back(std::move(sub_ambient));
        work.push_back(std::move(comp_ambient));
    }
    return done;
}

// Exact Cholesky over the field: G = P^dagger P with P upper triangular.
// Fails (nullopt) when a pivot square root does not exist in the field.
inline std::optional<Matrix> field_cholesky(const Matrix& g) {
    const std::size_t n = g.rows();
    Matrix a = g;
    Matrix p(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        auto pivot_sqrt = exact_sqrt(a.at(k, k));
        if (!pivot_sqrt || pivot_sqrt->is_zero()) return std::nullopt;
        CycScalar inv = pivot_sqrt->inverse();
        p.at(k, k) = *pivot_sqrt;
        for (std::size_t j = k + 1; j < n; ++j) p.at(k, j) = inv * a.at(k, j);
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = a.at(i, j) - a.at(i, k) * a.at(k, k).inverse() * a.at(k, j);
    }
    return p;
}

// Conjugate a corep into a unitary one using the invariant Gram, when the
// required square roots exist in the scalar field.
inline std::optional<Corep> unitarize(const Corep& c, const HaarFunctional& ha) {
    if (is_unitary_corep(c)) return c;
    Matrix g = invariant_gram(c, ha);
    auto p = field_cholesky(g);
    if (!p) return std::nullopt;
    Matrix pinv = inverse(*p);
    Corep r(c.hopf, c.dim);
    // u' = P u P^{-1} with scalar matrices acting on algebra-valued entries
    for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = 0; j < c.dim; ++j) {
            AlgElem acc(c.hopf->dim, CycScalar(0));
            for (std::size_t k = 0; k < c.dim; ++k)
                for (std::size_t l = 0; l < c.dim; ++l) {
                    CycScalar coeff = p->at(i, k) * pinv.at(l, j);
                    if (coeff.is_zero()) continue;
                    acc = vec_add(acc, vec_scale(coeff, c.u(k, l)));
                }
            r.u(i, j) = acc;
        }
    if (!is_unitary_corep(r)) return std::nullopt;
    return r;
}

// Complete set of mutually nonequivalent irreducible unitary coreps.
struct IrreducibleSet {
    HopfPtr hopf;
    HaarFunctional haar_functional;
    std::vector<Corep> members;
    std::vector<bool> unitary;

    std::size_t size() const { return members.size(); }
};

inline IrreducibleSet irreducible_set(HopfPtr h) {
    const int conductor = std::max(1, h->preferred_conductor);
    HaarFunctional ha = haar(*h);
    Corep reg = regular_corep(h);
    auto spaces = split_into_irreducibles(reg, ha, conductor);
    // restrict and deduplicate by Schur equivalence
    std::vector<Corep> reps;
    for (const auto& w : spaces) {
        Corep cw = restrict_corep(reg, w);
        bool dup = false;
        for (const auto& r : reps)
            if (r.dim == cw.dim && !mor_space(cw, r, 0).empty()) dup = true;
        if (!dup) reps.push_back(std::move(cw));
    }
    // canonical order: dimension ascending, discovery order within a dimension;
    // put the trivial corep first when present
    std::stable_sort(reps.begin(), reps.end(),
                     [](const Corep& a, const Corep& b) { return a.dim < b.dim; });
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (reps[i].dim == 1 && reps[i].u(0, 0) == h->unit) {
            std::rotate(reps.begin(), reps.begin() + static_cast<long>(i),
                        reps.begin() + static_cast<long>(i) + 1);
            break;
        }
    }
    IrreducibleSet set{h, std::move(ha), {}, {}};
    std::size_t dim_sq = 0;
    for (auto& r : reps) {
        auto uni = unitarize(r, set.haar_functional);
        set.unitary.push_back(uni.has_value());
        set.members.push_back(uni ? std::move(*uni) : std::move(r));
        dim_sq += set.members.back().dim * set.members.back().dim;
    }
    if (dim_sq != h->dim)
        throw std::runtime_error("irreducible_set: Peter-Weyl dimension count failed: sum of "
                                 "squares " +
                                 std::to_string(dim_sq) + " != " + std::to_string(h->dim));
    return set;
}

// Multiplicities and the explicit degree-0 isomorphism onto the isotypic sum.
struct Decomposition {
    std::vector<std::size_t> multiplicities;  // aligned with the irreducible set
    bool complete = false;
    std::string error;
    // iso: (+)_alpha V_alpha^(m_alpha) -> V_c, invertible degree-0 intertwiner
    Matrix iso;
    Corep sum;  // the direct sum corep the iso starts from
};

inline Decomposition decompose(const Corep& c, const IrreducibleSet& set) {
    Decomposition d;
    std::vector<Vec> columns;
    for (const auto& alpha : set.members) {
        auto basis = mor_space(alpha, c, 0);
        d.multiplicities.push_back(basis.size());
        for (const auto& f : basis)
            for (std::size_t r = 0; r < alpha.dim; ++r) columns.push_back(f.map.matrix.col(r));
    }
    std::size_t total = 0;
    for (std::size_t i = 0; i < set.members.size(); ++i)
        total += d.multiplicities[i] * set.members[i].dim;
    if (total != c.dim) {
        d.complete = false;
        d.error = "isotypic dimensions sum to " + std::to_string(total) + ", expected " +
                  std::to_string(c.dim);
        return d;
    }
    if (c.dim == 0) {
        d.complete = true;
        d.iso = Matrix(0, 0);
        d.sum = Corep(c.hopf, 0);
        return d;
    }
    d.iso = Matrix::from_columns(columns);
    if (rank(d.iso) != c.dim) {
        d.complete = false;
        d.error = "assembled intertwiner is singular";
        return d;
    }
    // direct sum corep in the same column order
    Corep sum(c.hopf, 0);
    bool first = true;
    for (std::size_t i = 0; i < set.members.size(); ++i)
        for (std::size_t m = 0; m < d.multiplicities[i]; ++m) {
            sum = first ? set.members[i] : direct_sum(sum, set.members[i]);
            first = false;
        }
    d.sum = std::move(sum);
    d.complete = true;
    return d;
}

// Multiplicity of one irreducible inside an arbitrary corep.
inline std::size_t multiplicity(const Corep& alpha, const Corep& c) {
    return mor_space(alpha, c, 0).size();
}

}  // namespace qpbkit
