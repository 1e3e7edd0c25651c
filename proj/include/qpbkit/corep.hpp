#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/hopf.hpp"

namespace qpbkit {

using HopfPtr = std::shared_ptr<const HopfAlgebra>;

// Matrix corepresentation: qa(e_j) = sum_i e_i (x) u_ij with u_ij in G.
class Corep {
public:
    HopfPtr hopf;
    std::size_t dim = 0;
    std::vector<AlgElem> entries;  // row-major, entries[i*dim+j] = u_ij

    Corep() = default;
    Corep(HopfPtr h, std::size_t n)
        : hopf(std::move(h)), dim(n), entries(n * n, AlgElem(hopf->dim, CycScalar(0))) {}

    const AlgElem& u(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
    AlgElem& u(std::size_t i, std::size_t j) { return entries[i * dim + j]; }

    // Coaction applied to v, as coordinates in V (x) G (index i*hdim + t).
    Vec coact(const Vec& v) const {
        const std::size_t hd = hopf->dim;
        Vec r(dim * hd, CycScalar(0));
        for (std::size_t j = 0; j < dim; ++j) {
            if (v[j].is_zero()) continue;
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t t = 0; t < hd; ++t) {
                    if (u(i, j)[t].is_zero()) continue;
                    r[i * hd + t] += v[j] * u(i, j)[t];
                }
        }
        return r;
    }
};

inline Corep trivial_corep(HopfPtr h, std::size_t n) {
    Corep c(h, n);
    for (std::size_t i = 0; i < n; ++i) c.u(i, i) = h->unit;
    return c;
}

// G coacting on itself by comultiplication.
inline Corep regular_corep(HopfPtr h) {
    Corep c(h, h->dim);
    for (std::size_t i = 0; i < h->dim; ++i)
        for (std::size_t j = 0; j < h->dim; ++j)
            for (std::size_t t = 0; t < h->dim; ++t) c.u(i, j)[t] = h->comult(j, i, t);
    return c;
}

// Diagrams 2.f1 (counit law) and 2.f2 (comodule law), plus optional unitarity.
inline CheckReport check_corep(const Corep& c, bool check_unitarity = false) {
    CheckReport rep;
    const HopfAlgebra& h = *c.hopf;
    {
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < c.dim && ok; ++i)
            for (std::size_t j = 0; j < c.dim && ok; ++j) {
                CycScalar want = i == j ? CycScalar(1) : CycScalar(0);
                if (h.counit(c.u(i, j)) != want) {
                    ok = false;
                    w = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
                }
            }
        rep.add("corep.counit_law", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < c.dim && ok; ++i)
            for (std::size_t j = 0; j < c.dim && ok; ++j) {
                Vec lhs = h.comultiply(c.u(i, j));
                Vec rhs(h.dim * h.dim, CycScalar(0));
                for (std::size_t k = 0; k < c.dim; ++k)
                    rhs = vec_add(rhs, kron_vec(c.u(i, k), c.u(k, j)));
                if (lhs != rhs) {
                    ok = false;
                    w = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
                }
            }
        rep.add("corep.comodule_law", ok, w);
    }
    if (check_unitarity) {
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < c.dim && ok; ++i)
            for (std::size_t j = 0; j < c.dim && ok; ++j) {
                CycScalar d = i == j ? CycScalar(1) : CycScalar(0);
                AlgElem want = vec_scale(d, h.unit);
                AlgElem lhs(h.dim, CycScalar(0));
                AlgElem rhs(h.dim, CycScalar(0));
                for (std::size_t k = 0; k < c.dim; ++k) {
                    lhs = vec_add(lhs, h.multiply(h.star(c.u(k, i)), c.u(k, j)));
                    rhs = vec_add(rhs, h.multiply(c.u(i, k), h.star(c.u(j, k))));
                }
                if (lhs != want || rhs != want) {
                    ok = false;
                    w = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
                }
            }
        rep.add("corep.unitarity", ok, w);
    }
    return rep;
}

inline bool is_unitary_corep(const Corep& c) {
    CheckReport r = check_corep(c, true);
    return r.all_pass();
}

// Graded intertwiner between two corepresentations.
struct GradedMorphism {
    Corep source;
    Corep target;
    LinearMap map;

    int parity() const { return map.parity; }
};

// Diagram 2.f3 (degree 0) / 2.f4 (degree 1), checked entrywise.
inline bool is_intertwiner(const Corep& a, const Corep& b, const LinearMap& f) {
    const HopfAlgebra& h = *a.hopf;
    const std::size_t hd = h.dim;
    for (std::size_t j = 0; j < a.dim; ++j) {
        // rhs: coaction of b applied to f(e_j)
        Vec fe(a.dim, CycScalar(0));
        fe[j] = CycScalar(1);
        Vec rhs = b.coact(f.apply(fe));
        // lhs: (f (x) id) or (f (x) *) applied to coaction of a at e_j
        Vec lhs(b.dim * hd, CycScalar(0));
        for (std::size_t i = 0; i < a.dim; ++i) {
            AlgElem g = f.parity == 0 ? a.u(i, j) : h.star(a.u(i, j));
            for (std::size_t k = 0; k < b.dim; ++k) {
                if (f.matrix.at(k, i).is_zero()) continue;
                for (std::size_t t = 0; t < hd; ++t) {
                    if (g[t].is_zero()) continue;
                    lhs[k * hd + t] += f.matrix.at(k, i) * g[t];
                }
            }
        }
        if (lhs != rhs) return false;
    }
    return true;
}

// Basis of Mor^degree(a, b): the linear system of Diagram 2.f3 or 2.f4 over
// the scalar field, solved exactly.
inline std::vector<GradedMorphism> mor_space(const Corep& a, const Corep& b, int degree) {
    if (a.hopf.get() != b.hopf.get())
        throw std::invalid_argument("mor_space: corepresentations over different Hopf algebras");
    const HopfAlgebra& h = *a.hopf;
    const std::size_t na = a.dim, nb = b.dim, hd = h.dim;
    // unknowns f_{k i} with k < nb, i < na; index k*na + i
    Matrix sys(nb * na * hd, nb * na);
    std::size_t row = 0;
    for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t j = 0; j < na; ++j) {
            // sum_l v_{kl} f_{lj} - sum_i (u or u*)_{ij} f_{ki} = 0  componentwise in G
            for (std::size_t t = 0; t < hd; ++t) {
                for (std::size_t l = 0; l < nb; ++l)
                    sys.at(row + t, l * na + j) += b.u(k, l)[t];
                for (std::size_t i = 0; i < na; ++i) {
                    AlgElem g = degree == 0 ? a.u(i, j) : h.star(a.u(i, j));
                    sys.at(row + t, k * na + i) -= g[t];
                }
            }
            row += hd;
        }
    std::vector<GradedMorphism> basis;
    for (const auto& v : kernel(sys)) {
        Matrix m(nb, na);
        for (std::size_t k = 0; k < nb; ++k)
            for (std::size_t i = 0; i < na; ++i) m.at(k, i) = v[k * na + i];
        basis.push_back(GradedMorphism{a, b, LinearMap{std::move(m), degree}});
    }
    return basis;
}

// --- the conjugate / direct sum / tensor functors -----------------------------

// Complex conjugate corepresentation: entrywise star on the matrix.
inline Corep conjugate(const Corep& c) {
    Corep r(c.hopf, c.dim);
    for (std::size_t i = 0; i < c.dim; ++i)
        for (std::size_t j = 0; j < c.dim; ++j) r.u(i, j) = c.hopf->star(c.u(i, j));
    return r;
}

// -(f) = conj . f . conj^{-1}; in the fixed basis the matrix conjugates
// entrywise and the parity is preserved.
inline GradedMorphism conjugate_morphism(const GradedMorphism& f) {
    return GradedMorphism{conjugate(f.source), conjugate(f.target),
                          LinearMap{f.map.matrix.conjugated(), f.map.parity}};
}

inline Corep direct_sum(const Corep& a, const Corep& b) {
    if (a.hopf.get() != b.hopf.get())
        throw std::invalid_argument("direct_sum: different Hopf algebras");
    Corep r(a.hopf, a.dim + b.dim);
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j) r.u(i, j) = a.u(i, j);
    for (std::size_t i = 0; i < b.dim; ++i)
        for (std::size_t j = 0; j < b.dim; ++j) r.u(a.dim + i, a.dim + j) = b.u(i, j);
    return r;
}

// Degree 0 pair: (f1, f2) blockwise.
// Degree 1 pair (cross pairing f1: V1 -> W2, f2: V2 -> W1): the twisted sum
// (v1, v2) -> (f2(v2), f1(v1)).
inline GradedMorphism direct_sum_morphisms(const GradedMorphism& f1, const GradedMorphism& f2) {
    if (f1.parity() != f2.parity())
        throw std::invalid_argument("direct_sum_morphisms: mixed parity pair");
    const int p = f1.parity();
    if (p == 0) {
        Corep src = direct_sum(f1.source, f2.source);
        Corep tgt = direct_sum(f1.target, f2.target);
        Matrix m(tgt.dim, src.dim);
        for (std::size_t i = 0; i < f1.map.codomain_dim(); ++i)
            for (std::size_t j = 0; j < f1.map.domain_dim(); ++j)
                m.at(i, j) = f1.map.matrix.at(i, j);
        for (std::size_t i = 0; i < f2.map.codomain_dim(); ++i)
            for (std::size_t j = 0; j < f2.map.domain_dim(); ++j)
                m.at(f1.map.codomain_dim() + i, f1.map.domain_dim() + j) = f2.map.matrix.at(i, j);
        return GradedMorphism{std::move(src), std::move(tgt), LinearMap{std::move(m), 0}};
    }
    // f1 in Mor^1(a1, b2), f2 in Mor^1(a2, b1); result in Mor^1(a1+a2, b1+b2)
    Corep src = direct_sum(f1.source, f2.source);
    Corep tgt = direct_sum(f2.target, f1.target);
    const std::size_t w1 = f2.map.codomain_dim();
    Matrix m(tgt.dim, src.dim);
    for (std::size_t i = 0; i < w1; ++i)
        for (std::size_t j = 0; j < f2.map.domain_dim(); ++j)
            m.at(i, f1.map.domain_dim() + j) = f2.map.matrix.at(i, j);
    for (std::size_t i = 0; i < f1.map.codomain_dim(); ++i)
        for (std::size_t j = 0; j < f1.map.domain_dim(); ++j)
            m.at(w1 + i, j) = f1.map.matrix.at(i, j);
    return GradedMorphism{std::move(src), std::move(tgt), LinearMap{std::move(m), 1}};
}

// (u (x) v)_{(ik),(jl)} = u_ij * v_kl in the fixed lexicographic basis.
inline Corep tensor(const Corep& a, const Corep& b) {
    if (a.hopf.get() != b.hopf.get())
        throw std::invalid_argument("tensor: different Hopf algebras");
    const HopfAlgebra& h = *a.hopf;
    Corep r(a.hopf, a.dim * b.dim);
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            for (std::size_t k = 0; k < b.dim; ++k)
                for (std::size_t l = 0; l < b.dim; ++l)
                    r.u(i * b.dim + k, j * b.dim + l) = h.multiply(a.u(i, j), b.u(k, l));
    return r;
}

// Degree 0 pair: kron(f1, f2).
// Degree 1 pair (cross pairing): (f1 (x)^T f2)(v1 (x) v2) = f2(v2) (x) f1(v1).
inline GradedMorphism tensor_morphisms(const GradedMorphism& f1, const GradedMorphism& f2) {
    if (f1.parity() != f2.parity())
        throw std::invalid_argument("tensor_morphisms: mixed parity pair");
    const int p = f1.parity();
    if (p == 0) {
        Corep src = tensor(f1.source, f2.source);
        Corep tgt = tensor(f1.target, f2.target);
        return GradedMorphism{std::move(src), std::move(tgt),
                              LinearMap{kron(f1.map.matrix, f2.map.matrix), 0}};
    }
    Corep src = tensor(f1.source, f2.source);
    Corep tgt = tensor(f2.target, f1.target);
    const std::size_t w1 = f2.map.codomain_dim(), w2 = f1.map.codomain_dim();
    const std::size_t v1 = f1.map.domain_dim(), v2 = f2.map.domain_dim();
    Matrix m(w1 * w2, v1 * v2);
    for (std::size_t a1 = 0; a1 < w1; ++a1)
        for (std::size_t b1 = 0; b1 < w2; ++b1)
            for (std::size_t i = 0; i < v1; ++i)
                for (std::size_t j = 0; j < v2; ++j)
                    m.at(a1 * w2 + b1, i * v2 + j) =
                        f2.map.matrix.at(a1, j) * f1.map.matrix.at(b1, i);
    return GradedMorphism{std::move(src), std::move(tgt), LinearMap{std::move(m), 1}};
}

// Composition in the graded category (parity adds; antilinear inner twist).
inline GradedMorphism compose_morphisms(const GradedMorphism& f, const GradedMorphism& g) {
    return GradedMorphism{g.source, f.target, compose(f.map, g.map)};
}

inline GradedMorphism identity_morphism(const Corep& c) {
    return GradedMorphism{c, c, LinearMap{Matrix::identity(c.dim), 0}};
}

}  // namespace qpbkit
