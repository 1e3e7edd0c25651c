#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/algebra.hpp"
#include "qpbkit/corep.hpp"

namespace qpbkit {

// Quantum principal bundle: total *-algebra GM with a coaction Phi of the
// Hopf algebra whose invariants form the base and whose canonical map
// beta(x (x) y) = (x (x) 1) Phi(y) has full rank.
struct QPBundle {
    StarAlgebra total;
    HopfPtr hopf;
    Corep coaction;              // of hopf on the underlying space of total
    std::vector<Vec> base_basis;  // the invariant subalgebra M inside GM
};

// Phi(x) for x in GM, as coordinates in GM (x) G.
inline Vec bundle_coact(const QPBundle& b, const AlgElem& x) { return b.coaction.coact(x); }

inline Vec embed_with_unit(const QPBundle& b, const AlgElem& x) {
    return kron_vec(x, b.hopf->unit);
}

// Is x invariant, i.e. Phi(x) = x (x) 1?
inline bool is_base_element(const QPBundle& b, const AlgElem& x) {
    return bundle_coact(b, x) == embed_with_unit(b, x);
}

inline CheckReport check_bundle_axioms(const StarAlgebra& total, HopfPtr hopf,
                                       const Corep& coaction) {
    CheckReport rep;
    const HopfAlgebra& h = *hopf;
    const std::size_t n = total.dim, hd = h.dim;
    // item 1: Phi is a corepresentation and a unital *-algebra morphism
    rep.merge(check_corep(coaction));
    {
        bool unital = coaction.coact(total.unit) == kron_vec(total.unit, h.unit);
        rep.add("bundle.coaction_unital", unital);
        bool mult_ok = true;
        std::string w;
        for (std::size_t i = 0; i < n && mult_ok; ++i)
            for (std::size_t j = 0; j < n && mult_ok; ++j) {
                Vec lhs = coaction.coact(total.multiply(total.basis_elem(i), total.basis_elem(j)));
                // Phi(x_i) Phi(x_j) in GM (x) G
                Vec a = coaction.coact(total.basis_elem(i));
                Vec bvec = coaction.coact(total.basis_elem(j));
                Vec rhs(n * hd, CycScalar(0));
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t s = 0; s < hd; ++s) {
                        const CycScalar& ca = a[p * hd + s];
                        if (ca.is_zero()) continue;
                        for (std::size_t q = 0; q < n; ++q)
                            for (std::size_t t = 0; t < hd; ++t) {
                                const CycScalar& cb = bvec[q * hd + t];
                                if (cb.is_zero()) continue;
                                AlgElem gm = total.multiply(total.basis_elem(p),
                                                            total.basis_elem(q));
                                AlgElem gg = h.multiply(h.basis_elem(s), h.basis_elem(t));
                                const CycScalar c = ca * cb;
                                for (std::size_t z = 0; z < n; ++z) {
                                    if (gm[z].is_zero()) continue;
                                    for (std::size_t y = 0; y < hd; ++y) {
                                        if (gg[y].is_zero()) continue;
                                        rhs[z * hd + y] += c * gm[z] * gg[y];
                                    }
                                }
                            }
                    }
                if (lhs != rhs) {
                    mult_ok = false;
                    w = "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
                }
            }
        rep.add("bundle.coaction_multiplicative", mult_ok, w);
        bool star_ok = true;
        std::string ws;
        for (std::size_t i = 0; i < n && star_ok; ++i) {
            Vec lhs = coaction.coact(total.star(total.basis_elem(i)));
            Vec phi_x = coaction.coact(total.basis_elem(i));
            Vec rhs(n * hd, CycScalar(0));
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t s = 0; s < hd; ++s) {
                    const CycScalar& c = phi_x[p * hd + s];
                    if (c.is_zero()) continue;
                    AlgElem xs = total.star(total.basis_elem(p));
                    AlgElem gs = h.star(h.basis_elem(s));
                    for (std::size_t z = 0; z < n; ++z) {
                        if (xs[z].is_zero()) continue;
                        for (std::size_t y = 0; y < hd; ++y) {
                            if (gs[y].is_zero()) continue;
                            rhs[z * hd + y] += c.conj() * xs[z] * gs[y];
                        }
                    }
                }
            if (lhs != rhs) {
                star_ok = false;
                ws = "basis index " + std::to_string(i);
            }
        }
        rep.add("bundle.coaction_star_morphism", star_ok, ws);
    }
    return rep;
}

// Full bundle gate: axioms, base computation, beta-surjectivity by exact rank.
inline QPBundle check_bundle(StarAlgebra total, HopfPtr hopf, Corep coaction,
                             CheckReport* report = nullptr) {
    CheckReport rep = check_bundle_axioms(total, hopf, coaction);
    const HopfAlgebra& h = *hopf;
    const std::size_t n = total.dim, hd = h.dim;
    // item 2: the base M = { x : Phi(x) = x (x) 1 }
    Matrix inv_sys(n * hd, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec img = coaction.coact(total.basis_elem(j));
        Vec unit_img = kron_vec(total.basis_elem(j), h.unit);
        for (std::size_t r = 0; r < n * hd; ++r) inv_sys.at(r, j) = img[r] - unit_img[r];
    }
    std::vector<Vec> base = kernel(inv_sys);
    {
        bool closed = true;
        std::string w;
        for (std::size_t a = 0; a < base.size() && closed; ++a) {
            if (!in_span(base, total.star(base[a]))) {
                closed = false;
                w = "star of base element " + std::to_string(a);
            }
            for (std::size_t b2 = 0; b2 < base.size() && closed; ++b2)
                if (!in_span(base, total.multiply(base[a], base[b2]))) {
                    closed = false;
                    w = "product of base elements (" + std::to_string(a) + "," +
                        std::to_string(b2) + ")";
                }
        }
        rep.add("bundle.base_subalgebra", closed, w);
    }
    // item 3: beta(x (x) y) = (x (x) 1) Phi(y) surjective, certified by rank
    {
        Matrix beta(n * hd, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Vec img = coaction.coact(total.basis_elem(j));
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t t = 0; t < hd; ++t) {
                        const CycScalar& c = img[p * hd + t];
                        if (c.is_zero()) continue;
                        AlgElem prod = total.multiply(total.basis_elem(i), total.basis_elem(p));
                        for (std::size_t z = 0; z < n; ++z) {
                            if (prod[z].is_zero()) continue;
                            beta.at(z * hd + t, i * n + j) += c * prod[z];
                        }
                    }
            }
        std::size_t beta_rank = rank(beta);
        rep.add("bundle.beta_surjective", beta_rank == n * hd,
                beta_rank == n * hd ? ""
                                    : "rank " + std::to_string(beta_rank) + " of " +
                                          std::to_string(n * hd));
    }
    if (report) *report = rep;
    if (!rep.all_pass()) {
        std::string failed;
        for (const auto& c : rep.checks)
            if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
        if (!report)
            throw std::runtime_error("check_bundle: failed checks: " + failed);
    }
    return QPBundle{std::move(total), std::move(hopf), std::move(coaction), std::move(base)};
}

// --- built-in bundles ----------------------------------------------------------

// M2(C) over C(Z2) with the checkerboard grading: diagonal entries are even,
// off-diagonal entries odd; the base is the diagonal.
inline QPBundle checkerboard_bundle() {
    auto hopf = std::make_shared<HopfAlgebra>(function_algebra(cyclic_table(2)));
    StarAlgebra m2 = matrix_algebra(2);
    Corep phi(hopf, m2.dim);
    AlgElem even{CycScalar(1), CycScalar(1)};   // d0 + d1
    AlgElem odd{CycScalar(1), CycScalar(-1)};   // d0 - d1
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            std::size_t idx = i * 2 + j;
            phi.u(idx, idx) = (i + j) % 2 == 0 ? even : odd;
        }
    return check_bundle(std::move(m2), hopf, std::move(phi));
}

// Trivial bundle M (x) G with Phi = id (x) phi.
inline QPBundle trivial_bundle(const StarAlgebra& base, HopfPtr hopf) {
    const HopfAlgebra& h = *hopf;
    StarAlgebra total = tensor_algebra(base, StarAlgebra::from_hopf(h));
    Corep phi(hopf, total.dim);
    for (std::size_t i = 0; i < base.dim; ++i)
        for (std::size_t a = 0; a < h.dim; ++a)
            for (std::size_t j = 0; j < h.dim; ++j)
                for (std::size_t t = 0; t < h.dim; ++t)
                    phi.u(i * h.dim + a, i * h.dim + j)[t] = h.comult(j, a, t);
    return check_bundle(std::move(total), hopf, std::move(phi));
}

// Point bundle: GM = G over the one-point base.
inline QPBundle point_bundle(HopfPtr hopf) {
    return check_bundle(StarAlgebra::from_hopf(*hopf), hopf, regular_corep(hopf));
}

}  // namespace qpbkit
