#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/algebra.hpp"
#include "qpbkit/corep.hpp"

namespace qpbkit {

// Bicovariant first-order differential *-calculus over a Hopf algebra, given
// by an ad-invariant right ideal R of ker(eps), together with the universal
// envelope data in degrees <= 3.
//
//   invGamma      = G / (C1 + R), quantum germs map pi = proj
//   invGamma^2    = (invGamma (x) invGamma) / span{ (pi (x) pi) phi(r) }
//   invGamma^3    = the analogous two-sided quotient
class FODC {
public:
    HopfPtr hopf;
    std::vector<Vec> ideal_basis;  // closed right ideal R
    std::size_t dim = 0;           // dim invGamma
    Matrix germs;                  // pi : G -> invGamma
    Matrix lift;                   // fixed section of pi
    std::vector<CycScalar> circ_tensor;  // theta_k o x_t = sum_l circ[(k*hd+t)*dim+l] theta_l

    std::size_t dim2 = 0, dim3 = 0;
    Matrix proj2, lift2;  // tensor^2 -> wedge^2 and a section
    Matrix proj3, lift3;
    Matrix d1;     // invGamma -> wedge^2, d pi(g) = -pi(g1) pi(g2)
    Matrix star1;  // antilinear on invGamma coordinates

    const CycScalar& circ(std::size_t k, std::size_t t, std::size_t l) const {
        return circ_tensor[(k * hopf->dim + t) * dim + l];
    }

    std::size_t wedge_dim(int degree) const {
        switch (degree) {
            case 0: return 1;
            case 1: return dim;
            case 2: return dim2;
            case 3: return dim3;
            default: throw std::invalid_argument("FODC: degree above the cap");
        }
    }

    // wedge product between homogeneous left-invariant forms
    Vec wedge(int ka, const Vec& a, int kb, const Vec& b) const {
        if (ka == 0) return vec_scale(a[0], b);
        if (kb == 0) return vec_scale(b[0], a);
        if (ka + kb > 3) throw std::invalid_argument("FODC: wedge above the cap");
        Vec ta = ka == 1 ? a : lift2 * a;
        Vec tb = kb == 1 ? b : lift2 * b;
        Vec t = kron_vec(ta, tb);
        if (ka + kb == 2) return proj2 * t;
        return proj3 * t;
    }

    // right action extended multiplicatively to the envelope
    Vec circ_action(int degree, const Vec& v, const AlgElem& g) const {
        const std::size_t hd = hopf->dim;
        if (degree == 0) return Vec{v[0] * hopf->counit(g)};
        if (degree == 1) {
            Vec r(dim, CycScalar(0));
            for (std::size_t k = 0; k < dim; ++k) {
                if (v[k].is_zero()) continue;
                for (std::size_t t = 0; t < hd; ++t) {
                    if (g[t].is_zero()) continue;
                    for (std::size_t l = 0; l < dim; ++l)
                        r[l] += v[k] * g[t] * circ(k, t, l);
                }
            }
            return r;
        }
        // (theta eta) o g = (theta o g1)(eta o g2) on a lifted representative
        const Vec tensor_rep = degree == 2 ? lift2 * v : lift3 * v;
        const std::size_t lower = degree == 2 ? dim : dim2;
        Vec out(wedge_dim(degree), CycScalar(0));
        Vec cg = hopf->comultiply(g);
        for (std::size_t t1 = 0; t1 < hd; ++t1)
            for (std::size_t t2 = 0; t2 < hd; ++t2) {
                const CycScalar& c = cg[t1 * hd + t2];
                if (c.is_zero()) continue;
                // split the representative as sum theta_k (x) rest and act legwise
                // tensor_rep has shape dim x (dim or dim^2)
                const std::size_t rest = tensor_rep.size() / dim;
                for (std::size_t k = 0; k < dim; ++k) {
                    Vec head(dim, CycScalar(0));
                    head[k] = CycScalar(1);
                    Vec acted_head = circ_action(1, head, hopf->basis_elem(t1));
                    Vec tail(rest, CycScalar(0));
                    bool nonzero = false;
                    for (std::size_t r2 = 0; r2 < rest; ++r2) {
                        tail[r2] = tensor_rep[k * rest + r2];
                        if (!tail[r2].is_zero()) nonzero = true;
                    }
                    if (!nonzero) continue;
                    Vec acted_tail =
                        degree == 2
                            ? circ_action(1, tail, hopf->basis_elem(t2))
                            : flatten_circ2(tail, t2);
                    // recombine: acted_head (x) acted_tail, project
                    Vec tens = kron_vec(acted_head, acted_tail);
                    Vec proj = degree == 2 ? proj2 * tens : proj3 * tens;
                    out = vec_add(out, vec_scale(c, proj));
                }
            }
        return out;
    }

    // star on each wedge degree (antilinear, applied to plain coordinates)
    Vec star_action(int degree, const Vec& v) const {
        Vec c(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i].conj();
        if (degree == 0) return c;
        if (degree == 1) return star1 * c;
        if (degree == 2) {
            Vec rep = lift2 * c;
            Vec out(dim2, CycScalar(0));
            for (std::size_t k = 0; k < dim; ++k)
                for (std::size_t l = 0; l < dim; ++l) {
                    const CycScalar& a = rep[k * dim + l];
                    if (a.is_zero()) continue;
                    Vec sk = star1 * basis_vec(dim, k);
                    Vec sl = star1 * basis_vec(dim, l);
                    out = vec_sub(out, vec_scale(a, proj2 * kron_vec(sl, sk)));
                }
            return out;
        }
        if (degree == 3) {
            Vec rep = lift3 * c;
            Vec out(dim3, CycScalar(0));
            for (std::size_t k = 0; k < dim; ++k)
                for (std::size_t l = 0; l < dim; ++l)
                    for (std::size_t p = 0; p < dim; ++p) {
                        const CycScalar& a = rep[(k * dim + l) * dim + p];
                        if (a.is_zero()) continue;
                        Vec sk = star1 * basis_vec(dim, k);
                        Vec sl = star1 * basis_vec(dim, l);
                        Vec sp = star1 * basis_vec(dim, p);
                        out = vec_sub(out,
                                      vec_scale(a, proj3 * kron_vec(sp, kron_vec(sl, sk))));
                    }
            return out;
        }
        throw std::invalid_argument("FODC: star above the cap");
    }

    // differential on the envelope
    Vec d_action(int degree, const Vec& v) const {
        if (degree == 0) return Vec(dim, CycScalar(0));
        if (degree == 1) return d1 * v;
        if (degree == 2) {
            Vec rep = lift2 * v;
            Vec out(dim3, CycScalar(0));
            for (std::size_t k = 0; k < dim; ++k)
                for (std::size_t l = 0; l < dim; ++l) {
                    const CycScalar& a = rep[k * dim + l];
                    if (a.is_zero()) continue;
                    Vec dk = d1 * basis_vec(dim, k);  // wedge^2
                    Vec dl = d1 * basis_vec(dim, l);
                    Vec term1 = proj3 * kron_vec(lift2 * dk, basis_vec(dim, l));
                    Vec term2 = proj3 * kron_vec(basis_vec(dim, k), lift2 * dl);
                    out = vec_add(out, vec_scale(a, vec_sub(term1, term2)));
                }
            return out;
        }
        throw std::invalid_argument("FODC: differential above the cap");
    }

    // default embedded differential through the fixed lift
    Matrix default_delta() const {
        Matrix d(dim * dim, dim);
        for (std::size_t k = 0; k < dim; ++k) {
            Vec img = kron(germs, germs) * hopf->comultiply(lift.col(k));
            for (std::size_t r = 0; r < dim * dim; ++r) d.at(r, k) = img[r];
        }
        return d;
    }

private:
    static Vec basis_vec(std::size_t n, std::size_t i) {
        Vec v(n, CycScalar(0));
        v[i] = CycScalar(1);
        return v;
    }

    Vec flatten_circ2(const Vec& tensor_tail, std::size_t t) const {
        // tail lives in invGamma (x) invGamma; act with phi-split legs
        const std::size_t hd = hopf->dim;
        Vec cg = hopf->comultiply(hopf->basis_elem(t));
        Vec out(dim * dim, CycScalar(0));
        for (std::size_t a = 0; a < hd; ++a)
            for (std::size_t b = 0; b < hd; ++b) {
                const CycScalar& c = cg[a * hd + b];
                if (c.is_zero()) continue;
                for (std::size_t k = 0; k < dim; ++k)
                    for (std::size_t l = 0; l < dim; ++l) {
                        const CycScalar& x = tensor_tail[k * dim + l];
                        if (x.is_zero()) continue;
                        Vec ak = circ_action(1, basis_vec(dim, k), hopf->basis_elem(a));
                        Vec al = circ_action(1, basis_vec(dim, l), hopf->basis_elem(b));
                        Vec t2 = kron_vec(ak, al);
                        for (std::size_t r2 = 0; r2 < dim * dim; ++r2)
                            out[r2] += c * x * t2[r2];
                    }
            }
        return out;
    }
};

// (phi (x) id) phi coefficients of a basis element, indexed (a*hd + b)*hd + c.
inline Vec comultiply_twice(const HopfAlgebra& h, std::size_t i) {
    const std::size_t hd = h.dim;
    Vec out(hd * hd * hd, CycScalar(0));
    for (std::size_t a0 = 0; a0 < hd; ++a0)
        for (std::size_t b0 = 0; b0 < hd; ++b0) {
            const CycScalar& c1 = h.comult(i, a0, b0);
            if (c1.is_zero()) continue;
            for (std::size_t p = 0; p < hd; ++p)
                for (std::size_t q = 0; q < hd; ++q) {
                    const CycScalar& c2 = h.comult(a0, p, q);
                    if (c2.is_zero()) continue;
                    out[(p * hd + q) * hd + b0] += c1 * c2;
                }
        }
    return out;
}

// Right adjoint coaction on G: ad(x) = x(2) (x) kappa(x(1)) x(3).
inline Vec adjoint_on_basis(const HopfAlgebra& h, std::size_t i) {
    const std::size_t hd = h.dim;
    Vec out(hd * hd, CycScalar(0));
    Vec triple = comultiply_twice(h, i);
    for (std::size_t p = 0; p < hd; ++p)
        for (std::size_t q = 0; q < hd; ++q)
            for (std::size_t b = 0; b < hd; ++b) {
                const CycScalar& c = triple[(p * hd + q) * hd + b];
                if (c.is_zero()) continue;
                AlgElem tail = h.multiply(h.antipode(h.basis_elem(p)), h.basis_elem(b));
                for (std::size_t t = 0; t < hd; ++t) {
                    if (tail[t].is_zero()) continue;
                    out[q * hd + t] += c * tail[t];
                }
            }
    return out;
}

// Builds the calculus from ideal generators; R = {} yields the universal FODC.
inline FODC build_fodc(HopfPtr hopf, const std::vector<AlgElem>& r_generators) {
    const HopfAlgebra& h = *hopf;
    const std::size_t hd = h.dim;
    for (const auto& g : r_generators)
        if (!h.counit(g).is_zero())
            throw std::invalid_argument("build_fodc: generator outside ker(eps)");
    // close under right multiplication
    std::vector<Vec> ideal;
    auto add_if_new = [&](const Vec& v) {
        if (vec_is_zero(v) || in_span(ideal, v)) return false;
        ideal.push_back(v);
        return true;
    };
    for (const auto& g : r_generators) add_if_new(g);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Vec> snapshot = ideal;
        for (const auto& r : snapshot)
            for (std::size_t t = 0; t < hd; ++t)
                if (add_if_new(h.multiply(r, h.basis_elem(t)))) grew = true;
    }
    // ad-invariance: ad(R) must lie in R (x) G
    for (std::size_t ri = 0; ri < ideal.size(); ++ri) {
        Vec ad(hd * hd, CycScalar(0));
        for (std::size_t i = 0; i < hd; ++i) {
            if (ideal[ri][i].is_zero()) continue;
            Vec abi = adjoint_on_basis(h, i);
            for (std::size_t r2 = 0; r2 < hd * hd; ++r2) ad[r2] += ideal[ri][i] * abi[r2];
        }
        for (std::size_t t = 0; t < hd; ++t) {
            Vec w(hd);
            for (std::size_t q = 0; q < hd; ++q) w[q] = ad[q * hd + t];
            if (!in_span(ideal, w))
                throw std::runtime_error("build_fodc: ideal is not ad-invariant, witness R[" +
                                         std::to_string(ri) + "] leg " + std::to_string(t));
        }
    }
    FODC f;
    f.hopf = hopf;
    f.ideal_basis = ideal;
    // invGamma = G / (C1 + R)
    std::vector<Vec> rel = ideal;
    rel.push_back(h.unit);
    detail::Quotient q1 = detail::make_quotient(hd, rel);
    f.dim = q1.dim;
    f.germs = q1.proj;
    f.lift = q1.lift;
    // right action pi(a) o g = pi(a g - eps(a) g)
    f.circ_tensor.assign(f.dim * hd * f.dim, CycScalar(0));
    for (std::size_t k = 0; k < f.dim; ++k) {
        AlgElem a = f.lift.col(k);
        CycScalar ea = h.counit(a);
        for (std::size_t t = 0; t < hd; ++t) {
            AlgElem prod = h.multiply(a, h.basis_elem(t));
            prod = vec_sub(prod, vec_scale(ea, h.basis_elem(t)));
            Vec img = f.germs * prod;
            for (std::size_t l = 0; l < f.dim; ++l)
                f.circ_tensor[(k * hd + t) * f.dim + l] = img[l];
        }
    }
    // degree-2 relations: (pi (x) pi) phi(r), r in R
    std::vector<Vec> s2;
    Matrix gg = kron(f.germs, f.germs);
    for (const auto& r : ideal) {
        Vec v = gg * h.comultiply(r);
        if (!vec_is_zero(v)) s2.push_back(v);
    }
    detail::Quotient q2 = detail::make_quotient(f.dim * f.dim, s2);
    f.dim2 = q2.dim;
    f.proj2 = q2.proj;
    f.lift2 = q2.lift;
    // degree-3 relations: S2 (x) invGamma + invGamma (x) S2
    std::vector<Vec> s3;
    for (const auto& s : s2)
        for (std::size_t l = 0; l < f.dim; ++l) {
            Vec e(f.dim, CycScalar(0));
            e[l] = CycScalar(1);
            s3.push_back(kron_vec(s, e));
            s3.push_back(kron_vec(e, s));
        }
    detail::Quotient q3 = detail::make_quotient(f.dim * f.dim * f.dim, s3);
    f.dim3 = q3.dim;
    f.proj3 = q3.proj;
    f.lift3 = q3.lift;
    // d pi(g) = - pi(g1) pi(g2), star pi(g) = - pi(kappa(g)^*)
    f.d1 = Matrix(f.dim2, f.dim);
    f.star1 = Matrix(f.dim, f.dim);
    for (std::size_t k = 0; k < f.dim; ++k) {
        Vec img = f.proj2 * (gg * h.comultiply(f.lift.col(k)));
        for (std::size_t r2 = 0; r2 < f.dim2; ++r2) f.d1.at(r2, k) = -img[r2];
        AlgElem b = h.star(h.antipode(f.lift.col(k)));
        Vec s = f.germs * b;
        for (std::size_t r2 = 0; r2 < f.dim; ++r2) f.star1.at(r2, k) = -s[r2];
    }
    return f;
}

// The right adjoint corepresentation descended to invGamma.
inline Corep adjoint_coaction(const FODC& f) {
    const HopfAlgebra& h = *f.hopf;
    const std::size_t hd = h.dim;
    Corep c(f.hopf, f.dim);
    for (std::size_t k = 0; k < f.dim; ++k) {
        Vec a = f.lift.col(k);
        Vec ad(hd * hd, CycScalar(0));
        for (std::size_t i = 0; i < hd; ++i) {
            if (a[i].is_zero()) continue;
            Vec abi = adjoint_on_basis(h, i);
            for (std::size_t r2 = 0; r2 < hd * hd; ++r2) ad[r2] += a[i] * abi[r2];
        }
        for (std::size_t t = 0; t < hd; ++t) {
            Vec w(hd);
            for (std::size_t q = 0; q < hd; ++q) w[q] = ad[q * hd + t];
            Vec img = f.germs * w;
            for (std::size_t l = 0; l < f.dim; ++l) c.u(l, k)[t] += img[l];
        }
    }
    return c;
}

// --- vertical forms -----------------------------------------------------------

// Ver^k = GM (x) invGamma^k with the Durdevich product, star and differential.
class VerticalForms {
public:
    StarAlgebra gm;
    Corep coaction;  // of the Hopf algebra on GM's underlying space
    FODC fodc;
    int cap = 2;

    std::size_t degree_dim(int k) const { return gm.dim * fodc.wedge_dim(k); }

    // (x (x) theta)(y (x) that) = x y(0) (x) (theta o y(1)) that
    Vec product(int ka, const Vec& a, int kb, const Vec& b) const {
        if (ka + kb > cap) throw std::invalid_argument("VerticalForms: degree above cap");
        const std::size_t wa = fodc.wedge_dim(ka), wb = fodc.wedge_dim(kb);
        Vec out(degree_dim(ka + kb), CycScalar(0));
        const std::size_t hd = fodc.hopf->dim;
        for (std::size_t i = 0; i < gm.dim; ++i)
            for (std::size_t m = 0; m < wa; ++m) {
                const CycScalar& ca = a[i * wa + m];
                if (ca.is_zero()) continue;
                Vec theta(wa, CycScalar(0));
                theta[m] = CycScalar(1);
                for (std::size_t j = 0; j < gm.dim; ++j)
                    for (std::size_t p = 0; p < wb; ++p) {
                        const CycScalar& cb = b[j * wb + p];
                        if (cb.is_zero()) continue;
                        Vec that(wb, CycScalar(0));
                        that[p] = CycScalar(1);
                        // Phi(y_j) = sum_{y0, t} u(y0, j)[t] y0 (x) x_t
                        for (std::size_t y0 = 0; y0 < gm.dim; ++y0)
                            for (std::size_t t = 0; t < hd; ++t) {
                                const CycScalar& cu = coaction.u(y0, j)[t];
                                if (cu.is_zero()) continue;
                                AlgElem xy = gm.multiply(gm.basis_elem(i), gm.basis_elem(y0));
                                Vec acted =
                                    fodc.circ_action(ka, theta, fodc.hopf->basis_elem(t));
                                Vec w = fodc.wedge(ka, acted, kb, that);
                                const CycScalar coeff = ca * cb * cu;
                                for (std::size_t z = 0; z < gm.dim; ++z) {
                                    if (xy[z].is_zero()) continue;
                                    for (std::size_t r2 = 0; r2 < w.size(); ++r2)
                                        out[z * w.size() + r2] += coeff * xy[z] * w[r2];
                                }
                            }
                    }
            }
        return out;
    }

    // (x (x) theta)^* = x(0)^* (x) (theta^* o x(1)^*)
    Vec star(int k, const Vec& a) const {
        const std::size_t w = fodc.wedge_dim(k), hd = fodc.hopf->dim;
        Vec out(degree_dim(k), CycScalar(0));
        for (std::size_t i = 0; i < gm.dim; ++i)
            for (std::size_t m = 0; m < w; ++m) {
                const CycScalar& c = a[i * w + m];
                if (c.is_zero()) continue;
                Vec theta(w, CycScalar(0));
                theta[m] = CycScalar(1);
                Vec tstar = fodc.star_action(k, theta);
                for (std::size_t x0 = 0; x0 < gm.dim; ++x0)
                    for (std::size_t t = 0; t < hd; ++t) {
                        const CycScalar& cu = coaction.u(x0, i)[t];
                        if (cu.is_zero()) continue;
                        AlgElem xs = gm.star(gm.basis_elem(x0));
                        AlgElem ts = fodc.hopf->star(fodc.hopf->basis_elem(t));
                        Vec acted(w, CycScalar(0));
                        for (std::size_t tt = 0; tt < hd; ++tt) {
                            if (ts[tt].is_zero()) continue;
                            Vec part =
                                fodc.circ_action(k, tstar, fodc.hopf->basis_elem(tt));
                            acted = vec_add(acted, vec_scale(ts[tt], part));
                        }
                        const CycScalar coeff = c.conj() * cu.conj();
                        for (std::size_t z = 0; z < gm.dim; ++z) {
                            if (xs[z].is_zero()) continue;
                            for (std::size_t r2 = 0; r2 < w; ++r2)
                                out[z * w + r2] += coeff * xs[z] * acted[r2];
                        }
                    }
            }
        return out;
    }

    // d_v(x (x) theta) = x (x) d theta + x(0) (x) pi(x(1)) theta
    Vec d(int k, const Vec& a) const {
        if (k + 1 > cap) throw std::invalid_argument("VerticalForms: differential above cap");
        const std::size_t w = fodc.wedge_dim(k), wn = fodc.wedge_dim(k + 1);
        const std::size_t hd = fodc.hopf->dim;
        Vec out(degree_dim(k + 1), CycScalar(0));
        for (std::size_t i = 0; i < gm.dim; ++i)
            for (std::size_t m = 0; m < w; ++m) {
                const CycScalar& c = a[i * w + m];
                if (c.is_zero()) continue;
                Vec theta(w, CycScalar(0));
                theta[m] = CycScalar(1);
                if (k + 1 <= 3) {
                    Vec dtheta = fodc.d_action(k, theta);
                    for (std::size_t r2 = 0; r2 < wn; ++r2)
                        out[i * wn + r2] += c * dtheta[r2];
                }
                for (std::size_t x0 = 0; x0 < gm.dim; ++x0)
                    for (std::size_t t = 0; t < hd; ++t) {
                        const CycScalar& cu = coaction.u(x0, i)[t];
                        if (cu.is_zero()) continue;
                        Vec pi_t = f_germs_col(t);
                        Vec wedge = fodc.wedge(1, pi_t, k, theta);
                        for (std::size_t r2 = 0; r2 < wn; ++r2)
                            out[x0 * wn + r2] += c * cu * wedge[r2];
                    }
            }
        return out;
    }

private:
    Vec f_germs_col(std::size_t t) const { return fodc.germs.col(t); }
};

inline VerticalForms vertical_forms(StarAlgebra gm, Corep coaction, FODC fodc, int cap) {
    if (cap > 3) throw std::invalid_argument("vertical_forms: cap above 3");
    if (coaction.dim != gm.dim)
        throw std::invalid_argument("vertical_forms: coaction does not act on GM");
    return VerticalForms{std::move(gm), std::move(coaction), std::move(fodc), cap};
}

// Structural verification: graded *-algebra axioms and d_v^2 = 0 up to the cap.
inline CheckReport check_vertical(const VerticalForms& v) {
    CheckReport rep;
    auto basis = [&](int k, std::size_t i) {
        Vec e(v.degree_dim(k), CycScalar(0));
        e[i] = CycScalar(1);
        return e;
    };
    {
        bool ok = true;
        std::string w;
        for (int ka = 0; ka <= v.cap && ok; ++ka)
            for (int kb = 0; ka + kb <= v.cap && ok; ++kb)
                for (int kc = 0; ka + kb + kc <= v.cap && ok; ++kc)
                    for (std::size_t i = 0; i < v.degree_dim(ka) && ok; ++i)
                        for (std::size_t j = 0; j < v.degree_dim(kb) && ok; ++j)
                            for (std::size_t l = 0; l < v.degree_dim(kc) && ok; ++l) {
                                Vec lhs = v.product(ka + kb, v.product(ka, basis(ka, i), kb,
                                                                       basis(kb, j)),
                                                    kc, basis(kc, l));
                                Vec rhs = v.product(
                                    ka, basis(ka, i), kb + kc,
                                    v.product(kb, basis(kb, j), kc, basis(kc, l)));
                                if (lhs != rhs) {
                                    ok = false;
                                    w = "degrees (" + std::to_string(ka) + "," +
                                        std::to_string(kb) + "," + std::to_string(kc) + ")";
                                }
                            }
        rep.add("vertical.associativity", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int ka = 0; ka <= v.cap && ok; ++ka)
            for (int kb = 0; ka + kb <= v.cap && ok; ++kb)
                for (std::size_t i = 0; i < v.degree_dim(ka) && ok; ++i)
                    for (std::size_t j = 0; j < v.degree_dim(kb) && ok; ++j) {
                        Vec lhs = v.star(ka + kb, v.product(ka, basis(ka, i), kb, basis(kb, j)));
                        Vec rhs = v.product(kb, v.star(kb, basis(kb, j)), ka,
                                            v.star(ka, basis(ka, i)));
                        if (ka % 2 == 1 && kb % 2 == 1) rhs = vec_scale(CycScalar(-1), rhs);
                        if (lhs != rhs) {
                            ok = false;
                            w = "degrees (" + std::to_string(ka) + "," + std::to_string(kb) +
                                ") pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
                        }
                    }
        rep.add("vertical.star_antimultiplicative", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int k = 0; k <= v.cap && ok; ++k)
            for (std::size_t i = 0; i < v.degree_dim(k) && ok; ++i)
                if (v.star(k, v.star(k, basis(k, i))) != basis(k, i)) {
                    ok = false;
                    w = "degree " + std::to_string(k) + " index " + std::to_string(i);
                }
        rep.add("vertical.star_involutive", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int k = 0; k + 2 <= v.cap && ok; ++k)
            for (std::size_t i = 0; i < v.degree_dim(k) && ok; ++i)
                if (!vec_is_zero(v.d(k + 1, v.d(k, basis(k, i))))) {
                    ok = false;
                    w = "degree " + std::to_string(k) + " index " + std::to_string(i);
                }
        rep.add("vertical.d_squared_zero", ok, w);
    }
    {
        // graded Leibniz for d_v
        bool ok = true;
        std::string w;
        for (int ka = 0; ka <= v.cap - 1 && ok; ++ka)
            for (int kb = 0; ka + kb <= v.cap - 1 && ok; ++kb)
                for (std::size_t i = 0; i < v.degree_dim(ka) && ok; ++i)
                    for (std::size_t j = 0; j < v.degree_dim(kb) && ok; ++j) {
                        Vec prod = v.product(ka, basis(ka, i), kb, basis(kb, j));
                        Vec lhs = v.d(ka + kb, prod);
                        Vec rhs = v.product(ka + 1, v.d(ka, basis(ka, i)), kb, basis(kb, j));
                        Vec second =
                            v.product(ka, basis(ka, i), kb + 1, v.d(kb, basis(kb, j)));
                        if (ka % 2 == 1) second = vec_scale(CycScalar(-1), second);
                        rhs = vec_add(rhs, second);
                        if (lhs != rhs) {
                            ok = false;
                            w = "degrees (" + std::to_string(ka) + "," + std::to_string(kb) +
                                ")";
                        }
                    }
        rep.add("vertical.leibniz", ok, w);
    }
    {
        bool ok = true;
        std::string w;
        for (int k = 0; k + 1 <= v.cap && ok; ++k)
            for (std::size_t i = 0; i < v.degree_dim(k) && ok; ++i) {
                Vec e(v.degree_dim(k), CycScalar(0));
                e[i] = CycScalar(1);
                if (v.d(k, v.star(k, e)) != v.star(k + 1, v.d(k, e))) {
                    ok = false;
                    w = "degree " + std::to_string(k) + " index " + std::to_string(i);
                }
            }
        rep.add("vertical.d_star_commute", ok, w);
    }
    return rep;
}

// Curvature of the canonical connection on the point bundle: R(theta) =
// d theta - m(delta(theta)) in invGamma^2.
inline Matrix point_bundle_curvature(const FODC& f, const std::optional<Matrix>& delta = {}) {
    Matrix use = delta ? *delta : f.default_delta();
    if (use.rows() != f.dim * f.dim || use.cols() != f.dim)
        throw std::invalid_argument("point_bundle_curvature: delta has wrong shape");
    if (delta) {
        // admissibility: the difference from the canonical choice must land in
        // the degree-2 relation space (the kernel of the wedge projection)
        Matrix diff = use - f.default_delta();
        Matrix img = f.proj2 * diff;
        if (!img.is_zero())
            throw std::invalid_argument(
                "point_bundle_curvature: delta does not descend to the quotient");
    }
    Matrix r(f.dim2, f.dim);
    Matrix md = f.proj2 * use;
    for (std::size_t k = 0; k < f.dim; ++k)
        for (std::size_t i = 0; i < f.dim2; ++i) r.at(i, k) = f.d1.at(i, k) - md.at(i, k);
    return r;
}

}  // namespace qpbkit
