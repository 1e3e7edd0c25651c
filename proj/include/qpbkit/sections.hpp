#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/bundle.hpp"
#include "qpbkit/decompose.hpp"

namespace qpbkit {

// Section module of the associated bundle: Gamma_alpha = Mor^0(alpha, Phi),
// an M-bimodule of linear maps V^alpha -> GM.
struct SectionModule {
    Corep alpha;
    std::vector<Matrix> basis;  // each T is GMdim x n, T(e_i) = column i
};

inline SectionModule sections(const QPBundle& b, const Corep& alpha) {
    SectionModule s;
    s.alpha = alpha;
    for (const auto& f : mor_space(alpha, b.coaction, 0)) s.basis.push_back(f.map.matrix);
    return s;
}

inline Matrix left_action(const QPBundle& b, const AlgElem& p, const Matrix& t) {
    Matrix r(t.rows(), t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j) {
        AlgElem col = b.total.multiply(p, t.col(j));
        for (std::size_t i = 0; i < t.rows(); ++i) r.at(i, j) = col[i];
    }
    return r;
}

inline Matrix right_action(const QPBundle& b, const Matrix& t, const AlgElem& p) {
    Matrix r(t.rows(), t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j) {
        AlgElem col = b.total.multiply(t.col(j), p);
        for (std::size_t i = 0; i < t.rows(); ++i) r.at(i, j) = col[i];
    }
    return r;
}

// Coordinates of a section in the module basis; throws when t is outside.
inline Vec section_coords(const SectionModule& s, const Matrix& t) {
    const std::size_t rows = t.rows() * t.cols();
    if (s.basis.empty()) {
        if (!t.is_zero()) throw std::runtime_error("section_coords: nonzero section, empty module");
        return {};
    }
    Matrix sys(rows, s.basis.size());
    Vec rhs(rows);
    for (std::size_t k = 0; k < s.basis.size(); ++k)
        for (std::size_t i = 0; i < t.rows(); ++i)
            for (std::size_t j = 0; j < t.cols(); ++j)
                sys.at(i * t.cols() + j, k) = s.basis[k].at(i, j);
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) rhs[i * t.cols() + j] = t.at(i, j);
    auto sol = solve_affine(sys, rhs);
    if (!sol) throw std::runtime_error("section_coords: section outside the module");
    return sol->particular;
}

// Frame data of Remark 3.1: left generators with
//   sum_k x*_{ki} x_{kj} = delta_ij 1   and   (Z X)^T X^* = Id_n,
// Z strictly positive, plus the derived right generators and idempotent.
struct FrameMatrices {
    std::vector<Matrix> left_gens;   // T^L_k, k = 1..d
    std::vector<Matrix> right_gens;  // T^R_k = sum_i z_{ki} T^L_i
    Matrix z;                        // d x d, strictly positive
    Matrix y;                        // Z^{-1}
    std::vector<std::vector<AlgElem>> w;  // w_{ki} = (Z X)_{ki} in GM

    std::size_t d() const { return left_gens.size(); }
    std::size_t n() const { return left_gens.empty() ? 0 : left_gens[0].cols(); }

    AlgElem x(std::size_t k, std::size_t i) const { return left_gens[k].col(i); }
};

namespace detail {

// Does the candidate family satisfy sum_k x*_{ki} x_{kj} = delta_ij 1 exactly?
inline bool first_display_holds(const QPBundle& b, const std::vector<Matrix>& gens) {
    const std::size_t n = gens.empty() ? 0 : gens[0].cols();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            AlgElem acc(b.total.dim, CycScalar(0));
            for (const auto& t : gens)
                acc = vec_add(acc, b.total.multiply(b.total.star(t.col(i)), t.col(j)));
            AlgElem want = i == j ? b.total.unit : AlgElem(b.total.dim, CycScalar(0));
            if (acc != want) return false;
        }
    return true;
}

// Solve the first display for a Hermitian positive coefficient matrix over a
// candidate prefix, factor it, and return the resulting generators.
inline std::optional<std::vector<Matrix>> solve_first_display(const QPBundle& b,
                                                              const std::vector<Matrix>& pool,
                                                              std::size_t prefix) {
    std::vector<Matrix> gens(pool.begin(), pool.begin() + static_cast<long>(prefix));
    if (first_display_holds(b, gens)) return gens;
    const std::size_t n = gens[0].cols(), gm = b.total.dim;
    // unknown H_{l l'}, l, l' < prefix
    Matrix sys(n * n * gm, prefix * prefix);
    Vec rhs(n * n * gm, CycScalar(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t l = 0; l < prefix; ++l)
                for (std::size_t l2 = 0; l2 < prefix; ++l2) {
                    AlgElem prod =
                        b.total.multiply(b.total.star(gens[l].col(i)), gens[l2].col(j));
                    for (std::size_t z = 0; z < gm; ++z)
                        sys.at((i * n + j) * gm + z, l * prefix + l2) = prod[z];
                }
            if (i == j)
                for (std::size_t z = 0; z < gm; ++z)
                    rhs[(i * n + j) * gm + z] = b.total.unit[z];
        }
    auto sol = solve_affine(sys, rhs);
    if (!sol) return std::nullopt;
    // search the affine set for a Hermitian positive factorable H
    std::vector<Vec> candidates;
    candidates.push_back(sol->particular);
    const std::size_t kdim = std::min<std::size_t>(sol->kernel_basis.size(), 3);
    std::size_t grid = 1;
    for (std::size_t i = 0; i < kdim; ++i) grid *= 3;
    for (std::size_t code = 1; code < grid; ++code) {
        Vec h = sol->particular;
        std::size_t rem = code;
        for (std::size_t i = 0; i < kdim; ++i) {
            long long c = static_cast<long long>(rem % 3) - 1;
            rem /= 3;
            if (c != 0) h = vec_add(h, vec_scale(CycScalar(c), sol->kernel_basis[i]));
        }
        candidates.push_back(std::move(h));
    }
    for (const auto& hv : candidates) {
        Matrix h(prefix, prefix);
        for (std::size_t l = 0; l < prefix; ++l)
            for (std::size_t l2 = 0; l2 < prefix; ++l2) h.at(l, l2) = hv[l * prefix + l2];
        if (h != h.conj_transposed()) continue;
        bool pd = true;
        try {
            pd = is_strictly_positive(h);
        } catch (const std::exception&) {
            pd = false;
        }
        if (!pd) continue;
        auto chol = field_cholesky(h);
        if (!chol) continue;
        std::vector<Matrix> out;
        for (std::size_t k = 0; k < prefix; ++k) {
            Matrix t(gm, n);
            for (std::size_t l = 0; l < prefix; ++l) {
                const CycScalar& c = chol->at(k, l);
                if (c.is_zero()) continue;
                t = t + c * gens[l];
            }
            if (!t.is_zero()) out.push_back(std::move(t));
        }
        if (first_display_holds(b, out)) return out;
    }
    return std::nullopt;
}

}  // namespace detail

// Frame search: candidates drawn from the module basis (the unit section is
// tried first for one-dimensional corepresentations), extended greedily until
// the first display is solvable; Z solves the second display with free
// variables pinned to zero, certified strictly positive afterwards.
inline FrameMatrices frame(const QPBundle& b, const SectionModule& s) {
    if (s.basis.empty()) throw std::invalid_argument("frame: empty section module");
    const std::size_t n = s.alpha.dim, gm = b.total.dim;
    std::vector<Matrix> pool;
    if (n == 1) {
        Matrix unit_section(gm, 1);
        for (std::size_t i = 0; i < gm; ++i) unit_section.at(i, 0) = b.total.unit[i];
        bool in_module = true;
        try {
            section_coords(s, unit_section);
        } catch (const std::exception&) {
            in_module = false;
        }
        if (in_module) pool.push_back(unit_section);
    }
    for (const auto& t : s.basis) pool.push_back(t);
    std::optional<std::vector<Matrix>> gens;
    for (std::size_t prefix = 1; prefix <= pool.size() && !gens; ++prefix)
        gens = detail::solve_first_display(b, pool, prefix);
    if (!gens)
        throw std::runtime_error(
            "frame: no generating family satisfies the first frame identity; the bundle fails "
            "the admissibility conditions");
    FrameMatrices f;
    f.left_gens = *gens;
    const std::size_t d = f.left_gens.size();
    // second display: sum_{k,l} z_{kl} x_{li} x*_{kj} = delta_ij 1
    Matrix sys(n * n * gm, d * d);
    Vec rhs(n * n * gm, CycScalar(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l) {
                    AlgElem prod = b.total.multiply(f.left_gens[l].col(i),
                                                    b.total.star(f.left_gens[k].col(j)));
                    for (std::size_t z = 0; z < gm; ++z)
                        sys.at((i * n + j) * gm + z, k * d + l) = prod[z];
                }
            if (i == j)
                for (std::size_t z = 0; z < gm; ++z)
                    rhs[(i * n + j) * gm + z] = b.total.unit[z];
        }
    auto sol = solve_affine(sys, rhs);
    if (!sol)
        throw std::runtime_error("frame: the second frame identity is unsolvable for Z");
    f.z = Matrix(d, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) f.z.at(k, l) = sol->particular[k * d + l];
    if (!is_strictly_positive(f.z))
        throw std::runtime_error("frame: Z is not strictly positive");
    f.y = inverse(f.z);
    for (std::size_t k = 0; k < d; ++k) {
        Matrix r(gm, n);
        for (std::size_t i = 0; i < d; ++i) {
            if (f.z.at(k, i).is_zero()) continue;
            r = r + f.z.at(k, i) * f.left_gens[i];
        }
        f.right_gens.push_back(std::move(r));
    }
    f.w.assign(d, std::vector<AlgElem>(n));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < n; ++i) f.w[k][i] = f.right_gens[k].col(i);
    return f;
}

// p^T_k = sum_i T(e_i) x*_{ki}, the left coefficient of T over the frame.
inline std::vector<AlgElem> left_coefficients(const QPBundle& b, const FrameMatrices& f,
                                              const Matrix& t) {
    std::vector<AlgElem> p;
    for (std::size_t k = 0; k < f.d(); ++k) {
        AlgElem acc(b.total.dim, CycScalar(0));
        for (std::size_t i = 0; i < f.n(); ++i)
            acc = vec_add(acc, b.total.multiply(t.col(i), b.total.star(f.x(k, i))));
        p.push_back(std::move(acc));
    }
    return p;
}

// p-hat^T_k = sum_{i,j} y_{ik} w*_{ij} T(e_j), the right coefficient.
inline std::vector<AlgElem> right_coefficients(const QPBundle& b, const FrameMatrices& f,
                                               const Matrix& t) {
    std::vector<AlgElem> p;
    for (std::size_t k = 0; k < f.d(); ++k) {
        AlgElem acc(b.total.dim, CycScalar(0));
        for (std::size_t i = 0; i < f.d(); ++i) {
            if (f.y.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < f.n(); ++j) {
                AlgElem term = b.total.multiply(b.total.star(f.w[i][j]), t.col(j));
                acc = vec_add(acc, vec_scale(f.y.at(i, k), term));
            }
        }
        p.push_back(std::move(acc));
    }
    return p;
}

// Projectivity idempotent e_{kl} = sum_i x_{ki} x*_{li} in M_d(M).
inline std::vector<std::vector<AlgElem>> frame_idempotent(const QPBundle& b,
                                                          const FrameMatrices& f) {
    const std::size_t d = f.d();
    std::vector<std::vector<AlgElem>> e(d, std::vector<AlgElem>(d));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
            AlgElem acc(b.total.dim, CycScalar(0));
            for (std::size_t i = 0; i < f.n(); ++i)
                acc = vec_add(acc, b.total.multiply(f.x(k, i), b.total.star(f.x(l, i))));
            e[k][l] = std::move(acc);
        }
    return e;
}

// Exact verification of every Remark-3.1 consequence for one frame.
inline CheckReport check_frame(const QPBundle& b, const SectionModule& s,
                               const FrameMatrices& f) {
    CheckReport rep;
    rep.add("frame.first_display", detail::first_display_holds(b, f.left_gens));
    {
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < f.n() && ok; ++i)
            for (std::size_t j = 0; j < f.n() && ok; ++j) {
                AlgElem acc(b.total.dim, CycScalar(0));
                for (std::size_t k = 0; k < f.d(); ++k)
                    acc = vec_add(acc,
                                  b.total.multiply(f.w[k][i], b.total.star(f.x(k, j))));
                AlgElem want = i == j ? b.total.unit : AlgElem(b.total.dim, CycScalar(0));
                if (acc != want) {
                    ok = false;
                    w = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
                }
            }
        rep.add("frame.second_display", ok, w);
    }
    {
        bool ok = true;
        try {
            ok = is_strictly_positive(f.z);
        } catch (const std::exception&) {
            ok = false;
        }
        rep.add("frame.z_strictly_positive", ok);
    }
    {
        auto e = frame_idempotent(b, f);
        const std::size_t d = f.d();
        bool in_base = true, idem = true, herm = true;
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t l = 0; l < d; ++l) {
                if (!is_base_element(b, e[k][l])) in_base = false;
                AlgElem sq(b.total.dim, CycScalar(0));
                for (std::size_t mid = 0; mid < d; ++mid)
                    sq = vec_add(sq, b.total.multiply(e[k][mid], e[mid][l]));
                if (sq != e[k][l]) idem = false;
                if (b.total.star(e[l][k]) != e[k][l]) herm = false;
            }
        rep.add("frame.idempotent_in_base", in_base);
        rep.add("frame.idempotent_squares", idem);
        rep.add("frame.idempotent_selfadjoint", herm);
        // rank of e M^d equals dim Gamma
        std::vector<Vec> image;
        for (std::size_t slot = 0; slot < d; ++slot)
            for (const auto& p : b.base_basis) {
                Vec v(b.total.dim * d, CycScalar(0));
                for (std::size_t k = 0; k < d; ++k) {
                    AlgElem comp = b.total.multiply(e[k][slot], p);
                    for (std::size_t z = 0; z < b.total.dim; ++z)
                        v[k * b.total.dim + z] = comp[z];
                }
                image.push_back(std::move(v));
            }
        rep.add("frame.projective_rank", span_dim(image) == s.basis.size(),
                "rank " + std::to_string(span_dim(image)) + " vs dim " +
                    std::to_string(s.basis.size()));
    }
    {
        // generator expansions T = sum p^T_k T^L_k = sum T^R_k phat^T_k
        bool left_ok = true, right_ok = true, coeff_base = true;
        for (const auto& t : s.basis) {
            auto p = left_coefficients(b, f, t);
            auto ph = right_coefficients(b, f, t);
            Matrix lsum(b.total.dim, f.n());
            Matrix rsum(b.total.dim, f.n());
            for (std::size_t k = 0; k < f.d(); ++k) {
                if (!is_base_element(b, p[k]) || !is_base_element(b, ph[k]))
                    coeff_base = false;
                lsum = lsum + left_action(b, p[k], f.left_gens[k]);
                rsum = rsum + right_action(b, f.right_gens[k], ph[k]);
            }
            if (lsum != t) left_ok = false;
            if (rsum != t) right_ok = false;
        }
        rep.add("frame.left_expansion", left_ok);
        rep.add("frame.right_expansion", right_ok);
        rep.add("frame.coefficients_in_base", coeff_base);
    }
    return rep;
}

}  // namespace qpbkit
