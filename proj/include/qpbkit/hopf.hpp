#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbkit/checks.hpp"
#include "qpbkit/matrix.hpp"

namespace qpbkit {

// Coordinates of an algebra element in the fixed basis.
using AlgElem = Vec;

// Cayley table of a finite group, 0-based entries: table[i][j] = index of g_i g_j.
using CayleyTable = std::vector<std::vector<std::size_t>>;

// Finite-dimensional Hopf *-algebra by dense structure constants.
//
//   x_i x_j   = sum_k mult(i,j,k) x_k
//   phi(x_i)  = sum_{j,k} comult(i,j,k) x_j (x) x_k
//   kappa(x_i) = column i of antipode
//   x_i^*     = column i of star (coefficients conjugate under *)
class HopfAlgebra {
public:
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<CycScalar> mult_tensor;    // (i*dim + j)*dim + k
    AlgElem unit;
    std::vector<CycScalar> comult_tensor;  // (i*dim + j)*dim + k
    AlgElem counit_vec;
    Matrix antipode_mat;
    Matrix star_mat;
    // Conductor large enough for this algebra's corepresentation theory
    // (the group exponent for the built-in constructions).
    int preferred_conductor = 1;

    const CycScalar& mult(std::size_t i, std::size_t j, std::size_t k) const {
        return mult_tensor[(i * dim + j) * dim + k];
    }
    CycScalar& mult(std::size_t i, std::size_t j, std::size_t k) {
        return mult_tensor[(i * dim + j) * dim + k];
    }
    const CycScalar& comult(std::size_t i, std::size_t j, std::size_t k) const {
        return comult_tensor[(i * dim + j) * dim + k];
    }
    CycScalar& comult(std::size_t i, std::size_t j, std::size_t k) {
        return comult_tensor[(i * dim + j) * dim + k];
    }

    static HopfAlgebra make(std::size_t n) {
        HopfAlgebra h;
        h.dim = n;
        h.labels.resize(n);
        h.mult_tensor.assign(n * n * n, CycScalar(0));
        h.unit.assign(n, CycScalar(0));
        h.comult_tensor.assign(n * n * n, CycScalar(0));
        h.counit_vec.assign(n, CycScalar(0));
        h.antipode_mat = Matrix(n, n);
        h.star_mat = Matrix(n, n);
        return h;
    }

    AlgElem basis_elem(std::size_t i) const {
        AlgElem e(dim, CycScalar(0));
        e[i] = CycScalar(1);
        return e;
    }

    AlgElem multiply(const AlgElem& a, const AlgElem& b) const {
        AlgElem r(dim, CycScalar(0));
        for (std::size_t i = 0; i < dim; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                if (b[j].is_zero()) continue;
                const CycScalar c = a[i] * b[j];
                for (std::size_t k = 0; k < dim; ++k) {
                    if (mult(i, j, k).is_zero()) continue;
                    r[k] += c * mult(i, j, k);
                }
            }
        }
        return r;
    }

    // phi(a) in V (x) V coordinates, index j*dim + k.
    Vec comultiply(const AlgElem& a) const {
        Vec r(dim * dim, CycScalar(0));
        for (std::size_t i = 0; i < dim; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k) {
                    if (comult(i, j, k).is_zero()) continue;
                    r[j * dim + k] += a[i] * comult(i, j, k);
                }
        }
        return r;
    }

    CycScalar counit(const AlgElem& a) const {
        CycScalar r(0);
        for (std::size_t i = 0; i < dim; ++i) r += a[i] * counit_vec[i];
        return r;
    }

    AlgElem antipode(const AlgElem& a) const { return antipode_mat * a; }

    AlgElem star(const AlgElem& a) const {
        AlgElem c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = a[i].conj();
        return star_mat * c;
    }

    Matrix mult_matrix() const {
        Matrix m(dim, dim * dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k) m.at(k, i * dim + j) = mult(i, j, k);
        return m;
    }

    Matrix comult_matrix() const {
        Matrix m(dim * dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k) m.at(j * dim + k, i) = comult(i, j, k);
        return m;
    }

    Matrix counit_row() const {
        Matrix m(1, dim);
        for (std::size_t i = 0; i < dim; ++i) m.at(0, i) = counit_vec[i];
        return m;
    }

    bool is_commutative() const {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                if (multiply(basis_elem(i), basis_elem(j)) !=
                    multiply(basis_elem(j), basis_elem(i)))
                    return false;
        return true;
    }
};

namespace detail {

inline std::string witness_index(std::size_t i) { return "basis index " + std::to_string(i); }

inline std::string witness_pair(std::size_t i, std::size_t j) {
    return "basis pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace detail

// Product on G (x) G, legwise.
inline Vec tensor_mult(const HopfAlgebra& h, const Vec& a, const Vec& b) {
    const std::size_t n = h.dim;
    Vec r(n * n, CycScalar(0));
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            const CycScalar& ca = a[i1 * n + i2];
            if (ca.is_zero()) continue;
            for (std::size_t j1 = 0; j1 < n; ++j1)
                for (std::size_t j2 = 0; j2 < n; ++j2) {
                    const CycScalar& cb = b[j1 * n + j2];
                    if (cb.is_zero()) continue;
                    const CycScalar c = ca * cb;
                    for (std::size_t k1 = 0; k1 < n; ++k1) {
                        if (h.mult(i1, j1, k1).is_zero()) continue;
                        for (std::size_t k2 = 0; k2 < n; ++k2) {
                            if (h.mult(i2, j2, k2).is_zero()) continue;
                            r[k1 * n + k2] += c * h.mult(i1, j1, k1) * h.mult(i2, j2, k2);
                        }
                    }
                }
        }
    return r;
}

// (* (x) *) on G (x) G.
inline Vec tensor_star(const HopfAlgebra& h, const Vec& a) {
    const std::size_t n = h.dim;
    Matrix ss = kron(h.star_mat, h.star_mat);
    Vec c(n * n);
    for (std::size_t i = 0; i < n * n; ++i) c[i] = a[i].conj();
    return ss * c;
}

inline Vec kron_vec(const Vec& a, const Vec& b) {
    Vec r(a.size() * b.size(), CycScalar(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    }
    return r;
}

// Exact verification of every Hopf *-algebra axiom as a tensor identity.
inline CheckReport check_hopf(const HopfAlgebra& h) {
    CheckReport rep;
    const std::size_t n = h.dim;
    if (h.mult_tensor.size() != n * n * n || h.comult_tensor.size() != n * n * n ||
        h.unit.size() != n || h.counit_vec.size() != n || h.antipode_mat.rows() != n ||
        h.antipode_mat.cols() != n || h.star_mat.rows() != n || h.star_mat.cols() != n)
        throw std::invalid_argument("check_hopf: inconsistent tensor shapes");

    const Matrix m = h.mult_matrix();
    const Matrix cm = h.comult_matrix();
    const Matrix id = Matrix::identity(n);
    const Matrix eps = h.counit_row();

    // associativity: m(m (x) id) = m(id (x) m)
    rep.add("algebra.associativity", m * kron(m, id) == m * kron(id, m));

    // unit laws
    {
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < n && ok; ++i) {
            AlgElem e = h.basis_elem(i);
            if (h.multiply(h.unit, e) != e || h.multiply(e, h.unit) != e) {
                ok = false;
                w = detail::witness_index(i);
            }
        }
        rep.add("algebra.unit", ok, w);
    }

    // coassociativity: (phi (x) id) phi = (id (x) phi) phi
    rep.add("coalgebra.coassociativity", kron(cm, id) * cm == kron(id, cm) * cm);

    // counit triangles: (eps (x) id) phi = id = (id (x) eps) phi
    {
        bool left = kron(eps, id) * cm == id;
        bool right = kron(id, eps) * cm == id;
        std::string w;
        if (!left || !right) {
            Matrix l = kron(eps, id) * cm, r = kron(id, eps) * cm;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (l.at(i, j) != id.at(i, j) || r.at(i, j) != id.at(i, j)) {
                        if (w.empty()) w = detail::witness_pair(i, j);
                    }
        }
        rep.add("coalgebra.counit", left && right, w);
    }

    // antipode axioms: m (kappa (x) id) phi = eta eps = m (id (x) kappa) phi
    {
        Matrix eta_eps(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) eta_eps.at(i, j) = h.unit[i] * h.counit_vec[j];
        bool left = m * kron(h.antipode_mat, id) * cm == eta_eps;
        bool right = m * kron(id, h.antipode_mat) * cm == eta_eps;
        rep.add("hopf.antipode", left && right);
    }

    // phi is a unital *-algebra morphism
    {
        bool ok = h.comultiply(h.unit) == kron_vec(h.unit, h.unit);
        std::string w = ok ? "" : "unit";
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j) {
                Vec lhs = h.comultiply(h.multiply(h.basis_elem(i), h.basis_elem(j)));
                Vec rhs = tensor_mult(h, h.comultiply(h.basis_elem(i)),
                                      h.comultiply(h.basis_elem(j)));
                if (lhs != rhs) {
                    ok = false;
                    w = detail::witness_pair(i, j);
                }
            }
        for (std::size_t i = 0; i < n && ok; ++i) {
            Vec lhs = h.comultiply(h.star(h.basis_elem(i)));
            Vec rhs = tensor_star(h, h.comultiply(h.basis_elem(i)));
            if (lhs != rhs) {
                ok = false;
                w = detail::witness_index(i);
            }
        }
        rep.add("hopf.comult_star_morphism", ok, w);
    }

    // eps is a unital *-algebra morphism
    {
        bool ok = h.counit(h.unit) == CycScalar(1);
        std::string w = ok ? "" : "unit";
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j)
                if (h.counit(h.multiply(h.basis_elem(i), h.basis_elem(j))) !=
                    h.counit(h.basis_elem(i)) * h.counit(h.basis_elem(j))) {
                    ok = false;
                    w = detail::witness_pair(i, j);
                }
        for (std::size_t i = 0; i < n && ok; ++i)
            if (h.counit(h.star(h.basis_elem(i))) != h.counit(h.basis_elem(i)).conj()) {
                ok = false;
                w = detail::witness_index(i);
            }
        rep.add("hopf.counit_star_morphism", ok, w);
    }

    // star is an involutive antilinear antiautomorphism
    {
        bool ok = h.star(h.unit) == h.unit;
        std::string w = ok ? "" : "unit";
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (h.star(h.star(h.basis_elem(i))) != h.basis_elem(i)) {
                ok = false;
                w = detail::witness_index(i);
            }
        }
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j) {
                Vec lhs = h.star(h.multiply(h.basis_elem(i), h.basis_elem(j)));
                Vec rhs = h.multiply(h.star(h.basis_elem(j)), h.star(h.basis_elem(i)));
                if (lhs != rhs) {
                    ok = false;
                    w = detail::witness_pair(i, j);
                }
            }
        rep.add("hopf.star_involution", ok, w);
    }

    // kappa(kappa(x^*)^*) = x
    {
        bool ok = true;
        std::string w;
        for (std::size_t i = 0; i < n && ok; ++i) {
            AlgElem x = h.basis_elem(i);
            if (h.antipode(h.star(h.antipode(h.star(x)))) != x) {
                ok = false;
                w = detail::witness_index(i);
            }
        }
        rep.add("hopf.antipode_star_involution", ok, w);
    }

    return rep;
}

// --- finite group builders ---------------------------------------------------

inline void validate_group(const CayleyTable& t) {
    const std::size_t n = t.size();
    if (n == 0) throw std::invalid_argument("group: empty Cayley table");
    for (const auto& row : t) {
        if (row.size() != n) throw std::invalid_argument("group: ragged Cayley table");
        for (auto v : row)
            if (v >= n) throw std::invalid_argument("group: index out of range");
    }
    // identity
    std::size_t e = n;
    for (std::size_t i = 0; i < n; ++i) {
        bool ident = true;
        for (std::size_t j = 0; j < n; ++j)
            if (t[i][j] != j || t[j][i] != j) ident = false;
        if (ident) {
            e = i;
            break;
        }
    }
    if (e == n) throw std::invalid_argument("group: no identity element");
    // inverses
    for (std::size_t i = 0; i < n; ++i) {
        bool has_inv = false;
        for (std::size_t j = 0; j < n; ++j)
            if (t[i][j] == e && t[j][i] == e) has_inv = true;
        if (!has_inv) throw std::invalid_argument("group: missing inverse");
    }
    // associativity
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (t[t[a][b]][c] != t[a][t[b][c]])
                    throw std::invalid_argument("group: associativity fails");
}

inline std::size_t group_identity(const CayleyTable& t) {
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i][0] == 0 && t[0][i] == 0) {
            bool ident = true;
            for (std::size_t j = 0; j < t.size(); ++j)
                if (t[i][j] != j || t[j][i] != j) ident = false;
            if (ident) return i;
        }
    for (std::size_t i = 0; i < t.size(); ++i) {
        bool ident = true;
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t[i][j] != j || t[j][i] != j) ident = false;
        if (ident) return i;
    }
    throw std::invalid_argument("group: no identity element");
}

inline std::size_t group_inverse(const CayleyTable& t, std::size_t g) {
    const std::size_t e = group_identity(t);
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[g][j] == e) return j;
    throw std::invalid_argument("group: missing inverse");
}

inline int group_exponent(const CayleyTable& t) {
    const std::size_t e = group_identity(t);
    int exp = 1;
    for (std::size_t g = 0; g < t.size(); ++g) {
        std::size_t cur = g;
        int ord = 1;
        while (cur != e) {
            cur = t[cur][g];
            ++ord;
        }
        exp = std::lcm(exp, ord);
    }
    return exp;
}

// C(G): functions on a finite group with pointwise product.
inline HopfAlgebra function_algebra(const CayleyTable& t) {
    validate_group(t);
    const std::size_t n = t.size();
    const std::size_t e = group_identity(t);
    HopfAlgebra h = HopfAlgebra::make(n);
    for (std::size_t g = 0; g < n; ++g) {
        h.labels[g] = "d" + std::to_string(g);
        h.mult(g, g, g) = CycScalar(1);
        h.unit[g] = CycScalar(1);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (t[a][b] == g) h.comult(g, a, b) = CycScalar(1);
        h.counit_vec[g] = g == e ? CycScalar(1) : CycScalar(0);
        h.antipode_mat.at(group_inverse(t, g), g) = CycScalar(1);
        h.star_mat.at(g, g) = CycScalar(1);
    }
    h.preferred_conductor = group_exponent(t);
    return h;
}

// C[G]: the group algebra.
inline HopfAlgebra group_algebra(const CayleyTable& t) {
    validate_group(t);
    const std::size_t n = t.size();
    const std::size_t e = group_identity(t);
    HopfAlgebra h = HopfAlgebra::make(n);
    for (std::size_t g = 0; g < n; ++g) {
        h.labels[g] = "u" + std::to_string(g);
        for (std::size_t j = 0; j < n; ++j) h.mult(g, j, t[g][j]) = CycScalar(1);
        h.comult(g, g, g) = CycScalar(1);
        h.counit_vec[g] = CycScalar(1);
        h.antipode_mat.at(group_inverse(t, g), g) = CycScalar(1);
        h.star_mat.at(group_inverse(t, g), g) = CycScalar(1);
    }
    h.unit[e] = CycScalar(1);
    h.preferred_conductor = group_exponent(t);
    return h;
}

inline CayleyTable cyclic_table(std::size_t n) {
    CayleyTable t(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return t;
}

// S3 as permutations of {0,1,2}: order e, (01), (02), (12), (012), (021).
inline CayleyTable s3_table() {
    const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    auto compose = [&](int a, int b) {
        int c[3];
        for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
        for (int k = 0; k < 6; ++k)
            if (c[0] == perms[k][0] && c[1] == perms[k][1] && c[2] == perms[k][2]) return k;
        return -1;
    };
    CayleyTable t(6, std::vector<std::size_t>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) t[a][b] = static_cast<std::size_t>(compose(a, b));
    return t;
}

// --- Haar functional ----------------------------------------------------------

struct HaarFunctional {
    Vec values;  // h(x_i)

    CycScalar operator()(const AlgElem& a) const {
        CycScalar r(0);
        for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * values[i];
        return r;
    }
};

// Solves (id (x) h) phi = eta h = (h (x) id) phi with h(1) = 1; the invariance
// system must have a one-dimensional solution space.
inline HaarFunctional haar(const HopfAlgebra& h) {
    const std::size_t n = h.dim;
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Vec row(n, CycScalar(0));
            for (std::size_t k = 0; k < n; ++k) row[k] += h.comult(i, j, k);
            row[i] -= h.unit[j];
            rows.push_back(std::move(row));
        }
        for (std::size_t k = 0; k < n; ++k) {
            Vec row(n, CycScalar(0));
            for (std::size_t j = 0; j < n; ++j) row[j] += h.comult(i, j, k);
            row[i] -= h.unit[k];
            rows.push_back(std::move(row));
        }
    }
    Matrix sys(rows.size(), n);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < n; ++c) sys.at(r, c) = rows[r][c];
    auto basis = kernel(sys);
    if (basis.size() != 1)
        throw std::runtime_error("haar: invariant functional space has dimension " +
                                 std::to_string(basis.size()) + ", expected 1");
    Vec v = basis[0];
    CycScalar at_unit(0);
    for (std::size_t i = 0; i < n; ++i) at_unit += h.unit[i] * v[i];
    if (at_unit.is_zero()) throw std::runtime_error("haar: functional vanishes on the unit");
    CycScalar inv = at_unit.inverse();
    for (auto& x : v) x = inv * x;
    return HaarFunctional{std::move(v)};
}

// Gram matrix h(x_i^* x_j); strictly positive on the built-in examples.
inline Matrix haar_gram(const HopfAlgebra& h, const HaarFunctional& ha) {
    Matrix g(h.dim, h.dim);
    for (std::size_t i = 0; i < h.dim; ++i) {
        AlgElem si = h.star(h.basis_elem(i));
        for (std::size_t j = 0; j < h.dim; ++j)
            g.at(i, j) = ha(h.multiply(si, h.basis_elem(j)));
    }
    return g;
}

}  // namespace qpbkit
