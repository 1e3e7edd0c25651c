#pragma once

#include <string>
#include <vector>

#include "qpbkit/checks.hpp"
#include "qpbkit/hopf.hpp"

namespace qpbkit {

// Finite-dimensional associative unital *-algebra by structure constants.
class StarAlgebra {
public:
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<CycScalar> mult_tensor;  // (i*dim + j)*dim + k
    AlgElem unit;
    Matrix star_mat;

    static StarAlgebra make(std::size_t n) {
        StarAlgebra a;
        a.dim = n;
        a.labels.resize(n);
        a.mult_tensor.assign(n * n * n, CycScalar(0));
        a.unit.assign(n, CycScalar(0));
        a.star_mat = Matrix(n, n);
        return a;
    }

    static StarAlgebra from_hopf(const HopfAlgebra& h) {
        StarAlgebra a;
        a.dim = h.dim;
        a.labels = h.labels;
        a.mult_tensor = h.mult_tensor;
        a.unit = h.unit;
        a.star_mat = h.star_mat;
        return a;
    }

    const CycScalar& mult(std::size_t i, std::size_t j, std::size_t k) const {
        return mult_tensor[(i * dim + j) * dim + k];
    }
    CycScalar& mult(std::size_t i, std::size_t j, std::size_t k) {
        return mult_tensor[(i * dim + j) * dim + k];
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

    AlgElem star(const AlgElem& a) const {
        AlgElem c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = a[i].conj();
        return star_mat * c;
    }
};

// Full matrix algebra M_n with the matrix-unit basis E_{ij} at index i*n + j.
inline StarAlgebra matrix_algebra(std::size_t n) {
    StarAlgebra a = StarAlgebra::make(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a.labels[i * n + j] = "E" + std::to_string(i) + std::to_string(j);
            for (std::size_t k = 0; k < n; ++k)
                a.mult(i * n + j, j * n + k, i * n + k) = CycScalar(1);
            a.star_mat.at(j * n + i, i * n + j) = CycScalar(1);
            if (i == j) a.unit[i * n + j] = CycScalar(1);
        }
    return a;
}

// Functions on n points, pointwise operations.
inline StarAlgebra points_algebra(std::size_t n) {
    StarAlgebra a = StarAlgebra::make(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.labels[i] = "p" + std::to_string(i);
        a.mult(i, i, i) = CycScalar(1);
        a.unit[i] = CycScalar(1);
        a.star_mat.at(i, i) = CycScalar(1);
    }
    return a;
}

// A (x) B with the lexicographic basis a_i (x) b_j -> i*dim(B)+j.
inline StarAlgebra tensor_algebra(const StarAlgebra& a, const StarAlgebra& b) {
    StarAlgebra r = StarAlgebra::make(a.dim * b.dim);
    for (std::size_t i1 = 0; i1 < a.dim; ++i1)
        for (std::size_t j1 = 0; j1 < b.dim; ++j1) {
            r.labels[i1 * b.dim + j1] = a.labels[i1] + "." + b.labels[j1];
            for (std::size_t i2 = 0; i2 < a.dim; ++i2)
                for (std::size_t j2 = 0; j2 < b.dim; ++j2)
                    for (std::size_t k1 = 0; k1 < a.dim; ++k1)
                        for (std::size_t k2 = 0; k2 < b.dim; ++k2) {
                            CycScalar c = a.mult(i1, i2, k1) * b.mult(j1, j2, k2);
                            if (!c.is_zero())
                                r.mult(i1 * b.dim + j1, i2 * b.dim + j2, k1 * b.dim + k2) = c;
                        }
        }
    r.unit = kron_vec(a.unit, b.unit);
    r.star_mat = kron(a.star_mat, b.star_mat);
    return r;
}

inline CheckReport check_star_algebra(const StarAlgebra& a) {
    CheckReport rep;
    bool assoc = true, unital = true, star_ok = true;
    std::string w_assoc, w_unit, w_star;
    for (std::size_t i = 0; i < a.dim; ++i) {
        AlgElem e = a.basis_elem(i);
        if (a.multiply(a.unit, e) != e || a.multiply(e, a.unit) != e) {
            unital = false;
            if (w_unit.empty()) w_unit = "basis index " + std::to_string(i);
        }
        if (a.star(a.star(e)) != e) {
            star_ok = false;
            if (w_star.empty()) w_star = "basis index " + std::to_string(i);
        }
    }
    for (std::size_t i = 0; i < a.dim && assoc; ++i)
        for (std::size_t j = 0; j < a.dim && assoc; ++j) {
            AlgElem ij = a.multiply(a.basis_elem(i), a.basis_elem(j));
            if (a.star(a.multiply(a.basis_elem(i), a.basis_elem(j))) !=
                a.multiply(a.star(a.basis_elem(j)), a.star(a.basis_elem(i)))) {
                star_ok = false;
                if (w_star.empty())
                    w_star = "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
            for (std::size_t k = 0; k < a.dim && assoc; ++k)
                if (a.multiply(ij, a.basis_elem(k)) !=
                    a.multiply(a.basis_elem(i), a.multiply(a.basis_elem(j), a.basis_elem(k)))) {
                    assoc = false;
                    w_assoc = "triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                              std::to_string(k) + ")";
                }
        }
    rep.add("algebra.associativity", assoc, w_assoc);
    rep.add("algebra.unit", unital, w_unit);
    rep.add("algebra.star", star_ok, w_star);
    return rep;
}

}  // namespace qpbkit
