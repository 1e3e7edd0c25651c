#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qpbkit/cyclotomic.hpp"

namespace qpbkit {

using Vec = std::vector<CycScalar>;

// Dense matrix over Q(zeta_N), row-major.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = CycScalar(1);
        return m;
    }

    static Matrix from_columns(const std::vector<Vec>& cols) {
        if (cols.empty()) return Matrix(0, 0);
        Matrix m(cols[0].size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != m.rows_) throw std::invalid_argument("ragged columns");
            for (std::size_t i = 0; i < m.rows_; ++i) m.at(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    CycScalar& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const CycScalar& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    Vec row(std::size_t i) const {
        return Vec(entries_.begin() + static_cast<long>(i * cols_),
                   entries_.begin() + static_cast<long>((i + 1) * cols_));
    }

    Vec col(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] += b.entries_[i];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] -= b.entries_[i];
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (b.at(k, j).is_zero()) continue;
                    r.at(i, j) += a.at(i, k) * b.at(k, j);
                }
            }
        return r;
    }

    friend Matrix operator*(const CycScalar& s, const Matrix& a) {
        Matrix r = a;
        for (auto& e : r.entries_) e = s * e;
        return r;
    }

    friend Vec operator*(const Matrix& a, const Vec& v) {
        if (a.cols_ != v.size()) throw std::invalid_argument("Matrix: shape mismatch in apply");
        Vec r(a.rows_, CycScalar(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) {
                if (a.at(i, j).is_zero() || v[j].is_zero()) continue;
                r[i] += a.at(i, j) * v[j];
            }
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            if (a.entries_[i] != b.entries_[i]) return false;
        return true;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix transposed() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Matrix conjugated() const {
        Matrix r = *this;
        for (auto& e : r.entries_) e = e.conj();
        return r;
    }

    Matrix conj_transposed() const { return transposed().conjugated(); }

    Matrix leading_minor(std::size_t k) const {
        Matrix r(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) r.at(i, j) = at(i, j);
        return r;
    }

private:
    std::size_t rows_, cols_;
    std::vector<CycScalar> entries_;

    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }
};

// Kronecker product in the fixed lexicographic basis convention:
// e_i (x) f_j maps to index i*cols(B)+j (0-based).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    if (b.at(k, l).is_zero()) continue;
                    r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
                }
        }
    return r;
}

struct Rref {
    Matrix reduced;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
};

// Fraction-free forward elimination (Bareiss one-step cross-multiplication,
// exact division by the previous pivot), then Jordan normalization.
inline Rref rref(Matrix a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivots;
    CycScalar prev(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a.at(p, c).is_zero()) ++p;
        if (p == rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(r, j), a.at(p, j));
        const CycScalar pivot = a.at(r, c);
        for (std::size_t i = r + 1; i < rows; ++i) {
            const CycScalar factor = a.at(i, c);
            for (std::size_t j = 0; j < cols; ++j)
                a.at(i, j) = (pivot * a.at(i, j) - factor * a.at(r, j)) / prev;
        }
        prev = pivot;
        pivots.push_back(c);
        ++r;
    }
    // normalize pivot rows, then clear above
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        const CycScalar inv = a.at(k, pivots[k]).inverse();
        for (std::size_t j = 0; j < cols; ++j) a.at(k, j) = inv * a.at(k, j);
    }
    for (std::size_t k = pivots.size(); k-- > 0;) {
        for (std::size_t i = 0; i < k; ++i) {
            const CycScalar factor = a.at(i, pivots[k]);
            if (factor.is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j)
                a.at(i, j) = a.at(i, j) - factor * a.at(k, j);
        }
    }
    const std::size_t rk = pivots.size();
    return Rref{std::move(a), std::move(pivots), rk};
}

inline std::size_t rank(const Matrix& a) { return rref(a).pivot_cols.size(); }

// Basis of { v : Av = 0 }.
inline std::vector<Vec> kernel(const Matrix& a) {
    Rref re = rref(a);
    const std::size_t cols = a.cols();
    std::vector<bool> is_pivot(cols, false);
    for (auto c : re.pivot_cols) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec v(cols, CycScalar(0));
        v[f] = CycScalar(1);
        for (std::size_t k = 0; k < re.pivot_cols.size(); ++k)
            v[re.pivot_cols[k]] = -re.reduced.at(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

struct AffineSolution {
    Vec particular;
    std::vector<Vec> kernel_basis;
};

// Full solution set of Ax = b, or nullopt when infeasible.
inline std::optional<AffineSolution> solve_affine(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_affine: shape mismatch");
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    Rref re = rref(std::move(aug));
    for (auto c : re.pivot_cols)
        if (c == a.cols()) return std::nullopt;
    Vec particular(a.cols(), CycScalar(0));
    for (std::size_t k = 0; k < re.pivot_cols.size(); ++k)
        particular[re.pivot_cols[k]] = re.reduced.at(k, a.cols());
    return AffineSolution{std::move(particular), kernel(a)};
}

// One right-hand side, unique solution demanded.
inline Vec solve_unique(const Matrix& a, const Vec& b) {
    auto sol = solve_affine(a, b);
    if (!sol) throw std::runtime_error("solve_unique: infeasible system");
    if (!sol->kernel_basis.empty()) throw std::runtime_error("solve_unique: solution not unique");
    return sol->particular;
}

inline Matrix inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: square matrix required");
    const std::size_t n = a.rows();
    if (n == 0) return Matrix(0, 0);
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = CycScalar(1);
    }
    Rref re = rref(std::move(aug));
    if (re.pivot_cols.size() != n || re.pivot_cols.back() != n - 1)
        throw std::runtime_error("inverse: singular matrix");
    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = re.reduced.at(i, n + j);
    return r;
}

// Bareiss determinant.
inline CycScalar det(Matrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("det: square matrix required");
    const std::size_t n = a.rows();
    if (n == 0) return CycScalar(1);
    CycScalar prev(1);
    int swaps = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t p = k;
        while (p < n && a.at(p, k).is_zero()) ++p;
        if (p == n) return CycScalar(0);
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            ++swaps;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    CycScalar d = a.at(n - 1, n - 1);
    return swaps % 2 ? -d : d;
}

// Hermitian check plus Sylvester criterion; minor signs are exact for rational
// entries and interval-certified for genuinely cyclotomic ones.
inline bool is_strictly_positive(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("is_strictly_positive: square required");
    if (m != m.conj_transposed())
        throw std::invalid_argument("is_strictly_positive: matrix is not Hermitian");
    for (std::size_t k = 1; k <= m.rows(); ++k) {
        if (sign_of_real(det(m.leading_minor(k))) <= 0) return false;
    }
    return true;
}

namespace detail {

// Quotient of an ambient space by a span: proj . lift = id, ker(proj) = span.
struct Quotient {
    Matrix proj;  // ambient -> quotient
    Matrix lift;  // quotient -> ambient, a fixed section
    std::size_t dim = 0;
};

inline Quotient make_quotient(std::size_t ambient, const std::vector<Vec>& relations) {
    // reduced basis of the relation span
    std::vector<Vec> rel_basis;
    if (!relations.empty()) {
        Rref re = rref(Matrix::from_columns(relations).transposed());
        for (std::size_t r = 0; r < re.rank; ++r) rel_basis.push_back(re.reduced.row(r));
    }
    const std::size_t q = ambient - rel_basis.size();
    // extend to a basis of the ambient space with unit vectors
    std::vector<Vec> cols = rel_basis;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < ambient && cols.size() < ambient; ++i) {
        Vec e(ambient, CycScalar(0));
        e[i] = CycScalar(1);
        cols.push_back(e);
        if (rank(Matrix::from_columns(cols)) == cols.size()) {
            chosen.push_back(i);
        } else {
            cols.pop_back();
        }
    }
    if (cols.size() != ambient) throw std::logic_error("make_quotient: basis extension failed");
    Matrix m = Matrix::from_columns(cols);
    Matrix minv = inverse(m);
    Quotient out;
    out.dim = q;
    out.proj = Matrix(q, ambient);
    for (std::size_t r = 0; r < q; ++r)
        for (std::size_t c = 0; c < ambient; ++c)
            out.proj.at(r, c) = minv.at(rel_basis.size() + r, c);
    out.lift = Matrix(ambient, q);
    for (std::size_t c = 0; c < q; ++c)
        for (std::size_t r = 0; r < ambient; ++r) out.lift.at(r, c) = m.at(r, rel_basis.size() + c);
    return out;
}

}  // namespace detail

// Linear map with a Z2 parity: degree 0 acts by v -> M v, degree 1 acts
// antilinearly by v -> M conj(v) in the fixed basis.
struct LinearMap {
    Matrix matrix;
    int parity = 0;

    std::size_t domain_dim() const { return matrix.cols(); }
    std::size_t codomain_dim() const { return matrix.rows(); }

    Vec apply(const Vec& v) const {
        if (parity == 0) return matrix * v;
        Vec c(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i].conj();
        return matrix * c;
    }
};

inline LinearMap compose(const LinearMap& f, const LinearMap& g) {
    Matrix gm = f.parity == 1 ? g.matrix.conjugated() : g.matrix;
    return LinearMap{f.matrix * gm, (f.parity + g.parity) % 2};
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Vec vec_scale(const CycScalar& s, const Vec& a) {
    Vec r = a;
    for (auto& x : r) x = s * x;
    return r;
}

inline bool vec_is_zero(const Vec& a) {
    for (const auto& x : a)
        if (!x.is_zero()) return false;
    return true;
}

// Dimension of the span; vectors may be empty.
inline std::size_t span_dim(const std::vector<Vec>& vs) {
    if (vs.empty()) return 0;
    return rank(Matrix::from_columns(vs));
}

// Does v lie in the span of the given vectors?
inline bool in_span(const std::vector<Vec>& basis, const Vec& v) {
    if (vec_is_zero(v)) return true;
    if (basis.empty()) return false;
    Matrix m = Matrix::from_columns(basis);
    return solve_affine(m, v).has_value();
}

}  // namespace qpbkit
