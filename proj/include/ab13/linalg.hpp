// Dense exact linear algebra over a field context, plus small helpers for
// matrices with polynomial entries.
//
// Reduction is plain Gauss-Jordan with the first nonzero entry in each
// column as pivot, so the reduced row echelon form -- and everything derived
// from it (solutions with free variables set to zero, nullspace bases) -- is
// canonical for a given input.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ab13/errors.hpp"

namespace ab13 {

template <class F>
class Matrix {
  public:
    using Elem = typename F::Elem;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = m.field_.one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const F& field() const { return field_; }

    Elem& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw error("matrix product shape mismatch");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw error("matrix sum shape mismatch");
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw error("matrix difference shape mismatch");
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }
    Matrix scaled(const Elem& c) const {
        Matrix r = *this;
        for (auto& x : r.data_) x = x * c;
        return r;
    }
    Matrix transpose() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }
    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    std::vector<Elem> apply(const std::vector<Elem>& v) const {
        if (v.size() != cols_) throw error("matrix-vector shape mismatch");
        std::vector<Elem> r(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
        return r;
    }

    // In-place reduced row echelon form; returns the pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = rows_;
            for (std::size_t i = row; i < rows_; ++i)
                if (!at(i, col).is_zero()) { sel = i; break; }
            if (sel == rows_) continue;
            if (sel != row)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(at(sel, j), at(row, j));
            Elem inv = at(row, col).inv();
            for (std::size_t j = col; j < cols_; ++j) at(row, j) = at(row, j) * inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row || at(i, col).is_zero()) continue;
                Elem f = at(i, col);
                for (std::size_t j = col; j < cols_; ++j) at(i, j) -= f * at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        Matrix m = *this;
        return m.rref().size();
    }

    // One solution of A x = b with all free variables zero, or nullopt.
    std::optional<std::vector<Elem>> solve(const std::vector<Elem>& b) const {
        if (b.size() != rows_) throw error("solve shape mismatch");
        Matrix aug(field_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        auto pivots = aug.rref();
        if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;  // inconsistent
        std::vector<Elem> x(cols_, field_.zero());
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, cols_);
        return x;
    }

    // Canonical nullspace basis: one vector per free column, with that free
    // coordinate set to one.
    std::vector<std::vector<Elem>> nullspace() const {
        Matrix m = *this;
        auto pivots = m.rref();
        std::vector<char> is_pivot(cols_, 0);
        for (auto p : pivots) is_pivot[p] = 1;
        std::vector<std::vector<Elem>> basis;
        for (std::size_t col = 0; col < cols_; ++col) {
            if (is_pivot[col]) continue;
            std::vector<Elem> v(cols_, field_.zero());
            v[col] = field_.one();
            for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, col);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    Elem det() const {
        if (rows_ != cols_) throw error("determinant of non-square matrix");
        Matrix m = *this;
        Elem d = field_.one();
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t sel = rows_;
            for (std::size_t i = col; i < rows_; ++i)
                if (!m.at(i, col).is_zero()) { sel = i; break; }
            if (sel == rows_) return field_.zero();
            if (sel != col) {
                for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(col, j));
                d = -d;
            }
            d = d * m.at(col, col);
            Elem inv = m.at(col, col).inv();
            for (std::size_t i = col + 1; i < rows_; ++i) {
                if (m.at(i, col).is_zero()) continue;
                Elem f = m.at(i, col) * inv;
                for (std::size_t j = col; j < cols_; ++j) m.at(i, j) -= f * m.at(col, j);
            }
        }
        return d;
    }

    std::optional<Matrix> inverse() const {
        if (rows_ != cols_) throw error("inverse of non-square matrix");
        Matrix aug(field_, rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = field_.one();
        }
        auto pivots = aug.rref();
        for (std::size_t i = 0; i < rows_; ++i)
            if (pivots.size() <= i || pivots[i] != i) return std::nullopt;
        Matrix r(field_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = aug.at(i, cols_ + j);
        return r;
    }

    // Row-space equality via comparing canonical reduced forms with zero rows
    // dropped; used to compare derived constraint systems with fixtures.
    static bool same_row_space(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_) return false;
        Matrix ra = a, rb = b;
        auto pa = ra.rref(), pb = rb.rref();
        if (pa != pb) return false;
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                if (ra.at(i, j) != rb.at(i, j)) return false;
        return true;
    }

  private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<Elem> data_;
};

// Minimal helpers for matrices with ring entries (polynomials); shapes are
// vectors of rows. The additive identity must be supplied since entries carry
// their context.
template <class T>
using PMat = std::vector<std::vector<T>>;

template <class T>
PMat<T> pmat_mul(const PMat<T>& a, const PMat<T>& b, const T& zero) {
    if (a.empty() || b.empty()) throw error("empty matrix product");
    std::size_t n = a.size(), k = a[0].size(), m = b[0].size();
    if (b.size() != k) throw error("polynomial matrix product shape mismatch");
    PMat<T> r(n, std::vector<T>(m, zero));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) r[i][j] = r[i][j] + a[i][l] * b[l][j];
    return r;
}

template <class T>
PMat<T> pmat_add(const PMat<T>& a, const PMat<T>& b) {
    PMat<T> r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

template <class T>
PMat<T> pmat_sub(const PMat<T>& a, const PMat<T>& b) {
    PMat<T> r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

template <class T>
PMat<T> pmat_transpose(const PMat<T>& a) {
    if (a.empty()) return {};
    PMat<T> r(a[0].size(), std::vector<T>(a.size(), a[0][0]));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
    return r;
}

template <class T>
bool pmat_eq(const PMat<T>& a, const PMat<T>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

template <class T>
bool pmat_is_zero(const PMat<T>& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

}  // namespace ab13
