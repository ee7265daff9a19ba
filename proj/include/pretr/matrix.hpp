#pragma once

#include <pretr/scalar.hpp>

#include <optional>
#include <stdexcept>
#include <vector>

namespace pretr {

/// Dense matrix over the session field. Pivoting is always by position
/// (first nonzero in column order), never by magnitude, so every
/// elimination result is reproducible across runs and fields.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Scalar(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero() const {
        for (const auto& s : data_)
            if (!s.is_zero()) return false;
        return true;
    }

    /// Rank by fraction-free (Bareiss) elimination; pivots in column order.
    std::size_t rank_fraction_free() const {
        Matrix m = *this;
        std::size_t rank = 0;
        Scalar prev(1);
        std::size_t pivot_row = 0;
        for (std::size_t col = 0; col < m.cols_ && pivot_row < m.rows_; ++col) {
            std::size_t sel = pivot_row;
            while (sel < m.rows_ && m(sel, col).is_zero()) ++sel;
            if (sel == m.rows_) continue;
            m.swap_rows(sel, pivot_row);
            const Scalar pivot = m(pivot_row, col);
            for (std::size_t i = pivot_row + 1; i < m.rows_; ++i) {
                for (std::size_t j = col + 1; j < m.cols_; ++j)
                    m(i, j) = (m(i, j) * pivot - m(i, col) * m(pivot_row, j)) / prev;
                m(i, col) = Scalar(0);
            }
            prev = pivot;
            ++pivot_row;
            ++rank;
        }
        return rank;
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t pivot_row = 0;
        for (std::size_t col = 0; col < cols_ && pivot_row < rows_; ++col) {
            std::size_t sel = pivot_row;
            while (sel < rows_ && (*this)(sel, col).is_zero()) ++sel;
            if (sel == rows_) continue;
            swap_rows(sel, pivot_row);
            const Scalar inv = (*this)(pivot_row, col).inverse();
            for (std::size_t j = col; j < cols_; ++j) (*this)(pivot_row, j) *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == pivot_row) continue;
                const Scalar f = (*this)(i, col);
                if (f.is_zero()) continue;
                for (std::size_t j = col; j < cols_; ++j)
                    (*this)(i, j) -= f * (*this)(pivot_row, j);
            }
            pivots.push_back(col);
            ++pivot_row;
        }
        return pivots;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

/// Solves A x = b. Returns the canonical solution with all free
/// coordinates zero, or nothing when the system is inconsistent.
inline std::optional<std::vector<Scalar>> solve_linear(const Matrix& a,
                                                       const std::vector<Scalar>& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: shape mismatch");
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    std::vector<std::size_t> pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Scalar> x(a.cols(), Scalar(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
    return x;
}

/// Row space membership: reduces `v` against the RREF of `rows` and reports
/// whether the remainder vanishes; the remainder itself is the canonical
/// representative of `v` modulo the row space.
inline std::vector<Scalar> reduce_mod_rowspace(const Matrix& rref_rows,
                                               const std::vector<std::size_t>& pivots,
                                               std::vector<Scalar> v) {
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        const Scalar f = v[pivots[r]];
        if (f.is_zero()) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * rref_rows(r, j);
    }
    return v;
}

}  // namespace pretr
