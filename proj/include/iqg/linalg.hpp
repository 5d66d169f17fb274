#pragma once

// Exact linear algebra over a field T (RatScalar or QuadExt).
// Everything is plain Gauss-Jordan; pivots are chosen by smallest
// coefficient complexity to limit expression swell.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "iqg/eigen_support.hpp"

namespace iqg {

template <class T>
struct Echelon {
    Mat<T> reduced;                     // reduced row echelon form, zero rows at the bottom
    std::vector<Eigen::Index> pivots;   // pivot column of each nonzero row
    Eigen::Index rank() const { return static_cast<Eigen::Index>(pivots.size()); }
};

template <class T>
Echelon<T> rref(Mat<T> m) {
    Echelon<T> out;
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index best = -1;
        std::size_t best_cost = 0;
        for (Eigen::Index i = r; i < rows; ++i) {
            if (is_zero(m(i, c))) continue;
            std::size_t cost = complexity(m(i, c));
            if (best < 0 || cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        if (best < 0) continue;
        if (best != r) m.row(best).swap(m.row(r));
        const T inv = T(1) / m(r, c);
        for (Eigen::Index j = c; j < cols; ++j)
            if (!is_zero(m(r, j))) m(r, j) *= inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || is_zero(m(i, c))) continue;
            const T f = m(i, c);
            for (Eigen::Index j = c; j < cols; ++j)
                if (!is_zero(m(r, j))) m(i, j) -= f * m(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

template <class T>
Eigen::Index rank(const Mat<T>& m) {
    return rref<T>(m).rank();
}

/// Columns form a basis of {x : m x = 0}.
template <class T>
Mat<T> nullspace(const Mat<T>& m) {
    Echelon<T> e = rref<T>(m);
    const Eigen::Index n = m.cols();
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (auto p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    Mat<T> basis(n, n - e.rank());
    basis.setConstant(T(0));
    Eigen::Index col = 0;
    for (Eigen::Index f = 0; f < n; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        basis(f, col) = T(1);
        for (Eigen::Index r = 0; r < e.rank(); ++r)
            if (!is_zero(e.reduced(r, f))) basis(e.pivots[static_cast<std::size_t>(r)], col) = -e.reduced(r, f);
        ++col;
    }
    return basis;
}

/// Some solution of a x = b, or nullopt when inconsistent.
template <class T>
std::optional<Vec<T>> solve(const Mat<T>& a, const Vec<T>& b) {
    Mat<T> aug(a.rows(), a.cols() + 1);
    aug << a, b;
    Echelon<T> e = rref<T>(std::move(aug));
    Vec<T> x = Vec<T>::Constant(a.cols(), T(0));
    for (Eigen::Index r = 0; r < e.rank(); ++r) {
        Eigen::Index p = e.pivots[static_cast<std::size_t>(r)];
        if (p == a.cols()) return std::nullopt;
        x(p) = e.reduced(r, a.cols());
    }
    return x;
}

/// The unique X with a X = b for a of full column rank; nullopt when no
/// solution exists.
template <class T>
std::optional<Mat<T>> solve_matrix(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> aug(a.rows(), a.cols() + b.cols());
    aug << a, b;
    Echelon<T> e = rref<T>(std::move(aug));
    Mat<T> x = Mat<T>::Constant(a.cols(), b.cols(), T(0));
    Eigen::Index found = 0;
    for (Eigen::Index r = 0; r < e.rank(); ++r) {
        Eigen::Index p = e.pivots[static_cast<std::size_t>(r)];
        if (p >= a.cols()) return std::nullopt;
        x.row(p) = e.reduced.row(r).tail(b.cols());
        ++found;
    }
    if (found < a.cols()) throw std::invalid_argument("solve_matrix: columns are dependent");
    return x;
}

template <class T>
T determinant(Mat<T> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    const Eigen::Index n = m.rows();
    T det(1);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index best = -1;
        std::size_t best_cost = 0;
        for (Eigen::Index i = c; i < n; ++i) {
            if (is_zero(m(i, c))) continue;
            std::size_t cost = complexity(m(i, c));
            if (best < 0 || cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        if (best < 0) return T(0);
        if (best != c) {
            m.row(best).swap(m.row(c));
            det = -det;
        }
        det *= m(c, c);
        const T inv = T(1) / m(c, c);
        for (Eigen::Index i = c + 1; i < n; ++i) {
            if (is_zero(m(i, c))) continue;
            const T f = m(i, c) * inv;
            for (Eigen::Index j = c; j < n; ++j)
                if (!is_zero(m(c, j))) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& m) {
    const Eigen::Index n = m.rows();
    Mat<T> aug(n, 2 * n);
    aug.setConstant(T(0));
    aug.leftCols(n) = m;
    for (Eigen::Index i = 0; i < n; ++i) aug(i, n + i) = T(1);
    Echelon<T> e = rref<T>(std::move(aug));
    if (e.rank() < n || e.pivots[static_cast<std::size_t>(n - 1)] >= n) return std::nullopt;
    return Mat<T>(e.reduced.rightCols(n));
}

/// Growing subspace of T^n kept in fully reduced echelon form, for span
/// closures and independence tests.
template <class T>
class Span {
public:
    explicit Span(Eigen::Index n) : n_(n) {}

    Eigen::Index ambient() const { return n_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(rows_.size()); }
    const std::vector<Vec<T>>& basis() const { return rows_; }
    const std::vector<Eigen::Index>& pivots() const { return pivots_; }

    /// v minus its projection along the pivots: zero iff v is in the span.
    Vec<T> reduce(Vec<T> v) const {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Eigen::Index p = pivots_[r];
            if (is_zero(v(p))) continue;
            const T f = v(p);
            for (Eigen::Index j = 0; j < n_; ++j)
                if (!is_zero(rows_[r](j))) v(j) -= f * rows_[r](j);
        }
        return v;
    }

    bool contains(const Vec<T>& v) const { return is_zero(reduce(v)); }

    /// Adds v; returns false when v was already in the span.
    bool insert(const Vec<T>& v) {
        Vec<T> w = reduce(v);
        Eigen::Index p = -1;
        std::size_t best = 0;
        for (Eigen::Index j = 0; j < n_; ++j) {
            if (is_zero(w(j))) continue;
            std::size_t c = complexity(w(j));
            if (p < 0 || c < best) {
                p = j;
                best = c;
            }
        }
        if (p < 0) return false;
        const T inv = T(1) / w(p);
        for (Eigen::Index j = 0; j < n_; ++j)
            if (!is_zero(w(j))) w(j) *= inv;
        for (auto& row : rows_) {
            if (is_zero(row(p))) continue;
            const T f = row(p);
            for (Eigen::Index j = 0; j < n_; ++j)
                if (!is_zero(w(j))) row(j) -= f * w(j);
        }
        rows_.push_back(std::move(w));
        pivots_.push_back(p);
        return true;
    }

    /// Basis vectors as matrix columns.
    Mat<T> matrix() const {
        Mat<T> m(n_, dim());
        for (Eigen::Index c = 0; c < dim(); ++c) m.col(c) = rows_[static_cast<std::size_t>(c)];
        return m;
    }

    /// Coordinates of v (assumed in the span) in the stored basis.
    Vec<T> coordinates(const Vec<T>& v) const {
        Vec<T> c(dim());
        for (Eigen::Index r = 0; r < dim(); ++r) c(r) = v(pivots_[static_cast<std::size_t>(r)]);
        return c;
    }

private:
    Eigen::Index n_;
    std::vector<Vec<T>> rows_;
    std::vector<Eigen::Index> pivots_;
};

}  // namespace iqg
