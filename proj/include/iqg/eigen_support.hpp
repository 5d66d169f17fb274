#pragma once

// Lets RatScalar and QuadExt live inside Eigen containers.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "iqg/scalars.hpp"

namespace Eigen {

template <>
struct NumTraits<iqg::RatScalar> : GenericNumTraits<iqg::RatScalar> {
    using Real = iqg::RatScalar;
    using NonInteger = iqg::RatScalar;
    using Literal = iqg::RatScalar;
    using Nested = iqg::RatScalar;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 50,
        MulCost = 100
    };
    static Real epsilon() { return Real(0); }
    static Real dummy_precision() { return Real(0); }
    static Real highest() { return Real(0); }
    static Real lowest() { return Real(0); }
    static int digits10() { return 0; }
};

template <>
struct NumTraits<iqg::QuadExt> : GenericNumTraits<iqg::QuadExt> {
    using Real = iqg::QuadExt;
    using NonInteger = iqg::QuadExt;
    using Literal = iqg::QuadExt;
    using Nested = iqg::QuadExt;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 100,
        MulCost = 300
    };
    static Real epsilon() { return Real(0); }
    static Real dummy_precision() { return Real(0); }
    static Real highest() { return Real(0); }
    static Real lowest() { return Real(0); }
    static int digits10() { return 0; }
};

}  // namespace Eigen

namespace iqg {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatrixR = Mat<RatScalar>;
using VectorR = Vec<RatScalar>;
using MatrixQ = Mat<QuadExt>;
using VectorQ = Vec<QuadExt>;

/// Module operators: block-sparse by weight, so stored sparse.
using SparseOp = Eigen::SparseMatrix<RatScalar>;

inline bool is_zero(const RatScalar& x) { return x.is_zero(); }
inline bool is_zero(const QuadExt& x) { return x.is_zero(); }
inline std::size_t complexity(const RatScalar& x) { return x.complexity(); }
inline std::size_t complexity(const QuadExt& x) { return x.complexity(); }

template <class Derived>
bool is_zero(const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!is_zero(m(i, j))) return false;
    return true;
}

inline bool is_zero(const SparseOp& m) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseOp::InnerIterator it(m, k); it; ++it)
            if (!it.value().is_zero()) return false;
    return true;
}

/// Drops explicitly stored zeros.
inline void prune(SparseOp& m) {
    m.prune([](Eigen::Index, Eigen::Index, const RatScalar& v) { return !v.is_zero(); });
}

inline SparseOp identity_op(int n) {
    SparseOp m(n, n);
    m.setIdentity();
    return m;
}

/// Exact comparison of two operators of equal shape.
inline bool ops_equal(const SparseOp& a, const SparseOp& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    SparseOp d = a - b;
    return is_zero(d);
}

inline MatrixQ lift(const MatrixR& m) { return m.unaryExpr([](const RatScalar& x) { return QuadExt(x); }); }

}  // namespace iqg
