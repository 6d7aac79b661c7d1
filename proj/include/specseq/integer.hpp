#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <string>
#include <utility>
#include <vector>

namespace specseq {

// Exact arbitrary-precision integer scalar; no floating point anywhere.
using Int = boost::multiprecision::mpz_int;
using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Bidegree (p, q) of a spectral-sequence entry.
using PQ = std::pair<int, int>;

inline bool is_zero(const IntMat& m)
{
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0)
                return false;
    return true;
}

inline bool is_zero(const IntVec& v)
{
    for (Index i = 0; i < v.size(); ++i)
        if (v(i) != 0)
            return false;
    return true;
}

inline bool mat_eq(const IntMat& a, const IntMat& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    return is_zero(IntMat(a - b));
}

inline IntMat hcat(const IntMat& a, const IntMat& b)
{
    if (a.cols() == 0 && a.rows() == 0 && b.cols() > 0)
        return b;
    IntMat out(a.rows(), a.cols() + b.cols());
    out.leftCols(a.cols()) = a;
    out.rightCols(b.cols()) = b;
    return out;
}

inline std::string to_string(const Int& x) { return x.str(); }

}  // namespace specseq
