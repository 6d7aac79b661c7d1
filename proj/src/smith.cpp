#include "specseq/smith.hpp"

#include <algorithm>
#include <limits>

namespace specseq {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Location of the entry of minimal nonzero absolute value in m(s:, s:).
bool locate_pivot(const IntMat& m, Index s, Index& irow, Index& icol)
{
    bool found = false;
    Int best = 0;
    for (Index i = s; i < m.rows(); ++i) {
        for (Index j = s; j < m.cols(); ++j) {
            if (m(i, j) == 0)
                continue;
            Int a = abs_int(m(i, j));
            if (!found || a < best) {
                best = a;
                irow = i;
                icol = j;
                found = true;
            }
        }
    }
    return found;
}

bool is_lone(const IntMat& m, Index s)
{
    for (Index i = s + 1; i < m.rows(); ++i)
        if (m(i, s) != 0)
            return false;
    for (Index j = s + 1; j < m.cols(); ++j)
        if (m(s, j) != 0)
            return false;
    return true;
}

// First entry of m(s+1:, s+1:) not divisible by m(s, s), if any.
bool find_nondivisible(const IntMat& m, Index s, Index& irow)
{
    for (Index i = s + 1; i < m.rows(); ++i)
        for (Index j = s + 1; j < m.cols(); ++j)
            if (m(i, j) % m(s, s) != 0) {
                irow = i;
                return true;
            }
    return false;
}

}  // namespace

std::vector<Int> SmithForm::diagonal() const
{
    std::vector<Int> out;
    Index n = std::min(d.rows(), d.cols());
    out.reserve(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i)
        out.push_back(d(i, i));
    return out;
}

SmithForm smith_normal_form(const IntMat& m)
{
    const Index rows = m.rows(), cols = m.cols();
    SmithForm f;
    f.u = IntMat::Identity(rows, rows);
    f.u_inv = IntMat::Identity(rows, rows);
    f.v = IntMat::Identity(cols, cols);
    f.d = m;
    IntMat& d = f.d;

    auto row_swap = [&](Index a, Index b) {
        if (a == b)
            return;
        d.row(a).swap(d.row(b));
        f.u.row(a).swap(f.u.row(b));
        f.u_inv.col(a).swap(f.u_inv.col(b));
    };
    auto col_swap = [&](Index a, Index b) {
        if (a == b)
            return;
        d.col(a).swap(d.col(b));
        f.v.col(a).swap(f.v.col(b));
    };
    // row a += k * row b
    auto row_add = [&](Index a, Index b, const Int& k) {
        d.row(a) += k * d.row(b);
        f.u.row(a) += k * f.u.row(b);
        f.u_inv.col(b) -= k * f.u_inv.col(a);
    };
    // col a += k * col b
    auto col_add = [&](Index a, Index b, const Int& k) {
        d.col(a) += k * d.col(b);
        f.v.col(a) += k * f.v.col(b);
    };
    auto row_negate = [&](Index a) {
        d.row(a) *= Int(-1);
        f.u.row(a) *= Int(-1);
        f.u_inv.col(a) *= Int(-1);
    };

    const Index steps = std::min(rows, cols);
    for (Index s = 0; s < steps; ++s) {
        Index irow = s, icol = s;
        if (!locate_pivot(d, s, irow, icol))
            break;  // lower-right block is zero
        row_swap(s, irow);
        col_swap(s, icol);

        while (!is_lone(d, s)) {
            for (Index i = s + 1; i < rows; ++i) {
                if (d(i, s) != 0)
                    row_add(i, s, Int(-(d(i, s) / d(s, s))));
            }
            for (Index j = s + 1; j < cols; ++j) {
                if (d(s, j) != 0)
                    col_add(j, s, Int(-(d(s, j) / d(s, s))));
            }
            if (!is_lone(d, s)) {
                // a remainder survived; move the new minimal entry into place
                locate_pivot(d, s, irow, icol);
                row_swap(s, irow);
                col_swap(s, icol);
            }
        }
        if (d(s, s) < 0)
            row_negate(s);

        // Enforce the divisibility chain: fold a non-divisible entry into
        // row s and redo the elimination at this step.
        Index bad = 0;
        while (find_nondivisible(d, s, bad)) {
            row_add(s, bad, Int(1));
            while (!is_lone(d, s)) {
                for (Index i = s + 1; i < rows; ++i)
                    if (d(i, s) != 0)
                        row_add(i, s, Int(-(d(i, s) / d(s, s))));
                for (Index j = s + 1; j < cols; ++j)
                    if (d(s, j) != 0)
                        col_add(j, s, Int(-(d(s, j) / d(s, s))));
                if (!is_lone(d, s)) {
                    locate_pivot(d, s, irow, icol);
                    row_swap(s, irow);
                    col_swap(s, icol);
                }
            }
            if (d(s, s) < 0)
                row_negate(s);
        }
    }

    f.rank = 0;
    for (Index i = 0; i < steps; ++i)
        if (d(i, i) != 0)
            ++f.rank;
    return f;
}

std::vector<Int> invariant_factors(const IntMat& m)
{
    SmithForm f = smith_normal_form(m);
    std::vector<Int> out;
    for (const Int& x : f.diagonal())
        if (x != 0)
            out.push_back(x);
    return out;
}

Index rank(const IntMat& m) { return smith_normal_form(m).rank; }

IntMat kernel_basis(const IntMat& m)
{
    if (m.cols() == 0)
        return IntMat(m.cols(), 0);
    SmithForm f = smith_normal_form(m);
    // M x = 0 iff D y = 0 with x = V y, so the kernel is spanned by the
    // columns of V past the rank.
    return f.v.rightCols(m.cols() - f.rank);
}

std::optional<IntMat> solve_columns(const IntMat& m, const IntMat& b)
{
    if (b.rows() != m.rows())
        return std::nullopt;
    SmithForm f = smith_normal_form(m);
    IntMat ub = f.u * b;
    const Index n = m.cols();
    IntMat y = IntMat::Zero(n, b.cols());
    for (Index c = 0; c < b.cols(); ++c) {
        for (Index i = 0; i < m.rows(); ++i) {
            Int di = (i < std::min(m.rows(), m.cols())) ? f.d(i, i) : Int(0);
            if (di == 0) {
                if (ub(i, c) != 0)
                    return std::nullopt;
            }
            else if (i < n) {
                if (ub(i, c) % di != 0)
                    return std::nullopt;
                y(i, c) = ub(i, c) / di;
            }
        }
    }
    return IntMat(f.v * y);
}

std::optional<IntVec> solve(const IntMat& m, const IntVec& b)
{
    auto x = solve_columns(m, IntMat(b));
    if (!x)
        return std::nullopt;
    return IntVec(x->col(0));
}

IntMat column_hermite(const IntMat& m)
{
    IntMat h = m;
    const Index rows = h.rows();
    Index c = 0;  // next pivot column
    for (Index r = 0; r < rows && c < h.cols(); ++r) {
        // Combine columns c.. so that only column c has a nonzero in row r.
        while (true) {
            Index best = -1;
            for (Index j = c; j < h.cols(); ++j) {
                if (h(r, j) == 0)
                    continue;
                if (best < 0 || abs_int(h(r, j)) < abs_int(h(r, best)))
                    best = j;
            }
            if (best < 0)
                break;
            h.col(c).swap(h.col(best));
            bool clean = true;
            for (Index j = c + 1; j < h.cols(); ++j) {
                if (h(r, j) == 0)
                    continue;
                Int q = h(r, j) / h(r, c);
                h.col(j) -= q * h.col(c);
                if (h(r, j) != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (h(r, c) == 0)
            continue;  // no pivot in this row
        if (h(r, c) < 0)
            h.col(c) *= Int(-1);
        // Reduce earlier columns in this row into [0, pivot).
        for (Index j = 0; j < c; ++j) {
            Int q = h(r, j) / h(r, c);
            if (h(r, j) - q * h(r, c) < 0)
                q -= 1;
            if (q != 0)
                h.col(j) -= q * h.col(c);
        }
        ++c;
    }
    // Drop trailing zero columns.
    Index keep = c;
    IntMat out = h.leftCols(keep);
    return out;
}

bool hermite_contains(const IntMat& h, IntVec v)
{
    if (v.size() != h.rows())
        return false;
    Index row = 0;
    for (Index j = 0; j < h.cols(); ++j) {
        Index p = 0;
        while (p < h.rows() && h(p, j) == 0)
            ++p;
        // rows above the pivot must already be cleared
        for (; row < p; ++row)
            if (v(row) != 0)
                return false;
        if (p == h.rows())
            break;
        if (v(p) % h(p, j) != 0)
            return false;
        Int q = v(p) / h(p, j);
        if (q != 0)
            v -= q * h.col(j);
    }
    return is_zero(v);
}

Int determinant(IntMat m)
{
    const Index n = m.rows();
    if (n != m.cols())
        return 0;
    if (n == 0)
        return 1;
    Int sign = 1, prev = 1;
    for (Index k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            Index swap = -1;
            for (Index i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0)
                return 0;
            m.row(k).swap(m.row(swap));
            sign = -sign;
        }
        for (Index i = k + 1; i < n; ++i) {
            for (Index j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

}  // namespace specseq
