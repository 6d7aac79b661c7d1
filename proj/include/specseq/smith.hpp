#pragma once

#include <optional>
#include <vector>

#include "specseq/integer.hpp"

namespace specseq {

// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..., d_i >= 0.
// u_inv is U^{-1}, maintained during the reduction.
struct SmithForm {
    IntMat u;
    IntMat d;
    IntMat v;
    IntMat u_inv;
    Index rank = 0;

    std::vector<Int> diagonal() const;  // min(rows, cols) entries, divisibility-chained
};

SmithForm smith_normal_form(const IntMat& m);

// Nonzero diagonal entries of the Smith form (each >= 1, divisibility-chained).
std::vector<Int> invariant_factors(const IntMat& m);

Index rank(const IntMat& m);

// Basis of the integer kernel {x : Mx = 0}; columns are a lattice basis.
IntMat kernel_basis(const IntMat& m);

// Exact solution of M x = b over the integers, if one exists.
std::optional<IntVec> solve(const IntMat& m, const IntVec& b);

// Columnwise: X with M X = B.
std::optional<IntMat> solve_columns(const IntMat& m, const IntMat& b);

// Canonical column Hermite form of the column span: pivot rows strictly
// increasing, pivots positive, entries to the left of a pivot reduced into
// [0, pivot). Zero columns dropped. Two matrices span the same subgroup of
// Z^n iff their Hermite forms are identical; the columns are a lattice basis.
IntMat column_hermite(const IntMat& m);

// Membership of v in the column span of a Hermite form H.
bool hermite_contains(const IntMat& h, IntVec v);

// Exact determinant (Bareiss fraction-free elimination).
Int determinant(IntMat m);

}  // namespace specseq
