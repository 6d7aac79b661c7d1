#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specseq/smith.hpp"
#include "support/testutil.hpp"

using namespace specseq;
using namespace specseq::testing;

namespace {

void check_decomposition(const IntMat& m)
{
    SmithForm f = smith_normal_form(m);
    CHECK(mat_eq(IntMat(f.u * m * f.v), f.d));
    CHECK(mat_eq(IntMat(f.u * f.u_inv), IntMat(IntMat::Identity(m.rows(), m.rows()))));
    Int du = determinant(f.u);
    Int dv = determinant(f.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    // diagonal, nonnegative, divisibility chain
    for (Index i = 0; i < f.d.rows(); ++i)
        for (Index j = 0; j < f.d.cols(); ++j)
            if (i != j)
                CHECK(f.d(i, j) == 0);
    auto diag = f.diagonal();
    for (size_t i = 0; i < diag.size(); ++i) {
        CHECK(diag[i] >= 0);
        if (i + 1 < diag.size() && diag[i] != 0)
            CHECK(diag[i + 1] % diag[i] == 0);
        if (diag[i] == 0 && i + 1 < diag.size())
            CHECK(diag[i + 1] == 0);
    }
}

}  // namespace

TEST_CASE("smith normal form on the zero matrix")
{
    IntMat z = IntMat::Zero(2, 3);
    SmithForm f = smith_normal_form(z);
    CHECK(is_zero(f.d));
    CHECK(mat_eq(f.u, IntMat(IntMat::Identity(2, 2))));
    CHECK(mat_eq(f.v, IntMat(IntMat::Identity(3, 3))));
    check_decomposition(z);
}

TEST_CASE("smith normal form of the identity")
{
    IntMat id = IntMat::Identity(3, 3);
    SmithForm f = smith_normal_form(id);
    CHECK(mat_eq(f.d, id));
    check_decomposition(id);
}

TEST_CASE("smith normal form of [[2,4],[6,8]] against the determinantal-divisor oracle")
{
    IntMat m = mk({{2, 4}, {6, 8}});
    // gcd of the entries is 2 and |det| = 8, so the invariants are (2, 4)
    auto oracle = minor_gcd_invariants(m);
    REQUIRE(oracle.size() == 2);
    CHECK(oracle[0] == 2);
    CHECK(oracle[1] == 4);
    SmithForm f = smith_normal_form(m);
    CHECK(f.d(0, 0) == 2);
    CHECK(f.d(1, 1) == 4);
    check_decomposition(m);
}

TEST_CASE("smith decomposition holds on random matrices")
{
    Rng rng(91);
    for (int t = 0; t < 60; ++t) {
        Index r = rnd(rng, 0, 5), c = rnd(rng, 0, 5);
        IntMat m = random_matrix(rng, r, c, -9, 9);
        check_decomposition(m);
        if (r <= 3 && c <= 3) {
            auto inv = invariant_factors(m);
            auto oracle = minor_gcd_invariants(m);
            // drop oracle entries that are zero-divisor artifacts
            CHECK(inv == oracle);
        }
    }
}

TEST_CASE("kernel and solve")
{
    IntMat m = mk({{2, 4}, {6, 8}});
    CHECK(kernel_basis(m).cols() == 0);
    IntMat singular = mk({{1, 2, 3}, {2, 4, 6}});
    IntMat ker = kernel_basis(singular);
    CHECK(ker.cols() == 2);
    CHECK(is_zero(IntMat(singular * ker)));

    auto x = solve(m, vec({2, 6}));
    REQUIRE(x.has_value());
    CHECK(is_zero(IntVec(m * *x - vec({2, 6}))));
    CHECK(!solve(m, vec({1, 0})).has_value());

    // 2x = 3 has no integer solution
    CHECK(!solve(mk({{2}}), vec({3})).has_value());
}

TEST_CASE("column hermite form is canonical for the span")
{
    Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        Index r = rnd(rng, 1, 4), c = rnd(rng, 0, 4);
        IntMat m = random_matrix(rng, r, c, -6, 6);
        IntMat h = column_hermite(m);
        // every generator is in the span of h and vice versa
        for (Index j = 0; j < m.cols(); ++j)
            CHECK(hermite_contains(h, IntVec(m.col(j))));
        IntMat h2 = column_hermite(h);
        CHECK(mat_eq(h, h2));
        // mixing the columns does not change the form
        IntMat u, u_inv;
        random_unimodular(rng, c, u, u_inv);
        IntMat mixed = m * u;
        CHECK(mat_eq(column_hermite(mixed), h));
    }
}

TEST_CASE("determinant by fraction-free elimination")
{
    CHECK(determinant(mk({{2, 4}, {6, 8}})) == -8);
    CHECK(determinant(IntMat::Identity(4, 4)) == 1);
    CHECK(determinant(mk({{1, 2}, {2, 4}})) == 0);
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        IntMat u, u_inv;
        random_unimodular(rng, 4, u, u_inv);
        Int d = determinant(u);
        CHECK((d == 1 || d == -1));
    }
}
