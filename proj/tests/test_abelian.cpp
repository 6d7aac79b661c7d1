#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <set>

#include "specseq/abelian.hpp"
#include "support/testutil.hpp"

using namespace specseq;
using namespace specseq::testing;

TEST_CASE("cokernel examples")
{
    CHECK(cokernel(mk({{2}})) == fg(0, {2}));
    CHECK(cokernel(IntMat(3, 0)) == fg(3));
    CHECK(cokernel(mk({{2, 4}, {6, 8}})) == fg(0, {2, 4}));
}

TEST_CASE("cokernel is invariant under unimodular changes")
{
    Rng rng(7);
    for (int t = 0; t < 40; ++t) {
        Index r = rnd(rng, 1, 4), c = rnd(rng, 0, 4);
        IntMat m = random_matrix(rng, r, c, -5, 5);
        IntMat u, ui, v, vi;
        random_unimodular(rng, r, u, ui);
        random_unimodular(rng, c, v, vi);
        CHECK(cokernel(m) == cokernel(IntMat(u * m * v)));
    }
}

TEST_CASE("subquotient: full ambient by a cyclic subgroup")
{
    Subgroup z = full_group(2);
    Subgroup b(2, mk({{2}, {0}}));
    Subquotient sq(z, b);
    CHECK(sq.group() == fg(1, {2}));
    // reduce ∘ section = identity
    for (Index j = 0; j < sq.group().coords(); ++j) {
        IntVec e = IntVec::Zero(sq.group().coords());
        e(j) = 1;
        CHECK(is_zero(IntVec(sq.reduce(IntVec(sq.section().col(j))) - e)));
    }
}

TEST_CASE("subquotient of a group by itself is trivial")
{
    Subgroup z(3, mk({{1, 0}, {0, 2}, {0, 0}}));
    Subquotient sq(z, z);
    CHECK(sq.group().trivial());
}

TEST_CASE("subquotient matches brute-force coset enumeration")
{
    // ambient Z^3, Z = <(1,0,0),(0,2,0)>, B = <(2,0,0),(0,2,0)>
    Subgroup z(3, mk({{1, 0}, {0, 2}, {0, 0}}));
    Subgroup b(3, mk({{2, 0}, {0, 2}, {0, 0}}));

    // enumerate the image of Z and B inside (Z/4)^3
    auto enumerate = [](const IntMat& gens) {
        std::set<std::array<long, 3>> pts;
        for (long a = 0; a < 4; ++a)
            for (long c = 0; c < 4; ++c) {
                std::array<long, 3> p{};
                for (Index i = 0; i < 3; ++i) {
                    Int val = gens(i, 0) * a + gens(i, 1) * c;
                    p[static_cast<size_t>(i)] = static_cast<long>(((val % 4) + 4) % 4);
                }
                pts.insert(p);
            }
        return pts;
    };
    auto zi = enumerate(z.gens);
    auto bi = enumerate(b.gens);
    CHECK(zi.size() == 2 * bi.size());  // index two, and 2*Z lands in B
    Subquotient sq(z, b);
    CHECK(sq.group() == fg(0, {2}));
}

TEST_CASE("subquotient rejects a non-subgroup denominator")
{
    Subgroup z(2, mk({{2, 0}, {0, 1}}));
    Subgroup b(2, mk({{1}, {0}}));
    CHECK_THROWS_AS(Subquotient(z, b), NotASubgroup);
}

TEST_CASE("reduce rejects vectors outside the numerator")
{
    Subgroup z(2, mk({{2}, {0}}));
    Subquotient sq(z, zero_group(2));
    CHECK_THROWS_AS(sq.reduce(vec({1, 0})), NotInSubgroup);
}

TEST_CASE("induced map basics")
{
    Subgroup z = full_group(2);
    Subgroup b(2, mk({{2, 0}, {0, 3}}));
    Subquotient sq(z, b);

    IntMat id2 = IntMat::Identity(2, 2);
    IntMat m = induced_map(id2, sq, sq);
    CHECK(mat_eq(m, IntMat(IntMat::Identity(sq.group().coords(), sq.group().coords()))));
    CHECK(hom_is_zero(induced_map(IntMat(IntMat::Zero(2, 2)), sq, sq), sq.group()));
}

TEST_CASE("multiplication by 2 on Z/4")
{
    Subquotient sq(full_group(1), Subgroup(1, mk({{4}})));
    REQUIRE(sq.group() == fg(0, {4}));
    IntMat two = mk({{2}});
    IntMat m = induced_map(two, sq, sq);
    // enumerate Z/4: x -> 2x is represented by the 1x1 matrix [2]
    CHECK(m(0, 0) == 2);
    for (long x = 0; x < 4; ++x) {
        long image = static_cast<long>(m(0, 0).convert_to<long>()) * x % 4;
        CHECK(image == 2 * x % 4);
    }
}

TEST_CASE("induced map rejects incompatible maps")
{
    Subquotient src(full_group(1), Subgroup(1, mk({{2}})));
    Subquotient dst(Subgroup(1, mk({{2}})), Subgroup(1, mk({{4}})));
    CHECK_THROWS_AS(induced_map(IntMat(IntMat::Identity(1, 1)), src, dst), NotCompatible);
}

TEST_CASE("functoriality of induced maps on random subquotients")
{
    Rng rng(23);
    int done = 0;
    while (done < 25) {
        Index n = rnd(rng, 1, 4);
        IntMat zg = random_matrix(rng, n, rnd(rng, 1, 4), -3, 3);
        IntMat mult = random_matrix(rng, static_cast<Index>(zg.cols()), rnd(rng, 0, 3), -2, 2);
        Subgroup z(n, zg);
        Subgroup b(n, IntMat(zg * mult));  // guaranteed inside z
        Subquotient sq(z, b);
        if (sq.group().trivial())
            continue;
        ++done;

        // endomorphisms that stabilize numerator and denominator: scalars
        Int c1 = rnd(rng, -3, 3), c2 = rnd(rng, -3, 3);
        IntMat f1 = c1 * IntMat::Identity(n, n);
        IntMat f2 = c2 * IntMat::Identity(n, n);
        IntMat a = induced_map(f1, sq, sq);
        IntMat bb = induced_map(f2, sq, sq);
        IntMat comp = induced_map(IntMat(f2 * f1), sq, sq);
        CHECK(hom_equal(IntMat(bb * a), comp, sq.group()));
        CHECK(is_homomorphism(a, sq.group(), sq.group()));
    }
}

TEST_CASE("hom kernel, cokernel and homology of coordinate maps")
{
    // Z --2--> Z: kernel 0, cokernel Z/2
    FgAbGroup zz = fg(1);
    CHECK(hom_kernel(mk({{2}}), zz, zz) == fg(0));
    CHECK(hom_cokernel(mk({{2}}), zz, zz) == fg(0, {2}));
    CHECK(hom_rank(mk({{2}}), zz, zz) == 1);

    // Z/4 --2--> Z/4: kernel Z/2, cokernel Z/2
    FgAbGroup z4 = fg(0, {4});
    CHECK(hom_kernel(mk({{2}}), z4, z4) == fg(0, {2}));
    CHECK(hom_cokernel(mk({{2}}), z4, z4) == fg(0, {2}));
    CHECK(hom_rank(mk({{2}}), z4, z4) == 0);

    // Z --2--> Z --proj--> Z/2 has homology ker(proj)/im(2) = 0 at the middle
    CHECK(homology_at(mk({{2}}), mk({{1}}), zz, zz, fg(0, {2})) == fg(0));
    // and Z --4--> Z --proj--> Z/2 has homology Z/2 = 2Z/4Z
    CHECK(homology_at(mk({{4}}), mk({{1}}), zz, zz, fg(0, {2})) == fg(0, {2}));
}
