#pragma once

#include "support/testutil.hpp"

namespace specseq::testing {

// K: Z·a -> Z·b in degrees 0, 1 with d(a) = b; a sits in F^0 \ F^1 and b in
// F^2 \ F^3. The only possible differential is the d_2 isomorphism
// E_2^{0,0} -> E_2^{2,-1}; the abutment vanishes.
inline RandomFilteredComplex d2_fixture()
{
    CochainComplex k(0, {1, 1}, {mk({{1}})});
    std::vector<std::vector<IntMat>> levels;
    levels.push_back({IntMat::Identity(1, 1), IntMat::Identity(1, 1)});  // F^0
    levels.push_back({IntMat(1, 0), IntMat::Identity(1, 1)});            // F^1
    levels.push_back({IntMat(1, 0), IntMat::Identity(1, 1)});            // F^2
    Filtration f(k, 0, std::move(levels));
    return {std::move(k), std::move(f)};
}

// Two-step filtration 0 ⊆ F^1 ⊆ F^0 = K on a complex with interesting
// cohomology on both sides: the subcomplex is d-stable by construction.
inline RandomFilteredComplex two_step_fixture(Rng& rng)
{
    RandomFilteredComplex out = random_filtered_complex(rng, 4, 4, 1);
    return out;
}

// Assembles the long exact sequence of the two-step filtration from the E_1
// page (with d_1 as the connecting map) and checks exactness at every node.
// Returns an empty string on success.
inline std::string les_failure(const CochainComplex& k, const Filtration& f)
{
    if (f.p_max() - f.p_min() + 1 != 2)
        return "not a two-step filtration";
    int p0 = f.p_min(), p1 = f.p_max();
    Page e1 = page(k, f, 1);

    auto im_of = [](const IntMat& m, const FgAbGroup& dst) {
        return Subgroup(dst.coords(), hcat(m, relation_matrix(dst)));
    };
    auto ker_of = [](const IntMat& m, const FgAbGroup& dst) {
        return preimage(m, Subgroup(dst.coords(), relation_matrix(dst)));
    };

    for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
        Subquotient a = e1.entries.at({p1, n - p1});       // H^n(F^{p1})
        Subquotient b = k.cohomology_data(n);              // H^n(K)
        Subquotient c = e1.entries.at({p0, n - p0});       // H^n(K / F^{p1})
        IntMat inc = IntMat::Identity(k.dim(n), k.dim(n));
        IntMat iota = induced_map(inc, a, b);
        IntMat proj = induced_map(inc, b, c);
        IntMat delta = e1.diff({p0, n - p0});
        FgAbGroup next_a = e1.group({p1, n + 1 - p1});

        if (!equal_span(im_of(iota, b.group()), ker_of(proj, c.group())))
            return "exactness fails at H^" + std::to_string(n) + "(K)";
        if (!equal_span(im_of(proj, c.group()), ker_of(delta, next_a)))
            return "exactness fails at H^" + std::to_string(n) + "(K/F)";
        if (n + 1 <= k.degree_max()) {
            Subquotient a1 = e1.entries.at({p1, n + 1 - p1});
            Subquotient b1 = k.cohomology_data(n + 1);
            IntMat inc1 = IntMat::Identity(k.dim(n + 1), k.dim(n + 1));
            IntMat iota1 = induced_map(inc1, a1, b1);
            if (!equal_span(im_of(delta, next_a), ker_of(iota1, b1.group())))
                return "exactness fails at H^" + std::to_string(n + 1) + "(F)";
        }
        else if (!hom_is_zero(delta, next_a)) {
            return "connecting map out of the top degree is nonzero";
        }
    }
    return {};
}

}  // namespace specseq::testing
