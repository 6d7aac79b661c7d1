#pragma once

#include <climits>
#include <map>
#include <vector>

#include "specseq/complex.hpp"

namespace specseq {

// Exact couple of bigraded finitely generated abelian groups, stored in
// invariant-factor coordinates. alpha[pq] : D^{pq} -> D^{pq + alpha_deg},
// beta[pq] : D^{pq} -> E^{pq + beta_deg}, gamma[pq] : E^{pq} -> D^{pq +
// gamma_deg}. Deriving shifts beta's bidegree by (1, -1); alpha and gamma
// keep (-1, 1) and (1, 0). The couple differential beta∘gamma then has
// bidegree (r, -r+1) on the r-th page.
struct ExactCouple {
    PQ alpha_deg{-1, 1};
    PQ beta_deg{0, 0};
    PQ gamma_deg{1, 0};

    std::map<PQ, FgAbGroup> d_groups;
    std::map<PQ, FgAbGroup> e_groups;
    std::map<PQ, IntMat> alpha;
    std::map<PQ, IntMat> beta;
    std::map<PQ, IntMat> gamma;

    // Bidegrees outside the maps are zero groups. A couple cut out of a
    // window whose D-columns continue beyond the stored range records the
    // cut positions here; exactness is not asserted outside [check_p_min,
    // check_p_max]. A right cut erodes by one column per derivation.
    int check_p_min = INT_MIN;
    int check_p_max = INT_MAX;

    FgAbGroup d_group(PQ pq) const;
    FgAbGroup e_group(PQ pq) const;
    IntMat alpha_at(PQ pq) const;  // zero-shaped when absent
    IntMat beta_at(PQ pq) const;
    IntMat gamma_at(PQ pq) const;

    // Bidegree of the differential beta∘gamma on E.
    PQ diff_deg() const { return {beta_deg.first + gamma_deg.first, beta_deg.second + gamma_deg.second}; }
    IntMat diff_at(PQ pq) const;
};

// Exactness at every node of the triangle, checked as equality of image and
// kernel subgroups in coordinates. Nonempty result = first failing node.
std::string exactness_failure(const ExactCouple& c);

// The derived couple D' = im(alpha), E' = ker(beta∘gamma)/im(beta∘gamma).
// Throws NotExact if the input fails the exactness check.
ExactCouple derive(const ExactCouple& c);

// The exact couple of the filtered complex: D^{p,q} = H^{p+q}(F^p K),
// E^{p,q} = H^{p+q}(Gr_F^p K), with alpha induced by inclusion, beta by
// projection and gamma the connecting homomorphism.
ExactCouple couple_from_filtration(const CochainComplex& k, const Filtration& f);

// Pages of the spectral sequence of the couple: page r is E of the
// (r-1)-fold derived couple with d = beta∘gamma.
std::vector<PageTable> couple_pages(const ExactCouple& c, int r_max);

}  // namespace specseq
