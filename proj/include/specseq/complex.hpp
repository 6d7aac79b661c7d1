#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specseq/abelian.hpp"

namespace specseq {

// Bounded cochain complex. Degrees run over [degree_min, degree_max]; each
// degree carries a free module of generators and, optionally, a relation
// matrix presenting the actual module as a quotient. Everything downstream
// works with subgroups of the generator spaces that contain the relations.
class CochainComplex {
public:
    CochainComplex();
    CochainComplex(int degree_min, std::vector<Index> dims, std::vector<IntMat> differentials,
                   std::vector<IntMat> relations = {});

    int degree_min() const { return degree_min_; }
    int degree_max() const { return degree_min_ + static_cast<int>(dims_.size()) - 1; }
    Index dim(int n) const;
    IntMat differential(int n) const;  // dim(n+1) x dim(n)
    IntMat relation_gens(int n) const;
    Subgroup relation_span(int n) const;
    bool presented() const;

    Subgroup cocycles(int n) const;       // {x : d x in relations(n+1)}
    Subgroup coboundaries(int n) const;   // d(C^{n-1}) + relations(n)
    Subquotient cohomology_data(int n) const;
    FgAbGroup cohomology(int n) const;

private:
    int degree_min_ = 0;
    std::vector<Index> dims_;
    std::vector<IntMat> d_;     // d_[i] : degree (degree_min_+i) -> +1
    std::vector<IntMat> rel_;
    void validate() const;
};

// Decreasing biregular filtration of a complex by subgroups of the generator
// spaces. Levels are stored for p in [p_min, p_max]; the accessor clamps to
// the full module below p_min and to the relation span above p_max.
class Filtration {
public:
    Filtration() = default;
    // levels[p - p_min][n - degree_min] generates F^p K^n (relations are
    // adjoined automatically). Throws InvalidFiltration on violations.
    Filtration(const CochainComplex& k, int p_min, std::vector<std::vector<IntMat>> levels);

    // F^0 = K, F^1 = 0.
    static Filtration trivial(const CochainComplex& k);
    // Basis-aligned filtration from a level function on generators:
    // F^p K^n is spanned by the generators with level(n, i) >= p.
    static Filtration from_level_function(const CochainComplex& k,
                                          const std::vector<std::vector<int>>& level);

    int p_min() const { return p_min_; }
    int p_max() const { return p_min_ + static_cast<int>(levels_.size()) - 1; }
    Subgroup level(const CochainComplex& k, int p, int n) const;

private:
    int p_min_ = 0;
    int degree_min_ = 0;
    std::vector<std::vector<IntMat>> levels_;
};

// Bigraded page with induced differentials d_r of bidegree (r, -r+1).
struct Page {
    int r = 1;
    int p_lo = 0, p_hi = -1;
    int n_lo = 0, n_hi = -1;
    std::map<PQ, Subquotient> entries;
    std::map<PQ, IntMat> differentials;

    FgAbGroup group(PQ pq) const;
    bool has(PQ pq) const { return entries.count(pq) != 0; }
    // d_r out of (p, q); zero-shaped when absent.
    IntMat diff(PQ pq) const;
    std::vector<PQ> support() const;  // nonzero entries
};

// Invariant-factor content of a page, the unit of comparison between
// independently computed spectral sequences.
struct PageTable {
    int r = 1;
    std::map<PQ, FgAbGroup> groups;
    std::map<PQ, IntMat> diffs;

    FgAbGroup group(PQ pq) const;
    std::vector<PQ> support() const;
};

PageTable table_of(const Page& page);

// E_r of the filtered complex; r >= 0 (r = 0 gives the associated graded).
Page page(const CochainComplex& k, const Filtration& f, int r);

// Pages stabilize from this index on (filtration width + 2).
int stabilization_index(const Filtration& f);

// The shifted filtration: Dec(F)^p K^n = {x in F^{p+n} K^n : dx in F^{p+n+1}}.
Filtration dec_filtration(const CochainComplex& k, const Filtration& f);

struct DecShiftReport {
    bool pass = true;
    int r = 0;
    PQ at{0, 0};
    std::string what;
};

// Checks E_r^{p,q}(K, Dec F) against E_{r+1}^{2p+q,-p}(K, F) for r in
// [1, r_max]: entrywise group equality plus rank and cokernel equality of
// corresponding differentials. Returns the first counterexample on failure.
DecShiftReport verify_dec_shift(const CochainComplex& k, const Filtration& f, int r_max,
                                bool rational = false);

// H^* with the induced filtration L^p H^n = image(H^n(F^p K) -> H^n(K)).
struct Abutment {
    int p_lo = 0, p_hi = -1;
    std::map<int, Subquotient> h;
    std::map<int, FgAbGroup> h_group;
    std::map<std::pair<int, int>, Subgroup> level;  // (p, n) -> L^p H^n in H^n coordinates
    std::map<std::pair<int, int>, FgAbGroup> graded;

    FgAbGroup group(int n) const;
    FgAbGroup graded_piece(int p, int n) const;
};

Abutment abutment(const CochainComplex& k, const Filtration& f);

// Per-(p,q) maps induced on page r by a filtered chain map phi (degree ->
// matrix). Throws NotFiltered if phi drops filtration level, ValidationError
// if it is not a chain map.
std::map<PQ, IntMat> map_of_pages(const std::map<int, IntMat>& phi, const CochainComplex& k,
                                  const Filtration& f, const CochainComplex& k2,
                                  const Filtration& f2, int r);

// The subcomplex F^p K presented on a basis of its levels, with the maps
// back to the ambient generator coordinates.
struct LevelComplex {
    CochainComplex complex;
    std::vector<IntMat> inclusion;  // per degree: ambient_dim x basis_size
};

LevelComplex level_complex(const CochainComplex& k, const Filtration& f, int p);

}  // namespace specseq
