#pragma once

#include <map>
#include <string>
#include <vector>

#include "specseq/complex.hpp"

namespace specseq {

struct CellSpec {
    std::string id;
    int dim = 0;
    // codim-1 faces with the incidence number [face : this]
    std::vector<std::pair<std::string, Int>> faces;
};

// Finite regular cell complex as a graded poset with signed incidence.
class CellComplex {
public:
    CellComplex() = default;
    explicit CellComplex(const std::vector<CellSpec>& cells);

    Index size() const { return static_cast<Index>(dims_.size()); }
    int dimension() const { return dimension_; }
    int cell_dim(Index c) const { return dims_[static_cast<size_t>(c)]; }
    const std::string& cell_id(Index c) const { return ids_[static_cast<size_t>(c)]; }
    Index index_of(const std::string& id) const;

    const std::vector<std::pair<Index, Int>>& faces(Index c) const;
    const std::vector<std::pair<Index, Int>>& cofaces(Index c) const;
    // face order (reflexive, transitive closure of nonzero incidence)
    bool leq(Index a, Index b) const;
    std::vector<Index> cells_of_dim(int k) const;

    bool is_downward_closed(const std::vector<bool>& s) const;
    bool is_upward_closed(const std::vector<bool>& s) const;
    std::vector<bool> up_closure(Index c) const;  // open star

private:
    std::vector<std::string> ids_;
    std::vector<int> dims_;
    std::map<std::string, Index> by_id_;
    std::vector<std::vector<std::pair<Index, Int>>> faces_, cofaces_;
    std::vector<std::vector<bool>> leq_;
    int dimension_ = -1;
    void validate() const;
};

struct Stalk {
    Index gens = 0;
    IntMat relations;  // gens x k, empty for a free stalk

    Stalk() : relations(0, 0) {}
    Stalk(Index g, IntMat rel) : gens(g), relations(std::move(rel)) {}
    explicit Stalk(Index g) : gens(g), relations(g, 0) {}
};

FgAbGroup stalk_group(const Stalk& s);

// Cellular sheaf: a presented abelian group per cell and a restriction map
// toward each coface, functorial on the face order.
class CellularSheaf {
public:
    CellularSheaf() = default;
    CellularSheaf(const CellComplex& x, std::vector<Stalk> stalks,
                  std::map<std::pair<Index, Index>, IntMat> restrictions);

    static CellularSheaf constant(const CellComplex& x, Index gens = 1);

    const CellComplex& space() const { return *x_; }
    const Stalk& stalk(Index c) const { return stalks_[static_cast<size_t>(c)]; }
    // composite restriction along the face order; requires a <= b
    const IntMat& restriction(Index a, Index b) const;

private:
    const CellComplex* x_ = nullptr;
    std::vector<Stalk> stalks_;
    std::map<std::pair<Index, Index>, IntMat> composite_;
    void validate(const std::map<std::pair<Index, Index>, IntMat>& cover_maps);
};

// Increasing exhaustive chain of closed subcomplexes, X_{-1} = empty.
class FilteredSpace {
public:
    FilteredSpace(const CellComplex& x, std::vector<std::vector<bool>> stages);

    static FilteredSpace skeleta(const CellComplex& x);
    // stage of each cell by id; stages run 0..max(level)
    static FilteredSpace from_levels(const CellComplex& x,
                                     const std::map<std::string, int>& levels);

    const CellComplex& space() const { return *x_; }
    int top_stage() const { return static_cast<int>(stages_.size()) - 1; }
    // clamped: a < 0 gives the empty set, a > top gives all of X
    std::vector<bool> stage(int a) const;
    std::vector<bool> stratum(int a) const;  // X_a minus X_{a-1}

private:
    const CellComplex* x_ = nullptr;
    std::vector<std::vector<bool>> stages_;
};

// Cochain complex of a sheaf: C^k = direct sum of stalks over k-cells.
struct SheafCochains {
    CochainComplex complex;
    // per cell: (column offset within its degree, stalk generator count)
    std::vector<std::pair<Index, Index>> spans;

    // block subgroup of C^degree spanned by the listed cells' coordinates
    Subgroup supported_on(const CellComplex& x, int degree, const std::vector<bool>& cells) const;
};

SheafCochains cochain_complex(const CellComplex& x, const CellularSheaf& f);

// Sheaf with stalks zeroed outside `keep` and restrictions retained inside.
// Valid whenever `keep` is closed under betweenness (in particular for open
// sets and locally closed strata).
CellularSheaf restrict_support(const CellularSheaf& f, const std::vector<bool>& keep);

// Extension by zero over an open (upward-closed) set; throws NotOpen.
CellularSheaf extend_by_zero(const CellularSheaf& f, const std::vector<bool>& open_set);

// The filtration of the cochain complex by supports off the closed stages:
// F^a = cochains supported outside X_{a-1}.
std::pair<SheafCochains, Filtration> skeleta_filtration(const FilteredSpace& xf,
                                                        const CellularSheaf& f);

struct CellularityReport {
    bool cellular = true;
    int a = 0;
    int i = 0;
    FgAbGroup group;
    std::string str() const;
};

// H^i(Y, extension by zero of G over the a-th open stratum) must be
// concentrated in degree a for every a.
CellularityReport cellularity_check(const FilteredSpace& yf, const CellularSheaf& g);

// H^*(Y, F) from the single row (E_1^{*,0}, d_1) of the skeletal spectral
// sequence; requires cellularity (throws NotCellular) and is checked against
// the direct computation.
std::map<int, FgAbGroup> cellular_cohomology_via_e1(const FilteredSpace& yf,
                                                    const CellularSheaf& f);

// Derived-limit (nerve) cochain complex of a sheaf over an upward-closed
// set, computing the cohomology of the corresponding open subspace.
struct NerveData {
    std::vector<std::vector<std::vector<Index>>> chains;  // per degree
    std::vector<std::map<std::vector<Index>, Index>> chain_pos;
    std::vector<std::vector<Index>> offsets;  // per degree, per chain
};

struct OpenCohomology {
    CochainComplex complex;
    NerveData nerve;
    std::vector<Subquotient> h;  // degree 0 .. dim X

    FgAbGroup group(int q) const;
};

OpenCohomology open_cohomology(const CellularSheaf& f, const std::vector<bool>& up_set);

// Per-degree projections of nerve cochains for a smaller up-set inside a
// larger one (restriction of sections).
std::vector<IntMat> nerve_restriction(const CellularSheaf& f, const NerveData& big,
                                      const NerveData& small);

}  // namespace specseq
