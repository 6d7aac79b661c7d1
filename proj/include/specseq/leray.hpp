#pragma once

#include "specseq/cell.hpp"
#include "specseq/couple.hpp"

namespace specseq {

// Order-preserving, dimension-nonincreasing assignment of cells, the
// combinatorial model of a continuous cellular map.
class CellularMap {
public:
    CellularMap(const CellComplex& x, const CellComplex& y, std::vector<Index> assignment);

    static CellularMap identity(const CellComplex& x);

    const CellComplex& source() const { return *x_; }
    const CellComplex& target() const { return *y_; }
    Index apply(Index c) const { return assign_[static_cast<size_t>(c)]; }

    // f^{-1} of an upward-closed set is upward-closed; of a closed set, closed.
    std::vector<bool> preimage(const std::vector<bool>& cells) const;

private:
    const CellComplex* x_ = nullptr;
    const CellComplex* y_ = nullptr;
    std::vector<Index> assign_;
};

using BigradedTable = std::map<PQ, FgAbGroup>;

// R^q f_* F: the sheaf on Y whose stalk at a cell is the degree-q cohomology
// of F over the preimage of the cell's open star, with restrictions induced
// by inclusions of stars.
CellularSheaf higher_direct_image(const CellularMap& f, const CellularSheaf& sheaf, int q);

// (p, q) -> H^p(Y, R^q f_* F).
BigradedTable leray_e2(const CellularMap& f, const CellularSheaf& sheaf);

// X_a = f^{-1}(Y_a).
FilteredSpace preimage_filtration(const CellularMap& f, const FilteredSpace& yf);

struct LerayReport {
    bool pass = true;
    std::vector<std::string> mismatches;
    BigradedTable leray;                    // H^p(Y, R^q f_* F)
    std::vector<PageTable> pages;           // filtration side, r = 2 .. stabilization
    std::map<int, FgAbGroup> abutment_h;    // H^n(X, F) with the induced filtration
    std::map<PQ, FgAbGroup> abutment_graded;
    std::map<PQ, FgAbGroup> einf;

    std::string summary() const;
};

// Machine check that the Leray E_2 agrees with the spectral sequence of the
// preimage filtration from E_2 on, and that the abutments coincide.
// Requires Y_* cellular for every R^q f_* F (throws NotCellular).
LerayReport compare_leray(const CellularMap& f, const CellularSheaf& sheaf,
                          const FilteredSpace& yf, bool rational = false);

struct PairLerayReport {
    bool pass = true;
    bool exchange_ok = true;
    std::vector<std::string> mismatches;
    BigradedTable pair_e2;                 // H^p(Y, j_! R^q f_* Z)
    std::vector<PageTable> pages;
    std::map<int, FgAbGroup> relative_h;   // H^*(X, X~) by supported cochains
    std::map<PQ, FgAbGroup> abutment_graded;
    std::map<PQ, FgAbGroup> einf;

    std::string summary() const;
};

// The Leray sequence of the pair (X, f^{-1} Y~) for the constant sheaf:
// verifies the stalkwise exchange j_! R^q f_* Z = R^q f_* J_! Z, the E_2
// agreement against the filtration side with coefficients J_! Z, and the
// abutment H^*(X, X~). Y~ must be empty or a member of the filtration
// (throws NotMember); cellularity of Y_* for the j_! sheaves is required.
PairLerayReport pair_leray(const CellularMap& f, const std::vector<bool>& y_tilde,
                           const FilteredSpace& yf, bool rational = false);

}  // namespace specseq
