#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specseq/errors.hpp"
#include "specseq/integer.hpp"
#include "specseq/smith.hpp"

namespace specseq {

// Finitely generated abelian group in invariant-factor form.
// Coordinates: torsion generators first (t_1 | t_2 | ...), then free ones.
struct FgAbGroup {
    Index rank = 0;
    std::vector<Int> torsion;

    Index coords() const { return rank + static_cast<Index>(torsion.size()); }
    bool trivial() const { return rank == 0 && torsion.empty(); }
    bool operator==(const FgAbGroup&) const = default;

    std::string str() const;  // "0", "Z", "Z^2 + Z/2 + Z/4", ...
};

// Same isomorphism class after tensoring with Q (rank only).
bool groups_match(const FgAbGroup& a, const FgAbGroup& b, bool rational);

// Relation matrix of the presentation Z^{coords} / <t_i e_i>.
IntMat relation_matrix(const FgAbGroup& g);

// Subgroup of Z^ambient spanned by the columns of gens.
struct Subgroup {
    Index ambient = 0;
    IntMat gens;  // ambient x k

    Subgroup() = default;
    Subgroup(Index n, IntMat g);
};

Subgroup full_group(Index ambient);
Subgroup zero_group(Index ambient);
Subgroup sum(const Subgroup& a, const Subgroup& b);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup image(const IntMat& f, const Subgroup& s);
// {x : f x in s}
Subgroup preimage(const IntMat& f, const Subgroup& s);
Subgroup kernel(const IntMat& f);
bool contains(const Subgroup& a, const IntVec& v);
bool contains(const Subgroup& a, const Subgroup& b);  // b subset of a
bool equal_span(const Subgroup& a, const Subgroup& b);
// Lattice basis (canonical Hermite columns).
IntMat basis(const Subgroup& a);

FgAbGroup cokernel(const IntMat& m);  // Z^rows / column span

// The subquotient Z/B of Z^ambient together with invariant-factor
// coordinates, a section lifting coordinates to ambient representatives, and
// reduction of ambient vectors to coordinates.
class Subquotient {
public:
    Subquotient() = default;
    // Throws NotASubgroup unless B is contained in Z.
    Subquotient(Subgroup z, Subgroup b);

    const FgAbGroup& group() const { return group_; }
    Index ambient() const { return z_.ambient; }
    const Subgroup& numerator() const { return z_; }
    const Subgroup& denominator() const { return b_; }

    // ambient x coords; column j represents the j-th generator.
    const IntMat& section() const { return section_; }

    // Coordinates of an ambient vector; throws NotInSubgroup if v is not in Z.
    IntVec reduce(const IntVec& v) const;
    IntMat reduce_columns(const IntMat& m) const;

    // Canonical representative of a coordinate vector modulo the invariants.
    IntVec normalize(IntVec coords) const;

private:
    Subgroup z_, b_;
    FgAbGroup group_;
    IntMat zbasis_;            // ambient x r
    IntMat u_;                 // r x r, from the Smith form of B in basis coords
    std::vector<Int> inv_;     // invariant per basis coordinate (0 = free)
    std::vector<Index> keep_;  // retained coordinates (invariant != 1)
    IntMat section_;
};

// Matrix of the homomorphism induced on invariant-factor coordinates by the
// ambient map f. Throws NotCompatible unless f maps source Z into target Z
// and source B into target B.
IntMat induced_map(const IntMat& f, const Subquotient& source, const Subquotient& target);

// Entrywise canonical form of a coordinate matrix into dst (torsion rows
// reduced modulo their invariant).
IntMat normalize_hom(IntMat m, const FgAbGroup& dst);

// Equality of homomorphisms into dst (entrywise, modulo the invariants).
bool hom_equal(const IntMat& a, const IntMat& b, const FgAbGroup& dst);
bool hom_is_zero(const IntMat& a, const FgAbGroup& dst);

// f carries relations of src into relations of dst.
bool is_homomorphism(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst);

// Kernel, cokernel and rank of a coordinate homomorphism f : src -> dst.
FgAbGroup hom_kernel(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst);
FgAbGroup hom_cokernel(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst);
// Rank of the induced map on free quotients.
Index hom_rank(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst);

// ker(g) / im(f) at b for coordinate maps a --f--> b --g--> c.
// Throws NotCompatible if g∘f is not zero in c.
FgAbGroup homology_at(const IntMat& f, const IntMat& g, const FgAbGroup& a, const FgAbGroup& b,
                      const FgAbGroup& c);

}  // namespace specseq
