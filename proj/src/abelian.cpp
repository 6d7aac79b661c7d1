#include "specseq/abelian.hpp"

#include <algorithm>
#include <sstream>

namespace specseq {

std::string FgAbGroup::str() const
{
    if (trivial())
        return "0";
    std::ostringstream os;
    bool first = true;
    if (rank == 1) {
        os << "Z";
        first = false;
    }
    else if (rank > 1) {
        os << "Z^" << rank;
        first = false;
    }
    for (const Int& t : torsion) {
        if (!first)
            os << " + ";
        os << "Z/" << t.str();
        first = false;
    }
    return os.str();
}

bool groups_match(const FgAbGroup& a, const FgAbGroup& b, bool rational)
{
    if (rational)
        return a.rank == b.rank;
    return a == b;
}

IntMat relation_matrix(const FgAbGroup& g)
{
    IntMat rel = IntMat::Zero(g.coords(), static_cast<Index>(g.torsion.size()));
    for (size_t i = 0; i < g.torsion.size(); ++i)
        rel(static_cast<Index>(i), static_cast<Index>(i)) = g.torsion[i];
    return rel;
}

Subgroup::Subgroup(Index n, IntMat g) : ambient(n), gens(std::move(g))
{
    if (gens.size() == 0)
        gens = IntMat(n, 0);
    if (gens.rows() != n)
        throw ValidationError("subgroup generators do not live in the ambient module");
}

Subgroup full_group(Index ambient) { return Subgroup(ambient, IntMat::Identity(ambient, ambient)); }

Subgroup zero_group(Index ambient) { return Subgroup(ambient, IntMat(ambient, 0)); }

Subgroup sum(const Subgroup& a, const Subgroup& b)
{
    if (a.ambient != b.ambient)
        throw ValidationError("subgroup sum: ambient mismatch");
    return Subgroup(a.ambient, hcat(a.gens, b.gens));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b)
{
    if (a.ambient != b.ambient)
        throw ValidationError("subgroup intersection: ambient mismatch");
    IntMat stacked = hcat(a.gens, IntMat(-b.gens));
    IntMat ker = kernel_basis(stacked);
    return Subgroup(a.ambient, IntMat(a.gens * ker.topRows(a.gens.cols())));
}

Subgroup image(const IntMat& f, const Subgroup& s)
{
    if (f.cols() != s.ambient)
        throw ValidationError("image: shape mismatch");
    return Subgroup(f.rows(), IntMat(f * s.gens));
}

Subgroup preimage(const IntMat& f, const Subgroup& s)
{
    if (f.rows() != s.ambient)
        throw ValidationError("preimage: shape mismatch");
    IntMat stacked = hcat(f, IntMat(-s.gens));
    IntMat ker = kernel_basis(stacked);
    return Subgroup(f.cols(), IntMat(ker.topRows(f.cols())));
}

Subgroup kernel(const IntMat& f) { return Subgroup(f.cols(), kernel_basis(f)); }

bool contains(const Subgroup& a, const IntVec& v)
{
    return hermite_contains(column_hermite(a.gens), v);
}

bool contains(const Subgroup& a, const Subgroup& b)
{
    if (a.ambient != b.ambient)
        return false;
    IntMat h = column_hermite(a.gens);
    for (Index j = 0; j < b.gens.cols(); ++j)
        if (!hermite_contains(h, IntVec(b.gens.col(j))))
            return false;
    return true;
}

bool equal_span(const Subgroup& a, const Subgroup& b)
{
    if (a.ambient != b.ambient)
        return false;
    return mat_eq(column_hermite(a.gens), column_hermite(b.gens));
}

IntMat basis(const Subgroup& a) { return column_hermite(a.gens); }

FgAbGroup cokernel(const IntMat& m)
{
    FgAbGroup g;
    std::vector<Int> diag = smith_normal_form(m).diagonal();
    Index nonzero = 0;
    for (const Int& d : diag) {
        if (d == 0)
            continue;
        ++nonzero;
        if (d >= 2)
            g.torsion.push_back(d);
    }
    g.rank = m.rows() - nonzero;
    return g;
}

Subquotient::Subquotient(Subgroup z, Subgroup b) : z_(std::move(z)), b_(std::move(b))
{
    if (z_.ambient != b_.ambient)
        throw ValidationError("subquotient: ambient mismatch");
    zbasis_ = basis(z_);
    const Index r = zbasis_.cols();

    // B in basis coordinates; fails iff B is not inside Z.
    auto c = solve_columns(zbasis_, b_.gens);
    if (!c)
        throw NotASubgroup("subquotient: denominator is not contained in the numerator");

    SmithForm f = smith_normal_form(*c);
    u_ = f.u;
    inv_.assign(static_cast<size_t>(r), Int(0));
    for (Index i = 0; i < std::min<Index>(r, c->cols()); ++i)
        inv_[static_cast<size_t>(i)] = f.d(i, i);

    for (Index i = 0; i < r; ++i)
        if (inv_[static_cast<size_t>(i)] != 1)
            keep_.push_back(i);

    group_ = FgAbGroup{};
    for (Index i : keep_) {
        const Int& t = inv_[static_cast<size_t>(i)];
        if (t == 0)
            ++group_.rank;
        else
            group_.torsion.push_back(t);
    }

    IntMat uinv_basis = zbasis_ * f.u_inv;
    section_ = IntMat(z_.ambient, static_cast<Index>(keep_.size()));
    for (size_t j = 0; j < keep_.size(); ++j)
        section_.col(static_cast<Index>(j)) = uinv_basis.col(keep_[j]);
}

IntVec Subquotient::normalize(IntVec coords) const
{
    const Index k = static_cast<Index>(group_.torsion.size());
    for (Index i = 0; i < k; ++i) {
        const Int& t = group_.torsion[static_cast<size_t>(i)];
        Int m = coords(i) % t;
        if (m < 0)
            m += t;
        coords(i) = m;
    }
    return coords;
}

IntVec Subquotient::reduce(const IntVec& v) const
{
    auto x = solve(zbasis_, v);
    if (!x)
        throw NotInSubgroup("reduce: vector is not in the numerator subgroup");
    IntVec y = u_ * *x;
    IntVec out(static_cast<Index>(keep_.size()));
    for (size_t j = 0; j < keep_.size(); ++j)
        out(static_cast<Index>(j)) = y(keep_[j]);
    return normalize(std::move(out));
}

IntMat Subquotient::reduce_columns(const IntMat& m) const
{
    IntMat out(group_.coords(), m.cols());
    for (Index j = 0; j < m.cols(); ++j)
        out.col(j) = reduce(IntVec(m.col(j)));
    return out;
}

IntMat induced_map(const IntMat& f, const Subquotient& source, const Subquotient& target)
{
    if (f.cols() != source.ambient() || f.rows() != target.ambient())
        throw NotCompatible("induced_map: shape mismatch");
    if (!contains(target.numerator(), image(f, source.numerator())))
        throw NotCompatible("induced_map: map does not carry numerator into numerator");
    if (!contains(target.denominator(), image(f, source.denominator())))
        throw NotCompatible("induced_map: map does not carry denominator into denominator");
    return target.reduce_columns(IntMat(f * source.section()));
}

IntMat normalize_hom(IntMat m, const FgAbGroup& dst)
{
    const Index k = static_cast<Index>(dst.torsion.size());
    for (Index i = 0; i < std::min(k, m.rows()); ++i) {
        const Int& t = dst.torsion[static_cast<size_t>(i)];
        for (Index j = 0; j < m.cols(); ++j) {
            Int v = m(i, j) % t;
            if (v < 0)
                v += t;
            m(i, j) = v;
        }
    }
    return m;
}

bool hom_equal(const IntMat& a, const IntMat& b, const FgAbGroup& dst)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    return mat_eq(normalize_hom(a, dst), normalize_hom(b, dst));
}

bool hom_is_zero(const IntMat& a, const FgAbGroup& dst)
{
    return is_zero(normalize_hom(a, dst));
}

bool is_homomorphism(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst)
{
    if (f.rows() != dst.coords() || f.cols() != src.coords())
        return false;
    return hom_is_zero(IntMat(f * relation_matrix(src)), dst);
}

FgAbGroup hom_cokernel(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst)
{
    (void)src;
    return cokernel(hcat(f, relation_matrix(dst)));
}

FgAbGroup hom_kernel(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst)
{
    Subgroup ker = preimage(f, Subgroup(dst.coords(), relation_matrix(dst)));
    Subgroup rel(src.coords(), relation_matrix(src));
    return Subquotient(ker, rel).group();
}

Index hom_rank(const IntMat& f, const FgAbGroup& src, const FgAbGroup& dst)
{
    if (dst.rank == 0 || src.rank == 0)
        return 0;
    IntMat block = f.bottomRightCorner(dst.rank, src.rank);
    return rank(block);
}

FgAbGroup homology_at(const IntMat& f, const IntMat& g, const FgAbGroup& a, const FgAbGroup& b,
                      const FgAbGroup& c)
{
    if (!is_homomorphism(f, a, b) || !is_homomorphism(g, b, c))
        throw NotCompatible("homology_at: not a complex of homomorphisms");
    if (!hom_is_zero(IntMat(g * f), c))
        throw NotCompatible("homology_at: composite is not zero");
    IntMat rel_b = relation_matrix(b);
    Subgroup ker = preimage(g, Subgroup(c.coords(), relation_matrix(c)));
    Subgroup img(b.coords(), hcat(f, rel_b));
    return Subquotient(ker, img).group();
}

}  // namespace specseq
