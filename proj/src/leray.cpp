#include "specseq/leray.hpp"

#include <algorithm>
#include <sstream>

namespace specseq {

namespace {

std::string pq_str(PQ pq)
{
    std::ostringstream os;
    os << "(" << pq.first << "," << pq.second << ")";
    return os.str();
}

std::vector<PQ> combined_support(const BigradedTable& a, const std::map<PQ, FgAbGroup>& b)
{
    std::vector<PQ> out;
    for (const auto& [pq, g] : a)
        if (!g.trivial())
            out.push_back(pq);
    for (const auto& [pq, g] : b)
        if (!g.trivial())
            out.push_back(pq);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FgAbGroup lookup(const std::map<PQ, FgAbGroup>& m, PQ pq)
{
    auto it = m.find(pq);
    return it == m.end() ? FgAbGroup{} : it->second;
}

}  // namespace

CellularMap::CellularMap(const CellComplex& x, const CellComplex& y, std::vector<Index> assignment)
    : x_(&x), y_(&y), assign_(std::move(assignment))
{
    if (static_cast<Index>(assign_.size()) != x.size())
        throw ValidationError("cellular map: one target cell per source cell required");
    for (Index c = 0; c < x.size(); ++c) {
        Index img = assign_[static_cast<size_t>(c)];
        if (img < 0 || img >= y.size())
            throw ValidationError("cellular map: image of '" + x.cell_id(c) + "' is out of range");
        if (y.cell_dim(img) > x.cell_dim(c))
            throw ValidationError("cellular map raises dimension at '" + x.cell_id(c) + "'");
        for (const auto& [cf, sign] : x.cofaces(c)) {
            (void)sign;
            if (!y.leq(img, assign_[static_cast<size_t>(cf)]))
                throw ValidationError("cellular map is not order-preserving on ('" +
                                      x.cell_id(c) + "', '" + x.cell_id(cf) + "')");
        }
    }
}

CellularMap CellularMap::identity(const CellComplex& x)
{
    std::vector<Index> a(static_cast<size_t>(x.size()));
    for (Index c = 0; c < x.size(); ++c)
        a[static_cast<size_t>(c)] = c;
    return CellularMap(x, x, std::move(a));
}

std::vector<bool> CellularMap::preimage(const std::vector<bool>& cells) const
{
    std::vector<bool> out(static_cast<size_t>(x_->size()), false);
    for (Index c = 0; c < x_->size(); ++c)
        out[static_cast<size_t>(c)] = cells[static_cast<size_t>(assign_[static_cast<size_t>(c)])];
    return out;
}

CellularSheaf higher_direct_image(const CellularMap& f, const CellularSheaf& sheaf, int q)
{
    const CellComplex& x = f.source();
    const CellComplex& y = f.target();
    if (&sheaf.space() != &x)
        throw ValidationError("higher direct image: sheaf does not live on the source");

    std::vector<OpenCohomology> star(static_cast<size_t>(y.size()));
    for (Index c = 0; c < y.size(); ++c)
        star[static_cast<size_t>(c)] = open_cohomology(sheaf, f.preimage(y.up_closure(c)));

    std::vector<Stalk> stalks;
    for (Index c = 0; c < y.size(); ++c) {
        FgAbGroup g = star[static_cast<size_t>(c)].group(q);
        stalks.emplace_back(g.coords(), relation_matrix(g));
    }
    std::map<std::pair<Index, Index>, IntMat> restr;
    for (Index c = 0; c < y.size(); ++c) {
        for (const auto& [cf, sign] : y.cofaces(c)) {
            (void)sign;
            const OpenCohomology& big = star[static_cast<size_t>(c)];
            const OpenCohomology& small = star[static_cast<size_t>(cf)];
            if (big.group(q).trivial() && small.group(q).trivial())
                continue;
            std::vector<IntMat> proj = nerve_restriction(sheaf, big.nerve, small.nerve);
            restr.emplace(std::make_pair(c, cf),
                          induced_map(proj[static_cast<size_t>(q)],
                                      big.h[static_cast<size_t>(q)],
                                      small.h[static_cast<size_t>(q)]));
        }
    }
    return CellularSheaf(y, std::move(stalks), std::move(restr));
}

BigradedTable leray_e2(const CellularMap& f, const CellularSheaf& sheaf)
{
    const CellComplex& y = f.target();
    BigradedTable out;
    int qmax = std::max(0, f.source().dimension());
    for (int q = 0; q <= qmax; ++q) {
        CellularSheaf rq = higher_direct_image(f, sheaf, q);
        SheafCochains c = cochain_complex(y, rq);
        for (int p = c.complex.degree_min(); p <= c.complex.degree_max(); ++p)
            out[{p, q}] = c.complex.cohomology(p);
    }
    return out;
}

FilteredSpace preimage_filtration(const CellularMap& f, const FilteredSpace& yf)
{
    std::vector<std::vector<bool>> stages;
    for (int a = 0; a <= yf.top_stage(); ++a)
        stages.push_back(f.preimage(yf.stage(a)));
    return FilteredSpace(f.source(), std::move(stages));
}

std::string LerayReport::summary() const
{
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL");
    for (const std::string& m : mismatches)
        os << "\n  " << m;
    return os.str();
}

std::string PairLerayReport::summary() const
{
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL");
    for (const std::string& m : mismatches)
        os << "\n  " << m;
    return os.str();
}

LerayReport compare_leray(const CellularMap& f, const CellularSheaf& sheaf,
                          const FilteredSpace& yf, bool rational)
{
    const CellComplex& x = f.source();
    if (&yf.space() != &f.target())
        throw ValidationError("compare_leray: filtration does not live on the target");

    int qmax = std::max(0, x.dimension());
    std::vector<CellularSheaf> rq;
    for (int q = 0; q <= qmax; ++q) {
        rq.push_back(higher_direct_image(f, sheaf, q));
        CellularityReport rep = cellularity_check(yf, rq.back());
        if (!rep.cellular)
            throw NotCellular("R^" + std::to_string(q) + " f_*: " + rep.str());
    }

    LerayReport out;
    for (int q = 0; q <= qmax; ++q) {
        SheafCochains c = cochain_complex(f.target(), rq[static_cast<size_t>(q)]);
        for (int p = c.complex.degree_min(); p <= c.complex.degree_max(); ++p)
            out.leray[{p, q}] = c.complex.cohomology(p);
    }

    FilteredSpace xf = preimage_filtration(f, yf);
    auto [c, filt] = skeleta_filtration(xf, sheaf);
    int r_stab = stabilization_index(filt);
    for (int r = 2; r <= r_stab; ++r)
        out.pages.push_back(table_of(page(c.complex, filt, r)));

    const PageTable& e2 = out.pages.front();
    for (PQ pq : combined_support(out.leray, e2.groups)) {
        FgAbGroup lhs = lookup(out.leray, pq);
        FgAbGroup rhs = e2.group(pq);
        if (!groups_match(lhs, rhs, rational)) {
            out.pass = false;
            out.mismatches.push_back("E_2" + pq_str(pq) + ": Leray " + lhs.str() +
                                     " vs filtration " + rhs.str());
        }
    }

    Abutment ab = abutment(c.complex, filt);
    for (int n = c.complex.degree_min(); n <= c.complex.degree_max(); ++n)
        out.abutment_h[n] = ab.group(n);
    for (const auto& [pn, g] : ab.graded)
        out.abutment_graded[{pn.first, pn.second - pn.first}] = g;
    out.einf = out.pages.back().groups;
    for (PQ pq : combined_support(out.einf, out.abutment_graded)) {
        FgAbGroup lhs = lookup(out.einf, pq);
        FgAbGroup rhs = lookup(out.abutment_graded, pq);
        if (!groups_match(lhs, rhs, rational)) {
            out.pass = false;
            out.mismatches.push_back("E_inf" + pq_str(pq) + ": page " + lhs.str() +
                                     " vs graded abutment " + rhs.str());
        }
    }
    return out;
}

PairLerayReport pair_leray(const CellularMap& f, const std::vector<bool>& y_tilde,
                           const FilteredSpace& yf, bool rational)
{
    const CellComplex& x = f.source();
    const CellComplex& y = f.target();
    if (static_cast<Index>(y_tilde.size()) != y.size())
        throw ValidationError("pair_leray: subcomplex mask has the wrong size");

    bool empty = std::none_of(y_tilde.begin(), y_tilde.end(), [](bool b) { return b; });
    bool member = empty;
    for (int a = 0; a <= yf.top_stage() && !member; ++a)
        member = (yf.stage(a) == y_tilde);
    if (!member)
        throw NotMember("pair_leray: the closed subcomplex is not a member of the filtration");

    std::vector<bool> y_open = y_tilde;
    y_open.flip();
    std::vector<bool> x_open = f.preimage(y_open);

    CellularSheaf zx = CellularSheaf::constant(x);
    CellularSheaf jz = extend_by_zero(zx, x_open);

    PairLerayReport out;
    int qmax = std::max(0, x.dimension());
    std::vector<CellularSheaf> lhs;  // j_! R^q f_* Z
    for (int q = 0; q <= qmax; ++q) {
        CellularSheaf rq = higher_direct_image(f, zx, q);
        CellularSheaf cut = extend_by_zero(rq, y_open);
        CellularSheaf rq_rel = higher_direct_image(f, jz, q);
        for (Index c = 0; c < y.size(); ++c) {
            FgAbGroup a = stalk_group(cut.stalk(c));
            FgAbGroup b = stalk_group(rq_rel.stalk(c));
            if (!groups_match(a, b, rational)) {
                out.exchange_ok = false;
                out.pass = false;
                out.mismatches.push_back("stalk exchange fails at '" + y.cell_id(c) + "', q=" +
                                         std::to_string(q) + ": " + a.str() + " vs " + b.str());
            }
        }
        lhs.push_back(std::move(rq_rel));
        CellularityReport rep = cellularity_check(yf, lhs.back());
        if (!rep.cellular)
            throw NotCellular("j_! R^" + std::to_string(q) + " f_*: " + rep.str());
    }

    for (int q = 0; q <= qmax; ++q) {
        SheafCochains c = cochain_complex(y, lhs[static_cast<size_t>(q)]);
        for (int p = c.complex.degree_min(); p <= c.complex.degree_max(); ++p)
            out.pair_e2[{p, q}] = c.complex.cohomology(p);
    }

    FilteredSpace xf = preimage_filtration(f, yf);
    auto [c, filt] = skeleta_filtration(xf, jz);
    int r_stab = stabilization_index(filt);
    for (int r = 2; r <= r_stab; ++r)
        out.pages.push_back(table_of(page(c.complex, filt, r)));

    const PageTable& e2 = out.pages.front();
    for (PQ pq : combined_support(out.pair_e2, e2.groups)) {
        FgAbGroup a = lookup(out.pair_e2, pq);
        FgAbGroup b = e2.group(pq);
        if (!groups_match(a, b, rational)) {
            out.pass = false;
            out.mismatches.push_back("E_2" + pq_str(pq) + ": pair Leray " + a.str() +
                                     " vs filtration " + b.str());
        }
    }

    // relative cohomology from the supported cochain complex, with the
    // abutment and stable page on top of it
    Abutment ab = abutment(c.complex, filt);
    for (int n = c.complex.degree_min(); n <= c.complex.degree_max(); ++n) {
        out.relative_h[n] = c.complex.cohomology(n);
        if (!groups_match(ab.group(n), out.relative_h[n], rational)) {
            out.pass = false;
            out.mismatches.push_back("abutment H^" + std::to_string(n) + " differs");
        }
    }
    for (const auto& [pn, g] : ab.graded)
        out.abutment_graded[{pn.first, pn.second - pn.first}] = g;
    out.einf = out.pages.back().groups;
    for (PQ pq : combined_support(out.einf, out.abutment_graded)) {
        FgAbGroup a = lookup(out.einf, pq);
        FgAbGroup b = lookup(out.abutment_graded, pq);
        if (!groups_match(a, b, rational)) {
            out.pass = false;
            out.mismatches.push_back("E_inf" + pq_str(pq) + ": page " + a.str() +
                                     " vs graded abutment " + b.str());
        }
    }
    return out;
}

}  // namespace specseq
