#include "specseq/complex.hpp"

#include <algorithm>
#include <sstream>

namespace specseq {

namespace {

std::string at(int p, int n)
{
    std::ostringstream os;
    os << "(p=" << p << ", n=" << n << ")";
    return os.str();
}

}  // namespace

CochainComplex::CochainComplex() = default;

CochainComplex::CochainComplex(int degree_min, std::vector<Index> dims,
                               std::vector<IntMat> differentials, std::vector<IntMat> relations)
    : degree_min_(degree_min), dims_(std::move(dims)), d_(std::move(differentials)),
      rel_(std::move(relations))
{
    validate();
}

void CochainComplex::validate() const
{
    const size_t n = dims_.size();
    if (n == 0 ? !d_.empty() : d_.size() != n - 1)
        throw ValidationError("cochain complex: expected one differential per adjacent degree pair");
    for (size_t i = 0; i + 1 < n; ++i) {
        if (d_[i].rows() != dims_[i + 1] || d_[i].cols() != dims_[i])
            throw ValidationError("cochain complex: differential shape mismatch at degree " +
                                  std::to_string(degree_min_ + static_cast<int>(i)));
    }
    if (!rel_.empty() && rel_.size() != n)
        throw ValidationError("cochain complex: one relation matrix per degree required");
    for (size_t i = 0; i < rel_.size(); ++i)
        if (rel_[i].size() != 0 && rel_[i].rows() != dims_[i])
            throw ValidationError("cochain complex: relation shape mismatch at degree " +
                                  std::to_string(degree_min_ + static_cast<int>(i)));

    for (size_t i = 0; i + 1 < n; ++i) {
        int deg = degree_min_ + static_cast<int>(i);
        // relations are carried into relations
        if (!contains(relation_span(deg + 1), image(differential(deg), relation_span(deg))))
            throw ValidationError("cochain complex: differential does not preserve relations at degree " +
                                  std::to_string(deg));
        // d after d vanishes modulo relations
        if (i + 2 < n) {
            IntMat dd = differential(deg + 1) * differential(deg);
            if (!contains(relation_span(deg + 2), Subgroup(dims_[i + 2], dd)))
                throw ValidationError("cochain complex: d∘d is nonzero at degree " +
                                      std::to_string(deg));
        }
    }
}

Index CochainComplex::dim(int n) const
{
    if (n < degree_min_ || n > degree_max())
        return 0;
    return dims_[static_cast<size_t>(n - degree_min_)];
}

IntMat CochainComplex::differential(int n) const
{
    if (n < degree_min_ || n >= degree_max())
        return IntMat::Zero(dim(n + 1), dim(n));
    return d_[static_cast<size_t>(n - degree_min_)];
}

IntMat CochainComplex::relation_gens(int n) const
{
    if (rel_.empty() || n < degree_min_ || n > degree_max())
        return IntMat(dim(n), 0);
    const IntMat& r = rel_[static_cast<size_t>(n - degree_min_)];
    if (r.size() == 0)
        return IntMat(dim(n), 0);
    return r;
}

Subgroup CochainComplex::relation_span(int n) const { return Subgroup(dim(n), relation_gens(n)); }

bool CochainComplex::presented() const
{
    for (const IntMat& r : rel_)
        if (r.cols() > 0)
            return true;
    return false;
}

Subgroup CochainComplex::cocycles(int n) const
{
    return preimage(differential(n), relation_span(n + 1));
}

Subgroup CochainComplex::coboundaries(int n) const
{
    return Subgroup(dim(n), hcat(differential(n - 1), relation_gens(n)));
}

Subquotient CochainComplex::cohomology_data(int n) const
{
    return Subquotient(cocycles(n), coboundaries(n));
}

FgAbGroup CochainComplex::cohomology(int n) const { return cohomology_data(n).group(); }

Filtration::Filtration(const CochainComplex& k, int p_min, std::vector<std::vector<IntMat>> levels)
    : p_min_(p_min), degree_min_(k.degree_min())
{
    const size_t degs = static_cast<size_t>(k.degree_max() - k.degree_min() + 1);
    levels_.reserve(levels.size());
    for (auto& lvl : levels) {
        if (lvl.size() != degs)
            throw InvalidFiltration("filtration: one generator matrix per degree required");
        std::vector<IntMat> row;
        row.reserve(degs);
        for (size_t j = 0; j < degs; ++j) {
            int n = k.degree_min() + static_cast<int>(j);
            if (lvl[j].size() == 0)
                lvl[j] = IntMat(k.dim(n), 0);
            if (lvl[j].rows() != k.dim(n))
                throw InvalidFiltration("filtration: generator shape mismatch at degree " +
                                        std::to_string(n));
            row.push_back(hcat(lvl[j], k.relation_gens(n)));
        }
        levels_.push_back(std::move(row));
    }
    if (levels_.empty())
        throw InvalidFiltration("filtration: at least one level required");

    // Exhaustive at the stored bottom: prepend a full level if needed.
    bool bottom_full = true;
    for (size_t j = 0; j < degs; ++j) {
        int n = k.degree_min() + static_cast<int>(j);
        if (!equal_span(Subgroup(k.dim(n), levels_.front()[j]), full_group(k.dim(n))))
            bottom_full = false;
    }
    if (!bottom_full) {
        std::vector<IntMat> full_row;
        for (size_t j = 0; j < degs; ++j) {
            int n = k.degree_min() + static_cast<int>(j);
            full_row.push_back(IntMat::Identity(k.dim(n), k.dim(n)));
        }
        levels_.insert(levels_.begin(), std::move(full_row));
        --p_min_;
    }

    // Drop stored levels that merely repeat the clamped boundary values.
    auto row_is_full = [&](const std::vector<IntMat>& row) {
        for (size_t j = 0; j < degs; ++j) {
            int n = k.degree_min() + static_cast<int>(j);
            if (!equal_span(Subgroup(k.dim(n), row[j]), full_group(k.dim(n))))
                return false;
        }
        return true;
    };
    auto row_is_zero = [&](const std::vector<IntMat>& row) {
        for (size_t j = 0; j < degs; ++j) {
            int n = k.degree_min() + static_cast<int>(j);
            if (!equal_span(Subgroup(k.dim(n), row[j]), k.relation_span(n)))
                return false;
        }
        return true;
    };
    while (levels_.size() > 1 && row_is_full(levels_[1])) {
        levels_.erase(levels_.begin());
        ++p_min_;
    }
    while (levels_.size() > 1 && row_is_zero(levels_.back()))
        levels_.pop_back();

    // Decreasing and preserved by d.
    for (size_t i = 0; i < levels_.size(); ++i) {
        int p = p_min_ + static_cast<int>(i);
        for (size_t j = 0; j < degs; ++j) {
            int n = k.degree_min() + static_cast<int>(j);
            Subgroup cur(k.dim(n), levels_[i][j]);
            if (i + 1 < levels_.size() && !contains(cur, Subgroup(k.dim(n), levels_[i + 1][j])))
                throw InvalidFiltration("filtration is not decreasing at " + at(p, n));
            Subgroup next = (j + 1 < degs) ? Subgroup(k.dim(n + 1), levels_[i][j + 1])
                                           : k.relation_span(n + 1);
            if (!contains(next, image(k.differential(n), cur)))
                throw InvalidFiltration("differential does not preserve the filtration at " +
                                        at(p, n));
        }
    }
}

Filtration Filtration::trivial(const CochainComplex& k)
{
    std::vector<IntMat> row;
    for (int n = k.degree_min(); n <= k.degree_max(); ++n)
        row.push_back(IntMat::Identity(k.dim(n), k.dim(n)));
    return Filtration(k, 0, {row});
}

Filtration Filtration::from_level_function(const CochainComplex& k,
                                           const std::vector<std::vector<int>>& level)
{
    int lo = 0, hi = 0;
    bool any = false;
    for (const auto& row : level)
        for (int v : row) {
            lo = any ? std::min(lo, v) : v;
            hi = any ? std::max(hi, v) : v;
            any = true;
        }
    if (!any)
        return trivial(k);
    std::vector<std::vector<IntMat>> levels;
    for (int p = lo; p <= hi; ++p) {
        std::vector<IntMat> row;
        for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
            size_t j = static_cast<size_t>(n - k.degree_min());
            std::vector<Index> cols;
            for (Index i = 0; i < k.dim(n); ++i)
                if (level[j][static_cast<size_t>(i)] >= p)
                    cols.push_back(i);
            IntMat g = IntMat::Zero(k.dim(n), static_cast<Index>(cols.size()));
            for (size_t c = 0; c < cols.size(); ++c)
                g(cols[c], static_cast<Index>(c)) = 1;
            row.push_back(std::move(g));
        }
        levels.push_back(std::move(row));
    }
    return Filtration(k, lo, std::move(levels));
}

Subgroup Filtration::level(const CochainComplex& k, int p, int n) const
{
    if (n < k.degree_min() || n > k.degree_max())
        return zero_group(0);
    if (p < p_min_)
        return full_group(k.dim(n));
    if (p > p_max())
        return k.relation_span(n);
    return Subgroup(k.dim(n),
                    levels_[static_cast<size_t>(p - p_min_)][static_cast<size_t>(n - degree_min_)]);
}

FgAbGroup Page::group(PQ pq) const
{
    auto it = entries.find(pq);
    return it == entries.end() ? FgAbGroup{} : it->second.group();
}

IntMat Page::diff(PQ pq) const
{
    auto it = differentials.find(pq);
    if (it != differentials.end())
        return it->second;
    PQ tgt{pq.first + r, pq.second - r + 1};
    return IntMat::Zero(group(tgt).coords(), group(pq).coords());
}

std::vector<PQ> Page::support() const
{
    std::vector<PQ> out;
    for (const auto& [pq, e] : entries)
        if (!e.group().trivial())
            out.push_back(pq);
    return out;
}

FgAbGroup PageTable::group(PQ pq) const
{
    auto it = groups.find(pq);
    return it == groups.end() ? FgAbGroup{} : it->second;
}

std::vector<PQ> PageTable::support() const
{
    std::vector<PQ> out;
    for (const auto& [pq, g] : groups)
        if (!g.trivial())
            out.push_back(pq);
    return out;
}

PageTable table_of(const Page& page)
{
    PageTable t;
    t.r = page.r;
    for (const auto& [pq, e] : page.entries)
        t.groups[pq] = e.group();
    for (const auto& [pq, m] : page.differentials)
        t.diffs[pq] = m;
    return t;
}

Page page(const CochainComplex& k, const Filtration& f, int r)
{
    if (r < 0)
        throw ValidationError("page index must be nonnegative");
    Page out;
    out.r = r;
    out.p_lo = f.p_min();
    out.p_hi = f.p_max();
    out.n_lo = k.degree_min();
    out.n_hi = k.degree_max();
    if (out.n_hi < out.n_lo)
        return out;

    // Z_s^{p,q} = F^p K^n ∩ d^{-1}(F^{p+s} K^{n+1}), memoized on (p, n, s).
    std::map<std::tuple<int, int, int>, Subgroup> memo;
    auto zr = [&](int p, int n, int s) -> const Subgroup& {
        auto key = std::make_tuple(p, n, s);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        Subgroup z = intersect(f.level(k, p, n), preimage(k.differential(n), f.level(k, p + s, n + 1)));
        return memo.emplace(key, std::move(z)).first->second;
    };

    for (int p = out.p_lo; p <= out.p_hi; ++p) {
        for (int n = out.n_lo; n <= out.n_hi; ++n) {
            int q = n - p;
            if (r == 0) {
                out.entries.emplace(PQ{p, q},
                                    Subquotient(f.level(k, p, n), f.level(k, p + 1, n)));
                continue;
            }
            Subgroup z = zr(p, n, r);
            Subgroup b = sum(zr(p + 1, n, r - 1), image(k.differential(n - 1), zr(p - r + 1, n - 1, r - 1)));
            out.entries.emplace(PQ{p, q}, Subquotient(std::move(z), std::move(b)));
        }
    }

    const int dp = (r == 0) ? 0 : r;
    const int dn = 1;
    for (auto& [pq, e] : out.entries) {
        int n = pq.first + pq.second;
        PQ tgt{pq.first + dp, pq.second - dp + dn};
        auto it = out.entries.find(tgt);
        if (it == out.entries.end())
            continue;
        if (e.group().trivial() && it->second.group().trivial())
            continue;
        out.differentials.emplace(pq, induced_map(k.differential(n), e, it->second));
    }

    // d_r ∘ d_r = 0 (modulo the target invariants)
    for (const auto& [pq, m] : out.differentials) {
        PQ tgt{pq.first + dp, pq.second - dp + dn};
        auto next = out.differentials.find(tgt);
        if (next == out.differentials.end())
            continue;
        PQ tgt2{tgt.first + dp, tgt.second - dp + dn};
        if (!hom_is_zero(IntMat(next->second * m), out.group(tgt2)))
            throw ValidationError("page differential does not square to zero");
    }
    return out;
}

int stabilization_index(const Filtration& f) { return f.p_max() - f.p_min() + 2; }

Filtration dec_filtration(const CochainComplex& k, const Filtration& f)
{
    const int n_lo = k.degree_min(), n_hi = k.degree_max();
    if (n_hi < n_lo)
        throw ValidationError("dec: empty complex");
    const int p_lo = f.p_min() - n_hi - 1;
    const int p_hi = f.p_max() - n_lo + 1;
    std::vector<std::vector<IntMat>> levels;
    for (int p = p_lo; p <= p_hi; ++p) {
        std::vector<IntMat> row;
        for (int n = n_lo; n <= n_hi; ++n) {
            Subgroup s = intersect(f.level(k, p + n, n),
                                   preimage(k.differential(n), f.level(k, p + n + 1, n + 1)));
            row.push_back(s.gens);
        }
        levels.push_back(std::move(row));
    }
    return Filtration(k, p_lo, std::move(levels));
}

namespace {

struct DiffInvariants {
    Index rank = 0;
    FgAbGroup coker;
    FgAbGroup ker;
};

DiffInvariants diff_invariants(const PageTable& t, PQ pq, int dp, int dq)
{
    PQ tgt{pq.first + dp, pq.second + dq};
    FgAbGroup src = t.group(pq), dst = t.group(tgt);
    auto it = t.diffs.find(pq);
    IntMat m = (it != t.diffs.end()) ? it->second : IntMat::Zero(dst.coords(), src.coords());
    DiffInvariants out;
    out.rank = hom_rank(m, src, dst);
    out.coker = hom_cokernel(m, src, dst);
    out.ker = hom_kernel(m, src, dst);
    return out;
}

}  // namespace

DecShiftReport verify_dec_shift(const CochainComplex& k, const Filtration& f, int r_max,
                                bool rational)
{
    DecShiftReport rep;
    Filtration dec = dec_filtration(k, f);
    for (int r = 1; r <= r_max; ++r) {
        PageTable left = table_of(page(k, dec, r));
        PageTable right = table_of(page(k, f, r + 1));

        // union of supports, seen from the left side's indices
        std::vector<PQ> probe;
        for (PQ pq : left.support())
            probe.push_back(pq);
        for (PQ ab : right.support())
            probe.push_back(PQ{-ab.second, ab.first + 2 * ab.second});
        std::sort(probe.begin(), probe.end());
        probe.erase(std::unique(probe.begin(), probe.end()), probe.end());

        for (PQ pq : probe) {
            PQ ab{2 * pq.first + pq.second, -pq.first};
            if (!groups_match(left.group(pq), right.group(ab), rational)) {
                rep.pass = false;
                rep.r = r;
                rep.at = pq;
                rep.what = "entry " + left.group(pq).str() + " vs " + right.group(ab).str();
                return rep;
            }
            DiffInvariants dl = diff_invariants(left, pq, r, -r + 1);
            DiffInvariants dr = diff_invariants(right, ab, r + 1, -r);
            bool ok = rational ? (dl.rank == dr.rank)
                               : (dl.rank == dr.rank && dl.coker == dr.coker && dl.ker == dr.ker);
            if (!ok) {
                rep.pass = false;
                rep.r = r;
                rep.at = pq;
                rep.what = "differential invariants differ";
                return rep;
            }
        }
    }
    return rep;
}

FgAbGroup Abutment::group(int n) const
{
    auto it = h_group.find(n);
    return it == h_group.end() ? FgAbGroup{} : it->second;
}

FgAbGroup Abutment::graded_piece(int p, int n) const
{
    auto it = graded.find({p, n});
    return it == graded.end() ? FgAbGroup{} : it->second;
}

Abutment abutment(const CochainComplex& k, const Filtration& f)
{
    Abutment out;
    out.p_lo = f.p_min();
    out.p_hi = f.p_max() + 1;
    for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
        Subquotient h = k.cohomology_data(n);
        IntMat rel = relation_matrix(h.group());
        Subgroup cocy = k.cocycles(n);

        for (int p = out.p_lo; p <= out.p_hi; ++p) {
            Subgroup filtered_cocycles = intersect(f.level(k, p, n), cocy);
            IntMat gens = h.reduce_columns(basis(filtered_cocycles));
            out.level.emplace(std::make_pair(p, n), Subgroup(h.group().coords(), gens));
        }
        for (int p = out.p_lo; p <= out.p_hi; ++p) {
            Subgroup lp = out.level.at({p, n});
            Subgroup lnext = (p + 1 <= out.p_hi) ? out.level.at({p + 1, n})
                                                 : zero_group(h.group().coords());
            Subquotient gr(Subgroup(lp.ambient, hcat(lp.gens, rel)),
                           Subgroup(lnext.ambient, hcat(lnext.gens, rel)));
            out.graded.emplace(std::make_pair(p, n), gr.group());
        }
        out.h_group.emplace(n, h.group());
        out.h.emplace(n, std::move(h));
    }

    // Stabilization: E_r for r past the filtration width equals the graded
    // pieces of the induced filtration, and the next page repeats it.
    int r_stab = stabilization_index(f);
    PageTable einf = table_of(page(k, f, r_stab));
    PageTable enext = table_of(page(k, f, r_stab + 1));
    for (const auto& [pq, g] : einf.groups) {
        if (enext.group(pq) != g)
            throw Error("abutment: pages did not stabilize at the predicted index");
        if (out.graded_piece(pq.first, pq.first + pq.second) != g)
            throw Error("abutment: stable page does not match the graded pieces");
    }
    return out;
}

std::map<PQ, IntMat> map_of_pages(const std::map<int, IntMat>& phi, const CochainComplex& k,
                                  const Filtration& f, const CochainComplex& k2,
                                  const Filtration& f2, int r)
{
    auto phi_at = [&](int n) -> IntMat {
        auto it = phi.find(n);
        if (it != phi.end()) {
            if (it->second.rows() != k2.dim(n) || it->second.cols() != k.dim(n))
                throw ValidationError("map_of_pages: component shape mismatch at degree " +
                                      std::to_string(n));
            return it->second;
        }
        return IntMat::Zero(k2.dim(n), k.dim(n));
    };

    for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
        IntMat lhs = phi_at(n + 1) * k.differential(n);
        IntMat rhs = k2.differential(n) * phi_at(n);
        if (!contains(k2.relation_span(n + 1), Subgroup(k2.dim(n + 1), IntMat(lhs - rhs))))
            throw ValidationError("map_of_pages: not a chain map at degree " + std::to_string(n));
        if (!contains(k2.relation_span(n), image(phi_at(n), k.relation_span(n))))
            throw ValidationError("map_of_pages: relations not preserved at degree " +
                                  std::to_string(n));
        for (int p = std::min(f.p_min(), f2.p_min()); p <= std::max(f.p_max(), f2.p_max()); ++p) {
            if (!contains(f2.level(k2, p, n), image(phi_at(n), f.level(k, p, n))))
                throw NotFiltered("map does not preserve filtration level at " + at(p, n));
        }
    }

    Page pg = page(k, f, r);
    Page pg2 = page(k2, f2, r);
    std::map<PQ, IntMat> out;
    for (const auto& [pq, e] : pg.entries) {
        int n = pq.first + pq.second;
        auto it = pg2.entries.find(pq);
        if (it == pg2.entries.end()) {
            out.emplace(pq, IntMat::Zero(0, e.group().coords()));
            continue;
        }
        out.emplace(pq, induced_map(phi_at(n), e, it->second));
    }
    return out;
}

LevelComplex level_complex(const CochainComplex& k, const Filtration& f, int p)
{
    LevelComplex out;
    std::vector<Index> dims;
    std::vector<IntMat> diffs, rels;
    std::vector<IntMat> bases;
    for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
        IntMat b = basis(f.level(k, p, n));
        dims.push_back(b.cols());
        rels.push_back(basis(preimage(b, k.relation_span(n))));
        bases.push_back(std::move(b));
    }
    for (int n = k.degree_min(); n < k.degree_max(); ++n) {
        size_t i = static_cast<size_t>(n - k.degree_min());
        auto x = solve_columns(bases[i + 1], IntMat(k.differential(n) * bases[i]));
        if (!x)
            throw Error("level complex: differential does not restrict to the level");
        diffs.push_back(std::move(*x));
    }
    out.complex = CochainComplex(k.degree_min(), std::move(dims), std::move(diffs), std::move(rels));
    out.inclusion = std::move(bases);
    return out;
}

}  // namespace specseq
