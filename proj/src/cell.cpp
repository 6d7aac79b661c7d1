#include "specseq/cell.hpp"

#include <algorithm>
#include <sstream>

namespace specseq {

CellComplex::CellComplex(const std::vector<CellSpec>& cells)
{
    for (const CellSpec& c : cells) {
        if (by_id_.count(c.id))
            throw ValidationError("duplicate cell id '" + c.id + "'");
        by_id_.emplace(c.id, static_cast<Index>(ids_.size()));
        ids_.push_back(c.id);
        dims_.push_back(c.dim);
        dimension_ = std::max(dimension_, c.dim);
    }
    faces_.resize(ids_.size());
    cofaces_.resize(ids_.size());
    for (const CellSpec& c : cells) {
        Index me = by_id_.at(c.id);
        for (const auto& [fid, sign] : c.faces) {
            auto it = by_id_.find(fid);
            if (it == by_id_.end())
                throw ValidationError("cell '" + c.id + "' lists unknown face '" + fid + "'");
            if (sign == 0)
                continue;
            faces_[static_cast<size_t>(me)].emplace_back(it->second, sign);
            cofaces_[static_cast<size_t>(it->second)].emplace_back(me, sign);
        }
    }

    // reflexive-transitive closure of the covering relation
    const size_t n = ids_.size();
    leq_.assign(n, std::vector<bool>(n, false));
    std::vector<Index> order(n);
    for (size_t i = 0; i < n; ++i)
        order[i] = static_cast<Index>(i);
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return cell_dim(a) > cell_dim(b); });
    for (Index c : order) {
        leq_[static_cast<size_t>(c)][static_cast<size_t>(c)] = true;
        for (const auto& [cf, sign] : cofaces_[static_cast<size_t>(c)])
            for (size_t j = 0; j < n; ++j)
                if (leq_[static_cast<size_t>(cf)][j])
                    leq_[static_cast<size_t>(c)][j] = true;
    }
    validate();
}

void CellComplex::validate() const
{
    for (Index c = 0; c < size(); ++c) {
        for (const auto& [f, sign] : faces_[static_cast<size_t>(c)]) {
            (void)sign;
            if (cell_dim(f) != cell_dim(c) - 1)
                throw ValidationError("incidence between non-consecutive dimensions: '" +
                                      cell_id(f) + "' < '" + cell_id(c) + "'");
        }
    }
    // For each pair with dimension gap two the signed incidences cancel.
    for (Index t = 0; t < size(); ++t) {
        std::map<Index, Int> acc;
        std::map<Index, Index> sample_mid;
        for (const auto& [mid, s1] : faces_[static_cast<size_t>(t)])
            for (const auto& [bot, s2] : faces_[static_cast<size_t>(mid)]) {
                acc[bot] += s1 * s2;
                sample_mid[bot] = mid;
            }
        for (const auto& [bot, total] : acc)
            if (total != 0)
                throw ValidationError("incidence identity fails for the triple ('" +
                                      cell_id(bot) + "' < '" + cell_id(sample_mid[bot]) +
                                      "' < '" + cell_id(t) + "'): signed sum " + total.str());
    }
}

Index CellComplex::index_of(const std::string& id) const
{
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw ValidationError("unknown cell id '" + id + "'");
    return it->second;
}

const std::vector<std::pair<Index, Int>>& CellComplex::faces(Index c) const
{
    return faces_[static_cast<size_t>(c)];
}

const std::vector<std::pair<Index, Int>>& CellComplex::cofaces(Index c) const
{
    return cofaces_[static_cast<size_t>(c)];
}

bool CellComplex::leq(Index a, Index b) const
{
    return leq_[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

std::vector<Index> CellComplex::cells_of_dim(int k) const
{
    std::vector<Index> out;
    for (Index c = 0; c < size(); ++c)
        if (cell_dim(c) == k)
            out.push_back(c);
    return out;
}

bool CellComplex::is_downward_closed(const std::vector<bool>& s) const
{
    for (Index c = 0; c < size(); ++c)
        if (s[static_cast<size_t>(c)])
            for (const auto& [f, sign] : faces(c)) {
                (void)sign;
                if (!s[static_cast<size_t>(f)])
                    return false;
            }
    return true;
}

bool CellComplex::is_upward_closed(const std::vector<bool>& s) const
{
    for (Index c = 0; c < size(); ++c)
        if (s[static_cast<size_t>(c)])
            for (const auto& [cf, sign] : cofaces(c)) {
                (void)sign;
                if (!s[static_cast<size_t>(cf)])
                    return false;
            }
    return true;
}

std::vector<bool> CellComplex::up_closure(Index c) const
{
    std::vector<bool> out(static_cast<size_t>(size()), false);
    for (Index j = 0; j < size(); ++j)
        out[static_cast<size_t>(j)] = leq(c, j);
    return out;
}

FgAbGroup stalk_group(const Stalk& s) { return cokernel(s.relations); }

CellularSheaf::CellularSheaf(const CellComplex& x, std::vector<Stalk> stalks,
                             std::map<std::pair<Index, Index>, IntMat> restrictions)
    : x_(&x), stalks_(std::move(stalks))
{
    if (static_cast<Index>(stalks_.size()) != x.size())
        throw ValidationError("sheaf: one stalk per cell required");
    for (Stalk& s : stalks_) {
        if (s.relations.size() == 0)
            s.relations = IntMat(s.gens, 0);
        if (s.relations.rows() != s.gens)
            throw ValidationError("sheaf: relation matrix shape mismatch");
    }
    validate(restrictions);
}

CellularSheaf CellularSheaf::constant(const CellComplex& x, Index gens)
{
    std::vector<Stalk> stalks(static_cast<size_t>(x.size()), Stalk(gens));
    std::map<std::pair<Index, Index>, IntMat> restr;
    for (Index c = 0; c < x.size(); ++c)
        for (const auto& [cf, sign] : x.cofaces(c)) {
            (void)sign;
            restr.emplace(std::make_pair(c, cf), IntMat::Identity(gens, gens));
        }
    return CellularSheaf(x, std::move(stalks), std::move(restr));
}

void CellularSheaf::validate(const std::map<std::pair<Index, Index>, IntMat>& cover_maps)
{
    const CellComplex& x = *x_;
    // covering restrictions: shape, presence, respect for relations
    std::map<std::pair<Index, Index>, IntMat> covers;
    for (Index c = 0; c < x.size(); ++c) {
        for (const auto& [cf, sign] : x.cofaces(c)) {
            (void)sign;
            const Stalk& src = stalk(c);
            const Stalk& dst = stalk(cf);
            auto it = cover_maps.find({c, cf});
            IntMat m;
            if (it == cover_maps.end()) {
                if (src.gens != 0 && dst.gens != 0)
                    throw ValidationError("sheaf: missing restriction for pair ('" +
                                          x.cell_id(c) + "', '" + x.cell_id(cf) + "')");
                m = IntMat::Zero(dst.gens, src.gens);
            }
            else {
                m = it->second;
            }
            if (m.rows() != dst.gens || m.cols() != src.gens)
                throw ValidationError("sheaf: restriction shape mismatch for pair ('" +
                                      x.cell_id(c) + "', '" + x.cell_id(cf) + "')");
            if (!contains(Subgroup(dst.gens, dst.relations), image(m, Subgroup(src.gens, src.relations))))
                throw ValidationError("sheaf: restriction does not respect relations at ('" +
                                      x.cell_id(c) + "', '" + x.cell_id(cf) + "')");
            covers.emplace(std::make_pair(c, cf), std::move(m));
        }
    }

    // composite along the order, by increasing dimension gap; all cover
    // chains between a pair must agree modulo the target relations
    composite_.clear();
    for (Index c = 0; c < x.size(); ++c)
        composite_.emplace(std::make_pair(c, c),
                           IntMat(IntMat::Identity(stalk(c).gens, stalk(c).gens)));
    for (int gap = 1; gap <= x.dimension(); ++gap) {
        for (Index a = 0; a < x.size(); ++a) {
            for (Index b = 0; b < x.size(); ++b) {
                if (x.cell_dim(b) - x.cell_dim(a) != gap || !x.leq(a, b))
                    continue;
                bool have = false;
                IntMat value;
                for (const auto& [mid, sign] : x.faces(b)) {
                    (void)sign;
                    if (!x.leq(a, mid))
                        continue;
                    IntMat cand = covers.at({mid, b}) * composite_.at({a, mid});
                    if (!have) {
                        value = cand;
                        have = true;
                    }
                    else if (!contains(Subgroup(stalk(b).gens, stalk(b).relations),
                                       Subgroup(stalk(b).gens, IntMat(cand - value))))
                        throw ValidationError("sheaf: inconsistent composites between ('" +
                                              x.cell_id(a) + "', '" + x.cell_id(b) + "')");
                }
                if (!have)
                    throw ValidationError("sheaf: broken face chain between ('" + x.cell_id(a) +
                                          "', '" + x.cell_id(b) + "')");
                composite_.emplace(std::make_pair(a, b), std::move(value));
            }
        }
    }
}

const IntMat& CellularSheaf::restriction(Index a, Index b) const
{
    auto it = composite_.find({a, b});
    if (it == composite_.end())
        throw ValidationError("restriction requested for incomparable cells");
    return it->second;
}

FilteredSpace::FilteredSpace(const CellComplex& x, std::vector<std::vector<bool>> stages)
    : x_(&x), stages_(std::move(stages))
{
    if (stages_.empty())
        throw ValidationError("filtered space: at least one stage required");
    for (size_t a = 0; a < stages_.size(); ++a) {
        if (static_cast<Index>(stages_[a].size()) != x.size())
            throw ValidationError("filtered space: stage size mismatch");
        if (!x.is_downward_closed(stages_[a]))
            throw ValidationError("filtered space: stage " + std::to_string(a) +
                                  " is not closed");
        if (a > 0)
            for (Index c = 0; c < x.size(); ++c)
                if (stages_[a - 1][static_cast<size_t>(c)] && !stages_[a][static_cast<size_t>(c)])
                    throw ValidationError("filtered space: stages are not increasing");
    }
    for (Index c = 0; c < x.size(); ++c)
        if (!stages_.back()[static_cast<size_t>(c)])
            throw ValidationError("filtered space: chain is not exhaustive");
}

FilteredSpace FilteredSpace::skeleta(const CellComplex& x)
{
    int top = std::max(0, x.dimension());
    std::vector<std::vector<bool>> stages;
    for (int a = 0; a <= top; ++a) {
        std::vector<bool> s(static_cast<size_t>(x.size()), false);
        for (Index c = 0; c < x.size(); ++c)
            s[static_cast<size_t>(c)] = x.cell_dim(c) <= a;
        stages.push_back(std::move(s));
    }
    return FilteredSpace(x, std::move(stages));
}

FilteredSpace FilteredSpace::from_levels(const CellComplex& x,
                                         const std::map<std::string, int>& levels)
{
    int top = 0;
    std::vector<int> lvl(static_cast<size_t>(x.size()), 0);
    for (Index c = 0; c < x.size(); ++c) {
        auto it = levels.find(x.cell_id(c));
        if (it == levels.end())
            throw ValidationError("filtration level missing for cell '" + x.cell_id(c) + "'");
        if (it->second < 0)
            throw ValidationError("filtration level of '" + x.cell_id(c) + "' is negative");
        lvl[static_cast<size_t>(c)] = it->second;
        top = std::max(top, it->second);
    }
    std::vector<std::vector<bool>> stages;
    for (int a = 0; a <= top; ++a) {
        std::vector<bool> s(static_cast<size_t>(x.size()), false);
        for (Index c = 0; c < x.size(); ++c)
            s[static_cast<size_t>(c)] = lvl[static_cast<size_t>(c)] <= a;
        stages.push_back(std::move(s));
    }
    return FilteredSpace(x, std::move(stages));
}

std::vector<bool> FilteredSpace::stage(int a) const
{
    if (a < 0)
        return std::vector<bool>(static_cast<size_t>(x_->size()), false);
    if (a > top_stage())
        a = top_stage();
    return stages_[static_cast<size_t>(a)];
}

std::vector<bool> FilteredSpace::stratum(int a) const
{
    std::vector<bool> hi = stage(a), lo = stage(a - 1);
    for (size_t i = 0; i < hi.size(); ++i)
        hi[i] = hi[i] && !lo[i];
    return hi;
}

Subgroup SheafCochains::supported_on(const CellComplex& x, int degree,
                                     const std::vector<bool>& cells) const
{
    Index total = complex.dim(degree);
    std::vector<Index> cols;
    for (Index c = 0; c < x.size(); ++c) {
        if (x.cell_dim(c) != degree || !cells[static_cast<size_t>(c)])
            continue;
        auto [off, len] = spans[static_cast<size_t>(c)];
        for (Index j = 0; j < len; ++j)
            cols.push_back(off + j);
    }
    IntMat gens = IntMat::Zero(total, static_cast<Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        gens(cols[j], static_cast<Index>(j)) = 1;
    return Subgroup(total, std::move(gens));
}

SheafCochains cochain_complex(const CellComplex& x, const CellularSheaf& f)
{
    SheafCochains out;
    int top = std::max(0, x.dimension());
    std::vector<Index> dims(static_cast<size_t>(top) + 1, 0);
    out.spans.assign(static_cast<size_t>(x.size()), {0, 0});
    for (Index c = 0; c < x.size(); ++c) {
        int k = x.cell_dim(c);
        out.spans[static_cast<size_t>(c)] = {dims[static_cast<size_t>(k)], f.stalk(c).gens};
        dims[static_cast<size_t>(k)] += f.stalk(c).gens;
    }

    std::vector<IntMat> rels(static_cast<size_t>(top) + 1);
    for (int k = 0; k <= top; ++k) {
        Index cols = 0;
        for (Index c : x.cells_of_dim(k))
            cols += f.stalk(c).relations.cols();
        IntMat r = IntMat::Zero(dims[static_cast<size_t>(k)], cols);
        Index at = 0;
        for (Index c : x.cells_of_dim(k)) {
            const Stalk& s = f.stalk(c);
            auto [off, len] = out.spans[static_cast<size_t>(c)];
            r.block(off, at, len, s.relations.cols()) = s.relations;
            at += s.relations.cols();
        }
        rels[static_cast<size_t>(k)] = std::move(r);
    }

    std::vector<IntMat> diffs;
    for (int k = 0; k < top; ++k) {
        IntMat d = IntMat::Zero(dims[static_cast<size_t>(k) + 1], dims[static_cast<size_t>(k)]);
        for (Index c : x.cells_of_dim(k)) {
            auto [soff, slen] = out.spans[static_cast<size_t>(c)];
            if (slen == 0)
                continue;
            for (const auto& [cf, sign] : x.cofaces(c)) {
                auto [toff, tlen] = out.spans[static_cast<size_t>(cf)];
                if (tlen == 0)
                    continue;
                d.block(toff, soff, tlen, slen) += sign * f.restriction(c, cf);
            }
        }
        diffs.push_back(std::move(d));
    }

    out.complex = CochainComplex(0, std::move(dims), std::move(diffs), std::move(rels));
    return out;
}

CellularSheaf restrict_support(const CellularSheaf& f, const std::vector<bool>& keep)
{
    const CellComplex& x = f.space();
    std::vector<Stalk> stalks;
    stalks.reserve(static_cast<size_t>(x.size()));
    for (Index c = 0; c < x.size(); ++c)
        stalks.push_back(keep[static_cast<size_t>(c)] ? f.stalk(c) : Stalk(0));
    std::map<std::pair<Index, Index>, IntMat> restr;
    for (Index c = 0; c < x.size(); ++c) {
        if (!keep[static_cast<size_t>(c)])
            continue;
        for (const auto& [cf, sign] : x.cofaces(c)) {
            (void)sign;
            if (keep[static_cast<size_t>(cf)])
                restr.emplace(std::make_pair(c, cf), f.restriction(c, cf));
        }
    }
    return CellularSheaf(x, std::move(stalks), std::move(restr));
}

CellularSheaf extend_by_zero(const CellularSheaf& f, const std::vector<bool>& open_set)
{
    if (!f.space().is_upward_closed(open_set))
        throw NotOpen("extension by zero requires an upward-closed cell set");
    return restrict_support(f, open_set);
}

std::pair<SheafCochains, Filtration> skeleta_filtration(const FilteredSpace& xf,
                                                        const CellularSheaf& f)
{
    const CellComplex& x = xf.space();
    SheafCochains c = cochain_complex(x, f);
    std::vector<std::vector<IntMat>> levels;
    for (int a = 0; a <= xf.top_stage(); ++a) {
        std::vector<bool> off = xf.stage(a - 1);
        off.flip();
        std::vector<IntMat> row;
        for (int n = c.complex.degree_min(); n <= c.complex.degree_max(); ++n)
            row.push_back(c.supported_on(x, n, off).gens);
        levels.push_back(std::move(row));
    }
    Filtration filt(c.complex, 0, std::move(levels));
    return {std::move(c), std::move(filt)};
}

std::string CellularityReport::str() const
{
    if (cellular)
        return "cellular";
    std::ostringstream os;
    os << "not cellular: H^" << i << " of stratum " << a << " is " << group.str();
    return os.str();
}

CellularityReport cellularity_check(const FilteredSpace& yf, const CellularSheaf& g)
{
    for (int a = 0; a <= yf.top_stage(); ++a) {
        CellularSheaf ga = restrict_support(g, yf.stratum(a));
        SheafCochains c = cochain_complex(yf.space(), ga);
        for (int i = c.complex.degree_min(); i <= c.complex.degree_max(); ++i) {
            if (i == a)
                continue;
            FgAbGroup h = c.complex.cohomology(i);
            if (!h.trivial())
                return {false, a, i, h};
        }
    }
    return {};
}

std::map<int, FgAbGroup> cellular_cohomology_via_e1(const FilteredSpace& yf,
                                                    const CellularSheaf& f)
{
    CellularityReport rep = cellularity_check(yf, f);
    if (!rep.cellular)
        throw NotCellular(rep.str());

    auto [c, filt] = skeleta_filtration(yf, f);
    Page e1 = page(c.complex, filt, 1);
    std::map<int, FgAbGroup> out;
    for (int a = 0; a <= yf.top_stage(); ++a) {
        FgAbGroup left = e1.group({a - 1, 0});
        FgAbGroup mid = e1.group({a, 0});
        FgAbGroup right = e1.group({a + 1, 0});
        IntMat d_in = e1.diff({a - 1, 0});
        IntMat d_out = e1.diff({a, 0});
        FgAbGroup h = homology_at(d_in, d_out, left, mid, right);
        if (h != c.complex.cohomology(a))
            throw Error("cellular cohomology via E_1 disagrees with the direct computation");
        out[a] = h;
    }
    // degrees past the filtration length have no row entries
    for (int n = yf.top_stage() + 1; n <= c.complex.degree_max(); ++n) {
        FgAbGroup h = c.complex.cohomology(n);
        if (!h.trivial())
            throw Error("cellular cohomology via E_1 missed a nonzero degree");
        out[n] = h;
    }
    return out;
}

OpenCohomology open_cohomology(const CellularSheaf& f, const std::vector<bool>& up_set)
{
    const CellComplex& x = f.space();
    OpenCohomology out;
    int top = std::max(0, x.dimension());
    out.nerve.chains.resize(static_cast<size_t>(top) + 1);
    out.nerve.chain_pos.resize(static_cast<size_t>(top) + 1);
    out.nerve.offsets.resize(static_cast<size_t>(top) + 1);

    // strictly increasing chains inside the up-set, by length
    std::vector<Index> members;
    for (Index c = 0; c < x.size(); ++c)
        if (up_set[static_cast<size_t>(c)])
            members.push_back(c);
    std::vector<std::vector<Index>> frontier;
    for (Index c : members)
        frontier.push_back({c});
    for (int k = 0; k <= top && !frontier.empty(); ++k) {
        auto& level = out.nerve.chains[static_cast<size_t>(k)];
        level = frontier;
        frontier.clear();
        for (const auto& chain : level) {
            for (Index nx : members) {
                if (nx != chain.back() && x.leq(chain.back(), nx)) {
                    std::vector<Index> longer = chain;
                    longer.push_back(nx);
                    frontier.push_back(std::move(longer));
                }
            }
        }
    }

    std::vector<Index> dims(static_cast<size_t>(top) + 1, 0);
    for (int k = 0; k <= top; ++k) {
        auto& level = out.nerve.chains[static_cast<size_t>(k)];
        std::sort(level.begin(), level.end());
        Index off = 0;
        for (size_t i = 0; i < level.size(); ++i) {
            out.nerve.chain_pos[static_cast<size_t>(k)][level[i]] = static_cast<Index>(i);
            out.nerve.offsets[static_cast<size_t>(k)].push_back(off);
            off += f.stalk(level[i].back()).gens;
        }
        dims[static_cast<size_t>(k)] = off;
    }

    std::vector<IntMat> rels(static_cast<size_t>(top) + 1);
    for (int k = 0; k <= top; ++k) {
        const auto& level = out.nerve.chains[static_cast<size_t>(k)];
        Index cols = 0;
        for (const auto& chain : level)
            cols += f.stalk(chain.back()).relations.cols();
        IntMat r = IntMat::Zero(dims[static_cast<size_t>(k)], cols);
        Index at = 0;
        for (size_t i = 0; i < level.size(); ++i) {
            const Stalk& s = f.stalk(level[i].back());
            r.block(out.nerve.offsets[static_cast<size_t>(k)][i], at, s.gens,
                    s.relations.cols()) = s.relations;
            at += s.relations.cols();
        }
        rels[static_cast<size_t>(k)] = std::move(r);
    }

    std::vector<IntMat> diffs;
    for (int k = 0; k < top; ++k) {
        const auto& src_level = out.nerve.chains[static_cast<size_t>(k)];
        const auto& tgt_level = out.nerve.chains[static_cast<size_t>(k) + 1];
        IntMat d = IntMat::Zero(dims[static_cast<size_t>(k) + 1], dims[static_cast<size_t>(k)]);
        for (size_t t = 0; t < tgt_level.size(); ++t) {
            const auto& chain = tgt_level[t];
            Index toff = out.nerve.offsets[static_cast<size_t>(k) + 1][t];
            Index tlen = f.stalk(chain.back()).gens;
            for (size_t drop = 0; drop < chain.size(); ++drop) {
                std::vector<Index> face = chain;
                face.erase(face.begin() + static_cast<long>(drop));
                auto it = out.nerve.chain_pos[static_cast<size_t>(k)].find(face);
                if (it == out.nerve.chain_pos[static_cast<size_t>(k)].end())
                    continue;
                Index soff = out.nerve.offsets[static_cast<size_t>(k)][it->second];
                Int sgn = (drop % 2 == 0) ? 1 : -1;
                if (drop + 1 == chain.size()) {
                    // dropping the top cell composes with the restriction
                    Index slen = f.stalk(face.back()).gens;
                    d.block(toff, soff, tlen, slen) +=
                        sgn * f.restriction(face.back(), chain.back());
                }
                else {
                    d.block(toff, soff, tlen, tlen) += sgn * IntMat::Identity(tlen, tlen);
                }
            }
        }
        diffs.push_back(std::move(d));
    }

    out.complex = CochainComplex(0, std::move(dims), std::move(diffs), std::move(rels));
    for (int q = 0; q <= top; ++q)
        out.h.push_back(out.complex.cohomology_data(q));
    return out;
}

FgAbGroup OpenCohomology::group(int q) const
{
    if (q < 0 || q >= static_cast<int>(h.size()))
        return {};
    return h[static_cast<size_t>(q)].group();
}

std::vector<IntMat> nerve_restriction(const CellularSheaf& f, const NerveData& big,
                                      const NerveData& small)
{
    std::vector<IntMat> out;
    size_t degs = big.chains.size();
    for (size_t k = 0; k < degs; ++k) {
        Index big_dim = 0, small_dim = 0;
        for (size_t i = 0; i < big.chains[k].size(); ++i)
            big_dim += f.stalk(big.chains[k][i].back()).gens;
        for (size_t i = 0; i < small.chains[k].size(); ++i)
            small_dim += f.stalk(small.chains[k][i].back()).gens;
        IntMat p = IntMat::Zero(small_dim, big_dim);
        for (size_t i = 0; i < small.chains[k].size(); ++i) {
            const auto& chain = small.chains[k][i];
            auto it = big.chain_pos[k].find(chain);
            if (it == big.chain_pos[k].end())
                throw Error("nerve restriction: chain missing from the larger nerve");
            Index len = f.stalk(chain.back()).gens;
            p.block(small.offsets[k][i], big.offsets[k][it->second], len, len) =
                IntMat::Identity(len, len);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace specseq
