#include "specseq/couple.hpp"

#include <sstream>

namespace specseq {

namespace {

PQ add(PQ a, PQ b) { return {a.first + b.first, a.second + b.second}; }
PQ sub(PQ a, PQ b) { return {a.first - b.first, a.second - b.second}; }

std::string pq_str(PQ pq)
{
    std::ostringstream os;
    os << "(" << pq.first << "," << pq.second << ")";
    return os.str();
}

FgAbGroup lookup(const std::map<PQ, FgAbGroup>& m, PQ pq)
{
    auto it = m.find(pq);
    return it == m.end() ? FgAbGroup{} : it->second;
}

IntMat lookup_map(const std::map<PQ, IntMat>& m, PQ pq, Index rows, Index cols)
{
    auto it = m.find(pq);
    if (it != m.end())
        return it->second;
    return IntMat::Zero(rows, cols);
}

// im(f) and ker(g) at the middle group of a -f-> b -g-> c, as subgroups of
// b's coordinate space (relations folded in).
Subgroup image_subgroup(const IntMat& f, const FgAbGroup& b)
{
    return Subgroup(b.coords(), hcat(f, relation_matrix(b)));
}

Subgroup kernel_subgroup(const IntMat& g, const FgAbGroup& b, const FgAbGroup& c)
{
    (void)b;
    return preimage(g, Subgroup(c.coords(), relation_matrix(c)));
}

}  // namespace

FgAbGroup ExactCouple::d_group(PQ pq) const { return lookup(d_groups, pq); }
FgAbGroup ExactCouple::e_group(PQ pq) const { return lookup(e_groups, pq); }

IntMat ExactCouple::alpha_at(PQ pq) const
{
    return lookup_map(alpha, pq, d_group(add(pq, alpha_deg)).coords(), d_group(pq).coords());
}

IntMat ExactCouple::beta_at(PQ pq) const
{
    return lookup_map(beta, pq, e_group(add(pq, beta_deg)).coords(), d_group(pq).coords());
}

IntMat ExactCouple::gamma_at(PQ pq) const
{
    return lookup_map(gamma, pq, d_group(add(pq, gamma_deg)).coords(), e_group(pq).coords());
}

IntMat ExactCouple::diff_at(PQ pq) const
{
    return beta_at(add(pq, gamma_deg)) * gamma_at(pq);
}

std::string exactness_failure(const ExactCouple& c)
{
    // at D^{pq}: alpha from D^{pq - alpha_deg}, beta out of D^{pq}
    for (const auto& [pq, g] : c.d_groups) {
        if (pq.first > c.check_p_max)
            continue;
        Subgroup img = image_subgroup(c.alpha_at(sub(pq, c.alpha_deg)), g);
        Subgroup ker = kernel_subgroup(c.beta_at(pq), g, c.e_group(add(pq, c.beta_deg)));
        if (!equal_span(img, ker))
            return "exactness fails at D" + pq_str(pq) + " between alpha and beta";
    }
    // at E^{pq}: beta from D^{pq - beta_deg}, gamma out
    for (const auto& [pq, g] : c.e_groups) {
        if (pq.first > c.check_p_max)
            continue;
        Subgroup img = image_subgroup(c.beta_at(sub(pq, c.beta_deg)), g);
        Subgroup ker = kernel_subgroup(c.gamma_at(pq), g, c.d_group(add(pq, c.gamma_deg)));
        if (!equal_span(img, ker))
            return "exactness fails at E" + pq_str(pq) + " between beta and gamma";
    }
    // at D^{pq}: gamma from E^{pq - gamma_deg}, alpha out. When the couple
    // was cut out of a constantly continuing window, the alpha leaving the
    // cut column points at an unstored nonzero group; skip that column.
    for (const auto& [pq, g] : c.d_groups) {
        if (pq.first < c.check_p_min || pq.first > c.check_p_max)
            continue;
        Subgroup img = image_subgroup(c.gamma_at(sub(pq, c.gamma_deg)), g);
        Subgroup ker = kernel_subgroup(c.alpha_at(pq), g, c.d_group(add(pq, c.alpha_deg)));
        if (!equal_span(img, ker))
            return "exactness fails at D" + pq_str(pq) + " between gamma and alpha";
    }
    return {};
}

ExactCouple derive(const ExactCouple& c)
{
    std::string fail = exactness_failure(c);
    if (!fail.empty())
        throw NotExact(fail);

    ExactCouple out;
    out.alpha_deg = c.alpha_deg;
    out.gamma_deg = c.gamma_deg;
    out.beta_deg = add(c.beta_deg, PQ{1, -1});
    out.check_p_min = c.check_p_min;
    out.check_p_max = (c.check_p_max == INT_MAX) ? INT_MAX : c.check_p_max - 1;

    // D' = im(alpha), presented inside the old coordinates.
    std::map<PQ, Subquotient> dsub;
    for (const auto& [pq, g] : c.d_groups) {
        PQ src = sub(pq, c.alpha_deg);
        Subgroup z = image_subgroup(c.alpha_at(src), g);
        Subgroup b(g.coords(), relation_matrix(g));
        dsub.emplace(pq, Subquotient(std::move(z), std::move(b)));
    }

    // E' = ker(d)/im(d) with d = beta∘gamma.
    PQ ddeg = c.diff_deg();
    std::map<PQ, Subquotient> esub;
    for (const auto& [pq, g] : c.e_groups) {
        IntMat d_out = c.diff_at(pq);
        IntMat d_in = c.diff_at(sub(pq, ddeg));
        Subgroup z = kernel_subgroup(d_out, g, c.e_group(add(pq, ddeg)));
        Subgroup b(g.coords(), hcat(d_in, relation_matrix(g)));
        esub.emplace(pq, Subquotient(std::move(z), std::move(b)));
    }

    for (const auto& [pq, sq] : dsub)
        out.d_groups.emplace(pq, sq.group());
    for (const auto& [pq, sq] : esub)
        out.e_groups.emplace(pq, sq.group());

    auto d_at = [&](PQ pq) -> const Subquotient* {
        auto it = dsub.find(pq);
        return it == dsub.end() ? nullptr : &it->second;
    };
    auto e_at = [&](PQ pq) -> const Subquotient* {
        auto it = esub.find(pq);
        return it == esub.end() ? nullptr : &it->second;
    };

    for (const auto& [pq, sq] : dsub) {
        const Subquotient* tgt = d_at(add(pq, out.alpha_deg));
        if (tgt && !(sq.group().trivial() && tgt->group().trivial()))
            out.alpha.emplace(pq, induced_map(c.alpha_at(pq), sq, *tgt));
    }
    for (const auto& [pq, sq] : esub) {
        const Subquotient* tgt = d_at(add(pq, out.gamma_deg));
        if (tgt && !(sq.group().trivial() && tgt->group().trivial()))
            out.gamma.emplace(pq, induced_map(c.gamma_at(pq), sq, *tgt));
    }

    // beta' = beta ∘ alpha^{-1} on D' = im(alpha): divide each generator by
    // alpha modulo the old relations, then push with beta.
    for (const auto& [pq, sq] : dsub) {
        PQ src = sub(pq, c.alpha_deg);
        PQ e_tgt = add(pq, out.beta_deg);  // = src + c.beta_deg
        const Subquotient* tgt = e_at(e_tgt);
        if (!tgt || (sq.group().trivial() && tgt->group().trivial()))
            continue;
        FgAbGroup old = c.d_group(pq);
        IntMat a = c.alpha_at(src);
        IntMat system = hcat(a, relation_matrix(old));
        IntMat b_mat = c.beta_at(src);
        IntMat cols(tgt->group().coords(), sq.group().coords());
        for (Index j = 0; j < sq.group().coords(); ++j) {
            auto x = solve(system, IntVec(sq.section().col(j)));
            if (!x)
                throw Error("derive: generator of im(alpha) escaped the image");
            IntVec pre = x->topRows(a.cols());
            cols.col(j) = tgt->reduce(IntVec(b_mat * pre));
        }
        out.beta.emplace(pq, std::move(cols));
    }

    std::string refail = exactness_failure(out);
    if (!refail.empty())
        throw Error("derive: output is not exact: " + refail);
    return out;
}

ExactCouple couple_from_filtration(const CochainComplex& k, const Filtration& f)
{
    ExactCouple out;
    const int width = f.p_max() - f.p_min() + 1;
    // Columns below p_min repeat H(K); keep enough of them for every
    // derivation up to stabilization to stay inside the stored window.
    const int slack = width + 3;
    const int p_lo = f.p_min() - slack;
    const int p_hi = f.p_max() + 1;
    out.check_p_min = p_lo + 1;

    std::map<int, LevelComplex> levels;
    for (int p = p_lo; p <= p_hi; ++p)
        levels.emplace(p, level_complex(k, f, p));

    // Cohomology of F^p and of Gr^p = F^p / F^{p+1}, both on the basis
    // coordinates of F^p.
    std::map<PQ, Subquotient> dsub, esub;
    std::map<int, CochainComplex> graded;
    for (int p = p_lo; p <= p_hi; ++p) {
        const LevelComplex& lc = levels.at(p);
        std::vector<Index> dims;
        std::vector<IntMat> diffs, rels;
        for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
            size_t i = static_cast<size_t>(n - k.degree_min());
            dims.push_back(lc.complex.dim(n));
            Subgroup next_level = f.level(k, p + 1, n);
            Subgroup pulled = preimage(lc.inclusion[i], sum(next_level, k.relation_span(n)));
            rels.push_back(basis(pulled));
            if (n < k.degree_max())
                diffs.push_back(lc.complex.differential(n));
        }
        graded.emplace(p, CochainComplex(k.degree_min(), std::move(dims), std::move(diffs),
                                         std::move(rels)));
    }

    for (int p = p_lo; p <= p_hi; ++p) {
        for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
            PQ pq{p, n - p};
            dsub.emplace(pq, levels.at(p).complex.cohomology_data(n));
            esub.emplace(pq, graded.at(p).cohomology_data(n));
            out.d_groups.emplace(pq, dsub.at(pq).group());
            out.e_groups.emplace(pq, esub.at(pq).group());
        }
    }

    for (int p = p_lo; p <= p_hi; ++p) {
        for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
            PQ pq{p, n - p};
            size_t i = static_cast<size_t>(n - k.degree_min());
            // alpha: H^n(F^p) -> H^n(F^{p-1}), induced by inclusion
            if (p - 1 >= p_lo) {
                auto x = solve_columns(levels.at(p - 1).inclusion[i], levels.at(p).inclusion[i]);
                if (!x)
                    throw Error("couple: level inclusion failed");
                out.alpha.emplace(pq, induced_map(*x, dsub.at(pq), dsub.at(PQ{p - 1, n - p + 1})));
            }
            // beta: H^n(F^p) -> H^n(Gr^p), induced by the identity on
            // basis coordinates
            {
                Index dim_p = levels.at(p).complex.dim(n);
                out.beta.emplace(pq, induced_map(IntMat::Identity(dim_p, dim_p), dsub.at(pq),
                                                 esub.at(pq)));
            }
            // gamma: H^n(Gr^p) -> H^{n+1}(F^{p+1}), the connecting map;
            // absent maps into the vanishing groups past the top degree
            if (p + 1 <= p_hi && n + 1 <= k.degree_max()) {
                const Subquotient& src = esub.at(pq);
                const Subquotient& tgt = dsub.at(PQ{p + 1, n - p});
                if (!(src.group().trivial() && tgt.group().trivial())) {
                    size_t i1 = i + 1;
                    IntMat cols(tgt.group().coords(), src.group().coords());
                    const LevelComplex& lp = levels.at(p);
                    const LevelComplex& lp1 = levels.at(p + 1);
                    for (Index j = 0; j < src.group().coords(); ++j) {
                        // lift a graded cocycle, apply d, express in F^{p+1}
                        IntVec lifted = lp.complex.differential(n) * src.section().col(j);
                        IntVec ambient = lp.inclusion[i1] * lifted;
                        auto w = solve(lp1.inclusion[i1], ambient);
                        if (!w)
                            throw Error("couple: connecting map left the next level");
                        cols.col(j) = tgt.reduce(*w);
                    }
                    out.gamma.emplace(pq, std::move(cols));
                }
            }
        }
    }

    std::string fail = exactness_failure(out);
    if (!fail.empty())
        throw Error("couple_from_filtration: " + fail);
    return out;
}

std::vector<PageTable> couple_pages(const ExactCouple& c, int r_max)
{
    std::string fail = exactness_failure(c);
    if (!fail.empty())
        throw NotExact(fail);

    std::vector<PageTable> out;
    ExactCouple cur = c;
    for (int r = 1; r <= r_max; ++r) {
        PageTable t;
        t.r = r;
        for (const auto& [pq, g] : cur.e_groups) {
            t.groups.emplace(pq, g);
            t.diffs.emplace(pq, cur.diff_at(pq));
        }
        out.push_back(std::move(t));
        if (r < r_max)
            cur = derive(cur);
    }
    return out;
}

}  // namespace specseq
