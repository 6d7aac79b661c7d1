#include <CLI11.hpp>

#include <climits>
#include <iostream>

#include "specseq/io.hpp"

using namespace specseq;
using io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Options {
    std::string coefficients = "z";
    std::string format = "table";

    bool rational() const { return coefficients == "q"; }
    bool records() const { return format == "records"; }
};

void add_common(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--coefficients", opt.coefficients, "coefficient ring")
        ->check(CLI::IsMember({"z", "q"}));
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"table", "records"}));
}

std::string render_group(const FgAbGroup& g, bool rational)
{
    if (!rational)
        return g.str();
    FgAbGroup free;
    free.rank = g.rank;
    return free.str();
}

json group_json(const FgAbGroup& g, bool rational) { return io::emit_group(g, rational); }

json table_json(const std::map<PQ, FgAbGroup>& table, bool rational)
{
    json out = json::array();
    for (const auto& [pq, g] : table) {
        if (g.trivial())
            continue;
        out.push_back(json{{"p", pq.first}, {"q", pq.second}, {"group", group_json(g, rational)}});
    }
    return out;
}

void print_table(std::ostream& os, const std::string& name, const std::map<PQ, FgAbGroup>& table,
                 bool rational)
{
    os << name << ":\n";
    bool any = false;
    for (const auto& [pq, g] : table) {
        if (g.trivial() || (rational && g.rank == 0))
            continue;
        os << "  (" << pq.first << "," << pq.second << ")  " << render_group(g, rational) << "\n";
        any = true;
    }
    if (!any)
        os << "  (empty)\n";
}

json page_json(const PageTable& t, bool rational)
{
    json diffs = json::array();
    for (const auto& [pq, m] : t.diffs) {
        PQ tgt{pq.first + t.r, pq.second - t.r + 1};
        Index r = hom_rank(m, t.group(pq), t.group(tgt));
        if (t.group(pq).trivial() && t.group(tgt).trivial())
            continue;
        diffs.push_back(json{{"p", pq.first}, {"q", pq.second}, {"rank", r}});
    }
    return json{{"r", t.r}, {"entries", table_json(t.groups, rational)},
                {"differentials", std::move(diffs)}};
}

void print_page(std::ostream& os, const PageTable& t, bool rational)
{
    os << "E_" << t.r << ":\n";
    bool any = false;
    for (const auto& [pq, g] : t.groups) {
        if (g.trivial() || (rational && g.rank == 0))
            continue;
        any = true;
        os << "  (" << pq.first << "," << pq.second << ")  " << render_group(g, rational);
        auto it = t.diffs.find(pq);
        if (it != t.diffs.end()) {
            PQ tgt{pq.first + t.r, pq.second - t.r + 1};
            Index rk = hom_rank(it->second, g, t.group(tgt));
            if (rk > 0)
                os << "   d_" << t.r << " rank " << rk;
        }
        os << "\n";
    }
    if (!any)
        os << "  (empty)\n";
}

int cmd_cohomology(const std::string& space_path, const std::string& sheaf_path,
                   const Options& opt)
{
    CellComplex x = io::parse_cell_complex(io::load_json_file(io::resolve_path(space_path)));
    CellularSheaf f = io::parse_cellular_sheaf(io::load_json_file(io::resolve_path(sheaf_path)), x);
    SheafCochains c = cochain_complex(x, f);

    if (opt.records()) {
        json rows = json::array();
        for (int n = c.complex.degree_min(); n <= c.complex.degree_max(); ++n)
            rows.push_back(json{{"degree", n},
                                {"group", group_json(c.complex.cohomology(n), opt.rational())}});
        std::cout << json{{"command", "cohomology"},
                          {"coefficients", opt.coefficients},
                          {"rows", std::move(rows)}}
                         .dump(2)
                  << "\n";
        return kExitPass;
    }
    if (x.size() == 0) {
        std::cout << "(empty complex)\n";
        return kExitPass;
    }
    for (int n = c.complex.degree_min(); n <= c.complex.degree_max(); ++n) {
        FgAbGroup g = c.complex.cohomology(n);
        std::cout << "H^" << n << "  rank " << g.rank << "  torsion [";
        bool first = true;
        if (!opt.rational())
            for (const Int& t : g.torsion) {
                std::cout << (first ? "" : ", ") << t.str();
                first = false;
            }
        std::cout << "]  " << render_group(g, opt.rational()) << "\n";
    }
    return kExitPass;
}

std::vector<PageTable> pages_up_to(const CochainComplex& k, const Filtration& f, int r_max)
{
    std::vector<PageTable> out;
    for (int r = 1; r <= r_max; ++r)
        out.push_back(table_of(page(k, f, r)));
    return out;
}

int cmd_pages(const std::string& complex_path, const std::string& filt_path, int r_max,
              const Options& opt)
{
    CochainComplex k = io::parse_cochain_complex(io::load_json_file(io::resolve_path(complex_path)));
    Filtration f = io::parse_filtration(io::load_json_file(io::resolve_path(filt_path)), k);
    if (r_max <= 0)
        r_max = stabilization_index(f);
    auto pages = pages_up_to(k, f, r_max);

    if (opt.records()) {
        json body = json::array();
        for (const PageTable& t : pages)
            body.push_back(page_json(t, opt.rational()));
        std::cout << json{{"command", "pages"},
                          {"coefficients", opt.coefficients},
                          {"pages", std::move(body)}}
                         .dump(2)
                  << "\n";
        return kExitPass;
    }
    for (const PageTable& t : pages)
        print_page(std::cout, t, opt.rational());
    return kExitPass;
}

int cmd_couple(const std::string& complex_path, const std::string& filt_path, int r_max,
               const Options& opt)
{
    CochainComplex k = io::parse_cochain_complex(io::load_json_file(io::resolve_path(complex_path)));
    Filtration f = io::parse_filtration(io::load_json_file(io::resolve_path(filt_path)), k);
    if (r_max <= 0)
        r_max = stabilization_index(f);
    ExactCouple c = couple_from_filtration(k, f);
    auto pages = couple_pages(c, r_max);

    // report only the honest window of the underlying filtration
    for (PageTable& t : pages) {
        std::map<PQ, FgAbGroup> trimmed;
        for (const auto& [pq, g] : t.groups)
            if (pq.first >= f.p_min() && pq.first <= f.p_max())
                trimmed.emplace(pq, g);
        t.groups = std::move(trimmed);
    }

    if (opt.records()) {
        json body = json::array();
        for (const PageTable& t : pages)
            body.push_back(page_json(t, opt.rational()));
        std::cout << json{{"command", "couple"},
                          {"coefficients", opt.coefficients},
                          {"pages", std::move(body)}}
                         .dump(2)
                  << "\n";
        return kExitPass;
    }
    for (const PageTable& t : pages)
        print_page(std::cout, t, opt.rational());
    return kExitPass;
}

int cmd_verify_dec(const std::string& complex_path, const std::string& filt_path, int r_max,
                   const Options& opt)
{
    CochainComplex k = io::parse_cochain_complex(io::load_json_file(io::resolve_path(complex_path)));
    Filtration f = io::parse_filtration(io::load_json_file(io::resolve_path(filt_path)), k);
    if (r_max <= 0)
        r_max = stabilization_index(f);
    DecShiftReport rep = verify_dec_shift(k, f, r_max, opt.rational());

    if (opt.records()) {
        json body{{"command", "verify-dec"},
                  {"coefficients", opt.coefficients},
                  {"r_max", r_max},
                  {"pass", rep.pass}};
        if (!rep.pass)
            body["counterexample"] = json{{"r", rep.r}, {"p", rep.at.first}, {"q", rep.at.second},
                                          {"what", rep.what}};
        std::cout << body.dump(2) << "\n";
    }
    else if (rep.pass) {
        std::cout << "PASS: shifted-filtration pages match through r = " << r_max << "\n";
    }
    else {
        std::cout << "FAIL at r = " << rep.r << ", (p,q) = (" << rep.at.first << ","
                  << rep.at.second << "): " << rep.what << "\n";
    }
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_leray(const std::string& map_path, const std::string& sheaf_path,
              const std::string& filt_path, int pairs_stage, bool verify, const Options& opt)
{
    io::MapBundle bundle = io::load_map_bundle(map_path);
    CellularMap f(*bundle.source, *bundle.target, bundle.assignment);
    CellularSheaf sheaf =
        io::parse_cellular_sheaf(io::load_json_file(io::resolve_path(sheaf_path)), *bundle.source);
    FilteredSpace yf =
        io::parse_space_filtration(io::load_json_file(io::resolve_path(filt_path)), *bundle.target);

    if (pairs_stage != INT_MIN) {
        std::vector<bool> tilde = yf.stage(pairs_stage);
        PairLerayReport rep = pair_leray(f, tilde, yf, opt.rational());
        if (opt.records()) {
            json body{{"command", "leray"},
                      {"coefficients", opt.coefficients},
                      {"pairs_stage", pairs_stage},
                      {"pass", rep.pass},
                      {"exchange_ok", rep.exchange_ok},
                      {"e2", table_json(rep.pair_e2, opt.rational())},
                      {"einf", table_json(rep.einf, opt.rational())},
                      {"mismatches", rep.mismatches}};
            json rel = json::array();
            for (const auto& [n, g] : rep.relative_h)
                rel.push_back(json{{"degree", n}, {"group", group_json(g, opt.rational())}});
            body["relative_cohomology"] = std::move(rel);
            std::cout << body.dump(2) << "\n";
        }
        else {
            print_table(std::cout, "pair Leray E_2", rep.pair_e2, opt.rational());
            std::cout << "relative cohomology:\n";
            for (const auto& [n, g] : rep.relative_h)
                std::cout << "  H^" << n << "  " << render_group(g, opt.rational()) << "\n";
            std::cout << rep.summary() << "\n";
        }
        return (!verify || rep.pass) ? kExitPass : kExitFail;
    }

    LerayReport rep = compare_leray(f, sheaf, yf, opt.rational());
    if (opt.records()) {
        json pages = json::array();
        for (const PageTable& t : rep.pages)
            pages.push_back(page_json(t, opt.rational()));
        json ab = json::array();
        for (const auto& [n, g] : rep.abutment_h)
            ab.push_back(json{{"degree", n}, {"group", group_json(g, opt.rational())}});
        std::cout << json{{"command", "leray"},
                          {"coefficients", opt.coefficients},
                          {"pass", rep.pass},
                          {"e2", table_json(rep.leray, opt.rational())},
                          {"pages", std::move(pages)},
                          {"abutment", std::move(ab)},
                          {"einf", table_json(rep.einf, opt.rational())},
                          {"mismatches", rep.mismatches}}
                         .dump(2)
                  << "\n";
    }
    else {
        print_table(std::cout, "Leray E_2 (H^p of R^q)", rep.leray, opt.rational());
        for (const PageTable& t : rep.pages)
            print_page(std::cout, t, opt.rational());
        std::cout << "abutment:\n";
        for (const auto& [n, g] : rep.abutment_h)
            std::cout << "  H^" << n << "  " << render_group(g, opt.rational()) << "\n";
        std::cout << rep.summary() << "\n";
    }
    return (!verify || rep.pass) ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact spectral sequences of filtered complexes and cellular sheaves"};
    app.require_subcommand(1);

    Options opt;
    std::string space_path, sheaf_path, complex_path, filt_path, map_path;
    int r_max = 0;
    int pairs_stage = INT_MIN;
    bool verify = false;

    CLI::App* coh = app.add_subcommand("cohomology", "sheaf cohomology of a cell complex");
    coh->add_option("space", space_path, "cell complex document")->required();
    coh->add_option("sheaf", sheaf_path, "cellular sheaf document")->required();
    add_common(coh, opt);

    CLI::App* pg = app.add_subcommand("pages", "spectral sequence pages of a filtered complex");
    pg->add_option("complex", complex_path, "cochain complex document")->required();
    pg->add_option("filtration", filt_path, "filtration document")->required();
    pg->add_option("--r-max", r_max, "last page to compute");
    add_common(pg, opt);

    CLI::App* cp = app.add_subcommand("couple", "pages through the exact couple of a filtration");
    cp->add_option("complex", complex_path, "cochain complex document")->required();
    cp->add_option("filtration", filt_path, "filtration document")->required();
    cp->add_option("--r-max", r_max, "last page to compute");
    add_common(cp, opt);

    CLI::App* vd = app.add_subcommand("verify-dec", "check the shifted-filtration reindexing");
    vd->add_option("complex", complex_path, "cochain complex document")->required();
    vd->add_option("filtration", filt_path, "filtration document")->required();
    vd->add_option("--r-max", r_max, "last page to compare");
    add_common(vd, opt);

    CLI::App* lr = app.add_subcommand("leray", "higher direct images and the Leray comparison");
    lr->add_option("map", map_path, "cellular map document")->required();
    lr->add_option("sheaf", sheaf_path, "sheaf document on the source")->required();
    lr->add_option("filtration", filt_path, "space filtration document on the target")->required();
    lr->add_option("--pairs", pairs_stage, "relative version against this filtration stage");
    lr->add_flag("--verify", verify, "exit nonzero if the comparison fails");
    add_common(lr, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (coh->parsed())
            return cmd_cohomology(space_path, sheaf_path, opt);
        if (pg->parsed())
            return cmd_pages(complex_path, filt_path, r_max, opt);
        if (cp->parsed())
            return cmd_couple(complex_path, filt_path, r_max, opt);
        if (vd->parsed())
            return cmd_verify_dec(complex_path, filt_path, r_max, opt);
        if (lr->parsed())
            return cmd_leray(map_path, sheaf_path, filt_path, pairs_stage, verify, opt);
    }
    catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
