#include "specseq/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace specseq::io {

namespace fs = std::filesystem;

Int parse_int(const json& v)
{
    if (v.is_number_integer())
        return Int(v.get<long long>());
    if (v.is_string())
        return Int(v.get<std::string>());
    throw ParseError("expected an integer (number or decimal string), got " + v.dump());
}

json emit_int(const Int& x)
{
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
        return x.convert_to<long long>();
    return x.str();
}

IntMat parse_matrix(const json& v)
{
    if (!v.is_object() || !v.contains("rows") || !v.contains("cols") || !v.contains("data"))
        throw ParseError("matrix documents need rows, cols and data fields");
    Index rows = v.at("rows").get<Index>();
    Index cols = v.at("cols").get<Index>();
    const json& data = v.at("data");
    if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols)
        throw ParseError("matrix data length does not match rows*cols");
    IntMat m(rows, cols);
    Index at = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = parse_int(data[static_cast<size_t>(at++)]);
    return m;
}

json emit_matrix(const IntMat& m)
{
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            data.push_back(emit_int(m(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

FgAbGroup parse_group(const json& v)
{
    FgAbGroup g;
    g.rank = v.at("rank").get<Index>();
    for (const json& t : v.at("torsion"))
        g.torsion.push_back(parse_int(t));
    return g;
}

json emit_group(const FgAbGroup& g, bool rational)
{
    json torsion = json::array();
    if (!rational)
        for (const Int& t : g.torsion)
            torsion.push_back(emit_int(t));
    return json{{"rank", g.rank}, {"torsion", std::move(torsion)}};
}

CellComplex parse_cell_complex(const json& doc)
{
    if (!doc.contains("cells"))
        throw ParseError("cell complex document has no cells field");
    std::vector<CellSpec> cells;
    for (const json& c : doc.at("cells")) {
        CellSpec spec;
        spec.id = c.at("id").get<std::string>();
        spec.dim = c.at("dim").get<int>();
        if (c.contains("faces"))
            for (const json& f : c.at("faces"))
                spec.faces.emplace_back(f.at("id").get<std::string>(), parse_int(f.at("sign")));
        cells.push_back(std::move(spec));
    }
    return CellComplex(cells);
}

json serialize_cell_complex(const CellComplex& x)
{
    json cells = json::array();
    for (Index c = 0; c < x.size(); ++c) {
        json faces = json::array();
        for (const auto& [f, sign] : x.faces(c))
            faces.push_back(json{{"id", x.cell_id(f)}, {"sign", emit_int(sign)}});
        cells.push_back(
            json{{"id", x.cell_id(c)}, {"dim", x.cell_dim(c)}, {"faces", std::move(faces)}});
    }
    return json{{"type", "cell_complex"}, {"cells", std::move(cells)}};
}

CellularSheaf parse_cellular_sheaf(const json& doc, const CellComplex& x)
{
    if (doc.contains("constant"))
        return CellularSheaf::constant(x, doc.at("constant").get<Index>());

    std::vector<Stalk> stalks(static_cast<size_t>(x.size()), Stalk(0));
    if (doc.contains("stalks")) {
        for (const auto& [id, body] : doc.at("stalks").items()) {
            Index c = x.index_of(id);
            Index gens = body.at("gens").get<Index>();
            IntMat rel =
                body.contains("relations") ? parse_matrix(body.at("relations")) : IntMat(gens, 0);
            stalks[static_cast<size_t>(c)] = Stalk(gens, std::move(rel));
        }
    }
    std::map<std::pair<Index, Index>, IntMat> restr;
    if (doc.contains("restrictions")) {
        for (const auto& [key, body] : doc.at("restrictions").items()) {
            auto arrow = key.find("->");
            if (arrow == std::string::npos)
                throw ParseError("restriction key '" + key + "' is not of the form 'a->b'");
            Index a = x.index_of(key.substr(0, arrow));
            Index b = x.index_of(key.substr(arrow + 2));
            restr.emplace(std::make_pair(a, b), parse_matrix(body));
        }
    }
    return CellularSheaf(x, std::move(stalks), std::move(restr));
}

json serialize_cellular_sheaf(const CellularSheaf& f)
{
    const CellComplex& x = f.space();
    json stalks = json::object();
    for (Index c = 0; c < x.size(); ++c) {
        const Stalk& s = f.stalk(c);
        json body{{"gens", s.gens}};
        if (s.relations.cols() > 0)
            body["relations"] = emit_matrix(s.relations);
        stalks[x.cell_id(c)] = std::move(body);
    }
    json restr = json::object();
    for (Index c = 0; c < x.size(); ++c)
        for (const auto& [cf, sign] : x.cofaces(c)) {
            (void)sign;
            if (f.stalk(c).gens == 0 || f.stalk(cf).gens == 0)
                continue;
            restr[x.cell_id(c) + "->" + x.cell_id(cf)] = emit_matrix(f.restriction(c, cf));
        }
    return json{{"type", "cellular_sheaf"}, {"stalks", std::move(stalks)},
                {"restrictions", std::move(restr)}};
}

FilteredSpace parse_space_filtration(const json& doc, const CellComplex& x)
{
    if (doc.contains("skeleta") && doc.at("skeleta").get<bool>())
        return FilteredSpace::skeleta(x);
    if (!doc.contains("levels"))
        throw ParseError("space filtration document needs levels (or skeleta: true)");
    std::map<std::string, int> levels;
    for (const auto& [id, lvl] : doc.at("levels").items())
        levels[id] = lvl.get<int>();
    return FilteredSpace::from_levels(x, levels);
}

json serialize_space_filtration(const FilteredSpace& yf)
{
    const CellComplex& x = yf.space();
    json levels = json::object();
    for (Index c = 0; c < x.size(); ++c) {
        int lvl = 0;
        while (!yf.stage(lvl)[static_cast<size_t>(c)])
            ++lvl;
        levels[x.cell_id(c)] = lvl;
    }
    return json{{"type", "space_filtration"}, {"levels", std::move(levels)}};
}

CochainComplex parse_cochain_complex(const json& doc)
{
    int degree_min = doc.contains("degree_min") ? doc.at("degree_min").get<int>() : 0;
    std::vector<Index> dims;
    for (const json& d : doc.at("dims"))
        dims.push_back(d.get<Index>());
    std::vector<IntMat> diffs;
    if (doc.contains("differentials"))
        for (const json& m : doc.at("differentials"))
            diffs.push_back(parse_matrix(m));
    std::vector<IntMat> rels;
    if (doc.contains("relations")) {
        size_t i = 0;
        for (const json& m : doc.at("relations")) {
            Index rows = (i < dims.size()) ? dims[i] : 0;
            rels.push_back(m.is_null() ? IntMat(rows, 0) : parse_matrix(m));
            ++i;
        }
    }
    return CochainComplex(degree_min, std::move(dims), std::move(diffs), std::move(rels));
}

json serialize_cochain_complex(const CochainComplex& k)
{
    json dims = json::array();
    json diffs = json::array();
    json rels = json::array();
    bool any_rel = false;
    for (int n = k.degree_min(); n <= k.degree_max(); ++n) {
        dims.push_back(k.dim(n));
        if (n < k.degree_max())
            diffs.push_back(emit_matrix(k.differential(n)));
        IntMat r = k.relation_gens(n);
        if (r.cols() > 0)
            any_rel = true;
        rels.push_back(emit_matrix(r));
    }
    json out{{"type", "cochain_complex"},
             {"degree_min", k.degree_min()},
             {"dims", std::move(dims)},
             {"differentials", std::move(diffs)}};
    if (any_rel)
        out["relations"] = std::move(rels);
    return out;
}

Filtration parse_filtration(const json& doc, const CochainComplex& k)
{
    int p_min = doc.contains("p_min") ? doc.at("p_min").get<int>() : 0;
    std::vector<std::vector<IntMat>> levels;
    for (const json& row : doc.at("levels")) {
        std::vector<IntMat> lvl;
        for (const json& m : row)
            lvl.push_back(m.is_null() ? IntMat() : parse_matrix(m));
        levels.push_back(std::move(lvl));
    }
    return Filtration(k, p_min, std::move(levels));
}

json serialize_filtration(const CochainComplex& k, const Filtration& f)
{
    json levels = json::array();
    for (int p = f.p_min(); p <= f.p_max(); ++p) {
        json row = json::array();
        for (int n = k.degree_min(); n <= k.degree_max(); ++n)
            row.push_back(emit_matrix(f.level(k, p, n).gens));
        levels.push_back(std::move(row));
    }
    return json{{"type", "filtration"}, {"p_min", f.p_min()}, {"levels", std::move(levels)}};
}

json serialize_cellular_map(const CellularMap& f, const std::string& source_path,
                            const std::string& target_path)
{
    json assign = json::object();
    for (Index c = 0; c < f.source().size(); ++c)
        assign[f.source().cell_id(c)] = f.target().cell_id(f.apply(c));
    return json{{"type", "cellular_map"},
                {"source", source_path},
                {"target", target_path},
                {"assignment", std::move(assign)}};
}

std::string resolve_path(const std::string& path, const std::string& relative_to)
{
    if (fs::exists(path))
        return path;
    if (!relative_to.empty()) {
        fs::path joined = fs::path(relative_to) / path;
        if (fs::exists(joined))
            return joined.string();
    }
    if (const char* root = std::getenv("SPECSEQ_FIXTURES")) {
        fs::path joined = fs::path(root) / path;
        if (fs::exists(joined))
            return joined.string();
    }
    throw ParseError("input file not found: " + path);
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open input file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    }
    catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return doc;
}

MapBundle load_map_bundle(const std::string& map_path)
{
    std::string resolved = resolve_path(map_path);
    json doc = load_json_file(resolved);
    std::string dir = fs::path(resolved).parent_path().string();
    MapBundle out;
    out.source = std::make_unique<CellComplex>(
        parse_cell_complex(load_json_file(resolve_path(doc.at("source").get<std::string>(), dir))));
    out.target = std::make_unique<CellComplex>(
        parse_cell_complex(load_json_file(resolve_path(doc.at("target").get<std::string>(), dir))));
    out.assignment.assign(static_cast<size_t>(out.source->size()), 0);
    const json& assign = doc.at("assignment");
    for (Index c = 0; c < out.source->size(); ++c) {
        const std::string& id = out.source->cell_id(c);
        if (!assign.contains(id))
            throw ParseError("cellular map: no image for cell '" + id + "'");
        out.assignment[static_cast<size_t>(c)] =
            out.target->index_of(assign.at(id).get<std::string>());
    }
    return out;
}

}  // namespace specseq::io
