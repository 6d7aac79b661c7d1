#pragma once

#include <json.hpp>

#include <memory>
#include <string>

#include "specseq/leray.hpp"

namespace specseq::io {

// insertion-ordered documents keep emitted output deterministic
using json = nlohmann::ordered_json;

// Integers are emitted as JSON numbers when they fit in 64 bits and as
// decimal strings otherwise; both forms parse.
Int parse_int(const json& v);
json emit_int(const Int& x);

// {"rows": r, "cols": c, "data": [row-major entries]}
IntMat parse_matrix(const json& v);
json emit_matrix(const IntMat& m);

// {"rank": r, "torsion": [t_1, t_2, ...]}
FgAbGroup parse_group(const json& v);
json emit_group(const FgAbGroup& g, bool rational = false);

// document schemas (one document per object)
CellComplex parse_cell_complex(const json& doc);
json serialize_cell_complex(const CellComplex& x);

CellularSheaf parse_cellular_sheaf(const json& doc, const CellComplex& x);
json serialize_cellular_sheaf(const CellularSheaf& f);

FilteredSpace parse_space_filtration(const json& doc, const CellComplex& x);
json serialize_space_filtration(const FilteredSpace& yf);

CochainComplex parse_cochain_complex(const json& doc);
json serialize_cochain_complex(const CochainComplex& k);

Filtration parse_filtration(const json& doc, const CochainComplex& k);
json serialize_filtration(const CochainComplex& k, const Filtration& f);

json serialize_cellular_map(const CellularMap& f, const std::string& source_path,
                            const std::string& target_path);

// file handling; missing relative paths are retried against the directory
// named by SPECSEQ_FIXTURES
json load_json_file(const std::string& path);
std::string resolve_path(const std::string& path, const std::string& relative_to = {});

struct MapBundle {
    std::unique_ptr<CellComplex> source;
    std::unique_ptr<CellComplex> target;
    std::vector<Index> assignment;
};

// map documents reference their complexes by path (resolved relative to the
// map file's own directory)
MapBundle load_map_bundle(const std::string& map_path);

}  // namespace specseq::io
