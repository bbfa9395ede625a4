#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "gcnet/graph.hpp"
#include "gcnet/series.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet {

/// Edge list text: a header line "n <count>" followed by one "j i" line per
/// edge j -> i, 1-based. Blank lines and lines starting with '#' are skipped.
void write_edge_list(std::ostream& out, const DirectedGraph& g);
DirectedGraph read_edge_list(std::istream& in);

/// One row per time step, comma separated, '.' decimal point. With
/// `header`, a first line "x1,...,xn" is written / expected.
void write_series_csv(std::ostream& out, const SeriesMatrix& x, bool header = false);
/// Throws InputError carrying the 1-based row and column of the first
/// malformed cell.
SeriesMatrix read_series_csv(std::istream& in, bool header = false);

/// {"n", "p", "coeffs": [tau][i][j], "noise_vars", "edges": [[j, i], ...]}
/// with 1-based edge endpoints.
nlohmann::json model_to_json(const VarModel& m);
VarModel model_from_json(const nlohmann::json& j);

}  // namespace gcnet
