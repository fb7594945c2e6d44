#pragma once

#include "hodgekit/filtration.hpp"

#include <json.hpp>

namespace hodgekit {

// Matrix wire format:
//   {"rows": n, "cols": m, "entries": [["p/q", "p/q+r/s i", ...], ...]}
nlohmann::json matrix_to_json(const ExactMatrix &m);
ExactMatrix matrix_from_json(const nlohmann::json &j);

// Filtration wire format:
//   {"dim": n, "direction": "inc"|"dec",
//    "steps": [{"weight": l, "basis": [[entry, ...], ...]}, ...]}
// where each basis is a list of vectors spanning the step.
nlohmann::json filtration_to_json(const Filtration &f);
Filtration filtration_from_json(const nlohmann::json &j);

nlohmann::json subspace_to_json(const Subspace &s);

ExactMatrix matrix_from_file(const std::string &path);
Filtration filtration_from_file(const std::string &path);
void write_json_file(const std::string &path, const nlohmann::json &j);

} // namespace hodgekit
