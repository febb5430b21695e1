#pragma once

// JSON cone description format:
//   {"name": str, "partition": [n_1, ..., n_r],
//    "blocks": [{"l": int, "k": int, "basis": [[row-major floats], ...]}]}
// Indices are 1-based with l > k; an omitted (l,k) means V_lk = {0}.

#include <nlohmann/json.hpp>

#include <string>

#include "homocone/cone_model.hpp"

namespace homocone {

ConePtr cone_from_json(const nlohmann::json& j, const Tolerances& tol = default_tolerances());
nlohmann::json cone_to_json(const ConeStructure& c);

ConePtr load_cone_file(const std::string& path, const Tolerances& tol = default_tolerances());
void save_cone_file(const ConeStructure& c, const std::string& path);

}  // namespace homocone
