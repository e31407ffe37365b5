#pragma once

// JSON ingestion and emission for family specs and operator files.

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "bfcone/families.hpp"

namespace bfcone {

using json = nlohmann::ordered_json;

/// Throws InvalidInput on schema errors (unknown keys included).
FamilySpec spec_from_json(const json& j);
json spec_to_json(const FamilySpec& spec);

struct OperatorFile {
  int mdim = 2;
  Eigen::MatrixXcd matrix;
};

/// {"mdim": m, "matrix": rows of entries, each a number or [re, im]}.
OperatorFile operator_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXcd& m);

/// Reads and parses a JSON file; InvalidInput on I/O or syntax errors.
json read_json_file(const std::string& path);

}  // namespace bfcone
