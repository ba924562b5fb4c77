#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "symmarkov/kernel.hpp"
#include "symmarkov/measure.hpp"

namespace symmarkov::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Network document { "schema": 1, "mu": [..], "triplets": [[i,j,w],..],
/// "allow_diagonal": bool }.  Unknown fields are rejected; the writer
/// emits canonical sorted triplets so round-trips are byte-stable.
json network_to_json(const FiniteSymmetricMeasure& m);
FiniteSymmetricMeasure network_from_json(const json& doc, bool force = false);

/// { "schema": 1, "states": [..] }
json states_to_json(const StateSet& states);
StateSet states_from_json(const json& doc);

/// { "schema": 1, "states": [..], "values": [..] }
struct BoundaryData {
    StateSet states;
    Eigen::VectorXd values;
};
json boundary_to_json(const BoundaryData& b);
BoundaryData boundary_from_json(const json& doc);

/// { "schema": 1, "q": [..] } or { "schema": 1, "r": [[i,j,v],..] }
struct FactorData {
    std::optional<Eigen::VectorXd> q;
    std::optional<std::vector<Triplet>> r;
};
FactorData factor_from_json(const json& doc);

/// Kernel spec document: { "schema": 1, "expr": "..." } or
/// { "schema": 1, "builtin": "...", "params": {..} }, plus optional
/// { "quadrature": { "rule": "gauss"|"midpoint", "points": k } }.
kernels::KernelSpec kernel_from_json(const json& doc);
/// Parses either a bare expression string or a JSON document (detected by
/// a leading '{'); the CLI feeds --kernel through this.
kernels::KernelSpec kernel_from_text_or_json(const std::string& text);

// -- files ----------------------------------------------------------------------

json load_json(const std::string& path);
void save_json(const std::string& path, const json& doc);
void save_text(const std::string& path, const std::string& text);
std::string file_sha256(const std::string& path);

/// Every run that writes outputs also writes a manifest with the tool
/// version, the command line, and input digests.
json make_manifest(const std::string& command, const std::vector<std::string>& args,
                   const std::vector<std::string>& input_paths);

}  // namespace symmarkov::io
