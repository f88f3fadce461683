#pragma once

#include "sepsdp/decomp.hpp"
#include "sepsdp/gamma.hpp"
#include "sepsdp/hierarchy.hpp"
#include "sepsdp/matrix_io.hpp"
#include "sepsdp/posmap.hpp"

#include <json.hpp>

#include <string>

namespace sepsdp {

// Report documents are JSON objects rendered by dump_json. Wall-clock time lives
// under "timing" only, so two runs of the same config differ nowhere else.

nlohmann::json to_json(const SdpOutcome& out);
nlohmann::json to_json(const ExtensionChecks& c);
nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const DecompositionReport& r);
nlohmann::json to_json(const PositivityReport& r);
nlohmann::json to_json(const GammaBracket& b);

// Witness as a shared-format operator file; provenance numbers ride as annotations.
MatrixFile witness_file(const Witness& w);
// Map as its defining operator with the direction annotation.
MatrixFile map_file(const LinearMap& m, const std::string& direction);

// 64-bit FNV-1a of the compact config dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);
// Writes {"config", "report"} to <dir>/<prefix>-<hash>.json and returns the path.
std::string write_report(const std::string& dir, const std::string& prefix, const nlohmann::json& config,
                         const nlohmann::json& report);

}  // namespace sepsdp
