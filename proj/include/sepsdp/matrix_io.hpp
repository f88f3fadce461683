#pragma once

#include "sepsdp/qlinalg.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace sepsdp {

// Malformed input; field() names the offending document field.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class MatrixKind { State, Operator };

struct MatrixFile {
  std::vector<int> dims;
  MatrixKind kind = MatrixKind::Operator;
  CMatrix matrix;
  // Extra top-level fields (e.g. "direction" for maps) carried through verbatim.
  nlohmann::json annotations = nlohmann::json::object();
};

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& entries, Index n, const std::string& field);

nlohmann::json to_json(const MatrixFile& f);
MatrixFile matrix_file_from_json(const nlohmann::json& doc);

std::string dump_matrix_file(const MatrixFile& f);
MatrixFile parse_matrix_file(const std::string& text);

void write_matrix_file(const std::string& path, const MatrixFile& f);
MatrixFile read_matrix_file(const std::string& path);

// 17-significant-digit rendering used by every writer.
std::string format_double(double v);
// Serializes with doubles printed via format_double.
std::string dump_json(const nlohmann::json& doc, int indent = 1);

}  // namespace sepsdp
