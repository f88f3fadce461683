#include "sepsdp/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sepsdp {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e308" : "-1e308";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognizable as floats on re-read.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

void dump_rec(const json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_rec(it.value(), os, indent, depth + 1);
      }
      os << nl << pad_close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j)
        if (e.is_structured() && !(e.is_array() && e.size() <= 2 && e.size() > 0 && e[0].is_number())) flat = false;
      if (flat) {
        os << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) os << ",";
          dump_rec(j[i], os, 0, 0);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << "," << nl;
        os << pad;
        dump_rec(j[i], os, indent, depth + 1);
      }
      os << nl << pad_close << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const json& doc, int indent) {
  std::ostringstream os;
  dump_rec(doc, os, indent, 0);
  os << "\n";
  return os.str();
}

json matrix_to_json(const CMatrix& m) {
  json entries = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) entries.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return entries;
}

CMatrix matrix_from_json(const json& entries, Index n, const std::string& field) {
  if (!entries.is_array()) throw FormatError(field, "expected an array of [re, im] pairs");
  if (static_cast<Index>(entries.size()) != n * n)
    throw FormatError(field, "expected " + std::to_string(n * n) + " entries, found " +
                                 std::to_string(entries.size()));
  CMatrix m(n, n);
  for (Index i = 0; i < n * n; ++i) {
    const json& e = entries[static_cast<size_t>(i)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw FormatError(field, "entry " + std::to_string(i) + " is not a [re, im] pair of numbers");
    m(i / n, i % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

json to_json(const MatrixFile& f) {
  json doc = f.annotations.is_object() ? f.annotations : json::object();
  doc["dims"] = f.dims;
  doc["kind"] = f.kind == MatrixKind::State ? "state" : "operator";
  doc["entries"] = matrix_to_json(f.matrix);
  return doc;
}

MatrixFile matrix_file_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("document", "expected a JSON object");
  MatrixFile f;
  if (!doc.contains("dims")) throw FormatError("dims", "missing");
  const json& dims = doc["dims"];
  if (!dims.is_array() || dims.empty()) throw FormatError("dims", "expected a non-empty list of integers");
  Index n = 1;
  for (const auto& d : dims) {
    if (!d.is_number_integer() || d.get<long long>() < 2)
      throw FormatError("dims", "every local dimension must be an integer >= 2");
    f.dims.push_back(d.get<int>());
    n *= f.dims.back();
  }
  if (!doc.contains("kind")) throw FormatError("kind", "missing");
  if (!doc["kind"].is_string()) throw FormatError("kind", "expected \"state\" or \"operator\"");
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "state")
    f.kind = MatrixKind::State;
  else if (kind == "operator")
    f.kind = MatrixKind::Operator;
  else
    throw FormatError("kind", "expected \"state\" or \"operator\", found \"" + kind + "\"");
  if (!doc.contains("entries")) throw FormatError("entries", "missing");
  f.matrix = matrix_from_json(doc["entries"], n, "entries");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "dims" && it.key() != "kind" && it.key() != "entries") f.annotations[it.key()] = it.value();
  return f;
}

std::string dump_matrix_file(const MatrixFile& f) {
  return dump_json(to_json(f));
}

MatrixFile parse_matrix_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("document", std::string("not valid JSON (") + e.what() + ")");
  }
  return matrix_file_from_json(doc);
}

void write_matrix_file(const std::string& path, const MatrixFile& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << dump_matrix_file(f);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("path", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_file(ss.str());
}

}  // namespace sepsdp
