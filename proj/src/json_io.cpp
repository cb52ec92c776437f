#include "reallog/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reallog/error.hpp"

namespace reallog {

namespace {

Eigen::Index read_dimension(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw Error(ErrorCode::InvalidArgument, "expected an object with integer field \"n\"");
  const auto n = j["n"].get<long long>();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "\"n\" must be positive");
  return static_cast<Eigen::Index>(n);
}

// Row-major array of exactly rows * cols finite numbers.
Matrix read_entries(const Json& j, const char* field, Eigen::Index rows, Eigen::Index cols) {
  if (!j.contains(field) || !j[field].is_array())
    throw Error(ErrorCode::InvalidArgument, std::string("expected array field \"") + field + "\"");
  const Json& arr = j[field];
  if (static_cast<Eigen::Index>(arr.size()) != rows * cols)
    throw Error(ErrorCode::LengthMismatch, std::string("\"") + field + "\" has " + std::to_string(arr.size()) +
                                               " entries, expected " + std::to_string(rows * cols));
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = arr[static_cast<std::size_t>(r * cols + c)];
      if (!v.is_number()) throw Error(ErrorCode::NonFiniteEntry, "entry is not a finite number");
      out(r, c) = v.get<double>();
      if (!std::isfinite(out(r, c))) throw Error(ErrorCode::NonFiniteEntry, "entry is not finite");
    }
  return out;
}

Json row_major(const Matrix& a) {
  Json arr = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) arr.push_back(a(r, c));
  return arr;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_into(const Json& j, int indent, int depth, std::ostringstream& os) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << Json(key).dump() << (indent < 0 ? ":" : ": ");
        dump_into(value, indent, depth + 1, os);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      // Numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << (flat && indent >= 0 ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(value, indent, depth + 1, os);
      }
      if (!flat && !j.empty()) newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  require_square(a, "matrix_to_json");
  Json j;
  j["n"] = a.rows();
  j["entries"] = row_major(a);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  const Eigen::Index n = read_dimension(j);
  return read_entries(j, "entries", n, n);
}

Json map_to_json(const MatrixSpaceMap& m) {
  validate(m);
  Json j;
  j["n"] = m.n;
  j["big"] = row_major(m.big);
  return j;
}

MatrixSpaceMap map_from_json(const Json& j) {
  const Eigen::Index n = read_dimension(j);
  return {n, read_entries(j, "big", n * n, n * n)};
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump_into(j, indent, 0, os);
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << dump_json(j) << '\n';
}

}  // namespace reallog
